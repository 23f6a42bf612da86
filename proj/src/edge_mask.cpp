// Copyright 2026 The bframe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "bframe/edge_mask.hpp"

#include "bframe/render.hpp"

#include <cmath>

namespace bframe {
namespace {

template <class Image>
double energy_of(const Image& u, const ImageBuffer& ref, double lambda) {
  const int w = ref.width, h = ref.height, ch = ref.channels;
  double smooth = 0.0, fidelity = 0.0;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      for (int c = 0; c < ch; ++c) {
        const std::size_t k = ref.index(x, y, c);
        const double v = u[k];
        if (x + 1 < w) {
          const double dx = u[ref.index(x + 1, y, c)] - v;
          smooth += dx * dx;
        }
        if (y + 1 < h) {
          const double dy = u[ref.index(x, y + 1, c)] - v;
          smooth += dy * dy;
        }
        const double r = v - ref.data[k];
        fidelity += r * r;
      }
    }
  }
  return smooth + lambda * fidelity;
}

// Mirror index without repeating the border sample: -1 -> 1, n -> n-2.
int mirror(int i, int n) {
  if (i < 0) return -i;
  if (i >= n) return 2 * n - 2 - i;
  return i;
}

}  // namespace

double smoothing_energy(const ImageBuffer& u, const ImageBuffer& image, double lambda) {
  if (!u.same_shape(image)) throw Error("dimension_mismatch", "energy of mismatched images");
  return energy_of(u.data, image, lambda);
}

ImageBuffer tv_denoise(const ImageBuffer& image, double lambda, int iterations,
                       std::vector<double>* energies) {
  if (!(lambda > 0.0)) throw Error("invalid_argument", "lambda must be positive");
  if (iterations < 1) throw Error("invalid_argument", "iterations must be at least 1");
  for (float v : image.data) {
    if (!std::isfinite(v)) throw Error("invalid_argument", "image has non-finite pixels");
  }
  const int w = image.width, h = image.height, ch = image.channels;
  const double step = 0.2 / (4.0 + lambda);
  std::vector<double> u(image.data.begin(), image.data.end());
  std::vector<double> next(u.size());
  if (energies) {
    energies->clear();
    energies->push_back(energy_of(u, image, lambda));
  }
  for (int it = 0; it < iterations; ++it) {
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        for (int c = 0; c < ch; ++c) {
          const std::size_t k = image.index(x, y, c);
          double lap = 0.0;
          if (x > 0) lap += u[image.index(x - 1, y, c)] - u[k];
          if (x + 1 < w) lap += u[image.index(x + 1, y, c)] - u[k];
          if (y > 0) lap += u[image.index(x, y - 1, c)] - u[k];
          if (y + 1 < h) lap += u[image.index(x, y + 1, c)] - u[k];
          const double grad = -2.0 * lap + 2.0 * lambda * (u[k] - image.data[k]);
          next[k] = u[k] - step * grad;
        }
      }
    }
    u.swap(next);
    if (energies) energies->push_back(energy_of(u, image, lambda));
  }
  ImageBuffer out(w, h, ch);
  for (std::size_t k = 0; k < u.size(); ++k) out.data[k] = static_cast<float>(u[k]);
  return out;
}

ImageBuffer gradient_magnitude(const ImageBuffer& image) {
  const int w = image.width, h = image.height, ch = image.channels;
  if (w < 3 || h < 3) throw Error("invalid_argument", "image smaller than 3x3");
  if (ch < 1 || ch > 3) throw Error("invalid_argument", "image must have 1 to 3 channels");
  ImageBuffer out(w, h, 1);
  for (int y = 0; y < h; ++y) {
    const int ym = mirror(y - 1, h), yp = mirror(y + 1, h);
    for (int x = 0; x < w; ++x) {
      const int xm = mirror(x - 1, w), xp = mirror(x + 1, w);
      double sum = 0.0;
      for (int c = 0; c < ch; ++c) {
        const double a = image.at(xm, ym, c), b = image.at(x, ym, c), d = image.at(xp, ym, c);
        const double l = image.at(xm, y, c), r = image.at(xp, y, c);
        const double f = image.at(xm, yp, c), g = image.at(x, yp, c), k = image.at(xp, yp, c);
        const double gx = (d + 2.0 * r + k) - (a + 2.0 * l + f);
        const double gy = (f + 2.0 * g + k) - (a + 2.0 * b + d);
        sum += gx * gx + gy * gy;
      }
      out.at(x, y) = static_cast<float>(std::sqrt(sum));
    }
  }
  return out;
}

EdgeMask threshold_mask(const ImageBuffer& magnitude, double threshold, int view_id) {
  EdgeMask m{view_id, ImageBuffer(magnitude.width, magnitude.height, 1), threshold};
  for (std::size_t k = 0; k < magnitude.pixel_count(); ++k) {
    m.mask.data[k] = magnitude.data[k * magnitude.channels] > threshold ? 1.0f : 0.0f;
  }
  return m;
}

EdgeMask mask_from_normals(const ImageBuffer& normals, int view_id, const PipelineConfig& config) {
  const ImageBuffer smooth = tv_denoise(normals, config.tv_lambda, config.tv_iterations);
  return threshold_mask(gradient_magnitude(smooth), config.edge_threshold, view_id);
}

std::vector<EdgeMask> extract_masks(std::span<const GaussianPrimitive> primitives,
                                    std::span<const CameraView> views,
                                    const PipelineConfig& config) {
  std::vector<EdgeMask> masks;
  masks.reserve(views.size());
  for (const auto& view : views) {
    const RenderMaps maps = render_maps(primitives, view, config);
    masks.push_back(mask_from_normals(maps.normal, view.view_id, config));
  }
  return masks;
}

}  // namespace bframe
