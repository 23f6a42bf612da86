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

#include "bframe/render.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace bframe {

double evaluate_gaussian(const GaussianPrimitive& primitive, const Vec3& x) {
  const Eigen::SelfAdjointEigenSolver<Mat3> eig(primitive.covariance);
  const Vec3 ev = eig.eigenvalues();
  if (!(ev.minCoeff() > 0.0) || ev.maxCoeff() > 1e12 * ev.minCoeff()) {
    throw Error("ill_conditioned",
                "covariance of primitive " + std::to_string(primitive.id) +
                    " is singular or has condition number above 1e12");
  }
  const Vec3 d = x - primitive.center;
  const Vec3 y = primitive.covariance.ldlt().solve(d);
  return std::exp(-0.5 * d.dot(y));
}

std::optional<Splat2D> project_splat(const GaussianPrimitive& primitive,
                                     const CameraView& view, double cutoff_sigmas) {
  const Vec3 xc = view.to_camera(primitive.center);
  if (!(xc.z() > 0.0)) return std::nullopt;
  const double z = xc.z();
  Eigen::Matrix<double, 2, 3> jc;
  jc << view.fx() / z, 0.0, -view.fx() * xc.x() / (z * z),
      0.0, view.fy() / z, -view.fy() * xc.y() / (z * z);
  const Eigen::Matrix<double, 2, 3> j = jc * view.rotation;
  Splat2D s;
  s.center2d = view.project_camera(xc);
  s.cov2d = j * primitive.covariance * j.transpose();
  s.cov2d = 0.5 * (s.cov2d + s.cov2d.transpose());
  s.depth = z;
  s.source_id = primitive.id;
  if (!(s.cov2d(0, 0) > 0.0) || !(s.cov2d.determinant() > 0.0)) return std::nullopt;
  const PixelBox box = footprint_box(s, cutoff_sigmas, view.width, view.height);
  if (box.x0 > box.x1 || box.y0 > box.y1) return std::nullopt;
  return s;
}

PixelBox footprint_box(const Splat2D& splat, double cutoff_sigmas, int width, int height) {
  const double rx = cutoff_sigmas * std::sqrt(splat.cov2d(0, 0));
  const double ry = cutoff_sigmas * std::sqrt(splat.cov2d(1, 1));
  const double cx = splat.center2d.x(), cy = splat.center2d.y();
  PixelBox b;
  const double fx0 = std::ceil(cx - rx), fx1 = std::floor(cx + rx);
  const double fy0 = std::ceil(cy - ry), fy1 = std::floor(cy + ry);
  if (!(fx1 >= 0.0 && fy1 >= 0.0 && fx0 <= width - 1 && fy0 <= height - 1)) return b;
  b.x0 = static_cast<int>(std::max(0.0, fx0));
  b.x1 = static_cast<int>(std::min<double>(width - 1, fx1));
  b.y0 = static_cast<int>(std::max(0.0, fy0));
  b.y1 = static_cast<int>(std::min<double>(height - 1, fy1));
  return b;
}

double splat_alpha(const Splat2D& splat, double opacity, const Vec2& pixel) {
  const Vec2 d = pixel - splat.center2d;
  const Mat2& c = splat.cov2d;
  const double det = c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0);
  const double q = (c(1, 1) * d.x() * d.x() - 2.0 * c(0, 1) * d.x() * d.y() +
                    c(0, 0) * d.y() * d.y()) / det;
  return opacity * std::exp(-0.5 * q);
}

Composite composite_pixel(std::span<const Contribution> contributions) {
  Composite out;
  for (std::size_t i = 0; i < contributions.size(); ++i) {
    const Contribution& c = contributions[i];
    if (i > 0 && c.depth < contributions[i - 1].depth) {
      throw Error("unsorted", "contributions must be sorted by ascending depth");
    }
    if (!(c.alpha >= 0.0 && c.alpha <= 1.0)) {
      throw Error("invalid_alpha", "effective alpha outside [0,1]");
    }
    out.value += out.transmittance * c.alpha * c.value;
    out.transmittance *= 1.0 - c.alpha;
  }
  return out;
}

RenderMaps render_maps(std::span<const GaussianPrimitive> primitives, const CameraView& view,
                       const PipelineConfig& config) {
  const int w = view.width, h = view.height;
  RenderMaps out{ImageBuffer(w, h, 3), ImageBuffer(w, h, 3), ImageBuffer(w, h, 1), false};

  struct Item {
    Splat2D splat;
    std::size_t index;
  };
  std::vector<Item> items;
  items.reserve(primitives.size());
  for (std::size_t i = 0; i < primitives.size(); ++i) {
    if (auto s = project_splat(primitives[i], view, config.splat_cutoff_sigmas)) {
      items.push_back({*s, i});
    }
  }
  out.empty_warning = items.empty();
  std::stable_sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
    return a.splat.depth < b.splat.depth;
  });

  const std::size_t n = out.depth.pixel_count();
  std::vector<double> trans(n, 1.0), depth_acc(n, 0.0);
  std::vector<Vec3> color_acc(n, Vec3::Zero()), normal_acc(n, Vec3::Zero());
  for (const Item& it : items) {
    const GaussianPrimitive& p = primitives[it.index];
    const PixelBox b = footprint_box(it.splat, config.splat_cutoff_sigmas, w, h);
    for (int y = b.y0; y <= b.y1; ++y) {
      for (int x = b.x0; x <= b.x1; ++x) {
        const double a = splat_alpha(it.splat, p.opacity, Vec2(x, y));
        if (a < kAlphaFloor) continue;
        const std::size_t k = static_cast<std::size_t>(y) * w + x;
        const double wgt = trans[k] * a;
        color_acc[k] += wgt * p.color;
        normal_acc[k] += wgt * p.normal;
        depth_acc[k] += wgt * it.splat.depth;
        trans[k] *= 1.0 - a;
      }
    }
  }

  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t k = static_cast<std::size_t>(y) * w + x;
      for (int c = 0; c < 3; ++c) out.color.at(x, y, c) = static_cast<float>(color_acc[k][c]);
      const double acc = 1.0 - trans[k];
      if (acc <= kCoverageFloor) continue;
      out.depth.at(x, y) = static_cast<float>(depth_acc[k] / acc);
      const double nn = normal_acc[k].norm();
      if (nn > 0.0) {
        for (int c = 0; c < 3; ++c) out.normal.at(x, y, c) = static_cast<float>(normal_acc[k][c] / nn);
      }
    }
  }
  return out;
}

}  // namespace bframe
