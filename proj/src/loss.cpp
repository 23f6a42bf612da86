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

#include "bframe/loss.hpp"

#include "bframe/io.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>

namespace bframe {
namespace {

constexpr int kRadius = 5;
constexpr double kC1 = 0.01 * 0.01;
constexpr double kC2 = 0.03 * 0.03;

std::array<double, 2 * kRadius + 1> window_1d() {
  std::array<double, 2 * kRadius + 1> g{};
  for (int i = -kRadius; i <= kRadius; ++i) g[i + kRadius] = std::exp(-(i * i) / (2.0 * 1.5 * 1.5));
  return g;
}

void require_same(const ImageBuffer& a, const ImageBuffer& b) {
  if (!a.same_shape(b)) throw Error("dimension_mismatch", "image dimensions differ");
}

void require_mask(const ImageBuffer& img, const EdgeMask& m) {
  if (m.mask.width != img.width || m.mask.height != img.height || m.mask.channels != 1) {
    throw Error("dimension_mismatch", "mask does not match the image");
  }
}

}  // namespace

ImageBuffer ssim_map(const ImageBuffer& a, const ImageBuffer& b, const ImageBuffer* weights) {
  require_same(a, b);
  if (weights && (weights->width != a.width || weights->height != a.height)) {
    throw Error("dimension_mismatch", "weight map does not match the image");
  }
  const int w = a.width, h = a.height, ch = a.channels;
  const auto g = window_1d();
  ImageBuffer out(w, h, 1);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      double sum = 0.0;
      for (int c = 0; c < ch; ++c) {
        double wsum = 0.0, ma = 0.0, mb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
        for (int dy = -kRadius; dy <= kRadius; ++dy) {
          const int yy = y + dy;
          if (yy < 0 || yy >= h) continue;
          for (int dx = -kRadius; dx <= kRadius; ++dx) {
            const int xx = x + dx;
            if (xx < 0 || xx >= w) continue;
            double wt = g[dy + kRadius] * g[dx + kRadius];
            if (weights) {
              wt *= weights->at(xx, yy);
              if (wt == 0.0) continue;
            }
            const double va = a.at(xx, yy, c), vb = b.at(xx, yy, c);
            wsum += wt;
            ma += wt * va;
            mb += wt * vb;
            saa += wt * va * va;
            sbb += wt * vb * vb;
            sab += wt * va * vb;
          }
        }
        if (!(wsum > 0.0)) continue;
        ma /= wsum;
        mb /= wsum;
        const double va = std::max(0.0, saa / wsum - ma * ma);
        const double vb = std::max(0.0, sbb / wsum - mb * mb);
        // Keep |cov| <= sqrt(va vb) after the variance clamp so identical
        // windows score exactly 1.
        const double bound = std::sqrt(va * vb);
        const double cov = std::clamp(sab / wsum - ma * mb, -bound, bound);
        sum += ((2.0 * ma * mb + kC1) * (2.0 * cov + kC2)) /
               ((ma * ma + mb * mb + kC1) * (va + vb + kC2));
      }
      out.at(x, y) = static_cast<float>(sum / ch);
    }
  }
  return out;
}

double baseline_loss(const ImageBuffer& render, const ImageBuffer& gt, double mix) {
  require_same(render, gt);
  if (!(mix >= 0.0 && mix <= 1.0)) throw Error("invalid_argument", "mix must lie in [0,1]");
  if (render.data.empty()) throw Error("invalid_argument", "empty image");
  double l1 = 0.0;
  for (std::size_t k = 0; k < render.data.size(); ++k) {
    l1 += std::abs(double(render.data[k]) - double(gt.data[k]));
  }
  l1 /= static_cast<double>(render.data.size());
  if (mix == 1.0) return l1;
  const ImageBuffer s = ssim_map(render, gt);
  double mean_ssim = 0.0;
  for (float v : s.data) mean_ssim += v;
  mean_ssim /= static_cast<double>(s.data.size());
  return mix * l1 + (1.0 - mix) * (1.0 - mean_ssim);
}

double masked_l1(const ImageBuffer& render, const ImageBuffer& gt, const EdgeMask& mask,
                 double eps) {
  require_same(render, gt);
  require_mask(render, mask);
  double num = 0.0, den = 0.0;
  for (int y = 0; y < render.height; ++y) {
    for (int x = 0; x < render.width; ++x) {
      const double m = mask.mask.at(x, y);
      if (m == 0.0) continue;
      double diff = 0.0;
      for (int c = 0; c < render.channels; ++c) {
        diff += std::abs(double(render.at(x, y, c)) - double(gt.at(x, y, c)));
      }
      num += m * diff / render.channels;
      den += m;
    }
  }
  return num / (den + eps);
}

double masked_ssim(const ImageBuffer& render, const ImageBuffer& gt, const EdgeMask& mask,
                   double eps) {
  require_same(render, gt);
  require_mask(render, mask);
  const int w = render.width, h = render.height;
  double num = 0.0, den = 0.0;
  bool any = false;
  for (float v : mask.mask.data) any = any || v != 0.0f;
  if (!any) return 0.0;
  const ImageBuffer s = ssim_map(render, gt, &mask.mask);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const double m = mask.mask.at(x, y);
      if (m == 0.0) continue;
      num += m * (1.0 - s.at(x, y));
      den += m;
    }
  }
  return num / (den + eps);
}

double masked_normal_loss(const ImageBuffer& rendered_normals, const ImageBuffer& depth_normals,
                          const EdgeMask& mask, double eps) {
  require_same(rendered_normals, depth_normals);
  require_mask(rendered_normals, mask);
  if (rendered_normals.channels != 3) throw Error("invalid_argument", "normal maps need 3 channels");
  double num = 0.0, den = 0.0;
  for (int y = 0; y < rendered_normals.height; ++y) {
    for (int x = 0; x < rendered_normals.width; ++x) {
      const double m = mask.mask.at(x, y);
      if (m == 0.0) continue;
      Vec3 a, b;
      for (int c = 0; c < 3; ++c) {
        a[c] = rendered_normals.at(x, y, c);
        b[c] = depth_normals.at(x, y, c);
      }
      if (a.isZero(0.0) || b.isZero(0.0)) continue;
      const double na = a.norm(), nb = b.norm();
      if (na < 0.99 || na > 1.01 || nb < 0.99 || nb > 1.01) {
        throw Error("non_unit_normal", "masked normal at (" + std::to_string(x) + "," +
                                           std::to_string(y) + ") is not unit length");
      }
      // 1 - cos of the renormalised pair, written as half the squared chord
      // so identical inputs give exactly 0.
      num += m * std::min(2.0, 0.5 * (a / na - b / nb).squaredNorm());
      den += m;
    }
  }
  return num / (den + eps);
}

ImageBuffer depth_to_normals(const ImageBuffer& depth, const CameraView& view) {
  const int w = depth.width, h = depth.height;
  ImageBuffer out(w, h, 3);
  const auto back = [&](int x, int y) {
    const double d = depth.at(x, y);
    return Vec3((x - view.cx()) / view.fx() * d, (y - view.cy()) / view.fy() * d, d);
  };
  const Mat3 to_world = view.rotation.transpose();
  for (int y = 1; y + 1 < h; ++y) {
    for (int x = 1; x + 1 < w; ++x) {
      if (!(depth.at(x, y) > 0.0f && depth.at(x - 1, y) > 0.0f && depth.at(x + 1, y) > 0.0f &&
            depth.at(x, y - 1) > 0.0f && depth.at(x, y + 1) > 0.0f)) {
        continue;
      }
      const Vec3 tx = back(x + 1, y) - back(x - 1, y);
      const Vec3 ty = back(x, y + 1) - back(x, y - 1);
      // ty x tx faces the camera for a right/down image frame.
      const Vec3 n = ty.cross(tx);
      const double len = n.norm();
      if (!(len > 0.0)) continue;
      const Vec3 nw = to_world * (n / len);
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = static_cast<float>(nw[c]);
    }
  }
  return out;
}

LossReport total_loss(const ImageBuffer& render, const ImageBuffer& gt,
                      const ImageBuffer& rendered_normals, const ImageBuffer& depth_normals,
                      const EdgeMask& mask, const PipelineConfig& config) {
  LossReport r;
  r.l1_refined = masked_l1(render, gt, mask, config.loss_epsilon);
  r.ssim_refined = masked_ssim(render, gt, mask, config.loss_epsilon);
  r.normal_refined = masked_normal_loss(rendered_normals, depth_normals, mask, config.loss_epsilon);
  const auto& lw = config.loss_weights;
  r.total = lw[0] * r.l1_refined + lw[1] * r.ssim_refined + lw[2] * r.normal_refined;
  double on = 0.0;
  for (float v : mask.mask.data) on += v;
  r.mask_coverage = mask.mask.data.empty() ? 0.0 : on / mask.mask.data.size();
  return r;
}

void write_loss_report(std::ostream& out, int view_id, const LossReport& report) {
  out << "view_id=" << view_id << '\n'
      << "l1_refined=" << io::format_double(report.l1_refined) << '\n'
      << "ssim_refined=" << io::format_double(report.ssim_refined) << '\n'
      << "normal_refined=" << io::format_double(report.normal_refined) << '\n'
      << "total=" << io::format_double(report.total) << '\n'
      << "mask_coverage=" << io::format_double(report.mask_coverage) << "\n\n";
}

}  // namespace bframe
