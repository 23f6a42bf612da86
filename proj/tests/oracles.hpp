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

// Brute-force reference implementations used only by tests. None of these
// call into the library code paths they are used to check.

#pragma once

#include "bframe/scene.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace oracle {

using bframe::Vec3;
using Rational = boost::multiprecision::cpp_rational;

/// Determinant by fraction-exact Gaussian elimination.
inline Rational det_exact(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m[piv][c] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != c) {
      std::swap(m[piv], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m[r][c] == 0) continue;
      const Rational f = m[r][c] / m[c][c];
      for (std::size_t k = c; k < n; ++k) m[r][k] -= f * m[c][k];
    }
  }
  return det;
}

inline int orient_exact(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  std::vector<std::vector<Rational>> m(3, std::vector<Rational>(3));
  const Vec3* q[3] = {&b, &c, &d};
  for (int r = 0; r < 3; ++r)
    for (int k = 0; k < 3; ++k) m[r][k] = Rational((*q[r])[k]) - Rational(a[k]);
  const Rational d3 = det_exact(m);
  return d3 > 0 ? 1 : (d3 < 0 ? -1 : 0);
}

/// +1 if e is strictly inside the circumsphere of (a,b,c,d), regardless of
/// their orientation; 0 on the sphere.
inline int inside_sphere_exact(const Vec3& a, const Vec3& b, const Vec3& c,
                               const Vec3& d, const Vec3& e) {
  std::vector<std::vector<Rational>> m(5, std::vector<Rational>(5));
  const Vec3* q[5] = {&a, &b, &c, &d, &e};
  for (int r = 0; r < 5; ++r) {
    Rational w = 0;
    for (int k = 0; k < 3; ++k) {
      m[r][k] = Rational((*q[r])[k]);
      w += m[r][k] * m[r][k];
    }
    m[r][3] = w;
    m[r][4] = 1;
  }
  const Rational lifted = det_exact(m);
  const int o = orient_exact(a, b, c, d);
  const int s = lifted > 0 ? 1 : (lifted < 0 ? -1 : 0);
  return -s * o;
}

/// Brute-force empty-circumsphere check of tetrahedron (a,b,c,d) against
/// every point: long-double distance comparison with a wide margin, exact
/// rational test for anything inside the margin. Returns the index of a
/// violating point or -1.
inline int find_point_inside(const std::vector<Vec3>& points, const Vec3& a,
                             const Vec3& b, const Vec3& c, const Vec3& d) {
  using L = long double;
  using V = Eigen::Matrix<L, 3, 1>;
  const V A = a.cast<L>(), u = b.cast<L>() - A, v = c.cast<L>() - A,
          w = d.cast<L>() - A;
  const V num = u.squaredNorm() * v.cross(w) + v.squaredNorm() * w.cross(u) +
                w.squaredNorm() * u.cross(v);
  const L den = 2 * u.dot(v.cross(w));
  const V center = A + num / den;
  const L r2 = (A - center).squaredNorm();
  for (std::size_t p = 0; p < points.size(); ++p) {
    const L d2 = (points[p].cast<L>() - center).squaredNorm();
    if (d2 > r2 * (1 + 1e-6L)) continue;
    if (d2 < r2 * (1 - 1e-6L)) return static_cast<int>(p);
    if (inside_sphere_exact(a, b, c, d, points[p]) > 0) return static_cast<int>(p);
  }
  return -1;
}

inline double point_triangle_distance_sampled(const Vec3& p, const Vec3& a,
                                              const Vec3& b, const Vec3& c,
                                              int samples_per_side) {
  double best = std::numeric_limits<double>::infinity();
  const int n = samples_per_side;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; i + j <= n; ++j) {
      const double u = double(i) / n, v = double(j) / n;
      const Vec3 q = a + u * (b - a) + v * (c - a);
      best = std::min(best, (p - q).norm());
    }
  }
  return best;
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec3 v(g(rng), g(rng), g(rng));
  return v.normalized();
}

inline bframe::Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::Quaterniond q(g(rng), g(rng), g(rng), g(rng));
  return q.normalized().toRotationMatrix();
}

inline bframe::Mat3 random_spd(std::mt19937_64& rng, double lo = 0.05, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  const bframe::Mat3 r = random_rotation(rng);
  const bframe::Vec3 s(u(rng), u(rng), u(rng));
  bframe::Mat3 m = r * s.asDiagonal() * r.transpose();
  return 0.5 * (m + m.transpose());
}

/// Front-to-back compositing written as the explicit product sum: the
/// transmittance before splat i is recomputed from scratch each time.
inline std::pair<Vec3, double> composite_loop(const std::vector<double>& alpha,
                                              const std::vector<Vec3>& value) {
  Vec3 out = Vec3::Zero();
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    double t = 1.0;
    for (std::size_t j = 0; j < i; ++j) t *= 1.0 - alpha[j];
    out += t * alpha[i] * value[i];
  }
  double t = 1.0;
  for (double a : alpha) t *= 1.0 - a;
  return {out, t};
}

/// Sobel magnitude by explicit 3x3 convolution with reflected borders
/// (index -1 reads 1, index n reads n-2).
inline bframe::ImageBuffer sobel_naive(const bframe::ImageBuffer& img) {
  static const int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  static const int ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  const auto reflect = [](int i, int n) { return i < 0 ? -i : (i >= n ? 2 * n - 2 - i : i); };
  bframe::ImageBuffer out(img.width, img.height, 1);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      double total = 0.0;
      for (int c = 0; c < img.channels; ++c) {
        double gx = 0.0, gy = 0.0;
        for (int j = 0; j < 3; ++j) {
          for (int i = 0; i < 3; ++i) {
            const double v = img.at(reflect(x + i - 1, img.width), reflect(y + j - 1, img.height), c);
            gx += kx[j][i] * v;
            gy += ky[j][i] * v;
          }
        }
        total += gx * gx + gy * gy;
      }
      out.at(x, y) = static_cast<float>(std::sqrt(total));
    }
  }
  return out;
}

/// Per-pixel SSIM with a 2D Gaussian window (sigma 1.5, radius 5) that is
/// truncated at the border and renormalised, averaged over channels.
inline double ssim_naive(const bframe::ImageBuffer& a, const bframe::ImageBuffer& b, int x, int y) {
  const double c1 = 1e-4, c2 = 9e-4;
  double total = 0.0;
  for (int c = 0; c < a.channels; ++c) {
    std::vector<double> w, va, vb;
    for (int yy = y - 5; yy <= y + 5; ++yy) {
      for (int xx = x - 5; xx <= x + 5; ++xx) {
        if (xx < 0 || yy < 0 || xx >= a.width || yy >= a.height) continue;
        const double d2 = (xx - x) * (xx - x) + (yy - y) * (yy - y);
        w.push_back(std::exp(-d2 / 4.5));
        va.push_back(a.at(xx, yy, c));
        vb.push_back(b.at(xx, yy, c));
      }
    }
    double sw = 0.0;
    for (double v : w) sw += v;
    double ma = 0.0, mb = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      ma += w[k] * va[k] / sw;
      mb += w[k] * vb[k] / sw;
    }
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
      saa += w[k] * (va[k] - ma) * (va[k] - ma) / sw;
      sbb += w[k] * (vb[k] - mb) * (vb[k] - mb) / sw;
      sab += w[k] * (va[k] - ma) * (vb[k] - mb) / sw;
    }
    total += (2 * ma * mb + c1) * (2 * sab + c2) / ((ma * ma + mb * mb + c1) * (saa + sbb + c2));
  }
  return total / a.channels;
}

/// Nearest distance from p to any triangle, exhaustive over all triangles,
/// each by minimising over the face plane foot and the three edges.
inline double nearest_triangle_bruteforce(const Vec3& p, const bframe::TriangleMesh& m) {
  const auto seg = [](const Vec3& q, const Vec3& a, const Vec3& b) {
    const Vec3 ab = b - a;
    double t = (q - a).dot(ab) / ab.squaredNorm();
    t = std::max(0.0, std::min(1.0, t));
    return (q - (a + t * ab)).norm();
  };
  double best = std::numeric_limits<double>::infinity();
  for (const auto& t : m.triangles) {
    const Vec3 &a = m.vertices[t[0]], &b = m.vertices[t[1]], &c = m.vertices[t[2]];
    const Vec3 n = (b - a).cross(c - a).normalized();
    const Vec3 foot = p - n * (p - a).dot(n);
    // Barycentric inside test of the foot via sub-triangle orientations.
    const double s0 = (b - a).cross(foot - a).dot(n), s1 = (c - b).cross(foot - b).dot(n),
                 s2 = (a - c).cross(foot - c).dot(n);
    double d;
    if (s0 >= 0 && s1 >= 0 && s2 >= 0) {
      d = std::abs((p - a).dot(n));
    } else {
      d = std::min({seg(p, a, b), seg(p, b, c), seg(p, c, a)});
    }
    best = std::min(best, d);
  }
  return best;
}

/// Pinhole camera with identity intrinsics skew, given pose.
inline bframe::CameraView make_camera(double f, double cx, double cy, int w, int h,
                                      const bframe::Mat3& r = bframe::Mat3::Identity(),
                                      const Vec3& t = Vec3::Zero(), int id = 0) {
  bframe::CameraView v;
  v.intrinsics << f, 0, cx, 0, f, cy, 0, 0, 1;
  v.rotation = r;
  v.translation = t;
  v.width = w;
  v.height = h;
  v.view_id = id;
  return v;
}

}  // namespace oracle
