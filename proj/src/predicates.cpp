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

#include "bframe/predicates.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <numeric>

namespace bframe::predicates {

namespace {

constexpr double kEps = 0x1p-53;
// Forward error bounds for the filtered evaluation: Shewchuk's "A" bounds,
// doubled since the evaluation order here differs slightly from his.
constexpr double kOrientBound = 2.0 * (7.0 + 56.0 * kEps) * kEps;
constexpr double kInsphereBound = 2.0 * (16.0 + 224.0 * kEps) * kEps;

std::atomic<std::uint64_t> g_orient_exact{0};
std::atomic<std::uint64_t> g_insphere_exact{0};

int sign(const mpq_class& q) { return sgn(q); }

int orient_exact(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  ++g_orient_exact;
  const mpq_class ux = mpq_class(b.x()) - a.x(), uy = mpq_class(b.y()) - a.y(),
                  uz = mpq_class(b.z()) - a.z();
  const mpq_class vx = mpq_class(c.x()) - a.x(), vy = mpq_class(c.y()) - a.y(),
                  vz = mpq_class(c.z()) - a.z();
  const mpq_class wx = mpq_class(d.x()) - a.x(), wy = mpq_class(d.y()) - a.y(),
                  wz = mpq_class(d.z()) - a.z();
  const mpq_class det = ux * (vy * wz - vz * wy) + uy * (vz * wx - vx * wz) +
                        uz * (vx * wy - vy * wx);
  return sign(det);
}

// Sign of the lifted determinant: rows [p-e, |p-e|^2] for p = a, b, c, d.
// Negative when e is inside the sphere of a positively oriented (a,b,c,d).
int lifted_exact(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                 const Vec3& e) {
  ++g_insphere_exact;
  std::array<std::array<mpq_class, 4>, 4> m;
  const Vec3* pts[4] = {&a, &b, &c, &d};
  for (int r = 0; r < 4; ++r) {
    mpq_class lift = 0;
    for (int k = 0; k < 3; ++k) {
      m[r][k] = mpq_class((*pts[r])[k]) - e[k];
      lift += m[r][k] * m[r][k];
    }
    m[r][3] = lift;
  }
  // Cofactor expansion along the last column via 2x2 minors of the first
  // two columns.
  auto minor2 = [&](int r0, int r1) {
    return mpq_class(m[r0][0] * m[r1][1] - m[r1][0] * m[r0][1]);
  };
  const mpq_class ab = minor2(0, 1), ac = minor2(0, 2), ad = minor2(0, 3),
                  bc = minor2(1, 2), bd = minor2(1, 3), cd = minor2(2, 3);
  // 3x3 minors over columns (x, y, z) for row triples.
  const mpq_class abc = m[0][2] * bc - m[1][2] * ac + m[2][2] * ab;
  const mpq_class abd = m[0][2] * bd - m[1][2] * ad + m[3][2] * ab;
  const mpq_class acd = m[0][2] * cd - m[2][2] * ad + m[3][2] * ac;
  const mpq_class bcd = m[1][2] * cd - m[2][2] * bd + m[3][2] * bc;
  const mpq_class det = -m[0][3] * bcd + m[1][3] * acd - m[2][3] * abd +
                        m[3][3] * abc;
  return sign(det);
}

// Filtered lifted determinant; returns 2 when the sign is uncertain.
int lifted_filtered(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                    const Vec3& e) {
  const double aex = a.x() - e.x(), aey = a.y() - e.y(), aez = a.z() - e.z();
  const double bex = b.x() - e.x(), bey = b.y() - e.y(), bez = b.z() - e.z();
  const double cex = c.x() - e.x(), cey = c.y() - e.y(), cez = c.z() - e.z();
  const double dex = d.x() - e.x(), dey = d.y() - e.y(), dez = d.z() - e.z();

  const double ab = aex * bey - bex * aey;
  const double ac = aex * cey - cex * aey;
  const double ad = aex * dey - dex * aey;
  const double bc = bex * cey - cex * bey;
  const double bd = bex * dey - dex * bey;
  const double cd = cex * dey - dex * cey;

  const double abc = aez * bc - bez * ac + cez * ab;
  const double abd = aez * bd - bez * ad + dez * ab;
  const double acd = aez * cd - cez * ad + dez * ac;
  const double bcd = bez * cd - cez * bd + dez * bc;

  const double alift = aex * aex + aey * aey + aez * aez;
  const double blift = bex * bex + bey * bey + bez * bez;
  const double clift = cex * cex + cey * cey + cez * cez;
  const double dlift = dex * dex + dey * dey + dez * dez;

  const double det = -alift * bcd + blift * acd - clift * abd + dlift * abc;

  const double pab = std::abs(aex * bey) + std::abs(bex * aey);
  const double pac = std::abs(aex * cey) + std::abs(cex * aey);
  const double pad = std::abs(aex * dey) + std::abs(dex * aey);
  const double pbc = std::abs(bex * cey) + std::abs(cex * bey);
  const double pbd = std::abs(bex * dey) + std::abs(dex * bey);
  const double pcd = std::abs(cex * dey) + std::abs(dex * cey);
  const double paez = std::abs(aez), pbez = std::abs(bez), pcez = std::abs(cez),
               pdez = std::abs(dez);
  const double pabc = paez * pbc + pbez * pac + pcez * pab;
  const double pabd = paez * pbd + pbez * pad + pdez * pab;
  const double pacd = paez * pcd + pcez * pad + pdez * pac;
  const double pbcd = pbez * pcd + pcez * pbd + pdez * pbc;
  const double permanent =
      alift * pbcd + blift * pacd + clift * pabd + dlift * pabc;
  const double bound = kInsphereBound * permanent;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return 2;
}

int lifted_sign(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                const Vec3& e) {
  const int s = lifted_filtered(a, b, c, d, e);
  if (s != 2) return s;
  return lifted_exact(a, b, c, d, e);
}

}  // namespace

int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const double ux = b.x() - a.x(), uy = b.y() - a.y(), uz = b.z() - a.z();
  const double vx = c.x() - a.x(), vy = c.y() - a.y(), vz = c.z() - a.z();
  const double wx = d.x() - a.x(), wy = d.y() - a.y(), wz = d.z() - a.z();
  const double m1 = vy * wz - vz * wy;
  const double m2 = vz * wx - vx * wz;
  const double m3 = vx * wy - vy * wx;
  const double det = ux * m1 + uy * m2 + uz * m3;
  const double permanent = std::abs(ux) * (std::abs(vy * wz) + std::abs(vz * wy)) +
                           std::abs(uy) * (std::abs(vz * wx) + std::abs(vx * wz)) +
                           std::abs(uz) * (std::abs(vx * wy) + std::abs(vy * wx));
  const double bound = kOrientBound * permanent;
  if (det > bound) return 1;
  if (-det > bound) return -1;
  return orient_exact(a, b, c, d);
}

int insphere(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
             const Vec3& e) {
  return -lifted_sign(a, b, c, d, e);
}

int insphere_sos(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                 const Vec3& e, std::int64_t ia, std::int64_t ib,
                 std::int64_t ic, std::int64_t id, std::int64_t ie) {
  const int s = lifted_sign(a, b, c, d, e);
  if (s != 0) return -s;
  // The lifted determinant is affine in each lifted coordinate w_i with
  // d/dw_i = (-1)^i * orient3d(the other four points, in order).
  const Vec3* pts[5] = {&a, &b, &c, &d, &e};
  const std::int64_t idx[5] = {ia, ib, ic, id, ie};
  std::array<int, 5> order;
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int l, int r) { return idx[l] < idx[r]; });
  for (int i : order) {
    const Vec3* rest[4];
    int k = 0;
    for (int j = 0; j < 5; ++j)
      if (j != i) rest[k++] = pts[j];
    const int o = orient3d(*rest[0], *rest[1], *rest[2], *rest[3]);
    if (o != 0) {
      const int lifted = (i % 2 == 0) ? o : -o;
      return -lifted;
    }
  }
  return 0;
}

bool collinear(const Vec3& a, const Vec3& b, const Vec3& c) {
  const mpq_class ux = mpq_class(b.x()) - a.x(), uy = mpq_class(b.y()) - a.y(),
                  uz = mpq_class(b.z()) - a.z();
  const mpq_class vx = mpq_class(c.x()) - a.x(), vy = mpq_class(c.y()) - a.y(),
                  vz = mpq_class(c.z()) - a.z();
  return uy * vz - uz * vy == 0 && uz * vx - ux * vz == 0 &&
         ux * vy - uy * vx == 0;
}

Stats stats() { return {g_orient_exact.load(), g_insphere_exact.load()}; }

}  // namespace bframe::predicates
