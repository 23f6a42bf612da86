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

// Exact geometric predicates on double-precision input. Each predicate first
// evaluates in floating point against a forward error bound and only falls
// back to exact rational arithmetic when the sign is not certified.

#pragma once

#include "bframe/scene.hpp"

#include <cstdint>

namespace bframe::predicates {

/// Sign of det[b-a, c-a, d-a]: +1 when (a,b,c,d) is a right-handed
/// (positively oriented) tetrahedron, 0 when coplanar.
int orient3d(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d);

/// +1 when e lies strictly inside the circumsphere of the positively
/// oriented tetrahedron (a,b,c,d), -1 strictly outside, 0 on it. The sign
/// flips for a negatively oriented tetrahedron.
int insphere(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
             const Vec3& e);

/// insphere() with ties broken by symbolic perturbation of the lifted
/// coordinate |p|^2 + eps^rank(p), rank = point index (smaller index is
/// perturbed more). Never returns 0 unless all five points are coplanar.
int insphere_sos(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                 const Vec3& e, std::int64_t ia, std::int64_t ib,
                 std::int64_t ic, std::int64_t id, std::int64_t ie);

/// Exact test for (b-a) x (c-a) == 0.
bool collinear(const Vec3& a, const Vec3& b, const Vec3& c);

/// Counters for how often the exact fallback ran (diagnostics only).
struct Stats {
  std::uint64_t orient_exact = 0;
  std::uint64_t insphere_exact = 0;
};
Stats stats();

}  // namespace bframe::predicates
