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

#include "bframe/delaunay.hpp"

#include "bframe/predicates.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <unordered_map>

namespace bframe {

namespace pr = predicates;

Vec3 circumcenter(const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d) {
  const Vec3 u = b - a, v = c - a, w = d - a;
  const Vec3 vw = v.cross(w), wu = w.cross(u), uv = u.cross(v);
  const double denom = 2.0 * u.dot(vw);
  return a + (u.squaredNorm() * vw + v.squaredNorm() * wu + w.squaredNorm() * uv) /
                 denom;
}

int TetMesh::mirror_index(int t, int i) const {
  const int other = neighbors[t][i];
  for (int j = 0; j < 4; ++j)
    if (neighbors[other][j] == t) return j;
  return -1;
}

std::vector<std::vector<int>> TetMesh::vertex_star() const {
  std::vector<std::vector<int>> star(vertices.size());
  for (int t = 0; t < size(); ++t)
    for (int v : tets[t]) star[v].push_back(t);
  return star;
}

namespace {

// 10 bits per axis interleaved.
std::uint32_t morton3(std::uint32_t x, std::uint32_t y, std::uint32_t z) {
  auto spread = [](std::uint32_t v) {
    v &= 0x3ff;
    v = (v | (v << 16)) & 0x30000ff;
    v = (v | (v << 8)) & 0x300f00f;
    v = (v | (v << 4)) & 0x30c30c3;
    v = (v | (v << 2)) & 0x9249249;
    return v;
  };
  return spread(x) | (spread(y) << 1) | (spread(z) << 2);
}

class Builder {
 public:
  explicit Builder(std::vector<Vec3> pts, int n_input)
      : pts_(std::move(pts)), n_input_(n_input) {}

  void init_super(const std::array<int, 4>& s) {
    tets_.push_back(s);
    nbrs_.push_back({kOutside, kOutside, kOutside, kOutside});
    alive_.push_back(1);
    stamp_.push_back(0);
  }

  void insert(int p) {
    const int start = locate(p);
    ++epoch_;
    cavity_.clear();
    cavity_.push_back(start);
    stamp_[start] = epoch_;
    for (std::size_t k = 0; k < cavity_.size(); ++k) {
      const int t = cavity_[k];
      for (int i = 0; i < 4; ++i) {
        const int n = nbrs_[t][i];
        if (n == kOutside || stamp_[n] == epoch_ || stamp_[n] == -epoch_) continue;
        if (in_conflict(n, p)) {
          stamp_[n] = epoch_;
          cavity_.push_back(n);
        } else {
          stamp_[n] = -epoch_;  // checked, not in cavity
        }
      }
    }

    edge_map_.clear();
    created_.clear();
    for (int t : cavity_) {
      for (int i = 0; i < 4; ++i) {
        const int n = nbrs_[t][i];
        if (n != kOutside && stamp_[n] == epoch_) continue;
        std::array<int, 4> nv = tets_[t];
        nv[i] = p;
        const int nt = allocate(nv);
        nbrs_[nt][i] = n;
        if (n != kOutside) {
          for (int j = 0; j < 4; ++j) {
            if (nbrs_[n][j] == t) {
              nbrs_[n][j] = nt;
              break;
            }
          }
        }
        created_.push_back(nt);
        // Faces through p are shared with other new tetrahedra; pair them up
        // by the edge they hold opposite p.
        for (int j = 0; j < 4; ++j) {
          if (j == i) continue;
          int a = -1, b = -1;
          for (int k = 0; k < 4; ++k) {
            if (k == i || k == j) continue;
            (a < 0 ? a : b) = nv[k];
          }
          const std::uint64_t key =
              (static_cast<std::uint64_t>(std::min(a, b)) << 32) |
              static_cast<std::uint32_t>(std::max(a, b));
          auto [it, inserted] = edge_map_.try_emplace(key, nt, j);
          if (!inserted) {
            nbrs_[nt][j] = it->second.first;
            nbrs_[it->second.first][it->second.second] = nt;
            edge_map_.erase(it);
          }
        }
      }
    }
    for (int t : cavity_) {
      alive_[t] = 0;
      free_.push_back(t);
    }
    last_ = created_.front();
  }

  TetMesh finish(std::vector<Vec3> input, std::vector<int> canonical) {
    TetMesh mesh;
    mesh.vertices = std::move(input);
    mesh.canonical = std::move(canonical);
    std::vector<int> remap(tets_.size(), kOutside);
    for (std::size_t t = 0; t < tets_.size(); ++t) {
      if (!alive_[t]) continue;
      bool real = true;
      for (int v : tets_[t]) real = real && v < n_input_;
      if (!real) continue;
      remap[t] = mesh.size();
      mesh.tets.push_back(tets_[t]);
    }
    mesh.neighbors.reserve(mesh.tets.size());
    mesh.circumcenters.reserve(mesh.tets.size());
    for (std::size_t t = 0; t < tets_.size(); ++t) {
      if (remap[t] == kOutside) continue;
      std::array<int, 4> nb;
      for (int i = 0; i < 4; ++i) {
        nb[i] = nbrs_[t][i] == kOutside ? kOutside : remap[nbrs_[t][i]];
      }
      mesh.neighbors.push_back(nb);
      const auto& v = tets_[t];
      mesh.circumcenters.push_back(
          circumcenter(pts_[v[0]], pts_[v[1]], pts_[v[2]], pts_[v[3]]));
    }
    return mesh;
  }

 private:
  int allocate(const std::array<int, 4>& v) {
    int t;
    if (!free_.empty()) {
      t = free_.back();
      free_.pop_back();
      tets_[t] = v;
      nbrs_[t] = {kOutside, kOutside, kOutside, kOutside};
      alive_[t] = 1;
      stamp_[t] = 0;
    } else {
      t = static_cast<int>(tets_.size());
      tets_.push_back(v);
      nbrs_.push_back({kOutside, kOutside, kOutside, kOutside});
      alive_.push_back(1);
      stamp_.push_back(0);
    }
    return t;
  }

  bool in_conflict(int t, int p) const {
    const auto& v = tets_[t];
    return pr::insphere_sos(pts_[v[0]], pts_[v[1]], pts_[v[2]], pts_[v[3]],
                            pts_[p], v[0], v[1], v[2], v[3], p) > 0;
  }

  // Remembering stochastic visibility walk.
  int locate(int p) {
    int t = last_;
    if (t < 0 || !alive_[t]) {
      t = 0;
      while (!alive_[t]) ++t;
    }
    int prev = kOutside;
    for (;;) {
      const int offset = static_cast<int>(walk_rng_++ & 3u);
      bool moved = false;
      for (int k = 0; k < 4; ++k) {
        const int i = (k + offset) & 3;
        const int n = nbrs_[t][i];
        if (n == prev) continue;
        const auto f = face_of(t, i);
        if (pr::orient3d(pts_[f[0]], pts_[f[1]], pts_[f[2]], pts_[p]) > 0) {
          if (n == kOutside) {
            throw Error("internal", "point location left the enclosing tetrahedron");
          }
          prev = t;
          t = n;
          moved = true;
          break;
        }
      }
      if (!moved) return t;
    }
  }

  std::array<int, 3> face_of(int t, int i) const {
    const auto& v = tets_[t];
    return {v[kFaceVertex[i][0]], v[kFaceVertex[i][1]], v[kFaceVertex[i][2]]};
  }

  std::vector<Vec3> pts_;
  int n_input_;
  std::vector<std::array<int, 4>> tets_;
  std::vector<std::array<int, 4>> nbrs_;
  std::vector<char> alive_;
  std::vector<int> stamp_;
  std::vector<int> free_;
  std::vector<int> cavity_;
  std::vector<int> created_;
  std::unordered_map<std::uint64_t, std::pair<int, int>> edge_map_;
  int epoch_ = 0;
  int last_ = -1;
  std::uint32_t walk_rng_ = 0;
};

}  // namespace

TetMesh tetrahedralize(std::span<const Vec3> points) {
  const int n = static_cast<int>(points.size());
  for (const auto& p : points) {
    if (!p.allFinite()) throw Error("invalid_input", "non-finite point");
  }

  // Collapse exact duplicates onto their first occurrence.
  std::vector<int> canonical(n);
  std::iota(canonical.begin(), canonical.end(), 0);
  {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    auto lex = [&](int a, int b) {
      const auto& p = points[a];
      const auto& q = points[b];
      if (p.x() != q.x()) return p.x() < q.x();
      if (p.y() != q.y()) return p.y() < q.y();
      if (p.z() != q.z()) return p.z() < q.z();
      return a < b;
    };
    std::sort(order.begin(), order.end(), lex);
    for (int k = 1; k < n; ++k) {
      const int a = order[k - 1], b = order[k];
      if (points[a] == points[b]) canonical[b] = canonical[a];
    }
  }
  std::vector<int> unique;
  for (int i = 0; i < n; ++i)
    if (canonical[i] == i) unique.push_back(i);
  if (unique.size() < 4) {
    throw Error("insufficient_points", "insufficient points: need at least 4 distinct points");
  }

  // Find an affinely independent quadruple or report coplanarity.
  {
    const Vec3& a = points[unique[0]];
    const Vec3& b = points[unique[1]];
    std::size_t k = 2;
    while (k < unique.size() && pr::collinear(a, b, points[unique[k]])) ++k;
    bool found = false;
    if (k < unique.size()) {
      const Vec3& c = points[unique[k]];
      for (std::size_t m = 2; m < unique.size() && !found; ++m) {
        found = pr::orient3d(a, b, c, points[unique[m]]) != 0;
      }
    }
    if (!found) throw Error("coplanar_points", "all points are coplanar");
  }

  Vec3 lo = points[unique[0]], hi = lo;
  for (int i : unique) {
    lo = lo.cwiseMin(points[i]);
    hi = hi.cwiseMax(points[i]);
  }
  const Vec3 mid = 0.5 * (lo + hi);
  const double radius = std::max(0.5 * (hi - lo).norm(), 1e-300);
  const double m = 1000.0 * radius;

  std::vector<Vec3> pts(points.begin(), points.end());
  std::array<int, 4> super = {n, n + 1, n + 2, n + 3};
  pts.push_back(mid + m * Vec3(1, 1, 1));
  pts.push_back(mid + m * Vec3(-1, -1, 1));
  pts.push_back(mid + m * Vec3(-1, 1, -1));
  pts.push_back(mid + m * Vec3(1, -1, -1));
  if (pr::orient3d(pts[n], pts[n + 1], pts[n + 2], pts[n + 3]) < 0) {
    std::swap(super[2], super[3]);
  }

  // Spatially coherent insertion order keeps the walks short.
  const Vec3 ext = (hi - lo).cwiseMax(Vec3::Constant(1e-300));
  std::vector<std::pair<std::uint32_t, int>> keyed;
  keyed.reserve(unique.size());
  for (int i : unique) {
    const Vec3 q = ((points[i] - lo).cwiseQuotient(ext) * 1023.0);
    keyed.emplace_back(morton3(static_cast<std::uint32_t>(q.x()),
                               static_cast<std::uint32_t>(q.y()),
                               static_cast<std::uint32_t>(q.z())),
                       i);
  }
  std::sort(keyed.begin(), keyed.end());

  Builder builder(pts, n);
  builder.init_super(super);
  for (const auto& [key, i] : keyed) builder.insert(i);
  return builder.finish(std::vector<Vec3>(points.begin(), points.end()),
                        std::move(canonical));
}

}  // namespace bframe
