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

#include "bframe/graphcut.hpp"

#include "bframe/io.hpp"
#include "bframe/maxflow.hpp"
#include "bframe/predicates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>

namespace bframe {
namespace {

namespace pr = predicates;

int local_index(const std::array<int, 4>& tet, int v) {
  for (int k = 0; k < 4; ++k) {
    if (tet[k] == v) return k;
  }
  return -1;
}

class RayWalker {
 public:
  explicit RayWalker(const TetMesh& mesh) : m_(mesh), star_(mesh.vertex_star()) {}

  struct End {
    int tet = kOutside;  // cell containing the target, or the last cell before the hull
    bool reached = false;
    bool aborted = false;
  };

  bool has_cells(int v) const { return !star_[v].empty(); }

  /// Walks the segment from vertex v to `target`. visit(tet, face, s) is
  /// called for each facet left through, s being the segment parameter.
  template <class Visit>
  End walk(int v, const Vec3& target, Visit&& visit) const {
    int t = start_cell(v, target);
    if (t < 0) return {};
    const Vec3& p = m_.vertices[v];
    const Vec3 dir = target - p;
    int entry = -1;
    const int limit = m_.size() + 8;
    for (int step = 0; step < limit; ++step) {
      int best = -1;
      double best_s = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 4; ++i) {
        if (i == entry) continue;
        const auto f = m_.face(t, i);
        const Vec3 &a = m_.vertices[f[0]], &b = m_.vertices[f[1]], &c = m_.vertices[f[2]];
        if (pr::orient3d(a, b, c, target) <= 0) continue;
        const Vec3 n = (b - a).cross(c - a);
        const double den = n.dot(dir);
        const double s = den > 0.0 ? std::max(0.0, n.dot(a - p) / den) : 0.0;
        if (s < best_s) {
          best_s = s;
          best = i;
        }
      }
      if (best < 0) return {t, true, false};
      visit(t, best, best_s);
      const int next = m_.neighbors[t][best];
      if (next == kOutside) return {t, false, false};
      entry = m_.mirror_index(t, best);
      t = next;
    }
    return {t, false, true};
  }

 private:
  // Incident cell whose cone at v contains the target (boundaries included).
  int start_cell(int v, const Vec3& target) const {
    for (int t : star_[v]) {
      const int k = local_index(m_.tets[t], v);
      bool inside = true;
      for (int i = 0; i < 4 && inside; ++i) {
        if (i == k) continue;
        const auto f = m_.face(t, i);
        inside = pr::orient3d(m_.vertices[f[0]], m_.vertices[f[1]], m_.vertices[f[2]],
                              target) <= 0;
      }
      if (inside) return t;
    }
    return -1;
  }

  const TetMesh& m_;
  std::vector<std::vector<int>> star_;
};

}  // namespace

DualGraph build_dual_graph(const TetMesh& tets) {
  DualGraph g;
  g.tet_count = tets.size();
  g.facet_of.assign(tets.size(), {-1, -1, -1, -1});
  g.source_cap.assign(tets.size(), 0.0);
  g.sink_cap.assign(tets.size(), 0.0);
  for (int t = 0; t < tets.size(); ++t) {
    for (int i = 0; i < 4; ++i) {
      const int n = tets.neighbors[t][i];
      if (n != kOutside && n < t) continue;
      const int id = static_cast<int>(g.facets.size());
      g.facets.push_back({t, i, n, 0.0, 0.0});
      g.facet_of[t][i] = id;
      if (n != kOutside) g.facet_of[n][tets.mirror_index(t, i)] = id;
    }
  }
  return g;
}

double visibility_kernel(double d, double sigma, double alpha) {
  return alpha * -std::expm1(-d * d / (2.0 * sigma * sigma));
}

DualGraph accumulate_ray_costs(const TetMesh& tets,
                               std::span<const VisibilityRecord> records,
                               std::span<const CameraView> views,
                               const PipelineConfig& config, RayStats* stats) {
  DualGraph g = build_dual_graph(tets);
  const RayWalker walker(tets);
  std::map<int, const CameraView*> by_id;
  for (const auto& v : views) by_id[v.view_id] = &v;
  RayStats local;
  const double sigma = config.vis_sigma, alpha = config.vis_alpha;

  for (const auto& rec : records) {
    if (rec.visible_views.empty()) continue;
    const auto pair_name = [&](int view_id) {
      return "point " + std::to_string(rec.point_id) + " view " + std::to_string(view_id);
    };
    if (rec.point_id < 0 || rec.point_id >= static_cast<int>(tets.canonical.size())) {
      throw Error("ray_walk", "no start cell for " + pair_name(rec.visible_views[0].view_id));
    }
    const int v = tets.canonical[rec.point_id];
    if (!walker.has_cells(v)) {
      throw Error("ray_walk", "no start cell for " + pair_name(rec.visible_views[0].view_id));
    }
    const Vec3& p = tets.vertices[v];
    for (const auto& obs : rec.visible_views) {
      const auto it = by_id.find(obs.view_id);
      if (it == by_id.end()) throw Error("ray_walk", "unknown view for " + pair_name(obs.view_id));
      const Vec3 c = it->second->center();
      const double len = (c - p).norm();
      if (!(len > 0.0)) continue;
      ++local.rays;

      const auto front = walker.walk(v, c, [&](int t, int i, double s) {
        ++local.facets_crossed;
        const double cap = visibility_kernel(s * len, sigma, alpha);
        DualFacet& f = g.facets[g.facet_of[t][i]];
        // Directed from the camera side (the cell being entered) to t.
        if (f.tet_b == kOutside || f.tet_a == t) {
          f.cap_ba += cap;
        } else {
          f.cap_ab += cap;
        }
      });
      if (front.reached) g.source_cap[front.tet] += alpha;
      if (front.aborted) ++local.aborted;

      // Every cell on the extension 3 sigma past the point votes inside.
      const Vec3 behind = p + (3.0 * sigma / len) * (p - c);
      const auto back = walker.walk(v, behind, [&](int t, int, double) { g.sink_cap[t] += alpha; });
      if (back.aborted) {
        ++local.aborted;
      } else if (back.reached) {
        g.sink_cap[back.tet] += alpha;
      }
    }
  }
  if (stats) *stats = local;
  return g;
}

double facet_geometric_cost(const Vec3& cc_a, const Vec3& cc_b, const Vec3& normal_ab) {
  const Vec3 seg = cc_b - cc_a;
  const double len = seg.norm();
  const double scale = std::max({1.0, cc_a.norm(), cc_b.norm()});
  if (len <= 1e-12 * scale) return 0.0;
  const Vec3 n = normal_ab.normalized();
  const double cos_phi = seg.dot(n) / len;
  const double cos_psi = (-seg).dot(-n) / len;
  return std::clamp(1.0 - std::min(cos_phi, cos_psi), 0.0, 2.0);
}

std::vector<double> geometric_costs(const TetMesh& tets) {
  const DualGraph g = build_dual_graph(tets);
  std::vector<double> costs(g.facets.size(), 0.0);
  for (std::size_t k = 0; k < g.facets.size(); ++k) {
    const DualFacet& f = g.facets[k];
    if (f.tet_b == kOutside) continue;
    const auto v = tets.face(f.tet_a, f.face_a);
    const Vec3 n = (tets.vertices[v[1]] - tets.vertices[v[0]])
                       .cross(tets.vertices[v[2]] - tets.vertices[v[0]]);
    costs[k] = facet_geometric_cost(tets.circumcenters[f.tet_a],
                                    tets.circumcenters[f.tet_b], n);
  }
  return costs;
}

void add_geometric_costs(DualGraph& graph, std::span<const double> costs, double beta) {
  if (costs.size() != graph.facets.size()) {
    throw Error("count_mismatch", "one geometric cost per facet is required");
  }
  for (std::size_t k = 0; k < costs.size(); ++k) {
    DualFacet& f = graph.facets[k];
    if (f.tet_b == kOutside) continue;
    f.cap_ab += beta * costs[k];
    f.cap_ba += beta * costs[k];
  }
}

std::vector<char> solve_labels(const DualGraph& graph) {
  const int n = graph.tet_count;
  const int source = n, sink = n + 1;
  FlowNetwork net(n + 2);
  for (const auto& f : graph.facets) {
    if (f.tet_b == kOutside) {
      if (f.cap_ba > 0.0) net.add_edge(source, f.tet_a, f.cap_ba);
    } else if (f.cap_ab > 0.0 || f.cap_ba > 0.0) {
      net.add_edge(f.tet_a, f.tet_b, f.cap_ab, f.cap_ba);
    }
  }
  for (int t = 0; t < n; ++t) {
    if (graph.source_cap[t] > 0.0) net.add_edge(source, t, graph.source_cap[t]);
    if (graph.sink_cap[t] > 0.0) net.add_edge(t, sink, graph.sink_cap[t]);
  }
  net.max_flow(source, sink);
  const auto side = net.sink_side(sink);
  return std::vector<char>(side.begin(), side.begin() + n);
}

LabeledTetMesh solve_mincut(const TetMesh& tets, const DualGraph& graph) {
  if (graph.tet_count != tets.size()) {
    throw Error("count_mismatch", "dual graph does not belong to this mesh");
  }
  return {tets, solve_labels(graph)};
}

double cut_value(const DualGraph& graph, std::span<const char> inside) {
  double total = 0.0;
  for (const auto& f : graph.facets) {
    const bool a = inside[f.tet_a];
    const bool b = f.tet_b != kOutside && inside[f.tet_b];
    if (!a && b) total += f.cap_ab;
    if (a && !b) total += f.cap_ba;
  }
  for (int t = 0; t < graph.tet_count; ++t) {
    total += inside[t] ? graph.source_cap[t] : graph.sink_cap[t];
  }
  return total;
}

TriangleMesh extract_surface(const LabeledTetMesh& labeled) {
  const TetMesh& m = labeled.mesh;
  std::vector<std::array<int, 3>> faces;
  for (int t = 0; t < m.size(); ++t) {
    if (!labeled.inside[t]) continue;
    for (int i = 0; i < 4; ++i) {
      const int n = m.neighbors[t][i];
      if (n == kOutside || !labeled.inside[n]) faces.push_back(m.face(t, i));
    }
  }
  std::vector<int> remap(m.vertices.size(), -1);
  for (const auto& f : faces) {
    for (int v : f) remap[v] = 0;
  }
  TriangleMesh out;
  for (std::size_t v = 0; v < remap.size(); ++v) {
    if (remap[v] < 0) continue;
    remap[v] = static_cast<int>(out.vertices.size());
    out.vertices.push_back(m.vertices[v]);
  }
  out.triangles.reserve(faces.size());
  for (const auto& f : faces) out.triangles.push_back({remap[f[0]], remap[f[1]], remap[f[2]]});
  return out;
}

namespace {

// Drops every inside cell outside the largest facet-connected inside component.
int keep_largest_component(const TetMesh& m, std::vector<char>& inside) {
  std::vector<int> comp(m.size(), -1);
  std::vector<int> sizes;
  std::vector<int> stack;
  for (int s = 0; s < m.size(); ++s) {
    if (!inside[s] || comp[s] >= 0) continue;
    const int id = static_cast<int>(sizes.size());
    sizes.push_back(0);
    comp[s] = id;
    stack.push_back(s);
    while (!stack.empty()) {
      const int t = stack.back();
      stack.pop_back();
      ++sizes[id];
      for (int n : m.neighbors[t]) {
        if (n != kOutside && inside[n] && comp[n] < 0) {
          comp[n] = id;
          stack.push_back(n);
        }
      }
    }
  }
  if (sizes.size() <= 1) return 0;
  const int best = static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
  int dropped = 0;
  for (int t = 0; t < m.size(); ++t) {
    if (inside[t] && comp[t] != best) {
      inside[t] = 0;
      ++dropped;
    }
  }
  return dropped;
}

// Cells around edge (a, b) in rotational order, starting at `t0`. `open` is
// set when the ring reaches the hull; it then runs from hull to hull.
std::vector<int> edge_ring(const TetMesh& m, int t0, int a, int b, bool& open) {
  // The two faces of a cell that contain the edge.
  auto sides = [&](int t) {
    std::array<int, 2> out{};
    int k = 0;
    for (int i = 0; i < 4; ++i) {
      if (m.tets[t][i] != a && m.tets[t][i] != b) out[k++] = m.neighbors[t][i];
    }
    return out;
  };
  auto walk = [&](int first, std::vector<int>& out) {
    int prev = t0, cur = first;
    while (cur != kOutside && cur != t0) {
      out.push_back(cur);
      const auto s = sides(cur);
      const int next = s[0] == prev ? s[1] : s[0];
      prev = cur;
      cur = next;
    }
    return cur == kOutside;
  };
  const auto s0 = sides(t0);
  std::vector<int> ring{t0};
  open = walk(s0[0], ring);
  if (!open) return ring;
  std::vector<int> back;
  walk(s0[1], back);
  std::reverse(back.begin(), back.end());
  back.insert(back.end(), ring.begin(), ring.end());
  return back;
}

}  // namespace

int make_manifold(LabeledTetMesh& labeled, int max_rounds) {
  const TetMesh& m = labeled.mesh;
  auto& inside = labeled.inside;
  int flips = keep_largest_component(m, inside);
  for (int round = 0; round < max_rounds; ++round) {
    std::map<std::pair<int, int>, int> count;
    std::map<std::pair<int, int>, int> some_cell;
    for (int t = 0; t < m.size(); ++t) {
      if (!inside[t]) continue;
      for (int i = 0; i < 4; ++i) {
        const int n = m.neighbors[t][i];
        if (n != kOutside && inside[n]) continue;
        const auto f = m.face(t, i);
        for (int k = 0; k < 3; ++k) {
          const std::pair e{std::min(f[k], f[(k + 1) % 3]), std::max(f[k], f[(k + 1) % 3])};
          ++count[e];
          some_cell.emplace(e, t);
        }
      }
    }
    int changed = 0;
    for (const auto& [e, c] : count) {
      if (c <= 2) continue;
      bool open = false;
      const auto ring = edge_ring(m, some_cell[e], e.first, e.second, open);
      // Runs of outside cells; on an open ring the hull ends count as
      // outside and stay untouched, otherwise the longest run is kept.
      std::vector<std::vector<int>> runs;
      const int n = static_cast<int>(ring.size());
      int start = 0;
      if (!open) {
        while (start < n && !inside[ring[start]]) ++start;
        if (start == n) continue;
      }
      std::vector<int> run;
      bool touches_hull = open;
      std::vector<bool> hull_run;
      for (int k = 0; k < n; ++k) {
        const int t = ring[(start + k) % n];
        if (!inside[t]) {
          run.push_back(t);
          continue;
        }
        if (!run.empty()) {
          runs.push_back(run);
          hull_run.push_back(touches_hull);
          run.clear();
        }
        touches_hull = false;
      }
      if (!run.empty()) {
        runs.push_back(run);
        hull_run.push_back(open);
      }
      std::size_t keep = runs.size();
      if (!open) {
        keep = 0;
        for (std::size_t r = 1; r < runs.size(); ++r) {
          if (runs[r].size() > runs[keep].size()) keep = r;
        }
      }
      for (std::size_t r = 0; r < runs.size(); ++r) {
        if (r == keep || hull_run[r]) continue;
        for (int t : runs[r]) {
          if (!inside[t]) {
            inside[t] = 1;
            ++changed;
          }
        }
      }
    }
    flips += changed + keep_largest_component(m, inside);
    if (changed == 0) break;
  }
  return flips;
}

TriangleMesh postfilter_edges(const TriangleMesh& mesh, double factor) {
  if (!(factor > 0.0)) throw Error("invalid_config", "postfilter factor must be positive");
  std::set<std::pair<int, int>> edges;
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      edges.insert({std::min(a, b), std::max(a, b)});
    }
  }
  if (edges.empty()) return mesh;
  std::vector<double> lengths;
  lengths.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    lengths.push_back((mesh.vertices[a] - mesh.vertices[b]).norm());
  }
  std::sort(lengths.begin(), lengths.end());
  const std::size_t h = lengths.size() / 2;
  const double median =
      lengths.size() % 2 ? lengths[h] : 0.5 * (lengths[h - 1] + lengths[h]);
  const double limit = factor * median;

  std::vector<std::array<int, 3>> kept;
  for (const auto& t : mesh.triangles) {
    bool ok = true;
    for (int k = 0; k < 3 && ok; ++k) {
      ok = (mesh.vertices[t[k]] - mesh.vertices[t[(k + 1) % 3]]).norm() <= limit;
    }
    if (ok) kept.push_back(t);
  }
  std::vector<int> remap(mesh.vertices.size(), -1);
  for (const auto& t : kept) {
    for (int v : t) remap[v] = 0;
  }
  TriangleMesh out;
  for (std::size_t v = 0; v < remap.size(); ++v) {
    if (remap[v] < 0) continue;
    remap[v] = static_cast<int>(out.vertices.size());
    out.vertices.push_back(mesh.vertices[v]);
  }
  for (const auto& t : kept) out.triangles.push_back({remap[t[0]], remap[t[1]], remap[t[2]]});
  return out;
}

void write_dual_graph(std::ostream& out, const DualGraph& graph) {
  out << "# tetA tetB cap_ab cap_ba\n";
  for (const auto& f : graph.facets) {
    out << f.tet_a << ' ' << f.tet_b << ' ' << io::format_double(f.cap_ab) << ' '
        << io::format_double(f.cap_ba) << '\n';
  }
  for (int t = 0; t < graph.tet_count; ++t) {
    if (graph.source_cap[t] > 0.0 || graph.sink_cap[t] > 0.0) {
      out << "# terminal " << t << ' ' << io::format_double(graph.source_cap[t]) << ' '
          << io::format_double(graph.sink_cap[t]) << '\n';
    }
  }
}

}  // namespace bframe
