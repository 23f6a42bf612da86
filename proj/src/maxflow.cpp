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

#include "bframe/maxflow.hpp"

#include "bframe/scene.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bframe {

FlowNetwork::FlowNetwork(int nodes) : head_(nodes, -1) {}

void FlowNetwork::add_edge(int u, int v, double cap, double reverse_cap) {
  if (!(cap >= 0.0) || !(reverse_cap >= 0.0) || !std::isfinite(cap) ||
      !std::isfinite(reverse_cap)) {
    throw Error("invalid_graph", "capacities must be finite and non-negative");
  }
  arcs_.push_back({v, head_[u], cap});
  head_[u] = static_cast<int>(arcs_.size()) - 1;
  arcs_.push_back({u, head_[v], reverse_cap});
  head_[v] = static_cast<int>(arcs_.size()) - 1;
  tolerance_ = std::max(tolerance_, 1e-13 * std::max(cap, reverse_cap));
}

bool FlowNetwork::build_levels(int s, int t) {
  level_.assign(head_.size(), -1);
  std::vector<int> queue{s};
  level_[s] = 0;
  for (std::size_t k = 0; k < queue.size(); ++k) {
    const int u = queue[k];
    for (int a = head_[u]; a != -1; a = arcs_[a].next) {
      const Arc& arc = arcs_[a];
      if (arc.residual > tolerance_ && level_[arc.to] < 0) {
        level_[arc.to] = level_[u] + 1;
        queue.push_back(arc.to);
      }
    }
  }
  return level_[t] >= 0;
}

double FlowNetwork::push(int u, int t, double limit) {
  if (u == t) return limit;
  for (int& a = cursor_[u]; a != -1; a = arcs_[a].next) {
    Arc& arc = arcs_[a];
    if (arc.residual <= tolerance_ || level_[arc.to] != level_[u] + 1) continue;
    const double got = push(arc.to, t, std::min(limit, arc.residual));
    if (got > 0.0) {
      arc.residual -= got;
      arcs_[a ^ 1].residual += got;
      return got;
    }
  }
  return 0.0;
}

double FlowNetwork::max_flow(int source, int sink) {
  double flow = 0.0;
  while (build_levels(source, sink)) {
    cursor_ = head_;
    for (;;) {
      const double f = push(source, sink, std::numeric_limits<double>::infinity());
      if (f <= 0.0) break;
      flow += f;
    }
  }
  return flow;
}

std::vector<char> FlowNetwork::sink_side(int sink) const {
  std::vector<char> reach(head_.size(), 0);
  std::vector<int> queue{sink};
  reach[sink] = 1;
  for (std::size_t k = 0; k < queue.size(); ++k) {
    const int v = queue[k];
    // Arc (v -> u) at index a pairs with (u -> v) at a ^ 1.
    for (int a = head_[v]; a != -1; a = arcs_[a].next) {
      const int u = arcs_[a].to;
      if (!reach[u] && arcs_[a ^ 1].residual > tolerance_) {
        reach[u] = 1;
        queue.push_back(u);
      }
    }
  }
  return reach;
}

}  // namespace bframe
