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

#pragma once

#include <vector>

namespace bframe {

/// Directed flow network solved with Dinic's algorithm (BFS level graph plus
/// blocking flows along augmenting paths).
class FlowNetwork {
 public:
  explicit FlowNetwork(int nodes);

  int node_count() const { return static_cast<int>(head_.size()); }

  /// Adds arc u->v with capacity `cap` and the paired arc v->u with
  /// capacity `reverse_cap`. Capacities must be finite and >= 0.
  void add_edge(int u, int v, double cap, double reverse_cap = 0.0);

  double max_flow(int source, int sink);

  /// After max_flow: 1 for nodes that can still reach `sink` in the residual
  /// graph (the smallest sink side of a minimum cut), 0 otherwise.
  std::vector<char> sink_side(int sink) const;

 private:
  struct Arc {
    int to;
    int next;
    double residual;
  };
  bool build_levels(int s, int t);
  double push(int u, int t, double limit);

  std::vector<int> head_;
  std::vector<Arc> arcs_;
  std::vector<int> level_;
  std::vector<int> cursor_;
  double tolerance_ = 0.0;
};

}  // namespace bframe
