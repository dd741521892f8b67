#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tokmc/lts.hpp"
#include "tokmc/process_template.hpp"

namespace tokmc {

/// Finite digraph on vertices 1..n with an initial token vertex and no
/// self-loops. Direction labelings, when present, are total on the edge set.
struct Topology {
  std::string name;
  int vertex_count = 0;
  std::vector<std::pair<int, int>> edges;     // 1-based, ordered pairs
  int initial_vertex = 1;
  std::map<std::pair<int, int>, std::string> snd_label;  // empty = unlabeled
  std::map<std::pair<int, int>, std::string> rcv_label;

  bool direction_labeled() const { return !snd_label.empty() || !rcv_label.empty(); }
  bool has_edge(int u, int v) const;
  std::vector<std::vector<int>> successors() const;  // index 1..n
};

/// Tuple of pairwise distinct vertices (the tracked processes g_1..g_k).
struct IndexTuple {
  std::vector<int> entries;

  int size() const { return static_cast<int>(entries.size()); }
  void validate_for(const Topology& g) const;  // throws on repeats/range
};

Topology make_ring(int n);
Topology make_biring(int n);    // carries cw/ccw direction labels
Topology make_clique(int n);
Topology make_star(int n);      // hub = vertex 1, bidirectional hub-leaf edges
Topology make_lasso(int ring_size, int tail_len);  // test helper, initial at tail start

ValidationReport validate_topology(const Topology& g);

/// The topology viewed as an LTS: states are vertices, transitions are edges,
/// g_i is labeled with its position {i}, all other vertices with {}.
Lts graph_lts(const Topology& g, const IndexTuple& tuple);

/// Family shorthands: "ring:6", "biring:5", "clique:4", "star:4".
std::optional<Topology> parse_family_shorthand(const std::string& text);

std::string topology_to_dot(const Topology& g);

}  // namespace tokmc
