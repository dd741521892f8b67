#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "tokmc/lts.hpp"
#include "tokmc/topology.hpp"

namespace tokmc {

/// Vertex marking mu_d: at depth 0 the nominal label of the graph LTS, at
/// depth d > 0 the finite set of destuttered mu_{d-1} strings of walks that
/// reach the tracked tuple. Letters are canonical serializations of the
/// depth-(d-1) markings, so equality is bytewise.
struct Marking {
  int depth = 0;
  std::string label;                    // depth 0: canonical label-set serial
  std::vector<Word> words;              // depth > 0: sorted set of words
  std::string serial() const;
};

/// suffix order on string sets: X <= Y iff every x in X is a suffix of some y in Y.
bool suffix_leq(const std::vector<Word>& x, const std::vector<Word>& y);

/// Markings of every vertex at depths 0..d. table[j][v-1] is mu_j(v).
struct MarkingTable {
  std::vector<std::vector<Marking>> table;
  const Marking& at(int depth, int vertex) const { return table[depth][vertex - 1]; }
};

MarkingTable mark(const Topology& g, const IndexTuple& tuple, int depth);

/// Quotient of graph_lts(g, tuple) by equal mu_d. Class identity is the
/// canonical marking serialization; quotient self-loops are kept whenever two
/// distinct members of a class are connected in g.
struct ContractionLts {
  int depth = 0;
  std::vector<std::string> class_serials;          // sorted; node identity
  std::vector<std::vector<int>> members;           // vertices per class (1-based)
  std::vector<std::string> class_labels;           // nominal label serial per class
  std::set<std::pair<int, int>> edges;             // class index pairs, self-loops included
  int initial_class = -1;

  int num_classes() const { return static_cast<int>(class_serials.size()); }
  bool has_self_loop(int c) const { return edges.count({c, c}) > 0; }
  /// Structural fingerprint; `with_self_loops=false` gives the stutter-insensitive
  /// form used for cross-size contraction-set comparisons.
  std::string canonical_serial(bool with_self_loops = true) const;
  Lts as_lts(bool with_self_loops = true) const;
};

ContractionLts contract(const Topology& g, const IndexTuple& tuple, int depth);

/// True iff both d-contractions are equal as marking-identified labeled
/// graphs with equal initial-class markings; under the fair-path semantics
/// this implies agreement on all d-CTL*\X formulas of the projected systems.
bool equivalent_graphs(const Topology& g1, const IndexTuple& t1, const Topology& g2,
                       const IndexTuple& t2, int depth);

/// Divergence-blind stuttering bisimilarity of the initial states, decided by
/// partition refinement over the disjoint union.
bool stutter_bisim_equivalent(const Lts& a, const Lts& b);

std::string contraction_to_dot(const ContractionLts& c);
std::string marking_serial_json(const Topology& g, const IndexTuple& tuple, int depth);

}  // namespace tokmc
