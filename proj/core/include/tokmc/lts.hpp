#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace tokmc {

/// Finite labeled transition system. States are dense 0-based ids; action
/// labels live in `actions` and transitions refer to them by index.
struct Lts {
  struct Edge {
    int action;
    int to;
  };

  int num_states = 0;
  std::vector<int> initial;
  std::vector<std::string> actions;
  std::vector<std::vector<Edge>> succ;             // indexed by source state
  std::vector<std::vector<std::string>> labels;    // sorted atom names per state
  std::vector<std::string> state_names;            // optional, for printing

  // Atom universe handling. When `positional_arity` >= 0 the LTS is a
  // projection and any atom of the form "<ident>@<j>" with 1 <= j <= arity is
  // admissible (absent atoms are simply false). Otherwise the universe is
  // `declared_atoms` plus every atom appearing in `labels`.
  int positional_arity = -1;
  std::vector<std::string> declared_atoms;

  int add_state(std::vector<std::string> label, std::string name = {});
  int action_id(const std::string& name);          // interns the action label
  void add_edge(int from, const std::string& action, int to);
  void add_edge(int from, int action, int to);

  bool atom_admissible(const std::string& atom) const;
  int num_transitions() const;
  void validate() const;                           // throws on malformed data
};

/// Finite word whose letters are canonical serializations (sets serialize as
/// sorted sequences, so nested markings compare bytewise).
using Letter = std::string;
using Word = std::vector<Letter>;

Word destutter(const Word& w);

/// pos_0 = 0 and pos_i = the largest index j (1-based) such that
/// destutter(w[1..j]) equals the first i letters of destutter(w).
std::vector<int> destutter_positions(const Word& w);

/// Consecutive index blocks (1-based, inclusive) of two words with equal
/// destutterings; block i of both words carries the same letter.
struct PartitionWitness {
  std::vector<std::pair<int, int>> blocks_a;
  std::vector<std::pair<int, int>> blocks_b;
};

std::optional<PartitionWitness> destutter_partition_witness(const Word& a, const Word& b);

/// Cycle (closed walk, first state repeated at the end) inside the fragment
/// reachable from `from` using only `allowed` action labels; nullopt if that
/// restricted reachable subgraph is acyclic.
std::optional<std::vector<int>> find_cycle_within(const Lts& lts,
                                                  const std::vector<std::string>& allowed,
                                                  const std::vector<int>& from);

std::string lts_to_dot(const Lts& lts, const std::string& graph_name = "lts");

}  // namespace tokmc
