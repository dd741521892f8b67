#pragma once

#include <string>
#include <vector>

#include "tokmc/lts.hpp"
#include "tokmc/process_template.hpp"
#include "tokmc/topology.hpp"

namespace tokmc {

/// Reachable fragment of the composed token-passing system P^G. Global
/// states are interned local-state vectors; exactly one process holds the
/// token in every reachable state.
struct SystemLts {
  Lts lts;  // actions: internal labels plus "tok"; per-state labels left empty
  ProcessTemplate tpl;
  Topology topo;
  std::vector<std::vector<int>> locals;  // per state: template state per vertex (index 0 = vertex 1)
  std::vector<int> token_at;             // per state: vertex holding the token (1-based)

  int vertex_count() const { return topo.vertex_count; }
  /// Indexed atoms of a global state: p@v for every template prop p of the
  /// local state at vertex v, plus tok@v at the token holder.
  std::vector<std::string> indexed_label(int state) const;
  std::string state_name(int state) const;
};

/// BFS product construction from the unique initial state. Throws on
/// template/topology direction mismatch or when `max_states` is exceeded.
SystemLts build_system(const ProcessTemplate& t, const Topology& g, int max_states = 2000000);

/// Projection onto a tuple of vertices: position-indexed labels p@i / tok@i,
/// every other atom dropped. Repeated entries are allowed here (the
/// quantifier semantics may assign two variables the same vertex).
Lts project(const SystemLts& sys, const std::vector<int>& tuple);

int token_position(const SystemLts& sys, const std::vector<int>& global_state);

/// True iff no reachable cycle of the system uses internal actions only,
/// i.e. every infinite run keeps passing the token.
bool every_cycle_passes_token(const SystemLts& sys);

/// Executable form of the token-pushing construction: moves the token along
/// a simple vertex path while keeping off-path processes frozen.
struct TokenPushResult {
  std::vector<int> states;                // state ids in sys, starts at `from`
  std::vector<std::string> actions;       // labels between consecutive states
};

TokenPushResult token_pushing_path(const SystemLts& sys, int from_state,
                                   const std::vector<int>& vertex_path,
                                   const std::string& p_state, const std::string& q_state,
                                   const IndexTuple& tracked);

std::string system_to_dot(const SystemLts& sys);

}  // namespace tokmc
