#pragma once

#include <string>
#include <vector>

#include "tokmc/process_template.hpp"
#include "tokmc/topology.hpp"

namespace tokmc {

/// Deterministic two-counter machine with a unique halting state.
struct CounterMachine {
  struct Instr {
    enum class Op { Inc, Dec, Tz, Goto };
    Op op = Op::Goto;
    int counter = 1;       // 1 or 2 (Inc/Dec/Tz)
    int target = 0;        // Inc/Dec/Goto
    int target_zero = 0;   // Tz
    int target_nonzero = 0;
  };
  std::string name;
  int num_states = 0;
  int initial = 0;
  int halt = 0;
  std::vector<Instr> program;  // indexed by control state; entry at halt unused

  void validate() const;  // throws on out-of-range targets
};

struct CmStep {
  int state;
  long c1, c2;
};

struct CmRun {
  std::vector<CmStep> trace;
  bool halted = false;
  bool looped = false;  // stuck by the n-partial rule (overflow / dec at zero)
};

/// Direct interpretation with counters saturating at `counter_bound`: an
/// increment at the bound (or a decrement at zero) makes the machine loop
/// forever in place, per the n-partial-run rule.
CmRun cm_reference_run(const CounterMachine& cm, long counter_bound, int max_steps);

struct SimBundle {
  ProcessTemplate tpl;
  Topology topo;           // biring(n)
  std::string halt_atom = "HALT";
};

/// Bi-directional-ring simulation at ring size n: the process starting with
/// the token runs the finite control, the other n-1 processes each hold one
/// bit per counter; commands are signaled by mod-6 rotation rounds (cw) and
/// executed by ccw sweeps. The composed system reaches a HALT-labeled state
/// iff the machine halts with counters bounded by n-1. Ring sizes above 6
/// are rejected unless `allow_large`.
SimBundle cm_to_biring(const CounterMachine& cm, int n, bool allow_large = false);

/// Hand-written demo machines: "spin", "count-two", "halt-now", "use-both",
/// "count-three".
CounterMachine builtin_cm(const std::string& name);
std::vector<std::string> builtin_cm_names();

}  // namespace tokmc
