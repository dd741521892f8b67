#pragma once

#include <memory>
#include <string>
#include <vector>

#include "tokmc/formula.hpp"

namespace tokmc {

/// X-free LTL over integer atom ids, in negation normal form (Release is the
/// dual of Until; F/G desugar to Until/Release at construction).
struct Ltl {
  enum Kind { True, False, Lit, And, Or, Until, Release } kind = True;
  int atom = -1;      // Lit
  bool negated = false;
  std::shared_ptr<const Ltl> a, b;
};
using LtlPtr = std::shared_ptr<const Ltl>;

LtlPtr ltl_true();
LtlPtr ltl_false();
LtlPtr ltl_lit(int atom, bool negated);
LtlPtr ltl_and(LtlPtr a, LtlPtr b);
LtlPtr ltl_or(LtlPtr a, LtlPtr b);
LtlPtr ltl_until(LtlPtr a, LtlPtr b);
LtlPtr ltl_release(LtlPtr a, LtlPtr b);
LtlPtr ltl_negate(LtlPtr a);
std::string ltl_to_string(const Ltl& f);

/// Generalized Buchi automaton produced by the node-splitting tableau.
/// A state accepts exactly the letters satisfying its literal constraints;
/// a run q1 q2 ... over w1 w2 ... needs w_i compatible with q_i throughout.
struct BuchiAutomaton {
  struct State {
    std::vector<int> pos_lits;  // atoms required true, sorted
    std::vector<int> neg_lits;  // atoms required false, sorted
  };
  int atom_count = 0;
  std::vector<State> states;
  std::vector<int> initial;
  std::vector<std::vector<int>> succ;
  std::vector<std::vector<int>> acceptance;  // one set per until subformula

  bool compatible(int state, const std::vector<char>& assignment) const;
  /// Adds a sink so every state has a successor for every letter.
  void complete();
  int num_edges() const;
};

BuchiAutomaton ltl_to_buchi(const LtlPtr& formula, int atom_count);

}  // namespace tokmc
