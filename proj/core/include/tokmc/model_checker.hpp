#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tokmc/buchi.hpp"
#include "tokmc/formula.hpp"
#include "tokmc/lts.hpp"
#include "tokmc/system.hpp"

namespace tokmc {

/// Path quantification mode. token_global restricts path quantifiers to runs
/// where the token visits every vertex infinitely often; it carries one
/// state-class per vertex and is only constructible from a SystemLts.
struct FairnessSpec {
  enum class Mode { none, token_global };
  Mode mode = Mode::none;
  std::vector<std::vector<int>> classes;  // state sets, each to be visited i.o.

  static FairnessSpec none();
  static FairnessSpec token_global(const SystemLts& sys);
  /// Explicit constraint classes (used by the randomized agreement suite).
  static FairnessSpec explicit_classes(std::vector<std::vector<int>> classes);
};

/// Closed CTL*\X evaluation by recursive innermost-E elimination; E-checks
/// decide per-state product nonemptiness against the tableau automaton with
/// fairness joined into the generalized acceptance.
bool check(const Lts& lts, const itl::StatePtr& f, const FairnessSpec& fair);
std::vector<char> check_sat_states(const Lts& lts, const itl::StatePtr& f, const FairnessSpec& fair);

/// Independent oracle for E over LTL\X path formulas: declarative
/// consistent-subset tableau, nested-DFS emptiness, every positive answer
/// verified on an explicit lasso by direct semantics. Documented bound:
/// intended for small inputs (roughly <= 12 states); throws when the closure
/// or search budget is exceeded.
bool oracle_check(const Lts& lts, const itl::PathPtr& f, const FairnessSpec& fair);
std::vector<char> oracle_sat_states(const Lts& lts, const itl::PathPtr& f, const FairnessSpec& fair);

/// Direct LTL\X semantics on the ultimately periodic word stem . cycle^w,
/// positions labeled by atom sets. Exposed for the oracle's witness audit and
/// for tests.
bool eval_on_lasso(const itl::PathPtr& f, const std::vector<std::vector<std::string>>& stem,
                   const std::vector<std::vector<std::string>>& cycle);

struct Counterexample {
  std::vector<int> assignment;          // vertex per quantifier position
  std::vector<std::string> stem;        // global state names
  std::vector<std::string> cycle;
  std::string to_json() const;
};

struct IndexedCheckResult {
  bool holds = false;
  std::optional<Counterexample> counterexample;
  int leaf_checks = 0;
  int memo_hits = 0;
};

struct IndexedCheckOptions {
  bool memoize_by_contraction = true;  // reuse leaf verdicts across assignments
                                       // with equal fair-form contractions
  bool want_counterexample = true;
};

IndexedCheckResult check_indexed(const ProcessTemplate& tpl, const Topology& g,
                                 const itl::Formula& f, const FairnessSpec::Mode fair_mode,
                                 const IndexedCheckOptions& opts = {});

/// Fair accepting lasso for E(f) from `state`, if one exists (used for
/// counterexample extraction).
std::optional<std::pair<std::vector<int>, std::vector<int>>> witness_lasso(
    const Lts& lts, const itl::PathPtr& f, const FairnessSpec& fair, int state);

}  // namespace tokmc
