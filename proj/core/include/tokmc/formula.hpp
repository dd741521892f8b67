#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tokmc/topology.hpp"

namespace tokmc::itl {

enum class QuantKind { Forall, Exists };

/// One prefix entry. `distinct` constrains the value to differ from every
/// variable bound before this one; `in_edges_of` restricts the range to the
/// successors of an earlier variable's value.
struct Quantifier {
  QuantKind kind = QuantKind::Forall;
  std::string var;
  bool distinct = false;
  std::optional<std::string> in_edges_of;

  bool operator==(const Quantifier&) const = default;
};

struct StateNode;
struct PathNode;
using StatePtr = std::shared_ptr<const StateNode>;
using PathPtr = std::shared_ptr<const PathNode>;

struct StateNode {
  enum Kind { True, Atom, VarEq, Not, And, Or, Implies, PathQuant } kind = True;
  std::string prop;   // Atom: proposition name ("tok" is the built-in)
  std::string var;    // Atom: index variable; VarEq: left variable
  std::string var2;   // VarEq: right variable
  bool forall_paths = false;  // PathQuant: A when true, E when false
  StatePtr a, b;
  PathPtr path;
};

struct PathNode {
  enum Kind { StateEmbed, Not, And, Or, Implies, Until, Finally, Globally } kind = StateEmbed;
  StatePtr state;
  PathPtr a, b;
};

struct Formula {
  std::vector<Quantifier> prefix;
  StatePtr body;
};

// constructors
StatePtr mk_true();
StatePtr mk_atom(std::string prop, std::string var);
StatePtr mk_eq(std::string x, std::string y);
StatePtr mk_not(StatePtr a);
StatePtr mk_and(StatePtr a, StatePtr b);
StatePtr mk_or(StatePtr a, StatePtr b);
StatePtr mk_implies(StatePtr a, StatePtr b);
StatePtr mk_quant(bool forall, PathPtr p);
PathPtr pk_state(StatePtr s);
PathPtr pk_not(PathPtr a);
PathPtr pk_and(PathPtr a, PathPtr b);
PathPtr pk_or(PathPtr a, PathPtr b);
PathPtr pk_implies(PathPtr a, PathPtr b);
PathPtr pk_until(PathPtr a, PathPtr b);
PathPtr pk_finally(PathPtr a);
PathPtr pk_globally(PathPtr a);

bool equal(const StatePtr& a, const StatePtr& b);
bool equal(const PathPtr& a, const PathPtr& b);
bool equal(const Formula& a, const Formula& b);

/// Parse error with 1-based position information.
struct ParseError : std::runtime_error {
  int position;
  ParseError(const std::string& what, int pos)
      : std::runtime_error(what + " (at offset " + std::to_string(pos) + ")"), position(pos) {}
};

Formula parse_formula(const std::string& text);
std::string print_formula(const Formula& f);
std::string print_state(const StatePtr& s);

struct FormulaProfile {
  int k = 0;          // prefix length
  int d = 0;          // path-quantifier nesting depth
  bool alternating = false;
};

FormulaProfile profile(const Formula& f);

/// Quantifier expansion over the vertices of a topology. Leaves carry the
/// vertex assignment and the closed body (atoms rewritten to p@position,
/// index equalities resolved to constants).
struct EvalPlan {
  enum Kind { AndNode, OrNode, Leaf } kind = Leaf;
  std::vector<EvalPlan> children;
  std::vector<int> assignment;  // Leaf: vertex per prefix position (1-based)
  StatePtr body;                // Leaf: closed body over positional atoms
};

EvalPlan instantiate(const Formula& f, const Topology& g);

/// Closed body for a fixed assignment: atoms become p@i by position,
/// equality atoms become constants.
StatePtr close_body(const Formula& f, const std::vector<int>& assignment);

Formula gen_phi_k(int k);
Formula gen_adj_formula();
Formula random_formula(int k, int d, int size, uint64_t seed,
                       const std::vector<std::string>& props = {"p", "q"});
/// Random closed LTL\X path formula over the given atoms (oracle test diet).
PathPtr random_path_formula(int max_ops, uint64_t seed, const std::vector<std::string>& atoms);

}  // namespace tokmc::itl
