#include "tokmc/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tokmc::itl {

StatePtr mk_true() {
  auto n = std::make_shared<StateNode>();
  n->kind = StateNode::True;
  return n;
}
StatePtr mk_atom(std::string prop, std::string var) {
  auto n = std::make_shared<StateNode>();
  n->kind = StateNode::Atom;
  n->prop = std::move(prop);
  n->var = std::move(var);
  return n;
}
StatePtr mk_eq(std::string x, std::string y) {
  auto n = std::make_shared<StateNode>();
  n->kind = StateNode::VarEq;
  n->var = std::move(x);
  n->var2 = std::move(y);
  return n;
}
StatePtr mk_not(StatePtr a) {
  auto n = std::make_shared<StateNode>();
  n->kind = StateNode::Not;
  n->a = std::move(a);
  return n;
}
static StatePtr mk_bin(StateNode::Kind k, StatePtr a, StatePtr b) {
  auto n = std::make_shared<StateNode>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}
StatePtr mk_and(StatePtr a, StatePtr b) { return mk_bin(StateNode::And, std::move(a), std::move(b)); }
StatePtr mk_or(StatePtr a, StatePtr b) { return mk_bin(StateNode::Or, std::move(a), std::move(b)); }
StatePtr mk_implies(StatePtr a, StatePtr b) { return mk_bin(StateNode::Implies, std::move(a), std::move(b)); }

PathPtr pk_state(StatePtr s) {
  auto n = std::make_shared<PathNode>();
  n->kind = PathNode::StateEmbed;
  n->state = std::move(s);
  return n;
}
static PathPtr pk_un(PathNode::Kind k, PathPtr a) {
  auto n = std::make_shared<PathNode>();
  n->kind = k;
  n->a = std::move(a);
  return n;
}
static PathPtr pk_bin(PathNode::Kind k, PathPtr a, PathPtr b) {
  auto n = std::make_shared<PathNode>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}
PathPtr pk_not(PathPtr a) { return pk_un(PathNode::Not, std::move(a)); }
PathPtr pk_finally(PathPtr a) { return pk_un(PathNode::Finally, std::move(a)); }
PathPtr pk_globally(PathPtr a) { return pk_un(PathNode::Globally, std::move(a)); }
PathPtr pk_and(PathPtr a, PathPtr b) { return pk_bin(PathNode::And, std::move(a), std::move(b)); }
PathPtr pk_or(PathPtr a, PathPtr b) { return pk_bin(PathNode::Or, std::move(a), std::move(b)); }
PathPtr pk_implies(PathPtr a, PathPtr b) { return pk_bin(PathNode::Implies, std::move(a), std::move(b)); }
PathPtr pk_until(PathPtr a, PathPtr b) { return pk_bin(PathNode::Until, std::move(a), std::move(b)); }

// ---- canonicalization: pure-state path subtrees collapse to one StateEmbed

namespace {

std::optional<StatePtr> demote(const PathPtr& p) {
  switch (p->kind) {
    case PathNode::StateEmbed:
      return p->state;
    case PathNode::Not: {
      auto a = demote(p->a);
      if (!a) return std::nullopt;
      return mk_not(*a);
    }
    case PathNode::And:
    case PathNode::Or:
    case PathNode::Implies: {
      auto a = demote(p->a);
      auto b = demote(p->b);
      if (!a || !b) return std::nullopt;
      StateNode::Kind k = p->kind == PathNode::And   ? StateNode::And
                          : p->kind == PathNode::Or  ? StateNode::Or
                                                     : StateNode::Implies;
      return mk_bin(k, *a, *b);
    }
    default:
      return std::nullopt;
  }
}

PathPtr normalize(const PathPtr& p) {
  if (auto s = demote(p)) return pk_state(*s);
  switch (p->kind) {
    case PathNode::Not:
    case PathNode::Finally:
    case PathNode::Globally:
      return pk_un(p->kind, normalize(p->a));
    case PathNode::And:
    case PathNode::Or:
    case PathNode::Implies:
    case PathNode::Until:
      return pk_bin(p->kind, normalize(p->a), normalize(p->b));
    default:
      return p;
  }
}

}  // namespace

StatePtr mk_quant(bool forall, PathPtr p) {
  auto n = std::make_shared<StateNode>();
  n->kind = StateNode::PathQuant;
  n->forall_paths = forall;
  n->path = normalize(p);
  return n;
}

bool equal(const StatePtr& a, const StatePtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case StateNode::True: return true;
    case StateNode::Atom: return a->prop == b->prop && a->var == b->var;
    case StateNode::VarEq: return a->var == b->var && a->var2 == b->var2;
    case StateNode::Not: return equal(a->a, b->a);
    case StateNode::And:
    case StateNode::Or:
    case StateNode::Implies: return equal(a->a, b->a) && equal(a->b, b->b);
    case StateNode::PathQuant: return a->forall_paths == b->forall_paths && equal(a->path, b->path);
  }
  return false;
}

bool equal(const PathPtr& a, const PathPtr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case PathNode::StateEmbed: return equal(a->state, b->state);
    case PathNode::Not:
    case PathNode::Finally:
    case PathNode::Globally: return equal(a->a, b->a);
    case PathNode::And:
    case PathNode::Or:
    case PathNode::Implies:
    case PathNode::Until: return equal(a->a, b->a) && equal(a->b, b->b);
  }
  return false;
}

bool equal(const Formula& a, const Formula& b) {
  return a.prefix == b.prefix && equal(a.body, b.body);
}

// ---- parser

namespace {

struct Token {
  enum Kind { Ident, Dot, Bang, Amp, Pipe, Arrow, LParen, RParen, At, Eq, End } kind;
  std::string text;
  int pos;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (isspace(static_cast<unsigned char>(c))) { ++i; continue; }
    int pos = static_cast<int>(i) + 1;
    if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() && (isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' || s[j] == '\''))
        ++j;
      out.push_back({Token::Ident, s.substr(i, j - i), pos});
      i = j;
      continue;
    }
    switch (c) {
      case '.': out.push_back({Token::Dot, ".", pos}); ++i; break;
      case '!': out.push_back({Token::Bang, "!", pos}); ++i; break;
      case '&': out.push_back({Token::Amp, "&", pos}); ++i; break;
      case '|': out.push_back({Token::Pipe, "|", pos}); ++i; break;
      case '(': out.push_back({Token::LParen, "(", pos}); ++i; break;
      case ')': out.push_back({Token::RParen, ")", pos}); ++i; break;
      case '@': out.push_back({Token::At, "@", pos}); ++i; break;
      case '=': out.push_back({Token::Eq, "=", pos}); ++i; break;
      case '-':
        if (i + 1 < s.size() && s[i + 1] == '>') {
          out.push_back({Token::Arrow, "->", pos});
          i += 2;
          break;
        }
        throw ParseError("stray '-'", pos);
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", pos);
    }
  }
  out.push_back({Token::End, "", static_cast<int>(s.size()) + 1});
  return out;
}

class Parser {
 public:
  explicit Parser(const std::string& text) : toks_(lex(text)) {}

  Formula parse() {
    Formula f;
    while (peek().kind == Token::Ident && (peek().text == "forall" || peek().text == "exists")) {
      QuantKind kind = peek().text == "forall" ? QuantKind::Forall : QuantKind::Exists;
      next();
      std::vector<std::string> vars;
      while (peek().kind == Token::Ident && !is_keyword(peek().text) && peek().text != "true")
        vars.push_back(next().text);
      if (vars.empty()) throw ParseError("quantifier needs at least one variable", peek().pos);
      for (const auto& v : vars)
        if (v == "A" || v == "E" || v == "F" || v == "G" || v == "U" || v == "X" || v == "tok" ||
            v == "true")
          throw ParseError("reserved word used as index variable: '" + v + "'", peek().pos);
      bool distinct = false;
      std::optional<std::string> in_e;
      if (peek().kind == Token::Ident && peek().text == "distinct") { distinct = true; next(); }
      if (peek().kind == Token::Ident && peek().text == "in") {
        next();
        expect_ident("E");
        expect(Token::LParen);
        in_e = expect_any_ident();
        expect(Token::RParen);
      }
      if (in_e) {
        bool earlier = false;
        for (const auto& q : f.prefix) earlier = earlier || q.var == *in_e;
        if (!earlier)
          throw ParseError("edge constraint must reference an earlier variable: '" + *in_e + "'",
                           peek().pos);
      }
      for (const auto& v : vars) {
        for (const auto& q : f.prefix)
          if (q.var == v) throw ParseError("duplicate quantified variable '" + v + "'", peek().pos);
        f.prefix.push_back({kind, v, distinct, in_e});
      }
    }
    expect(Token::Dot);
    bound_.clear();
    for (const auto& q : f.prefix) bound_.insert(q.var);
    f.body = parse_state_implies();
    if (peek().kind != Token::End) throw ParseError("trailing input after formula", peek().pos);
    return f;
  }

 private:
  std::vector<Token> toks_;
  size_t at_ = 0;
  std::set<std::string> bound_;

  static bool is_keyword(const std::string& t) {
    return t == "forall" || t == "exists" || t == "distinct" || t == "in";
  }

  const Token& peek(int off = 0) const { return toks_[std::min(at_ + off, toks_.size() - 1)]; }
  Token next() { return toks_[at_ < toks_.size() - 1 ? at_++ : at_]; }
  void expect(Token::Kind k) {
    if (peek().kind != k) throw ParseError("unexpected token '" + peek().text + "'", peek().pos);
    next();
  }
  void expect_ident(const std::string& word) {
    if (peek().kind != Token::Ident || peek().text != word)
      throw ParseError("expected '" + word + "'", peek().pos);
    next();
  }
  std::string expect_any_ident() {
    if (peek().kind != Token::Ident) throw ParseError("expected identifier", peek().pos);
    return next().text;
  }

  void reject_body_quantifier() {
    if (peek().kind == Token::Ident && (peek().text == "forall" || peek().text == "exists"))
      throw ParseError("quantifiers must form a prenex block before '.'", peek().pos);
  }
  void reject_next_operator() {
    if (peek().kind == Token::Ident && peek().text == "X")
      throw ParseError("the next-time operator X is not part of this logic", peek().pos);
  }

  // ---- state grammar
  StatePtr parse_state_implies() {
    StatePtr a = parse_state_or();
    if (peek().kind == Token::Arrow) {
      next();
      return mk_implies(a, parse_state_implies());
    }
    return a;
  }
  StatePtr parse_state_or() {
    StatePtr a = parse_state_and();
    while (peek().kind == Token::Pipe) {
      next();
      a = mk_or(a, parse_state_and());
    }
    return a;
  }
  StatePtr parse_state_and() {
    StatePtr a = parse_state_unary();
    while (peek().kind == Token::Amp) {
      next();
      a = mk_and(a, parse_state_unary());
    }
    return a;
  }
  StatePtr parse_state_unary() {
    reject_body_quantifier();
    reject_next_operator();
    if (peek().kind == Token::Bang) {
      next();
      return mk_not(parse_state_unary());
    }
    if (peek().kind == Token::LParen) {
      next();
      StatePtr a = parse_state_implies();
      expect(Token::RParen);
      return a;
    }
    if (peek().kind == Token::Ident) {
      const std::string& t = peek().text;
      if (t == "A" || t == "E") {
        bool forall = t == "A";
        next();
        return mk_quant(forall, parse_path_unary());
      }
      if (t == "true") { next(); return mk_true(); }
      return parse_atom();
    }
    throw ParseError("expected a state formula, got '" + peek().text + "'", peek().pos);
  }
  StatePtr parse_atom() {
    std::string name = expect_any_ident();
    if (peek().kind == Token::At) {
      next();
      std::string var = expect_any_ident();
      if (!bound_.count(var))
        throw ParseError("unbound index variable '" + var + "'", peek().pos);
      return mk_atom(name, var);
    }
    if (peek().kind == Token::Eq) {
      next();
      std::string var2 = expect_any_ident();
      if (!bound_.count(name)) throw ParseError("unbound index variable '" + name + "'", peek().pos);
      if (!bound_.count(var2)) throw ParseError("unbound index variable '" + var2 + "'", peek().pos);
      return mk_eq(name, var2);
    }
    throw ParseError("expected '@' or '=' after identifier '" + name + "'", peek().pos);
  }

  // ---- path grammar (U binds tighter than &, | and ->; unary tightest)
  PathPtr parse_path_implies() {
    PathPtr a = parse_path_or();
    if (peek().kind == Token::Arrow) {
      next();
      return pk_implies(a, parse_path_implies());
    }
    return a;
  }
  PathPtr parse_path_or() {
    PathPtr a = parse_path_and();
    while (peek().kind == Token::Pipe) {
      next();
      a = pk_or(a, parse_path_and());
    }
    return a;
  }
  PathPtr parse_path_and() {
    PathPtr a = parse_path_until();
    while (peek().kind == Token::Amp) {
      next();
      a = pk_and(a, parse_path_until());
    }
    return a;
  }
  PathPtr parse_path_until() {
    PathPtr a = parse_path_unary();
    if (peek().kind == Token::Ident && peek().text == "U") {
      next();
      return pk_until(a, parse_path_until());
    }
    return a;
  }
  PathPtr parse_path_unary() {
    reject_body_quantifier();
    reject_next_operator();
    if (peek().kind == Token::Bang) {
      next();
      return pk_not(parse_path_unary());
    }
    if (peek().kind == Token::LParen) {
      next();
      PathPtr a = parse_path_implies();
      expect(Token::RParen);
      return a;
    }
    if (peek().kind == Token::Ident) {
      const std::string& t = peek().text;
      if (t == "F") { next(); return pk_finally(parse_path_unary()); }
      if (t == "G") { next(); return pk_globally(parse_path_unary()); }
      if (t == "A" || t == "E") {
        bool forall = t == "A";
        next();
        return pk_state(mk_quant(forall, parse_path_unary()));
      }
      if (t == "true") { next(); return pk_state(mk_true()); }
      return pk_state(parse_atom());
    }
    throw ParseError("expected a path formula, got '" + peek().text + "'", peek().pos);
  }
};

}  // namespace

Formula parse_formula(const std::string& text) {
  Parser p(text);
  Formula f = p.parse();
  // re-normalize the body's path arguments (parser builds them via mk_quant,
  // which already normalizes, so this is cheap and idempotent)
  return f;
}

// ---- printer (binary operators fully parenthesized)

static void print_state(std::ostringstream& os, const StatePtr& s);

static void print_path(std::ostringstream& os, const PathPtr& p) {
  switch (p->kind) {
    case PathNode::StateEmbed: print_state(os, p->state); return;
    case PathNode::Not: os << "!"; print_path(os, p->a); return;
    case PathNode::Finally: os << "F "; print_path(os, p->a); return;
    case PathNode::Globally: os << "G "; print_path(os, p->a); return;
    case PathNode::And:
    case PathNode::Or:
    case PathNode::Implies:
    case PathNode::Until: {
      const char* op = p->kind == PathNode::And     ? " & "
                       : p->kind == PathNode::Or    ? " | "
                       : p->kind == PathNode::Until ? " U "
                                                    : " -> ";
      os << "(";
      print_path(os, p->a);
      os << op;
      print_path(os, p->b);
      os << ")";
      return;
    }
  }
}

static void print_state(std::ostringstream& os, const StatePtr& s) {
  switch (s->kind) {
    case StateNode::True: os << "true"; return;
    case StateNode::Atom:
      os << s->prop;
      if (!s->var.empty()) os << "@" << s->var;
      return;
    case StateNode::VarEq: os << "(" << s->var << " = " << s->var2 << ")"; return;
    case StateNode::Not: os << "!"; print_state(os, s->a); return;
    case StateNode::PathQuant:
      os << (s->forall_paths ? "A " : "E ");
      print_path(os, s->path);
      return;
    case StateNode::And:
    case StateNode::Or:
    case StateNode::Implies: {
      const char* op = s->kind == StateNode::And ? " & " : s->kind == StateNode::Or ? " | " : " -> ";
      os << "(";
      print_state(os, s->a);
      os << op;
      print_state(os, s->b);
      os << ")";
      return;
    }
  }
}

std::string print_state(const StatePtr& s) {
  std::ostringstream os;
  print_state(os, s);
  return os.str();
}

std::string print_formula(const Formula& f) {
  std::ostringstream os;
  for (const auto& q : f.prefix) {
    os << (q.kind == QuantKind::Forall ? "forall " : "exists ") << q.var;
    if (q.distinct) os << " distinct";
    if (q.in_edges_of) os << " in E(" << *q.in_edges_of << ")";
    os << " ";
  }
  os << ". ";
  print_state(os, f.body);
  return os.str();
}

// ---- profile

namespace {

int sdepth(const StatePtr& s);

int pdepth(const PathPtr& p) {
  switch (p->kind) {
    case PathNode::StateEmbed: return sdepth(p->state);
    case PathNode::Not:
    case PathNode::Finally:
    case PathNode::Globally: return pdepth(p->a);
    default: return std::max(pdepth(p->a), pdepth(p->b));
  }
}

int sdepth(const StatePtr& s) {
  switch (s->kind) {
    case StateNode::True:
    case StateNode::Atom:
    case StateNode::VarEq: return 0;
    case StateNode::Not: return sdepth(s->a);
    case StateNode::PathQuant: return 1 + pdepth(s->path);
    default: return std::max(sdepth(s->a), sdepth(s->b));
  }
}

}  // namespace

FormulaProfile profile(const Formula& f) {
  FormulaProfile p;
  p.k = static_cast<int>(f.prefix.size());
  p.d = sdepth(f.body);
  bool has_a = false, has_e = false;
  for (const auto& q : f.prefix) (q.kind == QuantKind::Forall ? has_a : has_e) = true;
  p.alternating = has_a && has_e;
  return p;
}

// ---- instantiation

namespace {

StatePtr close_state(const StatePtr& s, const std::vector<std::string>& vars,
                     const std::vector<int>& assignment);

PathPtr close_path(const PathPtr& p, const std::vector<std::string>& vars,
                   const std::vector<int>& assignment) {
  switch (p->kind) {
    case PathNode::StateEmbed: return pk_state(close_state(p->state, vars, assignment));
    case PathNode::Not:
    case PathNode::Finally:
    case PathNode::Globally: return pk_un(p->kind, close_path(p->a, vars, assignment));
    default:
      return pk_bin(p->kind, close_path(p->a, vars, assignment), close_path(p->b, vars, assignment));
  }
}

int var_position(const std::vector<std::string>& vars, const std::string& v) {
  for (size_t i = 0; i < vars.size(); ++i)
    if (vars[i] == v) return static_cast<int>(i);
  throw std::invalid_argument("unbound variable in body: " + v);
}

StatePtr close_state(const StatePtr& s, const std::vector<std::string>& vars,
                     const std::vector<int>& assignment) {
  switch (s->kind) {
    case StateNode::True: return mk_true();
    case StateNode::Atom:
      return mk_atom(s->prop, std::to_string(var_position(vars, s->var) + 1));
    case StateNode::VarEq: {
      int a = assignment[var_position(vars, s->var)];
      int b = assignment[var_position(vars, s->var2)];
      return a == b ? mk_true() : mk_not(mk_true());
    }
    case StateNode::Not: return mk_not(close_state(s->a, vars, assignment));
    case StateNode::PathQuant: return mk_quant(s->forall_paths, close_path(s->path, vars, assignment));
    default:
      return mk_bin(s->kind, close_state(s->a, vars, assignment),
                    close_state(s->b, vars, assignment));
  }
}

}  // namespace

StatePtr close_body(const Formula& f, const std::vector<int>& assignment) {
  std::vector<std::string> vars;
  for (const auto& q : f.prefix) vars.push_back(q.var);
  if (assignment.size() != vars.size())
    throw std::invalid_argument("close_body: assignment arity mismatch");
  return close_state(f.body, vars, assignment);
}

EvalPlan instantiate(const Formula& f, const Topology& g) {
  auto grep = validate_topology(g);
  if (!grep.ok) throw std::invalid_argument("instantiate: topology fails validation");
  auto succ = g.successors();
  std::vector<std::string> vars;
  for (const auto& q : f.prefix) vars.push_back(q.var);

  std::vector<int> env;
  std::function<EvalPlan(size_t)> build = [&](size_t level) -> EvalPlan {
    if (level == f.prefix.size()) {
      EvalPlan leaf;
      leaf.kind = EvalPlan::Leaf;
      leaf.assignment = env;
      leaf.body = close_body(f, env);
      return leaf;
    }
    const Quantifier& q = f.prefix[level];
    std::vector<int> range;
    if (q.in_edges_of) {
      size_t idx = var_position(vars, *q.in_edges_of);
      if (idx >= env.size())
        throw std::invalid_argument("instantiate: edge constraint references a later variable");
      int src = env[idx];
      range = succ[src];
      std::sort(range.begin(), range.end());
    } else {
      for (int v = 1; v <= g.vertex_count; ++v) range.push_back(v);
    }
    if (q.distinct) {
      std::vector<int> filtered;
      for (int v : range)
        if (std::find(env.begin(), env.end(), v) == env.end()) filtered.push_back(v);
      range = filtered;
    }
    EvalPlan node;
    node.kind = q.kind == QuantKind::Forall ? EvalPlan::AndNode : EvalPlan::OrNode;
    for (int v : range) {
      env.push_back(v);
      node.children.push_back(build(level + 1));
      env.pop_back();
    }
    return node;
  };
  return build(0);
}

// ---- generators

Formula gen_phi_k(int k) {
  if (k < 2) throw std::invalid_argument("gen_phi_k: need k >= 2");
  Formula f;
  std::vector<std::string> vars;
  for (int i = 1; i <= k; ++i) {
    vars.push_back("x" + std::to_string(i));
    f.prefix.push_back({QuantKind::Exists, vars.back(), true, std::nullopt});
  }
  auto tok = [&](int i) { return pk_state(mk_atom("tok", vars[i])); };
  // innermost phase: tok@xk & (tok@xk U tok@x1)
  PathPtr chain = pk_and(tok(k - 1), pk_until(tok(k - 1), tok(0)));
  for (int i = k - 2; i >= 0; --i) chain = pk_and(tok(i), pk_until(tok(i), chain));
  f.body = mk_quant(false, pk_finally(chain));
  return f;
}

Formula gen_adj_formula() {
  Formula f;
  f.prefix.push_back({QuantKind::Exists, "i", false, std::nullopt});
  f.prefix.push_back({QuantKind::Exists, "j", false, std::nullopt});
  f.prefix.push_back({QuantKind::Forall, "k", false, std::nullopt});
  auto tok = [](const std::string& v) { return pk_state(mk_atom("tok", v)); };
  auto adj = [&](const std::string& a, const std::string& b) {
    return pk_or(pk_globally(pk_implies(tok(a), pk_until(tok(a), tok(b)))),
                 pk_globally(pk_implies(tok(b), pk_until(tok(b), tok(a)))));
  };
  f.body = mk_quant(true, pk_or(adj("i", "k"), adj("j", "k")));
  return f;
}

namespace {

struct Gen {
  std::mt19937_64 rng;
  std::vector<std::string> vars;
  std::vector<std::string> props;  // drawn alongside the built-in tok

  int pick(int n) { return static_cast<int>(rng() % static_cast<uint64_t>(n)); }

  StatePtr atom() {
    if (vars.empty()) return mk_true();
    std::string var = vars[pick(static_cast<int>(vars.size()))];
    int p = pick(static_cast<int>(props.size()) + 1);
    std::string prop = p == static_cast<int>(props.size()) ? "tok" : props[p];
    return mk_atom(prop, var);
  }

  StatePtr state(int depth, int budget) {
    if (budget <= 1) return atom();
    int choices = depth > 0 ? 6 : 4;
    switch (pick(choices)) {
      case 0: return atom();
      case 1: return mk_not(state(depth, budget - 1));
      case 2: {
        int l = 1 + pick(budget - 1);
        return mk_and(state(depth, l), state(depth, budget - 1 - l));
      }
      case 3: {
        int l = 1 + pick(budget - 1);
        return mk_or(state(depth, l), state(depth, budget - 1 - l));
      }
      default:
        return mk_quant(pick(2) == 0, path(depth - 1, budget - 1));
    }
  }

  PathPtr path(int depth, int budget) {
    if (budget <= 1) return pk_state(atom());
    switch (pick(7)) {
      case 0: return pk_state(state(depth, budget));
      case 1: return pk_not(path(depth, budget - 1));
      case 2: return pk_finally(path(depth, budget - 1));
      case 3: return pk_globally(path(depth, budget - 1));
      case 4: {
        int l = 1 + pick(budget - 1);
        return pk_and(path(depth, l), path(depth, budget - 1 - l));
      }
      case 5: {
        int l = 1 + pick(budget - 1);
        return pk_or(path(depth, l), path(depth, budget - 1 - l));
      }
      default: {
        int l = 1 + pick(budget - 1);
        return pk_until(path(depth, l), path(depth, budget - 1 - l));
      }
    }
  }
};

}  // namespace

Formula random_formula(int k, int d, int size, uint64_t seed, const std::vector<std::string>& props) {
  if (k < 0 || d < 0) throw std::invalid_argument("random_formula: k and d must be >= 0");
  Gen gen;
  gen.rng.seed(seed);
  gen.props = props;
  Formula f;
  for (int i = 1; i <= k; ++i) {
    std::string v = "x" + std::to_string(i);
    gen.vars.push_back(v);
    QuantKind kind = gen.pick(2) == 0 ? QuantKind::Forall : QuantKind::Exists;
    bool distinct = i > 1 && gen.pick(3) == 0;
    f.prefix.push_back({kind, v, distinct, std::nullopt});
  }
  f.body = gen.state(d, std::max(1, size));
  return f;
}

PathPtr random_path_formula(int max_ops, uint64_t seed, const std::vector<std::string>& atoms) {
  Gen gen;
  gen.rng.seed(seed * 0x9e3779b97f4a7c15ull + 13);
  struct Local {
    Gen& g;
    const std::vector<std::string>& atoms;
    PathPtr leaf() {
      if (atoms.empty()) return pk_state(mk_true());
      return pk_state(mk_atom(atoms[g.pick(static_cast<int>(atoms.size()))], ""));
    }
    PathPtr go(int budget) {
      if (budget <= 1) return leaf();
      switch (g.pick(7)) {
        case 0: return leaf();
        case 1: return pk_not(go(budget - 1));
        case 2: return pk_finally(go(budget - 1));
        case 3: return pk_globally(go(budget - 1));
        case 4: {
          int l = 1 + g.pick(budget - 1);
          return pk_and(go(l), go(budget - 1 - l));
        }
        case 5: {
          int l = 1 + g.pick(budget - 1);
          return pk_or(go(l), go(budget - 1 - l));
        }
        default: {
          int l = 1 + g.pick(budget - 1);
          return pk_until(go(l), go(budget - 1 - l));
        }
      }
    }
  } local{gen, atoms};
  return normalize(local.go(std::max(1, max_ops)));
}

}  // namespace tokmc::itl
