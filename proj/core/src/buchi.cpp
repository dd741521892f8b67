#include "tokmc/buchi.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tokmc {

LtlPtr ltl_true() {
  auto n = std::make_shared<Ltl>();
  n->kind = Ltl::True;
  return n;
}
LtlPtr ltl_false() {
  auto n = std::make_shared<Ltl>();
  n->kind = Ltl::False;
  return n;
}
LtlPtr ltl_lit(int atom, bool negated) {
  auto n = std::make_shared<Ltl>();
  n->kind = Ltl::Lit;
  n->atom = atom;
  n->negated = negated;
  return n;
}
static LtlPtr ltl_bin(Ltl::Kind k, LtlPtr a, LtlPtr b) {
  auto n = std::make_shared<Ltl>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}
LtlPtr ltl_and(LtlPtr a, LtlPtr b) {
  if (a->kind == Ltl::False || b->kind == Ltl::False) return ltl_false();
  if (a->kind == Ltl::True) return b;
  if (b->kind == Ltl::True) return a;
  return ltl_bin(Ltl::And, std::move(a), std::move(b));
}
LtlPtr ltl_or(LtlPtr a, LtlPtr b) {
  if (a->kind == Ltl::True || b->kind == Ltl::True) return ltl_true();
  if (a->kind == Ltl::False) return b;
  if (b->kind == Ltl::False) return a;
  return ltl_bin(Ltl::Or, std::move(a), std::move(b));
}
LtlPtr ltl_until(LtlPtr a, LtlPtr b) { return ltl_bin(Ltl::Until, std::move(a), std::move(b)); }
LtlPtr ltl_release(LtlPtr a, LtlPtr b) { return ltl_bin(Ltl::Release, std::move(a), std::move(b)); }

LtlPtr ltl_negate(LtlPtr a) {
  switch (a->kind) {
    case Ltl::True: return ltl_false();
    case Ltl::False: return ltl_true();
    case Ltl::Lit: return ltl_lit(a->atom, !a->negated);
    case Ltl::And: return ltl_or(ltl_negate(a->a), ltl_negate(a->b));
    case Ltl::Or: return ltl_and(ltl_negate(a->a), ltl_negate(a->b));
    case Ltl::Until: return ltl_release(ltl_negate(a->a), ltl_negate(a->b));
    case Ltl::Release: return ltl_until(ltl_negate(a->a), ltl_negate(a->b));
  }
  return ltl_false();
}

std::string ltl_to_string(const Ltl& f) {
  std::ostringstream os;
  switch (f.kind) {
    case Ltl::True: os << "true"; break;
    case Ltl::False: os << "false"; break;
    case Ltl::Lit: os << (f.negated ? "!a" : "a") << f.atom; break;
    case Ltl::And: os << "(" << ltl_to_string(*f.a) << " & " << ltl_to_string(*f.b) << ")"; break;
    case Ltl::Or: os << "(" << ltl_to_string(*f.a) << " | " << ltl_to_string(*f.b) << ")"; break;
    case Ltl::Until: os << "(" << ltl_to_string(*f.a) << " U " << ltl_to_string(*f.b) << ")"; break;
    case Ltl::Release: os << "(" << ltl_to_string(*f.a) << " R " << ltl_to_string(*f.b) << ")"; break;
  }
  return os.str();
}

bool BuchiAutomaton::compatible(int state, const std::vector<char>& assignment) const {
  for (int a : states[state].pos_lits)
    if (!assignment[a]) return false;
  for (int a : states[state].neg_lits)
    if (assignment[a]) return false;
  return true;
}

void BuchiAutomaton::complete() {
  int sink = static_cast<int>(states.size());
  states.push_back({});  // no constraints: accepts every letter
  succ.emplace_back();
  succ[sink].push_back(sink);
  // A state lacking some-letter successors gets the sink; being conservative
  // and always adding it keeps the automaton total.
  for (int s = 0; s < sink; ++s) succ[s].push_back(sink);
}

int BuchiAutomaton::num_edges() const {
  int n = 0;
  for (const auto& e : succ) n += static_cast<int>(e.size());
  return n;
}

namespace {

// Node-splitting tableau (GPVW). Formulas are compared by pointer identity
// within one run, so we hash-cons subformulas of the input first.
struct Interned {
  std::vector<LtlPtr> nodes;
  std::map<const Ltl*, int> id;
  std::vector<int> untils;  // ids of Until subformulas

  int intern(const LtlPtr& f) {
    auto it = id.find(f.get());
    if (it != id.end()) return it->second;
    int my = static_cast<int>(nodes.size());
    nodes.push_back(f);
    id.emplace(f.get(), my);
    if (f->a) intern(f->a);
    if (f->b) intern(f->b);
    if (f->kind == Ltl::Until) untils.push_back(my);
    return my;
  }
};

struct Node {
  std::set<int> news, olds, nexts;
  bool operator<(const Node& o) const {
    if (olds != o.olds) return olds < o.olds;
    return nexts < o.nexts;
  }
};

}  // namespace

BuchiAutomaton ltl_to_buchi(const LtlPtr& formula, int atom_count) {
  Interned in;
  int root = in.intern(formula);

  auto expand_all = [&](const std::set<int>& seed) {
    // returns fully expanded consistent nodes from the seed set
    std::vector<Node> done;
    std::vector<Node> work;
    work.push_back(Node{seed, {}, {}});
    while (!work.empty()) {
      Node n = work.back();
      work.pop_back();
      if (n.news.empty()) {
        done.push_back(n);
        continue;
      }
      int f = *n.news.begin();
      n.news.erase(n.news.begin());
      const Ltl& node = *in.nodes[f];
      n.olds.insert(f);
      switch (node.kind) {
        case Ltl::False:
          break;  // inconsistent, drop
        case Ltl::True:
          work.push_back(n);
          break;
        case Ltl::Lit: {
          // check the contradicting literal is not already present
          bool clash = false;
          for (int g : n.olds) {
            const Ltl& other = *in.nodes[g];
            if (other.kind == Ltl::Lit && other.atom == node.atom &&
                other.negated != node.negated)
              clash = true;
          }
          if (!clash) work.push_back(n);
          break;
        }
        case Ltl::And: {
          int a = in.id.at(node.a.get()), b = in.id.at(node.b.get());
          if (!n.olds.count(a)) n.news.insert(a);
          if (!n.olds.count(b)) n.news.insert(b);
          work.push_back(n);
          break;
        }
        case Ltl::Or: {
          int a = in.id.at(node.a.get()), b = in.id.at(node.b.get());
          Node left = n, right = n;
          if (!left.olds.count(a)) left.news.insert(a);
          if (!right.olds.count(b)) right.news.insert(b);
          work.push_back(left);
          work.push_back(right);
          break;
        }
        case Ltl::Until: {
          int a = in.id.at(node.a.get()), b = in.id.at(node.b.get());
          Node wait = n, now = n;
          if (!wait.olds.count(a)) wait.news.insert(a);
          wait.nexts.insert(f);
          if (!now.olds.count(b)) now.news.insert(b);
          work.push_back(wait);
          work.push_back(now);
          break;
        }
        case Ltl::Release: {
          int a = in.id.at(node.a.get()), b = in.id.at(node.b.get());
          Node hold = n, fire = n;
          if (!hold.olds.count(b)) hold.news.insert(b);
          hold.nexts.insert(f);
          if (!fire.olds.count(a)) fire.news.insert(a);
          if (!fire.olds.count(b)) fire.news.insert(b);
          work.push_back(hold);
          work.push_back(fire);
          break;
        }
      }
    }
    return done;
  };

  BuchiAutomaton aut;
  aut.atom_count = atom_count;

  std::map<Node, int> state_ids;
  std::vector<Node> states;
  std::vector<std::set<int>> pending;  // next-sets awaiting expansion

  auto register_nodes = [&](const std::vector<Node>& nodes, std::vector<int>& out_ids) {
    for (const auto& n : nodes) {
      auto it = state_ids.find(n);
      if (it == state_ids.end()) {
        int id = static_cast<int>(states.size());
        state_ids.emplace(n, id);
        states.push_back(n);
        pending.push_back(n.nexts);
        aut.states.push_back({});
        aut.succ.emplace_back();
        out_ids.push_back(id);
      } else {
        out_ids.push_back(it->second);
      }
    }
  };

  std::vector<int> init_ids;
  register_nodes(expand_all({root}), init_ids);
  aut.initial = init_ids;

  for (size_t s = 0; s < states.size(); ++s) {
    std::vector<int> succ_ids;
    register_nodes(expand_all(pending[s]), succ_ids);
    std::sort(succ_ids.begin(), succ_ids.end());
    succ_ids.erase(std::unique(succ_ids.begin(), succ_ids.end()), succ_ids.end());
    aut.succ[s] = succ_ids;
  }

  for (size_t s = 0; s < states.size(); ++s) {
    std::set<int> pos, neg;
    for (int f : states[s].olds) {
      const Ltl& node = *in.nodes[f];
      if (node.kind == Ltl::Lit) (node.negated ? neg : pos).insert(node.atom);
    }
    aut.states[s].pos_lits.assign(pos.begin(), pos.end());
    aut.states[s].neg_lits.assign(neg.begin(), neg.end());
  }

  for (int u : in.untils) {
    std::vector<int> fset;
    int b = in.id.at(in.nodes[u]->b.get());
    for (size_t s = 0; s < states.size(); ++s)
      if (!states[s].olds.count(u) || states[s].olds.count(b)) fset.push_back(static_cast<int>(s));
    aut.acceptance.push_back(fset);
  }
  if (aut.acceptance.empty()) {
    std::vector<int> all;
    for (size_t s = 0; s < states.size(); ++s) all.push_back(static_cast<int>(s));
    aut.acceptance.push_back(all);
  }
  return aut;
}

}  // namespace tokmc
