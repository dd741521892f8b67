#include "tokmc/system.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace tokmc {

namespace {

struct VecHash {
  size_t operator()(const std::vector<int>& v) const {
    size_t h = 1469598103934665603ull;
    for (int x : v) {
      h ^= static_cast<size_t>(x) + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace

std::vector<std::string> SystemLts::indexed_label(int state) const {
  std::vector<std::string> out;
  for (int v = 1; v <= vertex_count(); ++v) {
    for (const auto& p : tpl.prop_labels[locals[state][v - 1]])
      out.push_back(p + "@" + std::to_string(v));
  }
  out.push_back("tok@" + std::to_string(token_at[state]));
  std::sort(out.begin(), out.end());
  return out;
}

std::string SystemLts::state_name(int state) const {
  std::string s = "(";
  for (int v = 1; v <= vertex_count(); ++v) {
    if (v > 1) s += ",";
    s += tpl.states[locals[state][v - 1]];
  }
  s += ")";
  return s;
}

SystemLts build_system(const ProcessTemplate& t, const Topology& g, int max_states) {
  auto trep = validate_template(t);
  if (!trep.ok) throw std::invalid_argument("build_system: template fails validation");
  auto grep = validate_topology(g);
  if (!grep.ok) throw std::invalid_argument("build_system: topology fails validation");

  if (t.direction_aware()) {
    if (!g.direction_labeled())
      throw std::invalid_argument("build_system: direction-aware template needs a labeled topology");
    for (auto [u, v] : g.edges) {
      if (!t.is_snd(g.snd_label.at({u, v})) || !t.is_rcv(g.rcv_label.at({u, v})))
        throw std::invalid_argument("build_system: topology direction labels not in template sets");
    }
  }

  SystemLts sys;
  sys.tpl = t;
  sys.topo = g;
  int tok_action = sys.lts.action_id("tok");
  for (const auto& a : t.internal_actions) sys.lts.action_id(a);

  const int n = g.vertex_count;
  std::vector<int> init(n);
  for (int v = 1; v <= n; ++v)
    init[v - 1] = (v == g.initial_vertex) ? t.initial_with_token : t.initial_without_token;

  std::unordered_map<std::vector<int>, int, VecHash> ids;
  auto intern = [&](const std::vector<int>& locals) {
    auto it = ids.find(locals);
    if (it != ids.end()) return it->second;
    int id = sys.lts.add_state({});
    if (id >= max_states) throw std::runtime_error("build_system: state budget exceeded");
    ids.emplace(locals, id);
    sys.locals.push_back(locals);
    int tok = -1;
    for (int v = 1; v <= n; ++v)
      if (t.has_token[locals[v - 1]]) {
        if (tok != -1) throw std::runtime_error("build_system: two token holders in one state");
        tok = v;
      }
    if (tok == -1) throw std::runtime_error("build_system: no token holder in reachable state");
    sys.token_at.push_back(tok);
    return id;
  };

  int s0 = intern(init);
  sys.lts.initial.push_back(s0);

  // Group template transitions by source for the product sweep.
  std::vector<std::vector<const ProcessTemplate::Transition*>> by_src(t.states.size());
  for (const auto& tr : t.transitions) by_src[tr.from].push_back(&tr);

  std::deque<int> work{s0};
  while (!work.empty()) {
    int s = work.front();
    work.pop_front();
    std::vector<int> cur = sys.locals[s];  // copy: intern may grow the table

    // internal moves, one vertex at a time
    for (int v = 1; v <= n; ++v) {
      for (const auto* tr : by_src[cur[v - 1]]) {
        if (!t.is_internal(tr->action)) continue;
        std::vector<int> nxt = cur;
        nxt[v - 1] = tr->to;
        size_t before = sys.locals.size();
        int id = intern(nxt);
        sys.lts.add_edge(s, sys.lts.action_id(tr->action), id);
        if (sys.locals.size() > before) work.push_back(id);
      }
    }

    // token hops along the edges
    for (auto [u, w] : g.edges) {
      for (const auto* snd : by_src[cur[u - 1]]) {
        if (!t.is_snd(snd->action)) continue;
        if (t.direction_aware() && snd->action != g.snd_label.at({u, w})) continue;
        for (const auto* rcv : by_src[cur[w - 1]]) {
          if (!t.is_rcv(rcv->action)) continue;
          if (t.direction_aware() && rcv->action != g.rcv_label.at({u, w})) continue;
          std::vector<int> nxt = cur;
          nxt[u - 1] = snd->to;
          nxt[w - 1] = rcv->to;
          size_t before = sys.locals.size();
          int id = intern(nxt);
          sys.lts.add_edge(s, tok_action, id);
          if (sys.locals.size() > before) work.push_back(id);
        }
      }
    }
  }
  return sys;
}

Lts project(const SystemLts& sys, const std::vector<int>& tuple) {
  for (int v : tuple)
    if (v < 1 || v > sys.vertex_count())
      throw std::invalid_argument("project: tuple vertex out of range");
  Lts out;
  out.actions = sys.lts.actions;
  out.positional_arity = static_cast<int>(tuple.size());
  for (int s = 0; s < sys.lts.num_states; ++s) {
    std::vector<std::string> label;
    for (int i = 0; i < static_cast<int>(tuple.size()); ++i) {
      int v = tuple[i];
      for (const auto& p : sys.tpl.prop_labels[sys.locals[s][v - 1]])
        label.push_back(p + "@" + std::to_string(i + 1));
      if (sys.token_at[s] == v) label.push_back("tok@" + std::to_string(i + 1));
    }
    out.add_state(std::move(label), sys.state_name(s));
  }
  out.initial = sys.lts.initial;
  for (int s = 0; s < sys.lts.num_states; ++s)
    for (const auto& e : sys.lts.succ[s]) out.add_edge(s, e.action, e.to);
  return out;
}

int token_position(const SystemLts& sys, const std::vector<int>& global_state) {
  if (static_cast<int>(global_state.size()) != sys.vertex_count())
    throw std::invalid_argument("token_position: wrong arity");
  int tok = -1;
  for (int v = 1; v <= sys.vertex_count(); ++v) {
    int q = global_state[v - 1];
    if (q < 0 || q >= static_cast<int>(sys.tpl.states.size()))
      throw std::invalid_argument("token_position: unknown local state");
    if (sys.tpl.has_token[q]) {
      if (tok != -1) throw std::invalid_argument("token_position: multiple token holders");
      tok = v;
    }
  }
  if (tok == -1) throw std::invalid_argument("token_position: no token holder");
  return tok;
}

bool every_cycle_passes_token(const SystemLts& sys) {
  return !find_cycle_within(sys.lts, sys.tpl.internal_actions, sys.lts.initial).has_value();
}

namespace {

// One enabled step of `sys` from `state`: either an internal move at `vertex`
// reaching template state `to`, or a token hop (v,w) with given local targets.
int find_internal_step(const SystemLts& sys, int state, int vertex, int to) {
  for (const auto& e : sys.lts.succ[state]) {
    if (sys.lts.actions[e.action] == "tok") continue;
    const auto& a = sys.locals[e.to];
    const auto& b = sys.locals[state];
    if (a[vertex - 1] != to) continue;
    bool others_same = true;
    for (int v = 1; v <= sys.vertex_count(); ++v)
      if (v != vertex && a[v - 1] != b[v - 1]) { others_same = false; break; }
    if (others_same) return e.to;
  }
  return -1;
}

int find_token_step(const SystemLts& sys, int state, int from_v, int to_v,
                    int sender_target, int receiver_target) {
  for (const auto& e : sys.lts.succ[state]) {
    if (sys.lts.actions[e.action] != "tok") continue;
    const auto& a = sys.locals[e.to];
    const auto& b = sys.locals[state];
    if (sys.token_at[e.to] != to_v || sys.token_at[state] != from_v) continue;
    if (a[from_v - 1] != sender_target) continue;
    if (receiver_target >= 0 && a[to_v - 1] != receiver_target) continue;
    bool others_same = true;
    for (int v = 1; v <= sys.vertex_count(); ++v)
      if (v != from_v && v != to_v && a[v - 1] != b[v - 1]) { others_same = false; break; }
    if (others_same) return e.to;
  }
  return -1;
}

}  // namespace

TokenPushResult token_pushing_path(const SystemLts& sys, int from_state,
                                   const std::vector<int>& vertex_path,
                                   const std::string& p_state, const std::string& q_state,
                                   const IndexTuple& tracked) {
  const ProcessTemplate& t = sys.tpl;
  if (t.direction_aware())
    throw std::invalid_argument("token_pushing_path: direction-unaware templates only");
  if (vertex_path.size() < 2)
    throw std::invalid_argument("token_pushing_path: path needs at least two vertices");
  {
    std::set<int> seen(vertex_path.begin(), vertex_path.end());
    if (seen.size() != vertex_path.size())
      throw std::invalid_argument("token_pushing_path: precondition violated (path not simple)");
  }
  for (size_t i = 0; i + 1 < vertex_path.size(); ++i)
    if (!sys.topo.has_edge(vertex_path[i], vertex_path[i + 1]))
      throw std::invalid_argument("token_pushing_path: precondition violated (not a path of the topology)");

  const int x1 = vertex_path.front();
  const int xn = vertex_path.back();
  const int p = t.state_id(p_state);
  const int q = t.state_id(q_state);
  if (p < 0 || q < 0) throw std::invalid_argument("token_pushing_path: unknown template state");

  const auto& start = sys.locals[from_state];
  if (sys.token_at[from_state] != x1)
    throw std::invalid_argument("token_pushing_path: precondition violated (token not at the path start)");
  auto has_local = [&](int from, bool snd, int to) {
    for (const auto& tr : t.transitions)
      if (tr.from == from && tr.to == to && (snd ? t.is_snd(tr.action) : t.is_rcv(tr.action)))
        return true;
    return false;
  };
  if (!has_local(start[x1 - 1], true, p))
    throw std::invalid_argument("token_pushing_path: precondition violated (start vertex has no send into p)");
  if (!has_local(start[xn - 1], false, q))
    throw std::invalid_argument("token_pushing_path: precondition violated (end vertex has no receive into q)");
  for (int y = 1; y <= sys.vertex_count(); ++y) {
    if (y == x1 || y == xn) continue;
    bool in_tracked =
        std::find(tracked.entries.begin(), tracked.entries.end(), y) != tracked.entries.end();
    if (in_tracked) continue;
    if (classify_state(t, start[y - 1]) != StateClass::receive_only)
      throw std::invalid_argument(
          "token_pushing_path: precondition violated (untracked vertex not receive-only): vertex " +
          std::to_string(y));
  }

  TokenPushResult out;
  out.states.push_back(from_state);
  int cur = from_state;

  auto take_internal = [&](int vertex, int target) {
    int nxt = find_internal_step(sys, cur, vertex, target);
    if (nxt < 0) throw std::runtime_error("token_pushing_path: internal step not found");
    out.actions.push_back("internal");
    out.states.push_back(nxt);
    cur = nxt;
  };
  auto take_hop = [&](int u, int w, int sender_target, int receiver_target) {
    int nxt = find_token_step(sys, cur, u, w, sender_target, receiver_target);
    if (nxt < 0) throw std::runtime_error("token_pushing_path: token hop not found");
    out.actions.push_back("tok");
    out.states.push_back(nxt);
    cur = nxt;
  };
  auto some_rcv_target = [&](int state_of_vertex) {
    for (const auto& tr : t.transitions)
      if (tr.from == state_of_vertex && t.is_rcv(tr.action)) return tr.to;
    return -1;
  };
  auto some_snd_target = [&](int state_of_vertex) {
    for (const auto& tr : t.transitions)
      if (tr.from == state_of_vertex && t.is_snd(tr.action)) return tr.to;
    return -1;
  };

  const int hops = static_cast<int>(vertex_path.size()) - 1;
  for (int h = 0; h < hops; ++h) {
    int u = vertex_path[h];
    int w = vertex_path[h + 1];
    bool last = h == hops - 1;

    if (h > 0) {
      // intermediate sender: prime to a send-capable state via internal moves
      int uq = sys.locals[cur][u - 1];
      if (some_snd_target(uq) < 0) {
        auto prime = priming_path(t, uq, StateClass::send_only);
        if (!prime) throw std::runtime_error("token_pushing_path: sender priming failed");
        for (size_t i = 1; i < prime->size(); ++i) take_internal(u, (*prime)[i]);
      }
    }
    // receiver must already be receive-capable; prime intermediates if needed
    int wq = sys.locals[cur][w - 1];
    if (some_rcv_target(wq) < 0) {
      if (h == 0)
        throw std::invalid_argument(
            "token_pushing_path: precondition violated (second vertex cannot receive yet)");
      auto prime = priming_path(t, wq, StateClass::receive_only);
      if (!prime) throw std::runtime_error("token_pushing_path: receiver priming failed");
      for (size_t i = 1; i < prime->size(); ++i) take_internal(w, (*prime)[i]);
    }

    int sender_target = (h == 0) ? p : some_snd_target(sys.locals[cur][u - 1]);
    int receiver_target = last ? q : some_rcv_target(sys.locals[cur][w - 1]);
    take_hop(u, w, sender_target, receiver_target);
  }

  // verify the construction's guarantees on the built path
  {
    Word trace;
    for (int s : out.states) trace.push_back(std::to_string(sys.token_at[s]));
    Word want;
    for (int v : vertex_path) want.push_back(std::to_string(v));
    if (destutter(trace) != want)
      throw std::runtime_error("token_pushing_path: token trace does not destutter to the path");
  }
  for (size_t j = 0; j < out.states.size(); ++j) {
    const auto& st = sys.locals[out.states[j]];
    for (int v = 1; v <= sys.vertex_count(); ++v) {
      bool on_path = std::find(vertex_path.begin(), vertex_path.end(), v) != vertex_path.end();
      if (!on_path && st[v - 1] != start[v - 1])
        throw std::runtime_error("token_pushing_path: off-path process changed state");
    }
    if (j >= 1 && st[x1 - 1] != p)
      throw std::runtime_error("token_pushing_path: x1 left state p");
    if (j >= 1 && j + 1 < out.states.size() && st[xn - 1] != start[xn - 1])
      throw std::runtime_error("token_pushing_path: xn moved before the final hop");
  }
  if (sys.locals[out.states.back()][xn - 1] != q)
    throw std::runtime_error("token_pushing_path: xn did not end in q");
  return out;
}

std::string system_to_dot(const SystemLts& sys) {
  std::ostringstream os;
  os << "digraph system {\n  rankdir=LR;\n";
  for (int s = 0; s < sys.lts.num_states; ++s) {
    os << "  s" << s << " [label=\"" << sys.state_name(s) << "\"";
    if (!sys.lts.initial.empty() && sys.lts.initial.front() == s) os << ", peripheries=2";
    os << "];\n";
  }
  for (int s = 0; s < sys.lts.num_states; ++s)
    for (const auto& e : sys.lts.succ[s]) {
      bool tok = sys.lts.actions[e.action] == "tok";
      os << "  s" << s << " -> s" << e.to << " [label=\"" << sys.lts.actions[e.action] << "\"";
      if (tok) os << ", style=bold, color=red";
      os << "];\n";
    }
  os << "}\n";
  return os.str();
}

}  // namespace tokmc
