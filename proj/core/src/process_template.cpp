#include "tokmc/process_template.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

namespace tokmc {

int ProcessTemplate::state_id(const std::string& s) const {
  for (int i = 0; i < static_cast<int>(states.size()); ++i)
    if (states[i] == s) return i;
  return -1;
}

static bool contains(const std::vector<std::string>& v, const std::string& x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

bool ProcessTemplate::is_internal(const std::string& a) const { return contains(internal_actions, a); }
bool ProcessTemplate::is_snd(const std::string& a) const { return contains(snd_directions, a); }
bool ProcessTemplate::is_rcv(const std::string& a) const { return contains(rcv_directions, a); }

std::vector<std::string> ProcessTemplate::prop_alphabet() const {
  std::set<std::string> props;
  for (const auto& ls : prop_labels) props.insert(ls.begin(), ls.end());
  return {props.begin(), props.end()};
}

Lts ProcessTemplate::as_lts() const {
  Lts lts;
  for (size_t i = 0; i < states.size(); ++i) lts.add_state(prop_labels[i], states[i]);
  if (initial_with_token >= 0) lts.initial.push_back(initial_with_token);
  if (initial_without_token >= 0) lts.initial.push_back(initial_without_token);
  for (const auto& tr : transitions) lts.add_edge(tr.from, tr.action, tr.to);
  return lts;
}

static void add_violation(ValidationReport& r, std::string rule, std::string desc,
                          std::vector<std::string> witness = {}) {
  r.ok = false;
  r.violations.push_back({std::move(rule), std::move(desc), std::move(witness)});
}

ValidationReport validate_template(const ProcessTemplate& t, ValidationMode mode) {
  ValidationReport rep;
  const int n = static_cast<int>(t.states.size());

  if (static_cast<int>(t.has_token.size()) != n || static_cast<int>(t.prop_labels.size()) != n) {
    add_violation(rep, "well-formed", "token/label tables must cover every state");
    return rep;
  }

  bool any_t = false, any_n = false;
  for (bool b : t.has_token) (b ? any_t : any_n) = true;
  if (!any_t) add_violation(rep, "partition", "token side T is empty");
  if (!any_n) add_violation(rep, "partition", "token-free side N is empty");

  if (t.internal_actions.empty())
    add_violation(rep, "actions", "internal action alphabet is empty");
  if (t.snd_directions.empty())
    add_violation(rep, "actions", "send direction set is empty");
  if (t.rcv_directions.empty())
    add_violation(rep, "actions", "receive direction set is empty");
  {
    std::set<std::string> seen;
    auto check_disjoint = [&](const std::vector<std::string>& v) {
      for (const auto& a : v)
        if (!seen.insert(a).second)
          add_violation(rep, "actions", "action label used in two alphabets: " + a, {a});
    };
    check_disjoint(t.internal_actions);
    check_disjoint(t.snd_directions);
    check_disjoint(t.rcv_directions);
  }

  if (t.initial_with_token < 0 || t.initial_with_token >= n ||
      !t.has_token[t.initial_with_token])
    add_violation(rep, "initial", "initial_with_token must be a T state");
  if (t.initial_without_token < 0 || t.initial_without_token >= n ||
      t.has_token[t.initial_without_token])
    add_violation(rep, "initial", "initial_without_token must be an N state");

  std::vector<bool> has_out(n, false);
  for (const auto& tr : t.transitions) {
    if (tr.from < 0 || tr.from >= n || tr.to < 0 || tr.to >= n) {
      add_violation(rep, "well-formed", "transition endpoint out of range");
      continue;
    }
    has_out[tr.from] = true;
    const std::string& sf = t.states[tr.from];
    const std::string& st = t.states[tr.to];
    if (t.is_snd(tr.action)) {
      if (!(t.has_token[tr.from] && !t.has_token[tr.to]))
        add_violation(rep, "snd-direction",
                      "send transition must go from T to N: " + sf + " -" + tr.action + "-> " + st,
                      {sf, st});
    } else if (t.is_rcv(tr.action)) {
      if (!(!t.has_token[tr.from] && t.has_token[tr.to]))
        add_violation(rep, "rcv-direction",
                      "receive transition must go from N to T: " + sf + " -" + tr.action + "-> " + st,
                      {sf, st});
    } else if (t.is_internal(tr.action)) {
      if (t.has_token[tr.from] != t.has_token[tr.to])
        add_violation(rep, "internal-side",
                      "internal transition must preserve token possession: " + sf + " -" +
                          tr.action + "-> " + st,
                      {sf, st});
    } else {
      add_violation(rep, "actions", "transition uses undeclared action: " + tr.action, {tr.action});
    }
  }

  for (int q = 0; q < n; ++q)
    if (!has_out[q])
      add_violation(rep, "totality", "state has no outgoing transition: " + t.states[q],
                    {t.states[q]});

  if (!rep.ok) return rep;  // structural problems make the path checks unreliable

  Lts lts = t.as_lts();
  if (mode == ValidationMode::relaxed) {
    // every T state reaches a send, every N state a receive, via local paths
    for (int q = 0; q < n; ++q) {
      std::deque<int> bfs{q};
      std::vector<bool> seen(n, false);
      seen[q] = true;
      bool found = false;
      while (!bfs.empty() && !found) {
        int s = bfs.front();
        bfs.pop_front();
        for (const auto& tr : t.transitions) {
          if (tr.from != s) continue;
          bool fits = t.has_token[q] ? t.is_snd(tr.action) : t.is_rcv(tr.action);
          if (fits) { found = true; break; }
          if (!seen[tr.to]) { seen[tr.to] = true; bfs.push_back(tr.to); }
        }
      }
      if (!found)
        add_violation(rep, "relaxed-liveness",
                      std::string("no path from ") + t.states[q] + " to a " +
                          (t.has_token[q] ? "send" : "receive") + " transition",
                      {t.states[q]});
    }
    return rep;
  }

  std::vector<int> roots;
  if (mode == ValidationMode::strict_all_states) {
    roots.resize(n);
    for (int i = 0; i < n; ++i) roots[i] = i;
  } else {
    roots = {t.initial_with_token, t.initial_without_token};
  }
  if (auto cyc = find_cycle_within(lts, t.internal_actions, roots)) {
    std::vector<std::string> witness;
    for (int s : *cyc) witness.push_back(t.states[s]);
    add_violation(rep, "alternation",
                  "internal-only cycle allows an infinite path without send/receive", witness);
  }
  return rep;
}

StateClass classify_state(const ProcessTemplate& t, int state) {
  if (state < 0 || state >= static_cast<int>(t.states.size()))
    throw std::invalid_argument("classify_state: unknown state");
  bool any = false, all_snd = true, all_rcv = true;
  for (const auto& tr : t.transitions) {
    if (tr.from != state) continue;
    any = true;
    if (!t.is_snd(tr.action)) all_snd = false;
    if (!t.is_rcv(tr.action)) all_rcv = false;
  }
  if (any && all_snd) return StateClass::send_only;
  if (any && all_rcv) return StateClass::receive_only;
  return StateClass::neither;
}

std::optional<std::vector<int>> priming_path(const ProcessTemplate& t, int state, StateClass goal) {
  if (state < 0 || state >= static_cast<int>(t.states.size()))
    throw std::invalid_argument("priming_path: unknown state");
  if (goal == StateClass::neither) throw std::invalid_argument("priming_path: goal must be send-only or receive-only");
  bool needs_token = goal == StateClass::send_only;
  if (t.has_token[state] != needs_token)
    throw std::invalid_argument("priming_path: goal incompatible with token possession of state");

  // BFS over internal transitions only.
  std::deque<int> bfs{state};
  std::vector<int> parent(t.states.size(), -2);
  parent[state] = -1;
  while (!bfs.empty()) {
    int s = bfs.front();
    bfs.pop_front();
    if (classify_state(t, s) == goal) {
      std::vector<int> path;
      for (int v = s; v != -1; v = parent[v]) path.push_back(v);
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (const auto& tr : t.transitions)
      if (tr.from == s && t.is_internal(tr.action) && parent[tr.to] == -2) {
        parent[tr.to] = s;
        bfs.push_back(tr.to);
      }
  }
  return std::nullopt;
}

namespace {

ProcessTemplate make_shuttle() {
  ProcessTemplate t;
  t.name = "shuttle";
  t.states = {"t", "n"};
  t.has_token = {true, false};
  t.initial_with_token = 0;
  t.initial_without_token = 1;
  t.internal_actions = {"i"};
  t.snd_directions = {"snd"};
  t.rcv_directions = {"rcv"};
  t.transitions = {{0, "snd", 1}, {1, "rcv", 0}};
  t.prop_labels = {{}, {}};
  return t;
}

ProcessTemplate make_mutex() {
  ProcessTemplate t;
  t.name = "mutex";
  t.states = {"crit", "idle", "req"};
  t.has_token = {true, false, false};
  t.initial_with_token = 0;
  t.initial_without_token = 1;
  t.internal_actions = {"request"};
  t.snd_directions = {"snd"};
  t.rcv_directions = {"rcv"};
  t.transitions = {{0, "snd", 1}, {1, "request", 2}, {2, "rcv", 0}};
  t.prop_labels = {{"crit"}, {}, {}};
  return t;
}

ProcessTemplate make_relay() {
  ProcessTemplate t;
  t.name = "relay";
  t.states = {"hold", "ready", "rest"};
  t.has_token = {true, true, false};
  t.initial_with_token = 0;
  t.initial_without_token = 2;
  t.internal_actions = {"work"};
  t.snd_directions = {"snd"};
  t.rcv_directions = {"rcv"};
  t.transitions = {{0, "work", 1}, {1, "snd", 2}, {2, "rcv", 0}};
  t.prop_labels = {{"busy"}, {"busy"}, {}};
  return t;
}

// Direction-aware shell that only ever sends clockwise.
ProcessTemplate make_cwshuttle() {
  ProcessTemplate t;
  t.name = "cwshuttle";
  t.states = {"t", "n"};
  t.has_token = {true, false};
  t.initial_with_token = 0;
  t.initial_without_token = 1;
  t.internal_actions = {"i"};
  t.snd_directions = {"cw!", "ccw!"};
  t.rcv_directions = {"cw?", "ccw?"};
  t.transitions = {{0, "cw!", 1}, {1, "cw?", 0}, {1, "ccw?", 0}};
  t.prop_labels = {{}, {}};
  return t;
}

}  // namespace

ProcessTemplate builtin_template(const std::string& name) {
  if (name == "shuttle") return make_shuttle();
  if (name == "mutex") return make_mutex();
  if (name == "relay") return make_relay();
  if (name == "cwshuttle") return make_cwshuttle();
  throw std::invalid_argument("builtin_template: unknown template '" + name + "'");
}

std::vector<std::string> builtin_template_names() {
  return {"shuttle", "mutex", "relay", "cwshuttle"};
}

}  // namespace tokmc
