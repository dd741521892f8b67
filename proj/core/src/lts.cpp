#include "tokmc/lts.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

namespace tokmc {

int Lts::add_state(std::vector<std::string> label, std::string name) {
  std::sort(label.begin(), label.end());
  label.erase(std::unique(label.begin(), label.end()), label.end());
  labels.push_back(std::move(label));
  succ.emplace_back();
  state_names.push_back(std::move(name));
  return num_states++;
}

int Lts::action_id(const std::string& name) {
  for (int i = 0; i < static_cast<int>(actions.size()); ++i)
    if (actions[i] == name) return i;
  actions.push_back(name);
  return static_cast<int>(actions.size()) - 1;
}

void Lts::add_edge(int from, const std::string& action, int to) {
  add_edge(from, action_id(action), to);
}

void Lts::add_edge(int from, int action, int to) {
  if (from < 0 || from >= num_states || to < 0 || to >= num_states)
    throw std::invalid_argument("Lts::add_edge: state out of range");
  succ[from].push_back(Edge{action, to});
}

bool Lts::atom_admissible(const std::string& atom) const {
  if (positional_arity >= 0) {
    auto at = atom.rfind('@');
    if (at == std::string::npos || at == 0 || at + 1 >= atom.size()) return false;
    int pos = 0;
    for (size_t i = at + 1; i < atom.size(); ++i) {
      if (!isdigit(static_cast<unsigned char>(atom[i]))) return false;
      pos = pos * 10 + (atom[i] - '0');
    }
    return pos >= 1 && pos <= positional_arity;
  }
  for (const auto& a : declared_atoms)
    if (a == atom) return true;
  for (const auto& ls : labels)
    if (std::binary_search(ls.begin(), ls.end(), atom)) return true;
  return false;
}

int Lts::num_transitions() const {
  int n = 0;
  for (const auto& es : succ) n += static_cast<int>(es.size());
  return n;
}

void Lts::validate() const {
  if (static_cast<int>(labels.size()) != num_states || static_cast<int>(succ.size()) != num_states)
    throw std::runtime_error("Lts: label/transition tables must cover every state");
  for (int s : initial)
    if (s < 0 || s >= num_states) throw std::runtime_error("Lts: initial state out of range");
  for (const auto& es : succ)
    for (const auto& e : es)
      if (e.to < 0 || e.to >= num_states || e.action < 0 ||
          e.action >= static_cast<int>(actions.size()))
        throw std::runtime_error("Lts: dangling transition");
}

Word destutter(const Word& w) {
  Word out;
  for (const auto& l : w)
    if (out.empty() || out.back() != l) out.push_back(l);
  return out;
}

std::vector<int> destutter_positions(const Word& w) {
  std::vector<int> pos{0};
  for (int j = 1; j <= static_cast<int>(w.size()); ++j) {
    if (j == 1 || w[j - 1] != w[j - 2]) pos.push_back(j);
    else pos.back() = j;  // same letter extends the current block
  }
  return pos;
}

std::optional<PartitionWitness> destutter_partition_witness(const Word& a, const Word& b) {
  if (destutter(a) != destutter(b)) return std::nullopt;
  PartitionWitness w;
  auto runs = [](const Word& x) {
    std::vector<std::pair<int, int>> r;
    auto pos = destutter_positions(x);
    for (size_t i = 1; i < pos.size(); ++i) r.emplace_back(pos[i - 1] + 1, pos[i]);
    return r;
  };
  w.blocks_a = runs(a);
  w.blocks_b = runs(b);
  return w;
}

std::optional<std::vector<int>> find_cycle_within(const Lts& lts,
                                                  const std::vector<std::string>& allowed,
                                                  const std::vector<int>& from) {
  std::unordered_set<int> allowed_ids;
  for (const auto& name : allowed)
    for (int i = 0; i < static_cast<int>(lts.actions.size()); ++i)
      if (lts.actions[i] == name) allowed_ids.insert(i);

  // Reachability first: only cycles reachable via allowed transitions matter.
  std::vector<char> reach(lts.num_states, 0);
  std::vector<int> stack;
  for (int s : from)
    if (!reach[s]) { reach[s] = 1; stack.push_back(s); }
  while (!stack.empty()) {
    int s = stack.back();
    stack.pop_back();
    for (const auto& e : lts.succ[s])
      if (allowed_ids.count(e.action) && !reach[e.to]) { reach[e.to] = 1; stack.push_back(e.to); }
  }

  // Iterative colored DFS over the restricted subgraph.
  enum { White, Grey, Black };
  std::vector<char> color(lts.num_states, White);
  std::vector<int> parent(lts.num_states, -1);
  for (int root = 0; root < lts.num_states; ++root) {
    if (!reach[root] || color[root] != White) continue;
    std::vector<std::pair<int, size_t>> dfs{{root, 0}};
    color[root] = Grey;
    while (!dfs.empty()) {
      auto& [s, idx] = dfs.back();
      bool advanced = false;
      while (idx < lts.succ[s].size()) {
        const auto& e = lts.succ[s][idx++];
        if (!allowed_ids.count(e.action) || !reach[e.to]) continue;
        if (color[e.to] == Grey) {
          // closed walk e.to .. s -> e.to
          std::vector<int> chain;
          for (int v = s; v != e.to; v = parent[v]) chain.push_back(v);
          std::reverse(chain.begin(), chain.end());
          std::vector<int> cycle{e.to};
          cycle.insert(cycle.end(), chain.begin(), chain.end());
          cycle.push_back(e.to);
          return cycle;
        }
        if (color[e.to] == White) {
          color[e.to] = Grey;
          parent[e.to] = s;
          dfs.emplace_back(e.to, 0);
          advanced = true;
          break;
        }
      }
      if (!advanced && idx >= lts.succ[s].size()) {
        color[s] = Black;
        dfs.pop_back();
      }
    }
  }
  return std::nullopt;
}

std::string lts_to_dot(const Lts& lts, const std::string& graph_name) {
  std::ostringstream os;
  os << "digraph " << graph_name << " {\n  rankdir=LR;\n";
  for (int s = 0; s < lts.num_states; ++s) {
    os << "  s" << s << " [label=\"";
    if (!lts.state_names[s].empty()) os << lts.state_names[s];
    else os << s;
    if (!lts.labels[s].empty()) {
      os << "\\n{";
      for (size_t i = 0; i < lts.labels[s].size(); ++i)
        os << (i ? "," : "") << lts.labels[s][i];
      os << "}";
    }
    os << "\"];\n";
  }
  for (int s : lts.initial) os << "  init" << s << " [shape=point]; init" << s << " -> s" << s << ";\n";
  for (int s = 0; s < lts.num_states; ++s)
    for (const auto& e : lts.succ[s])
      os << "  s" << s << " -> s" << e.to << " [label=\"" << lts.actions[e.action] << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace tokmc
