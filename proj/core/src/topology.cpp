#include "tokmc/topology.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace tokmc {

bool Topology::has_edge(int u, int v) const {
  return std::find(edges.begin(), edges.end(), std::make_pair(u, v)) != edges.end();
}

std::vector<std::vector<int>> Topology::successors() const {
  std::vector<std::vector<int>> succ(vertex_count + 1);
  for (auto [u, v] : edges) succ[u].push_back(v);
  return succ;
}

void IndexTuple::validate_for(const Topology& g) const {
  std::set<int> seen;
  for (int v : entries) {
    if (v < 1 || v > g.vertex_count)
      throw std::invalid_argument("index tuple entry out of range: " + std::to_string(v));
    if (!seen.insert(v).second)
      throw std::invalid_argument("index tuple entries must be distinct");
  }
}

Topology make_ring(int n) {
  if (n < 2) throw std::invalid_argument("make_ring: need n >= 2");
  Topology g;
  g.name = "ring:" + std::to_string(n);
  g.vertex_count = n;
  for (int i = 1; i <= n; ++i) g.edges.emplace_back(i, i % n + 1);
  return g;
}

Topology make_biring(int n) {
  if (n < 2) throw std::invalid_argument("make_biring: need n >= 2");
  Topology g;
  g.name = "biring:" + std::to_string(n);
  g.vertex_count = n;
  if (n == 2) {
    // one arc each way; a true bi-ring would need parallel edges
    g.edges.emplace_back(1, 2);
    g.snd_label[{1, 2}] = "cw!";
    g.rcv_label[{1, 2}] = "cw?";
    g.edges.emplace_back(2, 1);
    g.snd_label[{2, 1}] = "ccw!";
    g.rcv_label[{2, 1}] = "ccw?";
    return g;
  }
  for (int i = 1; i <= n; ++i) {
    int cw = i % n + 1;
    int ccw = (i + n - 2) % n + 1;
    g.edges.emplace_back(i, cw);
    g.snd_label[{i, cw}] = "cw!";
    g.rcv_label[{i, cw}] = "cw?";
    g.edges.emplace_back(i, ccw);
    g.snd_label[{i, ccw}] = "ccw!";
    g.rcv_label[{i, ccw}] = "ccw?";
  }
  return g;
}

Topology make_clique(int n) {
  if (n < 2) throw std::invalid_argument("make_clique: need n >= 2");
  Topology g;
  g.name = "clique:" + std::to_string(n);
  g.vertex_count = n;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      if (i != j) g.edges.emplace_back(i, j);
  return g;
}

Topology make_star(int n) {
  if (n < 2) throw std::invalid_argument("make_star: need n >= 2");
  Topology g;
  g.name = "star:" + std::to_string(n);
  g.vertex_count = n;
  for (int leaf = 2; leaf <= n; ++leaf) {
    g.edges.emplace_back(1, leaf);
    g.edges.emplace_back(leaf, 1);
  }
  return g;
}

Topology make_lasso(int ring_size, int tail_len) {
  if (ring_size < 2 || tail_len < 0) throw std::invalid_argument("make_lasso: bad parameters");
  Topology g;
  g.name = "lasso:" + std::to_string(ring_size) + "+" + std::to_string(tail_len);
  g.vertex_count = ring_size + tail_len;
  for (int i = 1; i <= tail_len; ++i) g.edges.emplace_back(i, i + 1);
  int base = tail_len;
  for (int i = 1; i <= ring_size; ++i)
    g.edges.emplace_back(base + i, base + i % ring_size + 1);
  return g;
}

ValidationReport validate_topology(const Topology& g) {
  ValidationReport rep;
  auto bad = [&](std::string rule, std::string desc, std::vector<std::string> w = {}) {
    rep.ok = false;
    rep.violations.push_back({std::move(rule), std::move(desc), std::move(w)});
  };
  if (g.vertex_count < 1) bad("vertices", "topology needs at least one vertex");
  if (g.initial_vertex < 1 || g.initial_vertex > g.vertex_count)
    bad("initial", "initial vertex out of range");
  std::set<std::pair<int, int>> seen;
  for (auto [u, v] : g.edges) {
    if (u == v)
      bad("self-loop", "self-loop on vertex " + std::to_string(u), {std::to_string(u)});
    if (u < 1 || u > g.vertex_count || v < 1 || v > g.vertex_count)
      bad("range", "edge endpoint out of range: (" + std::to_string(u) + "," + std::to_string(v) + ")");
    if (!seen.insert({u, v}).second)
      bad("parallel", "duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")");
  }
  if (g.direction_labeled()) {
    for (auto [u, v] : g.edges) {
      if (!g.snd_label.count({u, v}))
        bad("direction-labels", "edge (" + std::to_string(u) + "," + std::to_string(v) +
                                    ") has no send direction label");
      if (!g.rcv_label.count({u, v}))
        bad("direction-labels", "edge (" + std::to_string(u) + "," + std::to_string(v) +
                                    ") has no receive direction label");
    }
    for (const auto& [e, d] : g.snd_label)
      if (!g.has_edge(e.first, e.second))
        bad("direction-labels", "send label on non-edge (" + std::to_string(e.first) + "," +
                                    std::to_string(e.second) + ")");
    for (const auto& [e, d] : g.rcv_label)
      if (!g.has_edge(e.first, e.second))
        bad("direction-labels", "receive label on non-edge (" + std::to_string(e.first) + "," +
                                    std::to_string(e.second) + ")");
  }
  return rep;
}

Lts graph_lts(const Topology& g, const IndexTuple& tuple) {
  tuple.validate_for(g);
  Lts lts;
  for (int v = 1; v <= g.vertex_count; ++v) {
    std::vector<std::string> label;
    for (int i = 0; i < tuple.size(); ++i)
      if (tuple.entries[i] == v) label.push_back(std::to_string(i + 1));
    lts.add_state(std::move(label), "v" + std::to_string(v));
  }
  lts.initial.push_back(g.initial_vertex - 1);
  int a = lts.action_id("a");
  for (auto [u, v] : g.edges) lts.add_edge(u - 1, a, v - 1);
  return lts;
}

std::optional<Topology> parse_family_shorthand(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) return std::nullopt;
  std::string fam = text.substr(0, colon);
  int n = 0;
  try {
    n = std::stoi(text.substr(colon + 1));
  } catch (...) {
    return std::nullopt;
  }
  if (fam == "ring") return make_ring(n);
  if (fam == "biring") return make_biring(n);
  if (fam == "clique") return make_clique(n);
  if (fam == "star") return make_star(n);
  return std::nullopt;
}

std::string topology_to_dot(const Topology& g) {
  std::ostringstream os;
  os << "digraph topology {\n";
  for (int v = 1; v <= g.vertex_count; ++v) {
    os << "  v" << v << " [label=\"" << v << "\"";
    if (v == g.initial_vertex) os << ", peripheries=2";
    os << "];\n";
  }
  for (auto [u, v] : g.edges) {
    os << "  v" << u << " -> v" << v;
    if (g.direction_labeled()) {
      auto s = g.snd_label.find({u, v});
      auto r = g.rcv_label.find({u, v});
      os << " [label=\"" << (s != g.snd_label.end() ? s->second : "?") << "/"
         << (r != g.rcv_label.end() ? r->second : "?") << "\"]";
    }
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace tokmc
