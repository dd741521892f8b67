#include "tokmc/marking.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace tokmc {

std::string Marking::serial() const {
  if (depth == 0) return "L" + label;
  std::ostringstream os;
  os << "M" << depth << "[";
  for (size_t w = 0; w < words.size(); ++w) {
    if (w) os << " ";
    os << "(";
    for (size_t i = 0; i < words[w].size(); ++i) {
      if (i) os << ",";
      os << words[w][i];
    }
    os << ")";
  }
  os << "]";
  return os.str();
}

static bool is_suffix(const Word& x, const Word& y) {
  if (x.size() > y.size()) return false;
  return std::equal(x.rbegin(), x.rend(), y.rbegin());
}

bool suffix_leq(const std::vector<Word>& x, const std::vector<Word>& y) {
  for (const auto& w : x) {
    bool found = false;
    for (const auto& v : y)
      if (is_suffix(w, v)) { found = true; break; }
    if (!found) return false;
  }
  return true;
}

namespace {

std::string label_serial(const std::vector<std::string>& label) {
  std::string s = "{";
  for (size_t i = 0; i < label.size(); ++i) {
    if (i) s += ",";
    s += label[i];
  }
  return s + "}";
}

}  // namespace

MarkingTable mark(const Topology& g, const IndexTuple& tuple, int depth) {
  tuple.validate_for(g);
  if (depth < 0) throw std::invalid_argument("mark: depth must be >= 0");
  auto grep = validate_topology(g);
  if (!grep.ok) throw std::invalid_argument("mark: topology fails validation");

  const int n = g.vertex_count;
  auto succ = g.successors();
  std::vector<bool> in_tuple(n + 1, false);
  for (int v : tuple.entries) in_tuple[v] = true;

  MarkingTable mt;
  mt.table.resize(depth + 1);

  // depth 0: nominal labels of the graph LTS
  Lts gl = graph_lts(g, tuple);
  mt.table[0].resize(n);
  for (int v = 1; v <= n; ++v) {
    mt.table[0][v - 1].depth = 0;
    mt.table[0][v - 1].label = label_serial(gl.labels[v - 1]);
  }

  // vertices that can reach the tuple at all; others keep empty word sets
  std::vector<bool> reaches(n + 1, false);
  {
    std::vector<std::vector<int>> pred(n + 1);
    for (auto [u, v] : g.edges) pred[v].push_back(u);
    std::deque<int> q;
    for (int v : tuple.entries) { reaches[v] = true; q.push_back(v); }
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      if (in_tuple[v] && v != q.front()) {
        // walks may not pass through tuple vertices, so do not expand them
        // beyond seeding (they reach themselves by the trivial walk)
      }
      for (int u : pred[v])
        if (!reaches[u]) { reaches[u] = true; q.push_back(u); }
    }
  }

  for (int d = 1; d <= depth; ++d) {
    const auto& prev = mt.table[d - 1];
    std::vector<std::string> ser(n + 1);
    for (int v = 1; v <= n; ++v) ser[v] = prev[v - 1].serial();

    mt.table[d].resize(n);
    for (int v = 1; v <= n; ++v) {
      Marking& m = mt.table[d][v - 1];
      m.depth = d;
      std::set<Word> words;
      if (in_tuple[v]) {
        words.insert(Word{ser[v]});
      } else if (reaches[v]) {
        // BFS over (vertex, destuttered chain); monotonicity bounds the chains
        std::set<std::pair<int, Word>> seen;
        std::deque<std::pair<int, Word>> work;
        work.push_back({v, Word{ser[v]}});
        seen.insert(work.back());
        while (!work.empty()) {
          auto [u, chain] = work.front();
          work.pop_front();
          for (int w : succ[u]) {
            Word next = chain;
            if (next.back() != ser[w]) {
              // strict-chain membership: appended letters must strictly
              // decrease in the suffix order (monotonicity of mu_{d-1})
              if (!suffix_leq(prev[w - 1].words, prev[u - 1].words))
                throw std::runtime_error("mark: monotonicity violated along an edge");
              next.push_back(ser[w]);
            }
            if (in_tuple[w]) {
              words.insert(next);
            } else if (reaches[w] && seen.insert({w, next}).second) {
              work.push_back({w, next});
            }
          }
        }
      }
      m.words.assign(words.begin(), words.end());
    }
  }
  return mt;
}

ContractionLts contract(const Topology& g, const IndexTuple& tuple, int depth) {
  MarkingTable mt = mark(g, tuple, depth);
  const int n = g.vertex_count;

  std::map<std::string, int> class_of_serial;
  std::vector<int> cls(n + 1, -1);
  ContractionLts c;
  c.depth = depth;
  for (int v = 1; v <= n; ++v) {
    std::string s = mt.at(depth, v).serial();
    auto it = class_of_serial.find(s);
    if (it == class_of_serial.end()) {
      it = class_of_serial.emplace(s, -1).first;
    }
  }
  // sorted class order = map iteration order
  int idx = 0;
  for (auto& [s, id] : class_of_serial) id = idx++;
  c.class_serials.resize(class_of_serial.size());
  c.members.resize(class_of_serial.size());
  c.class_labels.resize(class_of_serial.size());
  for (auto& [s, id] : class_of_serial) c.class_serials[id] = s;
  for (int v = 1; v <= n; ++v) {
    cls[v] = class_of_serial.at(mt.at(depth, v).serial());
    c.members[cls[v]].push_back(v);
    c.class_labels[cls[v]] = mt.at(0, v).serial();
  }
  for (auto [u, v] : g.edges) c.edges.insert({cls[u], cls[v]});
  c.initial_class = cls[g.initial_vertex];
  return c;
}

std::string ContractionLts::canonical_serial(bool with_self_loops) const {
  std::ostringstream os;
  os << "nodes:";
  for (size_t i = 0; i < class_serials.size(); ++i)
    os << i << "=" << class_serials[i] << "/" << class_labels[i] << ";";
  os << "edges:";
  for (auto [u, v] : edges) {
    if (!with_self_loops && u == v) continue;
    os << u << ">" << v << ";";
  }
  os << "init:" << initial_class;
  return os.str();
}

Lts ContractionLts::as_lts(bool with_self_loops) const {
  Lts lts;
  for (int cidx = 0; cidx < num_classes(); ++cidx) {
    // recover the label set from its serial: "{a,b}" -> {a,b}
    std::vector<std::string> label;
    const std::string& ls = class_labels[cidx];
    std::string body = ls.substr(2, ls.size() - 3);  // strip "L{" and "}"
    std::string cur;
    for (char ch : body) {
      if (ch == ',') { label.push_back(cur); cur.clear(); }
      else cur += ch;
    }
    if (!cur.empty()) label.push_back(cur);
    lts.add_state(label, "c" + std::to_string(cidx));
  }
  lts.initial.push_back(initial_class);
  int a = lts.action_id("a");
  for (auto [u, v] : edges) {
    if (!with_self_loops && u == v) continue;
    lts.add_edge(u, a, v);
  }
  return lts;
}

bool equivalent_graphs(const Topology& g1, const IndexTuple& t1, const Topology& g2,
                       const IndexTuple& t2, int depth) {
  if (t1.size() != t2.size())
    throw std::invalid_argument("equivalent_graphs: tuples must have equal arity");
  ContractionLts a = contract(g1, t1, depth);
  ContractionLts b = contract(g2, t2, depth);
  return a.canonical_serial(true) == b.canonical_serial(true);
}

bool stutter_bisim_equivalent(const Lts& a, const Lts& b) {
  // disjoint union
  Lts u;
  auto absorb = [&](const Lts& src, std::vector<int>& map) {
    for (int s = 0; s < src.num_states; ++s) map.push_back(u.add_state(src.labels[s]));
    for (int s = 0; s < src.num_states; ++s)
      for (const auto& e : src.succ[s]) u.add_edge(map[s], u.action_id("a"), map[e.to]);
  };
  std::vector<int> ma, mb;
  absorb(a, ma);
  absorb(b, mb);

  // initial partition by label
  std::vector<int> block(u.num_states, -1);
  {
    std::map<std::vector<std::string>, int> by_label;
    for (int s = 0; s < u.num_states; ++s) {
      auto it = by_label.find(u.labels[s]);
      if (it == by_label.end()) it = by_label.emplace(u.labels[s], by_label.size()).first;
      block[s] = it->second;
    }
  }

  // Groote-Vaandrager refinement: split B by "can reach an edge into B'
  // while staying inside B".
  bool changed = true;
  while (changed) {
    changed = false;
    int nblocks = *std::max_element(block.begin(), block.end()) + 1;
    for (int bsrc = 0; bsrc < nblocks && !changed; ++bsrc) {
      for (int btgt = 0; btgt < nblocks && !changed; ++btgt) {
        if (bsrc == btgt) continue;
        // states of bsrc with a direct edge into btgt
        std::vector<char> can(u.num_states, 0);
        bool any = false;
        for (int s = 0; s < u.num_states; ++s) {
          if (block[s] != bsrc) continue;
          for (const auto& e : u.succ[s])
            if (block[e.to] == btgt) { can[s] = 1; any = true; break; }
        }
        if (!any) continue;
        // backward closure inside bsrc
        bool grown = true;
        while (grown) {
          grown = false;
          for (int s = 0; s < u.num_states; ++s) {
            if (block[s] != bsrc || can[s]) continue;
            for (const auto& e : u.succ[s])
              if (block[e.to] == bsrc && can[e.to]) { can[s] = 1; grown = true; break; }
          }
        }
        bool all = true, none = true;
        for (int s = 0; s < u.num_states; ++s) {
          if (block[s] != bsrc) continue;
          (can[s] ? none : all) = false;
        }
        if (!all && !none) {
          for (int s = 0; s < u.num_states; ++s)
            if (block[s] == bsrc && !can[s]) block[s] = nblocks;
          changed = true;
        }
      }
    }
  }

  // initial-state sets must cover each other's blocks
  std::set<int> ia, ib;
  for (int s : a.initial) ia.insert(block[ma[s]]);
  for (int s : b.initial) ib.insert(block[mb[s]]);
  return ia == ib;
}

std::string contraction_to_dot(const ContractionLts& c) {
  std::ostringstream os;
  os << "digraph contraction {\n";
  std::hash<std::string> h;
  for (int i = 0; i < c.num_classes(); ++i) {
    std::ostringstream digest;
    digest << std::hex << (h(c.class_serials[i]) & 0xffffffffu);
    os << "  c" << i << " [label=\"" << c.class_labels[i] << "\\n#" << digest.str() << "\\n{";
    for (size_t j = 0; j < c.members[i].size(); ++j)
      os << (j ? "," : "") << c.members[i][j];
    os << "}\"";
    if (i == c.initial_class) os << ", peripheries=2";
    os << "];\n";
  }
  for (auto [u, v] : c.edges) os << "  c" << u << " -> c" << v << ";\n";
  os << "}\n";
  return os.str();
}

std::string marking_serial_json(const Topology& g, const IndexTuple& tuple, int depth) {
  MarkingTable mt = mark(g, tuple, depth);
  std::ostringstream os;
  os << "{";
  for (int v = 1; v <= g.vertex_count; ++v) {
    if (v > 1) os << ",";
    os << "\"" << v << "\":\"" << mt.at(depth, v).serial() << "\"";
  }
  os << "}";
  return os.str();
}

}  // namespace tokmc
