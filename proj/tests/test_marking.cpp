#include <doctest.h>

#include <random>
#include <set>

#include "tokmc/marking.hpp"

using namespace tokmc;

TEST_CASE("uni-ring markings match the table: tuple vertices") {
  Topology g = make_ring(5);
  IndexTuple t{{1, 3}};
  MarkingTable mt = mark(g, t, 2);
  // mu_d(g_i) = { single-letter word mu_{d-1}(g_i) }
  for (int d : {1, 2}) {
    for (int pos = 0; pos < 2; ++pos) {
      int v = t.entries[pos];
      const Marking& m = mt.at(d, v);
      REQUIRE(m.words.size() == 1);
      REQUIRE(m.words[0].size() == 1);
      CHECK(m.words[0][0] == mt.at(d - 1, v).serial());
    }
  }
  CHECK(mt.at(0, 1).serial() == "L{1}");
  CHECK(mt.at(0, 3).serial() == "L{2}");
  CHECK(mt.at(0, 2).serial() == "L{}");
}

TEST_CASE("uni-ring markings match the table: hub vertices") {
  Topology g = make_ring(5);
  IndexTuple t{{1, 3}};
  MarkingTable mt = mark(g, t, 1);
  // v=2 reaches g_2=3 first: mu_1(2) = {[{} , {2}]}
  const Marking& m2 = mt.at(1, 2);
  REQUIRE(m2.words.size() == 1);
  CHECK(m2.words[0] == Word{"L{}", "L{2}"});
  // v=4,5 reach g_1=1 first
  for (int v : {4, 5}) {
    const Marking& m = mt.at(1, v);
    REQUIRE(m.words.size() == 1);
    CHECK(m.words[0] == Word{"L{}", "L{1}"});
  }
}

TEST_CASE("clique markings: non-tuple vertices see every position") {
  Topology g = make_clique(5);
  IndexTuple t{{2, 4}};
  MarkingTable mt = mark(g, t, 1);
  for (int v : {1, 3, 5}) {
    const Marking& m = mt.at(1, v);
    REQUIRE(m.words.size() == 2);
    std::set<Word> got(m.words.begin(), m.words.end());
    CHECK(got == std::set<Word>{{"L{}", "L{1}"}, {"L{}", "L{2}"}});
  }
}

TEST_CASE("vertices that cannot reach the tuple get empty markings") {
  Topology g;
  g.vertex_count = 3;
  g.edges = {{1, 2}, {2, 3}, {3, 2}};  // 2,3 cannot reach 1
  g.initial_vertex = 1;
  MarkingTable mt = mark(g, IndexTuple{{1}}, 2);
  CHECK(mt.at(1, 2).words.empty());
  CHECK(mt.at(1, 3).words.empty());
  CHECK(mt.at(2, 2).words.empty());
}

TEST_CASE("suffix order") {
  CHECK(suffix_leq({{"b"}}, {{"a", "b"}}));
  CHECK(!suffix_leq({{"a"}}, {{"a", "b"}}));  // prefix, not suffix
  CHECK(suffix_leq({}, {{"a", "b"}}));
  CHECK(suffix_leq({}, {}));
  CHECK(suffix_leq({{"a", "b"}}, {{"a", "b"}}));  // non-proper suffix
  CHECK(!suffix_leq({{"a", "b"}}, {{"b"}}));
}

TEST_CASE("ring(10) tuple (1,5): four classes in a ring with hub self-loops") {
  ContractionLts c = contract(make_ring(10), IndexTuple{{1, 5}}, 1);
  REQUIRE(c.num_classes() == 4);
  std::set<std::vector<int>> members(c.members.begin(), c.members.end());
  CHECK(members.count({1}));
  CHECK(members.count({5}));
  CHECK(members.count({2, 3, 4}));
  CHECK(members.count({6, 7, 8, 9, 10}));
  // self-loops exactly on the multi-member hub classes
  for (int i = 0; i < c.num_classes(); ++i)
    CHECK(c.has_self_loop(i) == (c.members[i].size() > 1));
  // same classes at every depth
  for (int d : {2, 3}) {
    ContractionLts cd = contract(make_ring(10), IndexTuple{{1, 5}}, d);
    std::set<std::vector<int>> md(cd.members.begin(), cd.members.end());
    CHECK(md == members);
  }
  CHECK(c.initial_class >= 0);
  CHECK(c.members[c.initial_class] == std::vector<int>{1});
}

TEST_CASE("clique(5) tuple (2,4): a 3-clique with a self-loop on the merged class") {
  ContractionLts c = contract(make_clique(5), IndexTuple{{2, 4}}, 1);
  REQUIRE(c.num_classes() == 3);
  int merged = -1;
  for (int i = 0; i < c.num_classes(); ++i)
    if (c.members[i].size() == 3) merged = i;
  REQUIRE(merged >= 0);
  CHECK(c.members[merged] == std::vector<int>{1, 3, 5});
  CHECK(c.has_self_loop(merged));
  for (int i = 0; i < c.num_classes(); ++i)
    for (int j = 0; j < c.num_classes(); ++j)
      if (i != j) CHECK(c.edges.count({i, j}));
}

TEST_CASE("all-distinct markings reproduce the topology") {
  // a line 1 -> 2 -> 3 with both endpoints tracked: every vertex has its own
  // marking, so the contraction is the graph itself
  Topology g;
  g.vertex_count = 3;
  g.edges = {{1, 2}, {2, 3}};
  g.initial_vertex = 1;
  ContractionLts c = contract(g, IndexTuple{{1, 3}}, 1);
  CHECK(c.num_classes() == 3);
  CHECK(c.edges.size() == 2);
}

TEST_CASE("equivalent_graphs on rings of different sizes") {
  CHECK(equivalent_graphs(make_ring(10), IndexTuple{{1, 5}}, make_ring(12), IndexTuple{{1, 6}}, 2));
  CHECK(!equivalent_graphs(make_ring(6), IndexTuple{{1, 2}}, make_ring(6), IndexTuple{{1, 4}}, 1));
  CHECK(equivalent_graphs(make_ring(6), IndexTuple{{1, 4}}, make_ring(6), IndexTuple{{1, 4}}, 3));
  CHECK_THROWS(equivalent_graphs(make_ring(4), IndexTuple{{1}}, make_ring(4), IndexTuple{{1, 2}}, 1));
}

TEST_CASE("monotonicity: reachable vertices have suffix-smaller markings") {
  std::mt19937_64 rng(11);
  for (int it = 0; it < 30; ++it) {
    int n = 3 + static_cast<int>(rng() % 4);
    Topology g;
    g.vertex_count = n;
    g.initial_vertex = 1;
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        if (i != j && rng() % 3 == 0) g.edges.emplace_back(i, j);
    int k = 1 + static_cast<int>(rng() % 2);
    std::vector<int> tuple;
    for (int v = 1; tuple.size() < static_cast<size_t>(k) && v <= n; ++v) tuple.push_back(v);
    IndexTuple t{tuple};
    MarkingTable mt = mark(g, t, 3);

    // Reachability along walks whose intermediate vertices avoid the tuple:
    // that is the scope in which the markings' walk sets are suffix-closed
    // (a marking of a tuple vertex is the singleton trivial chain).
    auto in_tuple = [&](int v) {
      return std::find(tuple.begin(), tuple.end(), v) != tuple.end();
    };
    std::vector<std::vector<char>> reach(n + 1, std::vector<char>(n + 1, 0));
    for (int v = 1; v <= n; ++v) {
      if (in_tuple(v)) continue;
      std::vector<int> stack{v};
      while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        if (x != v && in_tuple(x)) continue;  // walks stop at the tuple
        for (auto [a, b] : g.edges)
          if (a == x && !reach[v][b]) {
            reach[v][b] = 1;
            stack.push_back(b);
          }
      }
    }

    for (int d = 1; d <= 3; ++d)
      for (int u = 1; u <= n; ++u)
        for (int v = 1; v <= n; ++v)
          if (reach[v][u]) {
            INFO("n=" << n << " d=" << d << " u=" << u << " v=" << v);
            CHECK(suffix_leq(mt.at(d, u).words, mt.at(d, v).words));
          }
  }
}

TEST_CASE("refinement: equal mu_d implies equal mu_j for j < d") {
  std::mt19937_64 rng(13);
  for (int it = 0; it < 20; ++it) {
    int n = 3 + static_cast<int>(rng() % 4);
    Topology g;
    g.vertex_count = n;
    g.initial_vertex = 1;
    for (int i = 1; i <= n; ++i) g.edges.emplace_back(i, i % n + 1);  // ring backbone
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        if (i != j && rng() % 4 == 0 && !g.has_edge(i, j)) g.edges.emplace_back(i, j);
    IndexTuple t{{1 + static_cast<int>(rng() % n)}};
    MarkingTable mt = mark(g, t, 3);
    for (int d = 1; d <= 3; ++d)
      for (int u = 1; u <= n; ++u)
        for (int v = 1; v <= n; ++v)
          if (mt.at(d, u).serial() == mt.at(d, v).serial())
            for (int j = 0; j < d; ++j) CHECK(mt.at(j, u).serial() == mt.at(j, v).serial());
  }
}

TEST_CASE("strict chains: every marking word strictly decreases") {
  std::mt19937_64 rng(17);
  for (int it = 0; it < 20; ++it) {
    int n = 3 + static_cast<int>(rng() % 4);
    Topology g;
    g.vertex_count = n;
    g.initial_vertex = 1;
    for (int i = 1; i <= n; ++i) g.edges.emplace_back(i, i % n + 1);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        if (i != j && rng() % 4 == 0 && !g.has_edge(i, j)) g.edges.emplace_back(i, j);
    IndexTuple t{{1, 2}};
    MarkingTable mt = mark(g, t, 3);
    for (int d = 2; d <= 3; ++d) {
      // resolve letter serials back to markings of the previous depth
      std::map<std::string, const Marking*> by_serial;
      for (int v = 1; v <= n; ++v) by_serial[mt.at(d - 1, v).serial()] = &mt.at(d - 1, v);
      for (int v = 1; v <= n; ++v)
        for (const auto& w : mt.at(d, v).words) {
          CHECK(!w.empty());
          CHECK(w.front() == mt.at(d - 1, v).serial());
          for (size_t i = 1; i < w.size(); ++i) {
            CHECK(w[i] != w[i - 1]);
            const Marking* prev = by_serial.at(w[i - 1]);
            const Marking* here = by_serial.at(w[i]);
            CHECK(suffix_leq(here->words, prev->words));
          }
        }
    }
  }
}

TEST_CASE("stutter bisimulation basics") {
  Lts a = graph_lts(make_ring(2), IndexTuple{{}});
  Lts b = graph_lts(make_ring(3), IndexTuple{{}});
  CHECK(stutter_bisim_equivalent(a, a));
  CHECK(stutter_bisim_equivalent(a, b));  // all labels empty, both collapse

  Lts c = graph_lts(make_ring(3), IndexTuple{{1}});
  CHECK(!stutter_bisim_equivalent(a, c));  // reachable label difference
}

TEST_CASE("stutter expansion preserves bisimilarity") {
  Lts a = graph_lts(make_ring(4), IndexTuple{{1, 3}});
  // duplicate state 1 (vertex 2): split into an entry copy that stutters
  Lts b = a;
  int clone = b.add_state(b.labels[1]);
  // redirect edges into 1 to the clone; clone steps to 1
  for (int s = 0; s < b.num_states; ++s)
    for (auto& e : b.succ[s])
      if (e.to == 1 && s != clone) e.to = clone;
  b.add_edge(clone, "a", 1);
  CHECK(stutter_bisim_equivalent(a, b));
}

TEST_CASE("graph LTS is stutter-bisimilar to its contraction on family topologies") {
  for (int n : {4, 6, 9}) {
    Topology g = make_ring(n);
    IndexTuple t{{1, 3}};
    CHECK(stutter_bisim_equivalent(graph_lts(g, t), contract(g, t, 2).as_lts(true)));
  }
  for (int n : {3, 5}) {
    Topology g = make_clique(n);
    IndexTuple t{{1, 2}};
    CHECK(stutter_bisim_equivalent(graph_lts(g, t), contract(g, t, 1).as_lts(true)));
  }
  for (int n : {3, 6}) {
    Topology g = make_star(n);
    IndexTuple t{{2}};
    CHECK(stutter_bisim_equivalent(graph_lts(g, t), contract(g, t, 2).as_lts(true)));
  }
}

TEST_CASE("equivalent family pairs are stutter-bisimilar as graph LTSs") {
  Topology a = make_ring(10), b = make_ring(12);
  IndexTuple ta{{1, 5}}, tb{{1, 6}};
  REQUIRE(equivalent_graphs(a, ta, b, tb, 2));
  CHECK(stutter_bisim_equivalent(graph_lts(a, ta), graph_lts(b, tb)));
}

TEST_CASE("depth-0 contraction quotients by nominal labels") {
  ContractionLts c = contract(make_ring(4), IndexTuple{{1}}, 0);
  REQUIRE(c.num_classes() == 2);
  std::set<std::vector<int>> members(c.members.begin(), c.members.end());
  CHECK(members.count({1}));
  CHECK(members.count({2, 3, 4}));
}
