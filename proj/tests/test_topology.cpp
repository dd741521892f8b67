#include <doctest.h>

#include <algorithm>

#include "tokmc/topology.hpp"

using namespace tokmc;

TEST_CASE("ring constructor") {
  Topology g = make_ring(3);
  CHECK(g.vertex_count == 3);
  CHECK(g.initial_vertex == 1);
  std::vector<std::pair<int, int>> want{{1, 2}, {2, 3}, {3, 1}};
  CHECK(g.edges == want);
  CHECK(validate_topology(g).ok);
  CHECK_THROWS(make_ring(1));
}

TEST_CASE("clique constructor") {
  Topology g = make_clique(3);
  CHECK(g.edges.size() == 6);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      if (i != j) CHECK(g.has_edge(i, j));
  CHECK(validate_topology(g).ok);
}

TEST_CASE("biring carries total direction labels") {
  Topology g = make_biring(3);
  CHECK(g.edges.size() == 6);
  CHECK(validate_topology(g).ok);
  for (auto [u, v] : g.edges) {
    REQUIRE(g.snd_label.count({u, v}));
    REQUIRE(g.rcv_label.count({u, v}));
    bool cw = v == u % 3 + 1;
    CHECK(g.snd_label.at({u, v}) == (cw ? "cw!" : "ccw!"));
    CHECK(g.rcv_label.at({u, v}) == (cw ? "cw?" : "ccw?"));
  }
}

TEST_CASE("star is a 1-centered bidirectional hub") {
  Topology g = make_star(4);
  CHECK(g.edges.size() == 6);
  for (int leaf = 2; leaf <= 4; ++leaf) {
    CHECK(g.has_edge(1, leaf));
    CHECK(g.has_edge(leaf, 1));
  }
  CHECK(!g.has_edge(2, 3));
  CHECK(g.initial_vertex == 1);
  CHECK(validate_topology(g).ok);
}

TEST_CASE("family constructors validate across sizes") {
  for (int n = 2; n <= 9; ++n) {
    CHECK(validate_topology(make_ring(n)).ok);
    CHECK(validate_topology(make_biring(n)).ok);
    CHECK(validate_topology(make_clique(n)).ok);
    CHECK(validate_topology(make_star(n)).ok);
  }
}

TEST_CASE("validation flags self-loops and partial labelings") {
  Topology g = make_ring(4);
  CHECK(validate_topology(g).ok);
  g.edges.emplace_back(2, 2);
  auto rep = validate_topology(g);
  CHECK(!rep.ok);
  bool found = false;
  for (const auto& v : rep.violations) found = found || v.rule == "self-loop";
  CHECK(found);

  Topology b = make_biring(3);
  b.snd_label.erase(b.snd_label.begin());
  auto rep2 = validate_topology(b);
  CHECK(!rep2.ok);
}

TEST_CASE("graph LTS labels tuple positions, not vertex ids") {
  Topology g = make_ring(3);
  Lts l1 = graph_lts(g, IndexTuple{{1}});
  CHECK(l1.labels[0] == std::vector<std::string>{"1"});
  CHECK(l1.labels[1].empty());
  CHECK(l1.labels[2].empty());
  CHECK(l1.initial == std::vector<int>{0});

  Lts l2 = graph_lts(g, IndexTuple{{2, 3}});
  CHECK(l2.labels[1] == std::vector<std::string>{"1"});
  CHECK(l2.labels[2] == std::vector<std::string>{"2"});
  CHECK(l2.labels[0].empty());

  Lts l0 = graph_lts(make_clique(2), IndexTuple{{}});
  CHECK(l0.num_states == 2);
  CHECK(l0.num_transitions() == 2);
  for (int s = 0; s < 2; ++s) CHECK(l0.labels[s].empty());
}

TEST_CASE("graph LTS label sets are singleton and distinct exactly on the tuple") {
  Topology g = make_clique(5);
  IndexTuple t{{4, 2, 5}};
  Lts l = graph_lts(g, t);
  std::vector<std::string> seen;
  for (int s = 0; s < l.num_states; ++s) {
    if (l.labels[s].empty()) continue;
    CHECK(l.labels[s].size() == 1);
    seen.push_back(l.labels[s][0]);
  }
  std::sort(seen.begin(), seen.end());
  CHECK(seen == std::vector<std::string>{"1", "2", "3"});
}

TEST_CASE("tuples must be distinct and in range") {
  Topology g = make_ring(3);
  CHECK_THROWS(graph_lts(g, IndexTuple{{1, 1}}));
  CHECK_THROWS(graph_lts(g, IndexTuple{{0}}));
  CHECK_THROWS(graph_lts(g, IndexTuple{{4}}));
}

TEST_CASE("family shorthand parsing") {
  auto g = parse_family_shorthand("ring:6");
  REQUIRE(g.has_value());
  CHECK(g->vertex_count == 6);
  CHECK(parse_family_shorthand("biring:5")->edges.size() == 10);
  CHECK(parse_family_shorthand("clique:4")->edges.size() == 12);
  CHECK(parse_family_shorthand("star:4")->edges.size() == 6);
  CHECK(!parse_family_shorthand("blob:4").has_value());
  CHECK(!parse_family_shorthand("ring").has_value());
}

TEST_CASE("lasso helper for tests") {
  Topology g = make_lasso(3, 2);
  CHECK(g.vertex_count == 5);
  CHECK(g.initial_vertex == 1);
  CHECK(g.has_edge(1, 2));
  CHECK(g.has_edge(2, 3));
  CHECK(g.has_edge(3, 4));
  CHECK(g.has_edge(4, 5));
  CHECK(g.has_edge(5, 3));
  CHECK(validate_topology(g).ok);
}
