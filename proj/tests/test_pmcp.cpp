#include <doctest.h>

#include <random>
#include <set>

#include "tokmc/pmcp.hpp"

using namespace tokmc;
using namespace tokmc::itl;

TEST_CASE("cutoff table") {
  CHECK(cutoff_for(Family::ring(), 2, false) == 4);
  CHECK(cutoff_for(Family::biring(), 3, false) == 6);
  CHECK(cutoff_for(Family::clique(), 3, false) == 4);
  CHECK(cutoff_for(Family::star(), 1, false) == 2);
  CHECK(!cutoff_for(Family::ring(), 3, true).has_value());
  CHECK(!cutoff_for(Family::clique(), 2, true).has_value());
  CHECK_THROWS(cutoff_for(Family::explicit_list({make_ring(3)}), 1, false));
}

TEST_CASE("mutex safety has a Yes cutoff verdict on rings") {
  Formula f = parse_formula("forall i forall j distinct . A G !(crit@i & crit@j)");
  PmcpOptions opts;
  opts.mode = PmcpMode::cutoff;
  Verdict v = solve_pmcp(Family::ring(), builtin_template("mutex"), f, opts);
  CHECK(v.answer == Verdict::Answer::Yes);
  CHECK(v.bound == 4);
  CHECK(v.method.find("cutoff") != std::string::npos);
  CHECK(v.per_size.size() == 3);  // sizes 2..4
}

TEST_CASE("the adjacency formula fails in a sweep at ring size 7") {
  PmcpOptions opts;
  opts.mode = PmcpMode::sweep;
  opts.sweep_bound = 8;
  Verdict v = solve_pmcp(Family::ring(), builtin_template("shuttle"), gen_adj_formula(), opts);
  CHECK(v.answer == Verdict::Answer::No);
  REQUIRE(v.failing_size.has_value());
  CHECK(*v.failing_size == 7);
  REQUIRE(v.counterexample.has_value());
  CHECK(!v.counterexample->cycle.empty());
}

TEST_CASE("cutoff mode rejects alternating prefixes") {
  PmcpOptions opts;
  opts.mode = PmcpMode::cutoff;
  CHECK_THROWS(solve_pmcp(Family::ring(), builtin_template("shuttle"), gen_adj_formula(), opts));
}

TEST_CASE("token liveness on cliques: cutoff k+1 = 2") {
  Formula f = parse_formula("forall i . A F tok@i");
  PmcpOptions opts;
  opts.mode = PmcpMode::cutoff;
  Verdict v = solve_pmcp(Family::clique(), builtin_template("shuttle"), f, opts);
  CHECK(v.answer == Verdict::Answer::Yes);
  CHECK(v.bound == 2);
}

TEST_CASE("sweeps return UnknownUpTo when nothing fails") {
  Formula f = parse_formula("forall i . A F tok@i");
  PmcpOptions opts;
  opts.mode = PmcpMode::sweep;
  opts.sweep_bound = 5;
  Verdict v = solve_pmcp(Family::star(), builtin_template("relay"), f, opts);
  CHECK(v.answer == Verdict::Answer::UnknownUpTo);
  CHECK(v.bound == 5);
  for (auto [n, ok] : v.per_size) CHECK(ok);
}

TEST_CASE("parallel sweep agrees with the serial one") {
  Formula f = parse_formula("forall i . A F tok@i");
  PmcpOptions serial;
  serial.mode = PmcpMode::sweep;
  serial.sweep_bound = 6;
  PmcpOptions par = serial;
  par.jobs = 4;
  Verdict a = solve_pmcp(Family::ring(), builtin_template("mutex"), f, serial);
  Verdict b = solve_pmcp(Family::ring(), builtin_template("mutex"), f, par);
  CHECK(a.answer == b.answer);
  CHECK(a.per_size == b.per_size);
}

TEST_CASE("ring contraction sets stabilize at 2k") {
  auto e = enumerate_contractions(Family::ring(), 2, 2, 10);
  REQUIRE(e.stabilized_at.has_value());
  CHECK(*e.stabilized_at == 4);
  // set sizes are constant (hence non-increasing) past the stabilization point
  size_t sz = e.sets_by_size.at(4).size();
  for (int n = 4; n <= 10; ++n) CHECK(e.sets_by_size.at(n).size() == sz);
  // and strictly growing before it
  CHECK(e.sets_by_size.at(2).size() < e.sets_by_size.at(3).size());
  CHECK(e.sets_by_size.at(3).size() < sz);
}

TEST_CASE("clique contraction sets stabilize at k+1") {
  auto e = enumerate_contractions(Family::clique(), 2, 3, 8);
  REQUIRE(e.stabilized_at.has_value());
  CHECK(*e.stabilized_at == 3);
}

TEST_CASE("star contraction sets stabilize at k+1") {
  for (int k : {1, 2}) {
    auto e = enumerate_contractions(Family::star(), k, 2, 7);
    REQUIRE(e.stabilized_at.has_value());
    CHECK(*e.stabilized_at == k + 1);
  }
}

TEST_CASE("ring k=1: one unlabeled contraction shape from size 2 onward") {
  auto e = enumerate_contractions(Family::ring(), 1, 1, 6);
  REQUIRE(e.stabilized_at.has_value());
  CHECK(*e.stabilized_at == 2);
  // ignoring the initial-class pointer there is a single shape
  std::set<std::string> stripped;
  for (const auto& s : e.sets_by_size.at(6)) stripped.insert(s.substr(0, s.find("init:")));
  CHECK(stripped.size() == 1);
}

TEST_CASE("realizers reproduce their contraction value") {
  auto e = enumerate_contractions(Family::ring(), 2, 1, 8);
  for (const auto& [serial, r] : e.smallest_realizer) {
    ContractionLts c = contract(Family::ring().member(r.size), IndexTuple{r.tuple}, 1);
    CHECK(c.canonical_serial(false) == serial);
  }
}

TEST_CASE("decompose: trivially-true safety needs at most two representative checks") {
  Formula f = parse_formula("forall i . A G !halt@i");
  Decomposition d = decompose(Family::ring(), 1, 1, builtin_template("shuttle"), f, 7);
  CHECK(d.verdict.answer == Verdict::Answer::Yes);
  CHECK(d.representatives.size() <= 2);
  for (const auto& r : d.representatives) CHECK(r.leaf_value);
}

TEST_CASE("decompose agrees with cutoff mode on the mutex formula") {
  Formula f = parse_formula("forall i forall j distinct . A G !(crit@i & crit@j)");
  Decomposition d = decompose(Family::ring(), 2, 1, builtin_template("mutex"), f, 8);
  CHECK(d.verdict.answer == Verdict::Answer::Yes);

  PmcpOptions opts;
  opts.mode = PmcpMode::cutoff;
  Verdict v = solve_pmcp(Family::ring(), builtin_template("mutex"), f, opts);
  CHECK(v.answer == Verdict::Answer::Yes);
}

TEST_CASE("decompose on an existential depth-2 formula agrees with a sweep") {
  Formula f = gen_phi_k(2);  // exists-exists, depth 1 <= 2
  Decomposition d = decompose(Family::clique(), 2, 2, builtin_template("shuttle"), f, 6);
  PmcpOptions opts;
  opts.mode = PmcpMode::sweep;
  opts.sweep_bound = 6;
  Verdict v = solve_pmcp(Family::clique(), builtin_template("shuttle"), f, opts);
  bool sweep_all_true = true;
  for (auto [n, ok] : v.per_size) sweep_all_true = sweep_all_true && ok;
  if (d.verdict.answer == Verdict::Answer::Yes) CHECK(sweep_all_true);
  if (d.verdict.answer == Verdict::Answer::No) CHECK(v.answer == Verdict::Answer::No);
  // per-size values must agree wherever both computed
  for (auto [n, ok] : d.per_size) {
    for (auto [m, ok2] : v.per_size)
      if (m == n) CHECK(ok == ok2);
  }
}

TEST_CASE("decompose rejects mismatched profiles") {
  Formula f = gen_phi_k(2);
  CHECK_THROWS(decompose(Family::ring(), 1, 1, builtin_template("shuttle"), f, 6));
  CHECK_THROWS(decompose(Family::ring(), 2, 0, builtin_template("shuttle"), f, 6));
}

TEST_CASE("alternating adjacency formula: decomposition verdicts match sweeps") {
  // the adjacency-cover formula is alternating; rings up to size 8 falsify it at 7
  Decomposition d =
      decompose(Family::ring(), 3, 1, builtin_template("shuttle"), gen_adj_formula(), 8);
  CHECK(d.verdict.answer == Verdict::Answer::No);
  REQUIRE(d.verdict.failing_size.has_value());
  CHECK(*d.verdict.failing_size == 7);
}

TEST_CASE("pmcp json report shape") {
  Formula f = parse_formula("forall i . A F tok@i");
  PmcpOptions opts;
  opts.mode = PmcpMode::cutoff;
  Verdict v = solve_pmcp(Family::clique(), builtin_template("shuttle"), f, opts);
  std::string j = pmcp_report_json(v, Family::clique(), "cutoff", 1, 1, "deadbeef");
  CHECK(j.find("\"mode\":\"cutoff\"") != std::string::npos);
  CHECK(j.find("\"family\":\"clique\"") != std::string::npos);
  CHECK(j.find("\"answer\":\"Yes\"") != std::string::npos);
  CHECK(j.find("\"representatives_digest\":\"deadbeef\"") != std::string::npos);
}

TEST_CASE("contraction memoization never changes verdicts") {
  std::mt19937_64 rng(501);
  for (int it = 0; it < 40; ++it) {
    auto tpl = builtin_template(it % 2 ? "shuttle" : "mutex");
    Topology g;
    switch (it % 3) {
      case 0: g = make_ring(4 + it % 4); break;
      case 1: g = make_clique(3 + it % 3); break;
      default: g = make_star(3 + it % 3); break;
    }
    std::vector<std::string> props = it % 2 ? std::vector<std::string>{}
                                            : std::vector<std::string>{"crit"};
    Formula f = random_formula(1 + it % 2, 1 + it % 2, 4 + rng() % 5, rng(), props);
    IndexedCheckOptions with, without;
    with.memoize_by_contraction = true;
    with.want_counterexample = false;
    without.memoize_by_contraction = false;
    without.want_counterexample = false;
    auto a = check_indexed(tpl, g, f, FairnessSpec::Mode::token_global, with);
    auto b = check_indexed(tpl, g, f, FairnessSpec::Mode::token_global, without);
    INFO("it=" << it << " formula " << print_formula(f));
    CHECK(a.holds == b.holds);
  }
}

TEST_CASE("decompose agrees with sweeps across the formula suite") {
  std::vector<std::string> suite = {
      "forall i . A F tok@i",
      "forall i forall j distinct . A G !(tok@i & tok@j)",
      "exists i . E F tok@i",
      "forall i . E G !tok@i",
      "exists i exists j distinct . E (tok@i U tok@j)",
  };
  for (const auto& text : suite) {
    Formula f = parse_formula(text);
    auto prof = profile(f);
    for (const auto& fam : {Family::ring(), Family::clique(), Family::star()}) {
      int bound = fam.kind == Family::Kind::ring ? 2 * prof.k + 4 : prof.k + 4;
      Decomposition d =
          decompose(fam, prof.k, std::max(prof.d, 1), builtin_template("shuttle"), f, bound);
      PmcpOptions sw;
      sw.mode = PmcpMode::sweep;
      sw.sweep_bound = bound;
      Verdict vs = solve_pmcp(fam, builtin_template("shuttle"), f, sw);
      INFO(text << " on " << fam.name());
      if (d.verdict.answer == Verdict::Answer::Yes) CHECK(!vs.failing_size.has_value());
      if (d.verdict.answer == Verdict::Answer::No) {
        REQUIRE(vs.failing_size.has_value());
        CHECK(*d.verdict.failing_size == *vs.failing_size);
      }
      CHECK(d.per_size == vs.per_size);
    }
  }
}
