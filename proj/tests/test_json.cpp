#include <doctest.h>

#include "tokmc/json_io.hpp"
#include "tokmc/system.hpp"
#include <set>

using namespace tokmc;

TEST_CASE("template JSON round trip") {
  for (const auto& name : builtin_template_names()) {
    ProcessTemplate t = builtin_template(name);
    ProcessTemplate u = template_from_json(template_to_json(t));
    CHECK(u.states == t.states);
    CHECK(u.has_token == t.has_token);
    CHECK(u.initial_with_token == t.initial_with_token);
    CHECK(u.internal_actions == t.internal_actions);
    CHECK(u.snd_directions == t.snd_directions);
    CHECK(u.rcv_directions == t.rcv_directions);
    CHECK(u.transitions.size() == t.transitions.size());
    CHECK(u.prop_labels == t.prop_labels);
    CHECK(validate_template(u).ok);
  }
}

TEST_CASE("topology JSON round trip keeps direction labels") {
  Topology g = make_biring(4);
  Topology h = topology_from_json(topology_to_json(g));
  CHECK(h.vertex_count == g.vertex_count);
  CHECK(h.initial_vertex == g.initial_vertex);
  CHECK(std::set(h.edges.begin(), h.edges.end()) == std::set(g.edges.begin(), g.edges.end()));
  CHECK(h.snd_label == g.snd_label);
  CHECK(h.rcv_label == g.rcv_label);
  // round-tripped topology composes identically
  auto a = build_system(builtin_template("cwshuttle"), g);
  auto b = build_system(builtin_template("cwshuttle"), h);
  CHECK(a.lts.num_states == b.lts.num_states);
}

TEST_CASE("counter machine JSON round trip") {
  for (const auto& name : builtin_cm_names()) {
    CounterMachine cm = builtin_cm(name);
    CounterMachine back = cm_from_json(cm_to_json(cm));
    CHECK(back.num_states == cm.num_states);
    CHECK(back.halt == cm.halt);
    auto a = cm_reference_run(cm, 2, 200);
    auto b = cm_reference_run(back, 2, 200);
    CHECK(a.halted == b.halted);
    CHECK(a.trace.size() == b.trace.size());
  }
}

TEST_CASE("malformed documents are rejected with messages") {
  CHECK_THROWS(template_from_json("{}"));
  CHECK_THROWS(template_from_json(R"({"states":["a"],"token_states":["zz"]})"));
  CHECK_THROWS(topology_from_json(R"({"edges":[[1,2]]})"));
  CHECK_THROWS(cm_from_json(R"({"states":1,"halt":5,"program":[]})"));
}
