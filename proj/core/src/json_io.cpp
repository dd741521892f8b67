#include "tokmc/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tokmc {

using nlohmann::json;

ProcessTemplate template_from_json(const std::string& text) {
  json j = json::parse(text);
  ProcessTemplate t;
  t.name = j.value("name", "custom");
  for (const auto& s : j.at("states")) t.states.push_back(s.get<std::string>());
  t.has_token.assign(t.states.size(), false);
  for (const auto& s : j.at("token_states")) {
    int id = t.state_id(s.get<std::string>());
    if (id < 0) throw std::invalid_argument("template: unknown token state " + s.get<std::string>());
    t.has_token[id] = true;
  }
  const auto& init = j.at("initial");
  if (!init.is_array() || init.size() != 2)
    throw std::invalid_argument("template: initial must list [with_token, without_token]");
  t.initial_with_token = t.state_id(init[0].get<std::string>());
  t.initial_without_token = t.state_id(init[1].get<std::string>());
  if (t.initial_with_token < 0 || t.initial_without_token < 0)
    throw std::invalid_argument("template: unknown initial state");
  for (const auto& a : j.at("internal_actions")) t.internal_actions.push_back(a.get<std::string>());
  for (const auto& a : j.at("snd_directions")) t.snd_directions.push_back(a.get<std::string>());
  for (const auto& a : j.at("rcv_directions")) t.rcv_directions.push_back(a.get<std::string>());
  for (const auto& tr : j.at("transitions")) {
    if (!tr.is_array() || tr.size() != 3)
      throw std::invalid_argument("template: transitions must be [src, action, dst] triples");
    int from = t.state_id(tr[0].get<std::string>());
    int to = t.state_id(tr[2].get<std::string>());
    if (from < 0 || to < 0) throw std::invalid_argument("template: transition endpoint unknown");
    t.transitions.push_back({from, tr[1].get<std::string>(), to});
  }
  t.prop_labels.assign(t.states.size(), {});
  if (j.contains("labels")) {
    for (auto it = j["labels"].begin(); it != j["labels"].end(); ++it) {
      int id = t.state_id(it.key());
      if (id < 0) throw std::invalid_argument("template: label on unknown state " + it.key());
      for (const auto& p : it.value()) t.prop_labels[id].push_back(p.get<std::string>());
      std::sort(t.prop_labels[id].begin(), t.prop_labels[id].end());
    }
  }
  return t;
}

std::string template_to_json(const ProcessTemplate& t) {
  json j;
  j["name"] = t.name;
  j["states"] = t.states;
  json toks = json::array();
  for (size_t i = 0; i < t.states.size(); ++i)
    if (t.has_token[i]) toks.push_back(t.states[i]);
  j["token_states"] = toks;
  j["initial"] = {t.states[t.initial_with_token], t.states[t.initial_without_token]};
  j["internal_actions"] = t.internal_actions;
  j["snd_directions"] = t.snd_directions;
  j["rcv_directions"] = t.rcv_directions;
  json trs = json::array();
  for (const auto& tr : t.transitions)
    trs.push_back({t.states[tr.from], tr.action, t.states[tr.to]});
  j["transitions"] = trs;
  json labels = json::object();
  for (size_t i = 0; i < t.states.size(); ++i)
    if (!t.prop_labels[i].empty()) labels[t.states[i]] = t.prop_labels[i];
  j["labels"] = labels;
  return j.dump(2);
}

Topology topology_from_json(const std::string& text) {
  json j = json::parse(text);
  Topology g;
  g.name = j.value("name", "custom");
  g.vertex_count = j.at("n").get<int>();
  g.initial_vertex = j.value("initial", 1);
  for (const auto& e : j.at("edges")) {
    if (!e.is_array() || e.size() != 2)
      throw std::invalid_argument("topology: edges must be [from, to] pairs");
    g.edges.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  auto read_labels = [&](const char* field, std::map<std::pair<int, int>, std::string>& out) {
    if (!j.contains(field)) return;
    for (const auto& e : j[field]) {
      if (!e.is_array() || e.size() != 3)
        throw std::invalid_argument(std::string("topology: ") + field +
                                    " must be [from, to, direction] triples");
      out[{e[0].get<int>(), e[1].get<int>()}] = e[2].get<std::string>();
    }
  };
  read_labels("snd_labels", g.snd_label);
  read_labels("rcv_labels", g.rcv_label);
  return g;
}

std::string topology_to_json(const Topology& g) {
  json j;
  j["name"] = g.name;
  j["n"] = g.vertex_count;
  j["initial"] = g.initial_vertex;
  json edges = json::array();
  for (auto [u, v] : g.edges) edges.push_back({u, v});
  j["edges"] = edges;
  if (g.direction_labeled()) {
    json snd = json::array(), rcv = json::array();
    for (const auto& [e, d] : g.snd_label) snd.push_back({e.first, e.second, d});
    for (const auto& [e, d] : g.rcv_label) rcv.push_back({e.first, e.second, d});
    j["snd_labels"] = snd;
    j["rcv_labels"] = rcv;
  }
  return j.dump(2);
}

CounterMachine cm_from_json(const std::string& text) {
  json j = json::parse(text);
  CounterMachine cm;
  cm.name = j.value("name", "custom");
  cm.num_states = j.at("states").get<int>();
  cm.initial = j.value("initial", 0);
  cm.halt = j.at("halt").get<int>();
  cm.program.resize(cm.num_states);
  using Op = CounterMachine::Instr::Op;
  int q = 0;
  for (const auto& e : j.at("program")) {
    if (q >= cm.num_states) throw std::invalid_argument("cm: more program entries than states");
    auto& in = cm.program[q++];
    std::string op = e.at("op").get<std::string>();
    if (op == "inc") { in.op = Op::Inc; in.counter = e.at("counter").get<int>(); in.target = e.at("goto").get<int>(); }
    else if (op == "dec") { in.op = Op::Dec; in.counter = e.at("counter").get<int>(); in.target = e.at("goto").get<int>(); }
    else if (op == "tz") {
      in.op = Op::Tz;
      in.counter = e.at("counter").get<int>();
      in.target_zero = e.at("zero").get<int>();
      in.target_nonzero = e.at("nonzero").get<int>();
    } else if (op == "goto") { in.op = Op::Goto; in.target = e.at("goto").get<int>(); }
    else throw std::invalid_argument("cm: unknown op '" + op + "'");
  }
  cm.validate();
  return cm;
}

std::string cm_to_json(const CounterMachine& cm) {
  json j;
  j["name"] = cm.name;
  j["states"] = cm.num_states;
  j["initial"] = cm.initial;
  j["halt"] = cm.halt;
  json prog = json::array();
  using Op = CounterMachine::Instr::Op;
  for (const auto& in : cm.program) {
    json e;
    switch (in.op) {
      case Op::Inc: e = {{"op", "inc"}, {"counter", in.counter}, {"goto", in.target}}; break;
      case Op::Dec: e = {{"op", "dec"}, {"counter", in.counter}, {"goto", in.target}}; break;
      case Op::Tz:
        e = {{"op", "tz"}, {"counter", in.counter}, {"zero", in.target_zero},
             {"nonzero", in.target_nonzero}};
        break;
      case Op::Goto: e = {{"op", "goto"}, {"goto", in.target}}; break;
    }
    prog.push_back(e);
  }
  j["program"] = prog;
  return j.dump(2);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace tokmc
