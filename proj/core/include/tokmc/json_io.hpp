#pragma once

#include <string>

#include "tokmc/cm_demo.hpp"
#include "tokmc/process_template.hpp"
#include "tokmc/topology.hpp"

namespace tokmc {

// Template document fields (normative): states, token_states, initial (two
// entries: with token first), internal_actions, snd_directions,
// rcv_directions, transitions (triples), labels (state -> list).
ProcessTemplate template_from_json(const std::string& text);
std::string template_to_json(const ProcessTemplate& t);

// Topology document fields: n, edges (pairs), initial, optional snd_labels /
// rcv_labels as [from, to, direction] triples.
Topology topology_from_json(const std::string& text);
std::string topology_to_json(const Topology& g);

// Counter machine: states, initial, halt, program (op/counter/goto or
// zero/nonzero fields per entry).
CounterMachine cm_from_json(const std::string& text);
std::string cm_to_json(const CounterMachine& cm);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace tokmc
