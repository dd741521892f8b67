#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tokmc/lts.hpp"

namespace tokmc {

/// Local process template: a finite LTS whose states are split into
/// token-holding (T) and token-free (N) sides, with send transitions T -> N,
/// receive transitions N -> T and side-preserving internal transitions.
/// Direction-unaware templates are the degenerate case of singleton
/// direction sets.
struct ProcessTemplate {
  struct Transition {
    int from;
    std::string action;
    int to;
  };

  std::string name;
  std::vector<std::string> states;
  std::vector<bool> has_token;            // per state: in T?
  int initial_with_token = -1;            // iota_t
  int initial_without_token = -1;         // iota_n
  std::vector<std::string> internal_actions;
  std::vector<std::string> snd_directions;
  std::vector<std::string> rcv_directions;
  std::vector<Transition> transitions;
  std::vector<std::vector<std::string>> prop_labels;  // sorted, per state

  int state_id(const std::string& s) const;  // -1 when unknown
  bool direction_aware() const {
    return snd_directions.size() > 1 || rcv_directions.size() > 1;
  }
  bool is_internal(const std::string& a) const;
  bool is_snd(const std::string& a) const;
  bool is_rcv(const std::string& a) const;
  std::vector<std::string> prop_alphabet() const;  // union of labels, sorted
  Lts as_lts() const;
};

struct ValidationReport {
  struct Violation {
    std::string rule;
    std::string description;
    std::vector<std::string> witness;  // states / cycle involved
  };
  bool ok = true;
  std::vector<Violation> violations;
};

enum class ValidationMode {
  strict,             // no internal-only cycle reachable from the initials
  strict_all_states,  // no internal-only cycle anywhere
  relaxed,            // every T state reaches a send, every N state a receive
};

ValidationReport validate_template(const ProcessTemplate& t,
                                   ValidationMode mode = ValidationMode::strict);

enum class StateClass { send_only, receive_only, neither };

StateClass classify_state(const ProcessTemplate& t, int state);

/// Internal-transition path (state sequence, starting at `state`) ending in a
/// state of the requested classification; empty path when `state` already
/// qualifies. Absent only for templates that fail validation.
std::optional<std::vector<int>> priming_path(const ProcessTemplate& t, int state, StateClass goal);

/// Documented catalogue: "shuttle", "mutex", "relay", "cwshuttle".
ProcessTemplate builtin_template(const std::string& name);
std::vector<std::string> builtin_template_names();

}  // namespace tokmc
