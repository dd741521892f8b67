#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tokmc/marking.hpp"
#include "tokmc/model_checker.hpp"
#include "tokmc/topology.hpp"

namespace tokmc {

struct Family {
  enum class Kind { ring, biring, clique, star, explicit_list };
  Kind kind = Kind::ring;
  std::vector<Topology> topologies;  // explicit_list only

  static Family ring();
  static Family biring();
  static Family clique();
  static Family star();
  static Family explicit_list(std::vector<Topology> ts);

  bool structural() const { return kind != Kind::explicit_list; }
  int min_size() const;               // smallest constructible member
  Topology member(int n) const;       // structural families only
  static std::optional<Family> parse(const std::string& name);
  std::string name() const;
};

struct Verdict {
  enum class Answer { Yes, No, UnknownUpTo };
  Answer answer = Answer::UnknownUpTo;
  int bound = 0;                       // cutoff used, or bound swept
  std::string method;                  // names the cutoff/mode justifying a Yes
  std::optional<int> failing_size;
  std::optional<Counterexample> counterexample;
  std::vector<std::pair<int, bool>> per_size;  // (size, holds)
};

/// Family cutoffs: 2k for rings and bi-rings, k+1 for cliques and
/// stars, non-alternating prefixes only. Alternating prefixes have no
/// paper-backed cutoff and get nullopt.
std::optional<int> cutoff_for(const Family& family, int k, bool prefix_alternating);

enum class PmcpMode { cutoff, sweep };

struct PmcpOptions {
  PmcpMode mode = PmcpMode::cutoff;
  int sweep_bound = 6;
  FairnessSpec::Mode fairness = FairnessSpec::Mode::token_global;
  int jobs = 1;
};

Verdict solve_pmcp(const Family& family, const ProcessTemplate& tpl, const itl::Formula& f,
                   const PmcpOptions& opts);

/// Contraction values (fair, self-loop-free canonical form) per family size,
/// with the least size from which the set stays constant up to the bound.
struct ContractionEnumeration {
  int k = 0, depth = 0;
  std::map<int, std::set<std::string>> sets_by_size;
  std::optional<int> stabilized_at;
  struct Realizer {
    int size;
    std::vector<int> tuple;
  };
  std::map<std::string, Realizer> smallest_realizer;
};

ContractionEnumeration enumerate_contractions(const Family& family, int k, int depth,
                                              int size_bound);

/// Decomposition into finitely many finite checks: representatives of contraction values, one
/// finite model check per representative, Boolean skeletons B_G per size
/// combined up to the stabilization point.
struct Decomposition {
  struct Representative {
    std::string serial;
    int size;
    std::vector<int> tuple;
    bool leaf_value;
  };
  std::vector<Representative> representatives;
  std::optional<int> stabilized_at;
  std::vector<std::pair<int, bool>> per_size;  // B_G truth value per size
  Verdict verdict;
};

Decomposition decompose(const Family& family, int k, int depth, const ProcessTemplate& tpl,
                        const itl::Formula& f, int size_bound,
                        FairnessSpec::Mode fairness = FairnessSpec::Mode::token_global);

std::string pmcp_report_json(const Verdict& v, const Family& family, const std::string& mode,
                             int k, int d, const std::string& representatives_digest = "");

}  // namespace tokmc
