#include "tokmc/pmcp.hpp"

#include <algorithm>
#include <functional>
#include <future>
#include <sstream>
#include <stdexcept>

namespace tokmc {

Family Family::ring() { return {Kind::ring, {}}; }
Family Family::biring() { return {Kind::biring, {}}; }
Family Family::clique() { return {Kind::clique, {}}; }
Family Family::star() { return {Kind::star, {}}; }
Family Family::explicit_list(std::vector<Topology> ts) {
  for (const auto& t : ts)
    if (!validate_topology(t).ok)
      throw std::invalid_argument("Family: explicit member fails validation");
  return {Kind::explicit_list, std::move(ts)};
}

int Family::min_size() const {
  switch (kind) {
    case Kind::ring:
    case Kind::biring:
    case Kind::clique:
    case Kind::star: return 2;
    case Kind::explicit_list: break;
  }
  int m = 0;
  for (const auto& t : topologies) m = m == 0 ? t.vertex_count : std::min(m, t.vertex_count);
  return m;
}

Topology Family::member(int n) const {
  switch (kind) {
    case Kind::ring: return make_ring(n);
    case Kind::biring: return make_biring(n);
    case Kind::clique: return make_clique(n);
    case Kind::star: return make_star(n);
    case Kind::explicit_list: break;
  }
  throw std::invalid_argument("Family::member: explicit-list families have no size index");
}

std::optional<Family> Family::parse(const std::string& name) {
  if (name == "ring") return ring();
  if (name == "biring") return biring();
  if (name == "clique") return clique();
  if (name == "star") return star();
  return std::nullopt;
}

std::string Family::name() const {
  switch (kind) {
    case Kind::ring: return "ring";
    case Kind::biring: return "biring";
    case Kind::clique: return "clique";
    case Kind::star: return "star";
    case Kind::explicit_list: return "explicit-list";
  }
  return "?";
}

std::optional<int> cutoff_for(const Family& family, int k, bool prefix_alternating) {
  if (!family.structural())
    throw std::invalid_argument("cutoff_for: no family cutoff for explicit-list families");
  if (prefix_alternating) return std::nullopt;
  int c = 0;
  switch (family.kind) {
    case Family::Kind::ring:
    case Family::Kind::biring: c = 2 * k; break;
    case Family::Kind::clique:
    case Family::Kind::star: c = k + 1; break;
    default: return std::nullopt;
  }
  return std::max(c, family.min_size());
}

namespace {

struct SizeOutcome {
  int size;
  IndexedCheckResult result;
};

SizeOutcome check_size(const Family& family, int n, const ProcessTemplate& tpl,
                       const itl::Formula& f, FairnessSpec::Mode fair) {
  IndexedCheckOptions opts;
  opts.want_counterexample = true;
  return {n, check_indexed(tpl, family.member(n), f, fair, opts)};
}

}  // namespace

Verdict solve_pmcp(const Family& family, const ProcessTemplate& tpl, const itl::Formula& f,
                   const PmcpOptions& opts) {
  auto prof = itl::profile(f);
  Verdict v;

  std::vector<int> sizes;
  if (family.structural()) {
    int hi;
    if (opts.mode == PmcpMode::cutoff) {
      auto c = cutoff_for(family, prof.k, prof.alternating);
      if (!c)
        throw std::invalid_argument(
            "solve_pmcp: no paper-backed cutoff for an alternating prefix; use sweep or decompose");
      hi = *c;
      v.bound = *c;
      v.method = (family.kind == Family::Kind::clique || family.kind == Family::Kind::star)
                     ? "cutoff k+1 (cliques/stars)"
                     : "cutoff 2k (rings/bi-rings)";
    } else {
      hi = std::max(opts.sweep_bound, family.min_size());
      v.bound = hi;
      v.method = "sweep";
    }
    for (int n = family.min_size(); n <= hi; ++n) sizes.push_back(n);
  } else {
    if (opts.mode == PmcpMode::cutoff)
      throw std::invalid_argument("solve_pmcp: cutoff mode needs a structural family");
    v.method = "sweep (explicit list)";
    for (const auto& t : family.topologies)
      if (t.vertex_count <= opts.sweep_bound) sizes.push_back(-1);  // placeholder
  }

  std::vector<SizeOutcome> outcomes;
  if (family.structural()) {
    if (opts.jobs > 1) {
      for (size_t i = 0; i < sizes.size();) {
        std::vector<std::future<SizeOutcome>> batch;
        for (int j = 0; j < opts.jobs && i < sizes.size(); ++j, ++i)
          batch.push_back(std::async(std::launch::async, check_size, std::cref(family), sizes[i],
                                     std::cref(tpl), std::cref(f), opts.fairness));
        for (auto& fut : batch) outcomes.push_back(fut.get());
      }
    } else {
      for (int n : sizes) outcomes.push_back(check_size(family, n, tpl, f, opts.fairness));
    }
  } else {
    for (const auto& t : family.topologies) {
      if (t.vertex_count > opts.sweep_bound) continue;
      IndexedCheckOptions io;
      outcomes.push_back({t.vertex_count, check_indexed(tpl, t, f, opts.fairness, io)});
    }
  }

  std::sort(outcomes.begin(), outcomes.end(),
            [](const SizeOutcome& a, const SizeOutcome& b) { return a.size < b.size; });
  for (const auto& o : outcomes) {
    v.per_size.emplace_back(o.size, o.result.holds);
    if (!o.result.holds && !v.failing_size) {
      v.failing_size = o.size;
      v.counterexample = o.result.counterexample;
    }
  }

  if (v.failing_size) {
    v.answer = Verdict::Answer::No;
  } else if (opts.mode == PmcpMode::cutoff) {
    v.answer = Verdict::Answer::Yes;
  } else {
    v.answer = Verdict::Answer::UnknownUpTo;
  }
  return v;
}

ContractionEnumeration enumerate_contractions(const Family& family, int k, int depth,
                                              int size_bound) {
  if (!family.structural())
    throw std::invalid_argument("enumerate_contractions: structural families only");
  if (size_bound < k)
    throw std::invalid_argument("enumerate_contractions: size_bound must be >= k");
  ContractionEnumeration out;
  out.k = k;
  out.depth = depth;

  for (int n = family.min_size(); n <= size_bound; ++n) {
    Topology g = family.member(n);
    std::set<std::string>& bucket = out.sets_by_size[n];
    std::vector<int> tuple;
    std::function<void()> rec = [&]() {
      if (static_cast<int>(tuple.size()) == k) {
        IndexTuple t{tuple};
        ContractionLts c = contract(g, t, depth);
        std::string serial = c.canonical_serial(false);
        bucket.insert(serial);
        auto it = out.smallest_realizer.find(serial);
        if (it == out.smallest_realizer.end())
          out.smallest_realizer.emplace(serial, ContractionEnumeration::Realizer{n, tuple});
        return;
      }
      for (int v = 1; v <= n; ++v) {
        if (std::find(tuple.begin(), tuple.end(), v) != tuple.end()) continue;
        tuple.push_back(v);
        rec();
        tuple.pop_back();
      }
    };
    rec();
  }

  const auto& final_set = out.sets_by_size.rbegin()->second;
  int n0 = size_bound;
  for (int n = size_bound; n >= family.min_size(); --n) {
    if (out.sets_by_size.at(n) == final_set) n0 = n;
    else break;
  }
  out.stabilized_at = n0;
  return out;
}

namespace {

// Monotone Boolean canonical form: antichain of minimal satisfying atom sets.
// AND/OR quantifier trees over positive atoms are monotone, so equality of
// antichains is logical equivalence of the B_G skeletons.
struct Implicants {
  std::vector<std::set<int>> sets;  // antichain, sorted

  static Implicants atom(int id) { return {{std::set<int>{id}}}; }
  static Implicants constant_true() { return {{std::set<int>{}}}; }
  static Implicants constant_false() { return {{}}; }

  void minimize() {
    std::sort(sets.begin(), sets.end(), [](const auto& a, const auto& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return a < b;
    });
    std::vector<std::set<int>> keep;
    for (const auto& s : sets) {
      bool subsumed = false;
      for (const auto& k : keep)
        if (std::includes(s.begin(), s.end(), k.begin(), k.end())) { subsumed = true; break; }
      if (!subsumed) keep.push_back(s);
    }
    std::sort(keep.begin(), keep.end());
    sets = std::move(keep);
  }

  std::string fingerprint() const {
    std::ostringstream os;
    for (const auto& s : sets) {
      os << "{";
      for (int x : s) os << x << ",";
      os << "}";
    }
    return os.str();
  }
};

constexpr size_t kImplicantCap = 20000;

Implicants implicants_or(const Implicants& a, const Implicants& b) {
  Implicants r;
  r.sets = a.sets;
  r.sets.insert(r.sets.end(), b.sets.begin(), b.sets.end());
  if (r.sets.size() > kImplicantCap) throw std::runtime_error("implicant budget exceeded");
  r.minimize();
  return r;
}

Implicants implicants_and(const Implicants& a, const Implicants& b) {
  Implicants r;
  for (const auto& x : a.sets)
    for (const auto& y : b.sets) {
      std::set<int> u = x;
      u.insert(y.begin(), y.end());
      r.sets.push_back(std::move(u));
      if (r.sets.size() > kImplicantCap) throw std::runtime_error("implicant budget exceeded");
    }
  r.minimize();
  return r;
}

}  // namespace

Decomposition decompose(const Family& family, int k, int depth, const ProcessTemplate& tpl,
                        const itl::Formula& f, int size_bound, FairnessSpec::Mode fairness) {
  auto prof = itl::profile(f);
  if (prof.k != k)
    throw std::invalid_argument("decompose: formula arity does not match k");
  if (prof.d > depth)
    throw std::invalid_argument("decompose: formula depth exceeds d");

  Decomposition dec;

  // leaf key -> verdict; leaves keyed by repeat pattern + contraction of the
  // deduplicated assignment (fair canonical form)
  std::map<std::string, bool> leaf_value;
  std::map<std::string, Decomposition::Representative> reps;
  std::map<std::string, int> atom_ids;

  struct SizeData {
    int n;
    Implicants b_function;
    bool value;
  };
  std::vector<SizeData> per_size;

  for (int n = family.min_size(); n <= size_bound; ++n) {
    Topology g = family.member(n);
    SystemLts sys = build_system(tpl, g);
    FairnessSpec fair = fairness == FairnessSpec::Mode::token_global
                            ? FairnessSpec::token_global(sys)
                            : FairnessSpec::none();
    itl::EvalPlan plan = instantiate(f, g);

    std::function<std::pair<Implicants, bool>(const itl::EvalPlan&)> walk =
        [&](const itl::EvalPlan& node) -> std::pair<Implicants, bool> {
      switch (node.kind) {
        case itl::EvalPlan::AndNode: {
          Implicants acc = Implicants::constant_true();
          bool val = true;
          for (const auto& c : node.children) {
            auto [ci, cv] = walk(c);
            acc = implicants_and(acc, ci);
            val = val && cv;
          }
          return {acc, val};
        }
        case itl::EvalPlan::OrNode: {
          Implicants acc = Implicants::constant_false();
          bool val = false;
          for (const auto& c : node.children) {
            auto [ci, cv] = walk(c);
            acc = implicants_or(acc, ci);
            val = val || cv;
          }
          return {acc, val};
        }
        case itl::EvalPlan::Leaf: {
          // dedup repeated vertices, contract the distinct core
          std::vector<int> distinct;
          std::string pattern;
          for (int v : node.assignment) {
            auto it = std::find(distinct.begin(), distinct.end(), v);
            int idx = it == distinct.end() ? static_cast<int>(distinct.size())
                                           : static_cast<int>(it - distinct.begin());
            if (it == distinct.end()) distinct.push_back(v);
            pattern += std::to_string(idx) + ".";
          }
          IndexTuple tuple{distinct};
          ContractionLts c = contract(g, tuple, depth);
          std::string key = pattern + "|" + c.canonical_serial(false);

          auto it = leaf_value.find(key);
          if (it == leaf_value.end()) {
            Lts proj = project(sys, node.assignment);
            bool v = check(proj, node.body, fair);
            it = leaf_value.emplace(key, v).first;
            int id = static_cast<int>(atom_ids.size());
            atom_ids.emplace(key, id);
            reps.emplace(key, Decomposition::Representative{key, n, node.assignment, v});
          }
          return {Implicants::atom(atom_ids.at(key)), it->second};
        }
      }
      return {Implicants::constant_false(), false};
    };

    auto [imp, value] = walk(plan);
    per_size.push_back({n, std::move(imp), value});
    dec.per_size.emplace_back(n, value);
  }

  for (auto& [key, rep] : reps) dec.representatives.push_back(rep);

  // stabilization: identical B-function fingerprints from n0 to the bound
  int n0 = size_bound;
  const std::string last_fp = per_size.back().b_function.fingerprint();
  for (int i = static_cast<int>(per_size.size()) - 1; i >= 0; --i) {
    if (per_size[i].b_function.fingerprint() == last_fp) n0 = per_size[i].n;
    else break;
  }
  bool genuine = size_bound - n0 >= 2;
  dec.stabilized_at = genuine ? std::optional<int>(n0) : std::nullopt;

  bool any_false = false;
  int first_false = 0;
  for (const auto& sd : per_size)
    if (!sd.value) { any_false = true; first_false = sd.n; break; }

  Verdict& v = dec.verdict;
  v.per_size = dec.per_size;
  if (any_false) {
    v.answer = Verdict::Answer::No;
    v.failing_size = first_false;
    v.method = "decomposition";
    // reuse the engine to produce a concrete lasso at the failing size
    IndexedCheckOptions io;
    auto r = check_indexed(tpl, family.member(first_false), f, fairness, io);
    v.counterexample = r.counterexample;
  } else if (genuine) {
    v.answer = Verdict::Answer::Yes;
    v.bound = n0;
    v.method = "decomposition (contraction sets and Boolean skeletons stabilize at " +
               std::to_string(n0) + ", empirical within bound " + std::to_string(size_bound) + ")";
  } else {
    v.answer = Verdict::Answer::UnknownUpTo;
    v.bound = size_bound;
    v.method = "decomposition (no stabilization within bound)";
  }
  return dec;
}

std::string pmcp_report_json(const Verdict& v, const Family& family, const std::string& mode,
                             int k, int d, const std::string& representatives_digest) {
  std::ostringstream os;
  os << "{\"mode\":\"" << mode << "\",\"family\":\"" << family.name() << "\",\"k\":" << k
     << ",\"d\":" << d << ",\"cutoff_or_bound\":" << v.bound << ",\"answer\":\"";
  switch (v.answer) {
    case Verdict::Answer::Yes: os << "Yes"; break;
    case Verdict::Answer::No: os << "No"; break;
    case Verdict::Answer::UnknownUpTo: os << "UnknownUpTo"; break;
  }
  os << "\",\"method\":\"" << v.method << "\",\"per_size_verdicts\":{";
  for (size_t i = 0; i < v.per_size.size(); ++i) {
    if (i) os << ",";
    os << "\"" << v.per_size[i].first << "\":" << (v.per_size[i].second ? "true" : "false");
  }
  os << "}";
  if (v.counterexample) os << ",\"counterexample\":" << v.counterexample->to_json();
  if (!representatives_digest.empty())
    os << ",\"representatives_digest\":\"" << representatives_digest << "\"";
  os << "}";
  return os.str();
}

}  // namespace tokmc
