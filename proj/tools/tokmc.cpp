#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "tokmc/cm_demo.hpp"
#include "tokmc/json_io.hpp"
#include "tokmc/marking.hpp"
#include "tokmc/model_checker.hpp"
#include "tokmc/pmcp.hpp"

using namespace tokmc;

namespace {

constexpr int kExitTrue = 0;
constexpr int kExitFalse = 1;
constexpr int kExitUsage = 2;
constexpr int kExitUnknown = 3;

Topology load_topology(const std::string& spec) {
  if (auto fam = parse_family_shorthand(spec)) return *fam;
  return topology_from_json(read_file(spec));
}

ProcessTemplate load_template(const std::string& spec) {
  for (const auto& name : builtin_template_names())
    if (name == spec) return builtin_template(name);
  return template_from_json(read_file(spec));
}

itl::Formula load_formula(const std::string& inline_text, const std::string& file) {
  if (!inline_text.empty() && !file.empty())
    throw std::invalid_argument("give either --formula or --formula-file, not both");
  if (!inline_text.empty()) return itl::parse_formula(inline_text);
  if (!file.empty()) return itl::parse_formula(read_file(file));
  throw std::invalid_argument("a formula is required (--formula or --formula-file)");
}

std::vector<int> parse_tuple(const std::string& text) {
  std::vector<int> out;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(std::stoi(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

void print_report(const ValidationReport& rep, const std::string& subject, bool json) {
  if (json) {
    std::cout << "{\"subject\":\"" << subject << "\",\"ok\":" << (rep.ok ? "true" : "false")
              << ",\"violations\":[";
    for (size_t i = 0; i < rep.violations.size(); ++i) {
      if (i) std::cout << ",";
      std::cout << "{\"rule\":\"" << rep.violations[i].rule << "\",\"description\":\""
                << rep.violations[i].description << "\"}";
    }
    std::cout << "]}\n";
    return;
  }
  if (rep.ok) {
    std::cout << subject << ": ok\n";
    return;
  }
  std::cout << subject << ": " << rep.violations.size() << " violation(s)\n";
  for (const auto& v : rep.violations) {
    std::cout << "  [" << v.rule << "] " << v.description;
    if (!v.witness.empty()) {
      std::cout << "  (witness:";
      for (const auto& w : v.witness) std::cout << " " << w;
      std::cout << ")";
    }
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tokmc - parameterized model checking for token-passing systems"};
  app.require_subcommand(1);

  // ---- validate
  auto* validate = app.add_subcommand("validate", "validate a template or topology file");
  std::string v_template, v_topology, v_mode = "strict";
  bool v_json = false;
  validate->add_option("--template", v_template, "builtin name or JSON file");
  validate->add_option("--topology", v_topology, "family shorthand (ring:6) or JSON file");
  validate->add_option("--mode", v_mode, "strict | strict-all | relaxed")
      ->check(CLI::IsMember({"strict", "strict-all", "relaxed"}));
  validate->add_flag("--json", v_json);

  // ---- build
  auto* build = app.add_subcommand("build", "build the composed system and print stats");
  std::string b_template, b_topology, b_dot;
  bool b_json = false;
  build->add_option("--template", b_template)->required();
  build->add_option("--topology", b_topology)->required();
  build->add_option("--dot", b_dot, "write the reachable system graph as DOT");
  build->add_flag("--json", b_json);

  // ---- contract
  auto* contract_cmd = app.add_subcommand("contract", "compute a d-contraction");
  std::string c_topology, c_tuple, c_dot;
  int c_d = 1;
  bool c_json = false;
  contract_cmd->add_option("--topology", c_topology)->required();
  contract_cmd->add_option("--tuple", c_tuple, "comma-separated vertices, e.g. 1,5")->required();
  contract_cmd->add_option("--d", c_d, "nesting depth")->required();
  contract_cmd->add_option("--dot", c_dot);
  contract_cmd->add_flag("--json", c_json);

  // ---- equiv
  auto* equiv = app.add_subcommand("equiv", "compare two topology/tuple pairs at depth d");
  std::string e_top1, e_tup1, e_top2, e_tup2;
  int e_d = 1;
  equiv->add_option("--topology", e_top1)->required();
  equiv->add_option("--tuple", e_tup1)->required();
  equiv->add_option("--topology2", e_top2)->required();
  equiv->add_option("--tuple2", e_tup2)->required();
  equiv->add_option("--d", e_d)->required();

  // ---- check
  auto* check_cmd = app.add_subcommand("check", "model-check an indexed formula on one instance");
  std::string k_template, k_topology, k_formula, k_formula_file, k_fair = "token";
  bool k_json = false;
  check_cmd->add_option("--template", k_template)->required();
  check_cmd->add_option("--topology", k_topology)->required();
  check_cmd->add_option("--formula", k_formula);
  check_cmd->add_option("--formula-file", k_formula_file);
  check_cmd->add_option("--fair", k_fair, "token | none")->check(CLI::IsMember({"token", "none"}));
  check_cmd->add_flag("--json", k_json);

  // ---- pmcp
  auto* pmcp = app.add_subcommand("pmcp", "parameterized verdict over a family");
  std::string p_family, p_template, p_formula, p_formula_file, p_mode = "cutoff", p_fair = "token";
  int p_bound = 6, p_jobs = 1, p_depth = -1;
  bool p_json = false;
  pmcp->add_option("--family", p_family, "ring | biring | clique | star")->required();
  pmcp->add_option("--template", p_template)->required();
  pmcp->add_option("--formula", p_formula);
  pmcp->add_option("--formula-file", p_formula_file);
  pmcp->add_option("--mode", p_mode, "cutoff | sweep | decompose")
      ->check(CLI::IsMember({"cutoff", "sweep", "decompose"}));
  pmcp->add_option("--bound", p_bound, "sweep / decomposition size bound");
  pmcp->add_option("--d", p_depth, "decomposition depth (defaults to the formula's)");
  pmcp->add_option("--jobs", p_jobs, "parallel per-size checks");
  pmcp->add_option("--fair", p_fair)->check(CLI::IsMember({"token", "none"}));
  pmcp->add_flag("--json", p_json);

  // ---- gen-formula
  auto* gen = app.add_subcommand("gen-formula", "print a named formula");
  std::string g_kind;
  int g_k = 2;
  gen->add_option("kind", g_kind, "phi-k | adj")->required();
  gen->add_option("--k", g_k, "arity for phi-k");

  // ---- demo-cm
  auto* demo = app.add_subcommand("demo-cm", "2-counter-machine bi-ring simulation");
  std::string d_program, d_builtin;
  int d_n = 3;
  bool d_json = false;
  demo->add_option("--program", d_program, "counter machine JSON file");
  demo->add_option("--builtin", d_builtin, "one of the bundled machines");
  demo->add_option("--n", d_n, "ring size (2..6)");
  demo->add_flag("--json", d_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*validate) {
      if (v_template.empty() == v_topology.empty())
        throw std::invalid_argument("validate needs exactly one of --template / --topology");
      bool ok;
      if (!v_template.empty()) {
        ValidationMode mode = v_mode == "strict"       ? ValidationMode::strict
                              : v_mode == "strict-all" ? ValidationMode::strict_all_states
                                                       : ValidationMode::relaxed;
        auto rep = validate_template(load_template(v_template), mode);
        print_report(rep, "template", v_json);
        ok = rep.ok;
      } else {
        auto rep = validate_topology(load_topology(v_topology));
        print_report(rep, "topology", v_json);
        ok = rep.ok;
      }
      return ok ? kExitTrue : kExitFalse;
    }

    if (*build) {
      auto sys = build_system(load_template(b_template), load_topology(b_topology));
      int tok = 0;
      for (int s = 0; s < sys.lts.num_states; ++s)
        for (const auto& e : sys.lts.succ[s])
          if (sys.lts.actions[e.action] == "tok") ++tok;
      if (b_json) {
        std::cout << "{\"states\":" << sys.lts.num_states
                  << ",\"transitions\":" << sys.lts.num_transitions() << ",\"tok\":" << tok
                  << ",\"internal\":" << sys.lts.num_transitions() - tok << "}\n";
      } else {
        std::cout << "states: " << sys.lts.num_states << "\n"
                  << "transitions: " << sys.lts.num_transitions() << " (" << tok << " tok, "
                  << sys.lts.num_transitions() - tok << " internal)\n";
      }
      if (!b_dot.empty()) write_file(b_dot, system_to_dot(sys));
      return kExitTrue;
    }

    if (*contract_cmd) {
      Topology g = load_topology(c_topology);
      IndexTuple tuple{parse_tuple(c_tuple)};
      ContractionLts c = contract(g, tuple, c_d);
      if (c_json) {
        std::cout << "{\"classes\":" << c.num_classes()
                  << ",\"markings\":" << marking_serial_json(g, tuple, c_d) << "}\n";
      } else {
        std::cout << "classes: " << c.num_classes() << "\n";
        for (int i = 0; i < c.num_classes(); ++i) {
          std::cout << "  class " << i << (i == c.initial_class ? " (initial)" : "") << " label "
                    << c.class_labels[i] << " members {";
          for (size_t j = 0; j < c.members[i].size(); ++j)
            std::cout << (j ? "," : "") << c.members[i][j];
          std::cout << "}" << (c.has_self_loop(i) ? " +self-loop" : "") << "\n";
        }
      }
      if (!c_dot.empty()) write_file(c_dot, contraction_to_dot(c));
      return kExitTrue;
    }

    if (*equiv) {
      bool eq = equivalent_graphs(load_topology(e_top1), IndexTuple{parse_tuple(e_tup1)},
                                  load_topology(e_top2), IndexTuple{parse_tuple(e_tup2)}, e_d);
      std::cout << (eq ? "equivalent" : "not equivalent") << "\n";
      return eq ? kExitTrue : kExitFalse;
    }

    if (*check_cmd) {
      auto f = load_formula(k_formula, k_formula_file);
      auto mode = k_fair == "token" ? FairnessSpec::Mode::token_global : FairnessSpec::Mode::none;
      auto r = check_indexed(load_template(k_template), load_topology(k_topology), f, mode);
      if (k_json) {
        std::cout << "{\"holds\":" << (r.holds ? "true" : "false")
                  << ",\"leaf_checks\":" << r.leaf_checks << ",\"memo_hits\":" << r.memo_hits;
        if (r.counterexample) std::cout << ",\"counterexample\":" << r.counterexample->to_json();
        std::cout << "}\n";
      } else {
        std::cout << "RESULT: " << (r.holds ? "true" : "false") << "\n";
        if (r.counterexample) {
          std::cout << "counterexample (assignment";
          for (int v : r.counterexample->assignment) std::cout << " " << v;
          std::cout << "):\n  stem:";
          for (const auto& s : r.counterexample->stem) std::cout << " " << s;
          std::cout << "\n  cycle:";
          for (const auto& s : r.counterexample->cycle) std::cout << " " << s;
          std::cout << "\n";
        }
      }
      return r.holds ? kExitTrue : kExitFalse;
    }

    if (*pmcp) {
      auto fam = Family::parse(p_family);
      if (!fam) throw std::invalid_argument("unknown family: " + p_family);
      auto f = load_formula(p_formula, p_formula_file);
      auto fair = p_fair == "token" ? FairnessSpec::Mode::token_global : FairnessSpec::Mode::none;
      auto prof = itl::profile(f);
      Verdict v;
      std::string digest;
      if (p_mode == "decompose") {
        int d = p_depth > 0 ? p_depth : std::max(prof.d, 1);
        Decomposition dec = decompose(*fam, prof.k, d, load_template(p_template), f, p_bound, fair);
        v = dec.verdict;
        std::hash<std::string> h;
        std::string all;
        for (const auto& r : dec.representatives) all += r.serial + ";";
        std::ostringstream os;
        os << std::hex << h(all);
        digest = os.str();
        if (!p_json)
          std::cout << "representatives: " << dec.representatives.size() << "  stabilized_at: "
                    << (dec.stabilized_at ? std::to_string(*dec.stabilized_at) : "none") << "\n";
      } else {
        PmcpOptions opts;
        opts.mode = p_mode == "cutoff" ? PmcpMode::cutoff : PmcpMode::sweep;
        opts.sweep_bound = p_bound;
        opts.fairness = fair;
        opts.jobs = p_jobs;
        v = solve_pmcp(*fam, load_template(p_template), f, opts);
      }
      if (p_json) {
        std::cout << pmcp_report_json(v, *fam, p_mode, prof.k, prof.d, digest) << "\n";
      } else {
        std::cout << "ANSWER: ";
        switch (v.answer) {
          case Verdict::Answer::Yes: std::cout << "Yes (" << v.method << ")"; break;
          case Verdict::Answer::No:
            std::cout << "No (smallest failing size " << *v.failing_size << ")";
            break;
          case Verdict::Answer::UnknownUpTo:
            std::cout << "Unknown up to " << v.bound << " (" << v.method << ")";
            break;
        }
        std::cout << "\n";
        for (auto [n, ok] : v.per_size)
          std::cout << "  size " << n << ": " << (ok ? "holds" : "fails") << "\n";
      }
      switch (v.answer) {
        case Verdict::Answer::Yes: return kExitTrue;
        case Verdict::Answer::No: return kExitFalse;
        case Verdict::Answer::UnknownUpTo: return kExitUnknown;
      }
    }

    if (*gen) {
      if (g_kind == "phi-k") {
        std::cout << itl::print_formula(itl::gen_phi_k(g_k)) << "\n";
      } else if (g_kind == "adj") {
        std::cout << itl::print_formula(itl::gen_adj_formula()) << "\n";
      } else {
        throw std::invalid_argument("gen-formula: unknown kind '" + g_kind + "'");
      }
      return kExitTrue;
    }

    if (*demo) {
      if (d_program.empty() == d_builtin.empty())
        throw std::invalid_argument("demo-cm needs exactly one of --program / --builtin");
      CounterMachine cm =
          d_program.empty() ? builtin_cm(d_builtin) : cm_from_json(read_file(d_program));
      SimBundle bundle = cm_to_biring(cm, d_n);
      itl::Formula f = itl::parse_formula("forall i . A G !HALT@i");
      auto r = check_indexed(bundle.tpl, bundle.topo, f, FairnessSpec::Mode::none);
      auto ref = cm_reference_run(cm, d_n - 1, 2000);
      if (d_json) {
        std::cout << "{\"never_halts\":" << (r.holds ? "true" : "false")
                  << ",\"reference_halts\":" << (ref.halted ? "true" : "false");
        if (r.counterexample) std::cout << ",\"witness\":" << r.counterexample->to_json();
        std::cout << "}\n";
      } else {
        std::cout << "machine " << cm.name << " on biring(" << d_n << "): "
                  << (r.holds ? "never reaches HALT" : "reaches HALT") << "\n"
                  << "reference run (bound " << d_n - 1 << "): "
                  << (ref.halted ? "halts" : "does not halt") << "\n";
        if (r.counterexample) {
          std::cout << "witness lasso:\n  stem:";
          for (const auto& s : r.counterexample->stem) std::cout << " " << s;
          std::cout << "\n  cycle:";
          for (const auto& s : r.counterexample->cycle) std::cout << " " << s;
          std::cout << "\n";
        }
      }
      return r.holds ? kExitTrue : kExitFalse;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
