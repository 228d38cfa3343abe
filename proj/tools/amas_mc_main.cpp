// amas-mc: command line model checker for strategic ability over
// asynchronous multi-agent systems.  JSON results go to stdout, human
// summaries and timings to stderr.  Exit codes: 0 = success / property holds,
// 1 = property or verification failed, 2 = usage or input error.

#include <CLI11.hpp>
#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "amc/bundled.hpp"
#include "amc/json_io.hpp"
#include "amc/mc.hpp"
#include "amc/model.hpp"
#include "amc/parser.hpp"
#include "amc/por.hpp"
#include "amc/random_amas.hpp"
#include "amc/strategy.hpp"

namespace {

using namespace amc;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Amas load_amas(const std::string& path) {
  if (path.rfind("bundled:", 0) == 0) return bundled_amas(path.substr(8));
  return parse_amas(read_file(path));
}

std::vector<std::string> split_names(const std::string& csv) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : csv) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::vector<AgentId> parse_coalition(const Amas& a, const std::string& csv) {
  std::vector<AgentId> out;
  for (const auto& name : split_names(csv)) {
    auto id = a.agent_by_name(name);
    if (!id) throw std::runtime_error("unknown agent: " + name);
    out.push_back(*id);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<PropId> parse_props(const Amas& a, const std::string& csv) {
  std::vector<PropId> out;
  for (const auto& name : split_names(csv)) {
    auto id = a.prop_by_name(name);
    if (!id) throw std::runtime_error("unknown proposition: " + name);
    out.push_back(*id);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct Loaded {
  std::unique_ptr<Amas> amas;  // stable address: the model points into it
  Model model;
};

Loaded build_model(const std::string& path, const std::string& kind) {
  Loaded out;
  out.amas = std::make_unique<Amas>(load_amas(path));
  if (kind == "iis") {
    out.model = build_iis(*out.amas);
  } else if (kind == "undeadlocked") {
    out.model = build_undeadlocked_iis(*out.amas);
  } else if (kind == "eps-amas") {
    *out.amas = add_epsilon_agent(*out.amas);
    out.model = build_iis(*out.amas);
  } else {
    throw std::runtime_error("unknown model kind: " + kind);
  }
  return out;
}

Semantics parse_semantics(const std::string& sem, const std::string& fair) {
  Semantics s;
  s.base = sem == "el" ? OutcomeMode::Reactive : OutcomeMode::Plain;
  s.fairness = fair == "cf" ? FairnessKind::CF
                            : (fair == "scf" ? FairnessKind::SCF : FairnessKind::None);
  return s;
}

StateId resolve_state(const Model& m, const std::string& name) {
  if (name.empty()) return m.initial;
  auto id = m.state_by_name(name);
  if (!id) throw std::runtime_error("unknown global state: " + name);
  return *id;
}

void emit(const Json& j) { std::cout << dump_json(j) << std::flush; }

struct SelftestCase {
  std::string name;
  bool ok = false;
};

std::vector<SelftestCase> run_selftest(std::uint64_t seed, int jobs) {
  std::vector<SelftestCase> cases;
  CheckOptions opts;
  opts.jobs = jobs;

  auto expect = [&](const std::string& name, bool got, bool want) {
    cases.push_back(SelftestCase{name, got == want});
  };

  {
    auto sys = std::make_unique<Amas>(bundled_amas("conference"));
    Model iis = build_iis(*sys);
    Model und = build_undeadlocked_iis(*sys);
    auto f_gnepid = parse_formula("<<gc,oc>> G !epid", *sys);
    auto f_fclosed = parse_formula("<<gc,oc>> F closed", *sys);
    auto f_gnopen = parse_formula("<<gc,oc>> G !open", *sys);
    auto f_fepid = parse_formula("<<gc,sc>> F epid", *sys);
    auto f_ocnepid = parse_formula("<<oc>> G !epid", *sys);
    Semantics plain{OutcomeMode::Plain, FairnessKind::None};
    Semantics cf{OutcomeMode::Plain, FairnessKind::CF};
    Semantics el{OutcomeMode::Reactive, FairnessKind::None};
    expect("conference-avoid-epid-plain", check(iis, 0, f_gnepid, plain, opts).value, true);
    expect("conference-avoid-epid-cf", check(iis, 0, f_gnepid, cf, opts).value, true);
    expect("conference-reach-closed-plain", check(iis, 0, f_fclosed, plain, opts).value, false);
    expect("conference-reach-closed-cf", check(iis, 0, f_fclosed, cf, opts).value, true);
    expect("conference-avoid-open-iis", check(iis, 0, f_gnopen, plain, opts).value, true);
    expect("conference-avoid-open-undeadlocked", check(und, 0, f_gnopen, plain, opts).value,
           false);
    expect("conference-reach-epid-reactive", check(und, 0, f_fepid, el, opts).value, true);
    expect("conference-oc-avoid-epid-reactive", check(und, 0, f_ocnepid, el, opts).value, true);
    expect("conference-states", iis.state_count() == 7, true);
    StrategySpace s1 = enumerate_strategies(*sys, parse_coalition(*sys, "gc"));
    StrategySpace s2 = enumerate_strategies(*sys, parse_coalition(*sys, "gc,oc"));
    expect("conference-strategy-counts", s1.count == 2 && s2.count == 4, true);
  }
  {
    auto sys = std::make_unique<Amas>(bundled_amas("voting"));
    Model iis = build_iis(*sys);
    Model und = build_undeadlocked_iis(*sys);
    auto f_live = parse_formula("!<<v,ebm>> F true", *sys);
    auto f_votea = parse_formula("<<v>> F voted_a", *sys);
    Semantics plain{OutcomeMode::Plain, FairnessKind::None};
    expect("voting-no-infinite-outcome-iis", check(iis, 0, f_live, plain, opts).value, true);
    expect("voting-infinite-outcome-undeadlocked", check(und, 0, f_live, plain, opts).value,
           false);
    expect("voting-cannot-force-a", check(und, 0, f_votea, plain, opts).value, false);
  }
  {
    auto sys = std::make_unique<Amas>(bundled_amas("voting-explicit"));
    Model und = build_undeadlocked_iis(*sys);
    auto f_both = parse_formula("<<v,ebm>> F voted_a", *sys);
    auto f_ebm = parse_formula("<<ebm>> F voted_a", *sys);
    Semantics el{OutcomeMode::Reactive, FairnessKind::None};
    bool no_loops = true;
    for (StateId g = 0; g < und.state_count(); ++g) no_loops = no_loops && !und.epsilon_loop[g];
    expect("voting-explicit-never-blocks", no_loops, true);
    expect("voting-explicit-force-a", check(und, 0, f_both, el, opts).value, true);
    expect("voting-explicit-machine-alone", check(und, 0, f_ebm, el, opts).value, false);
  }
  {
    auto sys = std::make_unique<Amas>(make_chains(3, 3));
    Model und = build_undeadlocked_iis(*sys);
    ReductionConfig cfg;
    ReducedModel red = reduce(und, cfg);
    expect("chains-full-64", und.state_count() == 64, true);
    expect("chains-reduced-10", red.model.state_count() == 10, true);
  }
  for (int round = 0; round < 2; ++round) {
    RandomAmasParams params;
    params.seed = seed + round;
    params.agents = 3;
    params.states_per_agent = 2;
    params.private_events = 1;
    params.shared_events = 1;
    params.props = 2;
    params.explicit_percent = round == 0 ? 0 : 50;
    auto sys = std::make_unique<Amas>(random_amas(params));
    ReductionConfig cfg;
    cfg.props = {0};
    std::mt19937_64 rng(params.seed * 31 + 7);
    std::vector<StateFormulaPtr> formulas{
        random_reducible_formula(rng, cfg.coalition, cfg.props)};
    ReductionReport rep = verify_reduction(*sys, cfg, formulas, 6, opts);
    cases.push_back(SelftestCase{"random-reduction-" + std::to_string(round), rep.ok});
  }
  return cases;
}

}  // namespace

int main(int argc, char** argv) {
  std::ios::sync_with_stdio(false);

  CLI::App app{"model checker for strategic ability over asynchronous multi-agent systems"};
  app.require_subcommand(1);

  std::string file, model_kind = "undeadlocked", semantics = "plain", fairness = "none";
  std::string state_name, formula_text, formula_file, coalition_csv, props_csv;
  std::string c1_mode = "exact";
  std::vector<std::string> formula_list;
  std::uint64_t strategy_index = 0;
  std::uint64_t limit = 0;
  int jobs = 1, stutter_bound = 8;
  std::uint64_t seed = 1;
  if (const char* env = std::getenv("AMAS_MC_SEED")) seed = std::strtoull(env, nullptr, 10);

  auto add_file = [&](CLI::App* sub) {
    sub->add_option("file", file, "input system (.amas path or bundled:<name>)")->required();
  };
  auto add_model = [&](CLI::App* sub) {
    sub->add_option("--model", model_kind, "state space to build")
        ->check(CLI::IsMember({"iis", "undeadlocked", "eps-amas"}));
  };
  auto add_semantics = [&](CLI::App* sub) {
    sub->add_option("--semantics", semantics, "outcome semantics")
        ->check(CLI::IsMember({"plain", "el"}));
    sub->add_option("--fairness", fairness, "fairness filter")
        ->check(CLI::IsMember({"none", "cf", "scf"}));
  };

  CLI::App* compose = app.add_subcommand("compose", "build the composed state space");
  add_file(compose);
  add_model(compose);

  CLI::App* undeadlock =
      app.add_subcommand("undeadlock", "build the composition with silent stalling loops");
  add_file(undeadlock);

  CLI::App* enumerate =
      app.add_subcommand("enumerate-strategies", "list the coalition's memoryless strategies");
  add_file(enumerate);
  enumerate->add_option("--coalition", coalition_csv, "comma separated agent names");
  enumerate->add_option("--limit", limit, "print at most this many (0 = all)");

  CLI::App* outcome = app.add_subcommand("outcome", "outcome graph of one strategy");
  add_file(outcome);
  add_model(outcome);
  add_semantics(outcome);
  outcome->add_option("--coalition", coalition_csv, "comma separated agent names");
  outcome->add_option("--index", strategy_index, "strategy index in enumeration order");
  outcome->add_option("--state", state_name, "start state (default: initial)");

  CLI::App* check_cmd = app.add_subcommand("check", "decide a strategic formula");
  add_file(check_cmd);
  add_model(check_cmd);
  add_semantics(check_cmd);
  check_cmd->add_option("--formula", formula_text, "formula text");
  check_cmd->add_option("--formula-file", formula_file, "file containing the formula");
  check_cmd->add_option("--state", state_name, "state to check (default: initial)");
  check_cmd->add_option("--jobs", jobs, "worker threads (1 = serial reference, 0 = all cores)");

  CLI::App* reduce_cmd = app.add_subcommand("reduce", "partial order reduction of the model");
  add_file(reduce_cmd);
  add_model(reduce_cmd);
  reduce_cmd->add_option("--coalition", coalition_csv, "observing coalition");
  reduce_cmd->add_option("--props", props_csv, "observed propositions");
  reduce_cmd->add_option("--c1-mode", c1_mode, "dependency check used during construction")
      ->check(CLI::IsMember({"exact", "syntactic"}));

  CLI::App* verify = app.add_subcommand(
      "verify-reduction", "reduce and independently verify every correctness condition");
  add_file(verify);
  verify->add_option("--coalition", coalition_csv, "observing coalition");
  verify->add_option("--props", props_csv, "observed propositions");
  verify->add_option("--c1-mode", c1_mode, "dependency check used during construction")
      ->check(CLI::IsMember({"exact", "syntactic"}));
  verify->add_option("--formula", formula_list, "formula to compare on both models (repeatable)");
  verify->add_option("--stutter-bound", stutter_bound, "lasso length bound for path evidence");
  verify->add_option("--jobs", jobs, "worker threads");

  CLI::App* selftest = app.add_subcommand("selftest", "run the built-in scenario battery");
  selftest->add_option("--seed", seed, "seed for the randomized rounds (env AMAS_MC_SEED)");
  selftest->add_option("--jobs", jobs, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  auto t0 = Clock::now();
  try {
    if (app.got_subcommand(compose)) {
      Loaded l = build_model(file, model_kind);
      emit(model_to_json(l.model));
      std::cerr << "composed " << l.model.state_count() << " states ("
                << std::fixed << std::setprecision(1) << ms_since(t0) << " ms)\n";
    } else if (app.got_subcommand(undeadlock)) {
      Loaded l = build_model(file, "undeadlocked");
      int loops = 0;
      for (StateId g = 0; g < l.model.state_count(); ++g) loops += l.model.epsilon_loop[g];
      emit(model_to_json(l.model));
      std::cerr << "composed " << l.model.state_count() << " states, " << loops
                << " silent loops (" << std::fixed << std::setprecision(1) << ms_since(t0)
                << " ms)\n";
    } else if (app.got_subcommand(enumerate)) {
      auto sys = std::make_unique<Amas>(load_amas(file));
      StrategySpace space = enumerate_strategies(*sys, parse_coalition(*sys, coalition_csv));
      Json names = Json::array();
      for (AgentId a : space.coalition) names.push_back(sys->agents[a].name);
      std::uint64_t shown = limit == 0 ? space.count : std::min(limit, space.count);
      Json arr = Json::array();
      for (std::uint64_t i = 0; i < shown; ++i)
        arr.push_back(strategy_to_json(space.at(i), *sys));
      emit(Json{{"coalition", names}, {"count", space.count}, {"strategies", arr}});
      std::cerr << space.count << " strategies (" << std::fixed << std::setprecision(1)
                << ms_since(t0) << " ms)\n";
    } else if (app.got_subcommand(outcome)) {
      Loaded l = build_model(file, model_kind);
      StrategySpace space = enumerate_strategies(*l.amas, parse_coalition(*l.amas, coalition_csv));
      if (strategy_index >= space.count)
        throw std::runtime_error("strategy index out of range (count = " +
                                 std::to_string(space.count) + ")");
      Semantics sem = parse_semantics(semantics, fairness);
      OutcomeGraph g = restrict_model(l.model, space.at(strategy_index), sem.base);
      StateId from = resolve_state(l.model, state_name);
      Json j = outcome_to_json(g, from);
      j["nonempty"] = outcome_nonempty(g, from);
      emit(j);
      std::cerr << "outcome of strategy " << strategy_index << " (" << std::fixed
                << std::setprecision(1) << ms_since(t0) << " ms)\n";
    } else if (app.got_subcommand(check_cmd)) {
      if (formula_text.empty() == formula_file.empty())
        throw std::runtime_error("provide exactly one of --formula / --formula-file");
      Loaded l = build_model(file, model_kind);
      std::string text = formula_text.empty() ? read_file(formula_file) : formula_text;
      StateFormulaPtr f = parse_formula(text, *l.amas);
      Semantics sem = parse_semantics(semantics, fairness);
      CheckOptions opts;
      opts.jobs = jobs;
      StateId from = resolve_state(l.model, state_name);
      Verdict v = check(l.model, from, f, sem, opts);
      Json j = verdict_to_json(v, l.model);
      j["formula"] = to_string(f, *l.amas);
      j["state"] = l.model.state_names[from];
      emit(j);
      std::cerr << (v.value ? "holds" : "fails") << " at " << l.model.state_names[from] << " ("
                << std::fixed << std::setprecision(1) << ms_since(t0) << " ms)\n";
      return v.value ? 0 : 1;
    } else if (app.got_subcommand(reduce_cmd)) {
      Loaded l = build_model(file, model_kind);
      ReductionConfig cfg;
      cfg.coalition = parse_coalition(*l.amas, coalition_csv);
      cfg.props = parse_props(*l.amas, props_csv);
      cfg.c1_mode = c1_mode == "syntactic" ? ReductionConfig::C1Mode::Syntactic
                                           : ReductionConfig::C1Mode::Exact;
      ReducedModel red = reduce(l.model, cfg);
      emit(reduced_model_to_json(red));
      std::cerr << red.stats.full_states << " -> " << red.stats.reduced_states << " states ("
                << std::fixed << std::setprecision(1) << ms_since(t0) << " ms)\n";
    } else if (app.got_subcommand(verify)) {
      auto sys = std::make_unique<Amas>(load_amas(file));
      ReductionConfig cfg;
      cfg.coalition = parse_coalition(*sys, coalition_csv);
      cfg.props = parse_props(*sys, props_csv);
      cfg.c1_mode = c1_mode == "syntactic" ? ReductionConfig::C1Mode::Syntactic
                                           : ReductionConfig::C1Mode::Exact;
      std::vector<StateFormulaPtr> formulas;
      for (const auto& text : formula_list) formulas.push_back(parse_formula(text, *sys));
      if (formulas.empty()) {
        for (PropId p : cfg.props) {
          formulas.push_back(state_coalition(cfg.coalition, path_eventually(path_prop(p))));
          formulas.push_back(
              state_coalition(cfg.coalition, path_always(path_not(path_prop(p)))));
        }
        if (formulas.empty())
          formulas.push_back(state_coalition(cfg.coalition, path_eventually(path_true())));
      }
      CheckOptions opts;
      opts.jobs = jobs;
      ReductionReport rep = verify_reduction(*sys, cfg, formulas, stutter_bound, opts);
      emit(reduction_report_to_json(rep));
      std::cerr << (rep.ok ? "reduction verified" : "reduction check FAILED") << " ("
                << std::fixed << std::setprecision(1) << ms_since(t0) << " ms)\n";
      return rep.ok ? 0 : 1;
    } else if (app.got_subcommand(selftest)) {
      std::vector<SelftestCase> cases = run_selftest(seed, jobs);
      bool ok = true;
      Json arr = Json::array();
      for (const auto& c : cases) {
        ok = ok && c.ok;
        arr.push_back(Json{{"name", c.name}, {"ok", c.ok}});
      }
      emit(Json{{"cases", arr}, {"ok", ok}, {"seed", seed}});
      std::cerr << (ok ? "selftest passed" : "selftest FAILED") << " (" << std::fixed
                << std::setprecision(1) << ms_since(t0) << " ms)\n";
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
