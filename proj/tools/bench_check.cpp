// Benchmark: times the serial reference path (--jobs 1) against the
// OpenMP-parallel strategy loop (--jobs 0 = all cores) on the same inputs and
// cross-checks that both produce identical results.  Also reports partial
// order reduction ratios on the scalable chains family.

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "amc/bundled.hpp"
#include "amc/json_io.hpp"
#include "amc/mc.hpp"
#include "amc/por.hpp"
#include "amc/random_amas.hpp"

using namespace amc;
using Clock = std::chrono::steady_clock;

namespace {

double time_ms(const std::function<void()>& fn) {
  auto t0 = Clock::now();
  fn();
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

struct Row {
  std::string name;
  std::uint64_t strategies = 0;
  double serial_ms = 0, parallel_ms = 0;
  bool equal = false;
  bool value = false;
};

Row bench_check_case(const std::string& name, const Amas& sys, const Model& model,
                     const StateFormulaPtr& f, Semantics sem, int repeats) {
  Row row;
  row.name = name;
  Verdict serial, parallel;
  CheckOptions one{1}, all{0};
  row.serial_ms = time_ms([&] {
                    for (int r = 0; r < repeats; ++r) serial = check(model, 0, f, sem, one);
                  }) /
                  repeats;
  row.parallel_ms = time_ms([&] {
                      for (int r = 0; r < repeats; ++r) parallel = check(model, 0, f, sem, all);
                    }) /
                    repeats;
  row.strategies = serial.strategy_count;
  row.value = serial.value;
  row.equal = dump_json(verdict_to_json(serial, model)) ==
              dump_json(verdict_to_json(parallel, model));
  (void)sys;
  return row;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"serial vs parallel benchmark for the strategy checker"};
  std::uint64_t seed = 9001;
  int repeats = 3;
  int chain_agents = 5, chain_len = 4;
  app.add_option("--seed", seed, "seed for the generated instances");
  app.add_option("--repeats", repeats, "timing repetitions per case");
  app.add_option("--chain-agents", chain_agents, "chains family width");
  app.add_option("--chain-length", chain_len, "chains family depth");
  CLI11_PARSE(app, argc, argv);

  std::vector<Row> rows;

  {
    auto sys = std::make_unique<Amas>(bundled_amas("conference"));
    Model m = build_iis(*sys);
    auto f = parse_formula("<<gc,oc>> F closed", *sys);
    rows.push_back(bench_check_case("conference F closed (cf)", *sys, m, f,
                                    Semantics{OutcomeMode::Plain, FairnessKind::CF}, repeats));
  }
  for (int round = 0; round < 3; ++round) {
    RandomAmasParams p;
    p.seed = seed + round;
    p.agents = 4;
    p.states_per_agent = 3;
    p.private_events = 2;
    p.shared_events = 2;
    p.props = 2;
    p.explicit_percent = 70;
    auto sys = std::make_unique<Amas>(random_amas(p));
    Model m = build_undeadlocked_iis(*sys);
    std::vector<AgentId> coalition{0, 1};
    std::mt19937_64 rng(p.seed * 17 + 3);
    std::vector<PropId> props;
    for (PropId q = 0; q < static_cast<PropId>(sys->prop_names.size()); ++q) props.push_back(q);
    auto f = state_coalition(coalition, path_always(path_or(path_prop(0), path_not(path_prop(1)))));
    (void)rng;
    rows.push_back(bench_check_case("random-" + std::to_string(round) + " G (r0 | !r1) (scf)",
                                    *sys, m, f,
                                    Semantics{OutcomeMode::Plain, FairnessKind::SCF}, repeats));
  }

  std::printf("%-34s %10s %12s %12s %8s %6s %6s\n", "case", "strategies", "serial ms",
              "parallel ms", "speedup", "equal", "value");
  bool all_equal = true;
  for (const Row& r : rows) {
    std::printf("%-34s %10llu %12.2f %12.2f %8.2f %6s %6s\n", r.name.c_str(),
                static_cast<unsigned long long>(r.strategies), r.serial_ms, r.parallel_ms,
                r.parallel_ms > 0 ? r.serial_ms / r.parallel_ms : 0.0,
                r.equal ? "yes" : "NO", r.value ? "true" : "false");
    all_equal = all_equal && r.equal;
  }

  {
    auto sys = std::make_unique<Amas>(make_chains(chain_agents, chain_len));
    Model m;
    double compose_ms = time_ms([&] { m = build_undeadlocked_iis(*sys); });
    ReductionConfig cfg;
    ReducedModel red;
    double reduce_ms = time_ms([&] { red = reduce(m, cfg); });
    std::printf("\nchains %dx%d: %d states composed in %.2f ms, reduced to %d in %.2f ms\n",
                chain_agents, chain_len, m.state_count(), compose_ms,
                red.model.state_count(), reduce_ms);
  }

  if (!all_equal) {
    std::fprintf(stderr, "serial and parallel results DIFFER\n");
    return 1;
  }
  return 0;
}
