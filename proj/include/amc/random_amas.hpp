#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "amc/amas.hpp"
#include "amc/logic.hpp"

// Deterministic generators for randomized property tests and benchmarks.
// Every model produced here passes validate() by construction: each local
// state has at least one available event, transition rows and repertoires
// agree, and owner sets are consistent across agents.

namespace amc {

struct RandomAmasParams {
  std::uint64_t seed = 1;
  int agents = 3;            // 1..8
  int states_per_agent = 3;  // 1..9
  int private_events = 2;    // per agent
  int shared_events = 1;     // each owned by >= 2 agents
  int props = 2;
  int explicit_percent = 0;  // chance a repertoire row groups events
};

[[nodiscard]] Amas random_amas(const RandomAmasParams& params);

// Random path formula over atoms 0..atoms-1 (as proposition ids) using
// negation, conjunction, disjunction, next and until; size bounded by depth.
[[nodiscard]] PathFormulaPtr random_path_formula(std::mt19937_64& rng, int atoms, int depth);

// Random formula in the reduction-friendly fragment: one strategic modality
// over the given coalition whose body avoids the next-step operator and
// nesting, built from the given propositions.
[[nodiscard]] StateFormulaPtr random_reducible_formula(std::mt19937_64& rng,
                                                       const std::vector<AgentId>& coalition,
                                                       const std::vector<PropId>& props);

}  // namespace amc
