#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "amc/gba.hpp"
#include "amc/logic.hpp"
#include "amc/model.hpp"
#include "amc/strategy.hpp"

// Model checking of strategic ability.  A coalition formula <<A>> g holds at
// a state iff some joint strategy of A has a nonempty filtered outcome from
// that state and every filtered outcome path satisfies g.  Filtering is the
// combination of the base mode (plain, or reactive which suppresses the
// silent loop whenever the strategy enables a real event) and the fairness
// kind (none, concurrency-fairness, strategic concurrency-fairness).

namespace amc {

struct Semantics {
  OutcomeMode base = OutcomeMode::Plain;
  FairnessKind fairness = FairnessKind::None;
};

struct CheckOptions {
  // 1 = serial reference path; 0 = one thread per core; n > 1 = that many
  // OpenMP threads.  Results are identical across all settings.
  int jobs = 1;
};

struct StrategyWitness {
  std::uint64_t index = 0;  // position in the fixed enumeration order
  JointStrategy strategy;
};

struct Verdict {
  bool value = false;
  // Filled when the root formula is a coalition modality:
  std::optional<StrategyWitness> witness;  // first satisfying strategy
  std::optional<Lasso> counterexample;     // fair violating path for the last strategy
  std::string note;                        // e.g. when the last strategy's outcome is empty
  std::uint64_t strategy_count = 0;
  std::uint64_t strategies_tried = 0;  // witness index + 1, or the full count
};

// A coalition body prepared for automaton-based checking: embedded strategic
// subformulas and propositions are replaced by atoms, whose per-state values
// are frozen in `state_bits`.
struct LoweredBody {
  PathFormulaPtr body;          // over atoms
  PathFormulaPtr negated_body;  // over atoms
  int atom_count = 0;
  std::vector<std::uint64_t> state_bits;  // per model state
  Gba gba_neg;                            // automaton of the negated body
  Gba gba_all;                            // trivial automaton (matches everything)
};

struct StrategyEvaluation {
  std::vector<bool> nonempty;   // per state: filtered outcome nonempty
  std::vector<bool> universal;  // per state: no fair violating path
};

[[nodiscard]] LoweredBody lower_body(const Model& m, const PathFormulaPtr& body, Semantics sem,
                                     const CheckOptions& opts);

[[nodiscard]] StrategyEvaluation evaluate_strategy(const Model& m, const LoweredBody& lowered,
                                                   const JointStrategy& sigma, Semantics sem);

// Accepting (fair and violating) lasso of the product from `from`, if any.
[[nodiscard]] std::optional<Lasso> violating_lasso(const Model& m, const LoweredBody& lowered,
                                                   const JointStrategy& sigma, Semantics sem,
                                                   StateId from);

struct UniversalCheck {
  bool holds = false;
  std::optional<Lasso> violation;
};
[[nodiscard]] UniversalCheck check_universal(const Model& m, const LoweredBody& lowered,
                                             const JointStrategy& sigma, Semantics sem,
                                             StateId from);

// Emptiness of the outcome-graph x automaton product under fairness: returns
// an accepting lasso (projected to model states/events) or nullopt.
[[nodiscard]] std::optional<Lasso> product_emptiness(const Model& m, const OutcomeGraph& graph,
                                                     const Gba& gba,
                                                     const std::vector<std::uint64_t>& state_bits,
                                                     const FairnessConditions& fc, StateId from);

// Full labeling: the set of states satisfying a state formula.
[[nodiscard]] std::vector<bool> label_states(const Model& m, const StateFormulaPtr& f,
                                             Semantics sem, const CheckOptions& opts = {});

// Single-state verdict with witness/counterexample bookkeeping.
[[nodiscard]] Verdict check(const Model& m, StateId state, const StateFormulaPtr& f,
                            Semantics sem, const CheckOptions& opts = {});

}  // namespace amc
