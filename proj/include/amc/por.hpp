#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "amc/logic.hpp"
#include "amc/mc.hpp"
#include "amc/model.hpp"
#include "amc/strategy.hpp"

// Partial-order reduction for strategic-ability checking.  At each state the
// construction tries to expand only one agent's enabled events (the ample
// set), subject to:
//   C1  on no full-model path from the state does an event dependent on the
//       ample set occur before an ample event (checked exactly by search, or
//       by a sound local criterion on owner availability);
//   C2  a partially expanded state's ample events are all invisible, i.e.
//       they are not owned by the observing coalition and never change the
//       observed propositions;
//   C3  no cycle of the reduced structure (ignoring silent self-loops)
//       consists of partially expanded states only.
// The silent event is always kept.  Independence of two events means they
// share no owner and not both are visible.

namespace amc {

struct ReductionConfig {
  std::vector<AgentId> coalition;  // observing coalition (may be empty)
  std::vector<PropId> props;       // observed propositions
  enum class C1Mode { Exact, Syntactic };
  C1Mode c1_mode = C1Mode::Exact;
};

[[nodiscard]] std::vector<bool> visible_events(const Model& m, const ReductionConfig& cfg);

struct Independence {
  std::vector<bool> visible;  // indexed by model event id (incl. virtual silent)
  [[nodiscard]] bool independent(const Model& m, EventId a, EventId b) const;
};
[[nodiscard]] Independence independence(const Model& m, const ReductionConfig& cfg);

struct ReductionStats {
  int full_states = 0;
  int full_transitions = 0;
  int reduced_states = 0;
  int reduced_transitions = 0;
  int fully_expanded_states = 0;
};

struct ReducedModel {
  Model model;                           // submodel; shares the system pointer
  std::vector<StateId> parent_state;     // reduced id -> id in the full model
  std::vector<std::vector<EventId>> ample;  // chosen non-silent ample set per state
  std::vector<bool> fully_expanded;
  ReductionStats stats;
};

[[nodiscard]] ReducedModel reduce(const Model& full, const ReductionConfig& cfg);

// Independent condition checks (construction-independent).
[[nodiscard]] bool check_c1_exact(const Model& full, StateId g, const std::vector<EventId>& ample,
                                  const Independence& indep);
[[nodiscard]] bool check_c1_syntactic(const Model& full, StateId g,
                                      const std::vector<EventId>& ample);
[[nodiscard]] bool check_c2(const Model& full, StateId g, const std::vector<EventId>& ample,
                            const std::vector<bool>& visible, bool fully_expanded);
[[nodiscard]] bool check_c3(const ReducedModel& red);

// --- Stutter equivalence evidence ---------------------------------------

// Block representation of the observed-valuation word of an ultimately
// periodic path: adjacent block letters differ; an empty cycle means the last
// prefix letter repeats forever.
struct StutterWord {
  std::vector<std::uint64_t> prefix;
  std::vector<std::uint64_t> cycle;
  bool operator==(const StutterWord&) const = default;
};

[[nodiscard]] std::uint64_t prop_mask(const Model& m, StateId g,
                                      const std::vector<PropId>& props);
[[nodiscard]] StutterWord stutter_word(const Model& m, const Lasso& lasso,
                                       const std::vector<PropId>& props);

// Exact decision: does some infinite path of the outcome graph `gr` from
// `from` carry exactly the given stutter word over `props`?
[[nodiscard]] bool has_stutter_equivalent_path(const Model& red, const OutcomeGraph& gr,
                                               StateId from, const std::vector<PropId>& props,
                                               const StutterWord& word);

// Bounded completeness evidence: every lasso of `gf` from `from_full` with at
// most `bound` states has a stutter-equivalent path in `gr` from `from_red`.
struct StutterCheckResult {
  bool ok = true;
  std::uint64_t lassos_checked = 0;
  std::optional<Lasso> counterexample;  // full-side lasso without a match
};
[[nodiscard]] StutterCheckResult bounded_stutter_check(
    const Model& full, const OutcomeGraph& gf, StateId from_full, const Model& red,
    const OutcomeGraph& gr, StateId from_red, const std::vector<PropId>& props, int bound);

// --- End-to-end verification ---------------------------------------------

// Throws unless the formula is in the reducible fragment: no Next, no nested
// modality, every coalition equal to a subset of cfg.coalition, and all
// propositions within cfg.props.
void require_reducible(const StateFormulaPtr& f, const ReductionConfig& cfg);

struct VariantReport {
  std::string name;         // "reactive-silent-agent" or "plain-undeadlocked"
  ReductionStats stats;
  bool c1_ok = true;
  bool c2_ok = true;
  bool c3_ok = true;
  bool stutter_ok = true;
  std::uint64_t stutter_lassos = 0;
  std::vector<bool> full_verdicts;     // per formula, at the initial state
  std::vector<bool> reduced_verdicts;  // per formula, at the initial state
  bool formulas_agree = true;
};

struct ReductionReport {
  VariantReport reactive;  // silent-agent composition, reactive semantics
  VariantReport plain;     // undeadlocked composition, plain semantics
  bool ok = true;
};

// Builds both semantic variants from the same system, reduces each, re-checks
// all conditions, compares every formula's verdict at the initial state, and
// gathers bounded stutter-equivalence evidence over all coalition strategies.
[[nodiscard]] ReductionReport verify_reduction(const Amas& amas, const ReductionConfig& cfg,
                                               const std::vector<StateFormulaPtr>& formulas,
                                               int stutter_bound, const CheckOptions& opts = {});

}  // namespace amc
