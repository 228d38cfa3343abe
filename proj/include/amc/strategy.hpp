#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "amc/logic.hpp"
#include "amc/model.hpp"

// Memoryless imperfect-information strategies: each coalition agent commits,
// per local state, to one choice from its repertoire.  Restricting a model by
// a joint strategy yields the outcome graph; under the reactive mode the
// silent self-loop is dropped wherever the strategy enables a real event.

namespace amc {

struct Strategy {
  AgentId agent = -1;
  std::vector<int> choice_index;  // per local state: index into the repertoire row
};

struct JointStrategy {
  std::vector<Strategy> parts;  // coalition agents in ascending id order
  const Strategy* for_agent(AgentId a) const {
    for (const auto& p : parts)
      if (p.agent == a) return &p;
    return nullptr;
  }
};

// Enumerates all joint strategies of a coalition in a fixed mixed-radix order:
// agents in declaration order, local states in declaration order, choices in
// declaration order; the last (agent, state) digit varies fastest.
struct StrategySpace {
  const Amas* amas = nullptr;
  std::vector<AgentId> coalition;                        // sorted
  std::vector<std::pair<AgentId, LocalState>> positions;  // digit order
  std::vector<int> radix;                                 // per digit
  std::uint64_t count = 1;

  [[nodiscard]] JointStrategy at(std::uint64_t index) const;
};

[[nodiscard]] StrategySpace enumerate_strategies(const Amas& amas, std::vector<AgentId> coalition);

enum class OutcomeMode { Plain, Reactive };

struct OutcomeGraph {
  const Model* model = nullptr;
  OutcomeMode mode = OutcomeMode::Plain;
  JointStrategy strategy;
  // Per state: events enabled under the strategy (sorted).  The silent loop
  // is listed here even in reactive mode (fairness obligations are defined
  // over this set); the reactive filtering acts on `edges` only.
  std::vector<std::vector<EventId>> allowed;
  std::vector<std::vector<Edge>> edges;  // per state: kept transitions (sorted)
};

[[nodiscard]] OutcomeGraph restrict_model(const Model& m, const JointStrategy& sigma,
                                          OutcomeMode mode);

// True iff some infinite path of the outcome graph starts at `from`
// (no fairness filtering).
[[nodiscard]] bool outcome_nonempty(const OutcomeGraph& g, StateId from);

enum class FairnessKind { None, CF, SCF };

// Edge-level fairness obligations.  For witness event b with state set E:
// step (g, e, ...) satisfies the obligation iff b is not in E(g) or e shares
// an owner with b.  A path is fair iff every obligation is satisfied at
// infinitely many steps.  The silent event is never a witness.
struct FairnessConditions {
  FairnessKind kind = FairnessKind::None;
  std::vector<EventId> witnesses;
  std::vector<std::vector<bool>> in_e;  // [witness index][state]

  [[nodiscard]] bool edge_ok(const Model& m, int w, StateId g, EventId e) const;
};

[[nodiscard]] FairnessConditions fairness_conditions(const Model& m, const OutcomeGraph& g,
                                                     FairnessKind kind);

// Ultimately periodic path: stem_states[0] --stem_events[0]--> ... -->
// loop_states[0] --loop_events[0]--> ... --loop_events.back()--> loop_states[0].
struct Lasso {
  std::vector<StateId> stem_states;   // may be empty
  std::vector<EventId> stem_events;   // size == stem_states.size()
  std::vector<StateId> loop_states;   // nonempty
  std::vector<EventId> loop_events;   // size == loop_states.size()

  size_t position_count() const { return stem_states.size() + loop_states.size(); }
  StateId state_at(size_t pos) const {
    return pos < stem_states.size() ? stem_states[pos]
                                    : loop_states[pos - stem_states.size()];
  }
  EventId event_at(size_t pos) const {
    return pos < stem_events.size() ? stem_events[pos]
                                    : loop_events[pos - stem_events.size()];
  }
  StateId start() const { return stem_states.empty() ? loop_states.front() : stem_states.front(); }
};

// Path-formula satisfaction on an ultimately periodic word with `stem_len`
// non-repeating positions followed by a cycle of `loop_len` positions.
// Until is computed as a least fixpoint over the finite position set.
[[nodiscard]] bool eval_path_generic(
    const PathFormulaPtr& f, int stem_len, int loop_len,
    const std::function<bool(int pos, PropId)>& prop_at,
    const std::function<bool(int pos, const StateFormula*)>& state_at);

// Convenience: propositions read from the model; embedded strategic
// subformulas are not allowed here.
[[nodiscard]] bool eval_path(const PathFormulaPtr& f, const Lasso& lasso, const Model& m);

// True iff the lasso starts at `from` and every step uses a kept edge of the
// outcome graph.
[[nodiscard]] bool lasso_in_outcome(const OutcomeGraph& g, const Lasso& lasso, StateId from);

// True iff every fairness obligation is satisfied by at least one loop step.
[[nodiscard]] bool lasso_fair(const Model& m, const FairnessConditions& fc, const Lasso& lasso);

}  // namespace amc
