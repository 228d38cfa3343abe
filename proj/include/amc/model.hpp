#pragma once

#include <string>
#include <vector>

#include "amc/amas.hpp"

// Interleaved composition of agent templates into an explicit global model.
// Global states are tuples of local states reachable from the initial tuple;
// an event fires iff every owner can take it, and moves all owners at once.

namespace amc {

using StateId = int;

enum class ModelKind {
  Iis,              // plain composition
  UndeadlockedIis,  // composition plus silent loops at blockable states
  IisOfEpsAmas,     // composition of a system extended with the stalling agent
};

struct Edge {
  EventId event;
  StateId target;
  auto operator<=>(const Edge&) const = default;
};

struct GlobalState {
  std::vector<LocalState> locals;
  bool operator==(const GlobalState&) const = default;
};

// A selection of choices for a coalition: one choice per member, sorted by
// agent id.  Used both for one-shot enabledness queries and as the per-state
// slice of a joint strategy.
struct Selection {
  std::vector<std::pair<AgentId, Choice>> chosen;

  [[nodiscard]] const Choice* for_agent(AgentId a) const;
};

struct Model {
  const Amas* amas = nullptr;
  ModelKind kind = ModelKind::Iis;
  std::vector<GlobalState> states;  // discovery (BFS) order
  std::vector<std::string> state_names;
  StateId initial = 0;
  std::vector<std::vector<Edge>> edges;          // per state, sorted
  std::vector<std::vector<PropId>> valuation;    // per state, sorted
  std::vector<bool> epsilon_loop;                // silent self-loop present?
  EventId epsilon_event = -1;  // -1 when the model has no silent event

  [[nodiscard]] int state_count() const { return static_cast<int>(states.size()); }
  [[nodiscard]] bool is_epsilon(EventId e) const { return epsilon_event >= 0 && e == epsilon_event; }
  [[nodiscard]] const std::string& event_name(EventId e) const;
  // Owner agents of an event; the silent event of an undeadlocked composition
  // has none.
  [[nodiscard]] const std::vector<AgentId>& event_owners(EventId e) const;
  [[nodiscard]] int event_count() const;
  [[nodiscard]] bool has_prop(StateId g, PropId p) const;
  [[nodiscard]] std::optional<StateId> state_by_name(const std::string& name) const;
  [[nodiscard]] std::optional<StateId> target(StateId g, EventId e) const;

  // True iff the stalling event is offered at g: always in a composition of a
  // stalling-agent system, at flagged states of an undeadlocked composition.
  [[nodiscard]] bool epsilon_offered(StateId g) const;
};

// Composition by reachability closure from the initial tuple.
[[nodiscard]] Model build_iis(const Amas& amas);

// Composition plus a silent self-loop at every state where some joint
// selection of choices (one per agent) enables nothing.
[[nodiscard]] Model build_undeadlocked_iis(const Amas& amas);

// Events with an outgoing transition at g, sorted.
[[nodiscard]] std::vector<EventId> enabled(const Model& m, StateId g);

// Events the given coalition selection lets through at g: every owner inside
// the coalition must have the event in its chosen set, every owner outside
// must have it available at its local state.  The silent event is a member
// wherever the model offers it (its owner set imposes no constraint).  In a
// full composition the result is a subset of enabled(g); on a submodel the
// result is computed from the agent templates, not from the remaining edges.
[[nodiscard]] std::vector<EventId> enabled_for(const Model& m, StateId g,
                                               const Selection& sel);

// States without outgoing transitions (the composition is serial iff empty).
[[nodiscard]] std::vector<StateId> check_serial(const Model& m);

}  // namespace amc
