#pragma once

#include <optional>
#include <string>
#include <vector>

// Asynchronous multi-agent system templates.  An agent is a finite automaton
// with a repertoire: for every local state, a nonempty set of *choices*, each
// choice being a nonempty set of events the agent is willing to execute.
// Classic agents (one singleton choice per available event) are the special
// case produced by lift_simple.  Events are global: two agents mentioning the
// same event name synchronize on it.

namespace amc {

using AgentId = int;
using EventId = int;
using LocalState = int;
using PropId = int;

// One entry of a repertoire row: the set of events an agent may offer
// simultaneously when it commits to this choice.  Always nonempty, sorted.
struct Choice {
  std::vector<EventId> events;

  [[nodiscard]] bool contains(EventId e) const;
  bool operator==(const Choice&) const = default;
};

struct AgentSpec {
  std::string name;
  std::vector<std::string> state_names;
  LocalState init = 0;

  // repertoire[l] = nonempty list of choices available at local state l.
  std::vector<std::vector<Choice>> repertoire;
  // available[l] = union of repertoire[l], sorted; exactly the events with a
  // transition defined at l.
  std::vector<std::vector<EventId>> available;
  // transitions[l] = sorted (event, successor) pairs; at most one successor
  // per event.
  std::vector<std::vector<std::pair<EventId, LocalState>>> transitions;
  // valuation[l] = sorted propositions holding at l.
  std::vector<std::vector<PropId>> valuation;

  [[nodiscard]] int state_count() const { return static_cast<int>(state_names.size()); }
  [[nodiscard]] std::optional<LocalState> successor(LocalState l, EventId e) const;
  [[nodiscard]] bool has_available(LocalState l, EventId e) const;
};

// Name reserved for the silent stalling event and its auxiliary owner agent;
// input files may not declare it.
inline constexpr const char* kEpsilonName = "epsilon";

struct Amas {
  std::vector<AgentSpec> agents;           // tuple order = declaration order
  std::vector<std::string> event_names;    // global event table
  std::vector<std::vector<AgentId>> event_owners;  // sorted owner agents per event
  std::vector<std::string> prop_names;     // global proposition table
  std::vector<AgentId> prop_owner;         // each proposition belongs to one agent
  // Set when the auxiliary stalling agent has been appended; its event id.
  std::optional<EventId> epsilon_event;

  [[nodiscard]] int agent_count() const { return static_cast<int>(agents.size()); }
  [[nodiscard]] int event_count() const { return static_cast<int>(event_names.size()); }
  [[nodiscard]] std::optional<AgentId> agent_by_name(const std::string& name) const;
  [[nodiscard]] std::optional<EventId> event_by_name(const std::string& name) const;
  [[nodiscard]] std::optional<PropId> prop_by_name(const std::string& name) const;
  [[nodiscard]] bool is_epsilon(EventId e) const { return epsilon_event && *epsilon_event == e; }
};

// Messages for humans; each names the offending agent/state/event.
struct Diagnostics {
  std::vector<std::string> warnings;
};

// Checks every structural invariant: nonempty repertoires of nonempty
// choices, transition defined iff event available, valuations drawn from the
// agent's own propositions, owner tables consistent.  Throws
// std::runtime_error on the first violation.  Appends warnings (e.g. local
// states unreachable from the agent's initial state) to `diag` if given.
void validate(const Amas& amas, Diagnostics* diag = nullptr);

// Turns a classic availability row (set of events, one implicit singleton
// choice each) into an explicit repertoire row.
[[nodiscard]] std::vector<Choice> lift_simple(const std::vector<EventId>& events);

// True iff every repertoire row of every agent consists of singletons only.
[[nodiscard]] bool is_simple(const Amas& amas);

// Appends the auxiliary stalling agent: a single local state, one event
// (kEpsilonName) looping on it, one choice offering it, no propositions.
// Throws if the system already carries the stalling event.
[[nodiscard]] Amas add_epsilon_agent(const Amas& amas);

// Canonical source form; parse(pretty_print(a)) reproduces `a`.
[[nodiscard]] std::string pretty_print(const Amas& amas);

}  // namespace amc
