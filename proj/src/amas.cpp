#include "amc/amas.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <stdexcept>

namespace amc {

bool Choice::contains(EventId e) const {
  return std::binary_search(events.begin(), events.end(), e);
}

std::optional<LocalState> AgentSpec::successor(LocalState l, EventId e) const {
  const auto& row = transitions[l];
  auto it = std::lower_bound(row.begin(), row.end(), std::pair{e, LocalState{-1}});
  if (it != row.end() && it->first == e) return it->second;
  return std::nullopt;
}

bool AgentSpec::has_available(LocalState l, EventId e) const {
  const auto& row = available[l];
  return std::binary_search(row.begin(), row.end(), e);
}

std::optional<AgentId> Amas::agent_by_name(const std::string& name) const {
  for (AgentId i = 0; i < agent_count(); ++i)
    if (agents[i].name == name) return i;
  return std::nullopt;
}

std::optional<EventId> Amas::event_by_name(const std::string& name) const {
  for (EventId e = 0; e < event_count(); ++e)
    if (event_names[e] == name) return e;
  return std::nullopt;
}

std::optional<PropId> Amas::prop_by_name(const std::string& name) const {
  for (PropId p = 0; p < static_cast<PropId>(prop_names.size()); ++p)
    if (prop_names[p] == name) return p;
  return std::nullopt;
}

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

void check_sorted_unique(const std::vector<int>& xs, const std::string& what) {
  for (size_t i = 1; i < xs.size(); ++i)
    if (xs[i - 1] >= xs[i]) fail(what + ": not sorted/unique");
}

}  // namespace

void validate(const Amas& amas, Diagnostics* diag) {
  std::set<std::string> agent_names;
  const int n_events = amas.event_count();
  if (static_cast<int>(amas.event_owners.size()) != n_events)
    fail("owner table size does not match event table");

  std::vector<std::set<AgentId>> owners_seen(n_events);

  for (AgentId i = 0; i < amas.agent_count(); ++i) {
    const AgentSpec& ag = amas.agents[i];
    if (ag.name.empty()) fail("agent with empty name");
    if (!agent_names.insert(ag.name).second) fail("duplicate agent name: " + ag.name);
    const int n = ag.state_count();
    if (n == 0) fail("agent " + ag.name + ": no local states");
    if (ag.init < 0 || ag.init >= n) fail("agent " + ag.name + ": bad initial state");
    if (static_cast<int>(ag.repertoire.size()) != n ||
        static_cast<int>(ag.available.size()) != n ||
        static_cast<int>(ag.transitions.size()) != n ||
        static_cast<int>(ag.valuation.size()) != n)
      fail("agent " + ag.name + ": per-state table size mismatch");

    std::set<std::string> state_names(ag.state_names.begin(), ag.state_names.end());
    if (static_cast<int>(state_names.size()) != n)
      fail("agent " + ag.name + ": duplicate local state name");

    for (LocalState l = 0; l < n; ++l) {
      const std::string where = "agent " + ag.name + ", state " + ag.state_names[l];
      if (ag.repertoire[l].empty()) fail(where + ": empty repertoire");
      std::set<EventId> avail;
      for (const Choice& c : ag.repertoire[l]) {
        if (c.events.empty()) fail(where + ": empty choice");
        check_sorted_unique(c.events, where + " choice");
        for (EventId e : c.events) {
          if (e < 0 || e >= n_events) fail(where + ": event id out of range");
          avail.insert(e);
        }
      }
      if (std::vector<EventId>(avail.begin(), avail.end()) != ag.available[l])
        fail(where + ": available set is not the union of choices");

      std::set<EventId> with_transition;
      for (size_t k = 0; k < ag.transitions[l].size(); ++k) {
        auto [e, tgt] = ag.transitions[l][k];
        if (k > 0 && ag.transitions[l][k - 1].first >= e)
          fail(where + ": transition row not sorted by event / duplicate event");
        if (tgt < 0 || tgt >= n) fail(where + ": transition target out of range");
        with_transition.insert(e);
      }
      if (with_transition != avail)
        fail(where + ": transition defined iff event available violated");

      check_sorted_unique(ag.valuation[l], where + " valuation");
      for (PropId p : ag.valuation[l]) {
        if (p < 0 || p >= static_cast<PropId>(amas.prop_names.size()))
          fail(where + ": proposition id out of range");
        if (amas.prop_owner[p] != i)
          fail(where + ": labels a proposition owned by another agent");
      }
      for (EventId e : ag.available[l]) owners_seen[e].insert(i);
    }
  }

  for (EventId e = 0; e < n_events; ++e) {
    std::vector<AgentId> seen(owners_seen[e].begin(), owners_seen[e].end());
    if (seen != amas.event_owners[e])
      fail("event " + amas.event_names[e] + ": owner table does not match usage");
    if (seen.empty() && !amas.is_epsilon(e))
      fail("event " + amas.event_names[e] + ": no owner");
  }

  if (amas.epsilon_event) {
    EventId e = *amas.epsilon_event;
    if (amas.event_names[e] != kEpsilonName) fail("stalling event has wrong name");
  }

  if (diag) {
    for (const AgentSpec& ag : amas.agents) {
      // Local reachability from the initial state; unreached states are
      // suspicious but legal.
      std::vector<bool> seen(ag.state_count(), false);
      std::vector<LocalState> stack{ag.init};
      seen[ag.init] = true;
      while (!stack.empty()) {
        LocalState l = stack.back();
        stack.pop_back();
        for (auto [e, t] : ag.transitions[l])
          if (!seen[t]) {
            seen[t] = true;
            stack.push_back(t);
          }
      }
      for (LocalState l = 0; l < ag.state_count(); ++l)
        if (!seen[l])
          diag->warnings.push_back("agent " + ag.name + ": local state " +
                                   ag.state_names[l] + " unreachable from init");
    }
  }
}

std::vector<Choice> lift_simple(const std::vector<EventId>& events) {
  std::vector<Choice> out;
  out.reserve(events.size());
  for (EventId e : events) out.push_back(Choice{{e}});
  return out;
}

bool is_simple(const Amas& amas) {
  for (const AgentSpec& ag : amas.agents)
    for (const auto& row : ag.repertoire)
      for (const Choice& c : row)
        if (c.events.size() != 1) return false;
  return true;
}

Amas add_epsilon_agent(const Amas& amas) {
  if (amas.epsilon_event) throw std::runtime_error("stalling agent already present");
  if (amas.event_by_name(kEpsilonName) || amas.agent_by_name(kEpsilonName))
    throw std::runtime_error(std::string("reserved identifier '") + kEpsilonName +
                             "' already in use");
  Amas out = amas;
  EventId eps = out.event_count();
  out.event_names.emplace_back(kEpsilonName);
  out.event_owners.push_back({static_cast<AgentId>(out.agents.size())});
  out.epsilon_event = eps;

  AgentSpec ag;
  ag.name = kEpsilonName;
  ag.state_names = {"e"};
  ag.init = 0;
  ag.repertoire = {{Choice{{eps}}}};
  ag.available = {{eps}};
  ag.transitions = {{{eps, 0}}};
  ag.valuation = {{}};
  out.agents.push_back(std::move(ag));
  validate(out);
  return out;
}

std::string pretty_print(const Amas& amas) {
  std::ostringstream os;
  bool first_agent = true;
  int printed_agents = amas.agent_count();
  for (AgentId i = 0; i < printed_agents; ++i) {
    const AgentSpec& ag = amas.agents[i];
    if (!first_agent) os << "\n";
    first_agent = false;
    os << "agent " << ag.name << " {\n";
    os << "  init: " << ag.state_names[ag.init] << ";\n";
    for (LocalState l = 0; l < ag.state_count(); ++l) {
      os << "  state " << ag.state_names[l] << " {";
      bool body = false;
      if (!ag.valuation[l].empty()) {
        os << "\n    props: [";
        for (size_t k = 0; k < ag.valuation[l].size(); ++k)
          os << (k ? ", " : "") << amas.prop_names[ag.valuation[l][k]];
        os << "];";
        body = true;
      }
      // Emit choices only where the row is not the plain one-singleton-per-
      // event sugar, keeping classic inputs classic.
      if (ag.repertoire[l] != lift_simple(ag.available[l])) {
        os << "\n    choices: [";
        for (size_t k = 0; k < ag.repertoire[l].size(); ++k) {
          os << (k ? ", " : "") << "{";
          const Choice& c = ag.repertoire[l][k];
          for (size_t j = 0; j < c.events.size(); ++j)
            os << (j ? ", " : "") << amas.event_names[c.events[j]];
          os << "}";
        }
        os << "];";
        body = true;
      }
      for (auto [e, t] : ag.transitions[l]) {
        os << "\n    on " << amas.event_names[e] << " -> " << ag.state_names[t] << ";";
        body = true;
      }
      os << (body ? "\n  }\n" : " }\n");
    }
    os << "}\n";
  }
  return os.str();
}

}  // namespace amc
