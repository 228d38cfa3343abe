#include "amc/model.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <map>
#include <stdexcept>

namespace amc {

const Choice* Selection::for_agent(AgentId a) const {
  for (const auto& [agent, choice] : chosen)
    if (agent == a) return &choice;
  return nullptr;
}

const std::string& Model::event_name(EventId e) const {
  static const std::string eps = kEpsilonName;
  if (e == amas->event_count() && is_epsilon(e)) return eps;  // model-level silent event
  return amas->event_names[e];
}

const std::vector<AgentId>& Model::event_owners(EventId e) const {
  static const std::vector<AgentId> none;
  if (e >= amas->event_count()) return none;  // model-level silent event
  return amas->event_owners[e];
}

int Model::event_count() const {
  // Includes the virtual silent event of an undeadlocked composition.
  return amas->event_count() + (epsilon_event >= amas->event_count() ? 1 : 0);
}

bool Model::has_prop(StateId g, PropId p) const {
  const auto& v = valuation[g];
  return std::binary_search(v.begin(), v.end(), p);
}

std::optional<StateId> Model::state_by_name(const std::string& name) const {
  for (StateId g = 0; g < state_count(); ++g)
    if (state_names[g] == name) return g;
  return std::nullopt;
}

std::optional<StateId> Model::target(StateId g, EventId e) const {
  for (const Edge& ed : edges[g])
    if (ed.event == e) return ed.target;
  return std::nullopt;
}

bool Model::epsilon_offered(StateId g) const {
  switch (kind) {
    case ModelKind::Iis:
      return false;
    case ModelKind::UndeadlockedIis:
      return epsilon_loop[g];
    case ModelKind::IisOfEpsAmas:
      return true;
  }
  return false;
}

namespace {

std::string compose_name(const Amas& amas, const GlobalState& g) {
  bool all_single = true;
  for (const AgentSpec& ag : amas.agents)
    for (const std::string& s : ag.state_names)
      if (s.size() != 1) all_single = false;
  std::string name;
  for (AgentId i = 0; i < amas.agent_count(); ++i) {
    if (!all_single && i > 0) name += '.';
    name += amas.agents[i].state_names[g.locals[i]];
  }
  return name;
}

std::vector<PropId> compose_valuation(const Amas& amas, const GlobalState& g) {
  std::vector<PropId> props;
  for (AgentId i = 0; i < amas.agent_count(); ++i) {
    const auto& v = amas.agents[i].valuation[g.locals[i]];
    props.insert(props.end(), v.begin(), v.end());
  }
  std::sort(props.begin(), props.end());
  return props;
}

// All events whose every owner has them available at the given locals, plus
// the joint successor tuple for each.  Takes `g` by value: pushing successors
// may reallocate `states`, which would invalidate a reference into it.
std::vector<Edge> global_moves(const Amas& amas, const GlobalState g,
                               std::map<std::vector<LocalState>, StateId>& index,
                               std::vector<GlobalState>& states,
                               std::deque<StateId>& frontier) {
  std::vector<Edge> out;
  for (EventId e = 0; e < amas.event_count(); ++e) {
    bool ok = !amas.event_owners[e].empty();
    GlobalState succ = g;
    for (AgentId i : amas.event_owners[e]) {
      auto t = amas.agents[i].successor(g.locals[i], e);
      if (!t) {
        ok = false;
        break;
      }
      succ.locals[i] = *t;
    }
    if (!ok) continue;
    auto [it, fresh] = index.try_emplace(succ.locals, static_cast<StateId>(states.size()));
    if (fresh) {
      states.push_back(succ);
      frontier.push_back(it->second);
    }
    out.push_back(Edge{e, it->second});
  }
  std::sort(out.begin(), out.end());
  return out;
}

Model compose(const Amas& amas) {
  Model m;
  m.amas = &amas;
  GlobalState init;
  for (const AgentSpec& ag : amas.agents) init.locals.push_back(ag.init);

  std::map<std::vector<LocalState>, StateId> index;
  index[init.locals] = 0;
  m.states.push_back(init);
  std::deque<StateId> frontier{0};
  while (!frontier.empty()) {
    StateId g = frontier.front();
    frontier.pop_front();
    if (static_cast<int>(m.edges.size()) <= g) m.edges.resize(g + 1);
    m.edges[g] = global_moves(amas, m.states[g], index, m.states, frontier);
  }
  m.edges.resize(m.states.size());
  m.initial = 0;
  for (const GlobalState& g : m.states) {
    m.state_names.push_back(compose_name(amas, g));
    m.valuation.push_back(compose_valuation(amas, g));
  }
  m.epsilon_loop.assign(m.states.size(), false);
  return m;
}

// Does some full joint selection (one choice per agent) enable nothing at g?
// Every member event of a choice tuple needs all of its owners to have picked
// it; the search walks the whole choice product with early exit.
bool some_selection_blocks(const Amas& amas, const GlobalState& g) {
  const int n = amas.agent_count();
  std::vector<int> pick(n, 0);
  for (;;) {
    bool any_enabled = false;
    for (EventId e = 0; e < amas.event_count() && !any_enabled; ++e) {
      const auto& owners = amas.event_owners[e];
      if (owners.empty()) continue;
      bool all = true;
      for (AgentId i : owners) {
        if (!amas.agents[i].repertoire[g.locals[i]][pick[i]].contains(e)) {
          all = false;
          break;
        }
      }
      any_enabled = all;
    }
    if (!any_enabled) return true;
    int i = 0;
    while (i < n) {
      if (++pick[i] < static_cast<int>(amas.agents[i].repertoire[g.locals[i]].size())) break;
      pick[i] = 0;
      ++i;
    }
    if (i == n) return false;
  }
}

}  // namespace

Model build_iis(const Amas& amas) {
  Model m = compose(amas);
  if (amas.epsilon_event) {
    m.kind = ModelKind::IisOfEpsAmas;
    m.epsilon_event = *amas.epsilon_event;
    for (StateId g = 0; g < m.state_count(); ++g)
      m.epsilon_loop[g] = m.target(g, m.epsilon_event) == std::optional<StateId>{g};
  }
  return m;
}

Model build_undeadlocked_iis(const Amas& amas) {
  if (amas.epsilon_event)
    throw std::runtime_error("system already carries the stalling agent");
  Model m = compose(amas);
  m.kind = ModelKind::UndeadlockedIis;
  m.epsilon_event = amas.event_count();
  for (StateId g = 0; g < m.state_count(); ++g) {
    if (some_selection_blocks(amas, m.states[g])) {
      m.epsilon_loop[g] = true;
      m.edges[g].push_back(Edge{m.epsilon_event, g});
      std::sort(m.edges[g].begin(), m.edges[g].end());
    }
  }
  return m;
}

std::vector<EventId> enabled(const Model& m, StateId g) {
  std::vector<EventId> out;
  for (const Edge& e : m.edges[g])
    if (out.empty() || out.back() != e.event) out.push_back(e.event);
  return out;
}

std::vector<EventId> enabled_for(const Model& m, StateId g, const Selection& sel) {
  const Amas& amas = *m.amas;
  const GlobalState& st = m.states[g];
#ifndef NDEBUG
  for (const auto& [agent, choice] : sel.chosen) {
    assert(agent >= 0 && agent < amas.agent_count());
    const auto& row = amas.agents[agent].repertoire[st.locals[agent]];
    assert(std::find(row.begin(), row.end(), choice) != row.end() &&
           "selection must pick from the repertoire at the current local state");
  }
#endif
  std::vector<EventId> out;
  for (EventId e = 0; e < amas.event_count(); ++e) {
    const auto& owners = amas.event_owners[e];
    if (owners.empty()) continue;
    bool ok = true;
    for (AgentId i : owners) {
      if (const Choice* c = sel.for_agent(i)) {
        if (!c->contains(e)) ok = false;
      } else if (!amas.agents[i].has_available(st.locals[i], e)) {
        ok = false;
      }
      if (!ok) break;
    }
    if (ok) out.push_back(e);
  }
  if (m.kind == ModelKind::UndeadlockedIis && m.epsilon_offered(g))
    out.push_back(m.epsilon_event);  // ownerless: no condition to check
  return out;
}

std::vector<StateId> check_serial(const Model& m) {
  std::vector<StateId> sinks;
  for (StateId g = 0; g < m.state_count(); ++g)
    if (m.edges[g].empty()) sinks.push_back(g);
  return sinks;
}

}  // namespace amc
