#include "amc/json_io.hpp"

#include <algorithm>
#include <array>

namespace amc {

namespace {

const char* kind_name(ModelKind k) {
  switch (k) {
    case ModelKind::Iis: return "iis";
    case ModelKind::UndeadlockedIis: return "undeadlocked-iis";
    default: return "iis-of-eps-amas";
  }
}

Json sorted_transitions(const Model& m, const std::vector<std::vector<Edge>>& rows) {
  std::vector<std::array<std::string, 3>> items;
  for (StateId g = 0; g < static_cast<StateId>(rows.size()); ++g)
    for (const Edge& e : rows[g])
      items.push_back({m.state_names[g], m.event_name(e.event), m.state_names[e.target]});
  std::sort(items.begin(), items.end());
  Json arr = Json::array();
  for (const auto& it : items)
    arr.push_back(Json{{"event", it[1]}, {"from", it[0]}, {"to", it[2]}});
  return arr;
}

Json state_list(const Model& m, const std::vector<StateId>& ids) {
  std::vector<StateId> order = ids;
  std::sort(order.begin(), order.end(),
            [&](StateId a, StateId b) { return m.state_names[a] < m.state_names[b]; });
  Json arr = Json::array();
  for (StateId g : order) {
    Json props = Json::array();
    std::vector<std::string> names;
    for (PropId p : m.valuation[g]) names.push_back(m.amas->prop_names[p]);
    std::sort(names.begin(), names.end());
    for (auto& n : names) props.push_back(n);
    arr.push_back(Json{{"name", m.state_names[g]},
                       {"props", props},
                       {"silent_loop", m.epsilon_loop[g]}});
  }
  return arr;
}

Json path_segment(const Model& m, const std::vector<StateId>& states,
                  const std::vector<EventId>& events) {
  Json arr = Json::array();
  for (size_t i = 0; i < states.size(); ++i)
    arr.push_back(Json{{"event", m.event_name(events[i])}, {"state", m.state_names[states[i]]}});
  return arr;
}

}  // namespace

Json model_to_json(const Model& m) {
  std::vector<StateId> ids(m.state_count());
  for (StateId g = 0; g < m.state_count(); ++g) ids[g] = g;
  return Json{{"initial", m.state_names[m.initial]},
              {"kind", kind_name(m.kind)},
              {"state_count", m.state_count()},
              {"states", state_list(m, ids)},
              {"transitions", sorted_transitions(m, m.edges)}};
}

Json strategy_to_json(const JointStrategy& sigma, const Amas& amas) {
  Json agents = Json::array();
  for (const Strategy& part : sigma.parts) {
    const AgentSpec& ag = amas.agents[part.agent];
    Json locals = Json::object();
    for (LocalState l = 0; l < ag.state_count(); ++l) {
      const Choice& c = ag.repertoire[l][part.choice_index[l]];
      Json events = Json::array();
      for (EventId e : c.events) events.push_back(amas.event_names[e]);
      locals[ag.state_names[l]] = events;
    }
    agents.push_back(Json{{"agent", ag.name}, {"choice", locals}});
  }
  return agents;
}

Json lasso_to_json(const Lasso& lasso, const Model& m) {
  Json stem = Json::array();
  for (size_t i = 0; i < lasso.stem_states.size(); ++i)
    stem.push_back(Json{{"event", m.event_name(lasso.stem_events[i])},
                        {"state", m.state_names[lasso.stem_states[i]]}});
  return Json{{"loop", path_segment(m, lasso.loop_states, lasso.loop_events)}, {"stem", stem}};
}

Json outcome_to_json(const OutcomeGraph& g, StateId from) {
  const Model& m = *g.model;
  std::vector<bool> seen(m.state_count(), false);
  std::vector<StateId> queue{from}, reach;
  seen[from] = true;
  while (!queue.empty()) {
    StateId v = queue.back();
    queue.pop_back();
    reach.push_back(v);
    for (const Edge& e : g.edges[v])
      if (!seen[e.target]) {
        seen[e.target] = true;
        queue.push_back(e.target);
      }
  }
  std::vector<std::vector<Edge>> rows(m.state_count());
  for (StateId v : reach) rows[v] = g.edges[v];
  return Json{{"from", m.state_names[from]},
              {"mode", g.mode == OutcomeMode::Reactive ? "reactive" : "plain"},
              {"states", state_list(m, reach)},
              {"transitions", sorted_transitions(m, rows)}};
}

Json verdict_to_json(const Verdict& v, const Model& m) {
  Json j{{"strategies_tried", v.strategies_tried},
         {"strategy_count", v.strategy_count},
         {"value", v.value}};
  if (v.witness)
    j["witness"] = Json{{"index", v.witness->index},
                        {"strategy", strategy_to_json(v.witness->strategy, *m.amas)}};
  if (v.counterexample) j["counterexample"] = lasso_to_json(*v.counterexample, m);
  if (!v.note.empty()) j["note"] = v.note;
  return j;
}

Json reduction_stats_to_json(const ReductionStats& s) {
  return Json{{"full_states", s.full_states},
              {"full_transitions", s.full_transitions},
              {"fully_expanded_states", s.fully_expanded_states},
              {"reduced_states", s.reduced_states},
              {"reduced_transitions", s.reduced_transitions}};
}

Json reduced_model_to_json(const ReducedModel& r) {
  return Json{{"model", model_to_json(r.model)}, {"stats", reduction_stats_to_json(r.stats)}};
}

Json variant_report_to_json(const VariantReport& v) {
  Json full = Json::array(), red = Json::array();
  for (bool b : v.full_verdicts) full.push_back(b);
  for (bool b : v.reduced_verdicts) red.push_back(b);
  return Json{{"c1_ok", v.c1_ok},
              {"c2_ok", v.c2_ok},
              {"c3_ok", v.c3_ok},
              {"formulas_agree", v.formulas_agree},
              {"full_verdicts", full},
              {"name", v.name},
              {"reduced_verdicts", red},
              {"stats", reduction_stats_to_json(v.stats)},
              {"stutter_lassos", v.stutter_lassos},
              {"stutter_ok", v.stutter_ok}};
}

Json reduction_report_to_json(const ReductionReport& r) {
  return Json{{"ok", r.ok},
              {"plain", variant_report_to_json(r.plain)},
              {"reactive", variant_report_to_json(r.reactive)}};
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace amc
