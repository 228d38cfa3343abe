#include "amc/por.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>
#include <stdexcept>

#include "amc/digraph.hpp"

namespace amc {

std::uint64_t prop_mask(const Model& m, StateId g, const std::vector<PropId>& props) {
  std::uint64_t bits = 0;
  for (size_t i = 0; i < props.size(); ++i)
    if (m.has_prop(g, props[i])) bits |= (std::uint64_t{1} << i);
  return bits;
}

std::vector<bool> visible_events(const Model& m, const ReductionConfig& cfg) {
  if (cfg.props.size() > 62) throw std::runtime_error("too many observed propositions");
  const int ne = m.event_count();
  std::vector<bool> vis(ne, false);
  for (EventId e = 0; e < ne; ++e) {
    if (m.is_epsilon(e)) continue;
    const auto& owners = m.event_owners(e);
    for (AgentId a : cfg.coalition) {
      if (std::binary_search(owners.begin(), owners.end(), a)) {
        vis[e] = true;
        break;
      }
    }
  }
  std::vector<std::uint64_t> masks(m.state_count());
  for (StateId g = 0; g < m.state_count(); ++g) masks[g] = prop_mask(m, g, cfg.props);
  for (StateId g = 0; g < m.state_count(); ++g)
    for (const Edge& e : m.edges[g])
      if (!m.is_epsilon(e.event) && masks[g] != masks[e.target]) vis[e.event] = true;
  return vis;
}

bool Independence::independent(const Model& m, EventId a, EventId b) const {
  if (visible[a] && visible[b]) return false;
  const auto& oa = m.event_owners(a);
  const auto& ob = m.event_owners(b);
  for (AgentId x : oa)
    if (std::binary_search(ob.begin(), ob.end(), x)) return false;
  return true;
}

Independence independence(const Model& m, const ReductionConfig& cfg) {
  Independence ind;
  ind.visible = visible_events(m, cfg);
  return ind;
}

bool check_c1_exact(const Model& full, StateId g, const std::vector<EventId>& ample,
                    const Independence& indep) {
  if (ample.empty()) return true;
  std::vector<bool> seen(full.state_count(), false);
  std::deque<StateId> queue;
  seen[g] = true;
  queue.push_back(g);
  while (!queue.empty()) {
    StateId v = queue.front();
    queue.pop_front();
    for (const Edge& e : full.edges[v]) {
      if (std::binary_search(ample.begin(), ample.end(), e.event)) continue;  // ample fired first
      for (EventId a : ample)
        if (!indep.independent(full, e.event, a)) return false;
      if (!seen[e.target]) {
        seen[e.target] = true;
        queue.push_back(e.target);
      }
    }
  }
  return true;
}

bool check_c1_syntactic(const Model& full, StateId g, const std::vector<EventId>& ample) {
  // Sound local criterion: every owner of an ample event must have all of its
  // currently available events inside the ample set.  Then, until an ample
  // event fires, those owners cannot move, so no event sharing an owner with
  // the ample set can occur first (and C2 rules out visible ample events).
  const Amas& amas = *full.amas;
  std::set<AgentId> owners;
  for (EventId e : ample)
    for (AgentId a : full.event_owners(e)) owners.insert(a);
  for (AgentId a : owners) {
    LocalState l = full.states[g].locals[a];
    for (EventId e : amas.agents[a].available[l])
      if (!std::binary_search(ample.begin(), ample.end(), e)) return false;
  }
  return true;
}

bool check_c2(const Model&, StateId, const std::vector<EventId>& ample,
              const std::vector<bool>& visible, bool fully_expanded) {
  if (fully_expanded) return true;
  for (EventId e : ample)
    if (visible[e]) return false;
  return true;
}

bool check_c3(const ReducedModel& red) {
  // Every cycle that ignores silent self-loops must pass through a fully
  // expanded state: the subgraph of partially expanded states with non-silent
  // edges has to be acyclic.
  const Model& m = red.model;
  enum { White, Gray, Black };
  std::vector<int> color(m.state_count(), White);
  for (StateId start = 0; start < m.state_count(); ++start) {
    if (red.fully_expanded[start] || color[start] != White) continue;
    std::vector<std::pair<StateId, size_t>> stack{{start, 0}};
    color[start] = Gray;
    while (!stack.empty()) {
      auto& [v, idx] = stack.back();
      if (idx < m.edges[v].size()) {
        const Edge& e = m.edges[v][idx++];
        if (m.is_epsilon(e.event) || red.fully_expanded[e.target]) continue;
        if (color[e.target] == Gray) return false;
        if (color[e.target] == White) {
          color[e.target] = Gray;
          stack.emplace_back(e.target, 0);
        }
      } else {
        color[v] = Black;
        stack.pop_back();
      }
    }
  }
  return true;
}

ReducedModel reduce(const Model& full, const ReductionConfig& cfg) {
  Independence indep = independence(full, cfg);

  std::vector<int> reduced_id(full.state_count(), -1);
  std::vector<bool> on_stack(full.state_count(), false);

  std::vector<StateId> order;                    // reduced -> full
  std::vector<std::vector<EventId>> ample_list;  // per reduced state
  std::vector<bool> fexp;
  std::vector<std::vector<Edge>> kept_edges;  // targets still in full ids

  // Chooses the ample set at `g`: the first agent (in declaration order)
  // whose enabled events form a proper, invisible, C1-valid subset none of
  // whose successors lies on the DFS stack; otherwise full expansion.
  auto decide = [&](StateId g) -> std::pair<std::vector<EventId>, bool> {
    std::vector<EventId> enabled_real;
    for (const Edge& e : full.edges[g])
      if (!full.is_epsilon(e.event)) enabled_real.push_back(e.event);
    enabled_real.erase(std::unique(enabled_real.begin(), enabled_real.end()),
                       enabled_real.end());
    if (enabled_real.empty()) return {enabled_real, true};
    for (AgentId a = 0; a < full.amas->agent_count(); ++a) {
      std::vector<EventId> cand;
      for (EventId e : enabled_real) {
        const auto& owners = full.event_owners(e);
        if (std::binary_search(owners.begin(), owners.end(), a)) cand.push_back(e);
      }
      if (cand.empty() || cand.size() == enabled_real.size()) continue;
      bool invisible = true;
      for (EventId e : cand) invisible = invisible && !indep.visible[e];
      if (!invisible) continue;
      bool c1 = cfg.c1_mode == ReductionConfig::C1Mode::Exact
                    ? check_c1_exact(full, g, cand, indep)
                    : check_c1_syntactic(full, g, cand);
      if (!c1) continue;
      bool stack_ok = true;
      for (EventId e : cand) {
        auto t = full.target(g, e);
        if (t && on_stack[*t]) {
          stack_ok = false;
          break;
        }
      }
      if (!stack_ok) continue;
      return {cand, false};
    }
    return {enabled_real, true};
  };

  struct Frame {
    StateId g;
    std::vector<Edge> kept;
    size_t next = 0;
  };
  std::vector<Frame> stack;

  auto push_state = [&](StateId g) {
    reduced_id[g] = static_cast<int>(order.size());
    on_stack[g] = true;  // the state under expansion counts as on the stack
    auto [amp, full_exp] = decide(g);
    std::vector<Edge> kept;
    for (const Edge& e : full.edges[g]) {
      if (full.is_epsilon(e.event) || full_exp ||
          std::binary_search(amp.begin(), amp.end(), e.event))
        kept.push_back(e);
    }
    order.push_back(g);
    ample_list.push_back(std::move(amp));
    fexp.push_back(full_exp);
    kept_edges.push_back(kept);
    stack.push_back(Frame{g, std::move(kept), 0});
  };

  push_state(full.initial);
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next < f.kept.size()) {
      StateId t = f.kept[f.next++].target;
      if (reduced_id[t] == -1) push_state(t);
    } else {
      on_stack[f.g] = false;
      stack.pop_back();
    }
  }

  ReducedModel out;
  Model& rm = out.model;
  rm.amas = full.amas;
  rm.kind = full.kind;
  rm.epsilon_event = full.epsilon_event;
  rm.initial = 0;
  int transitions = 0;
  for (size_t r = 0; r < order.size(); ++r) {
    StateId o = order[r];
    rm.states.push_back(full.states[o]);
    rm.state_names.push_back(full.state_names[o]);
    rm.valuation.push_back(full.valuation[o]);
    rm.epsilon_loop.push_back(full.epsilon_loop[o]);
    std::vector<Edge> row;
    for (const Edge& e : kept_edges[r])
      row.push_back(Edge{e.event, reduced_id[e.target]});
    std::sort(row.begin(), row.end());
    transitions += static_cast<int>(row.size());
    rm.edges.push_back(std::move(row));
  }
  out.parent_state = std::move(order);
  out.ample = std::move(ample_list);
  out.fully_expanded = std::move(fexp);
  out.stats.full_states = full.state_count();
  int full_transitions = 0;
  for (StateId g = 0; g < full.state_count(); ++g)
    full_transitions += static_cast<int>(full.edges[g].size());
  out.stats.full_transitions = full_transitions;
  out.stats.reduced_states = rm.state_count();
  out.stats.reduced_transitions = transitions;
  for (bool b : out.fully_expanded) out.stats.fully_expanded_states += b ? 1 : 0;
  return out;
}

StutterWord stutter_word(const Model& m, const Lasso& lasso, const std::vector<PropId>& props) {
  const size_t stem = lasso.stem_states.size();
  const size_t k = lasso.loop_states.size();
  auto letter = [&](size_t p) {
    StateId s = p < stem ? lasso.stem_states[p] : lasso.loop_states[(p - stem) % k];
    return prop_mask(m, s, props);
  };
  bool loop_constant = true;
  for (size_t j = 1; j < k; ++j)
    loop_constant = loop_constant && letter(stem + j) == letter(stem);

  StutterWord w;
  if (loop_constant) {
    for (size_t p = 0; p <= stem; ++p) {
      std::uint64_t x = letter(p);
      if (w.prefix.empty() || w.prefix.back() != x) w.prefix.push_back(x);
    }
  } else {
    // Block boundaries repeat with the loop period after one full pass, so
    // one window of starts forms the cycle of the block word.
    for (size_t p = 0; p < stem + 2 * k; ++p) {
      bool start = p == 0 || letter(p) != letter(p - 1);
      if (!start) continue;
      if (p < stem + k)
        w.prefix.push_back(letter(p));
      else
        w.cycle.push_back(letter(p));
    }
    // Canonicalize so that every lasso denoting the same infinite word maps
    // to the same representation: shrink the cycle to its primitive period,
    // then absorb matching prefix tails into cycle rotations.
    const size_t n = w.cycle.size();
    for (size_t d = 1; d <= n / 2; ++d) {
      if (n % d != 0) continue;
      bool periodic = true;
      for (size_t i = d; i < n && periodic; ++i) periodic = w.cycle[i] == w.cycle[i % d];
      if (periodic) {
        w.cycle.resize(d);
        break;
      }
    }
    while (!w.prefix.empty() && w.prefix.back() == w.cycle.back()) {
      w.prefix.pop_back();
      w.cycle.insert(w.cycle.begin(), w.cycle.back());
      w.cycle.pop_back();
    }
  }
  return w;
}

bool has_stutter_equivalent_path(const Model& red, const OutcomeGraph& gr, StateId from,
                                 const std::vector<PropId>& props, const StutterWord& word) {
  const int P = static_cast<int>(word.prefix.size());
  const int C = static_cast<int>(word.cycle.size());
  const int NB = P + C;
  if (NB == 0) return false;
  auto letter = [&](int b) { return b < P ? word.prefix[b] : word.cycle[b - P]; };
  auto succ = [&](int b) -> int {
    if (b + 1 < NB) return b + 1;
    return C > 0 ? P : -1;
  };
  std::vector<std::uint64_t> masks(red.state_count());
  for (StateId g = 0; g < red.state_count(); ++g) masks[g] = prop_mask(red, g, props);
  if (masks[from] != letter(0)) return false;

  ProductGraph pg;
  pg.node_count = red.state_count() * NB;
  pg.adj.resize(pg.node_count);
  pg.node_sets.assign(pg.node_count, 0);
  if (C > 0)
    pg.num_edge_sets = 1;  // advance within the cycle infinitely often
  else
    pg.num_node_sets = 1;  // settle in the final block forever
  auto node = [&](StateId g, int b) { return static_cast<int>(g) * NB + b; };
  for (StateId g = 0; g < red.state_count(); ++g) {
    for (int b = 0; b < NB; ++b) {
      if (masks[g] != letter(b)) continue;
      if (C == 0 && b == NB - 1) pg.node_sets[node(g, b)] = 1;
      for (const Edge& e : gr.edges[g]) {
        if (masks[e.target] == letter(b))
          pg.adj[node(g, b)].push_back(ProductEdge{node(e.target, b), 0, e.event});
        int nb = succ(b);
        if (nb >= 0 && masks[e.target] == letter(nb)) {
          std::uint64_t sets = (C > 0 && nb >= P) ? 1 : 0;
          pg.adj[node(g, b)].push_back(ProductEdge{node(e.target, nb), sets, e.event});
        }
      }
    }
  }
  pg.roots = {node(from, 0)};
  return find_accepting_lasso(pg).has_value();
}

StutterCheckResult bounded_stutter_check(const Model& full, const OutcomeGraph& gf,
                                         StateId from_full, const Model& red,
                                         const OutcomeGraph& gr, StateId from_red,
                                         const std::vector<PropId>& props, int bound) {
  StutterCheckResult res;
  std::set<std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>> seen;
  std::vector<StateId> path{from_full};
  std::vector<EventId> events;

  std::function<bool()> dfs = [&]() -> bool {
    StateId cur = path.back();
    for (const Edge& e : gf.edges[cur]) {
      path.push_back(e.target);
      events.push_back(e.event);
      for (size_t j = 0; j + 1 < path.size(); ++j) {
        if (path[j] != path.back()) continue;
        Lasso lasso;
        lasso.stem_states.assign(path.begin(), path.begin() + j);
        lasso.stem_events.assign(events.begin(), events.begin() + j);
        lasso.loop_states.assign(path.begin() + j, path.end() - 1);
        lasso.loop_events.assign(events.begin() + j, events.end());
        StutterWord w = stutter_word(full, lasso, props);
        if (seen.emplace(w.prefix, w.cycle).second) {
          ++res.lassos_checked;
          if (!has_stutter_equivalent_path(red, gr, from_red, props, w)) {
            res.ok = false;
            res.counterexample = lasso;
            return false;
          }
        }
      }
      bool keep_going = true;
      if (static_cast<int>(events.size()) < bound) keep_going = dfs();
      path.pop_back();
      events.pop_back();
      if (!keep_going) return false;
    }
    return true;
  };
  dfs();
  return res;
}

void require_reducible(const StateFormulaPtr& f, const ReductionConfig& cfg) {
  Classification c = classify(f);
  if (!c.simple)
    throw std::runtime_error(
        "formula outside the reducible fragment (next-step operator or nested modality)");
  std::set<AgentId> agents(cfg.coalition.begin(), cfg.coalition.end());
  for (const auto& coal : c.coalitions)
    for (AgentId a : coal)
      if (!agents.count(a))
        throw std::runtime_error("formula coalition not covered by the reduction coalition");
  std::set<PropId> props(cfg.props.begin(), cfg.props.end());
  for (PropId p : c.props)
    if (!props.count(p))
      throw std::runtime_error("formula proposition outside the observed set");
}

namespace {

VariantReport run_variant(const char* name, const Amas& sys, const Model& full, Semantics sem,
                          const ReductionConfig& cfg,
                          const std::vector<StateFormulaPtr>& formulas, int stutter_bound,
                          const CheckOptions& opts) {
  VariantReport vr;
  vr.name = name;
  ReducedModel red = reduce(full, cfg);
  vr.stats = red.stats;

  Independence indep = independence(full, cfg);
  for (size_t r = 0; r < red.parent_state.size(); ++r) {
    StateId g = red.parent_state[r];
    vr.c2_ok = vr.c2_ok &&
               check_c2(full, g, red.ample[r], indep.visible, red.fully_expanded[r]);
    if (!red.fully_expanded[r])
      vr.c1_ok = vr.c1_ok && check_c1_exact(full, g, red.ample[r], indep);
  }
  vr.c3_ok = check_c3(red);

  for (const auto& f : formulas) {
    bool v_full = check(full, full.initial, f, sem, opts).value;
    bool v_red = check(red.model, red.model.initial, f, sem, opts).value;
    vr.full_verdicts.push_back(v_full);
    vr.reduced_verdicts.push_back(v_red);
    if (v_full != v_red) vr.formulas_agree = false;
  }

  StrategySpace space = enumerate_strategies(sys, cfg.coalition);
  for (std::uint64_t i = 0; i < space.count; ++i) {
    JointStrategy sigma = space.at(i);
    OutcomeGraph gf = restrict_model(full, sigma, sem.base);
    OutcomeGraph gr = restrict_model(red.model, sigma, sem.base);
    StutterCheckResult sc = bounded_stutter_check(full, gf, full.initial, red.model, gr,
                                                  red.model.initial, cfg.props, stutter_bound);
    vr.stutter_lassos += sc.lassos_checked;
    if (!sc.ok) {
      vr.stutter_ok = false;
      break;
    }
  }
  return vr;
}

}  // namespace

ReductionReport verify_reduction(const Amas& amas, const ReductionConfig& cfg,
                                 const std::vector<StateFormulaPtr>& formulas, int stutter_bound,
                                 const CheckOptions& opts) {
  for (const auto& f : formulas) require_reducible(f, cfg);
  ReductionReport rep;

  Amas with_agent = add_epsilon_agent(amas);
  Model full_r = build_iis(with_agent);
  rep.reactive = run_variant("reactive-silent-agent", with_agent, full_r,
                             Semantics{OutcomeMode::Reactive, FairnessKind::None}, cfg, formulas,
                             stutter_bound, opts);

  Model full_p = build_undeadlocked_iis(amas);
  rep.plain = run_variant("plain-undeadlocked", amas, full_p,
                          Semantics{OutcomeMode::Plain, FairnessKind::None}, cfg, formulas,
                          stutter_bound, opts);

  auto good = [](const VariantReport& v) {
    return v.c1_ok && v.c2_ok && v.c3_ok && v.stutter_ok && v.formulas_agree;
  };
  rep.ok = good(rep.reactive) && good(rep.plain);
  return rep;
}

}  // namespace amc
