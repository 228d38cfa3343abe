#include "amc/strategy.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>

#include "amc/digraph.hpp"

namespace amc {

JointStrategy StrategySpace::at(std::uint64_t index) const {
  if (index >= count) throw std::runtime_error("strategy index out of range");
  std::vector<int> digits(positions.size(), 0);
  for (size_t i = positions.size(); i-- > 0;) {  // last digit varies fastest
    digits[i] = static_cast<int>(index % radix[i]);
    index /= radix[i];
  }
  JointStrategy js;
  for (AgentId a : coalition) {
    Strategy s;
    s.agent = a;
    s.choice_index.assign(amas->agents[a].state_count(), 0);
    js.parts.push_back(std::move(s));
  }
  for (size_t i = 0; i < positions.size(); ++i) {
    auto [agent, local] = positions[i];
    for (auto& p : js.parts)
      if (p.agent == agent) p.choice_index[local] = digits[i];
  }
  return js;
}

StrategySpace enumerate_strategies(const Amas& amas, std::vector<AgentId> coalition) {
  std::sort(coalition.begin(), coalition.end());
  coalition.erase(std::unique(coalition.begin(), coalition.end()), coalition.end());
  for (AgentId a : coalition)
    if (a < 0 || a >= amas.agent_count()) throw std::runtime_error("coalition agent out of range");
  StrategySpace space;
  space.amas = &amas;
  space.coalition = std::move(coalition);
  for (AgentId a : space.coalition) {
    const AgentSpec& ag = amas.agents[a];
    for (LocalState l = 0; l < ag.state_count(); ++l) {
      space.positions.emplace_back(a, l);
      space.radix.push_back(static_cast<int>(ag.repertoire[l].size()));
      std::uint64_t next = space.count * ag.repertoire[l].size();
      if (space.count != 0 && next / space.count != ag.repertoire[l].size())
        throw std::runtime_error("strategy space too large to enumerate");
      space.count = next;
    }
  }
  return space;
}

OutcomeGraph restrict_model(const Model& m, const JointStrategy& sigma, OutcomeMode mode) {
  OutcomeGraph g;
  g.model = &m;
  g.mode = mode;
  g.strategy = sigma;
  g.allowed.resize(m.state_count());
  g.edges.resize(m.state_count());
  const Amas& amas = *m.amas;
  for (StateId s = 0; s < m.state_count(); ++s) {
    Selection sel;
    for (const Strategy& part : sigma.parts) {
      LocalState l = m.states[s].locals[part.agent];
      const auto& row = amas.agents[part.agent].repertoire[l];
      sel.chosen.emplace_back(part.agent, row[part.choice_index[l]]);
    }
    g.allowed[s] = enabled_for(m, s, sel);
    bool drop_silent = false;
    if (mode == OutcomeMode::Reactive) {
      for (EventId e : g.allowed[s])
        if (!m.is_epsilon(e)) drop_silent = true;
    }
    for (const Edge& e : m.edges[s]) {
      if (!std::binary_search(g.allowed[s].begin(), g.allowed[s].end(), e.event)) continue;
      if (drop_silent && m.is_epsilon(e.event)) continue;
      g.edges[s].push_back(e);
    }
  }
  return g;
}

bool outcome_nonempty(const OutcomeGraph& g, StateId from) {
  ProductGraph pg;
  pg.node_count = g.model->state_count();
  pg.adj.resize(pg.node_count);
  pg.node_sets.assign(pg.node_count, 0);
  for (StateId s = 0; s < pg.node_count; ++s)
    for (const Edge& e : g.edges[s]) pg.adj[s].push_back(ProductEdge{e.target, 0, e.event});
  pg.roots = {from};
  return find_accepting_lasso(pg).has_value();
}

bool FairnessConditions::edge_ok(const Model& m, int w, StateId g, EventId e) const {
  if (!in_e[w][g]) return true;
  const auto& wo = m.event_owners(witnesses[w]);
  const auto& eo = m.event_owners(e);
  for (AgentId a : wo)
    if (std::binary_search(eo.begin(), eo.end(), a)) return true;
  return false;
}

FairnessConditions fairness_conditions(const Model& m, const OutcomeGraph& g, FairnessKind kind) {
  FairnessConditions fc;
  fc.kind = kind;
  if (kind == FairnessKind::None) return fc;
  const Amas& amas = *m.amas;
  const int real_events = amas.event_count();
  std::vector<std::vector<bool>> rows;
  for (EventId b = 0; b < real_events; ++b) {
    if (m.is_epsilon(b)) continue;
    std::vector<bool> row(m.state_count(), false);
    bool any = false;
    for (StateId s = 0; s < m.state_count(); ++s) {
      bool in = false;
      if (kind == FairnessKind::CF) {
        // Available to some owner at its current local state.
        for (AgentId a : amas.event_owners[b]) {
          if (amas.agents[a].has_available(m.states[s].locals[a], b)) {
            in = true;
            break;
          }
        }
      } else {  // SCF: enabled under the strategy's selection
        in = std::binary_search(g.allowed[s].begin(), g.allowed[s].end(), b);
      }
      row[s] = in;
      any = any || in;
    }
    if (any) {
      fc.witnesses.push_back(b);
      fc.in_e.push_back(std::move(row));
    }
  }
  if (fc.witnesses.size() > 62)
    throw std::runtime_error("too many fairness obligations for the product construction");
  return fc;
}

bool eval_path_generic(const PathFormulaPtr& f, int stem_len, int loop_len,
                       const std::function<bool(int pos, PropId)>& prop_at,
                       const std::function<bool(int pos, const StateFormula*)>& state_at) {
  if (loop_len <= 0) throw std::runtime_error("path evaluation requires a nonempty loop");
  const int n = stem_len + loop_len;
  auto succ = [&](int pos) { return pos + 1 < n ? pos + 1 : stem_len; };

  // Bottom-up truth tables; Until via least-fixpoint iteration to stability.
  std::map<const PathFormula*, std::vector<char>> memo;
  auto eval = [&](auto&& self, const PathFormulaPtr& node) -> const std::vector<char>& {
    auto it = memo.find(node.get());
    if (it != memo.end()) return it->second;
    std::vector<char> vals(n, 0);
    switch (node->kind) {
      case PathFormula::Kind::True:
        std::fill(vals.begin(), vals.end(), 1);
        break;
      case PathFormula::Kind::Prop:
        for (int p = 0; p < n; ++p) vals[p] = prop_at(p, node->prop) ? 1 : 0;
        break;
      case PathFormula::Kind::State:
        for (int p = 0; p < n; ++p) vals[p] = state_at(p, node->state.get()) ? 1 : 0;
        break;
      case PathFormula::Kind::Not: {
        const auto& a = self(self, node->lhs);
        for (int p = 0; p < n; ++p) vals[p] = a[p] ? 0 : 1;
        break;
      }
      case PathFormula::Kind::And: {
        const auto& a = self(self, node->lhs);
        const auto& b = self(self, node->rhs);
        for (int p = 0; p < n; ++p) vals[p] = (a[p] && b[p]) ? 1 : 0;
        break;
      }
      case PathFormula::Kind::Next: {
        const auto& a = self(self, node->lhs);
        for (int p = 0; p < n; ++p) vals[p] = a[succ(p)];
        break;
      }
      case PathFormula::Kind::Until: {
        const auto& a = self(self, node->lhs);
        const auto& b = self(self, node->rhs);
        for (int p = 0; p < n; ++p) vals[p] = b[p];
        bool changed = true;
        while (changed) {
          changed = false;
          for (int p = n - 1; p >= 0; --p) {
            char nv = (b[p] || (a[p] && vals[succ(p)])) ? 1 : 0;
            if (nv != vals[p]) {
              vals[p] = nv;
              changed = true;
            }
          }
        }
        break;
      }
    }
    return memo.emplace(node.get(), std::move(vals)).first->second;
  };
  return eval(eval, f)[0] != 0;
}

bool eval_path(const PathFormulaPtr& f, const Lasso& lasso, const Model& m) {
  auto prop_at = [&](int pos, PropId p) { return m.has_prop(lasso.state_at(pos), p); };
  auto state_at = [&](int, const StateFormula*) -> bool {
    throw std::runtime_error("path evaluation: embedded strategic subformula not substituted");
  };
  return eval_path_generic(f, static_cast<int>(lasso.stem_states.size()),
                           static_cast<int>(lasso.loop_states.size()), prop_at, state_at);
}

bool lasso_in_outcome(const OutcomeGraph& g, const Lasso& lasso, StateId from) {
  if (lasso.loop_states.empty()) return false;
  if (lasso.stem_events.size() != lasso.stem_states.size()) return false;
  if (lasso.loop_events.size() != lasso.loop_states.size()) return false;
  if (lasso.start() != from) return false;
  const size_t n = lasso.position_count();
  for (size_t pos = 0; pos < n; ++pos) {
    StateId s = lasso.state_at(pos);
    EventId e = lasso.event_at(pos);
    StateId t = pos + 1 < n ? lasso.state_at(pos + 1) : lasso.loop_states.front();
    bool found = false;
    for (const Edge& edge : g.edges[s])
      if (edge.event == e && edge.target == t) found = true;
    if (!found) return false;
  }
  return true;
}

bool lasso_fair(const Model& m, const FairnessConditions& fc, const Lasso& lasso) {
  for (size_t w = 0; w < fc.witnesses.size(); ++w) {
    bool ok = false;
    for (size_t i = 0; i < lasso.loop_states.size() && !ok; ++i)
      ok = fc.edge_ok(m, static_cast<int>(w), lasso.loop_states[i], lasso.loop_events[i]);
    if (!ok) return false;
  }
  return true;
}

}  // namespace amc
