#include "amc/mc.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <stdexcept>

#include "amc/digraph.hpp"

#ifdef AMC_HAVE_OPENMP
#include <omp.h>
#endif

namespace amc {

namespace {

// Rebuilds a path formula with propositions and embedded state subformulas
// replaced by atom indices; atom order is first-occurrence order.
struct AtomCollector {
  std::map<PropId, int> prop_atom;
  std::vector<const StateFormula*> leaves;  // state-subformula atoms, in order
  std::vector<PropId> atom_props;           // -1 for leaf atoms
  int count = 0;

  int atom_for_prop(PropId p) {
    auto it = prop_atom.find(p);
    if (it != prop_atom.end()) return it->second;
    prop_atom.emplace(p, count);
    atom_props.push_back(p);
    return count++;
  }
  int atom_for_leaf(const StateFormula* s) {
    leaves.push_back(s);
    atom_props.push_back(-1);
    return count++;
  }

  PathFormulaPtr remap(const PathFormulaPtr& f) {
    switch (f->kind) {
      case PathFormula::Kind::True:
        return path_true();
      case PathFormula::Kind::Prop:
        return path_prop(atom_for_prop(f->prop));
      case PathFormula::Kind::State:
        return path_prop(atom_for_leaf(f->state.get()));
      case PathFormula::Kind::Not:
        return path_not(remap(f->lhs));
      case PathFormula::Kind::And:
        return path_and(remap(f->lhs), remap(f->rhs));
      case PathFormula::Kind::Next:
        return path_next(remap(f->lhs));
      case PathFormula::Kind::Until:
        return path_until(remap(f->lhs), remap(f->rhs));
    }
    throw std::runtime_error("unknown path formula node");
  }
};

int product_node(int state, int n_gba, int b) { return state * n_gba + b; }

ProductGraph build_product(const Model& m, const OutcomeGraph& graph, const Gba& gba,
                           const std::vector<std::uint64_t>& bits, const FairnessConditions& fc) {
  const int nb = gba.state_count();
  ProductGraph pg;
  pg.node_count = m.state_count() * nb;
  pg.adj.resize(pg.node_count);
  pg.node_sets.assign(pg.node_count, 0);
  pg.num_node_sets = static_cast<int>(gba.accepting_sets.size());
  pg.num_edge_sets = static_cast<int>(fc.witnesses.size());

  std::vector<std::uint64_t> acc_mask(nb, 0);
  for (size_t j = 0; j < gba.accepting_sets.size(); ++j)
    for (int b : gba.accepting_sets[j]) acc_mask[b] |= (std::uint64_t{1} << j);

  for (StateId g = 0; g < m.state_count(); ++g) {
    for (int b = 0; b < nb; ++b) {
      if (!gba.matches(b, bits[g])) continue;
      int v = product_node(g, nb, b);
      pg.node_sets[v] = acc_mask[b];
      for (const Edge& e : graph.edges[g]) {
        std::uint64_t esets = 0;
        for (size_t w = 0; w < fc.witnesses.size(); ++w)
          if (fc.edge_ok(m, static_cast<int>(w), g, e.event)) esets |= (std::uint64_t{1} << w);
        for (int b2 : gba.succ[b]) {
          if (!gba.matches(b2, bits[e.target])) continue;
          pg.adj[v].push_back(ProductEdge{product_node(e.target, nb, b2), esets, e.event});
        }
      }
    }
  }
  return pg;
}

std::vector<int> product_roots(const Model&, const Gba& gba,
                               const std::vector<std::uint64_t>& bits, StateId from) {
  std::vector<int> roots;
  for (int b : gba.initial)
    if (gba.matches(b, bits[from])) roots.push_back(product_node(from, gba.state_count(), b));
  return roots;
}

Lasso project_lasso(const ProductLasso& pl, int n_gba) {
  Lasso l;
  for (size_t i = 0; i + 1 < pl.stem.size(); ++i) l.stem_states.push_back(pl.stem[i] / n_gba);
  l.stem_events = pl.stem_tags;
  for (int v : pl.loop) l.loop_states.push_back(v / n_gba);
  l.loop_events = pl.loop_tags;
  return l;
}

int resolve_threads(int jobs) {
#ifdef AMC_HAVE_OPENMP
  if (jobs <= 0) return omp_get_max_threads();
  return jobs;
#else
  (void)jobs;
  return 1;
#endif
}

}  // namespace

LoweredBody lower_body(const Model& m, const PathFormulaPtr& body, Semantics sem,
                       const CheckOptions& opts) {
  LoweredBody out;
  AtomCollector atoms;
  out.body = atoms.remap(body);
  out.negated_body = path_not(out.body);
  out.atom_count = atoms.count;
  if (atoms.count > 62) throw std::runtime_error("too many distinct atoms in one coalition body");

  out.state_bits.assign(m.state_count(), 0);
  // Proposition atoms read the model valuation; embedded strategic
  // subformulas are labeled recursively under the same semantics.
  std::vector<std::vector<bool>> leaf_labels;
  for (const StateFormula* leaf : atoms.leaves) {
    StateFormulaPtr alias(leaf, [](const StateFormula*) {});  // non-owning view
    leaf_labels.push_back(label_states(m, alias, sem, opts));
  }
  int leaf_idx = 0;
  std::vector<std::pair<int, int>> leaf_atoms;  // (atom, leaf index)
  for (int a = 0; a < atoms.count; ++a)
    if (atoms.atom_props[a] < 0) leaf_atoms.emplace_back(a, leaf_idx++);

  for (StateId g = 0; g < m.state_count(); ++g) {
    std::uint64_t bits = 0;
    for (int a = 0; a < atoms.count; ++a)
      if (atoms.atom_props[a] >= 0 && m.has_prop(g, atoms.atom_props[a]))
        bits |= (std::uint64_t{1} << a);
    for (auto [a, li] : leaf_atoms)
      if (leaf_labels[li][g]) bits |= (std::uint64_t{1} << a);
    out.state_bits[g] = bits;
  }

  out.gba_neg = ltl_to_gba(out.negated_body, out.atom_count);
  out.gba_all = ltl_to_gba(path_true(), out.atom_count);
  return out;
}

StrategyEvaluation evaluate_strategy(const Model& m, const LoweredBody& lowered,
                                     const JointStrategy& sigma, Semantics sem) {
  OutcomeGraph graph = restrict_model(m, sigma, sem.base);
  FairnessConditions fc = fairness_conditions(m, graph, sem.fairness);

  StrategyEvaluation ev;
  ev.nonempty.assign(m.state_count(), false);
  ev.universal.assign(m.state_count(), true);

  {
    ProductGraph live = build_product(m, graph, lowered.gba_all, lowered.state_bits, fc);
    std::vector<bool> ok = nodes_with_accepting_run(live);
    const int nb = lowered.gba_all.state_count();
    for (StateId g = 0; g < m.state_count(); ++g)
      for (int b : lowered.gba_all.initial)
        if (lowered.gba_all.matches(b, lowered.state_bits[g]) && ok[product_node(g, nb, b)])
          ev.nonempty[g] = true;
  }
  {
    ProductGraph bad = build_product(m, graph, lowered.gba_neg, lowered.state_bits, fc);
    std::vector<bool> ok = nodes_with_accepting_run(bad);
    const int nb = lowered.gba_neg.state_count();
    for (StateId g = 0; g < m.state_count(); ++g)
      for (int b : lowered.gba_neg.initial)
        if (lowered.gba_neg.matches(b, lowered.state_bits[g]) && ok[product_node(g, nb, b)])
          ev.universal[g] = false;
  }
  return ev;
}

std::optional<Lasso> product_emptiness(const Model& m, const OutcomeGraph& graph, const Gba& gba,
                                       const std::vector<std::uint64_t>& state_bits,
                                       const FairnessConditions& fc, StateId from) {
  ProductGraph pg = build_product(m, graph, gba, state_bits, fc);
  pg.roots = product_roots(m, gba, state_bits, from);
  auto pl = find_accepting_lasso(pg);
  if (!pl) return std::nullopt;
  return project_lasso(*pl, gba.state_count());
}

std::optional<Lasso> violating_lasso(const Model& m, const LoweredBody& lowered,
                                     const JointStrategy& sigma, Semantics sem, StateId from) {
  OutcomeGraph graph = restrict_model(m, sigma, sem.base);
  FairnessConditions fc = fairness_conditions(m, graph, sem.fairness);
  return product_emptiness(m, graph, lowered.gba_neg, lowered.state_bits, fc, from);
}

UniversalCheck check_universal(const Model& m, const LoweredBody& lowered,
                               const JointStrategy& sigma, Semantics sem, StateId from) {
  UniversalCheck uc;
  uc.violation = violating_lasso(m, lowered, sigma, sem, from);
  uc.holds = !uc.violation.has_value();
  return uc;
}

namespace {

std::vector<bool> label_coalition(const Model& m, const StateFormulaPtr& f, Semantics sem,
                                  const CheckOptions& opts) {
  LoweredBody lowered = lower_body(m, f->body, sem, opts);
  StrategySpace space = enumerate_strategies(*m.amas, f->agents);
  std::vector<bool> result(m.state_count(), false);

  const int threads = resolve_threads(opts.jobs);
  if (threads > 1) {
#ifdef AMC_HAVE_OPENMP
#pragma omp parallel num_threads(threads)
    {
      std::vector<bool> local(m.state_count(), false);
#pragma omp for schedule(dynamic, 1) nowait
      for (long long i = 0; i < static_cast<long long>(space.count); ++i) {
        StrategyEvaluation ev = evaluate_strategy(m, lowered, space.at(i), sem);
        for (StateId g = 0; g < m.state_count(); ++g)
          if (ev.nonempty[g] && ev.universal[g]) local[g] = true;
      }
#pragma omp critical
      {
        for (StateId g = 0; g < m.state_count(); ++g)
          if (local[g]) result[g] = true;
      }
    }
    return result;
#endif
  }
  for (std::uint64_t i = 0; i < space.count; ++i) {
    StrategyEvaluation ev = evaluate_strategy(m, lowered, space.at(i), sem);
    bool all = true;
    for (StateId g = 0; g < m.state_count(); ++g) {
      if (ev.nonempty[g] && ev.universal[g]) result[g] = true;
      all = all && result[g];
    }
    if (all) break;  // every state already satisfied
  }
  return result;
}

}  // namespace

std::vector<bool> label_states(const Model& m, const StateFormulaPtr& f, Semantics sem,
                               const CheckOptions& opts) {
  switch (f->kind) {
    case StateFormula::Kind::True:
      return std::vector<bool>(m.state_count(), true);
    case StateFormula::Kind::Prop: {
      std::vector<bool> r(m.state_count(), false);
      for (StateId g = 0; g < m.state_count(); ++g) r[g] = m.has_prop(g, f->prop);
      return r;
    }
    case StateFormula::Kind::Not: {
      std::vector<bool> r = label_states(m, f->lhs, sem, opts);
      for (StateId g = 0; g < m.state_count(); ++g) r[g] = !r[g];
      return r;
    }
    case StateFormula::Kind::And: {
      std::vector<bool> a = label_states(m, f->lhs, sem, opts);
      std::vector<bool> b = label_states(m, f->rhs, sem, opts);
      for (StateId g = 0; g < m.state_count(); ++g) a[g] = a[g] && b[g];
      return a;
    }
    case StateFormula::Kind::Coalition:
      return label_coalition(m, f, sem, opts);
  }
  throw std::runtime_error("unknown state formula node");
}

Verdict check(const Model& m, StateId state, const StateFormulaPtr& f, Semantics sem,
              const CheckOptions& opts) {
  if (state < 0 || state >= m.state_count()) throw std::runtime_error("state out of range");
  Verdict v;
  if (f->kind != StateFormula::Kind::Coalition) {
    std::vector<bool> labels = label_states(m, f, sem, opts);
    v.value = labels[state];
    return v;
  }

  LoweredBody lowered = lower_body(m, f->body, sem, opts);
  StrategySpace space = enumerate_strategies(*m.amas, f->agents);
  v.strategy_count = space.count;

  std::uint64_t found = space.count;  // sentinel: none
  const int threads = resolve_threads(opts.jobs);
  if (threads > 1) {
#ifdef AMC_HAVE_OPENMP
    std::atomic<std::uint64_t> best{space.count};
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(space.count); ++i) {
      if (static_cast<std::uint64_t>(i) >= best.load(std::memory_order_relaxed)) continue;
      StrategyEvaluation ev = evaluate_strategy(m, lowered, space.at(i), sem);
      if (ev.nonempty[state] && ev.universal[state]) {
        std::uint64_t prev = best.load();
        while (static_cast<std::uint64_t>(i) < prev &&
               !best.compare_exchange_weak(prev, static_cast<std::uint64_t>(i))) {
        }
      }
    }
    found = best.load();
#endif
  }
  if (threads <= 1) {
    for (std::uint64_t i = 0; i < space.count; ++i) {
      StrategyEvaluation ev = evaluate_strategy(m, lowered, space.at(i), sem);
      if (ev.nonempty[state] && ev.universal[state]) {
        found = i;
        break;
      }
    }
  }

  if (found < space.count) {
    v.value = true;
    v.witness = StrategyWitness{found, space.at(found)};
    v.strategies_tried = found + 1;
    return v;
  }
  v.value = false;
  v.strategies_tried = space.count;
  if (space.count > 0) {
    // Explain the failure of the last strategy in enumeration order.
    JointStrategy last = space.at(space.count - 1);
    StrategyEvaluation ev = evaluate_strategy(m, lowered, last, sem);
    if (!ev.nonempty[state]) {
      v.note = "last strategy: filtered outcome from the state is empty";
    } else {
      v.counterexample = violating_lasso(m, lowered, last, sem, state);
      v.note = "last strategy: fair violating path exists";
    }
  }
  return v;
}

}  // namespace amc
