#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "amc/bundled.hpp"
#include "amc/mc.hpp"
#include "amc/model.hpp"
#include "amc/random_amas.hpp"
#include "amc/strategy.hpp"
#include "oracles.hpp"

using namespace amc;

namespace {

// All full joint selections (one choice per agent) at a state, applied to fn.
void for_each_full_selection(const Model& m, StateId g,
                             const std::function<void(const Selection&)>& fn) {
  const Amas& a = *m.amas;
  std::vector<int> digit(a.agent_count(), 0);
  for (;;) {
    Selection sel;
    for (AgentId i = 0; i < a.agent_count(); ++i) {
      const auto& row = a.agents[i].repertoire[m.states[g].locals[i]];
      sel.chosen.emplace_back(i, row[digit[i]]);
    }
    fn(sel);
    int i = a.agent_count() - 1;
    while (i >= 0) {
      const auto& row = a.agents[i].repertoire[m.states[g].locals[i]];
      if (++digit[i] < static_cast<int>(row.size())) break;
      digit[i] = 0;
      --i;
    }
    if (i < 0) return;
  }
}

std::vector<Amas> sample_systems(int count, std::uint64_t meta_seed) {
  std::mt19937_64 meta(meta_seed);
  std::vector<Amas> out;
  for (int i = 0; i < count; ++i) {
    RandomAmasParams p;
    p.seed = meta();
    p.agents = 2 + static_cast<int>(meta() % 3);
    p.states_per_agent = 2 + static_cast<int>(meta() % 2);
    p.private_events = 1 + static_cast<int>(meta() % 2);
    p.shared_events = 1;
    p.props = 2;
    p.explicit_percent = static_cast<int>(meta() % 70);
    out.push_back(random_amas(p));
  }
  return out;
}

// Sorted coalition subsets of size <= 2 over the system's agents.
std::vector<std::vector<AgentId>> small_coalitions(const Amas& a) {
  std::vector<std::vector<AgentId>> out{{}};
  for (AgentId i = 0; i < a.agent_count(); ++i) {
    out.push_back({i});
    for (AgentId j = i + 1; j < a.agent_count(); ++j) out.push_back({i, j});
  }
  return out;
}

}  // namespace

TEST_SUITE("random-props") {
  TEST_CASE("undeadlocked models enable something under every full selection") {
    auto systems = sample_systems(12, 401);
    systems.push_back(bundled_amas("conference"));
    systems.push_back(bundled_amas("voting"));
    systems.push_back(bundled_amas("voting-explicit"));
    for (const Amas& a : systems) {
      Model und = build_undeadlocked_iis(a);
      Amas ae = add_epsilon_agent(a);
      Model eps = build_iis(ae);
      for (const Model* m : {&und, &eps}) {
        CHECK(check_serial(*m).empty());
        for (StateId g = 0; g < m->state_count(); ++g) {
          for_each_full_selection(*m, g, [&](const Selection& sel) {
            auto en = enabled_for(*m, g, sel);
            CHECK_FALSE(en.empty());
            bool has_eps = false;
            for (EventId e : en) has_eps |= m->is_epsilon(e);
            CHECK(has_eps == m->epsilon_offered(g));
          });
        }
      }
      // The plain composition of the conference system, by contrast, has a
      // blocking selection somewhere (that is what undeadlocking repairs),
      // so the check above is not vacuous.
      Model iis = build_iis(a);
      bool somewhere_blocked = false;
      for (StateId g = 0; g < iis.state_count() && !somewhere_blocked; ++g)
        for_each_full_selection(iis, g, [&](const Selection& sel) {
          somewhere_blocked = somewhere_blocked || enabled_for(iis, g, sel).empty();
        });
      bool any_loop = false;
      for (StateId g = 0; g < und.state_count(); ++g) any_loop |= und.epsilon_loop[g];
      CHECK(somewhere_blocked == any_loop);
    }
  }

  TEST_CASE("reactive outcomes keep the silent loop only as a dead end") {
    auto systems = sample_systems(8, 402);
    systems.push_back(bundled_amas("conference"));
    for (const Amas& a : systems) {
      Model und = build_undeadlocked_iis(a);
      for (const auto& coalition : small_coalitions(a)) {
        auto space = enumerate_strategies(a, coalition);
        std::uint64_t limit = std::min<std::uint64_t>(space.count, 24);
        for (std::uint64_t i = 0; i < limit; ++i) {
          OutcomeGraph g = restrict_model(und, space.at(i), OutcomeMode::Reactive);
          for (StateId s = 0; s < und.state_count(); ++s) {
            bool has_eps = false;
            for (const Edge& e : g.edges[s]) has_eps |= und.is_epsilon(e.event);
            if (has_eps) {
              // Sole edge, and a self-loop: the silent event can only appear
              // as an infinite suffix of a reactive path.
              REQUIRE(g.edges[s].size() == 1);
              CHECK(g.edges[s][0].target == s);
            }
          }
        }
      }
    }
  }

  TEST_CASE("undeadlocking the model equals composing with the silent agent") {
    auto systems = sample_systems(8, 403);
    systems.push_back(bundled_amas("conference"));
    systems.push_back(bundled_amas("voting"));
    for (const Amas& a : systems) {
      Model und = build_undeadlocked_iis(a);
      Amas ae = add_epsilon_agent(a);
      Model eps = build_iis(ae);

      REQUIRE(und.state_count() == eps.state_count());
      // Same discovery order: the extra component is constant.
      for (StateId s = 0; s < und.state_count(); ++s) {
        REQUIRE(eps.states[s].locals.size() == und.states[s].locals.size() + 1);
        for (size_t i = 0; i < und.states[s].locals.size(); ++i)
          REQUIRE(eps.states[s].locals[i] == und.states[s].locals[i]);
      }
      // The silent event happens to get the same numeric id in both models.
      REQUIRE(und.epsilon_event == eps.epsilon_event);

      for (const auto& coalition : small_coalitions(a)) {
        auto space = enumerate_strategies(a, coalition);
        std::uint64_t limit = std::min<std::uint64_t>(space.count, 16);
        for (std::uint64_t i = 0; i < limit; ++i) {
          JointStrategy sigma = space.at(i);
          OutcomeGraph gu = restrict_model(und, sigma, OutcomeMode::Reactive);
          OutcomeGraph ge = restrict_model(eps, sigma, OutcomeMode::Reactive);
          for (StateId s = 0; s < und.state_count(); ++s) {
            CAPTURE(s);
            REQUIRE(gu.edges[s].size() == ge.edges[s].size());
            for (size_t j = 0; j < gu.edges[s].size(); ++j) {
              CHECK(gu.edges[s][j].event == ge.edges[s][j].event);
              CHECK(gu.edges[s][j].target == ge.edges[s][j].target);
            }
          }
        }
      }
    }
  }

  TEST_CASE("fair reactive lassos of the repaired model match the plain composition") {
    // Under concurrency-fairness, silent suffixes are never fair (something
    // is always available and the silent event discharges nothing), so the
    // fair ultimately periodic behaviours of the repaired model under the
    // reactive mode coincide with those of the plain composition.
    // Small instances only: the walk below enumerates every lasso of up to
    // six edges.
    std::vector<Amas> systems;
    {
      std::mt19937_64 meta(404);
      for (int i = 0; i < 6; ++i) {
        RandomAmasParams p;
        p.seed = meta();
        p.agents = 2;
        p.states_per_agent = 2 + static_cast<int>(meta() % 2);
        p.private_events = 1;
        p.shared_events = 1;
        p.props = 2;
        p.explicit_percent = static_cast<int>(meta() % 70);
        systems.push_back(random_amas(p));
      }
    }
    systems.push_back(bundled_amas("conference"));
    for (const Amas& a : systems) {
      Model iis = build_iis(a);
      Model und = build_undeadlocked_iis(a);
      REQUIRE(iis.state_count() == und.state_count());

      for (const auto& coalition : small_coalitions(a)) {
        if (coalition.size() > 1) continue;  // keep the walk budget small
        auto space = enumerate_strategies(a, coalition);
        std::uint64_t limit = std::min<std::uint64_t>(space.count, 6);
        for (std::uint64_t i = 0; i < limit; ++i) {
          JointStrategy sigma = space.at(i);
          OutcomeGraph gp = restrict_model(iis, sigma, OutcomeMode::Plain);
          OutcomeGraph gr = restrict_model(und, sigma, OutcomeMode::Reactive);
          FairnessConditions fp = fairness_conditions(iis, gp, FairnessKind::CF);
          FairnessConditions fr = fairness_conditions(und, gr, FairnessKind::CF);

          std::set<std::vector<int>> plain_keys, reactive_keys;
          oracle::enumerate_lassos(gp.edges, iis.initial, 6, [&](const Lasso& l) {
            if (lasso_fair(iis, fp, l)) plain_keys.insert(oracle::lasso_key(l));
            return true;
          });
          oracle::enumerate_lassos(gr.edges, und.initial, 6, [&](const Lasso& l) {
            if (lasso_fair(und, fr, l)) reactive_keys.insert(oracle::lasso_key(l));
            return true;
          });
          CHECK(plain_keys == reactive_keys);
        }
      }
    }
  }

  TEST_CASE("verdicts decompose into per-strategy evaluations") {
    std::mt19937_64 meta(405);
    auto systems = sample_systems(10, 406);
    const Semantics table[] = {
        {OutcomeMode::Plain, FairnessKind::None},
        {OutcomeMode::Plain, FairnessKind::CF},
        {OutcomeMode::Reactive, FairnessKind::None},
        {OutcomeMode::Plain, FairnessKind::SCF},
    };
    for (const Amas& a : systems) {
      Model und = build_undeadlocked_iis(a);
      std::vector<AgentId> coalition{static_cast<AgentId>(meta() % a.agent_count())};
      std::vector<PropId> props;
      for (PropId p = 0; p < static_cast<PropId>(a.prop_names.size()); ++p) props.push_back(p);
      StateFormulaPtr f = random_reducible_formula(meta, coalition, props);
      Semantics sem = table[meta() % 4];

      Verdict v = check(und, und.initial, f, sem, CheckOptions{1});
      auto space = enumerate_strategies(a, coalition);
      REQUIRE(v.strategy_count == space.count);

      LoweredBody lowered = lower_body(und, f->body, sem, CheckOptions{1});
      bool expected = false;
      std::uint64_t first = space.count;
      for (std::uint64_t i = 0; i < space.count && !expected; ++i) {
        StrategyEvaluation ev = evaluate_strategy(und, lowered, space.at(i), sem);
        if (ev.nonempty[und.initial] && ev.universal[und.initial]) {
          expected = true;
          first = i;
        }
      }
      CHECK(v.value == expected);
      if (expected) {
        REQUIRE(v.witness.has_value());
        CHECK(v.witness->index == first);
        CHECK(v.strategies_tried == first + 1);
      } else {
        CHECK(v.strategies_tried == space.count);
      }

      // Certificates, and bounded-search cross-validation on the last
      // strategy when the verdict is negative.
      if (!v.value) {
        JointStrategy last = space.at(space.count - 1);
        OutcomeGraph g = restrict_model(und, last, sem.base);
        FairnessConditions fc = fairness_conditions(und, g, sem.fairness);
        if (v.counterexample.has_value()) {
          CHECK(lasso_in_outcome(g, *v.counterexample, und.initial));
          CHECK(lasso_fair(und, fc, *v.counterexample));
          CHECK_FALSE(eval_path(f->body, *v.counterexample, und));
        } else {
          // Reported empty: no fair lasso of bounded size may exist.
          bool found = false;
          oracle::enumerate_lassos(g.edges, und.initial, 5, [&](const Lasso& l) {
            found = found || lasso_fair(und, fc, l);
            return !found;
          });
          CHECK_FALSE(found);
        }
      } else {
        // The witness strategy must not admit a bounded fair violation.
        JointStrategy w = space.at(v.witness->index);
        OutcomeGraph g = restrict_model(und, w, sem.base);
        FairnessConditions fc = fairness_conditions(und, g, sem.fairness);
        bool violation = false;
        oracle::enumerate_lassos(g.edges, und.initial, 5, [&](const Lasso& l) {
          violation = violation ||
                      (lasso_fair(und, fc, l) && !eval_path(f->body, l, und));
          return !violation;
        });
        CHECK_FALSE(violation);
      }
    }
  }

  TEST_CASE("automaton acceptance agrees with direct evaluation on random pairs") {
    std::mt19937_64 rng(407);
    int checked = 0;
    for (int round = 0; round < 400; ++round) {
      int atoms = 1 + static_cast<int>(rng() % 3);
      PathFormulaPtr f = random_path_formula(rng, atoms, 3);
      oracle::Word w;
      int plen = static_cast<int>(rng() % 4);
      int clen = 1 + static_cast<int>(rng() % 3);
      const std::uint64_t mask = (std::uint64_t{1} << atoms) - 1;
      for (int i = 0; i < plen; ++i) w.prefix.push_back(rng() & mask);
      for (int i = 0; i < clen; ++i) w.cycle.push_back(rng() & mask);

      bool direct = oracle::word_sat(w, f, 0);
      Gba gba = ltl_to_gba(f, atoms);
      CHECK(direct == oracle::gba_accepts_word(gba, w));
      ProductGraph pg = oracle::word_product(gba, w);
      CHECK(direct == find_accepting_lasso(pg).has_value());
      CHECK(direct == eval_path_generic(
                          f, plen, clen,
                          [&](int pos, PropId at) { return (w.at(pos) >> at) & 1; },
                          [](int, const StateFormula*) { return false; }));
      ++checked;
    }
    CHECK(checked == 400);
  }

  TEST_CASE("emptiness search agrees with the two-pass component oracle") {
    std::mt19937_64 rng(408);
    for (int round = 0; round < 300; ++round) {
      ProductGraph g;
      g.node_count = 2 + static_cast<int>(rng() % 7);
      g.num_node_sets = static_cast<int>(rng() % 3);
      g.num_edge_sets = static_cast<int>(rng() % 3);
      g.adj.resize(g.node_count);
      g.node_sets.resize(g.node_count);
      for (int v = 0; v < g.node_count; ++v) {
        g.node_sets[v] = rng() & g.all_node_mask();
        int deg = static_cast<int>(rng() % 3);
        for (int k = 0; k < deg; ++k)
          g.adj[v].push_back(ProductEdge{static_cast<int>(rng() % g.node_count),
                                         rng() & g.all_edge_mask(),
                                         static_cast<int>(rng() % 5)});
      }
      g.roots.push_back(static_cast<int>(rng() % g.node_count));

      auto lasso = find_accepting_lasso(g);
      bool reference = oracle::kosaraju_accepting_run(g);
      CAPTURE(round);
      CHECK(lasso.has_value() == reference);
      if (lasso.has_value()) {
        // Validate the run certificate: starts at a root, edges exist, and
        // the loop covers every node set and edge set.
        const ProductLasso& pl = *lasso;
        REQUIRE(!pl.loop.empty());
        REQUIRE(pl.loop_tags.size() == pl.loop.size());
        REQUIRE(!pl.stem.empty());
        REQUIRE(pl.stem_tags.size() + 1 == pl.stem.size());
        CHECK(pl.stem.back() == pl.loop.front());
        CHECK(std::find(g.roots.begin(), g.roots.end(), pl.stem.front()) !=
              g.roots.end());
        std::uint64_t nodes_seen = 0, edges_seen = 0;
        auto step = [&](int from, int to, int tag, bool in_loop) {
          bool ok = false;
          for (const ProductEdge& e : g.adj[from])
            if (e.to == to && e.tag == tag) {
              ok = true;
              if (in_loop) edges_seen |= e.edge_sets;
            }
          CHECK(ok);
        };
        for (size_t i = 0; i + 1 < pl.stem.size(); ++i)
          step(pl.stem[i], pl.stem[i + 1], pl.stem_tags[i], false);
        for (size_t i = 0; i < pl.loop.size(); ++i)
          step(pl.loop[i], pl.loop[(i + 1) % pl.loop.size()], pl.loop_tags[i], true);
        for (int v : pl.loop) nodes_seen |= g.node_sets[v];
        CHECK((nodes_seen & g.all_node_mask()) == g.all_node_mask());
        // Necessary condition on edge coverage: the union over parallel edges
        // with the same endpoint and tag must reach every edge set.
        CHECK((edges_seen & g.all_edge_mask()) == g.all_edge_mask());
      }
    }
  }

  TEST_CASE("label sets are consistent across boolean structure") {
    auto systems = sample_systems(6, 409);
    std::mt19937_64 meta(410);
    for (const Amas& a : systems) {
      Model und = build_undeadlocked_iis(a);
      std::vector<AgentId> coalition{static_cast<AgentId>(meta() % a.agent_count())};
      std::vector<PropId> props;
      for (PropId p = 0; p < static_cast<PropId>(a.prop_names.size()); ++p) props.push_back(p);
      StateFormulaPtr f = random_reducible_formula(meta, coalition, props);
      Semantics sem{OutcomeMode::Plain, FairnessKind::None};

      std::vector<bool> lf = label_states(und, f, sem);
      std::vector<bool> lnf = label_states(und, state_not(f), sem);
      for (StateId s = 0; s < und.state_count(); ++s) CHECK(lf[s] != lnf[s]);

      StateFormulaPtr g = state_and(f, state_true());
      std::vector<bool> lg = label_states(und, g, sem);
      CHECK(lf == lg);

      // Single-state verdicts match the labeling at every state.
      for (StateId s = 0; s < und.state_count(); ++s) {
        Verdict v = check(und, s, f, sem, CheckOptions{1});
        CHECK(v.value == lf[s]);
      }
    }
  }
}
