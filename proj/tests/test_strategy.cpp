#include <doctest.h>

#include <set>

#include "amc/bundled.hpp"
#include "amc/model.hpp"
#include "amc/strategy.hpp"

using namespace amc;

namespace {

// Builds the joint strategy where each listed agent picks, per local state,
// the choice that contains the named event (repertoires here are singleton
// lists, so the event pins the choice).
JointStrategy pick(const Amas& a, const std::vector<std::pair<std::string, std::vector<std::string>>>& spec) {
  JointStrategy js;
  for (const auto& [agent_name, events] : spec) {
    AgentId ag = *a.agent_by_name(agent_name);
    Strategy s;
    s.agent = ag;
    const AgentSpec& as = a.agents[ag];
    REQUIRE(static_cast<int>(events.size()) == as.state_count());
    for (LocalState l = 0; l < as.state_count(); ++l) {
      EventId e = *a.event_by_name(events[l]);
      int found = -1;
      for (size_t c = 0; c < as.repertoire[l].size(); ++c)
        if (as.repertoire[l][c].contains(e)) found = static_cast<int>(c);
      REQUIRE(found >= 0);
      s.choice_index.push_back(found);
    }
    js.parts.push_back(std::move(s));
  }
  return js;
}

std::vector<std::string> allowed_names(const Model& m, const OutcomeGraph& g, const char* state) {
  std::vector<std::string> out;
  for (EventId e : g.allowed[*m.state_by_name(state)]) out.push_back(m.event_name(e));
  return out;
}

}  // namespace

TEST_SUITE("strategy") {
  TEST_CASE("strategy space sizes count per-state choices of coalition members") {
    Amas conf = bundled_amas("conference");
    // gc has one branching local state (1: onsite/online) -> 2 strategies.
    CHECK(enumerate_strategies(conf, {*conf.agent_by_name("gc")}).count == 2);
    CHECK(enumerate_strategies(conf, {*conf.agent_by_name("gc"), *conf.agent_by_name("oc")}).count == 4);
    CHECK(enumerate_strategies(conf, {*conf.agent_by_name("gc"), *conf.agent_by_name("sc")}).count == 4);
    CHECK(enumerate_strategies(conf, {}).count == 1);

    Amas vot = bundled_amas("voting");
    CHECK(enumerate_strategies(vot, {*vot.agent_by_name("v")}).count == 2);
    CHECK(enumerate_strategies(vot, {*vot.agent_by_name("ebm")}).count == 3);
    CHECK(enumerate_strategies(vot, {*vot.agent_by_name("v"), *vot.agent_by_name("ebm")}).count == 6);

    Amas votx = bundled_amas("voting-explicit");
    CHECK(enumerate_strategies(votx, {*votx.agent_by_name("v")}).count == 2);
    CHECK(enumerate_strategies(votx, {*votx.agent_by_name("ebm")}).count == 1);
    CHECK(enumerate_strategies(votx, {*votx.agent_by_name("v"), *votx.agent_by_name("ebm")}).count == 2);
  }

  TEST_CASE("enumeration yields distinct strategies in mixed-radix order") {
    Amas conf = bundled_amas("conference");
    auto space = enumerate_strategies(
        conf, {*conf.agent_by_name("gc"), *conf.agent_by_name("oc")});
    REQUIRE(space.count == 4);
    std::set<std::vector<int>> seen;
    for (std::uint64_t i = 0; i < space.count; ++i) {
      JointStrategy js = space.at(i);
      REQUIRE(js.parts.size() == 2);
      CHECK(js.parts[0].agent == *conf.agent_by_name("gc"));
      std::vector<int> digits;
      for (const auto& p : js.parts)
        digits.insert(digits.end(), p.choice_index.begin(), p.choice_index.end());
      seen.insert(digits);
    }
    CHECK(seen.size() == 4);  // all distinct
    // Index 0 is all-zeros; the last digit (oc's final branching state) varies fastest.
    auto first = space.at(0);
    for (const auto& p : first.parts)
      for (int c : p.choice_index) CHECK(c == 0);
    auto second = space.at(1);
    CHECK(second.parts[0].choice_index == first.parts[0].choice_index);
    CHECK(second.parts[1].choice_index != first.parts[1].choice_index);
  }

  TEST_CASE("outcome restriction keeps exactly the strategy-enabled edges") {
    Amas a = bundled_amas("conference");
    Model m = build_undeadlocked_iis(a);

    SUBCASE("coordinated on onsite") {
      JointStrategy js = pick(a, {{"gc", {"proceed", "onsite", "rest", "rest"}},
                                  {"oc", {"onsite", "handle", "handle", "idle"}}});
      OutcomeGraph plain = restrict_model(m, js, OutcomeMode::Plain);
      CHECK(allowed_names(m, plain, "101") ==
            std::vector<std::string>{"onsite", kEpsilonName});
      bool plain_eps = false;
      for (const Edge& e : plain.edges[*m.state_by_name("101")])
        plain_eps |= m.is_epsilon(e.event);
      CHECK(plain_eps);
      // A real event is enabled, so the reactive mode drops the silent edge
      // (the enabled set itself is mode-independent).
      OutcomeGraph reactive = restrict_model(m, js, OutcomeMode::Reactive);
      CHECK(allowed_names(m, reactive, "101") ==
            std::vector<std::string>{"onsite", kEpsilonName});
      std::vector<std::string> kept;
      for (const Edge& e : reactive.edges[*m.state_by_name("101")])
        kept.push_back(m.event_name(e.event));
      CHECK(kept == std::vector<std::string>{"onsite"});
      CHECK(outcome_nonempty(plain, m.initial));
      CHECK(outcome_nonempty(reactive, m.initial));
    }

    SUBCASE("miscoordinated at the branching state") {
      JointStrategy js = pick(a, {{"gc", {"proceed", "onsite", "rest", "rest"}},
                                  {"oc", {"online", "handle", "handle", "idle"}}});
      OutcomeGraph plain = restrict_model(m, js, OutcomeMode::Plain);
      CHECK(allowed_names(m, plain, "101") == std::vector<std::string>{kEpsilonName});
      // Nothing real is enabled, so the silent loop survives the reactive mode.
      OutcomeGraph reactive = restrict_model(m, js, OutcomeMode::Reactive);
      CHECK(allowed_names(m, reactive, "101") == std::vector<std::string>{kEpsilonName});
      CHECK(outcome_nonempty(reactive, m.initial));
    }
  }

  TEST_CASE("outcome emptiness from a blockable state without the silent loop") {
    Amas a = bundled_amas("voting");
    Model iis = build_iis(a);  // no silent loops here
    JointStrategy js = pick(a, {{"v", {"vote_a", "send", "send", "idle_v", "idle_v"}},
                                {"ebm", {"vote_b", "idle_ebm"}}});
    OutcomeGraph g = restrict_model(iis, js, OutcomeMode::Plain);
    // v wants vote_a, ebm commits to vote_b: no joint event, no infinite path.
    CHECK(g.allowed[iis.initial].empty());
    CHECK_FALSE(outcome_nonempty(g, iis.initial));

    // Even agreeing on vote_a deadlocks: the machine is memoryless, stays in
    // its initial local state after the vote, and can no longer offer send.
    JointStrategy agree = pick(a, {{"v", {"vote_a", "send", "send", "idle_v", "idle_v"}},
                                   {"ebm", {"vote_a", "idle_ebm"}}});
    OutcomeGraph g2 = restrict_model(iis, agree, OutcomeMode::Plain);
    CHECK_FALSE(outcome_nonempty(g2, iis.initial));

    // With the grouped repertoire the machine keeps all three events open in
    // one choice and the handshake completes.
    Amas ax = bundled_amas("voting-explicit");
    Model iisx = build_iis(ax);
    JointStrategy grouped = pick(ax, {{"v", {"vote_a", "send", "send", "idle_v", "idle_v"}},
                                      {"ebm", {"vote_a", "idle_ebm"}}});
    OutcomeGraph g3 = restrict_model(iisx, grouped, OutcomeMode::Plain);
    CHECK(outcome_nonempty(g3, iisx.initial));
  }

  TEST_CASE("concurrency-fairness witnesses come from owner availability") {
    Amas a = bundled_amas("conference");
    Model m = build_iis(a);
    JointStrategy empty_js;
    OutcomeGraph g = restrict_model(m, empty_js, OutcomeMode::Plain);
    FairnessConditions fc = fairness_conditions(m, g, FairnessKind::CF);
    REQUIRE(fc.kind == FairnessKind::CF);
    REQUIRE(fc.witnesses.size() == static_cast<size_t>(a.event_count()));

    auto wit = [&](const char* ev) {
      EventId e = *a.event_by_name(ev);
      for (size_t w = 0; w < fc.witnesses.size(); ++w)
        if (fc.witnesses[w] == e) return static_cast<int>(w);
      REQUIRE(false);
      return -1;
    };
    StateId s002 = *m.state_by_name("002");
    // At 002 (gc@0, oc@0, sc@2): gc can still start, oc can still pick a mode,
    // sc can only give up; availability is per-owner, not joint.
    CHECK(fc.in_e[wit("proceed")][s002]);
    CHECK(fc.in_e[wit("onsite")][s002]);
    CHECK(fc.in_e[wit("online")][s002]);
    CHECK(fc.in_e[wit("giveup")][s002]);
    CHECK_FALSE(fc.in_e[wit("rest")][s002]);
    CHECK_FALSE(fc.in_e[wit("handle")][s002]);
    CHECK_FALSE(fc.in_e[wit("idle")][s002]);

    // Obligations: an edge discharges witness b iff b is outside E(g) or the
    // edge's event shares an owner with b.
    EventId giveup = *a.event_by_name("giveup");
    CHECK_FALSE(fc.edge_ok(m, wit("onsite"), s002, giveup));  // oc ignored forever
    CHECK(fc.edge_ok(m, wit("proceed"), s002, giveup));       // sc owns both
    CHECK(fc.edge_ok(m, wit("giveup"), s002, giveup));
    StateId s231 = *m.state_by_name("231");
    CHECK(fc.edge_ok(m, wit("onsite"), s231, *a.event_by_name("rest")));  // onsite not in E(231)

    // Every state offers at least one witness (availability is total).
    for (StateId s = 0; s < m.state_count(); ++s) {
      bool any = false;
      for (size_t w = 0; w < fc.witnesses.size(); ++w) any |= fc.in_e[w][s];
      CHECK(any);
    }
  }

  TEST_CASE("strategic fairness restricts witnesses to the coalition selection") {
    Amas a = bundled_amas("conference");
    Model m = build_undeadlocked_iis(a);
    JointStrategy js = pick(a, {{"gc", {"proceed", "onsite", "rest", "rest"}},
                                {"sc", {"proceed", "proceed", "giveup"}}});
    OutcomeGraph g = restrict_model(m, js, OutcomeMode::Plain);
    FairnessConditions fc = fairness_conditions(m, g, FairnessKind::SCF);

    auto in_e_names = [&](const char* state) {
      std::set<std::string> out;
      StateId s = *m.state_by_name(state);
      for (size_t w = 0; w < fc.witnesses.size(); ++w)
        if (fc.in_e[w][s]) out.insert(m.event_name(fc.witnesses[w]));
      return out;
    };
    // E(g) under SCF is what the committed coalition leaves enabled, minus
    // the silent event.
    CHECK(in_e_names("211") == std::set<std::string>{"rest", "handle"});
    CHECK(in_e_names("101") == std::set<std::string>{"onsite"});
    for (size_t w = 0; w < fc.witnesses.size(); ++w)
      CHECK_FALSE(m.is_epsilon(fc.witnesses[w]));
  }

  TEST_CASE("deviant stalling path is plain-outcome and strategically fair but not reactive") {
    Amas a = bundled_amas("conference");
    Model m = build_undeadlocked_iis(a);
    JointStrategy js = pick(a, {{"gc", {"proceed", "onsite", "rest", "rest"}},
                                {"sc", {"proceed", "proceed", "giveup"}}});
    OutcomeGraph plain = restrict_model(m, js, OutcomeMode::Plain);
    OutcomeGraph reactive = restrict_model(m, js, OutcomeMode::Reactive);
    FairnessConditions fc = fairness_conditions(m, plain, FairnessKind::SCF);

    auto sid = [&](const char* n) { return *m.state_by_name(n); };
    auto eid = [&](const char* n) { return *a.event_by_name(n); };

    // pi1: opponents stall once at 101, then cooperate and close the event.
    Lasso pi1;
    pi1.stem_states = {sid("000"), sid("101"), sid("101"), sid("211"), sid("211")};
    pi1.stem_events = {eid("proceed"), m.epsilon_event, eid("onsite"), eid("rest"), eid("handle")};
    pi1.loop_states = {sid("231"), sid("231")};
    pi1.loop_events = {eid("rest"), eid("idle")};
    CHECK(lasso_in_outcome(plain, pi1, m.initial));
    CHECK(lasso_fair(m, fc, pi1));
    CHECK_FALSE(lasso_in_outcome(reactive, pi1, m.initial));  // stall step was avoidable

    // pi2: opponents comply but the run ignores oc forever at 211.
    Lasso pi2;
    pi2.stem_states = {sid("000"), sid("101")};
    pi2.stem_events = {eid("proceed"), eid("onsite")};
    pi2.loop_states = {sid("211")};
    pi2.loop_events = {eid("rest")};
    CHECK(lasso_in_outcome(reactive, pi2, m.initial));
    CHECK(lasso_in_outcome(plain, pi2, m.initial));
    CHECK_FALSE(lasso_fair(m, fc, pi2));  // handle stays enabled, never taken

    // Under no fairness every lasso is vacuously fair.
    FairnessConditions none = fairness_conditions(m, plain, FairnessKind::None);
    CHECK(lasso_fair(m, none, pi1));
    CHECK(lasso_fair(m, none, pi2));
  }

  TEST_CASE("path formula evaluation on ultimately periodic words") {
    Amas a = bundled_amas("conference");
    Model m = build_iis(a);
    auto sid = [&](const char* n) { return *m.state_by_name(n); };
    auto eid = [&](const char* n) { return *a.event_by_name(n); };

    Lasso run;  // 000 -proceed-> 101 -onsite-> 211 -handle-> (231 -rest/idle-> 231)
    run.stem_states = {sid("000"), sid("101"), sid("211")};
    run.stem_events = {eid("proceed"), eid("onsite"), eid("handle")};
    run.loop_states = {sid("231"), sid("231")};
    run.loop_events = {eid("rest"), eid("idle")};

    auto pf = [&](const char* text) {
      auto sf = parse_formula("<<>> (" + std::string(text) + ")", a);
      REQUIRE(sf->kind == StateFormula::Kind::Coalition);
      return sf->body;
    };
    CHECK(eval_path(pf("F closed"), run, m));
    CHECK(eval_path(pf("F (G closed)"), run, m));
    CHECK_FALSE(eval_path(pf("G closed"), run, m));
    CHECK(eval_path(pf("!closed U epid"), run, m));
    CHECK(eval_path(pf("X open"), run, m));
    CHECK_FALSE(eval_path(pf("open"), run, m));
    CHECK(eval_path(pf("G (open -> X epid)"), run, m));
    CHECK(eval_path(pf("G (epid -> F closed)"), run, m));
    CHECK_FALSE(eval_path(pf("F (open & closed)"), run, m));

    // Generic evaluation with an explicit atom table: prop 0 holds only at
    // position 3 of stem length 2, loop length 2.
    auto prop_at = [](int pos, PropId) { return pos == 3; };
    auto state_at = [](int, const StateFormula*) { return false; };
    PathFormulaPtr fp = path_eventually(path_prop(0));
    PathFormulaPtr gp = path_always(path_prop(0));
    PathFormulaPtr xxx = path_next(path_next(path_next(path_prop(0))));
    CHECK(eval_path_generic(fp, 2, 2, prop_at, state_at));
    CHECK_FALSE(eval_path_generic(gp, 2, 2, prop_at, state_at));
    CHECK(eval_path_generic(xxx, 2, 2, prop_at, state_at));
    // Position 3 is in the loop, so it recurs: G F p holds.
    CHECK(eval_path_generic(path_always(path_eventually(path_prop(0))), 2, 2, prop_at, state_at));
  }
}
