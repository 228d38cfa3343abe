#include <doctest.h>

#include <random>

#include "amc/amas.hpp"
#include "amc/bundled.hpp"
#include "amc/parser.hpp"
#include "amc/random_amas.hpp"

using namespace amc;

TEST_SUITE("amas") {
  TEST_CASE("bundled systems parse and validate") {
    for (const std::string& name : bundled_names()) {
      CAPTURE(name);
      Amas a = bundled_amas(name);
      CHECK_NOTHROW(validate(a));
    }
  }

  TEST_CASE("conference structure") {
    Amas a = bundled_amas("conference");
    CHECK(a.agent_count() == 3);
    CHECK(a.event_count() == 7);
    CHECK(a.prop_names == std::vector<std::string>{"open", "epid", "closed"});
    auto gc = *a.agent_by_name("gc");
    auto oc = *a.agent_by_name("oc");
    auto sc = *a.agent_by_name("sc");
    CHECK(a.agents[gc].state_count() == 4);
    CHECK(a.agents[oc].state_count() == 4);
    CHECK(a.agents[sc].state_count() == 3);
    auto owners = [&](const char* e) { return a.event_owners[*a.event_by_name(e)]; };
    CHECK(owners("proceed") == std::vector<AgentId>{gc, sc});
    CHECK(owners("onsite") == std::vector<AgentId>{gc, oc});
    CHECK(owners("online") == std::vector<AgentId>{gc, oc});
    CHECK(owners("rest") == std::vector<AgentId>{gc});
    CHECK(owners("handle") == std::vector<AgentId>{oc});
    CHECK(owners("idle") == std::vector<AgentId>{oc});
    CHECK(owners("giveup") == std::vector<AgentId>{sc});
    CHECK(is_simple(a));
  }

  TEST_CASE("explicit repertoires parse into grouped choices") {
    Amas a = bundled_amas("voting-explicit");
    CHECK_FALSE(is_simple(a));
    auto ebm = *a.agent_by_name("ebm");
    const auto& row = a.agents[ebm].repertoire[0];
    REQUIRE(row.size() == 1);
    CHECK(row[0].events.size() == 3);
    auto v = *a.agent_by_name("v");
    CHECK(a.agents[v].repertoire[0].size() == 2);
  }

  TEST_CASE("pretty_print round-trips") {
    for (const std::string& name : bundled_names()) {
      CAPTURE(name);
      Amas a = bundled_amas(name);
      Amas b = parse_amas(pretty_print(a));
      REQUIRE(a.agent_count() == b.agent_count());
      CHECK(a.event_names == b.event_names);
      CHECK(a.prop_names == b.prop_names);
      CHECK(a.event_owners == b.event_owners);
      for (AgentId i = 0; i < a.agent_count(); ++i) {
        CHECK(a.agents[i].state_names == b.agents[i].state_names);
        CHECK(a.agents[i].repertoire == b.agents[i].repertoire);
        CHECK(a.agents[i].transitions == b.agents[i].transitions);
        CHECK(a.agents[i].valuation == b.agents[i].valuation);
      }
    }
  }

  TEST_CASE("random systems round-trip") {
    // Event ids are renumbered by first textual appearance, so the round
    // trip is checked at the name level, plus a textual fixpoint after the
    // renumbering settles.
    auto shape = [](const Amas& m) {
      std::vector<std::string> out;
      for (const AgentSpec& ag : m.agents)
        for (LocalState l = 0; l < ag.state_count(); ++l) {
          std::vector<std::string> lines;
          for (auto [e, t] : ag.transitions[l])
            lines.push_back(ag.name + "/" + ag.state_names[l] + " " + m.event_names[e] +
                            " -> " + ag.state_names[t]);
          std::sort(lines.begin(), lines.end());
          out.insert(out.end(), lines.begin(), lines.end());
          std::vector<std::string> row;
          for (const Choice& c : ag.repertoire[l]) {
            std::vector<std::string> names;
            for (EventId e : c.events) names.push_back(m.event_names[e]);
            std::sort(names.begin(), names.end());
            std::string joined = ag.name + "/" + ag.state_names[l] + " choice";
            for (const auto& n : names) joined += " " + n;
            row.push_back(joined);
          }
          std::sort(row.begin(), row.end());
          out.insert(out.end(), row.begin(), row.end());
          for (PropId pr : ag.valuation[l])
            out.push_back(ag.name + "/" + ag.state_names[l] + " prop " + m.prop_names[pr]);
        }
      return out;
    };
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      RandomAmasParams p;
      p.seed = seed;
      p.explicit_percent = 60;
      Amas a = random_amas(p);
      Amas b = parse_amas(pretty_print(a));
      REQUIRE(a.agent_count() == b.agent_count());
      CHECK(shape(a) == shape(b));
      std::string settled = pretty_print(b);
      CHECK(pretty_print(parse_amas(settled)) == settled);
    }
  }

  TEST_CASE("parser rejects bad input") {
    CHECK_THROWS_AS((void)parse_amas(""), ParseError);
    CHECK_THROWS_AS((void)parse_amas("agent a { init: x; }"), ParseError);  // no states
    CHECK_THROWS_AS((void)parse_amas("agent a { init: 0; state 0 { on epsilon -> 0; } }"),
                    ParseError);  // reserved event
    CHECK_THROWS_AS((void)parse_amas("agent epsilon { init: 0; state 0 { on e -> 0; } }"),
                    ParseError);  // reserved agent
    CHECK_THROWS_AS(
        (void)parse_amas("agent a { init: 0; state 0 { on e -> 0; } state 0 { on e -> 0; } }"),
        ParseError);  // duplicate state
    CHECK_THROWS_AS((void)parse_amas("agent a { init: 0; state 0 { choices: [ {f} ]; on e -> 0; } }"),
                    ParseError);  // choice not matching transitions
    CHECK_THROWS_AS((void)parse_amas("agent a { init: 0; state 0 { choices: [ {e, f} ]; on e -> 0; } }"),
                    ParseError);  // f has no transition
    CHECK_THROWS_AS((void)parse_amas("agent a { init: 0; state 0 { } }"),
                    ParseError);  // no available event at local state
    try {
      (void)parse_amas("agent a {\n  init: 9;\n  state 0 { on e -> 0; }\n}");
      FAIL("expected throw");
    } catch (const ParseError& e) {
      CHECK(e.line == 2);
    }
  }

  TEST_CASE("same proposition on two agents is rejected") {
    CHECK_THROWS((void)parse_amas(R"(
      agent a { init: 0; state 0 { props: [x]; on e -> 0; } }
      agent b { init: 0; state 0 { props: [x]; on f -> 0; } }
    )"));
  }

  TEST_CASE("unreachable local state warning") {
    Diagnostics diag;
    (void)parse_amas("agent a { init: 0; state 0 { on e -> 0; } state 1 { on e -> 1; } }", &diag);
    REQUIRE(diag.warnings.size() == 1);
    CHECK(diag.warnings[0].find("unreachable") != std::string::npos);
  }

  TEST_CASE("stalling agent attachment") {
    Amas a = bundled_amas("voting");
    Amas e = add_epsilon_agent(a);
    CHECK(e.agent_count() == a.agent_count() + 1);
    REQUIRE(e.epsilon_event.has_value());
    CHECK(e.event_names[*e.epsilon_event] == kEpsilonName);
    CHECK(e.event_owners[*e.epsilon_event] ==
          std::vector<AgentId>{static_cast<AgentId>(a.agent_count())});
    CHECK(e.is_epsilon(*e.epsilon_event));
    CHECK_THROWS((void)add_epsilon_agent(e));
  }

  TEST_CASE("validate catches structural corruption") {
    Amas a = bundled_amas("conference");
    SUBCASE("empty repertoire row") {
      a.agents[0].repertoire[0].clear();
      CHECK_THROWS(validate(a));
    }
    SUBCASE("empty choice") {
      a.agents[0].repertoire[0] = {Choice{{}}};
      CHECK_THROWS(validate(a));
    }
    SUBCASE("available not the union of choices") {
      a.agents[0].available[0].push_back(*a.event_by_name("rest"));
      CHECK_THROWS(validate(a));
    }
    SUBCASE("transition without availability") {
      a.agents[0].transitions[0].emplace_back(*a.event_by_name("rest"), 0);
      CHECK_THROWS(validate(a));
    }
    SUBCASE("owner table mismatch") {
      a.event_owners[0].clear();
      CHECK_THROWS(validate(a));
    }
    SUBCASE("foreign proposition in valuation") {
      a.agents[0].valuation[0] = {1};  // epid belongs to oc
      CHECK_THROWS(validate(a));
    }
  }

  TEST_CASE("generated random systems always validate") {
    std::mt19937_64 meta(42);
    for (int i = 0; i < 50; ++i) {
      RandomAmasParams p;
      p.seed = meta();
      p.agents = 1 + static_cast<int>(meta() % 4);
      p.states_per_agent = 1 + static_cast<int>(meta() % 4);
      p.private_events = static_cast<int>(meta() % 3);
      p.shared_events = static_cast<int>(meta() % 3);
      p.props = static_cast<int>(meta() % 3);
      p.explicit_percent = static_cast<int>(meta() % 101);
      CHECK_NOTHROW((void)random_amas(p));
    }
  }
}
