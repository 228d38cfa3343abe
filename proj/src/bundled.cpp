#include "amc/bundled.hpp"

#include <stdexcept>

#include "amc/parser.hpp"

namespace amc {

namespace {

const char* kConference = R"(# Conference scenario: a general chair, an organizing committee and a
# steering committee coordinate on running the event on site or online.
agent gc {
  init: 0;
  state 0 { on proceed -> 1; }
  state 1 {
    props: [open];
    on onsite -> 2;
    on online -> 3;
  }
  state 2 { on rest -> 2; }
  state 3 { on rest -> 3; }
}

agent oc {
  init: 0;
  state 0 {
    on onsite -> 1;
    on online -> 2;
  }
  state 1 {
    props: [epid];
    on handle -> 3;
  }
  state 2 { on handle -> 3; }
  state 3 {
    props: [closed];
    on idle -> 3;
  }
}

agent sc {
  init: 0;
  state 0 {
    on proceed -> 1;
    on giveup -> 2;
  }
  state 1 { on proceed -> 1; }
  state 2 { on giveup -> 2; }
}
)";

const char* kVoting = R"(# Minimal voting scenario: a voter casts a ballot for a or b and sends it;
# the election booth machine synchronizes on every step.
agent v {
  init: 0;
  state 0 {
    on vote_a -> 1;
    on vote_b -> 2;
  }
  state 1 { on send -> 3; }
  state 2 { on send -> 4; }
  state 3 {
    props: [voted_a];
    on idle_v -> 3;
  }
  state 4 {
    props: [voted_b];
    on idle_v -> 4;
  }
}

agent ebm {
  init: 0;
  state 0 {
    on vote_a -> 0;
    on vote_b -> 0;
    on send -> 1;
  }
  state 1 { on idle_ebm -> 1; }
}
)";

const char* kVotingExplicit = R"(# Voting scenario with grouped control: the booth machine offers all three
# joint events in a single choice, so it cannot block the voter by
# committing to the wrong one; the voter picks the ballot.
agent v {
  init: 0;
  state 0 {
    choices: [ {vote_a}, {vote_b} ];
    on vote_a -> 1;
    on vote_b -> 2;
  }
  state 1 { on send -> 3; }
  state 2 { on send -> 4; }
  state 3 {
    props: [voted_a];
    on idle_v -> 3;
  }
  state 4 {
    props: [voted_b];
    on idle_v -> 4;
  }
}

agent ebm {
  init: 0;
  state 0 {
    choices: [ {vote_a, vote_b, send} ];
    on vote_a -> 0;
    on vote_b -> 0;
    on send -> 1;
  }
  state 1 { on idle_ebm -> 1; }
}
)";

}  // namespace

const std::vector<std::string>& bundled_names() {
  static const std::vector<std::string> names{"conference", "voting", "voting-explicit",
                                              "chains-3x3"};
  return names;
}

std::string bundled_source(const std::string& name) {
  if (name == "conference") return kConference;
  if (name == "voting") return kVoting;
  if (name == "voting-explicit") return kVotingExplicit;
  if (name == "chains-3x3") return pretty_print(make_chains(3, 3));
  throw std::runtime_error("unknown bundled system: " + name);
}

Amas bundled_amas(const std::string& name) {
  if (name == "chains-3x3") return make_chains(3, 3);
  return parse_amas(bundled_source(name));
}

Amas make_chains(int agents, int length) {
  if (agents < 1 || length < 1) throw std::runtime_error("chains need >= 1 agent and length");
  Amas a;
  a.agents.resize(agents);
  for (AgentId i = 0; i < agents; ++i) {
    AgentSpec& ag = a.agents[i];
    ag.name = "c" + std::to_string(i);
    for (int l = 0; l <= length; ++l) ag.state_names.push_back(std::to_string(l));
    ag.init = 0;
    ag.repertoire.resize(length + 1);
    ag.available.resize(length + 1);
    ag.transitions.resize(length + 1);
    ag.valuation.resize(length + 1);
    for (int l = 0; l < length; ++l) {
      EventId e = static_cast<EventId>(a.event_names.size());
      a.event_names.push_back("step" + std::to_string(i) + "_" + std::to_string(l));
      a.event_owners.push_back({i});
      ag.available[l] = {e};
      ag.repertoire[l] = lift_simple({e});
      ag.transitions[l] = {{e, l + 1}};
    }
    EventId done = static_cast<EventId>(a.event_names.size());
    a.event_names.push_back("done" + std::to_string(i));
    a.event_owners.push_back({i});
    ag.available[length] = {done};
    ag.repertoire[length] = lift_simple({done});
    ag.transitions[length] = {{done, length}};
  }
  PropId p = 0;
  a.prop_names.push_back("finished0");
  a.prop_owner.push_back(0);
  a.agents[0].valuation[length] = {p};
  validate(a);
  return a;
}

}  // namespace amc
