#pragma once

#include <memory>
#include <string>
#include <vector>

#include "amc/amas.hpp"

// State and path formulas for strategic ability over asynchronous systems.
// Concrete syntax:  <<a,b>> G !p,  <<v>> F voted_a,  !(p & q) -> <<>> (p U q).
// Derived operators (F, G, R, |, ->, false) are expanded to the core
// connectives (true, prop, !, &, X, U) at parse time.

namespace amc {

struct StateFormula;
struct PathFormula;
using StateFormulaPtr = std::shared_ptr<const StateFormula>;
using PathFormulaPtr = std::shared_ptr<const PathFormula>;

struct PathFormula {
  enum class Kind { True, Prop, State, Not, And, Next, Until };
  Kind kind;
  PropId prop = -1;           // Kind::Prop; an index into the formula's atom table
  StateFormulaPtr state;      // Kind::State: an embedded strategic subformula
  PathFormulaPtr lhs, rhs;    // operands (Not/Next use lhs only)
};

struct StateFormula {
  enum class Kind { True, Prop, Not, And, Coalition };
  Kind kind;
  PropId prop = -1;
  StateFormulaPtr lhs, rhs;
  std::vector<AgentId> agents;  // Kind::Coalition, sorted (may be empty)
  PathFormulaPtr body;          // Kind::Coalition
};

PathFormulaPtr path_true();
PathFormulaPtr path_prop(PropId p);
PathFormulaPtr path_state(StateFormulaPtr s);
PathFormulaPtr path_not(PathFormulaPtr f);
PathFormulaPtr path_and(PathFormulaPtr a, PathFormulaPtr b);
PathFormulaPtr path_or(PathFormulaPtr a, PathFormulaPtr b);
PathFormulaPtr path_next(PathFormulaPtr f);
PathFormulaPtr path_until(PathFormulaPtr a, PathFormulaPtr b);
PathFormulaPtr path_eventually(PathFormulaPtr f);
PathFormulaPtr path_always(PathFormulaPtr f);
PathFormulaPtr path_release(PathFormulaPtr a, PathFormulaPtr b);

StateFormulaPtr state_true();
StateFormulaPtr state_prop(PropId p);
StateFormulaPtr state_not(StateFormulaPtr f);
StateFormulaPtr state_and(StateFormulaPtr a, StateFormulaPtr b);
StateFormulaPtr state_coalition(std::vector<AgentId> agents, PathFormulaPtr body);

// Parses against the given system's agent and proposition names.  The result
// is a state formula; temporal operators outside a coalition modality are a
// parse error.
[[nodiscard]] StateFormulaPtr parse_formula(const std::string& text, const Amas& amas);

// Round-trippable rendering using the system's names.
[[nodiscard]] std::string to_string(const StateFormulaPtr& f, const Amas& amas);
[[nodiscard]] std::string to_string(const PathFormulaPtr& f, const Amas& amas);

struct Classification {
  // True iff simple-branching-time shape: no nested coalition modality and no
  // Next operator anywhere (the fragment the reduction pipeline accepts).
  bool simple = true;
  std::vector<std::vector<AgentId>> coalitions;  // each sorted, in occurrence order
  std::vector<PropId> props;                     // sorted, deduplicated
};
[[nodiscard]] Classification classify(const StateFormulaPtr& f);

}  // namespace amc
