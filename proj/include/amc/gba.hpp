#pragma once

#include <cstdint>
#include <vector>

#include "amc/logic.hpp"

// Translation of linear-time path formulas to generalized Buechi automata.
//
// The input formula must use only Prop leaves whose ids index an *atom table*
// chosen by the caller (0..atom_count-1); embedded state subformulas must be
// substituted by fresh atoms beforehand.  Automaton states are the locally
// consistent truth assignments over the formula's elementary subformulas
// (atoms, Next-nodes, Until-nodes); the language is exactly the set of
// infinite atom-valuation words satisfying the formula, with one acceptance
// set per Until-subformula.

namespace amc {

struct Gba {
  int atom_count = 0;
  std::uint64_t atom_mask = 0;  // atoms the automaton actually constrains
  std::vector<std::uint64_t> state_atoms;        // required valuation, per state
  std::vector<std::vector<int>> succ;            // sorted successor lists
  std::vector<int> initial;                      // sorted
  std::vector<std::vector<int>> accepting_sets;  // sorted state lists, one per Until

  int state_count() const { return static_cast<int>(state_atoms.size()); }
  // True iff a word position carrying valuation `bits` may be read in `state`.
  bool matches(int state, std::uint64_t bits) const {
    return (bits & atom_mask) == state_atoms[state];
  }
};

// Throws std::runtime_error if the formula contains a State leaf or is too
// large for explicit tableau construction.
[[nodiscard]] Gba ltl_to_gba(const PathFormulaPtr& f, int atom_count);

}  // namespace amc
