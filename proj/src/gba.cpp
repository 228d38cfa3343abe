#include "amc/gba.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <tuple>

namespace amc {

namespace {

// Flattened, structurally deduplicated formula nodes.
struct Node {
  PathFormula::Kind kind;
  int prop = -1;  // atom index for Kind::Prop
  int a = -1;     // child node ids
  int b = -1;
};

struct NodeTable {
  std::vector<Node> nodes;
  std::map<std::tuple<int, int, int, int>, int> index;

  int intern(PathFormula::Kind kind, int prop, int a, int b) {
    auto key = std::make_tuple(static_cast<int>(kind), prop, a, b);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = static_cast<int>(nodes.size());
    nodes.push_back(Node{kind, prop, a, b});
    index.emplace(key, id);
    return id;
  }

  int build(const PathFormulaPtr& f) {
    switch (f->kind) {
      case PathFormula::Kind::True:
        return intern(f->kind, -1, -1, -1);
      case PathFormula::Kind::Prop:
        return intern(f->kind, f->prop, -1, -1);
      case PathFormula::Kind::State:
        throw std::runtime_error(
            "automaton construction: embedded strategic subformula was not substituted");
      case PathFormula::Kind::Not:
        return intern(f->kind, -1, build(f->lhs), -1);
      case PathFormula::Kind::Next:
        return intern(f->kind, -1, build(f->lhs), -1);
      case PathFormula::Kind::And:
      case PathFormula::Kind::Until: {
        int a = build(f->lhs);
        int b = build(f->rhs);
        return intern(f->kind, -1, a, b);
      }
    }
    throw std::runtime_error("automaton construction: unknown node kind");
  }
};

}  // namespace

Gba ltl_to_gba(const PathFormulaPtr& f, int atom_count) {
  if (atom_count < 0 || atom_count > 62)
    throw std::runtime_error("automaton construction: too many atoms");

  NodeTable table;
  const int root = table.build(f);
  const auto& nodes = table.nodes;

  // Elementary subformulas: atoms, Next-nodes, Until-nodes.
  std::vector<int> elems;  // node ids
  std::vector<int> elem_of(nodes.size(), -1);
  for (size_t i = 0; i < nodes.size(); ++i) {
    auto k = nodes[i].kind;
    if (k == PathFormula::Kind::Prop || k == PathFormula::Kind::Next ||
        k == PathFormula::Kind::Until) {
      elem_of[i] = static_cast<int>(elems.size());
      elems.push_back(static_cast<int>(i));
    }
  }
  if (elems.size() > 13)
    throw std::runtime_error("automaton construction: formula too large (elementary count)");

  // Truth value of a node under an assignment over the elementary formulas.
  auto value = [&](std::uint32_t bits, int id) {
    auto rec = [&](auto&& self, int n) -> bool {
      const Node& nd = nodes[n];
      switch (nd.kind) {
        case PathFormula::Kind::True:
          return true;
        case PathFormula::Kind::Prop:
        case PathFormula::Kind::Next:
        case PathFormula::Kind::Until:
          return (bits >> elem_of[n]) & 1u;
        case PathFormula::Kind::Not:
          return !self(self, nd.a);
        case PathFormula::Kind::And:
          return self(self, nd.a) && self(self, nd.b);
        case PathFormula::Kind::State:
          break;
      }
      throw std::runtime_error("automaton construction: unexpected node");
    };
    return rec(rec, id);
  };

  // Locally consistent assignments become automaton states.  Consistency for
  // an Until-node u = a U b under assignment B:  u in B requires b or a to
  // hold at B, and u not in B forbids b at B (the one-step expansion
  // b | (a & X u) must not be decided against the assigned bit).
  std::vector<std::uint32_t> states;
  const std::uint32_t limit = 1u << elems.size();
  for (std::uint32_t bits = 0; bits < limit; ++bits) {
    bool ok = true;
    for (int e : elems) {
      if (nodes[e].kind != PathFormula::Kind::Until) continue;
      bool u = (bits >> elem_of[e]) & 1u;
      bool va = value(bits, nodes[e].a);
      bool vb = value(bits, nodes[e].b);
      if (u && !(vb || va)) ok = false;
      if (!u && vb) ok = false;
      if (!ok) break;
    }
    if (ok) states.push_back(bits);
  }

  Gba gba;
  gba.atom_count = atom_count;
  gba.state_atoms.resize(states.size(), 0);
  for (size_t s = 0; s < states.size(); ++s) {
    for (int e : elems) {
      if (nodes[e].kind != PathFormula::Kind::Prop) continue;
      gba.atom_mask |= (std::uint64_t{1} << nodes[e].prop);
      if ((states[s] >> elem_of[e]) & 1u)
        gba.state_atoms[s] |= (std::uint64_t{1} << nodes[e].prop);
    }
  }

  // Transition B -> B':  every Next-node's bit in B equals its operand's value
  // in B', and every Until-node's bit in B equals b(B) | (a(B) & u(B')).
  gba.succ.resize(states.size());
  for (size_t s = 0; s < states.size(); ++s) {
    for (size_t t = 0; t < states.size(); ++t) {
      bool ok = true;
      for (int e : elems) {
        const Node& nd = nodes[e];
        if (nd.kind == PathFormula::Kind::Next) {
          bool x = (states[s] >> elem_of[e]) & 1u;
          if (x != value(states[t], nd.a)) ok = false;
        } else if (nd.kind == PathFormula::Kind::Until) {
          bool u = (states[s] >> elem_of[e]) & 1u;
          bool va = value(states[s], nd.a);
          bool vb = value(states[s], nd.b);
          bool ut = (states[t] >> elem_of[e]) & 1u;
          if (u != (vb || (va && ut))) ok = false;
        }
        if (!ok) break;
      }
      if (ok) gba.succ[s].push_back(static_cast<int>(t));
    }
  }

  for (size_t s = 0; s < states.size(); ++s)
    if (value(states[s], root)) gba.initial.push_back(static_cast<int>(s));

  // One acceptance set per Until-node: states where the obligation is not
  // pending (u unset) or already discharged (b holds).
  for (int e : elems) {
    if (nodes[e].kind != PathFormula::Kind::Until) continue;
    std::vector<int> acc;
    for (size_t s = 0; s < states.size(); ++s) {
      bool u = (states[s] >> elem_of[e]) & 1u;
      bool vb = value(states[s], nodes[e].b);
      if (!u || vb) acc.push_back(static_cast<int>(s));
    }
    gba.accepting_sets.push_back(std::move(acc));
  }

  return gba;
}

}  // namespace amc
