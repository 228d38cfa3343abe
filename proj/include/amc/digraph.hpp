#pragma once

#include <cstdint>
#include <optional>
#include <vector>

// Generic emptiness machinery for generalized Buechi conditions.
//
// A run is accepting iff it is infinite, visits every *node set* infinitely
// often, and traverses an edge from every *edge set* infinitely often.  Both
// kinds of sets are given as bitmask memberships (at most 64 each).  The
// algorithm is Tarjan SCC + per-component coverage checks; witnesses are
// extracted deterministically (adjacency order is authoritative).

namespace amc {

struct ProductEdge {
  int to = -1;
  std::uint64_t edge_sets = 0;  // membership mask over edge-indexed sets
  int tag = -1;                 // caller payload (e.g. event id); not interpreted
};

struct ProductGraph {
  int node_count = 0;
  int num_node_sets = 0;
  int num_edge_sets = 0;
  std::vector<std::vector<ProductEdge>> adj;  // size node_count
  std::vector<std::uint64_t> node_sets;       // membership mask per node
  std::vector<int> roots;                     // search entry points

  std::uint64_t all_node_mask() const {
    return num_node_sets == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << num_node_sets) - 1;
  }
  std::uint64_t all_edge_mask() const {
    return num_edge_sets == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << num_edge_sets) - 1;
  }
};

struct ProductLasso {
  std::vector<int> stem;        // nodes; stem.front() is a root, stem.back() == loop.front()
  std::vector<int> loop;        // nodes; loop.back() has an edge to loop.front()
  std::vector<int> stem_tags;   // tags of traversed edges, size stem.size()-1
  std::vector<int> loop_tags;   // size loop.size(); last tag closes the cycle
};

// First (in deterministic search order) accepting lasso reachable from the
// roots, or nullopt if the language is empty.
[[nodiscard]] std::optional<ProductLasso> find_accepting_lasso(const ProductGraph& g);

// For every node: whether an accepting run starts there (i.e. the node reaches
// an accepting strongly connected component).  Independent of `roots`.
[[nodiscard]] std::vector<bool> nodes_with_accepting_run(const ProductGraph& g);

}  // namespace amc
