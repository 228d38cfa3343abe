#include "amc/digraph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace amc {

namespace {

struct SccInfo {
  std::vector<int> comp;  // node -> component id, -1 if not visited
  int comp_count = 0;
  std::vector<bool> accepting;  // per component
};

// Iterative Tarjan.  When `from_roots_only`, exploration starts at g.roots in
// order; otherwise every node is a start point.  Component ids follow the
// completion order (reverse topological), which is deterministic.
SccInfo scc_analysis(const ProductGraph& g, bool from_roots_only) {
  const int n = g.node_count;
  SccInfo info;
  info.comp.assign(n, -1);
  std::vector<int> index(n, -1), lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int next_index = 0;

  struct Frame {
    int node;
    size_t edge = 0;
  };
  std::vector<Frame> frames;

  auto strongconnect = [&](int start) {
    if (index[start] != -1) return;
    frames.push_back({start});
    index[start] = lowlink[start] = next_index++;
    stack.push_back(start);
    on_stack[start] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      int v = f.node;
      if (f.edge < g.adj[v].size()) {
        int w = g.adj[v][f.edge++].to;
        if (index[w] == -1) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w});
        } else if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
      } else {
        if (lowlink[v] == index[v]) {
          int c = info.comp_count++;
          while (true) {
            int w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            info.comp[w] = c;
            if (w == v) break;
          }
        }
        frames.pop_back();
        if (!frames.empty()) {
          int parent = frames.back().node;
          lowlink[parent] = std::min(lowlink[parent], lowlink[v]);
        }
      }
    }
  };

  if (from_roots_only) {
    for (int r : g.roots) strongconnect(r);
  } else {
    for (int v = 0; v < n; ++v) strongconnect(v);
  }

  // Coverage per component: union of node-set memberships over members, union
  // of edge-set memberships over internal edges; nontrivial iff an internal
  // edge exists (includes self-loops).
  std::vector<std::uint64_t> node_mask(info.comp_count, 0), edge_mask(info.comp_count, 0);
  std::vector<bool> nontrivial(info.comp_count, false);
  for (int v = 0; v < n; ++v) {
    int c = info.comp[v];
    if (c < 0) continue;
    node_mask[c] |= g.node_sets[v];
    for (const ProductEdge& e : g.adj[v]) {
      if (info.comp[e.to] == c) {
        nontrivial[c] = true;
        edge_mask[c] |= e.edge_sets;
      }
    }
  }
  info.accepting.assign(info.comp_count, false);
  const std::uint64_t want_nodes = g.all_node_mask();
  const std::uint64_t want_edges = g.all_edge_mask();
  for (int c = 0; c < info.comp_count; ++c) {
    info.accepting[c] = nontrivial[c] && (node_mask[c] & want_nodes) == want_nodes &&
                        (edge_mask[c] & want_edges) == want_edges;
  }
  return info;
}

struct Walk {
  std::vector<int> nodes;  // nonempty; nodes.front() is the BFS start
  std::vector<int> tags;   // size nodes.size()-1
};

// Shortest walk (BFS, adjacency order) inside component `c` from `from` that
// either ends by traversing an edge whose mask intersects `needed_edges`, or
// ends at a node whose mask intersects `needed_nodes`.  The start node itself
// does not count for node needs (callers account for it on arrival).
std::optional<Walk> bfs_need(const ProductGraph& g, const SccInfo& scc, int c, int from,
                             std::uint64_t needed_nodes, std::uint64_t needed_edges) {
  std::vector<int> parent(g.node_count, -2), parent_tag(g.node_count, -1);
  std::deque<int> queue;
  parent[from] = -1;
  queue.push_back(from);
  auto reconstruct = [&](int last, int extra_to, int extra_tag) {
    Walk w;
    std::vector<int> rev_nodes, rev_tags;
    if (extra_to >= 0) {
      rev_nodes.push_back(extra_to);
      rev_tags.push_back(extra_tag);
    }
    for (int v = last; v != -1; v = parent[v]) {
      rev_nodes.push_back(v);
      if (parent[v] != -1) rev_tags.push_back(parent_tag[v]);
    }
    w.nodes.assign(rev_nodes.rbegin(), rev_nodes.rend());
    w.tags.assign(rev_tags.rbegin(), rev_tags.rend());
    return w;
  };
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (const ProductEdge& e : g.adj[v]) {
      if (scc.comp[e.to] != c) continue;
      if (e.edge_sets & needed_edges) return reconstruct(v, e.to, e.tag);
      if (g.node_sets[e.to] & needed_nodes) return reconstruct(v, e.to, e.tag);
      if (parent[e.to] == -2) {
        parent[e.to] = v;
        parent_tag[e.to] = e.tag;
        queue.push_back(e.to);
      }
    }
  }
  return std::nullopt;
}

// Shortest walk with at least one edge from `from` to `to` inside component c.
std::optional<Walk> bfs_to(const ProductGraph& g, const SccInfo& scc, int c, int from, int to) {
  std::vector<int> parent(g.node_count, -2), parent_tag(g.node_count, -1);
  std::deque<int> queue;
  parent[from] = -1;
  queue.push_back(from);
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (const ProductEdge& e : g.adj[v]) {
      if (scc.comp[e.to] != c) continue;
      if (e.to == to) {
        Walk w;
        std::vector<int> rev_nodes{to}, rev_tags{e.tag};
        for (int u = v; u != -1; u = parent[u]) {
          rev_nodes.push_back(u);
          if (parent[u] != -1) rev_tags.push_back(parent_tag[u]);
        }
        w.nodes.assign(rev_nodes.rbegin(), rev_nodes.rend());
        w.tags.assign(rev_tags.rbegin(), rev_tags.rend());
        return w;
      }
      if (parent[e.to] == -2) {
        parent[e.to] = v;
        parent_tag[e.to] = e.tag;
        queue.push_back(e.to);
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::optional<ProductLasso> find_accepting_lasso(const ProductGraph& g) {
  SccInfo scc = scc_analysis(g, /*from_roots_only=*/true);

  // Stem: BFS from the roots (in order) to the first node inside an accepting
  // component.
  std::vector<int> parent(g.node_count, -2), parent_tag(g.node_count, -1);
  std::deque<int> queue;
  int entry = -1;
  for (int r : g.roots) {
    if (parent[r] != -2) continue;
    parent[r] = -1;
    if (scc.comp[r] >= 0 && scc.accepting[scc.comp[r]]) {
      entry = r;
      break;
    }
    queue.push_back(r);
  }
  while (entry == -1 && !queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (const ProductEdge& e : g.adj[v]) {
      if (parent[e.to] != -2) continue;
      parent[e.to] = v;
      parent_tag[e.to] = e.tag;
      if (scc.comp[e.to] >= 0 && scc.accepting[scc.comp[e.to]]) {
        entry = e.to;
        break;
      }
      queue.push_back(e.to);
    }
  }
  if (entry == -1) return std::nullopt;

  ProductLasso lasso;
  {
    std::vector<int> rev_nodes, rev_tags;
    for (int v = entry; v != -1; v = parent[v]) {
      rev_nodes.push_back(v);
      if (parent[v] != -1) rev_tags.push_back(parent_tag[v]);
    }
    lasso.stem.assign(rev_nodes.rbegin(), rev_nodes.rend());
    lasso.stem_tags.assign(rev_tags.rbegin(), rev_tags.rend());
  }

  // Loop: greedy legs inside the accepting component that pick up every
  // outstanding node/edge set, then close back to the entry.
  const int c = scc.comp[entry];
  std::uint64_t needed_nodes = g.all_node_mask() & ~g.node_sets[entry];
  std::uint64_t needed_edges = g.all_edge_mask();
  std::vector<int> loop_nodes{entry};
  std::vector<int> loop_tags;
  int cur = entry;
  while (needed_nodes != 0 || needed_edges != 0) {
    auto w = bfs_need(g, scc, c, cur, needed_nodes, needed_edges);
    if (!w)
      throw std::runtime_error("internal: accepting component failed to yield required sets");
    for (size_t i = 1; i < w->nodes.size(); ++i) {
      loop_nodes.push_back(w->nodes[i]);
      loop_tags.push_back(w->tags[i - 1]);
      needed_nodes &= ~g.node_sets[w->nodes[i]];
    }
    // Edge needs satisfied anywhere along the leg.
    {
      int v = w->nodes[0];
      for (size_t i = 1; i < w->nodes.size(); ++i) {
        for (const ProductEdge& e : g.adj[v]) {
          if (e.to == w->nodes[i] && e.tag == w->tags[i - 1]) {
            needed_edges &= ~e.edge_sets;
            break;
          }
        }
        v = w->nodes[i];
      }
    }
    cur = loop_nodes.back();
  }
  if (cur == entry && loop_tags.empty()) {
    // No sets required; force a genuine cycle.
    auto w = bfs_to(g, scc, c, cur, entry);
    if (!w) throw std::runtime_error("internal: nontrivial component has no cycle");
    for (size_t i = 1; i < w->nodes.size(); ++i) {
      loop_nodes.push_back(w->nodes[i]);
      loop_tags.push_back(w->tags[i - 1]);
    }
  } else if (cur != entry) {
    auto w = bfs_to(g, scc, c, cur, entry);
    if (!w) throw std::runtime_error("internal: component not strongly connected");
    for (size_t i = 1; i < w->nodes.size(); ++i) {
      loop_nodes.push_back(w->nodes[i]);
      loop_tags.push_back(w->tags[i - 1]);
    }
  }
  // loop_nodes currently ends at entry again; drop the duplicate terminal.
  loop_nodes.pop_back();
  lasso.loop = std::move(loop_nodes);
  lasso.loop_tags = std::move(loop_tags);
  return lasso;
}

std::vector<bool> nodes_with_accepting_run(const ProductGraph& g) {
  SccInfo scc = scc_analysis(g, /*from_roots_only=*/false);
  std::vector<std::vector<int>> radj(g.node_count);
  for (int v = 0; v < g.node_count; ++v)
    for (const ProductEdge& e : g.adj[v]) radj[e.to].push_back(v);
  std::vector<bool> ok(g.node_count, false);
  std::deque<int> queue;
  for (int v = 0; v < g.node_count; ++v) {
    if (scc.comp[v] >= 0 && scc.accepting[scc.comp[v]]) {
      ok[v] = true;
      queue.push_back(v);
    }
  }
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    for (int u : radj[v]) {
      if (!ok[u]) {
        ok[u] = true;
        queue.push_back(u);
      }
    }
  }
  return ok;
}

}  // namespace amc
