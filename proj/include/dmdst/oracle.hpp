#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmdst/graph.hpp"
#include "dmdst/tree.hpp"

namespace dmdst {

class OracleError : public std::runtime_error {
 public:
  OracleError(Vertex n, Vertex limit)
      : std::runtime_error("TooLarge: n=" + std::to_string(n) + " exceeds limit " + std::to_string(limit)) {}
};

struct ExactResult {
  Degree delta;
  std::vector<Vertex> parent;
};

namespace detail {

// Does following assigned parents from p reach v? (Unassigned ends the walk.)
inline bool reaches(const std::vector<Vertex>& parent, Vertex p, Vertex v) {
  for (Vertex x = p; x != kNoVertex; x = parent[static_cast<std::size_t>(x)])
    if (x == v) return true;
  return false;
}

class DegreeBoundSearch {
 public:
  DegreeBoundSearch(const Digraph& g, Degree bound) : g_(g), bound_(bound) {
    const auto n = static_cast<std::size_t>(g.n());
    parent_.assign(n, kNoVertex);
    load_.assign(n, 0);
    remaining_ = g.n() - 1;
  }

  bool run() { return assign(); }
  const std::vector<Vertex>& parent() const { return parent_; }

 private:
  bool open(Vertex v, Vertex p) const {
    return load_[static_cast<std::size_t>(p)] < bound_ && !reaches(parent_, p, v);
  }

  bool assign() {
    if (remaining_ == 0) return true;
    // Most constrained unassigned vertex; zero options means a dead end.
    Vertex pick = kNoVertex;
    int fewest = 0;
    for (Vertex v = 0; v < g_.n(); ++v) {
      if (v == g_.sink() || parent_[static_cast<std::size_t>(v)] != kNoVertex) continue;
      int options = 0;
      for (Vertex p : g_.out(v)) options += open(v, p);
      if (options == 0) return false;
      if (pick == kNoVertex || options < fewest) {
        pick = v;
        fewest = options;
      }
    }
    for (Vertex p : g_.out(pick)) {
      if (!open(pick, p)) continue;
      parent_[static_cast<std::size_t>(pick)] = p;
      ++load_[static_cast<std::size_t>(p)];
      --remaining_;
      if (assign()) return true;
      ++remaining_;
      --load_[static_cast<std::size_t>(p)];
      parent_[static_cast<std::size_t>(pick)] = kNoVertex;
    }
    return false;
  }

  const Digraph& g_;
  Degree bound_;
  std::vector<Vertex> parent_;
  std::vector<Degree> load_;
  Vertex remaining_;
};

}  // namespace detail

/// Spanning in-tree with every in-degree <= bound, if one exists.
inline std::optional<std::vector<Vertex>> tree_with_degree_at_most(const Digraph& g, Degree bound) {
  detail::DegreeBoundSearch search(g, bound);
  if (!search.run()) return std::nullopt;
  return search.parent();
}

/// Minimum possible maximum in-degree, by binary search over the bound with
/// a backtracking feasibility check.
inline ExactResult exact_min_degree(const Digraph& g, Vertex limit = 12) {
  if (g.n() > limit) throw OracleError(g.n(), limit);
  if (g.n() == 1) return {0, {kNoVertex}};
  Degree lo = 1, hi = g.n() - 1;
  auto best = tree_with_degree_at_most(g, hi);
  if (!best) throw std::logic_error("exact_min_degree: no spanning in-tree in a valid graph");
  while (lo < hi) {
    const Degree mid = lo + (hi - lo) / 2;
    if (auto tree = tree_with_degree_at_most(g, mid)) {
      best = std::move(tree);
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return {lo, std::move(*best)};
}

/// Calls `visit` with the parent array of every spanning in-tree, in
/// lexicographic order of (parent of vertex 0, parent of vertex 1, ...) with
/// each vertex's choices in out-list order. Stops after `cap` trees; returns
/// the number visited.
inline std::size_t for_each_spanning_intree(const Digraph& g, std::size_t cap,
                                            const std::function<void(const std::vector<Vertex>&)>& visit) {
  const Vertex n = g.n();
  std::vector<Vertex> parent(static_cast<std::size_t>(n), kNoVertex);
  std::size_t count = 0;
  std::function<void(Vertex)> go = [&](Vertex v) {
    if (count >= cap) return;
    if (v == n) {
      ++count;
      visit(parent);
      return;
    }
    if (v == g.sink()) {
      go(v + 1);
      return;
    }
    for (Vertex p : g.out(v)) {
      if (detail::reaches(parent, p, v)) continue;
      parent[static_cast<std::size_t>(v)] = p;
      go(v + 1);
      parent[static_cast<std::size_t>(v)] = kNoVertex;
      if (count >= cap) return;
    }
  };
  go(0);
  return count;
}

struct Enumeration {
  std::vector<std::vector<Vertex>> trees;
  bool hit_cap = false;
};

/// Every spanning in-tree of a graph with at most 9 vertices, up to `cap`.
inline Enumeration enumerate_spanning_intrees(const Digraph& g, std::size_t cap = 1'000'000) {
  if (g.n() > 9) throw OracleError(g.n(), 9);
  Enumeration out;
  // Ask for one more than cap to tell "exactly cap" from "truncated".
  for_each_spanning_intree(g, cap + 1, [&](const std::vector<Vertex>& p) {
    if (out.trees.size() < cap) out.trees.push_back(p);
    else out.hit_cap = true;
  });
  return out;
}

}  // namespace dmdst
