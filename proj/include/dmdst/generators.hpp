#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "dmdst/graph.hpp"

namespace dmdst {

class GeneratorError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Seeded source for every generator: std::mt19937_64 (fully specified by the
/// C++ standard) with rejection sampling for bounded draws, so the same seed
/// gives the same instance on every conforming platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    if (bound == 0) throw std::invalid_argument("Rng::below(0)");
    const std::uint64_t reject = (0 - bound) % bound;  // 2^64 mod bound
    std::uint64_t x;
    do x = engine_();
    while (x < reject);
    return x % bound;
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

namespace detail {

inline Digraph sorted_graph(Vertex n, std::vector<Digraph::Edge> edges) {
  std::sort(edges.begin(), edges.end());
  return Digraph::from_edges(n, 0, edges);
}

}  // namespace detail

/// Random backbone in-tree toward 0 plus `extra_edges` distinct random edges
/// off the backbone. Edges come out sorted.
inline Digraph gen_random(Vertex n, std::int64_t extra_edges, std::uint64_t seed) {
  if (n < 1) throw GeneratorError("gen_random: n must be >= 1");
  const std::int64_t pairs = static_cast<std::int64_t>(n) * (n - 1);
  const std::int64_t room = pairs - (n - 1);
  if (extra_edges < 0 || extra_edges > room)
    throw GeneratorError("TooManyEdges: " + std::to_string(extra_edges) + " > " + std::to_string(room));
  Rng rng(seed);
  std::vector<Vertex> order(static_cast<std::size_t>(n - 1));
  for (Vertex v = 1; v < n; ++v) order[static_cast<std::size_t>(v - 1)] = v;
  rng.shuffle(order);

  std::vector<Digraph::Edge> edges;
  std::unordered_set<std::uint64_t> used;
  auto key = [n](Vertex u, Vertex v) { return static_cast<std::uint64_t>(u) * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(v); };
  // Each vertex attaches to the sink or to one placed before it.
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto pick = rng.below(i + 1);
    const Vertex p = pick == 0 ? 0 : order[pick - 1];
    edges.emplace_back(order[i], p);
    used.insert(key(order[i], p));
  }

  if (extra_edges * 2 <= room) {
    while (static_cast<std::int64_t>(edges.size()) < n - 1 + extra_edges) {
      const auto u = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)));
      const auto v = static_cast<Vertex>(rng.below(static_cast<std::uint64_t>(n)));
      if (u == v || !used.insert(key(u, v)).second) continue;
      edges.emplace_back(u, v);
    }
  } else {
    std::vector<Digraph::Edge> pool;
    for (Vertex u = 0; u < n; ++u)
      for (Vertex v = 0; v < n; ++v)
        if (u != v && !used.count(key(u, v))) pool.emplace_back(u, v);
    // Partial Fisher-Yates: the first extra_edges slots are a uniform sample.
    for (std::int64_t i = 0; i < extra_edges; ++i) {
      const auto j = static_cast<std::size_t>(i) + rng.below(pool.size() - static_cast<std::size_t>(i));
      std::swap(pool[static_cast<std::size_t>(i)], pool[j]);
      edges.push_back(pool[static_cast<std::size_t>(i)]);
    }
  }
  return detail::sorted_graph(n, std::move(edges));
}

/// i -> i-1 for every i >= 1.
inline Digraph gen_path(Vertex n) {
  if (n < 1) throw GeneratorError("gen_path: n must be >= 1");
  std::vector<Digraph::Edge> edges;
  for (Vertex v = 1; v < n; ++v) edges.emplace_back(v, v - 1);
  return detail::sorted_graph(n, std::move(edges));
}

/// i -> 0 for every i >= 1.
inline Digraph gen_instar(Vertex n) {
  if (n < 1) throw GeneratorError("gen_instar: n must be >= 1");
  std::vector<Digraph::Edge> edges;
  for (Vertex v = 1; v < n; ++v) edges.emplace_back(v, 0);
  return detail::sorted_graph(n, std::move(edges));
}

/// Every ordered pair.
inline Digraph gen_complete(Vertex n) {
  if (n < 1) throw GeneratorError("gen_complete: n must be >= 1");
  std::vector<Digraph::Edge> edges;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = 0; v < n; ++v)
      if (u != v) edges.emplace_back(u, v);
  return detail::sorted_graph(n, std::move(edges));
}

/// Hub of degree k behind a chain of degree-(k-1) blockers.
///
/// Vertex 0 is the sink and 1 the hub (1 -> 0). Hub leaves a_1..a_k hang on
/// the hub; blockers b_1..b_fanout form a chain b_1 -> 0, b_j -> b_{j-1}.
/// Blocker b_j has k-2 leaf children (k-1 for the last), so every blocker
/// has degree k-1 in the breadth-first starting tree. Each hub leaf gets one
/// extra edge to a random blocker and each blocker leaf one extra edge to a
/// random leaf at the same or greater depth.
///
/// A hub leaf can only escape into a blocker, so relieving the hub takes an
/// augmenting path of two segments: a_i -> b_j, then a leaf of b_j -> some
/// other leaf.
inline Digraph gen_blocker(Degree k, Vertex fanout, std::uint64_t seed) {
  if (k < 3) throw GeneratorError("gen_blocker: k must be >= 3");
  if (fanout < 1) throw GeneratorError("gen_blocker: fanout must be >= 1");
  Rng rng(seed);
  std::vector<Digraph::Edge> edges;
  Vertex next = 2;
  const Vertex hub = 1;
  edges.emplace_back(hub, 0);

  struct Leaf {
    Vertex v;
    Vertex depth;
  };
  std::vector<Leaf> leaves;
  std::vector<Vertex> hub_leaves;
  for (Degree i = 0; i < k; ++i) {
    hub_leaves.push_back(next);
    leaves.push_back({next, 2});
    edges.emplace_back(next++, hub);
  }
  std::vector<Vertex> blockers;
  for (Vertex j = 0; j < fanout; ++j) {
    blockers.push_back(next);
    edges.emplace_back(next, j == 0 ? 0 : blockers[static_cast<std::size_t>(j - 1)]);
    ++next;
  }
  std::vector<Leaf> blocker_leaves;
  for (Vertex j = 0; j < fanout; ++j) {
    const Degree count = j + 1 == fanout ? k - 1 : k - 2;
    for (Degree i = 0; i < count; ++i) {
      blocker_leaves.push_back({next, j + 2});
      leaves.push_back({next, j + 2});
      edges.emplace_back(next++, blockers[static_cast<std::size_t>(j)]);
    }
  }

  for (Vertex a : hub_leaves) edges.emplace_back(a, blockers[rng.below(blockers.size())]);
  for (const Leaf& c : blocker_leaves) {
    std::vector<Vertex> targets;
    for (const Leaf& x : leaves)
      if (x.v != c.v && x.depth >= c.depth) targets.push_back(x.v);
    if (!targets.empty()) edges.emplace_back(c.v, targets[rng.below(targets.size())]);
  }
  return detail::sorted_graph(next, std::move(edges));
}

}  // namespace dmdst
