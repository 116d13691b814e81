#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmdst/exact.hpp"
#include "dmdst/graph.hpp"

namespace dmdst {

enum class TreeErrorKind { NotAnEdge, CutSink, ParentOutOfRange, EmptyDegreeClass, StalePath };

inline const char* to_string(TreeErrorKind k) {
  switch (k) {
    case TreeErrorKind::NotAnEdge: return "NotAnEdge";
    case TreeErrorKind::CutSink: return "CutSink";
    case TreeErrorKind::ParentOutOfRange: return "ParentOutOfRange";
    case TreeErrorKind::EmptyDegreeClass: return "EmptyDegreeClass";
    case TreeErrorKind::StalePath: return "StalePath";
  }
  return "Unknown";
}

class TreeError : public std::runtime_error {
 public:
  TreeError(TreeErrorKind kind, const std::string& detail)
      : std::runtime_error(std::string(to_string(kind)) + ": " + detail), kind_(kind) {}
  TreeErrorKind kind() const noexcept { return kind_; }

 private:
  TreeErrorKind kind_;
};

enum class ViolationKind {
  SizeMismatch,
  ParentOutOfRange,
  SinkHasParent,
  MissingParent,
  NotAnEdge,
  CycleDetected,
  DegreeMismatch,
  HistogramMismatch,
};

inline const char* to_string(ViolationKind k) {
  switch (k) {
    case ViolationKind::SizeMismatch: return "SizeMismatch";
    case ViolationKind::ParentOutOfRange: return "ParentOutOfRange";
    case ViolationKind::SinkHasParent: return "SinkHasParent";
    case ViolationKind::MissingParent: return "MissingParent";
    case ViolationKind::NotAnEdge: return "NotAnEdge";
    case ViolationKind::CycleDetected: return "CycleDetected";
    case ViolationKind::DegreeMismatch: return "DegreeMismatch";
    case ViolationKind::HistogramMismatch: return "HistogramMismatch";
  }
  return "Unknown";
}

struct Violation {
  ViolationKind kind;
  Vertex vertex = kNoVertex;
  std::string describe() const {
    std::string s = to_string(kind);
    if (vertex != kNoVertex) s += " at vertex " + std::to_string(vertex);
    return s;
  }
};

/// Checks a raw parent array (-1 at the sink) against `g`. Empty iff it is a
/// spanning in-tree of `g` rooted at the sink.
inline std::vector<Violation> validate_parents(const Digraph& g, std::span<const Vertex> parent) {
  std::vector<Violation> out;
  if (parent.size() != static_cast<std::size_t>(g.n())) {
    out.push_back({ViolationKind::SizeMismatch});
    return out;
  }
  const Vertex n = g.n();
  for (Vertex v = 0; v < n; ++v) {
    const Vertex p = parent[static_cast<std::size_t>(v)];
    if (v == g.sink()) {
      if (p != kNoVertex) out.push_back({ViolationKind::SinkHasParent, v});
    } else if (p == kNoVertex) {
      out.push_back({ViolationKind::MissingParent, v});
    } else if (p < 0 || p >= n) {
      out.push_back({ViolationKind::ParentOutOfRange, v});
    } else if (!g.has_edge(v, p)) {
      out.push_back({ViolationKind::NotAnEdge, v});
    }
  }
  if (!out.empty()) return out;
  // 0 = unvisited, 1 = on current walk, 2 = known to reach the sink
  std::vector<char> state(static_cast<std::size_t>(n), 0);
  state[static_cast<std::size_t>(g.sink())] = 2;
  std::vector<Vertex> walk;
  for (Vertex v = 0; v < n; ++v) {
    walk.clear();
    Vertex x = v;
    while (state[static_cast<std::size_t>(x)] == 0) {
      state[static_cast<std::size_t>(x)] = 1;
      walk.push_back(x);
      x = parent[static_cast<std::size_t>(x)];
    }
    if (state[static_cast<std::size_t>(x)] == 1) {
      out.push_back({ViolationKind::CycleDetected, x});
      return out;
    }
    for (Vertex w : walk) state[static_cast<std::size_t>(w)] = 2;
  }
  return out;
}

/// Mutable spanning in-tree rooted at the graph's sink, with O(1) degree
/// bookkeeping: per-vertex child lists, the degree histogram with member
/// lists, and the maximum degree. Holds a non-owning reference to its graph.
class InTree {
 public:
  /// Builds from a parent array without checking acyclicity; run validate()
  /// when the source is untrusted.
  static InTree from_parents(const Digraph& g, std::vector<Vertex> parent) {
    if (parent.size() != static_cast<std::size_t>(g.n()))
      throw TreeError(TreeErrorKind::ParentOutOfRange, "parent array has wrong length");
    InTree t(g);
    t.parent_ = std::move(parent);
    for (Vertex v = 0; v < g.n(); ++v) {
      const Vertex p = t.parent_[idx(v)];
      if (p < kNoVertex || p >= g.n() || p == v)
        throw TreeError(TreeErrorKind::ParentOutOfRange, "vertex " + std::to_string(v));
      if (p != kNoVertex) {
        t.child_pos_[idx(v)] = t.children_[idx(p)].size();
        t.children_[idx(p)].push_back(v);
      }
    }
    for (Vertex v = 0; v < g.n(); ++v) t.bucket_insert(v);
    return t;
  }

  const Digraph& graph() const noexcept { return *g_; }
  Vertex n() const noexcept { return g_->n(); }
  Vertex sink() const noexcept { return g_->sink(); }

  Vertex parent(Vertex v) const { return parent_[idx(v)]; }
  const std::vector<Vertex>& parents() const noexcept { return parent_; }
  const std::vector<Vertex>& children(Vertex v) const { return children_[idx(v)]; }
  Degree deg(Vertex v) const { return static_cast<Degree>(children_[idx(v)].size()); }
  Degree max_deg() const noexcept { return max_deg_; }

  /// |N_d|
  std::size_t count(Degree d) const {
    return d >= 0 && d < static_cast<Degree>(buckets_.size()) ? buckets_[idx(d)].size() : 0;
  }
  /// Members of N_d in unspecified order.
  std::span<const Vertex> members(Degree d) const {
    if (d < 0 || d >= static_cast<Degree>(buckets_.size())) return {};
    return buckets_[idx(d)];
  }
  /// S_d, ascending.
  std::vector<Vertex> at_least(Degree d) const {
    std::vector<Vertex> out;
    for (Degree e = std::max<Degree>(d, 0); e <= max_deg_; ++e) out.insert(out.end(), members(e).begin(), members(e).end());
    std::sort(out.begin(), out.end());
    return out;
  }

  std::vector<Degree> degrees() const {
    std::vector<Degree> d(idx(n()));
    for (Vertex v = 0; v < n(); ++v) d[idx(v)] = deg(v);
    return d;
  }

  /// Re-parents v under new_parent. Intermediate states of a multi-step
  /// rewrite may contain cycles; callers validate once the rewrite is done.
  void cut_and_append(Vertex v, Vertex new_parent) {
    if (v == sink()) throw TreeError(TreeErrorKind::CutSink, "cannot re-parent the sink");
    if (!g_->has_edge(v, new_parent))
      throw TreeError(TreeErrorKind::NotAnEdge, std::to_string(v) + " -> " + std::to_string(new_parent));
    const Vertex old = parent_[idx(v)];
    if (old == new_parent) return;
    if (old != kNoVertex) detach(v, old);
    bucket_remove(new_parent);
    child_pos_[idx(v)] = children_[idx(new_parent)].size();
    children_[idx(new_parent)].push_back(v);
    bucket_insert(new_parent);
    parent_[idx(v)] = new_parent;
  }

  /// u and its descendants, breadth-first.
  std::vector<Vertex> subtree(Vertex u) const {
    std::vector<Vertex> out{u};
    for (std::size_t i = 0; i < out.size(); ++i)
      for (Vertex c : children_[idx(out[i])]) out.push_back(c);
    return out;
  }

  /// True when a == v or a is a proper ancestor of v.
  bool is_ancestor(Vertex a, Vertex v) const {
    for (Vertex x = v, steps = 0; x != kNoVertex && steps <= n(); x = parent_[idx(x)], ++steps)
      if (x == a) return true;
    return false;
  }

  /// Disjoint subtrees: neither vertex is an ancestor of the other.
  bool unrelated(Vertex u, Vertex v) const { return !is_ancestor(u, v) && !is_ancestor(v, u); }

  std::vector<Degree> depths() const {
    std::vector<Degree> depth(idx(n()), 0);
    for (Vertex v : subtree(sink()))
      if (v != sink()) depth[idx(v)] = depth[idx(parent_[idx(v)])] + 1;
    return depth;
  }

  /// Every vertex after all of its descendants.
  std::vector<Vertex> postorder() const {
    auto order = subtree(sink());
    std::reverse(order.begin(), order.end());
    return order;
  }

  /// sum_w base^deg(w), from the histogram.
  double potential(double base) const {
    double total = 0.0;
    for (Degree d = 0; d <= max_deg_; ++d)
      if (count(d)) total += std::pow(base, d) * static_cast<double>(count(d));
    return total;
  }

  /// sum_w 2^deg(w), exactly.
  BigInt potential2() const {
    BigInt total = 0;
    for (Degree d = 0; d <= max_deg_; ++d)
      if (count(d)) total += pow2(d) * count(d);
    return total;
  }

  /// Structural invariants against the graph plus bookkeeping consistency.
  std::vector<Violation> validate() const {
    auto out = validate_parents(*g_, parent_);
    std::size_t total = 0;
    Degree top = 0;
    for (Vertex v = 0; v < n(); ++v) {
      const Vertex p = parent_[idx(v)];
      if (p != kNoVertex && (p < 0 || p >= n() || children_[idx(p)].size() <= child_pos_[idx(v)] ||
                             children_[idx(p)][child_pos_[idx(v)]] != v))
        out.push_back({ViolationKind::DegreeMismatch, v});
      const auto& b = buckets_[idx(deg(v))];
      if (bucket_pos_[idx(v)] >= b.size() || b[bucket_pos_[idx(v)]] != v)
        out.push_back({ViolationKind::HistogramMismatch, v});
      top = std::max(top, deg(v));
    }
    std::size_t child_total = 0;
    for (Vertex v = 0; v < n(); ++v) child_total += children_[idx(v)].size();
    for (const auto& b : buckets_) total += b.size();
    if (child_total + 1 != static_cast<std::size_t>(n()) && out.empty()) out.push_back({ViolationKind::DegreeMismatch});
    if (total != static_cast<std::size_t>(n()) || top != max_deg_) out.push_back({ViolationKind::HistogramMismatch});
    return out;
  }

 private:
  explicit InTree(const Digraph& g)
      : g_(&g),
        parent_(idx(g.n()), kNoVertex),
        children_(idx(g.n())),
        child_pos_(idx(g.n()), 0),
        buckets_(idx(g.n()) + 1),
        bucket_pos_(idx(g.n()), 0) {}

  friend InTree build_initial_tree(const Digraph& g);

  static std::size_t idx(std::int64_t v) { return static_cast<std::size_t>(v); }

  void detach(Vertex v, Vertex p) {
    bucket_remove(p);
    auto& siblings = children_[idx(p)];
    const std::size_t pos = child_pos_[idx(v)];
    siblings[pos] = siblings.back();
    child_pos_[idx(siblings[pos])] = pos;
    siblings.pop_back();
    bucket_insert(p);
    parent_[idx(v)] = kNoVertex;
  }

  void bucket_insert(Vertex v) {
    const Degree d = deg(v);
    bucket_pos_[idx(v)] = buckets_[idx(d)].size();
    buckets_[idx(d)].push_back(v);
    max_deg_ = std::max(max_deg_, d);
    // A single degree changes by one per call, so this drops at most one level.
    while (max_deg_ > 0 && buckets_[idx(max_deg_)].empty()) --max_deg_;
  }

  void bucket_remove(Vertex v) {
    auto& b = buckets_[idx(deg(v))];
    const std::size_t pos = bucket_pos_[idx(v)];
    b[pos] = b.back();
    bucket_pos_[idx(b[pos])] = pos;
    b.pop_back();
  }

  const Digraph* g_;
  std::vector<Vertex> parent_;
  std::vector<std::vector<Vertex>> children_;
  std::vector<std::size_t> child_pos_;
  std::vector<std::vector<Vertex>> buckets_;
  std::vector<std::size_t> bucket_pos_;
  Degree max_deg_ = 0;
};

/// Breadth-first from the sink over reversed edges; each vertex takes the
/// vertex that discovered it as parent.
inline InTree build_initial_tree(const Digraph& g) {
  std::vector<Vertex> parent(static_cast<std::size_t>(g.n()), kNoVertex);
  std::vector<char> seen(static_cast<std::size_t>(g.n()), 0);
  std::vector<Vertex> queue{g.sink()};
  seen[static_cast<std::size_t>(g.sink())] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex x = queue[head];
    for (Vertex u : g.in(x)) {
      if (seen[static_cast<std::size_t>(u)]) continue;
      seen[static_cast<std::size_t>(u)] = 1;
      parent[static_cast<std::size_t>(u)] = x;
      queue.push_back(u);
    }
  }
  return InTree::from_parents(g, std::move(parent));
}

/// A pairwise-unrelated set of vertices whose parents lie in N_d, of size at
/// least (d-1)|N_d| + 1. Members of N_d are taken shallowest first (ties by
/// id); each contributes all of its children and evicts the single current
/// member that is itself or its ancestor, if any.
inline std::vector<Vertex> unrelated_children(const InTree& t, Degree d) {
  if (d < 1) throw std::invalid_argument("unrelated_children: degree must be >= 1");
  if (t.count(d) == 0) throw TreeError(TreeErrorKind::EmptyDegreeClass, "N_" + std::to_string(d) + " is empty");
  const auto depth = t.depths();
  std::vector<Vertex> order(t.members(d).begin(), t.members(d).end());
  std::sort(order.begin(), order.end(), [&](Vertex a, Vertex b) {
    const auto da = depth[static_cast<std::size_t>(a)], db = depth[static_cast<std::size_t>(b)];
    return da != db ? da < db : a < b;
  });
  std::vector<char> in_set(static_cast<std::size_t>(t.n()), 0);
  std::size_t size = 0;
  for (Vertex r : order) {
    for (Vertex x = r; x != kNoVertex; x = t.parent(x)) {
      if (in_set[static_cast<std::size_t>(x)]) {
        in_set[static_cast<std::size_t>(x)] = 0;
        --size;
        break;  // members are pairwise unrelated, so at most one lies on this chain
      }
    }
    for (Vertex c : t.children(r)) {
      in_set[static_cast<std::size_t>(c)] = 1;
      ++size;
    }
  }
  std::vector<Vertex> out;
  out.reserve(size);
  for (Vertex v = 0; v < t.n(); ++v)
    if (in_set[static_cast<std::size_t>(v)]) out.push_back(v);
  if (out.size() < static_cast<std::size_t>(d - 1) * t.count(d) + 1)
    throw std::logic_error("unrelated_children: size bound violated");
  return out;
}

}  // namespace dmdst
