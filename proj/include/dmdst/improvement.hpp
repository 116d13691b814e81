#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmdst/exact.hpp"
#include "dmdst/tree.hpp"

namespace dmdst {

/// Thrown when a solver-internal guarantee fails. Always a bug.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Simple path u = w_1, ..., w_h = w: w is the first vertex outside T_u and
/// every vertex but u has degree <= d - 2, where d = deg(Par(u)).
struct ImprovementPath {
  Degree d = 0;
  std::vector<Vertex> vertices;
  friend bool operator==(const ImprovementPath&, const ImprovementPath&) = default;
};

struct DegreeChange {
  Vertex v;
  Degree before;
  Degree after;
};

/// Degree changes of every vertex touched by one tree adjustment.
struct AdjustDelta {
  std::vector<DegreeChange> changes;

  /// sum over touched vertices of 2^after - 2^before, exactly.
  BigInt potential2_change() const {
    BigInt total = 0;
    for (const auto& c : changes) total += pow2(c.after) - pow2(c.before);
    return total;
  }
  double potential_change(double base) const {
    double total = 0.0;
    for (const auto& c : changes) total += std::pow(base, c.after) - std::pow(base, c.before);
    return total;
  }
};

namespace detail {

inline std::vector<char> subtree_mask(const InTree& t, Vertex u) {
  std::vector<char> mask(static_cast<std::size_t>(t.n()), 0);
  for (Vertex x : t.subtree(u)) mask[static_cast<std::size_t>(x)] = 1;
  return mask;
}

// Reroutes each path so that w_j hangs below w_{j+1}; returns the audit of
// every vertex whose degree could have moved.
inline AdjustDelta rewrite_paths(InTree& t, const std::vector<std::vector<Vertex>>& paths) {
  std::vector<Vertex> touched;
  for (const auto& p : paths) {
    for (std::size_t j = 0; j < p.size(); ++j) {
      touched.push_back(p[j]);
      if (j + 1 < p.size() && t.parent(p[j]) != kNoVertex) touched.push_back(t.parent(p[j]));
    }
  }
  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  AdjustDelta delta;
  for (Vertex v : touched) delta.changes.push_back({v, t.deg(v), 0});
  for (const auto& p : paths)
    for (std::size_t j = p.size() - 1; j-- > 0;) t.cut_and_append(p[j], p[j + 1]);
  for (auto& c : delta.changes) c.after = t.deg(c.v);
  return delta;
}

}  // namespace detail

/// Minimum-hop d-improvement path from u, by breadth-first search through
/// T_u over vertices of degree <= d - 2; nullopt if none exists.
inline std::optional<ImprovementPath> find_improvement_path(const InTree& t, Vertex u, Degree d) {
  const Vertex p = t.parent(u);
  if (p == kNoVertex || t.deg(p) != d)
    throw std::invalid_argument("find_improvement_path: deg(Par(u)) must equal d");
  if (d < 2) return std::nullopt;
  const Degree cap = d - 2;
  const auto in_sub = detail::subtree_mask(t, u);
  const auto un = static_cast<std::size_t>(t.n());
  std::vector<Vertex> pred(un, kNoVertex);
  std::vector<char> seen(un, 0);
  std::vector<Vertex> queue{u};
  seen[static_cast<std::size_t>(u)] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex x = queue[head];
    for (Vertex y : t.graph().out(x)) {
      const auto uy = static_cast<std::size_t>(y);
      if (seen[uy] || t.deg(y) > cap) continue;
      seen[uy] = 1;
      pred[uy] = x;
      if (!in_sub[uy]) {
        ImprovementPath path{d, {}};
        for (Vertex z = y; z != kNoVertex; z = pred[static_cast<std::size_t>(z)]) path.vertices.push_back(z);
        std::reverse(path.vertices.begin(), path.vertices.end());
        return path;
      }
      queue.push_back(y);
    }
  }
  return std::nullopt;
}

/// Empty when `p` is still a d-improvement path in `t`; else the first
/// reason it is not.
inline std::string improvement_path_problem(const InTree& t, const ImprovementPath& p) {
  const auto& w = p.vertices;
  if (w.size() < 2) return "path shorter than two vertices";
  const Vertex u = w.front();
  if (u < 0 || u >= t.n() || t.parent(u) == kNoVertex) return "start has no parent";
  if (t.deg(t.parent(u)) != p.d) return "deg(Par(u)) != d";
  std::vector<char> on(static_cast<std::size_t>(t.n()), 0);
  for (Vertex x : w) {
    if (x < 0 || x >= t.n()) return "vertex out of range";
    if (on[static_cast<std::size_t>(x)]++) return "path not simple";
  }
  const auto in_sub = detail::subtree_mask(t, u);
  for (std::size_t j = 0; j + 1 < w.size(); ++j) {
    if (!t.graph().has_edge(w[j], w[j + 1])) return "missing edge";
    if (!in_sub[static_cast<std::size_t>(w[j])]) return "leaves T_u before the end";
  }
  if (in_sub[static_cast<std::size_t>(w.back())]) return "end lies inside T_u";
  for (std::size_t j = 1; j < w.size(); ++j)
    if (t.deg(w[j]) > p.d - 2) return "vertex degree above d-2";
  return {};
}

/// Reroutes T along the path: Par(u) loses exactly one child, other path
/// vertices gain at most one, everything else is untouched.
inline AdjustDelta apply_improvement_path(InTree& t, const ImprovementPath& p) {
  if (auto why = improvement_path_problem(t, p); !why.empty()) throw TreeError(TreeErrorKind::StalePath, why);
  return detail::rewrite_paths(t, {p.vertices});
}

/// argmax over occupied degree classes of base^d * counts[d], ties toward
/// larger d. Base 2 is compared exactly.
inline Degree choose_k(std::span<const std::size_t> counts, double base) {
  Degree best = -1;
  double best_log = 0.0;
  for (Degree d = 0; d < static_cast<Degree>(counts.size()); ++d) {
    const std::size_t c = counts[static_cast<std::size_t>(d)];
    if (c == 0) continue;
    const double score = d * std::log(base) + std::log(static_cast<double>(c));
    bool better = best < 0;
    if (!better && base == 2.0) {
      // c * 2^d >= c_best * 2^best with d > best  <=>  c << (d - best) >= c_best
      const int shift = d - best;
      better = shift >= 32 || (static_cast<std::uint64_t>(c) << shift) >= counts[static_cast<std::size_t>(best)];
    } else if (!better) {
      better = score >= best_log - 1e-12 * std::max(1.0, std::abs(best_log));
    }
    if (better) {
      best = d;
      best_log = score;
    }
  }
  if (best < 0) throw std::invalid_argument("choose_k: empty histogram");
  return best;
}

inline Degree choose_k(const InTree& t, double base) {
  if (t.n() < 2) throw std::invalid_argument("choose_k: need n >= 2");
  std::vector<std::size_t> counts(static_cast<std::size_t>(t.max_deg()) + 1);
  for (Degree d = 0; d <= t.max_deg(); ++d) counts[static_cast<std::size_t>(d)] = t.count(d);
  return choose_k(counts, base);
}

/// sum of 2^deg(v) over v in T_u with deg(v) <= k - 2.
inline BigInt psi(const InTree& t, Vertex u, Degree k) {
  BigInt total = 0;
  for (Vertex v : t.subtree(u))
    if (t.deg(v) <= k - 2) total += pow2(t.deg(v));
  return total;
}

/// psi(t, u, k) for every u at once, by one postorder pass.
inline std::vector<BigInt> psi_all(const InTree& t, Degree k) {
  std::vector<BigInt> out(static_cast<std::size_t>(t.n()));
  for (Vertex v : t.postorder()) {
    auto& s = out[static_cast<std::size_t>(v)];
    if (t.deg(v) <= k - 2) s += pow2(t.deg(v));
    for (Vertex c : t.children(v)) s += out[static_cast<std::size_t>(c)];
  }
  return out;
}

}  // namespace dmdst
