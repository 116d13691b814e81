#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "dmdst/certificate.hpp"
#include "dmdst/config.hpp"
#include "dmdst/improvement.hpp"
#include "dmdst/report.hpp"
#include "dmdst/tree.hpp"

namespace dmdst {

/// Sequence of segments u_i ~> v_i. Segment i chains into segment i+1
/// through v_i = Par(u_{i+1}); each segment's interior lies in T_{u_i}.
struct AugmentingPath {
  Degree k = 0;
  std::vector<std::vector<Vertex>> segments;
};

/// Per-vertex subtree aggregates for one tree snapshot.
struct SubtreeSummary {
  std::vector<Degree> max_deg;     // max degree inside T_v
  std::vector<double> potential;   // sum of base^deg over T_v
};

inline SubtreeSummary summarize_subtrees(const InTree& t, double base) {
  SubtreeSummary s;
  const auto n = static_cast<std::size_t>(t.n());
  s.max_deg.assign(n, 0);
  s.potential.assign(n, 0.0);
  for (Vertex v : t.postorder()) {
    const auto uv = static_cast<std::size_t>(v);
    s.max_deg[uv] = t.deg(v);
    s.potential[uv] = std::pow(base, t.deg(v));
    for (Vertex c : t.children(v)) {
      s.max_deg[uv] = std::max(s.max_deg[uv], s.max_deg[static_cast<std::size_t>(c)]);
      s.potential[uv] += s.potential[static_cast<std::size_t>(c)];
    }
  }
  return s;
}

/// Subtree-potential ceiling for starts at layer i: 0.9 eps / (1+eps)^i * c^(k-1).
inline double layer_budget(double epsilon, double c, Degree k, std::size_t i) {
  return 0.9 * epsilon / std::pow(1.0 + epsilon, static_cast<double>(i)) * std::pow(c, k - 1);
}

/// Search state for one class k: V_0 = N_k, then layers of start sets U_i
/// and discovered degree-(k-1) exits V_i.
struct LayeredState {
  Degree k = 0;
  std::vector<std::vector<Vertex>> levels_V;
  std::vector<std::vector<Vertex>> levels_U;  // levels_U[i-1] holds U_i
  std::vector<int> level_of;                  // V-level per vertex, -1 if none
  std::vector<std::vector<Vertex>> pred;      // for v in V_i, i >= 1: path u ~> v that found it
  std::size_t union_size = 0;

  static LayeredState start(const InTree& t, Degree k) {
    LayeredState st;
    st.k = k;
    st.level_of.assign(static_cast<std::size_t>(t.n()), -1);
    st.pred.assign(static_cast<std::size_t>(t.n()), {});
    std::vector<Vertex> v0(t.members(k).begin(), t.members(k).end());
    std::sort(v0.begin(), v0.end());
    for (Vertex v : v0) st.level_of[static_cast<std::size_t>(v)] = 0;
    st.union_size = v0.size();
    st.levels_V.push_back(std::move(v0));
    return st;
  }
};

/// U_i: children u of V_{i-1} members whose subtree avoids S_{k-2} and whose
/// subtree potential fits the layer budget. Ascending.
inline std::vector<Vertex> eligible_starts(const InTree& t, const LayeredState& st, std::size_t i, double epsilon, double c,
                                           const SubtreeSummary& sums) {
  if (i < 1 || i > st.levels_V.size()) throw std::invalid_argument("eligible_starts: level out of range");
  const double budget = layer_budget(epsilon, c, st.k, i);
  std::vector<Vertex> out;
  for (Vertex p : st.levels_V[i - 1]) {
    for (Vertex u : t.children(p)) {
      const auto uu = static_cast<std::size_t>(u);
      if (sums.max_deg[uu] < st.k - 2 && sums.potential[uu] <= budget) out.push_back(u);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::vector<Vertex> eligible_starts(const InTree& t, const LayeredState& st, std::size_t i, const ResolvedConfig& cfg) {
  return eligible_starts(t, st, i, cfg.epsilon, cfg.base_c, summarize_subtrees(t, cfg.base_c));
}

/// Every vertex x outside T_u reachable from u by a path whose other vertices
/// lie in T_u, mapped to a minimum-hop such path (u first, x last).
inline std::map<Vertex, std::vector<Vertex>> exit_set(const InTree& t, Vertex u, Degree k) {
  const auto in_sub = detail::subtree_mask(t, u);
  for (Vertex x : t.subtree(u))
    if (t.deg(x) >= k - 2) throw std::invalid_argument("exit_set: T_u meets S_{k-2}");
  const auto n = static_cast<std::size_t>(t.n());
  std::vector<Vertex> pred(n, kNoVertex);
  std::vector<char> seen(n, 0);
  std::vector<Vertex> queue{u};
  seen[static_cast<std::size_t>(u)] = 1;
  std::map<Vertex, std::vector<Vertex>> exits;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const Vertex x = queue[head];
    for (Vertex y : t.graph().out(x)) {
      const auto uy = static_cast<std::size_t>(y);
      if (seen[uy]) continue;
      seen[uy] = 1;
      pred[uy] = x;
      if (in_sub[uy]) {
        queue.push_back(y);
        continue;
      }
      std::vector<Vertex> path;
      for (Vertex z = y; z != kNoVertex; z = pred[static_cast<std::size_t>(z)]) path.push_back(z);
      std::reverse(path.begin(), path.end());
      exits.emplace(y, std::move(path));
    }
  }
  return exits;
}

struct FoundEndpoint {
  std::size_t level;  // l: the layer of the final start vertex
  Vertex u;
  Vertex x;
  std::vector<Vertex> path;
};

struct LayerComplete {
  std::vector<Vertex> added;  // V_i
};

/// Scans U_i in ascending order. Returns the first start with an exit of
/// degree <= k-2 (shortest path, then smallest exit id). Otherwise appends
/// V_i = (degree-(k-1) exits) minus earlier levels and records how each was
/// reached.
inline std::variant<FoundEndpoint, LayerComplete> extend_layer(const InTree& t, LayeredState& st, std::size_t i,
                                                              const std::vector<Vertex>& starts) {
  if (st.levels_V.size() != i || st.levels_U.size() + 1 != i) throw std::invalid_argument("extend_layer: wrong level");
  const Degree k = st.k;
  std::vector<Vertex> added;
  for (Vertex u : starts) {
    auto exits = exit_set(t, u, k);
    const std::vector<Vertex>* best = nullptr;
    for (const auto& [x, path] : exits)
      if (t.deg(x) <= k - 2 && (!best || path.size() < best->size())) best = &path;
    if (best) {
      st.levels_U.push_back(starts);
      return FoundEndpoint{i, u, best->back(), *best};
    }
    for (auto& [x, path] : exits) {
      const auto ux = static_cast<std::size_t>(x);
      if (t.deg(x) == k && st.level_of[ux] != 0) throw InvariantViolation("degree-k exit outside V_0");
      if (t.deg(x) != k - 1 || st.level_of[ux] != -1) continue;
      st.level_of[ux] = static_cast<int>(i);
      st.pred[ux] = std::move(path);
      added.push_back(x);
    }
  }
  std::sort(added.begin(), added.end());
  st.levels_U.push_back(starts);
  st.levels_V.push_back(added);
  st.union_size += added.size();
  return LayerComplete{std::move(added)};
}

/// Empty when `p` satisfies every augmenting-path property and the
/// potential-efficiency budget in `t`; otherwise the first failure.
inline std::string augmenting_path_problem(const InTree& t, const AugmentingPath& p, double epsilon, double c) {
  const Degree k = p.k;
  const std::size_t l = p.segments.size();
  if (l == 0) return "no segments";
  const auto n = static_cast<std::size_t>(t.n());
  std::vector<Vertex> us, vs;
  for (const auto& s : p.segments) {
    if (s.size() < 2) return "segment shorter than two vertices";
    for (Vertex x : s)
      if (x < 0 || x >= t.n()) return "vertex out of range";
    us.push_back(s.front());
    vs.push_back(s.back());
  }
  if (t.parent(us[0]) == kNoVertex || t.deg(t.parent(us[0])) != k) return "(iii) deg(Par(u_1)) != k";
  for (std::size_t i = 0; i + 1 < l; ++i) {
    if (t.parent(us[i + 1]) != vs[i]) return "(i) v_i != Par(u_{i+1})";
    if (t.deg(vs[i]) != k - 1) return "(iii) deg(v_i) != k-1";
  }
  if (t.deg(vs[l - 1]) > k - 1) return "(iii) deg(v_l) > k-1";
  for (std::size_t i = 0; i < l; ++i)
    for (std::size_t j = i + 1; j < l; ++j) {
      if (!t.unrelated(us[i], us[j])) return "(ii) starts related";
      if (vs[i] == vs[j]) return "(ii) ends repeat";
    }
  std::vector<int> seg_of(n, -1);
  for (std::size_t i = 0; i < l; ++i) {
    const auto& s = p.segments[i];
    const auto in_sub = detail::subtree_mask(t, s.front());
    double pot = 0.0;
    for (Vertex x : t.subtree(s.front())) {
      if (t.deg(x) >= k - 2) return "(iv) T_u meets S_{k-2}";
      pot += std::pow(c, t.deg(x));
    }
    if (pot > layer_budget(epsilon, c, k, i + 1)) return "subtree potential above budget";
    for (std::size_t j = 0; j + 1 < s.size(); ++j) {
      if (!in_sub[static_cast<std::size_t>(s[j])]) return "(v) path leaves T_u early";
      if (!t.graph().has_edge(s[j], s[j + 1])) return "missing edge";
    }
    if (in_sub[static_cast<std::size_t>(s.back())]) return "(v) end inside T_u";
    for (std::size_t j = 0; j + 1 < s.size(); ++j) {
      auto& owner = seg_of[static_cast<std::size_t>(s[j])];
      if (owner != -1) return "segments overlap";
      owner = static_cast<int>(i);
    }
  }
  // Ends may only coincide with another segment's vertex when it is v_l.
  for (std::size_t i = 0; i < l; ++i) {
    const int owner = seg_of[static_cast<std::size_t>(vs[i])];
    if (owner != -1 && i + 1 != l) return "v_i lies on another segment";
  }
  return {};
}

/// Walks pred links from the endpoint's layer back to V_0.
inline AugmentingPath reconstruct_path(const InTree& t, const LayeredState& st, const FoundEndpoint& end, double epsilon,
                                       double c) {
  AugmentingPath p;
  p.k = st.k;
  p.segments.push_back(end.path);
  for (std::size_t level = end.level; level > 1; --level) {
    const Vertex v = t.parent(p.segments.back().front());
    if (v == kNoVertex || st.level_of[static_cast<std::size_t>(v)] != static_cast<int>(level - 1))
      throw InvariantViolation("ValidationFailed: broken predecessor chain");
    p.segments.push_back(st.pred[static_cast<std::size_t>(v)]);
  }
  std::reverse(p.segments.begin(), p.segments.end());
  if (auto why = augmenting_path_problem(t, p, epsilon, c); !why.empty()) throw InvariantViolation("ValidationFailed: " + why);
  return p;
}

/// Rewrites every segment as in the single-path case. Needs deg(v_l) <= k-2.
/// Afterwards Par(u_1) has degree k-1, |N_k| is one smaller, and no class
/// above k grows.
inline AdjustDelta apply_augmenting_path(InTree& t, const AugmentingPath& p, double epsilon, double c) {
  if (auto why = augmenting_path_problem(t, p, epsilon, c); !why.empty()) throw TreeError(TreeErrorKind::StalePath, why);
  if (t.deg(p.segments.back().back()) > p.k - 2) throw TreeError(TreeErrorKind::StalePath, "deg(v_l) > k-2");
  auto delta = detail::rewrite_paths(t, p.segments);
  if (auto bad = t.validate(); !bad.empty()) throw InvariantViolation("tree invalid after augmentation: " + bad.front().describe());
  return delta;
}

/// Blocking certificate after the layer growth stalls: U = union of all U_j
/// (re-checked to have no exit of degree <= k-2), B = (union of V_j plus
/// S_{k+1}) minus U.
inline BlockingCertificate extract_augment_certificate(const InTree& t, const LayeredState& st) {
  BlockingCertificate cert;
  cert.k = st.k;
  for (const auto& level : st.levels_U) {
    for (Vertex u : level) {
      bool escapes = false;
      for (const auto& entry : exit_set(t, u, st.k)) escapes = escapes || t.deg(entry.first) <= st.k - 2;
      if (!escapes) cert.U.push_back(u);
    }
  }
  if (cert.U.empty()) throw CertificateError("no start vertex in any layer");
  std::sort(cert.U.begin(), cert.U.end());
  for (const auto& level : st.levels_V) cert.B.insert(cert.B.end(), level.begin(), level.end());
  for (Vertex v : t.at_least(st.k + 1)) cert.B.push_back(v);
  std::sort(cert.B.begin(), cert.B.end());
  cert.B.erase(std::unique(cert.B.begin(), cert.B.end()), cert.B.end());
  std::vector<Vertex> b;
  std::set_difference(cert.B.begin(), cert.B.end(), cert.U.begin(), cert.U.end(), std::back_inserter(b));
  cert.B = std::move(b);
  return cert;
}

struct AugmentStepEvent {
  std::size_t iteration;
  const AugmentingPath& path;
  std::span<const Degree> degrees_before;
  const InTree& tree_after;
  const AdjustDelta& delta;
};

struct AugmentHooks {
  std::function<void(const AugmentStepEvent&)> on_step;
  std::function<void(const LayeredState&)> on_layer;  // after each completed layer
};

/// Augmenting-path search with potential sum_w c^deg(w). Each round targets
/// k = argmax (c/2)^d |N_d| and grows layers from V_0 = N_k until an
/// endpoint of degree <= k-2 appears (apply and restart) or the union of
/// levels grows by less than a factor 1+eps (certify and stop).
inline SolveReport run_augmenting_search(const Digraph& g, const Config& cfg, const AugmentHooks& hooks = {}) {
  const auto started = std::chrono::steady_clock::now();
  SolveReport rep;
  rep.algorithm = Algorithm::Augment;
  rep.config = resolve(cfg, g.n());
  rep.n = g.n();
  rep.m = g.m();
  const double eps = rep.config.epsilon;
  const double c = rep.config.base_c;
  const bool paper = rep.config.profile == Profile::Paper;
  const double lg = log2_n(g.n());
  const double layer_cap = 10.0 / eps * std::max(lg, 1.0);

  InTree t = build_initial_tree(g);
  rep.delta_initial = t.max_deg();
  std::vector<Degree> before;

  while (true) {
    if (t.max_deg() <= std::max(1.0, rep.config.stop_threshold_aug)) {
      rep.termination = Termination::Threshold;
      break;
    }
    const Degree k = choose_k(t, c / 2.0);
    if (k < t.max_deg() - lg / std::log2(c / 2.0)) throw InvariantViolation("choose_k below max degree - log n / log(c/2)");

    auto st = LayeredState::start(t, k);
    const auto sums = summarize_subtrees(t, c);
    std::vector<int> start_owner(static_cast<std::size_t>(t.n()), -1);
    LayerRound round{rep.iterations + 1, k, {st.levels_V[0].size()}, {}, false};
    std::optional<FoundEndpoint> found;

    for (std::size_t i = 1;; ++i) {
      if (static_cast<double>(i) > layer_cap) throw InvariantViolation("layer count exceeds 10 log n / eps");
      auto starts = eligible_starts(t, st, i, eps, c, sums);
      for (Vertex u : starts) {
        for (Vertex x : t.subtree(u)) {
          auto& owner = start_owner[static_cast<std::size_t>(x)];
          if (owner != -1) throw InvariantViolation("start vertices are related");
          owner = u;
        }
      }
      if (paper && k > 2.0 * c * c / (eps * eps)) {
        const double need = (k - 2 - c * c / eps) * static_cast<double>(st.levels_V[i - 1].size());
        if (static_cast<double>(starts.size()) < need) throw InvariantViolation("|U_i| below (k-2-c^2/eps)|V_{i-1}|");
      }
      round.u_sizes.push_back(starts.size());
      const std::size_t union_before = st.union_size;
      auto step = extend_layer(t, st, i, starts);
      if (auto* f = std::get_if<FoundEndpoint>(&step)) {
        found = std::move(*f);
        break;
      }
      round.v_sizes.push_back(st.levels_V.back().size());
      if (hooks.on_layer) hooks.on_layer(st);
      if (static_cast<double>(st.union_size) < (1.0 + eps) * static_cast<double>(union_before)) break;
    }

    if (found) {
      const auto path = reconstruct_path(t, st, *found, eps, c);
      const std::size_t class_size = t.count(k);
      std::vector<std::size_t> above(static_cast<std::size_t>(t.max_deg()) + 1);
      for (Degree d = k + 1; d <= t.max_deg(); ++d) above[static_cast<std::size_t>(d)] = t.count(d);
      const Vertex top = t.parent(path.segments.front().front());
      if (hooks.on_step) before = t.degrees();
      const double phi_before = t.potential(c);
      const AdjustDelta delta = apply_augmenting_path(t, path, eps, c);

      if (t.deg(top) != k - 1) throw InvariantViolation("Par(u_1) did not drop to k-1");
      if (t.count(k) + 1 != class_size) throw InvariantViolation("|N_k| did not drop by exactly one");
      for (Degree d = k + 1; d < static_cast<Degree>(above.size()); ++d)
        if (t.count(d) > above[static_cast<std::size_t>(d)]) throw InvariantViolation("a class above k grew");
      const double change = delta.potential_change(c);
      if (!(change < 0.0)) throw InvariantViolation("potential did not decrease");
      if (c >= 100.0 && -change < 0.05 * std::pow(c, k)) throw InvariantViolation("potential drop below 0.05 c^k");

      ++rep.iterations;
      round.found = true;
      rep.layers_trace.push_back(std::move(round));
      rep.potential_trace.push_back({rep.iterations, k, class_size, phi_before, phi_before + change});
      if (hooks.on_step) hooks.on_step({rep.iterations, path, before, t, delta});
      continue;
    }

    rep.layers_trace.push_back(std::move(round));
    try {
      auto cert = extract_augment_certificate(t, st);
      if (auto why = check_blocking(g, cert); why != BlockingFailure::None)
        throw InvariantViolation(std::string("augment certificate failed verification: ") + to_string(why) + " (k=" +
                                 std::to_string(k) + ", |U|=" + std::to_string(cert.U.size()) +
                                 ", |B|=" + std::to_string(cert.B.size()) + ")");
      rep.lower_bound = cert.bound();
      rep.certificate = std::move(cert);
      rep.termination = Termination::Certificate;
    } catch (const CertificateError&) {
      rep.termination = Termination::NoWitness;
    }
    break;
  }

  rep.delta_final = t.max_deg();
  rep.parent = t.parents();
  rep.guarantee = paper && rep.termination != Termination::NoWitness ? Guarantee::Proved : Guarantee::Heuristic;
  rep.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return rep;
}

}  // namespace dmdst
