#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dmdst/certificate.hpp"
#include "dmdst/config.hpp"
#include "dmdst/improvement.hpp"
#include "dmdst/report.hpp"
#include "dmdst/tree.hpp"

namespace dmdst {

struct LocalStepEvent {
  std::size_t iteration;
  Degree k;
  const ImprovementPath& path;
  const BigInt& psi;
  std::span<const Degree> degrees_before;
  const InTree& tree_after;
  const AdjustDelta& delta;
  const BigInt& phi_before;
  const BigInt& phi_after;
};

struct LocalSearchHooks {
  std::function<void(const LocalStepEvent&)> on_step;
};

namespace detail {

struct LocalWitness {
  BlockingCertificate cert;
  std::size_t not_improvable = 0;  // members of the unrelated set with no k-improvement path
};

inline LocalWitness local_witness(const InTree& t, Degree k) {
  LocalWitness w;
  w.cert.k = k;
  if (k < 1 || t.count(k) == 0) return w;
  for (Vertex u : unrelated_children(t, k)) {
    if (find_improvement_path(t, u, k)) continue;
    ++w.not_improvable;
    // Members of S_{k-1} stay in B, so U keeps only lower-degree vertices.
    if (t.deg(u) < k - 1) w.cert.U.push_back(u);
  }
  w.cert.B = t.at_least(k - 1);
  return w;
}

}  // namespace detail

/// Blocking certificate at a stalled class k: U is the set of unrelated
/// children of N_k with no k-improvement path (ignoring the psi gate) and
/// degree below k-1; B = S_{k-1}.
inline BlockingCertificate extract_local_certificate(const InTree& t, Degree k) {
  auto w = detail::local_witness(t, k);
  if (w.cert.U.empty()) throw CertificateError("no unimprovable unrelated child of N_" + std::to_string(k));
  return w.cert;
}

/// Improvement-path local search with potential sum_w 2^deg(w). Each round
/// targets k = argmax 2^d |N_d| and applies the first psi-gated candidate
/// (ascending id) that has a k-improvement path. Stops when the maximum
/// degree reaches the configured threshold or no gated candidate improves.
inline SolveReport run_local_search(const Digraph& g, const Config& cfg, const LocalSearchHooks& hooks = {}) {
  const auto started = std::chrono::steady_clock::now();
  SolveReport rep;
  rep.algorithm = Algorithm::Local;
  rep.config = resolve(cfg, g.n());
  rep.n = g.n();
  rep.m = g.m();
  InTree t = build_initial_tree(g);
  rep.delta_initial = t.max_deg();

  const double n = static_cast<double>(g.n());
  const double lg = log2_n(g.n());
  BigInt phi = t.potential2();
  const double iteration_cap = 8.0 * n * n * std::log(static_cast<double>(phi));
  const bool paper = rep.config.profile == Profile::Paper;

  std::vector<Degree> before;
  while (true) {
    if (t.max_deg() <= std::max(1.0, rep.config.stop_threshold_local)) {
      rep.termination = Termination::Threshold;
      break;
    }
    const Degree k = choose_k(t, 2.0);
    if (k < t.max_deg() - lg) throw InvariantViolation("choose_k below max degree - log n");

    std::vector<Vertex> candidates;
    for (Vertex r : t.members(k)) candidates.insert(candidates.end(), t.children(r).begin(), t.children(r).end());
    std::sort(candidates.begin(), candidates.end());
    const auto psis = psi_all(t, k);

    bool applied = false;
    for (Vertex u : candidates) {
      const BigInt& psi_u = psis[static_cast<std::size_t>(u)];
      if (!le_scaled_pow2(psi_u, rep.config.psi_factor, k)) continue;
      auto path = find_improvement_path(t, u, k);
      if (!path) continue;

      const std::size_t class_size = t.count(k);
      if (hooks.on_step) before = t.degrees();
      const AdjustDelta delta = apply_improvement_path(t, *path);
      const BigInt phi_after = phi + delta.potential2_change();
      // Par(u) sheds 2^(k-1); the endpoint gains at most 2^(k-2); T_u gains at most psi_u.
      if ((phi - phi_after) + psi_u < pow2(k - 2)) throw InvariantViolation("potential drop below 2^(k-2) - psi_u");
      if (phi_after >= phi) throw InvariantViolation("potential did not decrease");
      if (auto bad = t.validate(); !bad.empty()) throw InvariantViolation("tree invalid after improvement: " + bad.front().describe());

      ++rep.iterations;
      rep.potential_trace.push_back({rep.iterations, k, class_size, static_cast<double>(phi), static_cast<double>(phi_after)});
      if (hooks.on_step) hooks.on_step({rep.iterations, k, *path, psi_u, before, t, delta, phi, phi_after});
      phi = phi_after;
      if (static_cast<double>(rep.iterations) > iteration_cap) throw InvariantViolation("improvement count exceeds 8 n^2 ln(phi_0)");
      applied = true;
      break;
    }
    if (applied) continue;

    auto w = detail::local_witness(t, k);
    if (paper && g.n() >= 256 && 2 * w.not_improvable < static_cast<std::size_t>(k - 1) * t.count(k))
      throw InvariantViolation("fewer than (k-1)|N_k|/2 unimprovable unrelated children");
    if (w.cert.B.size() > 4 * t.count(k)) throw InvariantViolation("|S_{k-1}| exceeds 4|N_k|");
    if (w.cert.U.empty()) {
      rep.termination = Termination::NoWitness;
      break;
    }
    if (auto why = check_blocking(g, w.cert); why != BlockingFailure::None)
      throw InvariantViolation(std::string("local certificate failed verification: ") + to_string(why) + " (k=" +
                               std::to_string(k) + ", |U|=" + std::to_string(w.cert.U.size()) +
                               ", |B|=" + std::to_string(w.cert.B.size()) + ")");
    rep.lower_bound = w.cert.bound();
    rep.certificate = std::move(w.cert);
    rep.termination = Termination::Certificate;
    break;
  }

  rep.delta_final = t.max_deg();
  rep.parent = t.parents();
  rep.guarantee = paper && rep.termination != Termination::NoWitness ? Guarantee::Proved : Guarantee::Heuristic;
  rep.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return rep;
}

}  // namespace dmdst
