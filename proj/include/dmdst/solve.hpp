#pragma once

#include <chrono>
#include <stdexcept>
#include <string_view>

#include "dmdst/augmenting.hpp"
#include "dmdst/config.hpp"
#include "dmdst/local_search.hpp"
#include "dmdst/oracle.hpp"
#include "dmdst/report.hpp"

namespace dmdst {

inline Algorithm parse_algorithm(std::string_view s) {
  if (s == "local") return Algorithm::Local;
  if (s == "augment") return Algorithm::Augment;
  if (s == "exact") return Algorithm::Exact;
  throw std::invalid_argument("unknown algorithm '" + std::string(s) + "'");
}

/// Exhaustive optimum as a report; the lower bound is the optimum itself.
inline SolveReport run_exact(const Digraph& g, const Config& cfg, Vertex limit = 12) {
  const auto started = std::chrono::steady_clock::now();
  SolveReport rep;
  rep.algorithm = Algorithm::Exact;
  rep.config = resolve(cfg, g.n());
  rep.n = g.n();
  rep.m = g.m();
  rep.delta_initial = build_initial_tree(g).max_deg();
  auto best = exact_min_degree(g, limit);
  rep.delta_final = best.delta;
  rep.lower_bound = Rational{best.delta, 1};
  rep.parent = std::move(best.parent);
  rep.guarantee = Guarantee::Proved;
  rep.termination = Termination::Exact;
  rep.wall_time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  return rep;
}

inline SolveReport solve(const Digraph& g, Algorithm algo, const Config& cfg) {
  switch (algo) {
    case Algorithm::Local: return run_local_search(g, cfg);
    case Algorithm::Augment: return run_augmenting_search(g, cfg);
    case Algorithm::Exact: return run_exact(g, cfg);
  }
  throw std::invalid_argument("unknown algorithm");
}

}  // namespace dmdst
