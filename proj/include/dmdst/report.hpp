#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmdst/certificate.hpp"
#include "dmdst/config.hpp"
#include "dmdst/graph.hpp"

namespace dmdst {

enum class Algorithm { Local, Augment, Exact };
enum class Guarantee { Proved, Heuristic };

/// Why a solver stopped.
enum class Termination {
  Threshold,    // max degree fell to the loop threshold
  Certificate,  // no admissible move; a verified blocking certificate exists
  NoWitness,    // no admissible move, but the witness set came out empty
  Exact,        // exhaustive search
};

inline const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Local: return "local";
    case Algorithm::Augment: return "augment";
    case Algorithm::Exact: return "exact";
  }
  return "unknown";
}

inline const char* to_string(Guarantee g) { return g == Guarantee::Proved ? "proved" : "heuristic"; }

inline const char* to_string(Termination t) {
  switch (t) {
    case Termination::Threshold: return "threshold";
    case Termination::Certificate: return "certificate";
    case Termination::NoWitness: return "no_witness";
    case Termination::Exact: return "exact";
  }
  return "unknown";
}

/// One applied improvement: the class it targeted and the potential before
/// and after (base 2 for the local search, base c for augmenting paths).
struct PotentialStep {
  std::size_t iteration = 0;
  Degree k = 0;
  std::size_t class_size = 0;  // |N_k| before the move
  double phi_before = 0.0;
  double phi_after = 0.0;
};

/// Layer sizes of one augmenting-path search round.
struct LayerRound {
  std::size_t iteration = 0;
  Degree k = 0;
  std::vector<std::size_t> v_sizes;  // |V_0|, |V_1|, ...
  std::vector<std::size_t> u_sizes;  // |U_1|, |U_2|, ...
  bool found = false;                // ended with an applied augmenting path
};

struct SolveReport {
  Algorithm algorithm = Algorithm::Local;
  ResolvedConfig config;
  Vertex n = 0;
  std::size_t m = 0;
  Degree delta_initial = 0;
  Degree delta_final = 0;
  std::optional<Rational> lower_bound;
  std::optional<BlockingCertificate> certificate;
  std::size_t iterations = 0;
  std::vector<PotentialStep> potential_trace;
  std::vector<LayerRound> layers_trace;
  std::vector<Vertex> parent;
  double wall_time_ms = 0.0;
  Guarantee guarantee = Guarantee::Heuristic;
  Termination termination = Termination::NoWitness;
};

}  // namespace dmdst
