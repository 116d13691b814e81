#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "dmdst/graph.hpp"

namespace dmdst {

/// Exact ratio of two counts; not reduced, so num/den stay |U|/|B|.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  /// Smallest integer >= num/den.
  std::int64_t ceil() const { return (num + den - 1) / den; }
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// Whether the integer `d` is at least the ratio, exactly.
inline bool at_least(std::int64_t d, const Rational& r) { return d * r.den >= r.num; }

/// A pair (U, B) such that B blocks U: every path from U to the sink enters
/// B, and paths from distinct members of U meet only after entering B.
/// Any spanning in-tree then has a B vertex of in-degree >= |U|/|B|.
struct BlockingCertificate {
  std::vector<Vertex> U;  // ascending
  std::vector<Vertex> B;  // ascending
  Degree k = 0;

  Rational bound() const {
    return {static_cast<std::int64_t>(U.size()), static_cast<std::int64_t>(B.size())};
  }
  friend bool operator==(const BlockingCertificate&, const BlockingCertificate&) = default;
};

enum class CertificateErrorKind { EmptyWitness };

class CertificateError : public std::runtime_error {
 public:
  explicit CertificateError(const std::string& detail) : std::runtime_error("EmptyWitness: " + detail) {}
  CertificateErrorKind kind() const noexcept { return CertificateErrorKind::EmptyWitness; }
};

enum class BlockingFailure {
  None,
  EmptyU,
  EmptyB,
  OutOfRange,
  SinkInU,
  Overlap,        // U and B intersect, or a set repeats a vertex
  SinkReachable,  // some u reaches the sink avoiding B
  PathsMeet,      // two members of U reach a common vertex avoiding B
};

inline const char* to_string(BlockingFailure f) {
  switch (f) {
    case BlockingFailure::None: return "None";
    case BlockingFailure::EmptyU: return "EmptyU";
    case BlockingFailure::EmptyB: return "EmptyB";
    case BlockingFailure::OutOfRange: return "OutOfRange";
    case BlockingFailure::SinkInU: return "SinkInU";
    case BlockingFailure::Overlap: return "Overlap";
    case BlockingFailure::SinkReachable: return "SinkReachable";
    case BlockingFailure::PathsMeet: return "PathsMeet";
  }
  return "Unknown";
}

/// Checks the certificate on G - B alone, independent of any solver state:
/// the sink is unreachable from every u, and the reachable sets of distinct
/// members of U are pairwise disjoint. Linear time on success.
inline BlockingFailure check_blocking(const Digraph& g, const BlockingCertificate& cert) {
  if (cert.U.empty()) return BlockingFailure::EmptyU;
  if (cert.B.empty()) return BlockingFailure::EmptyB;
  const auto n = static_cast<std::size_t>(g.n());
  // 1 = in B, 2 = in U
  std::vector<char> role(n, 0);
  for (Vertex b : cert.B) {
    if (b < 0 || b >= g.n()) return BlockingFailure::OutOfRange;
    if (role[static_cast<std::size_t>(b)]) return BlockingFailure::Overlap;
    role[static_cast<std::size_t>(b)] = 1;
  }
  for (Vertex u : cert.U) {
    if (u < 0 || u >= g.n()) return BlockingFailure::OutOfRange;
    if (u == g.sink()) return BlockingFailure::SinkInU;
    if (role[static_cast<std::size_t>(u)]) return BlockingFailure::Overlap;
    role[static_cast<std::size_t>(u)] = 2;
  }
  std::vector<std::int32_t> owner(n, -1);
  std::vector<Vertex> queue;
  for (std::size_t i = 0; i < cert.U.size(); ++i) {
    const Vertex u = cert.U[i];
    const auto tag = static_cast<std::int32_t>(i);
    if (owner[static_cast<std::size_t>(u)] != -1) return BlockingFailure::PathsMeet;
    owner[static_cast<std::size_t>(u)] = tag;
    queue.assign(1, u);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const Vertex x = queue[head];
      if (x == g.sink()) return BlockingFailure::SinkReachable;
      for (Vertex y : g.out(x)) {
        const auto uy = static_cast<std::size_t>(y);
        if (role[uy] == 1 || owner[uy] == tag) continue;
        if (owner[uy] != -1) return BlockingFailure::PathsMeet;
        owner[uy] = tag;
        queue.push_back(y);
      }
    }
  }
  return BlockingFailure::None;
}

inline bool verify_blocking(const Digraph& g, const BlockingCertificate& cert) {
  return check_blocking(g, cert) == BlockingFailure::None;
}

}  // namespace dmdst
