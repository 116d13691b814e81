#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <istream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace dmdst {

using Vertex = std::int32_t;
using Degree = std::int32_t;

inline constexpr Vertex kNoVertex = -1;

enum class GraphErrorKind {
  MalformedHeader,
  DuplicateEdge,
  SelfLoop,
  VertexOutOfRange,
  SinkUnreachable,
};

inline const char* to_string(GraphErrorKind kind) {
  switch (kind) {
    case GraphErrorKind::MalformedHeader: return "MalformedHeader";
    case GraphErrorKind::DuplicateEdge: return "DuplicateEdge";
    case GraphErrorKind::SelfLoop: return "SelfLoop";
    case GraphErrorKind::VertexOutOfRange: return "VertexOutOfRange";
    case GraphErrorKind::SinkUnreachable: return "SinkUnreachableFrom";
  }
  return "Unknown";
}

class GraphError : public std::runtime_error {
 public:
  GraphError(GraphErrorKind kind, std::string detail, int line = 0, Vertex vertex = kNoVertex)
      : std::runtime_error(format(kind, detail, line, vertex)),
        kind_(kind), line_(line), vertex_(vertex) {}

  GraphErrorKind kind() const noexcept { return kind_; }
  /// 1-based input line, 0 when the error is not tied to a line.
  int line() const noexcept { return line_; }
  Vertex vertex() const noexcept { return vertex_; }

 private:
  static std::string format(GraphErrorKind kind, const std::string& detail, int line, Vertex v) {
    std::string msg = to_string(kind);
    if (kind == GraphErrorKind::SinkUnreachable && v != kNoVertex) msg += "(" + std::to_string(v) + ")";
    if (line > 0) msg += " at line " + std::to_string(line);
    if (!detail.empty()) msg += ": " + detail;
    return msg;
  }

  GraphErrorKind kind_;
  int line_;
  Vertex vertex_;
};

/// Directed graph with a designated sink. An edge u->v means u may take v as
/// its parent in a spanning in-tree. Immutable once constructed; every
/// instance satisfies: no self-loops, no parallel edges, sink in range, and
/// the sink reachable from every vertex.
class Digraph {
 public:
  using Edge = std::pair<Vertex, Vertex>;

  /// Validates and builds. Out-edge order per vertex follows `edges` order.
  static Digraph from_edges(Vertex n, Vertex sink, const std::vector<Edge>& edges) {
    Digraph g(n, sink, edges, {});
    g.check_reachability();
    return g;
  }

  Vertex n() const noexcept { return n_; }
  std::size_t m() const noexcept { return edges_.size(); }
  Vertex sink() const noexcept { return sink_; }

  const std::vector<Vertex>& out(Vertex u) const { return out_[static_cast<std::size_t>(u)]; }
  /// Tails of edges into v, ordered by tail id then by the tail's out-edge order.
  const std::vector<Vertex>& in(Vertex v) const { return in_[static_cast<std::size_t>(v)]; }
  /// All edges in input order.
  const std::vector<Edge>& edges() const noexcept { return edges_; }

  bool has_edge(Vertex u, Vertex v) const {
    if (u < 0 || u >= n_) return false;
    const auto& s = sorted_out_[static_cast<std::size_t>(u)];
    return std::binary_search(s.begin(), s.end(), v);
  }

  friend bool operator==(const Digraph& a, const Digraph& b) {
    return a.n_ == b.n_ && a.sink_ == b.sink_ && a.edges_ == b.edges_;
  }

 private:
  friend Digraph parse_graph(std::istream& in);

  // edge_lines[i] is the 1-based source line of edges[i]; empty when built in memory.
  Digraph(Vertex n, Vertex sink, std::vector<Edge> edges, const std::vector<int>& edge_lines)
      : n_(n), sink_(sink), edges_(std::move(edges)) {
    auto line_of = [&](std::size_t i) { return edge_lines.empty() ? 0 : edge_lines[i]; };
    if (n_ < 1) throw GraphError(GraphErrorKind::MalformedHeader, "vertex count must be positive", edge_lines.empty() ? 0 : 2);
    if (sink_ < 0 || sink_ >= n_)
      throw GraphError(GraphErrorKind::VertexOutOfRange, "sink " + std::to_string(sink_) + " not in [0, n)",
                       edge_lines.empty() ? 0 : 2, sink_);
    const auto un = static_cast<std::size_t>(n_);
    out_.assign(un, {});
    in_.assign(un, {});
    sorted_out_.assign(un, {});
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      auto [u, v] = edges_[i];
      for (Vertex x : {u, v}) {
        if (x < 0 || x >= n_)
          throw GraphError(GraphErrorKind::VertexOutOfRange, "vertex " + std::to_string(x) + " not in [0, n)", line_of(i), x);
      }
      if (u == v) throw GraphError(GraphErrorKind::SelfLoop, "edge " + std::to_string(u) + " " + std::to_string(v), line_of(i), u);
      auto& s = sorted_out_[static_cast<std::size_t>(u)];
      auto it = std::lower_bound(s.begin(), s.end(), v);
      if (it != s.end() && *it == v)
        throw GraphError(GraphErrorKind::DuplicateEdge, "edge " + std::to_string(u) + " " + std::to_string(v), line_of(i), u);
      s.insert(it, v);
      out_[static_cast<std::size_t>(u)].push_back(v);
    }
    for (Vertex u = 0; u < n_; ++u)
      for (Vertex v : out_[static_cast<std::size_t>(u)]) in_[static_cast<std::size_t>(v)].push_back(u);
  }

  Vertex n_ = 0;
  Vertex sink_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> out_;
  std::vector<std::vector<Vertex>> in_;
  std::vector<std::vector<Vertex>> sorted_out_;

  void check_reachability() const;
};

/// Vertices with no directed path to the sink, ascending. One backward BFS.
inline std::vector<Vertex> unreachable_to_sink(const Digraph& g) {
  const auto un = static_cast<std::size_t>(g.n());
  std::vector<char> seen(un, 0);
  std::vector<Vertex> queue{g.sink()};
  seen[static_cast<std::size_t>(g.sink())] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (Vertex u : g.in(queue[head])) {
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        queue.push_back(u);
      }
    }
  }
  std::vector<Vertex> missing;
  for (Vertex v = 0; v < g.n(); ++v)
    if (!seen[static_cast<std::size_t>(v)]) missing.push_back(v);
  return missing;
}

inline void Digraph::check_reachability() const {
  auto missing = unreachable_to_sink(*this);
  if (!missing.empty())
    throw GraphError(GraphErrorKind::SinkUnreachable, "no directed path to sink " + std::to_string(sink_), 0, missing.front());
}

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  return s;
}

// Parses exactly `count` whitespace-separated integers; false on anything else.
inline bool parse_ints(std::string_view line, long long* out, int count) {
  std::istringstream ss{std::string(line)};
  for (int i = 0; i < count; ++i)
    if (!(ss >> out[i])) return false;
  std::string rest;
  return !(ss >> rest);
}

}  // namespace detail

/// Reads the line-oriented `dmdst 1` format:
///
///     dmdst 1
///     <n> <m> <sink>
///     <u> <v>        (m lines)
///
/// Lines starting with '#' and blank lines are skipped.
inline Digraph parse_graph(std::istream& in) {
  std::string raw;
  int line_no = 0;
  int stage = 0;
  long long header[3] = {0, 0, 0};
  std::vector<Digraph::Edge> edges;
  std::vector<int> lines;
  while (std::getline(in, raw)) {
    ++line_no;
    auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    if (stage == 0) {
      if (line != "dmdst 1") throw GraphError(GraphErrorKind::MalformedHeader, "expected magic 'dmdst 1'", line_no);
      stage = 1;
    } else if (stage == 1) {
      if (!detail::parse_ints(line, header, 3) || header[0] < 1 || header[1] < 0 || header[0] > INT32_MAX)
        throw GraphError(GraphErrorKind::MalformedHeader, "expected '<n> <m> <sink>'", line_no);
      edges.reserve(static_cast<std::size_t>(std::min<long long>(header[1], 1 << 24)));
      stage = 2;
    } else {
      long long uv[2];
      if (!detail::parse_ints(line, uv, 2)) throw GraphError(GraphErrorKind::MalformedHeader, "expected '<u> <v>'", line_no);
      if (static_cast<long long>(edges.size()) == header[1])
        throw GraphError(GraphErrorKind::MalformedHeader, "more edge lines than declared m=" + std::to_string(header[1]), line_no);
      for (long long x : uv)
        if (x < 0 || x >= header[0])
          throw GraphError(GraphErrorKind::VertexOutOfRange, "vertex " + std::to_string(x) + " not in [0, n)", line_no,
                           static_cast<Vertex>(std::clamp<long long>(x, INT32_MIN, INT32_MAX)));
      edges.emplace_back(static_cast<Vertex>(uv[0]), static_cast<Vertex>(uv[1]));
      lines.push_back(line_no);
    }
  }
  if (stage < 2) throw GraphError(GraphErrorKind::MalformedHeader, "missing header", line_no);
  if (static_cast<long long>(edges.size()) != header[1])
    throw GraphError(GraphErrorKind::MalformedHeader,
                     "declared m=" + std::to_string(header[1]) + " but found " + std::to_string(edges.size()) + " edges", line_no);
  Digraph g(static_cast<Vertex>(header[0]), static_cast<Vertex>(header[2]), std::move(edges), lines);
  g.check_reachability();
  return g;
}

inline Digraph parse_graph(std::string_view text) {
  std::istringstream ss{std::string(text)};
  return parse_graph(ss);
}

inline std::string serialize_graph(const Digraph& g) {
  std::string out = "dmdst 1\n";
  out += std::to_string(g.n()) + " " + std::to_string(g.m()) + " " + std::to_string(g.sink()) + "\n";
  for (auto [u, v] : g.edges()) {
    out += std::to_string(u);
    out += ' ';
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

}  // namespace dmdst
