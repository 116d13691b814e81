#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dmdst/graph.hpp"
#include "dmdst/json_io.hpp"

namespace dmdst::cli {

// Exit codes shared by every command.
inline constexpr int kOk = 0;
inline constexpr int kVerifyFailed = 1;
inline constexpr int kBadInput = 2;
inline constexpr int kInternal = 3;

struct GenerateArgs {
  std::string family = "random";
  Vertex n = 10;
  std::uint64_t seed = 1;
  std::optional<std::int64_t> extra;  // random: default 2n, capped at the maximum
  Degree k = 3;                       // blocker
  Vertex fanout = 2;                  // blocker
};

struct SolveArgs {
  std::string algo = "augment";
  std::string profile = "practical";
  double epsilon = 0.1;
  std::uint64_t seed = 0;
  std::optional<double> psi_factor;
  bool trace = false;
  bool timing = false;
};

struct BenchArgs {
  std::vector<std::string> families{"random"};
  std::vector<Vertex> sizes{10, 50};
  std::vector<std::uint64_t> seeds{1};
  std::vector<std::string> algos{"local", "augment"};
  std::string profile = "practical";
  double epsilon = 0.1;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// Applies DMDST_SEED when set; throws std::invalid_argument if it is not a
/// non-negative integer.
std::uint64_t effective_seed(std::uint64_t flag_value);

Digraph generate(const GenerateArgs& a);

/// Report JSON for one solve. Throws InvariantViolation on internal failure.
Json solve_to_json(const Digraph& g, const SolveArgs& a);

/// Empty when the report is consistent with the graph, else the first
/// violation, named.
std::string verify_report(const Digraph& g, const Json& report);

struct BenchRow {
  std::string family;
  Vertex n = 0;
  std::uint64_t seed = 0;
  std::string algo;
  Json report;
  std::optional<Degree> oracle;
  double gap = 0.0;
};

std::vector<BenchRow> run_bench(const BenchArgs& a);
Json bench_to_json(const std::vector<BenchRow>& rows);
std::string bench_to_text(const std::vector<BenchRow>& rows);

/// Full command-line entry point; argv[0] is the program name.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dmdst::cli
