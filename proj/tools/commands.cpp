#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "dmdst/generators.hpp"
#include "dmdst/solve.hpp"

namespace dmdst::cli {

std::uint64_t effective_seed(std::uint64_t flag_value) {
  const char* env = std::getenv("DMDST_SEED");
  if (!env || !*env) return flag_value;
  const std::string s(env);
  if (!std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
    throw std::invalid_argument("DMDST_SEED must be a non-negative integer, got '" + s + "'");
  try {
    return std::stoull(s);
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("DMDST_SEED out of range: '" + s + "'");
  }
}

Digraph generate(const GenerateArgs& a) {
  const std::uint64_t seed = effective_seed(a.seed);
  if (a.family == "random") {
    const std::int64_t n = a.n;
    const std::int64_t room = n * (n - 1) - (n - 1);
    return gen_random(a.n, a.extra.value_or(std::min<std::int64_t>(2 * n, std::max<std::int64_t>(room, 0))), seed);
  }
  if (a.family == "path") return gen_path(a.n);
  if (a.family == "instar") return gen_instar(a.n);
  if (a.family == "complete") return gen_complete(a.n);
  if (a.family == "blocker") return gen_blocker(a.k, a.fanout, seed);
  throw std::invalid_argument("unknown family '" + a.family + "'");
}

namespace {

Config make_config(const std::string& profile, double epsilon, std::optional<double> psi, std::uint64_t seed) {
  Config cfg;
  cfg.profile = parse_profile(profile);
  cfg.epsilon = epsilon;
  if (psi) cfg.psi_factor = *psi;
  cfg.rng_seed = seed;
  return cfg;
}

}  // namespace

Json solve_to_json(const Digraph& g, const SolveArgs& a) {
  const Config cfg = make_config(a.profile, a.epsilon, a.psi_factor, effective_seed(a.seed));
  const SolveReport rep = solve(g, parse_algorithm(a.algo), cfg);
  return report_to_json(rep, {a.trace, a.timing});
}

std::string verify_report(const Digraph& g, const Json& report) {
  ReportClaims c;
  try {
    c = claims_from_json(report);
  } catch (const ReportFormatError& e) {
    return std::string("MalformedReport: ") + e.what();
  }
  if (c.n != g.n()) return "SizeMismatch: report n=" + std::to_string(c.n) + ", graph n=" + std::to_string(g.n());
  if (auto bad = validate_parents(g, c.parent); !bad.empty()) return bad.front().describe();
  std::vector<Degree> deg(static_cast<std::size_t>(g.n()), 0);
  for (Vertex p : c.parent)
    if (p != kNoVertex) ++deg[static_cast<std::size_t>(p)];
  const Degree actual = g.n() > 0 ? *std::max_element(deg.begin(), deg.end()) : 0;
  if (actual != c.delta_final)
    return "DeltaMismatch: delta_final=" + std::to_string(c.delta_final) + ", tree has " + std::to_string(actual);
  if (c.certificate) {
    if (!c.certificate_verified) return "CertificateUnverified";
    const auto why = check_blocking(g, *c.certificate);
    if (why != BlockingFailure::None) return std::string("CertificateInvalid: ") + to_string(why);
    const Rational b = c.certificate->bound();
    if (!(c.certificate_bound == b) || !(c.lower_bound && *c.lower_bound == b))
      return "BoundMismatch: certificate has |U|/|B| = " + std::to_string(b.num) + "/" + std::to_string(b.den);
  }
  if (c.lower_bound && !at_least(c.delta_final, *c.lower_bound)) return "BoundAboveDelta";
  return {};
}

std::vector<BenchRow> run_bench(const BenchArgs& a) {
  if (a.families.empty() || a.sizes.empty() || a.seeds.empty() || a.algos.empty())
    throw std::invalid_argument("bench matrix has an empty axis");
  for (const auto& al : a.algos) parse_algorithm(al);
  parse_profile(a.profile);

  struct Job {
    std::string family;
    Vertex n;
    std::uint64_t seed;
    std::string algo;
  };
  std::vector<Job> jobs;
  for (const auto& f : a.families)
    for (Vertex n : a.sizes)
      for (std::uint64_t s : a.seeds)
        for (const auto& al : a.algos) {
          if (n < 1) throw std::invalid_argument("bench sizes must be positive");
          // For the blocker family the size axis is the fanout; k stays 3.
          const Vertex real_n = f == "blocker" ? generate({f, n, s, std::nullopt, 3, n}).n() : n;
          if (al == "exact" && real_n > 12) continue;
          jobs.push_back({f, n, s, al});
        }

  std::vector<BenchRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      try {
        const Job& j = jobs[i];
        GenerateArgs ga{j.family, j.n, j.seed, std::nullopt, 3, j.n};
        const Digraph g = generate(ga);
        SolveArgs sa;
        sa.algo = j.algo;
        sa.profile = a.profile;
        sa.epsilon = a.epsilon;
        sa.seed = j.seed;
        sa.timing = true;
        BenchRow row{j.family, g.n(), j.seed, j.algo, solve_to_json(g, sa), std::nullopt, 0.0};
        if (g.n() <= 12) row.oracle = exact_min_degree(g).delta;
        double denom = 1.0;
        if (const auto& lb = row.report["lower_bound"]; !lb.is_null())
          denom = std::max(denom, lb["num"].get<double>() / lb["den"].get<double>());
        if (row.oracle) denom = std::max(denom, static_cast<double>(*row.oracle));
        row.gap = row.report["delta_final"].get<double>() / denom;
        rows[i] = std::move(row);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  unsigned threads = a.threads ? a.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(jobs.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return rows;
}

Json bench_to_json(const std::vector<BenchRow>& rows) {
  Json out{{"schema", kReportSchema}, {"rows", Json::array()}};
  for (const auto& r : rows) {
    out["rows"].push_back({{"family", r.family},
                           {"n", r.n},
                           {"seed", r.seed},
                           {"algorithm", r.algo},
                           {"delta_final", r.report["delta_final"]},
                           {"lower_bound", r.report["lower_bound"]},
                           {"oracle", r.oracle ? Json(*r.oracle) : Json(nullptr)},
                           {"gap", r.gap},
                           {"wall_time_ms", r.report["wall_time_ms"]},
                           {"report", r.report}});
  }
  return out;
}

std::string bench_to_text(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(10) << "family" << std::right << std::setw(7) << "n" << std::setw(8) << "seed" << "  "
     << std::left << std::setw(8) << "algo" << std::right << std::setw(7) << "delta" << std::setw(10) << "bound"
     << std::setw(8) << "oracle" << std::setw(8) << "gap" << std::setw(12) << "ms" << "\n";
  for (const auto& r : rows) {
    std::string bound = "-";
    if (const auto& lb = r.report["lower_bound"]; !lb.is_null())
      bound = std::to_string(lb["num"].get<long long>()) + "/" + std::to_string(lb["den"].get<long long>());
    std::ostringstream gap, ms;
    gap << std::fixed << std::setprecision(3) << r.gap;
    ms << std::fixed << std::setprecision(2) << r.report["wall_time_ms"].get<double>();
    os << std::left << std::setw(10) << r.family << std::right << std::setw(7) << r.n << std::setw(8) << r.seed << "  "
       << std::left << std::setw(8) << r.algo << std::right << std::setw(7) << r.report["delta_final"].get<int>()
       << std::setw(10) << bound << std::setw(8) << (r.oracle ? std::to_string(*r.oracle) : "-") << std::setw(8)
       << gap.str() << std::setw(12) << ms.str() << "\n";
  }
  return os.str();
}

namespace {

Digraph read_graph_file(const std::string& path) {
  if (path == "-") return parse_graph(std::cin);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return parse_graph(in);
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write '" + path + "'");
  f << text;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Directed minimum-degree spanning trees"};
  app.require_subcommand(1);

  GenerateArgs gen;
  std::string gen_out;
  auto* g_cmd = app.add_subcommand("generate", "Write a generated instance");
  g_cmd->add_option("--family", gen.family, "random|path|instar|complete|blocker")
      ->check(CLI::IsMember({"random", "path", "instar", "complete", "blocker"}));
  g_cmd->add_option("--n", gen.n, "Vertex count");
  g_cmd->add_option("--seed", gen.seed, "RNG seed (DMDST_SEED overrides)");
  g_cmd->add_option("--extra", gen.extra, "Extra edges beyond the backbone (random)");
  g_cmd->add_option("--k", gen.k, "Hub degree (blocker)");
  g_cmd->add_option("--fanout", gen.fanout, "Number of blockers (blocker)");
  g_cmd->add_option("--out", gen_out, "Output file (default stdout)");

  SolveArgs sol;
  std::string sol_graph, sol_out;
  auto* s_cmd = app.add_subcommand("solve", "Solve an instance and print a JSON report");
  s_cmd->add_option("graph", sol_graph, "Graph file, - for stdin")->required();
  s_cmd->add_option("--algo", sol.algo, "local|augment|exact")->check(CLI::IsMember({"local", "augment", "exact"}));
  s_cmd->add_option("--profile", sol.profile, "paper|practical")->check(CLI::IsMember({"paper", "practical"}));
  s_cmd->add_option("--epsilon", sol.epsilon, "Augmenting-path epsilon in (0, 1/4)");
  s_cmd->add_option("--seed", sol.seed, "Seed echoed into the report (DMDST_SEED overrides)");
  s_cmd->add_option("--psi-factor", sol.psi_factor, "Local-search gate factor (practical profile)");
  s_cmd->add_flag("--trace", sol.trace, "Include the potential trace");
  s_cmd->add_flag("--timing", sol.timing, "Record real wall time");
  s_cmd->add_option("--out", sol_out, "Output file (default stdout)");

  std::string ver_graph, ver_report;
  auto* v_cmd = app.add_subcommand("verify", "Check a report against its graph");
  v_cmd->add_option("graph", ver_graph, "Graph file")->required();
  v_cmd->add_option("report", ver_report, "Report file")->required();

  BenchArgs bench;
  std::string bench_json;
  auto* b_cmd = app.add_subcommand("bench", "Run a family x size x seed x algorithm matrix");
  b_cmd->add_option("--family", bench.families, "Families (blocker: size is the fanout)")->delimiter(',');
  b_cmd->add_option("--sizes", bench.sizes, "Sizes")->delimiter(',');
  b_cmd->add_option("--seeds", bench.seeds, "Seeds")->delimiter(',');
  b_cmd->add_option("--algos", bench.algos, "Algorithms")->delimiter(',');
  b_cmd->add_option("--profile", bench.profile, "paper|practical");
  b_cmd->add_option("--epsilon", bench.epsilon, "Augmenting-path epsilon");
  b_cmd->add_option("--threads", bench.threads, "Worker threads (0: all cores)");
  b_cmd->add_option("--json", bench_json, "Also write the rows as JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kBadInput;
  }

  try {
    if (*g_cmd) {
      write_text(gen_out, serialize_graph(generate(gen)), out);
      return kOk;
    }
    if (*s_cmd) {
      const Digraph g = read_graph_file(sol_graph);
      write_text(sol_out, solve_to_json(g, sol).dump(2) + "\n", out);
      return kOk;
    }
    if (*v_cmd) {
      const Digraph g = read_graph_file(ver_graph);
      std::ifstream in(ver_report);
      if (!in) throw std::runtime_error("cannot open '" + ver_report + "'");
      Json report;
      try {
        report = Json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        err << "MalformedReport: " << e.what() << "\n";
        return kVerifyFailed;
      }
      if (auto why = verify_report(g, report); !why.empty()) {
        err << why << "\n";
        return kVerifyFailed;
      }
      out << "ok\n";
      return kOk;
    }
    if (*b_cmd) {
      const auto rows = run_bench(bench);
      out << bench_to_text(rows);
      if (!bench_json.empty()) write_text(bench_json, bench_to_json(rows).dump(2) + "\n", out);
      return kOk;
    }
  } catch (const InvariantViolation& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kBadInput;
  }
  return kBadInput;
}

}  // namespace dmdst::cli
