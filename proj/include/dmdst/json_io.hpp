#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "dmdst/certificate.hpp"
#include "dmdst/report.hpp"

namespace dmdst {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;

class ReportFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Json certificate_to_json(const BlockingCertificate& c, bool verified) {
  const Rational b = c.bound();
  return Json{{"U", c.U}, {"B", c.B}, {"k", c.k}, {"bound_num", b.num}, {"bound_den", b.den}, {"verified", verified}};
}

struct ReportJsonOptions {
  bool trace = false;   // include potential_trace
  bool timing = false;  // real wall time; 0 otherwise, so reports stay byte-stable
};

inline Json report_to_json(const SolveReport& r, const ReportJsonOptions& opt = {}) {
  Json j;
  j["schema"] = kReportSchema;
  j["algorithm"] = to_string(r.algorithm);
  j["profile"] = to_string(r.config.profile);
  j["n"] = r.n;
  j["m"] = r.m;
  if (r.algorithm == Algorithm::Augment) {
    j["epsilon"] = r.config.epsilon;
    j["c"] = r.config.base_c;
  }
  j["delta_initial"] = r.delta_initial;
  j["delta_final"] = r.delta_final;
  j["lower_bound"] = r.lower_bound ? Json{{"num", r.lower_bound->num}, {"den", r.lower_bound->den}} : Json(nullptr);
  // Solvers only attach certificates that passed verification.
  j["certificate"] = r.certificate ? certificate_to_json(*r.certificate, true) : Json(nullptr);
  j["iterations"] = r.iterations;
  if (opt.trace) {
    Json trace = Json::array();
    for (const auto& s : r.potential_trace)
      trace.push_back({{"iteration", s.iteration}, {"k", s.k}, {"class_size", s.class_size},
                       {"phi_before", s.phi_before}, {"phi_after", s.phi_after}});
    j["potential_trace"] = std::move(trace);
  }
  if (r.algorithm == Algorithm::Augment) {
    Json layers = Json::array();
    for (const auto& l : r.layers_trace)
      layers.push_back({{"iteration", l.iteration}, {"k", l.k}, {"v_sizes", l.v_sizes}, {"u_sizes", l.u_sizes}, {"found", l.found}});
    j["layers_trace"] = std::move(layers);
  }
  j["parent"] = r.parent;
  j["wall_time_ms"] = opt.timing ? r.wall_time_ms : 0.0;
  j["config"] = {{"epsilon", r.config.epsilon},
                 {"profile", to_string(r.config.profile)},
                 {"c", r.config.base_c},
                 {"psi_factor", r.config.psi_factor},
                 {"stop_threshold_local", r.config.stop_threshold_local},
                 {"stop_threshold_aug", r.config.stop_threshold_aug},
                 {"seed", r.config.rng_seed}};
  j["guarantee"] = to_string(r.guarantee);
  j["termination"] = to_string(r.termination);
  return j;
}

/// The parts of a report that verification needs.
struct ReportClaims {
  Vertex n = 0;
  Degree delta_final = 0;
  std::vector<Vertex> parent;
  std::optional<Rational> lower_bound;
  std::optional<BlockingCertificate> certificate;
  std::optional<Rational> certificate_bound;  // bound_num / bound_den as written
  bool certificate_verified = false;
  std::string algorithm;
};

inline ReportClaims claims_from_json(const Json& j) {
  try {
    if (!j.is_object()) throw ReportFormatError("report is not a JSON object");
    if (j.at("schema").get<int>() != kReportSchema)
      throw ReportFormatError("unsupported schema " + j.at("schema").dump());
    ReportClaims c;
    c.algorithm = j.at("algorithm").get<std::string>();
    c.n = j.at("n").get<Vertex>();
    c.delta_final = j.at("delta_final").get<Degree>();
    c.parent = j.at("parent").get<std::vector<Vertex>>();
    if (const auto& lb = j.at("lower_bound"); !lb.is_null())
      c.lower_bound = Rational{lb.at("num").get<std::int64_t>(), lb.at("den").get<std::int64_t>()};
    if (const auto& cj = j.at("certificate"); !cj.is_null()) {
      BlockingCertificate cert;
      cert.U = cj.at("U").get<std::vector<Vertex>>();
      cert.B = cj.at("B").get<std::vector<Vertex>>();
      cert.k = cj.at("k").get<Degree>();
      c.certificate = std::move(cert);
      c.certificate_bound = Rational{cj.at("bound_num").get<std::int64_t>(), cj.at("bound_den").get<std::int64_t>()};
      c.certificate_verified = cj.at("verified").get<bool>();
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ReportFormatError(std::string("malformed report: ") + e.what());
  }
}

}  // namespace dmdst
