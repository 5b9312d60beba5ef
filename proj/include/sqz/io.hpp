#ifndef SQZ_IO_HPP
#define SQZ_IO_HPP

#include <cstdint>
#include <ctime>
#include <fstream>
#include <string>

#include <json.hpp>

#include "sqz/normal_form.hpp"
#include "sqz/spec_parser.hpp"
#include "sqz/squeezing.hpp"

namespace sqz {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Config hashing (FNV-1a, 64-bit) for reproducibility headers.

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string config_hash(const std::string& canonical_config) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_config)));
  return buf;
}

// ---------------------------------------------------------------------------
// JSON encoding of the core value types.

inline json point_to_json(const CPoint& p) {
  json a = json::array();
  for (const auto& c : p) a.push_back({c.real(), c.imag()});
  return a;
}

inline CPoint point_from_json(const json& a) {
  CPoint p;
  for (const auto& c : a) p.push_back(cxd(c.at(0).get<double>(), c.at(1).get<double>()));
  return p;
}

inline json disc_to_json(const AnalyticDisc& d) {
  json coeffs = json::array();
  for (const auto& c : d.coefficients) coeffs.push_back(point_to_json(c));
  return {{"basepoint", point_to_json(d.basepoint)}, {"coefficients", coeffs}};
}

inline AnalyticDisc disc_from_json(const json& j) {
  AnalyticDisc d;
  d.basepoint = point_from_json(j.at("basepoint"));
  for (const auto& c : j.at("coefficients")) d.coefficients.push_back(point_from_json(c));
  return d;
}

inline json estimate_to_json(const MetricEstimate& e) {
  json j = {{"basepoint", point_to_json(e.basepoint)},
            {"direction", point_to_json(e.direction)},
            {"value", e.value},
            {"kind", estimate_kind_name(e.kind)}};
  if (e.witness) j["witness"] = disc_to_json(*e.witness);
  if (e.certificate)
    j["certificate"] = {{"k", e.certificate->k},
                        {"delta", e.certificate->delta},
                        {"constant", e.certificate->constant},
                        {"exponent", e.certificate->exponent}};
  return j;
}

inline json indicatrix_to_json(const IndicatrixData& d) {
  json entries = json::array();
  for (const auto& e : d.entries)
    entries.push_back({{"direction", point_to_json(e.direction)},
                       {"r_lo", e.r_lo},
                       {"r_hi", e.r_hi}});
  return {{"basepoint", point_to_json(d.basepoint)}, {"entries", entries}};
}

inline json squeezing_to_json(const SqueezingBound& b) {
  json trace = json::array();
  for (const auto& e : b.trace) trace.push_back(estimate_to_json(e));
  return {{"basepoint", point_to_json(b.basepoint)},
          {"delta", b.delta},
          {"lambda", b.lambda},
          {"r_d", b.r_d},
          {"epsilon", b.epsilon},
          {"bound", b.bound},
          {"diagnostic", b.diagnostic},
          {"trace", trace}};
}

inline json experiment_to_json(const ExperimentTable& t) {
  json rows = json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"delta", r.delta},
                    {"K_axis_upper", r.K_axis_upper},
                    {"K_diag_lower", r.K_diag_lower},
                    {"lambda", r.lambda},
                    {"r_d", r.r_d},
                    {"epsilon", r.epsilon},
                    {"bound", r.bound},
                    {"diagnostic", r.diagnostic}});
  json j = {{"mode", experiment_mode_name(t.mode)},
            {"rows", rows},
            {"verdict", t.verdict}};
  if (t.slope) j["slope"] = *t.slope;
  if (t.theoretical_exponent)
    j["theoretical_exponent"] = {{"num", t.theoretical_exponent->num},
                                 {"den", t.theoretical_exponent->den},
                                 {"value", t.theoretical_exponent->to_double()}};
  return j;
}

inline json normal_form_to_json(const NormalFormResult& r) {
  json log = json::array();
  for (const auto& t : r.transform_log) {
    switch (t.kind) {
      case Transform::Kind::rescale:
        log.push_back({{"kind", "rescale"}, {"scale", t.scale}});
        break;
      case Transform::Kind::multiply_unit:
        log.push_back({{"kind", "multiply_unit"}, {"factor_terms", int(t.payload.terms().size())}});
        break;
      case Transform::Kind::substitute_t:
        log.push_back({{"kind", "substitute_t"}, {"expr_terms", int(t.payload.terms().size())}});
        break;
    }
  }
  auto deg = [](const Jet& p) { return p.is_zero() ? -1 : p.min_degree(); };
  json j = {{"status", r.status == NormalFormStatus::normalized
                           ? "normalized"
                           : "pseudoconvexity_violation"},
            {"k", r.k},
            {"P_degree", deg(r.P)},
            {"Q_degree", deg(r.Q)},
            {"R_degree", deg(r.R)},
            {"transform_log", log}};
  if (r.status == NormalFormStatus::normalized) {
    j["d"] = detect_model_type(r);
    j["normal_form"] = emit_jet(r.jet);
  } else {
    j["offending_degree"] = r.offending_degree;
    if (r.offending) j["offending"] = emit_jet(*r.offending);
  }
  return j;
}

// ---------------------------------------------------------------------------
// Result files: JSON with a reproducibility header.

inline void write_result_file(const std::string& path, json payload,
                              const std::string& canonical_config,
                              std::uint64_t seed, bool deterministic) {
  payload["config"] = canonical_config;
  payload["config_hash"] = config_hash(canonical_config);
  payload["seed"] = seed;
  if (!deterministic) payload["timestamp"] = std::time(nullptr);
  std::ofstream out(path);
  if (!out) throw InvalidParameter("cannot write result file: " + path);
  out << payload.dump(2) << "\n";
}

/// Recomputes the embedded config hash; true iff it matches.
inline bool verify_result_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open result file: " + path);
  json j = json::parse(in);
  return j.at("config_hash").get<std::string>() ==
         config_hash(j.at("config").get<std::string>());
}

/// CSV table with the fixed schema; the config hash rides in a trailing
/// comment line so the first line stays the documented header.
inline void write_experiment_csv(const std::string& path,
                                 const ExperimentTable& t,
                                 const std::string& canonical_config) {
  std::ofstream out(path);
  if (!out) throw InvalidParameter("cannot write table file: " + path);
  out << "delta,K_axis_upper,K_diag_lower,lambda,r_d,epsilon,bound\n";
  for (const auto& r : t.rows)
    out << format_real(r.delta) << ',' << format_real(r.K_axis_upper) << ','
        << format_real(r.K_diag_lower) << ',' << format_real(r.lambda) << ','
        << format_real(r.r_d) << ',' << format_real(r.epsilon) << ','
        << format_real(r.bound) << "\n";
  out << "# config_hash=" << config_hash(canonical_config) << "\n";
}

}  // namespace sqz

#endif  // SQZ_IO_HPP
