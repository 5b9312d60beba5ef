#ifndef SQZ_CLI_HPP
#define SQZ_CLI_HPP

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sqz/io.hpp"

namespace sqz {
namespace cli {

inline const char* kOutputDirEnv = "SQZ_OUTPUT_DIR";

// ---------------------------------------------------------------------------
// Small argument parsers

inline cxd parse_coordinate(const std::string& s) {
  // a, a+bi, a-bi, bi
  std::string t = s;
  double re = 0.0, im = 0.0;
  if (!t.empty() && t.back() == 'i') {
    t.pop_back();
    std::size_t split = t.find_last_of("+-");
    if (split == std::string::npos || split == 0) {
      im = t.empty() || t == "+" ? 1.0 : (t == "-" ? -1.0 : std::stod(t));
    } else if (t[split - 1] == 'e' || t[split - 1] == 'E') {
      im = std::stod(t);  // exponent sign, pure imaginary
    } else {
      re = std::stod(t.substr(0, split));
      std::string imag = t.substr(split);
      im = imag == "+" ? 1.0 : (imag == "-" ? -1.0 : std::stod(imag));
    }
  } else {
    re = std::stod(t);
  }
  return cxd(re, im);
}

inline CPoint parse_point(const std::string& s) {
  CPoint p;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) p.push_back(parse_coordinate(part));
  if (p.size() != 3) throw InvalidParameter("points need three coordinates");
  return p;
}

/// `start:end:count` -> geometric sequence; or an explicit comma list.
inline std::vector<double> parse_delta_list(const std::string& s) {
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    std::stringstream ss(s);
    std::string a, b, c;
    if (!std::getline(ss, a, ':') || !std::getline(ss, b, ':') ||
        !std::getline(ss, c, ':'))
      throw InvalidParameter("delta range must be start:end:count");
    const double start = std::stod(a), end = std::stod(b);
    const int count = std::stoi(c);
    if (start <= 0 || end <= 0 || count < 1)
      throw InvalidParameter("delta range values must be positive");
    if (count == 1) return {start};
    const double ratio = std::pow(end / start, 1.0 / double(count - 1));
    double v = start;
    for (int i = 0; i < count; ++i, v *= ratio) out.push_back(v);
    return out;
  }
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) out.push_back(std::stod(part));
  return out;
}

inline std::string resolve_output(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  if (const char* dir = std::getenv(kOutputDirEnv))
    return std::string(dir) + "/" + path;
  return path;
}

// ---------------------------------------------------------------------------
// Shared option block

struct CommonOpts {
  std::string builtin;
  std::string spec_path;
  int k = 2;
  int m = 0, a = 0, b = 0;
  double r = 1.0;
  double locality = 0.5;
  DiscSearchConfig cfg;
  bool deterministic = false;
  std::string out_path;

  void attach(CLI::App* app) {
    app->add_option("--builtin", builtin,
                    "built-in family: ball, model, herbort, convex-control");
    app->add_option("--spec", spec_path, "domain-spec file path");
    app->add_option("--k", k, "model type parameter k");
    app->add_option("--m", m, "model axis exponent m (default 2k+1)");
    app->add_option("--a", a, "model split exponent a");
    app->add_option("--b", b, "model split exponent b");
    app->add_option("--r", r, "ball radius");
    app->add_option("--locality", locality, "locality radius around q");
    app->add_option("--seed", cfg.seed, "random seed");
    app->add_option("--max-degree", cfg.max_degree, "disc degree cap");
    app->add_option("--samples", cfg.boundary_samples, "angles per ring");
    app->add_option("--rings", cfg.interior_rings, "number of sample rings");
    app->add_option("--margin", cfg.safety_margin, "admissibility margin");
    app->add_option("--budget", cfg.optimizer_budget, "optimizer budget");
    app->add_option("--tol", cfg.bisection_rel_tol, "bisection tolerance");
    app->add_flag("--deterministic", deterministic,
                  "suppress timestamps for byte-identical output");
    app->add_option("--out,-o", out_path, "result file path (JSON)");
  }

  DomainSpec make_domain() const {
    if (!spec_path.empty()) return parse_domain_spec_file(spec_path);
    if (builtin.empty())
      throw InvalidParameter("need --builtin or --spec to define the domain");
    BuiltinParams p;
    p.k = k;
    if (m > 0) p.m = m;
    if (a > 0) p.a = a;
    if (b > 0) p.b = b;
    p.r = r;
    p.locality = locality;
    if (builtin == "ball") return make_builtin(Family::ball, p);
    if (builtin == "model") return make_builtin(Family::model, p);
    if (builtin == "herbort") return make_builtin(Family::herbort, p);
    if (builtin == "convex-control" || builtin == "convex_control")
      return make_builtin(Family::convex_control, p);
    throw InvalidParameter("unknown builtin family: " + builtin);
  }

  std::string domain_tag() const {
    if (!spec_path.empty()) return "spec:" + spec_path;
    std::string tag = "builtin:" + builtin;
    if (builtin == "model")
      tag += ",k=" + std::to_string(k) + ",m=" + std::to_string(m) +
             ",a=" + std::to_string(a) + ",b=" + std::to_string(b);
    if (builtin == "ball") tag += ",r=" + format_real(r);
    tag += ",locality=" + format_real(locality);
    return tag;
  }

  std::string config_string(const std::string& command,
                            const std::string& extras) const {
    std::ostringstream s;
    s << "command=" << command << ";domain=" << domain_tag()
      << ";max_degree=" << cfg.max_degree
      << ";samples=" << cfg.boundary_samples << ";rings=" << cfg.interior_rings
      << ";margin=" << format_real(cfg.safety_margin)
      << ";budget=" << cfg.optimizer_budget
      << ";tol=" << format_real(cfg.bisection_rel_tol) << ";seed=" << cfg.seed;
    if (!extras.empty()) s << ";" << extras;
    return s.str();
  }
};

inline void emit(const CommonOpts& opts, json payload,
                 const std::string& canonical, std::ostream& console) {
  payload["config_hash"] = config_hash(canonical);
  console << payload.dump(2) << "\n";
  if (!opts.out_path.empty())
    write_result_file(resolve_output(opts.out_path), payload, canonical,
                      opts.cfg.seed, opts.deterministic);
}

// ---------------------------------------------------------------------------
// Built-in quick verification suite (also reachable as `verify` with no files)

inline int self_check(std::ostream& console) {
  int failures = 0;
  auto check = [&](bool ok, const std::string& name) {
    console << (ok ? "PASS " : "FAIL ") << name << "\n";
    if (!ok) ++failures;
  };
  DiscSearchConfig cfg;
  cfg.boundary_samples = 64;
  cfg.interior_rings = 4;
  cfg.optimizer_budget = 200;

  DomainSpec ball1 = make_ball(1.0);
  CPoint origin = {0.0, 0.0, 0.0};
  CPoint e1 = {1.0, 0.0, 0.0};
  double k1 = kobayashi_upper(ball1, origin, e1, cfg).value;
  check(k1 >= 1.0 && k1 <= 1.01, "unit ball metric at the center");

  Rational ex = exponent_composition(2, ExponentVariant::standard);
  check(ex == Rational(1, 72), "exponent composition k=2");

  double eps = obstruction_epsilon(1.0, 0.1, e1, {0.0, 1.0, 0.0}, 0.0);
  check(std::abs(eps - 0.1 / std::sqrt(2.0)) < 1e-12, "obstruction epsilon");

  DomainSpec model = make_model(2);
  auto disc = explicit_axis_disc(model, 1e-4, 0.1);
  check(disc_admissible(model, disc, cfg).admissible, "explicit axis disc");

  std::vector<double> samples(64);
  for (int i = 0; i < 64; ++i) {
    double th = 2.0 * std::acos(-1.0) * i / 64.0;
    samples[i] = std::cos(2 * th) + 5.0;
  }
  check(std::abs(circle_average(samples) - 5.0) < 1e-12, "circle average");
  return failures == 0 ? 0 : 1;
}

// ---------------------------------------------------------------------------

inline int run(int argc, const char* const* argv, std::ostream& console = std::cout) {
  CLI::App app{"Squeezing-function and Kobayashi-metric estimation toolkit"};
  app.require_subcommand(1);

  CommonOpts nf_opts, ko_opts, in_opts, sq_opts, ex_opts;

  auto* nf = app.add_subcommand("normal-form",
                                "reduce a defining function to normal form");
  nf_opts.attach(nf);

  auto* ko = app.add_subcommand("kobayashi", "metric upper bound at a point");
  ko_opts.attach(ko);
  std::string ko_point = "0,0,0", ko_dir = "1,0,0";
  ko->add_option("--point", ko_point, "basepoint x,y,z");
  ko->add_option("--dir", ko_dir, "direction a,b,c");

  auto* ind = app.add_subcommand("indicatrix", "indicatrix radius intervals");
  in_opts.attach(ind);
  std::string in_point = "0,0,0";
  std::vector<std::string> in_dirs;
  ind->add_option("--point", in_point, "basepoint x,y,z");
  ind->add_option("--dirs", in_dirs, "directions a,b,c (repeatable)");

  auto* sq = app.add_subcommand("squeeze-bound", "squeezing upper bound");
  sq_opts.attach(sq);
  double sq_delta = 1e-3;
  sq->add_option("--delta", sq_delta, "boundary distance delta");

  auto* ex = app.add_subcommand("experiment", "delta-sweep decay experiment");
  ex_opts.attach(ex);
  std::string ex_deltas = "1e-2:1e-4:3", ex_mode = "numeric", ex_csv;
  ex->add_option("--deltas", ex_deltas, "delta list or start:end:count");
  ex->add_option("--mode", ex_mode, "numeric or closed-form");
  ex->add_option("--csv", ex_csv, "CSV table output path");

  auto* ve = app.add_subcommand("verify",
                                "check result-file hashes / run self checks");
  std::vector<std::string> ve_files;
  ve->add_option("files", ve_files, "result files to verify");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (nf->parsed()) {
      DomainSpec dom = nf_opts.make_domain();
      int k = dom.declared_k.value_or(nf_opts.k);
      // Expand around q: shift coordinates so the boundary point is 0.
      std::vector<std::vector<cxd>> id(3, std::vector<cxd>(3, 0.0));
      for (int i = 0; i < 3; ++i) id[i][i] = 1.0;
      HermitianPolynomial shifted = dom.rho.compose_affine(id, dom.q);
      Jet jet = hermitian_to_jet(shifted);
      NormalFormResult res = reduce_to_normal_form(jet, k);
      std::string canonical =
          nf_opts.config_string("normal-form", "k=" + std::to_string(k));
      emit(nf_opts, normal_form_to_json(res), canonical, console);
      return 0;
    }
    if (ko->parsed()) {
      DomainSpec dom = ko_opts.make_domain();
      MetricEstimate est = kobayashi_upper(dom, parse_point(ko_point),
                                           parse_point(ko_dir), ko_opts.cfg);
      std::string canonical = ko_opts.config_string(
          "kobayashi", "point=" + ko_point + ";dir=" + ko_dir);
      json j = estimate_to_json(est);
      j["domain"] = ko_opts.domain_tag();
      emit(ko_opts, j, canonical, console);
      return 0;
    }
    if (ind->parsed()) {
      DomainSpec dom = in_opts.make_domain();
      std::vector<CPoint> dirs;
      if (in_dirs.empty())
        dirs = {{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}};
      else
        for (const auto& d : in_dirs) dirs.push_back(parse_point(d));
      IndicatrixData data =
          indicatrix_radii(dom, parse_point(in_point), dirs, in_opts.cfg);
      std::string extras = "point=" + in_point + ";dirs=";
      for (const auto& d : in_dirs) extras += d + "|";
      std::string canonical = in_opts.config_string("indicatrix", extras);
      emit(in_opts, indicatrix_to_json(data), canonical, console);
      return 0;
    }
    if (sq->parsed()) {
      DomainSpec dom = sq_opts.make_domain();
      SqueezingBound b = squeezing_upper(dom, sq_delta, sq_opts.cfg);
      std::string canonical = sq_opts.config_string(
          "squeeze-bound", "delta=" + format_real(sq_delta));
      emit(sq_opts, squeezing_to_json(b), canonical, console);
      return 0;
    }
    if (ex->parsed()) {
      DomainSpec dom = ex_opts.make_domain();
      ExperimentMode mode;
      if (ex_mode == "numeric")
        mode = ExperimentMode::numeric;
      else if (ex_mode == "closed-form" || ex_mode == "closed_form")
        mode = ExperimentMode::closed_form;
      else
        throw InvalidParameter("mode must be numeric or closed-form");
      std::vector<double> deltas = parse_delta_list(ex_deltas);
      ExperimentTable t = decay_experiment(dom, deltas, ex_opts.cfg, mode);
      std::string canonical = ex_opts.config_string(
          "experiment", "deltas=" + ex_deltas + ";mode=" + ex_mode);
      if (!ex_csv.empty())
        write_experiment_csv(resolve_output(ex_csv), t, canonical);
      emit(ex_opts, experiment_to_json(t), canonical, console);
      return 0;
    }
    if (ve->parsed()) {
      if (ve_files.empty()) return self_check(console);
      bool all_ok = true;
      for (const auto& f : ve_files) {
        bool ok = verify_result_file(f);
        console << (ok ? "PASS " : "FAIL ") << f << "\n";
        all_ok = all_ok && ok;
      }
      return all_ok ? 0 : 1;
    }
  } catch (const ParseError& e) {
    console << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    console << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    console << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace cli
}  // namespace sqz

#endif  // SQZ_CLI_HPP
