#ifndef SQZ_KOBAYASHI_HPP
#define SQZ_KOBAYASHI_HPP

#include <algorithm>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "sqz/disc.hpp"
#include "sqz/domain.hpp"
#include "sqz/types.hpp"

namespace sqz {

struct CertificateRecord {
  int k = 0;
  double delta = 0.0;
  double constant = 0.0;  // value = constant * delta^exponent
  double exponent = 0.0;
};

enum class EstimateKind { upper_witness, lower_certificate, lower_trivial_ball };

inline std::string estimate_kind_name(EstimateKind k) {
  switch (k) {
    case EstimateKind::upper_witness: return "upper_witness";
    case EstimateKind::lower_certificate: return "lower_certificate";
    case EstimateKind::lower_trivial_ball: return "lower_trivial_ball";
  }
  return "?";
}

struct MetricEstimate {
  CPoint basepoint;
  CPoint direction;  // unit vector
  double value = 0.0;
  EstimateKind kind = EstimateKind::upper_witness;
  std::optional<AnalyticDisc> witness;
  std::optional<CertificateRecord> certificate;
};

/// Trapezoid mean of equispaced circle samples (exact for trigonometric
/// polynomials of degree < samples/2).
inline double circle_average(const std::vector<double>& samples) {
  if (samples.size() < 16)
    throw InvalidParameter("need at least 16 circle samples");
  double s = 0.0;
  for (double v : samples) s += v;
  return s / double(samples.size());
}

namespace detail {

/// Derivative-free simplex minimizer with a fixed evaluation budget.
/// Deterministic for a fixed starting point and scale.
inline std::vector<double> nelder_mead(
    const std::function<double(const std::vector<double>&)>& f,
    std::vector<double> x0, double scale, int budget, double* best_out) {
  const int n = int(x0.size());
  std::vector<std::vector<double>> pts(n + 1, x0);
  std::vector<double> val(n + 1);
  for (int i = 0; i < n; ++i) pts[i + 1][i] += scale;
  int used = 0;
  for (int i = 0; i <= n; ++i) {
    val[i] = f(pts[i]);
    ++used;
  }
  auto order = [&] {
    std::vector<int> idx(n + 1);
    for (int i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return val[a] < val[b]; });
    std::vector<std::vector<double>> p2(n + 1);
    std::vector<double> v2(n + 1);
    for (int i = 0; i <= n; ++i) {
      p2[i] = pts[idx[i]];
      v2[i] = val[idx[i]];
    }
    pts.swap(p2);
    val.swap(v2);
  };
  order();
  while (used < budget) {
    std::vector<double> centroid(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) centroid[j] += pts[i][j] / double(n);
    auto blend = [&](double t) {
      std::vector<double> x(n);
      for (int j = 0; j < n; ++j)
        x[j] = centroid[j] + t * (pts[n][j] - centroid[j]);
      return x;
    };
    std::vector<double> xr = blend(-1.0);
    double fr = f(xr);
    ++used;
    if (fr < val[0]) {
      std::vector<double> xe = blend(-2.0);
      double fe = f(xe);
      ++used;
      if (fe < fr) {
        pts[n] = xe;
        val[n] = fe;
      } else {
        pts[n] = xr;
        val[n] = fr;
      }
    } else if (fr < val[n - 1]) {
      pts[n] = xr;
      val[n] = fr;
    } else {
      std::vector<double> xc = blend(fr < val[n] ? -0.5 : 0.5);
      double fc = f(xc);
      ++used;
      if (fc < std::min(fr, val[n])) {
        pts[n] = xc;
        val[n] = fc;
      } else {
        for (int i = 1; i <= n && used < budget; ++i) {
          for (int j = 0; j < n; ++j)
            pts[i][j] = 0.5 * (pts[i][j] + pts[0][j]);
          val[i] = f(pts[i]);
          ++used;
        }
      }
    }
    order();
  }
  if (best_out) *best_out = val[0];
  return pts[0];
}

/// Worst constraint value of a disc on a coarse sample grid: max of
/// rho(phi(tau)) and the locality-ball violation.  Negative means feasible
/// on the coarse grid.
inline double coarse_penalty(const DomainSpec& dom, const AnalyticDisc& phi,
                             int rings, int angles) {
  const double two_pi = 2.0 * std::acos(-1.0);
  const double loc2 = dom.locality_radius * dom.locality_radius;
  double worst = -std::numeric_limits<double>::infinity();
  for (int j = rings; j >= 1; --j) {
    const double r = double(j) / double(rings);
    for (int s = 0; s < angles; ++s) {
      const cxd tau = std::polar(r, two_pi * double(s) / double(angles));
      CPoint pt = phi.evaluate(tau);
      worst = std::max(worst, dom.compiled.evaluate(pt));
      worst = std::max(worst, norm2(pt - dom.q) - loc2);
    }
  }
  return worst;
}

inline AnalyticDisc tails_to_disc(const CPoint& p, const CPoint& c1,
                                  const std::vector<double>& tails) {
  AnalyticDisc phi;
  phi.basepoint = p;
  phi.coefficients = {c1};
  for (std::size_t off = 0; off + 6 <= tails.size(); off += 6) {
    CPoint c(3);
    for (int i = 0; i < 3; ++i)
      c[i] = cxd(tails[off + 2 * i], tails[off + 2 * i + 1]);
    phi.coefficients.push_back(std::move(c));
  }
  return phi;
}

/// Searches for an admissible disc with c_1 = beta * zeta: the zero-tail
/// disc first, then a seeded simplex search over c_2..c_N against the
/// coarse penalty, verifying candidates on the full sample grid.
inline std::optional<AnalyticDisc> feasible_disc(const DomainSpec& dom,
                                                 const CPoint& p,
                                                 const CPoint& zeta,
                                                 double beta,
                                                 const DiscSearchConfig& cfg,
                                                 std::mt19937_64& rng) {
  const CPoint c1 = cxd(beta) * zeta;
  AnalyticDisc linear;
  linear.basepoint = p;
  linear.coefficients = {c1};
  if (disc_admissible(dom, linear, cfg).admissible) return linear;
  if (cfg.max_degree < 2) return std::nullopt;

  const int dims = 6 * (cfg.max_degree - 1);
  const int coarse_rings = std::max(2, cfg.interior_rings / 2);
  const int coarse_angles = std::max(16, cfg.boundary_samples / 4);
  auto objective = [&](const std::vector<double>& tails) {
    return coarse_penalty(dom, tails_to_disc(p, c1, tails), coarse_rings,
                          coarse_angles);
  };

  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const int restarts = 3;
  const int per_restart = std::max(dims + 2, cfg.optimizer_budget / restarts);
  for (int r = 0; r < restarts; ++r) {
    std::vector<double> x0(dims, 0.0);
    if (r > 0)
      for (double& x : x0) x = 0.2 * beta * uni(rng);
    double best = 0.0;
    std::vector<double> xb =
        nelder_mead(objective, std::move(x0), 0.25 * beta, per_restart, &best);
    if (best < -cfg.safety_margin) {
      AnalyticDisc cand = tails_to_disc(p, c1, xb);
      if (disc_admissible(dom, cand, cfg).admissible) return cand;
    }
  }
  return std::nullopt;
}

}  // namespace detail

/// Upper bound on K(p, zeta) by bisection over the derivative scale beta
/// with an inner tail-coefficient search.  Deterministic for a fixed seed.
inline MetricEstimate kobayashi_upper(const DomainSpec& dom, const CPoint& p,
                                      const CPoint& zeta,
                                      const DiscSearchConfig& cfg = {}) {
  cfg.validate();
  if (!dom.contains(p))
    throw InvalidParameter("basepoint must lie in the working domain");
  const CPoint dir = normalized(zeta);
  std::mt19937_64 rng(cfg.seed);

  double lo = 1e-8;
  double hi = dom.bounding_radius;
  auto lo_disc = detail::feasible_disc(dom, p, dir, lo, cfg, rng);
  if (!lo_disc)
    throw SearchFailure(
        "no admissible disc at the smallest scale: basepoint too close to "
        "the boundary for this configuration");
  AnalyticDisc best = *lo_disc;
  double beta_best = lo;
  if (auto hi_disc = detail::feasible_disc(dom, p, dir, hi, cfg, rng)) {
    best = *hi_disc;
    beta_best = hi;
  } else {
    while ((hi - beta_best) > cfg.bisection_rel_tol * beta_best) {
      const double mid = 0.5 * (beta_best + hi);
      if (auto d = detail::feasible_disc(dom, p, dir, mid, cfg, rng)) {
        best = *d;
        beta_best = mid;
      } else {
        hi = mid;
      }
    }
  }

  MetricEstimate est;
  est.basepoint = p;
  est.direction = dir;
  // ||zeta|| / |<c_1, zeta/||zeta||>| with c_1 = beta * (zeta/||zeta||),
  // so the estimate is homogeneous of degree 1 in zeta.
  est.value = norm(zeta) / beta_best;
  est.kind = EstimateKind::upper_witness;
  est.witness = best;
  return est;
}

/// Closed-form lower bound for K(p, zeta) at p = (0,0,-delta) along the
/// diagonal zeta = (1,1,0)/sqrt(2).
///
/// Model family: any competitor disc (beta tau + f, beta tau + g,
/// -delta + h) with quadratic tails has |z(tau)| >= beta r - r^2 on |tau| =
/// r; at r = beta/2 this gives |z| >= beta^2/4, and the circle average of
/// the defining function forces -delta + (beta^2/4)^{2k} < 0, i.e.
/// beta <= 2 delta^{1/(4k)}.  With phi'(0) = sqrt(2) beta zeta this yields
///   K >= (1/(2 sqrt 2)) delta^{-1/(4k)}.
///
/// Positive-term variant (all mixed monomials |z|^{2a}|w|^{2b} with
/// a + b = k appear with coefficient >= 1): Parseval on |tau| = 1/2 bounds
/// the average of |z^a w^b|^2 below by |beta|^{2k} (1/2)^{2k}, giving
///   K >= (1/(2 sqrt 2)) delta^{-1/(2k)}.
inline MetricEstimate diag_lower_certificate(const DomainSpec& dom,
                                             double delta) {
  if (delta <= 0.0) throw InvalidParameter("delta must be positive");
  double exponent = 0.0;
  int k = 0;
  switch (dom.family) {
    case Family::model:
      k = *dom.declared_k;
      exponent = -1.0 / (4.0 * k);
      break;
    case Family::herbort:
      k = *dom.declared_k;
      exponent = -1.0 / (2.0 * k);
      break;
    default:
      throw CertificateUnavailable(
          "lower certificate needs a model or positive-term family (P must "
          "vanish on both axes / have only positive mixed terms)");
  }
  const double c = 1.0 / (2.0 * std::sqrt(2.0));
  MetricEstimate est;
  est.basepoint = {0.0, 0.0, -delta};
  const double s = 1.0 / std::sqrt(2.0);
  est.direction = {s, s, 0.0};
  est.value = c * std::pow(delta, exponent);
  est.kind = EstimateKind::lower_certificate;
  est.certificate = CertificateRecord{k, delta, c, exponent};
  return est;
}

/// Trivial lower bound via ball inclusion: the working domain sits inside
/// the ball around p of radius locality_radius + ||p - q||, so
/// K(p, zeta) >= ||zeta|| / radius.
inline MetricEstimate trivial_ball_lower(const DomainSpec& dom, const CPoint& p,
                                         const CPoint& zeta) {
  const double radius = dom.locality_radius + norm(p - dom.q);
  MetricEstimate est;
  est.basepoint = p;
  est.direction = normalized(zeta);
  est.value = 1.0 / radius;
  est.kind = EstimateKind::lower_trivial_ball;
  return est;
}

/// Exact Kobayashi metric of the ball of radius r: transport p to the
/// center with the standard automorphism and use K(0, zeta) = ||zeta|| / r.
inline double ball_exact(double r, const CPoint& p, const CPoint& zeta) {
  if (r <= 0.0) throw InvalidParameter("ball radius must be positive");
  CPoint a = cxd(1.0 / r) * p;
  const double a2 = norm2(a);
  if (a2 >= 1.0) throw InvalidParameter("point outside the ball");
  CPoint v = cxd(1.0 / r) * zeta;
  if (a2 < kZeroTol * kZeroTol) return norm(v);
  // Derivative at a of the automorphism sending a to 0:
  //   dphi_a(a)[v] = -P_a v / s^2 - Q_a v / s,  s = sqrt(1 - |a|^2).
  const double s = std::sqrt(1.0 - a2);
  const cxd proj = inner(v, a) / a2;
  CPoint pa = proj * a;          // component along a
  CPoint qa = v - pa;            // orthogonal component
  CPoint img = cxd(-1.0 / (s * s)) * pa + cxd(-1.0 / s) * qa;
  return norm(img);
}

/// Exhaustive disc enumeration: c_1 = beta zeta over a descending linear
/// beta grid, optionally with c_2 on a symmetric 3-point-per-axis grid.
/// Returns the largest beta with an admissible disc (a certified lower
/// bound on the extremal beta, hence 1/result upper-bounds K).
inline double grid_oracle(const DomainSpec& dom, const CPoint& p,
                          const CPoint& zeta, int degree, int resolution,
                          const DiscSearchConfig& cfg = {}) {
  cfg.validate();
  if (degree < 1 || degree > 2)
    throw InvalidParameter("oracle supports degree 1 or 2 only");
  if (resolution < 2) throw InvalidParameter("resolution must be >= 2");
  const long combos = degree == 2 ? 729L : 1L;  // 3^6 tail grid points
  if (long(resolution) * combos > 1000000L)
    throw SearchFailure("oracle budget exceeded (max 1e6 discs)");
  const CPoint dir = normalized(zeta);
  const double beta_hi = dom.bounding_radius;

  for (int i = resolution; i >= 1; --i) {
    const double beta = beta_hi * double(i) / double(resolution);
    const CPoint c1 = cxd(beta) * dir;
    if (degree == 1) {
      AnalyticDisc phi;
      phi.basepoint = p;
      phi.coefficients = {c1};
      if (disc_admissible(dom, phi, cfg).admissible) return beta;
      continue;
    }
    const double g = 0.5 * beta;
    std::vector<double> tails(6, 0.0);
    for (int mask = 0; mask < 729; ++mask) {
      int m = mask;
      for (int d = 0; d < 6; ++d) {
        tails[d] = g * double(m % 3 - 1);
        m /= 3;
      }
      AnalyticDisc phi = detail::tails_to_disc(p, c1, tails);
      if (disc_admissible(dom, phi, cfg).admissible) return beta;
    }
  }
  throw SearchFailure("oracle found no admissible disc at any grid scale");
}

struct IndicatrixEntry {
  CPoint direction;
  double r_lo = 0.0;  // 1 / upper estimate
  double r_hi = 0.0;  // 1 / best lower estimate
};

struct IndicatrixData {
  CPoint basepoint;
  std::vector<IndicatrixEntry> entries;
};

/// Radius interval of the Kobayashi indicatrix per direction:
/// r_lo from the disc-search upper bound, r_hi from the best available
/// lower bound (closed-form certificate when it applies, otherwise the
/// ball-inclusion bound).
inline IndicatrixData indicatrix_radii(const DomainSpec& dom, const CPoint& p,
                                       const std::vector<CPoint>& directions,
                                       const DiscSearchConfig& cfg = {}) {
  IndicatrixData data;
  data.basepoint = p;
  for (const auto& d : directions) {
    const CPoint dir = normalized(d);
    MetricEstimate up = kobayashi_upper(dom, p, dir, cfg);
    double lower = trivial_ball_lower(dom, p, dir).value;
    // The ball family has an exact metric; use it as the lower estimate.
    if (dom.family == Family::ball)
      lower = std::max(lower, ball_exact(*dom.ball_r, p, dir));
    // The diagonal certificate applies at p = (0,0,-delta) with the
    // direction (1,1,0)/sqrt(2), for the certified families.
    if ((dom.family == Family::model || dom.family == Family::herbort) &&
        std::abs(p[0]) < kZeroTol && std::abs(p[1]) < kZeroTol &&
        p[2].real() < 0.0 && std::abs(p[2].imag()) < kZeroTol) {
      const double s = 1.0 / std::sqrt(2.0);
      if (std::abs(dir[0] - s) < 1e-9 && std::abs(dir[1] - s) < 1e-9 &&
          std::abs(dir[2]) < 1e-9) {
        lower = std::max(lower, diag_lower_certificate(dom, -p[2].real()).value);
      }
    }
    IndicatrixEntry e;
    e.direction = dir;
    e.r_lo = 1.0 / up.value;
    e.r_hi = 1.0 / lower;
    if (e.r_lo > e.r_hi) throw Error("indicatrix interval inverted");
    data.entries.push_back(std::move(e));
  }
  return data;
}

}  // namespace sqz

#endif  // SQZ_KOBAYASHI_HPP
