#ifndef SQZ_DISC_HPP
#define SQZ_DISC_HPP

#include <cmath>
#include <string>
#include <vector>

#include "sqz/domain.hpp"
#include "sqz/types.hpp"

namespace sqz {

/// Polynomial map from the unit disc into C^3:
///   phi(tau) = p + sum_{j=1..N} c_j tau^j.
/// Witnesses Kobayashi upper bounds: an admissible disc with phi'(0) =
/// beta * zeta gives K(p, zeta) <= 1/beta.
struct AnalyticDisc {
  CPoint basepoint;
  std::vector<CPoint> coefficients;  // c_1 .. c_N

  int degree() const { return int(coefficients.size()); }
  int dimension() const { return int(basepoint.size()); }

  CPoint evaluate(cxd tau) const {
    CPoint out = basepoint;
    cxd pw = 1.0;
    for (const auto& c : coefficients) {
      pw *= tau;
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += pw * c[i];
    }
    return out;
  }

  const CPoint& derivative_at_zero() const {
    if (coefficients.empty()) throw InvalidParameter("disc needs degree >= 1");
    return coefficients.front();
  }

  /// sum_j j * ||c_j||: Lipschitz constant of phi on the closed unit disc.
  double coefficient_weight() const {
    double s = 0.0;
    for (int j = 0; j < degree(); ++j)
      s += double(j + 1) * norm(coefficients[j]);
    return s;
  }
};

struct DiscSearchConfig {
  int max_degree = 3;
  int boundary_samples = 256;  // angles per ring, power of two
  int interior_rings = 8;
  double safety_margin = 1e-9;  // mu
  int optimizer_budget = 2000;  // objective evaluations per bisection step
  double bisection_rel_tol = 1e-3;
  std::uint64_t seed = 20260823;

  void validate() const {
    if (max_degree < 1 || boundary_samples < 16 || interior_rings < 1 ||
        safety_margin <= 0.0 || optimizer_budget < 1 ||
        bisection_rel_tol <= 0.0)
      throw InvalidParameter("disc search config out of range");
    if ((boundary_samples & (boundary_samples - 1)) != 0)
      throw InvalidParameter("boundary_samples must be a power of two");
  }
};

struct AdmissibilityReport {
  enum class Reason {
    ok,
    positive_sample,      // rho >= -mu somewhere on the sample grid
    outside_locality,     // disc leaves the locality ball around q
    exits_bounding_box,   // disc leaves the ball the Lipschitz bound covers
  };

  bool admissible = false;
  Reason reason = Reason::ok;
  double worst_value = -std::numeric_limits<double>::infinity();
  double cert_gap = 0.0;      // Lipschitz inter-sample bound
  bool gap_certified = false; // cert_gap small against the observed margin

  static std::string reason_name(Reason r) {
    switch (r) {
      case Reason::ok: return "ok";
      case Reason::positive_sample: return "positive_sample";
      case Reason::outside_locality: return "outside_locality";
      case Reason::exits_bounding_box: return "exits_bounding_box";
    }
    return "?";
  }
};

/// Sampled range containment: rho(phi(tau)) < -mu on interior_rings
/// concentric circles with boundary_samples angles each, staying inside the
/// locality ball.  The inter-sample Lipschitz gap
///   L_rho(R) * (sum j ||c_j||) * (2 pi / M)
/// is reported; gap_certified records whether it is below the observed
/// margin, so refining the angular grid cannot flip the verdict.
inline AdmissibilityReport disc_admissible(const DomainSpec& dom,
                                           const AnalyticDisc& phi,
                                           const DiscSearchConfig& cfg) {
  cfg.validate();
  if (phi.dimension() != dom.dimension)
    throw DimensionMismatch("disc dimension vs domain");
  AdmissibilityReport rep;

  const double reach = dom.reach_radius();
  const double loc2 = dom.locality_radius * dom.locality_radius;
  const int rings = cfg.interior_rings;
  const int M = cfg.boundary_samples;
  const double two_pi = 2.0 * std::acos(-1.0);

  double worst = -std::numeric_limits<double>::infinity();
  // Outermost ring first: inadmissible discs usually fail there.
  for (int j = rings; j >= 1; --j) {
    const double r = double(j) / double(rings);
    for (int s = 0; s < M; ++s) {
      const double th = two_pi * double(s) / double(M);
      const cxd tau = std::polar(r, th);
      CPoint pt = phi.evaluate(tau);
      if (norm2(pt) > reach * reach) {
        rep.admissible = false;
        rep.reason = AdmissibilityReport::Reason::exits_bounding_box;
        rep.worst_value = std::numeric_limits<double>::infinity();
        return rep;
      }
      double d2 = norm2(pt - dom.q);
      if (d2 >= loc2) {
        rep.admissible = false;
        rep.reason = AdmissibilityReport::Reason::outside_locality;
        rep.worst_value = std::numeric_limits<double>::infinity();
        return rep;
      }
      double v = dom.compiled.evaluate(pt);
      worst = std::max(worst, v);
      if (v >= -cfg.safety_margin) {
        rep.admissible = false;
        rep.reason = AdmissibilityReport::Reason::positive_sample;
        rep.worst_value = v;
        return rep;
      }
    }
  }
  rep.worst_value = worst;
  rep.cert_gap =
      dom.rho.lipschitz_bound(reach) * phi.coefficient_weight() * two_pi / M;
  rep.admissible = true;
  rep.reason = AdmissibilityReport::Reason::ok;
  // Certified when the inter-sample variation cannot reach 0 from the worst
  // sampled value (with the safety margin as an absolute floor).
  rep.gap_certified = rep.cert_gap < std::max(cfg.safety_margin, -worst);
  return rep;
}

/// Largest axis-disc scale usable across all delta < locality^2, derived
/// from the model coefficients: keeps the sample values negative and the
/// disc inside the locality ball.
inline double axis_disc_epsilon0(const DomainSpec& dom) {
  if (dom.family != Family::model)
    throw InvalidParameter("axis disc needs a model-family domain");
  const int k = *dom.declared_k;
  const int m = *dom.model_m;
  const double loc = dom.locality_radius;
  const double dmax = loc * loc;
  const double negativity = std::pow(dmax, 1.0 / (2.0 * m) - 1.0 / (4.0 * k + 1.0));
  const double inside = 0.99 * std::sqrt(loc * loc - dmax * dmax) /
                        std::pow(dmax, 1.0 / (4.0 * k + 1.0));
  return 0.95 * std::min({1.0, negativity, inside});
}

/// Linear disc tau -> (eps delta^{1/(4k+1)} tau, 0, -delta) based at
/// (0,0,-delta); the defining function along it is
/// -delta + beta^{2m} |tau|^{2m} with 2m > 4k+1, so admissibility holds for
/// eps up to the domain threshold.  axis = 1 puts the motion in the second
/// coordinate instead.
inline AnalyticDisc explicit_axis_disc(const DomainSpec& dom, double delta,
                                       double eps, int axis = 0,
                                       const DiscSearchConfig& cfg = {}) {
  if (dom.family != Family::model)
    throw InvalidParameter("axis disc needs a model-family domain");
  if (axis != 0 && axis != 1) throw InvalidParameter("axis must be 0 or 1");
  if (delta <= 0.0 || delta >= dom.locality_radius * dom.locality_radius)
    throw InvalidParameter("need 0 < delta < locality_radius^2");
  const double eps0 = axis_disc_epsilon0(dom);
  if (eps <= 0.0 || eps > eps0)
    throw InvalidParameter("disc scale exceeds the admissibility threshold " +
                           std::to_string(eps0));
  const int k = *dom.declared_k;
  const double beta = eps * std::pow(delta, 1.0 / (4.0 * k + 1.0));
  AnalyticDisc phi;
  phi.basepoint = {0.0, 0.0, -delta};
  CPoint c1(3, 0.0);
  c1[axis] = beta;
  phi.coefficients = {c1};
  auto rep = disc_admissible(dom, phi, cfg);
  if (!rep.admissible)
    throw SearchFailure("explicit axis disc failed admissibility: " +
                        AdmissibilityReport::reason_name(rep.reason));
  return phi;
}

}  // namespace sqz

#endif  // SQZ_DISC_HPP
