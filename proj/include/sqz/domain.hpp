#ifndef SQZ_DOMAIN_HPP
#define SQZ_DOMAIN_HPP

#include <optional>
#include <string>

#include "sqz/hermitian_polynomial.hpp"
#include "sqz/types.hpp"

namespace sqz {

enum class Family { model, herbort, convex_control, ball, custom };

inline std::string family_name(Family f) {
  switch (f) {
    case Family::model: return "model";
    case Family::herbort: return "herbort";
    case Family::convex_control: return "convex_control";
    case Family::ball: return "ball";
    case Family::custom: return "custom";
  }
  return "?";
}

/// A bounded domain given by rho < 0 localized to a neighborhood of the
/// boundary point q.  All metric work happens inside the locality ball.
struct DomainSpec {
  HermitianPolynomial rho{3};
  int dimension = 3;
  CPoint q;
  double locality_radius = 0.5;
  double bounding_radius = 1.0;  // working domain is contained in ball(bounding_radius)
  std::optional<int> declared_k;
  std::optional<int> declared_d;
  Family family = Family::custom;

  // Model-family parameters (set when family == model).
  std::optional<int> model_m, model_a, model_b;
  std::optional<double> ball_r;

  CompiledPoly compiled;

  void finalize() {
    rho.check_hermitian();
    if (std::abs(rho.evaluate(q)) > 1e-10)
      throw InvalidParameter("rho(q) must vanish at the boundary point");
    auto g = rho.wirtinger_gradient(q);
    if (norm(g) < kZeroTol)
      throw InvalidParameter("complex gradient of rho must be nonzero at q");
    if (locality_radius <= 0.0 || bounding_radius <= 0.0)
      throw InvalidParameter("radii must be positive");
    compiled = CompiledPoly(rho);
  }

  /// p belongs to the working domain iff rho(p) < 0 and ||p - q|| < locality_radius.
  bool contains(const CPoint& p) const {
    return rho.evaluate(p) < 0.0 && norm(p - q) < locality_radius;
  }

  /// Radius of a ball about the origin containing the working domain;
  /// used for Lipschitz bounds over everything a sampled disc can reach.
  double reach_radius() const { return norm(q) + locality_radius; }
};

/// ball(r): rho = |z|^2 + |w|^2 + |t|^2 - r^2, q = (0, 0, r).
inline DomainSpec make_ball(double r) {
  if (r <= 0.0) throw InvalidParameter("ball radius must be positive");
  DomainSpec d;
  d.family = Family::ball;
  d.ball_r = r;
  HermitianPolynomial rho(3);
  rho.add_abs_power(0, 1).add_abs_power(1, 1).add_abs_power(2, 1);
  rho.add_constant(-r * r);
  d.rho = std::move(rho);
  d.q = {0.0, 0.0, r};
  d.locality_radius = 3.0 * r;  // the whole ball stays inside the locality ball
  d.bounding_radius = r;
  d.declared_k = 1;
  d.declared_d = 2;
  d.finalize();
  return d;
}

/// Model family: rho = Re t + |z^a w^b|^2 + |z|^(2m) + |w|^(2m), q = 0.
/// Requires k >= 2, a + b = k with a, b >= 1, and 2m > 4k (default m = 2k+1).
inline DomainSpec make_model(int k, std::optional<int> m_opt = std::nullopt,
                             std::optional<int> a_opt = std::nullopt,
                             std::optional<int> b_opt = std::nullopt,
                             double locality = 0.5) {
  if (k < 2)
    throw InvalidParameter(
        "model family requires k >= 2: no degree-2 Hermitian form vanishing "
        "on both axes is plurisubharmonic without being pluriharmonic");
  const int m = m_opt.value_or(2 * k + 1);
  const int a = a_opt.value_or(k / 2 + (k % 2));
  const int b = b_opt.value_or(k - a);
  if (2 * m <= 4 * k) throw InvalidParameter("model requires 2m > 4k");
  if (a < 1 || b < 1 || a + b != k)
    throw InvalidParameter("model split needs a + b = k with a, b >= 1");
  if (2 * m > kMaxTotalDegree)
    throw TruncationOverflow("model axis exponent exceeds the degree cap");

  DomainSpec d;
  d.family = Family::model;
  d.declared_k = k;
  d.declared_d = 2 * k;
  d.model_m = m;
  d.model_a = a;
  d.model_b = b;
  HermitianPolynomial rho(3);
  rho.add_re_monomial({0, 0, 1});  // Re t
  std::vector<int> p = {a, b, 0};
  rho.add_pair(p, p, 1.0);  // |z^a w^b|^2
  rho.add_abs_power(0, m).add_abs_power(1, m);
  d.rho = std::move(rho);
  d.q = {0.0, 0.0, 0.0};
  d.locality_radius = locality;
  d.bounding_radius = d.q.size() ? norm(d.q) + locality : locality;
  d.finalize();
  return d;
}

/// Herbort domain: Re t + |z|^12 + |w|^12 + |z|^2 |w|^4 + |z|^6 |w|^2 < 0.
inline DomainSpec make_herbort(double locality = 0.5) {
  DomainSpec d;
  d.family = Family::herbort;
  d.declared_k = 3;
  d.declared_d = 6;  // lowest homogeneous degree of P, from the |z|^2 |w|^4 term
  HermitianPolynomial rho(3);
  rho.add_re_monomial({0, 0, 1});
  rho.add_abs_power(0, 6).add_abs_power(1, 6);
  rho.add_pair({1, 2, 0}, {1, 2, 0}, 1.0);  // |z|^2 |w|^4
  rho.add_pair({3, 1, 0}, {3, 1, 0}, 1.0);  // |z|^6 |w|^2
  d.rho = std::move(rho);
  d.q = {0.0, 0.0, 0.0};
  d.locality_radius = locality;
  d.bounding_radius = locality;
  d.finalize();
  return d;
}

/// Convex control domain: |t|^2 + |z|^2 + |w|^6 < 1, q = (0, 0, 1).
/// Negative control: bounded convex, squeezing uniformly bounded below.
inline DomainSpec make_convex_control(double locality = 0.5) {
  DomainSpec d;
  d.family = Family::convex_control;
  d.declared_k = 1;
  d.declared_d = 2;
  HermitianPolynomial rho(3);
  rho.add_abs_power(2, 1).add_abs_power(0, 1).add_abs_power(1, 3);
  rho.add_constant(-1.0);
  d.rho = std::move(rho);
  d.q = {0.0, 0.0, 1.0};
  d.locality_radius = locality;
  d.bounding_radius = 1.0 + locality;
  d.finalize();
  return d;
}

struct BuiltinParams {
  std::optional<int> k, m, a, b;
  std::optional<double> r;
  std::optional<double> locality;
};

inline DomainSpec make_builtin(Family f, const BuiltinParams& p = {}) {
  switch (f) {
    case Family::ball:
      return make_ball(p.r.value_or(1.0));
    case Family::model:
      return make_model(p.k.value_or(2), p.m, p.a, p.b, p.locality.value_or(0.5));
    case Family::herbort:
      return make_herbort(p.locality.value_or(0.5));
    case Family::convex_control:
      return make_convex_control(p.locality.value_or(0.5));
    case Family::custom:
      throw InvalidParameter("custom domains come from spec files");
  }
  throw InvalidParameter("unknown family");
}

/// Image of dom under Z -> U Z + b (used by the invariance tests and for
/// rotated variants of the built-ins).
inline DomainSpec transform_domain(const DomainSpec& dom,
                                   const std::vector<std::vector<cxd>>& U,
                                   const CPoint& b) {
  const int n = dom.dimension;
  // rho'(Z) = rho(U^{-1}(Z - b)); for unitary U the inverse is the adjoint.
  std::vector<std::vector<cxd>> Uinv(n, std::vector<cxd>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Uinv[i][j] = std::conj(U[j][i]);
  CPoint shift(n, 0.0);
  for (int i = 0; i < n; ++i) {
    cxd s = 0.0;
    for (int j = 0; j < n; ++j) s += Uinv[i][j] * b[j];
    shift[i] = -s;
  }
  DomainSpec out = dom;
  out.family = Family::custom;
  out.rho = dom.rho.compose_affine(Uinv, shift);
  CPoint q2(n, 0.0);
  for (int i = 0; i < n; ++i) {
    cxd s = 0.0;
    for (int j = 0; j < n; ++j) s += U[i][j] * dom.q[j];
    q2[i] = s + b[i];
  }
  out.q = q2;
  out.bounding_radius = dom.bounding_radius + norm(b);
  out.finalize();
  return out;
}

inline CPoint apply_linear(const std::vector<std::vector<cxd>>& U, const CPoint& x) {
  CPoint y(U.size(), 0.0);
  for (std::size_t i = 0; i < U.size(); ++i) {
    cxd s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) s += U[i][j] * x[j];
    y[i] = s;
  }
  return y;
}

}  // namespace sqz

#endif  // SQZ_DOMAIN_HPP
