#ifndef SQZ_SQUEEZING_HPP
#define SQZ_SQUEEZING_HPP

#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sqz/kobayashi.hpp"

namespace sqz {

// ---------------------------------------------------------------------------
// Exact rational exponents

struct Rational {
  long long num = 0;
  long long den = 1;

  Rational() = default;
  Rational(long long n, long long d) : num(n), den(d) {
    if (den == 0) throw InvalidParameter("zero denominator");
    if (den < 0) {
      num = -num;
      den = -den;
    }
    long long g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  double to_double() const { return double(num) / double(den); }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return Rational(a.num * b.den - b.num * a.den, a.den * b.den);
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return Rational(a.num * b.num, a.den * b.den);
  }
  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num == b.num && a.den == b.den;
  }
  std::string str() const {
    return std::to_string(num) + "/" + std::to_string(den);
  }
};

enum class ExponentVariant { standard, positive_terms };

/// Decay exponent of the squeezing bound: the gap between the diagonal
/// lower-bound exponent and the axis upper-bound exponent.
///   standard:       1/(4k) - 1/(4k+1) = 1/(4k(4k+1))
///   positive_terms: 1/(2k) - 1/(2k+1) = 1/(2k(2k+1))
inline Rational exponent_composition(int k, ExponentVariant variant) {
  if (k < 1) throw InvalidParameter("k must be >= 1");
  const long long kk = k;
  if (variant == ExponentVariant::standard)
    return Rational(1, 4 * kk) - Rational(1, 4 * kk + 1);
  return Rational(1, 2 * kk) - Rational(1, 2 * kk + 1);
}

// ---------------------------------------------------------------------------
// Obstruction lemma

/// Smallest (up to margin) eps with eps * lambda * ||zeta1 + zeta2|| > r_d:
/// the vector eps * (lambda zeta1 + lambda zeta2) then lies outside the
/// indicatrix while lambda zeta1, lambda zeta2 lie inside, so no linear map
/// can squeeze B(3 eps) into the unit ball through it.
inline double obstruction_epsilon(double lambda, double r_d, const CPoint& z1,
                                  const CPoint& z2, double margin = 1e-3) {
  if (lambda <= 0.0 || r_d <= 0.0)
    throw InvalidParameter("lambda and r_d must be positive");
  if (margin < 0.0) throw InvalidParameter("margin must be nonnegative");
  // Linear independence via the Gram determinant.
  const double g11 = norm2(z1), g22 = norm2(z2);
  const cxd g12 = inner(z1, z2);
  if (g11 * g22 - std::norm(g12) < 1e-12 * g11 * g22 ||
      g11 < kZeroTol || g22 < kZeroTol)
    throw InvalidParameter("directions must be linearly independent");
  const double denom = lambda * norm(z1 + z2);
  return r_d * (1.0 + margin) / denom;
}

// ---------------------------------------------------------------------------
// Sampling oracle for the no-linear-map conclusion

/// Star-shaped set around the origin given by a directional radius
/// function: x is a member iff ||x|| <= radius(x/||x||).
struct StarShapedSet {
  int dimension = 3;
  std::function<double(const CPoint&)> radius;  // unit direction -> radius

  bool contains(const CPoint& x) const {
    const double n = norm(x);
    if (n < kZeroTol) return true;
    return n <= radius(cxd(1.0 / n) * x);
  }
};

namespace detail {

inline CPoint random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  CPoint v(n);
  for (auto& c : v) c = cxd(g(rng), g(rng));
  return normalized(v);
}

/// Solves A x = b for a small complex matrix by Gaussian elimination with
/// partial pivoting; returns false when A is (near-)singular.
inline bool solve_linear(std::vector<std::vector<cxd>> a, CPoint b, CPoint& x) {
  const int n = int(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    if (std::abs(a[piv][col]) < 1e-12) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < n; ++r) {
      cxd f = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    cxd s = b[r];
    for (int c = r + 1; c < n; ++c) s -= a[r][c] * x[c];
    x[r] = s / a[r][r];
  }
  return true;
}

}  // namespace detail

/// Samples random linear maps L scaled so that L(D) fits in the unit ball
/// (max over boundary samples of D) and returns true iff none of them
/// achieves B(3 eps) inside L(D), tested on a direction grid plus the
/// obstruction witness direction.  Must hold whenever the hypothesis
/// (lambda zeta1, lambda zeta2 in D, eps (lambda zeta1 + lambda zeta2)
/// outside D) is satisfied.
inline bool no_linear_map_check(const StarShapedSet& D, const CPoint& zeta1,
                                const CPoint& zeta2, double lambda, double eps,
                                int trials = 10000,
                                std::uint64_t seed = 20260823) {
  const int n = D.dimension;
  if (int(zeta1.size()) != n || int(zeta2.size()) != n)
    throw DimensionMismatch("direction dimension vs set");
  const CPoint v1 = cxd(lambda) * zeta1;
  const CPoint v2 = cxd(lambda) * zeta2;
  if (!D.contains(v1) || !D.contains(v2))
    throw HypothesisNotSatisfied("lambda zeta1, lambda zeta2 must lie in D");
  const CPoint witness = cxd(eps) * (v1 + v2);
  if (D.contains(witness))
    throw HypothesisNotSatisfied(
        "eps (lambda zeta1 + lambda zeta2) must lie outside D");

  std::mt19937_64 rng(seed);
  // Fixed boundary sample set used to normalize every trial map.
  std::vector<CPoint> boundary;
  for (int i = 0; i < n; ++i) {
    CPoint e(n, 0.0);
    e[i] = 1.0;
    boundary.push_back(e);
  }
  for (int i = 0; i < 256; ++i) boundary.push_back(detail::random_unit(rng, n));
  for (auto& e : boundary) e = cxd(D.radius(e)) * e;  // move onto the boundary
  boundary.push_back(v1);
  boundary.push_back(v2);

  std::normal_distribution<double> g(0.0, 1.0);
  for (int t = 0; t < trials; ++t) {
    std::vector<std::vector<cxd>> L(n, std::vector<cxd>(n));
    for (auto& row : L)
      for (auto& c : row) c = cxd(g(rng), g(rng));
    double scale = 0.0;
    for (const auto& e : boundary) scale = std::max(scale, norm(apply_linear(L, e)));
    if (scale < 1e-9) continue;  // degenerate draw
    for (auto& row : L)
      for (auto& c : row) c /= scale;  // now L(D) subset of B(1) on samples

    // B(3 eps) subset of L(D) needs every tested point 3 eps u in L(D),
    // i.e. L^{-1}(3 eps u) in D.  One point outside refutes containment.
    bool contained = true;
    CPoint x;
    auto test_point = [&](const CPoint& u) {
      CPoint pt = cxd(3.0 * eps) * u;
      if (!detail::solve_linear(L, pt, x)) return false;  // singular: no containment
      return D.contains(x);
    };
    CPoint y = apply_linear(L, v1 + v2);
    if (norm(y) > kZeroTol && !test_point(normalized(y))) contained = false;
    for (int u = 0; contained && u < 16; ++u)
      if (!test_point(detail::random_unit(rng, n))) contained = false;
    if (contained) return false;  // counterexample to the obstruction
  }
  return true;
}

// ---------------------------------------------------------------------------
// Squeezing upper bound pipeline

struct SqueezingBound {
  CPoint basepoint;
  double delta = 0.0;
  CPoint zeta1, zeta2;
  double lambda = 0.0;     // indicatrix radius lower bound along both axes
  double r_d = 0.0;        // diagonal radius upper bound
  double epsilon = 0.0;
  double bound = 1.0;      // min(1, 3 epsilon)
  std::string diagnostic;  // "no certificate" for the vacuous case
  std::vector<MetricEstimate> trace;
};

/// Upper bound on the squeezing function at p = q + (0,0,-delta):
/// lambda from the axis disc-search upper bounds, r_d from the diagonal
/// certificate reciprocal, eps from the obstruction lemma, bound =
/// min(1, 3 eps).  Families without a certificate get the vacuous bound 1
/// with a diagnostic, never a fabricated decay.
inline SqueezingBound squeezing_upper(const DomainSpec& dom, double delta,
                                      const DiscSearchConfig& cfg = {},
                                      double margin = 1e-3) {
  if (delta <= 0.0) throw InvalidParameter("delta must be positive");
  SqueezingBound out;
  out.delta = delta;
  out.zeta1 = {1.0, 0.0, 0.0};
  out.zeta2 = {0.0, 1.0, 0.0};
  CPoint p = dom.q;
  p[2] -= delta;
  out.basepoint = p;

  if (dom.family != Family::model && dom.family != Family::herbort) {
    out.diagnostic = "no certificate";
    out.bound = 1.0;
    return out;
  }

  MetricEstimate up1 = kobayashi_upper(dom, p, out.zeta1, cfg);
  MetricEstimate up2 = kobayashi_upper(dom, p, out.zeta2, cfg);
  MetricEstimate lowd = diag_lower_certificate(dom, delta);
  out.trace = {up1, up2, lowd};
  out.lambda = std::min(1.0 / up1.value, 1.0 / up2.value);
  out.r_d = 1.0 / lowd.value;
  out.epsilon = obstruction_epsilon(out.lambda, out.r_d, out.zeta1, out.zeta2,
                                    margin);
  out.bound = std::min(1.0, 3.0 * out.epsilon);
  if (out.bound <= 0.0) throw Error("squeezing bound must be positive");
  return out;
}

// ---------------------------------------------------------------------------
// Delta-sweep decay experiment

enum class ExperimentMode { numeric, closed_form };

inline std::string experiment_mode_name(ExperimentMode m) {
  return m == ExperimentMode::numeric ? "numeric" : "closed_form";
}

struct ExperimentRow {
  double delta = 0.0;
  double K_axis_upper = 0.0;
  double K_diag_lower = 0.0;
  double lambda = 0.0;
  double r_d = 0.0;
  double epsilon = 0.0;
  double bound = 1.0;
  std::string diagnostic;
};

struct ExperimentTable {
  ExperimentMode mode = ExperimentMode::numeric;
  std::vector<ExperimentRow> rows;  // sorted by delta descending
  std::optional<double> slope;      // log(bound) vs log(delta) least squares
  std::optional<Rational> theoretical_exponent;
  std::string verdict;
};

namespace detail {

inline std::optional<double> loglog_slope(const std::vector<ExperimentRow>& rows) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (const auto& r : rows) {
    if (r.bound >= 1.0 || r.bound <= 0.0) return std::nullopt;  // vacuous rows
    const double x = std::log(r.delta), y = std::log(r.bound);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::nullopt;
  const double d = double(n) * sxx - sx * sx;
  if (std::abs(d) < 1e-30) return std::nullopt;
  return (double(n) * sxy - sx * sy) / d;
}

}  // namespace detail

/// One squeezing_upper row per delta.  closed_form mode evaluates the
/// analytic scaling laws (exact exponent by construction): with delta_ref
/// the largest delta,
///   lambda(delta) = 0.25 (delta/delta_ref)^{e_up}
///   eps(delta)    = 0.32 (delta/delta_ref)^{e_low - e_up}
/// where (e_low, e_up) = (1/(4k), 1/(4k+1)) for the model family and
/// (1/(2k), 1/(2k+1)) for the positive-term family; r_d is derived so the
/// obstruction formula reproduces eps exactly.  The reference scales keep
/// every bound strictly below 1 so the log-log slope is the exponent gap.
inline ExperimentTable decay_experiment(const DomainSpec& dom,
                                        const std::vector<double>& deltas,
                                        const DiscSearchConfig& cfg = {},
                                        ExperimentMode mode = ExperimentMode::numeric,
                                        double margin = 1e-3) {
  if (deltas.empty()) throw InvalidParameter("need at least one delta");
  for (std::size_t i = 0; i + 1 < deltas.size(); ++i)
    if (deltas[i] <= deltas[i + 1])
      throw InvalidParameter("deltas must be strictly decreasing");
  for (double d : deltas)
    if (d <= 0.0 || d >= dom.locality_radius * dom.locality_radius)
      throw InvalidParameter("each delta must satisfy 0 < delta < locality^2");

  ExperimentTable table;
  table.mode = mode;
  const bool certified =
      dom.family == Family::model || dom.family == Family::herbort;
  if (certified) {
    const int k = *dom.declared_k;
    table.theoretical_exponent = exponent_composition(
        k, dom.family == Family::model ? ExponentVariant::standard
                                       : ExponentVariant::positive_terms);
  }

  if (mode == ExperimentMode::closed_form) {
    if (!certified)
      throw CertificateUnavailable(
          "closed-form scaling laws exist only for the certified families");
    const int k = *dom.declared_k;
    const double e_low = dom.family == Family::model ? 1.0 / (4.0 * k)
                                                     : 1.0 / (2.0 * k);
    const double e_up = dom.family == Family::model ? 1.0 / (4.0 * k + 1.0)
                                                    : 1.0 / (2.0 * k + 1.0);
    const double dref = deltas.front();
    for (double d : deltas) {
      ExperimentRow row;
      row.delta = d;
      row.lambda = 0.25 * std::pow(d / dref, e_up);
      row.epsilon = 0.32 * std::pow(d / dref, e_low - e_up);
      row.r_d = row.epsilon * row.lambda * std::sqrt(2.0) / (1.0 + margin);
      row.K_axis_upper = 1.0 / row.lambda;
      row.K_diag_lower = 1.0 / row.r_d;
      row.bound = 3.0 * row.epsilon;
      if (row.bound >= 1.0) throw Error("closed-form bound left (0,1)");
      table.rows.push_back(std::move(row));
    }
    table.slope = detail::loglog_slope(table.rows);
    table.verdict = "exact_exponent";
    return table;
  }

  for (double d : deltas) {
    SqueezingBound b = squeezing_upper(dom, d, cfg, margin);
    ExperimentRow row;
    row.delta = d;
    row.lambda = b.lambda;
    row.r_d = b.r_d;
    row.epsilon = b.epsilon;
    row.bound = b.bound;
    row.diagnostic = b.diagnostic;
    row.K_axis_upper = b.lambda > 0.0 ? 1.0 / b.lambda : 0.0;
    row.K_diag_lower = b.r_d > 0.0 ? 1.0 / b.r_d : 0.0;
    table.rows.push_back(std::move(row));
  }
  table.slope = detail::loglog_slope(table.rows);
  bool decreasing = table.rows.size() >= 2;
  for (std::size_t i = 0; i + 1 < table.rows.size(); ++i)
    if (!(table.rows[i + 1].bound < table.rows[i].bound)) decreasing = false;
  table.verdict = decreasing ? "decays" : "no decay evidence";
  return table;
}

}  // namespace sqz

#endif  // SQZ_SQUEEZING_HPP
