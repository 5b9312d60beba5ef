#ifndef SQZ_NORMAL_FORM_HPP
#define SQZ_NORMAL_FORM_HPP

#include <optional>
#include <random>
#include <vector>

#include "sqz/hermitian_polynomial.hpp"
#include "sqz/jet.hpp"

namespace sqz {

// ---------------------------------------------------------------------------
// Jet evaluation helpers (used by the plurisubharmonicity validator and by
// violation witnesses).

inline cxd jet_evaluate(const Jet& j, const std::vector<cxd>& z, double u,
                        double v) {
  const int m = j.zvars();
  if (int(z.size()) != m) throw DimensionMismatch("jet evaluation point");
  cxd s = 0.0;
  for (const auto& [k, c] : j.terms()) {
    cxd t = c;
    for (int i = 0; i < m; ++i)
      for (int e = 0; e < k[i]; ++e) t *= z[i];
    for (int i = 0; i < m; ++i)
      for (int e = 0; e < k[m + i]; ++e) t *= std::conj(z[i]);
    for (int e = 0; e < k[2 * m]; ++e) t *= u;
    for (int e = 0; e < k[2 * m + 1]; ++e) t *= v;
    s += t;
  }
  return s;
}

/// Levi form of a z-polynomial jet at z along sigma.
inline double jet_levi_form(const Jet& p, const std::vector<cxd>& z,
                            const std::vector<cxd>& sigma) {
  const int m = p.zvars();
  cxd s = 0.0;
  for (const auto& [k, c] : p.terms()) {
    for (int i = 0; i < m; ++i) {
      if (k[i] == 0) continue;
      for (int j = 0; j < m; ++j) {
        if (k[m + j] == 0) continue;
        Jet::Key d = k;
        d[i] -= 1;
        d[m + j] -= 1;
        cxd t = c * double(k[i]) * double(k[m + j]);
        for (int a = 0; a < m; ++a) {
          for (int e = 0; e < d[a]; ++e) t *= z[a];
          for (int e = 0; e < d[m + a]; ++e) t *= std::conj(z[a]);
        }
        s += t * sigma[i] * std::conj(sigma[j]);
      }
    }
  }
  return s.real();
}

/// Sampled plurisubharmonicity test on the unit polydisc.
inline bool is_plurisubharmonic_sampled(const Jet& p, int samples = 400,
                                        std::uint64_t seed = 7) {
  const int m = p.zvars();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const double tol = 1e-10 * std::max(1.0, p.max_abs_coeff());
  for (int i = 0; i < samples; ++i) {
    std::vector<cxd> z(m), sigma(m);
    for (int j = 0; j < m; ++j) {
      z[j] = cxd(uni(rng), uni(rng));
      sigma[j] = cxd(uni(rng), uni(rng));
    }
    if (jet_levi_form(p, z, sigma) < -tol) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Transform log

struct Transform {
  enum class Kind { rescale, multiply_unit, substitute_t };
  Kind kind;
  double scale = 1.0;  // rescale
  Jet payload;         // multiply_unit: the unit factor; substitute_t: the new t expression

  static Transform make_rescale(int zvars, double s) {
    return Transform{Kind::rescale, s, Jet(zvars)};
  }
  static Transform make_multiply(Jet unit) {
    return Transform{Kind::multiply_unit, 1.0, std::move(unit)};
  }
  static Transform make_substitute(Jet t_expr) {
    return Transform{Kind::substitute_t, 1.0, std::move(t_expr)};
  }
};

using TransformLog = std::vector<Transform>;

inline Jet apply_transform(const Jet& j, const Transform& t) {
  switch (t.kind) {
    case Transform::Kind::rescale:
      return cxd(t.scale) * j;
    case Transform::Kind::multiply_unit:
      return (j * t.payload).prune(1e-15);
    case Transform::Kind::substitute_t:
      return j.substitute_t(t.payload).prune(1e-15);
  }
  throw Error("bad transform");
}

inline Jet replay(Jet j, const TransformLog& log) {
  for (const auto& t : log) j = apply_transform(j, t);
  return j;
}

// ---------------------------------------------------------------------------
// Elementary normalization steps

/// Forces the u^2 and v^2 coefficients to 1 and the uv coefficient to 0 by
/// the substitution t -> t + e t^2 and multiplication with 1 + e u / 1 + e v.
/// Requires u-coefficient 1.  Only degree >= 2 terms change.
inline Jet quadratic_normalize(const Jet& input, TransformLog* log = nullptr) {
  if (std::abs(input.coeff_u() - cxd(1.0)) > 1e-9)
    throw InvalidParameter("quadratic_normalize expects u-coefficient 1");
  Jet j = input;
  const int zv = j.zvars();
  const double eps = 1e-13;
  for (int pass = 0; pass < 8; ++pass) {
    const double a = j.coeff_u2().real();
    const double b = j.coeff_uv().real();
    const double c = j.coeff_v2().real();
    if (std::abs(a - 1.0) < eps && std::abs(b) < eps && std::abs(c - 1.0) < eps)
      return j;

    // t -> t + e t^2 fixes v^2 (real part) and uv (imaginary part).
    const cxd e(c - 1.0, b / 2.0);
    if (std::abs(e) >= eps) {
      Jet t = Jet::t_variable(zv, j.truncation_degree());
      Jet t_expr = t + e * (t * t);
      Transform tr = Transform::make_substitute(std::move(t_expr));
      j = apply_transform(j, tr);
      if (log) log->push_back(std::move(tr));
    }
    const double a2 = j.coeff_u2().real();
    if (std::abs(a2 - 1.0) >= eps) {
      Jet unit = Jet::constant(zv, 1.0, j.truncation_degree()) +
                 cxd(1.0 - a2) * Jet::variable(zv, j.u_index(), j.truncation_degree());
      Transform tr = Transform::make_multiply(std::move(unit));
      j = apply_transform(j, tr);
      if (log) log->push_back(std::move(tr));
    }
    const double b2 = j.coeff_uv().real();
    if (std::abs(b2) >= eps) {
      Jet unit = Jet::constant(zv, 1.0, j.truncation_degree()) -
                 cxd(b2) * Jet::variable(zv, j.v_index(), j.truncation_degree());
      Transform tr = Transform::make_multiply(std::move(unit));
      j = apply_transform(j, tr);
      if (log) log->push_back(std::move(tr));
    }
  }
  throw Error("quadratic normalization did not converge");
}

/// Removes every u * (z-monomial) term of z-degree <= 2k by repeatedly
/// multiplying with 1 - A(z); each pass doubles the minimal degree of A.
inline Jet eliminate_u_terms(const Jet& input, int k, TransformLog* log = nullptr) {
  Jet j = input;
  int max_passes = 2;
  while ((1 << max_passes) <= 2 * k) ++max_passes;
  ++max_passes;
  for (int pass = 0; pass <= max_passes; ++pass) {
    Jet a = j.u_linear_z_poly();
    a.prune(1e-13);
    int mindeg = a.min_degree(1e-13 * std::max(1.0, j.max_abs_coeff()));
    if (a.is_zero(1e-13 * std::max(1.0, j.max_abs_coeff())) || mindeg > 2 * k)
      return j;
    Jet unit = Jet::constant(j.zvars(), 1.0, j.truncation_degree()) - a;
    Transform tr = Transform::make_multiply(std::move(unit));
    j = apply_transform(j, tr);
    if (log) log->push_back(std::move(tr));
  }
  throw Error("u-term elimination did not terminate");
}

/// Holomorphic F with Im(F) = -B for a pluriharmonic real polynomial B,
/// so that F = A - iB with A = Re(F).
inline Jet pluriharmonic_companion(const Jet& b) {
  if (!is_pluriharmonic(b))
    throw InvalidParameter("companion requires a pluriharmonic input");
  if (!b.is_real(1e-9))
    throw InvalidParameter("companion requires a real-valued input");
  const int m = b.zvars();
  Jet f(m, b.truncation_degree());
  const cxd minus_i(0.0, -1.0);
  for (const auto& [k, c] : b.terms()) {
    int anti = 0;
    for (int j = 0; j < m; ++j) anti += k[m + j];
    if (anti > 0) continue;  // mirror of a holomorphic term
    int holo = 0;
    for (int j = 0; j < m; ++j) holo += k[j];
    f.add_term(k, minus_i * (holo == 0 ? c : 2.0 * c));
  }
  return f;
}

// ---------------------------------------------------------------------------
// Full reduction

enum class NormalFormStatus { normalized, pseudoconvexity_violation };

struct NormalFormResult {
  Jet jet;
  Jet P, Q, R;
  int k = 0;
  TransformLog transform_log;
  NormalFormStatus status = NormalFormStatus::normalized;
  std::optional<Jet> offending;  // the non-pluriharmonic B_l, l <= k
  int offending_degree = -1;

  NormalFormResult(int zvars, int trunc)
      : jet(zvars, trunc), P(zvars, trunc), Q(zvars, trunc), R(zvars, trunc) {}
};

/// Full reduction pipeline: quadratic normalization, u-term
/// elimination, then absorption of pluriharmonic lowest-order v-coefficients
/// via t -> t (1 + F(z)) until the remaining v-coefficient has degree
/// >= k+1, or a non-pluriharmonic B_l with l <= k certifies a
/// pseudoconvexity violation.
inline NormalFormResult reduce_to_normal_form(const Jet& input, int k) {
  if (k < 1) throw InvalidParameter("k must be positive");
  const int zv = input.zvars();
  NormalFormResult res(zv, input.truncation_degree());
  res.k = k;
  Jet j = input;

  // Normalize the u coefficient to 1.
  {
    cxd cu = j.coeff_u();
    if (std::abs(cu.imag()) > 1e-9 || cu.real() <= 1e-9)
      throw InvalidParameter("defining jet needs a positive real u coefficient");
    if (std::abs(cu.real() - 1.0) > 1e-13) {
      Transform tr = Transform::make_rescale(zv, 1.0 / cu.real());
      j = apply_transform(j, tr);
      res.transform_log.push_back(std::move(tr));
    }
  }

  // Validate P: lowest homogeneous part of the pure-z block, of degree 2k,
  // plurisubharmonic and not pluriharmonic.
  {
    Jet zpart = j.pure_z_part();
    if (std::abs(zpart.coeff(Jet::Key(j.nvars(), 0))) > 1e-10)
      throw InvalidParameter("jet must vanish at the base point");
    int lo = zpart.min_degree(1e-12 * std::max(1.0, zpart.max_abs_coeff()));
    if (lo != 2 * k)
      throw InvalidParameter("lowest z-degree must equal 2k");
    Jet p = zpart.homogeneous_component(lo);
    if (is_pluriharmonic(p))
      throw InvalidParameter("P must not be pluriharmonic");
    if (!is_plurisubharmonic_sampled(p))
      throw InvalidParameter("P must be plurisubharmonic");
  }

  j = quadratic_normalize(j, &res.transform_log);
  j = eliminate_u_terms(j, k, &res.transform_log);

  const int max_rounds = 4 * k;
  int round = 0;
  for (;; ++round) {
    if (round > max_rounds)
      throw Error("absorption exceeded the 4k round guard");
    Jet b = j.v_linear_z_poly();
    b.prune(1e-12);
    double scale = std::max(1.0, j.max_abs_coeff());
    if (b.is_zero(1e-12 * scale)) break;
    int s = b.min_degree(1e-12 * scale);
    if (s >= k + 1) break;
    Jet bs = b.homogeneous_component(s);
    if (!is_pluriharmonic(bs)) {
      res.status = NormalFormStatus::pseudoconvexity_violation;
      res.offending = bs;
      res.offending_degree = s;
      break;
    }
    // Absorb Re(tF) into u via the coordinate change t_new = t (1 + F):
    // t_old = t_new (1 + F)^{-1}, expanded as a geometric series.
    Jet f = pluriharmonic_companion(bs);
    Jet inv = Jet::constant(zv, 1.0, j.truncation_degree());
    Jet pw = Jet::constant(zv, 1.0, j.truncation_degree());
    const int steps = j.truncation_degree() / std::max(1, s) + 1;
    for (int i = 0; i < steps; ++i) {
      pw = cxd(-1.0) * (pw * f);
      if (pw.is_zero(0.0)) break;
      inv = inv + pw;
    }
    Jet t_expr = Jet::t_variable(zv, j.truncation_degree()) * inv;
    Transform tr2 = Transform::make_substitute(std::move(t_expr));
    j = apply_transform(j, tr2);
    res.transform_log.push_back(std::move(tr2));

    j = quadratic_normalize(j, &res.transform_log);
    j = eliminate_u_terms(j, k, &res.transform_log);
    j.prune(1e-14);
  }

  res.jet = j;
  Jet zpart = j.pure_z_part();
  double zscale = std::max(1.0, zpart.max_abs_coeff());
  int lo = zpart.min_degree(1e-12 * zscale);
  res.P = zpart.homogeneous_component(lo);
  res.Q = zpart - res.P;
  res.R = j.v_linear_z_poly();
  res.R.prune(1e-12);
  return res;
}

/// d = lowest nonzero homogeneous degree of P in the normalized jet; even
/// for pseudoconvex input.
inline int detect_model_type(const NormalFormResult& r) {
  if (r.status != NormalFormStatus::normalized)
    throw InvalidParameter("model type needs a normalized result");
  int d = r.P.min_degree(1e-12 * std::max(1.0, r.P.max_abs_coeff()));
  if (d < 0) throw InvalidParameter("P vanished");
  if (d % 2 != 0)
    throw Error("odd leading degree: input is not pseudoconvex or invalid");
  return d;
}

// ---------------------------------------------------------------------------
// Bridge from defining polynomials in (z, w, t) to jets in (z-block, u, v).

/// Expands a defining polynomial around the origin as a jet; the last
/// coordinate t becomes u + iv.
inline Jet hermitian_to_jet(const HermitianPolynomial& rho,
                            int trunc = kMaxTotalDegree) {
  const int n = rho.dimension();
  const int zv = n - 1;
  Jet out(zv, trunc);
  const Jet t = Jet::t_variable(zv, trunc);
  const Jet tbar = t.conj();
  for (const auto& [key, c] : rho.terms()) {
    Jet term = Jet::constant(zv, c, trunc);
    Jet::Key zkey(2 * zv + 2, 0);
    for (int j = 0; j < zv; ++j) {
      zkey[j] = key.alpha[j];
      zkey[zv + j] = key.beta[j];
    }
    if (Jet::degree_of(zkey) > 0) {
      Jet mono(zv, trunc);
      mono.add_term(zkey, 1.0);
      term = term * mono;
    }
    for (int e = 0; e < key.alpha[n - 1]; ++e) term = term * t;
    for (int e = 0; e < key.beta[n - 1]; ++e) term = term * tbar;
    out = out + term;
  }
  return out;
}

}  // namespace sqz

#endif  // SQZ_NORMAL_FORM_HPP
