#ifndef SQZ_HERMITIAN_POLYNOMIAL_HPP
#define SQZ_HERMITIAN_POLYNOMIAL_HPP

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "sqz/types.hpp"

namespace sqz {

/// Paired multi-index: holomorphic exponents `alpha` and anti-holomorphic
/// exponents `beta`, one entry per variable.
struct PairedIndex {
  std::vector<int> alpha;
  std::vector<int> beta;

  int total_degree() const {
    int d = 0;
    for (int a : alpha) d += a;
    for (int b : beta) d += b;
    return d;
  }

  PairedIndex swapped() const { return PairedIndex{beta, alpha}; }

  bool self_conjugate() const { return alpha == beta; }

  friend bool operator<(const PairedIndex& x, const PairedIndex& y) {
    if (x.alpha != y.alpha) return x.alpha < y.alpha;
    return x.beta < y.beta;
  }
  friend bool operator==(const PairedIndex& x, const PairedIndex& y) {
    return x.alpha == y.alpha && x.beta == y.beta;
  }
};

/// Real-valued polynomial in complex coordinates and their conjugates,
/// stored as coefficients c(alpha, beta) with the Hermitian symmetry
/// c(beta, alpha) = conj(c(alpha, beta)).  Represents defining functions.
class HermitianPolynomial {
 public:
  explicit HermitianPolynomial(int dimension) : dim_(dimension) {
    if (dimension < 1) throw InvalidParameter("dimension must be positive");
  }

  int dimension() const { return dim_; }
  const std::map<PairedIndex, cxd>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  /// Adds c into the (alpha, beta) slot without touching the mirror slot.
  /// The caller is responsible for keeping the polynomial Hermitian;
  /// check_hermitian() verifies it.
  HermitianPolynomial& add_raw(std::vector<int> alpha, std::vector<int> beta,
                               cxd c) {
    check_index(alpha, beta);
    PairedIndex key{std::move(alpha), std::move(beta)};
    auto it = terms_.find(key);
    cxd v = (it == terms_.end() ? c : it->second + c);
    if (std::abs(v) <= kZeroTol) {
      if (it != terms_.end()) terms_.erase(it);
    } else {
      terms_[std::move(key)] = v;
    }
    return *this;
  }

  /// Adds the Hermitian pair c*z^alpha*conj(z)^beta + conj(c)*z^beta*conj(z)^alpha.
  /// For a self-conjugate index (alpha == beta) the coefficient must be real
  /// and is added once.
  HermitianPolynomial& add_pair(std::vector<int> alpha, std::vector<int> beta,
                                cxd c) {
    if (alpha == beta) {
      if (std::abs(c.imag()) > kZeroTol)
        throw InvalidParameter("self-conjugate term needs a real coefficient");
      return add_raw(std::move(alpha), std::move(beta), c.real());
    }
    add_raw(alpha, beta, c);
    return add_raw(std::move(beta), std::move(alpha), std::conj(c));
  }

  /// |z_j|^(2m) convenience term.
  HermitianPolynomial& add_abs_power(int var, int m, double coeff = 1.0) {
    std::vector<int> e(dim_, 0);
    e[var] = m;
    return add_pair(e, e, coeff);
  }

  /// coeff * Re(z^alpha) and coeff * Im(z^alpha) for a holomorphic monomial.
  HermitianPolynomial& add_re_monomial(const std::vector<int>& alpha,
                                       double coeff = 1.0) {
    std::vector<int> zero(dim_, 0);
    return add_pair(alpha, zero, cxd(coeff / 2.0, 0.0));
  }
  HermitianPolynomial& add_im_monomial(const std::vector<int>& alpha,
                                       double coeff = 1.0) {
    std::vector<int> zero(dim_, 0);
    return add_pair(alpha, zero, cxd(0.0, -coeff / 2.0));
  }

  HermitianPolynomial& add_constant(double c) {
    std::vector<int> zero(dim_, 0);
    return add_raw(zero, zero, c);
  }

  void check_hermitian() const {
    for (const auto& [key, c] : terms_) {
      auto it = terms_.find(key.swapped());
      if (it == terms_.end() || std::abs(it->second - std::conj(c)) > 1e-9)
        throw InvalidParameter("polynomial is not Hermitian-symmetric");
    }
  }

  cxd evaluate_complex(const CPoint& p) const {
    require_point(p);
    cxd s = 0.0;
    for (const auto& [key, c] : terms_) s += c * monomial_value(key, p);
    return s;
  }

  /// Real value at p; the imaginary residue (< 1e-12 for Hermitian input)
  /// is discarded.
  double evaluate(const CPoint& p) const { return evaluate_complex(p).real(); }

  /// (d rho / d z_j) evaluated at p, for every j.
  std::vector<cxd> wirtinger_gradient(const CPoint& p) const {
    require_point(p);
    std::vector<cxd> g(dim_, 0.0);
    for (const auto& [key, c] : terms_) {
      for (int j = 0; j < dim_; ++j) {
        if (key.alpha[j] == 0) continue;
        PairedIndex d = key;
        d.alpha[j] -= 1;
        g[j] += c * double(key.alpha[j]) * monomial_value(d, p);
      }
    }
    return g;
  }

  /// Mixed second Wirtinger derivatives d^2 rho / (d z_j d conj(z_k)) at p.
  std::vector<std::vector<cxd>> mixed_hessian(const CPoint& p) const {
    require_point(p);
    std::vector<std::vector<cxd>> h(dim_, std::vector<cxd>(dim_, 0.0));
    for (const auto& [key, c] : terms_) {
      for (int j = 0; j < dim_; ++j) {
        if (key.alpha[j] == 0) continue;
        for (int k = 0; k < dim_; ++k) {
          if (key.beta[k] == 0) continue;
          PairedIndex d = key;
          d.alpha[j] -= 1;
          d.beta[k] -= 1;
          h[j][k] +=
              c * double(key.alpha[j]) * double(key.beta[k]) * monomial_value(d, p);
        }
      }
    }
    return h;
  }

  int total_degree() const {
    int d = 0;
    for (const auto& [key, c] : terms_) d = std::max(d, key.total_degree());
    return d;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [key, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  /// Upper bound for the Lipschitz constant of rho on the ball of radius R
  /// about the origin (real gradient norm, term-by-term).
  double lipschitz_bound(double R) const {
    double L = 0.0;
    for (const auto& [key, c] : terms_) {
      int d = key.total_degree();
      if (d == 0) continue;
      L += 2.0 * std::abs(c) * double(d) * std::pow(std::max(R, 1e-30), d - 1);
    }
    return L;
  }

  /// rho(U z + b) as a new polynomial; U is dim x dim, b a translation.
  HermitianPolynomial compose_affine(const std::vector<std::vector<cxd>>& U,
                                     const CPoint& b) const;

  friend bool operator==(const HermitianPolynomial& x,
                         const HermitianPolynomial& y) {
    return x.dim_ == y.dim_ && x.terms_ == y.terms_;
  }

 private:
  void check_index(const std::vector<int>& a, const std::vector<int>& b) const {
    if (int(a.size()) != dim_ || int(b.size()) != dim_)
      throw DimensionMismatch("multi-index length mismatch");
    int d = 0;
    for (int x : a) {
      if (x < 0) throw InvalidParameter("negative exponent");
      d += x;
    }
    for (int x : b) {
      if (x < 0) throw InvalidParameter("negative exponent");
      d += x;
    }
    if (d > kMaxTotalDegree)
      throw TruncationOverflow("term degree exceeds the expansion cap");
  }

  void require_point(const CPoint& p) const {
    if (int(p.size()) != dim_)
      throw DimensionMismatch("point dimension mismatch");
  }

  static cxd ipow(cxd z, int n) {
    cxd r = 1.0;
    while (n > 0) {
      if (n & 1) r *= z;
      z *= z;
      n >>= 1;
    }
    return r;
  }

  cxd monomial_value(const PairedIndex& key, const CPoint& p) const {
    cxd m = 1.0;
    for (int j = 0; j < dim_; ++j) {
      if (key.alpha[j] > 0) m *= ipow(p[j], key.alpha[j]);
      if (key.beta[j] > 0) m *= ipow(std::conj(p[j]), key.beta[j]);
    }
    return m;
  }

  int dim_;
  std::map<PairedIndex, cxd> terms_;
};

/// Flattened evaluation form with per-point power tables; used in the
/// disc-sampling hot path.
class CompiledPoly {
 public:
  CompiledPoly() = default;

  explicit CompiledPoly(const HermitianPolynomial& p) : dim_(p.dimension()) {
    max_deg_.assign(dim_, 0);
    for (const auto& [key, c] : p.terms()) {
      Term t;
      t.coeff = c;
      t.alpha = key.alpha;
      t.beta = key.beta;
      for (int j = 0; j < dim_; ++j)
        max_deg_[j] = std::max({max_deg_[j], key.alpha[j], key.beta[j]});
      terms_.push_back(std::move(t));
    }
    pow_.resize(dim_);
    pow_conj_.resize(dim_);
    for (int j = 0; j < dim_; ++j) {
      pow_[j].resize(max_deg_[j] + 1);
      pow_conj_[j].resize(max_deg_[j] + 1);
    }
  }

  double evaluate(const CPoint& p) const {
    for (int j = 0; j < dim_; ++j) {
      pow_[j][0] = 1.0;
      pow_conj_[j][0] = 1.0;
      const cxd zj = p[j];
      const cxd zjc = std::conj(zj);
      for (int e = 1; e <= max_deg_[j]; ++e) {
        pow_[j][e] = pow_[j][e - 1] * zj;
        pow_conj_[j][e] = pow_conj_[j][e - 1] * zjc;
      }
    }
    cxd s = 0.0;
    for (const Term& t : terms_) {
      cxd m = t.coeff;
      for (int j = 0; j < dim_; ++j) {
        if (t.alpha[j] > 0) m *= pow_[j][t.alpha[j]];
        if (t.beta[j] > 0) m *= pow_conj_[j][t.beta[j]];
      }
      s += m;
    }
    return s.real();
  }

 private:
  struct Term {
    cxd coeff;
    std::vector<int> alpha, beta;
  };
  int dim_ = 0;
  std::vector<Term> terms_;
  std::vector<int> max_deg_;
  mutable std::vector<std::vector<cxd>> pow_, pow_conj_;
};

inline HermitianPolynomial HermitianPolynomial::compose_affine(
    const std::vector<std::vector<cxd>>& U, const CPoint& b) const {
  if (int(U.size()) != dim_ || int(b.size()) != dim_)
    throw DimensionMismatch("affine map dimension mismatch");

  using Sparse = std::map<PairedIndex, cxd>;
  const PairedIndex one_key{std::vector<int>(dim_, 0), std::vector<int>(dim_, 0)};

  auto mul = [&](const Sparse& x, const Sparse& y) {
    Sparse r;
    for (const auto& [kx, cx] : x)
      for (const auto& [ky, cy] : y) {
        PairedIndex k = kx;
        for (int j = 0; j < dim_; ++j) {
          k.alpha[j] += ky.alpha[j];
          k.beta[j] += ky.beta[j];
        }
        if (k.total_degree() > kMaxTotalDegree)
          throw TruncationOverflow("affine composition exceeds the degree cap");
        cxd v = r.count(k) ? r[k] + cx * cy : cx * cy;
        if (std::abs(v) <= 1e-300)
          r.erase(k);
        else
          r[k] = v;
      }
    return r;
  };

  // Linear images of each variable and its conjugate.
  std::vector<Sparse> lin(dim_), lin_conj(dim_);
  for (int j = 0; j < dim_; ++j) {
    if (std::abs(b[j]) > 0.0) {
      lin[j][one_key] = b[j];
      lin_conj[j][one_key] = std::conj(b[j]);
    }
    for (int k = 0; k < dim_; ++k) {
      if (std::abs(U[j][k]) == 0.0) continue;
      PairedIndex e{std::vector<int>(dim_, 0), std::vector<int>(dim_, 0)};
      e.alpha[k] = 1;
      lin[j][e] = U[j][k];
      PairedIndex ec{std::vector<int>(dim_, 0), std::vector<int>(dim_, 0)};
      ec.beta[k] = 1;
      lin_conj[j][ec] = std::conj(U[j][k]);
    }
  }

  Sparse total;
  for (const auto& [key, c] : terms_) {
    Sparse acc;
    acc[one_key] = c;
    for (int j = 0; j < dim_; ++j) {
      for (int e = 0; e < key.alpha[j]; ++e) acc = mul(acc, lin[j]);
      for (int e = 0; e < key.beta[j]; ++e) acc = mul(acc, lin_conj[j]);
    }
    for (const auto& [k, v] : acc) {
      cxd nv = total.count(k) ? total[k] + v : v;
      if (std::abs(nv) <= 1e-300)
        total.erase(k);
      else
        total[k] = nv;
    }
  }

  HermitianPolynomial out(dim_);
  for (const auto& [k, v] : total)
    if (std::abs(v) > kZeroTol) out.add_raw(k.alpha, k.beta, v);
  return out;
}

struct LeviQuery {
  CPoint point;
  CPoint tangent;  // sigma, nonzero
};

/// Levi form of rho at q.point along q.tangent.
inline double levi_form(const HermitianPolynomial& rho, const LeviQuery& q) {
  if (norm2(q.tangent) < kZeroTol * kZeroTol)
    throw InvalidParameter("tangent vector must be nonzero");
  auto h = rho.mixed_hessian(q.point);
  cxd s = 0.0;
  const int n = rho.dimension();
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      s += h[j][k] * q.tangent[j] * std::conj(q.tangent[k]);
  return s.real();
}

/// Completes a partial tangent xi (length n-1) to a full complex tangent
/// sigma = (xi, lambda) of {rho = rho(point)} at `point`, solving
/// sum (d rho/d z_j) xi_j + (d rho/d t) lambda = 0.
inline CPoint complex_tangent_complete(const HermitianPolynomial& rho,
                                       const CPoint& point,
                                       const CPoint& partial) {
  const int n = rho.dimension();
  if (int(partial.size()) != n - 1)
    throw DimensionMismatch("partial tangent must have length n-1");
  auto g = rho.wirtinger_gradient(point);
  if (std::abs(g[n - 1]) < kZeroTol)
    throw DegenerateNormal("d rho / d t vanishes at the given point");
  cxd num = 0.0;
  for (int j = 0; j < n - 1; ++j) num += g[j] * partial[j];
  CPoint sigma = partial;
  sigma.push_back(-num / g[n - 1]);
  return sigma;
}

/// Lowest total degree in (tau, conj tau) of rho(q + tau * direction);
/// kInfiniteContact if the composition vanishes up to the degree cap.
inline int order_of_contact_along(const HermitianPolynomial& rho,
                                  const CPoint& q, const CPoint& direction) {
  const int n = rho.dimension();
  if (int(q.size()) != n || int(direction.size()) != n)
    throw DimensionMismatch("point/direction dimension mismatch");
  if (norm2(direction) < kZeroTol * kZeroTol)
    throw InvalidParameter("direction must be nonzero");

  const int D = kMaxTotalDegree;
  // coeffs[a][b] multiplies tau^a conj(tau)^b.
  std::vector<std::vector<cxd>> coeffs(D + 1, std::vector<cxd>(D + 1, 0.0));

  // Binomial table.
  std::vector<std::vector<double>> binom(D + 1, std::vector<double>(D + 1, 0.0));
  for (int i = 0; i <= D; ++i) {
    binom[i][0] = 1.0;
    for (int j = 1; j <= i; ++j)
      binom[i][j] = binom[i - 1][j - 1] + (j <= i - 1 ? binom[i - 1][j] : 0.0);
  }
  auto ipow = [](cxd z, int e) {
    cxd r = 1.0;
    while (e > 0) { r *= z; --e; }
    return r;
  };

  for (const auto& [key, c] : rho.terms()) {
    // Expand prod_j (q_j + tau d_j)^alpha_j * prod_j conj(...)^beta_j.
    std::vector<cxd> holo(1, 1.0);  // coefficients in tau
    for (int j = 0; j < n; ++j) {
      const int a = key.alpha[j];
      if (a == 0) continue;
      std::vector<cxd> factor(a + 1);
      for (int i = 0; i <= a; ++i)
        factor[i] = binom[a][i] * ipow(direction[j], i) * ipow(q[j], a - i);
      std::vector<cxd> next(holo.size() + a, 0.0);
      for (std::size_t x = 0; x < holo.size(); ++x)
        for (int i = 0; i <= a; ++i) next[x + i] += holo[x] * factor[i];
      holo = std::move(next);
    }
    std::vector<cxd> anti(1, 1.0);  // coefficients in conj(tau)
    for (int j = 0; j < n; ++j) {
      const int bdeg = key.beta[j];
      if (bdeg == 0) continue;
      std::vector<cxd> factor(bdeg + 1);
      for (int i = 0; i <= bdeg; ++i)
        factor[i] = binom[bdeg][i] * ipow(std::conj(direction[j]), i) *
                    ipow(std::conj(q[j]), bdeg - i);
      std::vector<cxd> next(anti.size() + bdeg, 0.0);
      for (std::size_t x = 0; x < anti.size(); ++x)
        for (int i = 0; i <= bdeg; ++i) next[x + i] += anti[x] * factor[i];
      anti = std::move(next);
    }
    for (std::size_t a = 0; a < holo.size(); ++a)
      for (std::size_t b = 0; b < anti.size(); ++b)
        if (a <= std::size_t(D) && b <= std::size_t(D))
          coeffs[a][b] += c * holo[a] * anti[b];
  }

  double scale = 0.0;
  for (int a = 0; a <= D; ++a)
    for (int b = 0; b <= D; ++b) scale = std::max(scale, std::abs(coeffs[a][b]));
  if (scale == 0.0) return kInfiniteContact;
  const double tol = 1e-10 * scale;

  for (int total = 0; total <= D; ++total)
    for (int a = 0; a <= total; ++a)
      if (std::abs(coeffs[a][total - a]) > tol) return total;
  return kInfiniteContact;
}

}  // namespace sqz

#endif  // SQZ_HERMITIAN_POLYNOMIAL_HPP
