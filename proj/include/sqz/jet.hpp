#ifndef SQZ_JET_HPP
#define SQZ_JET_HPP

#include <algorithm>
#include <map>
#include <vector>

#include "sqz/types.hpp"

namespace sqz {

/// Truncated polynomial jet in the variables
///   z_1..z_m, conj(z_1)..conj(z_m), u, v
/// with complex coefficients.  Real-valued jets satisfy the Hermitian
/// symmetry coeff(swap z-block) = conj(coeff).  All arithmetic re-truncates
/// at truncation_degree.
class Jet {
 public:
  using Key = std::vector<int>;  // exponents, length 2m + 2

  explicit Jet(int zvars, int truncation_degree = kMaxTotalDegree)
      : zvars_(zvars), trunc_(truncation_degree) {
    if (zvars < 1) throw InvalidParameter("need at least one z variable");
    if (truncation_degree < 1 || truncation_degree > kMaxTotalDegree)
      throw InvalidParameter("truncation degree out of range");
  }

  int zvars() const { return zvars_; }
  int nvars() const { return 2 * zvars_ + 2; }
  int u_index() const { return 2 * zvars_; }
  int v_index() const { return 2 * zvars_ + 1; }
  int truncation_degree() const { return trunc_; }
  const std::map<Key, cxd>& terms() const { return terms_; }
  bool is_zero(double tol = kZeroTol) const {
    for (const auto& [k, c] : terms_)
      if (std::abs(c) > tol) return false;
    return true;
  }

  static int degree_of(const Key& k) {
    int d = 0;
    for (int e : k) d += e;
    return d;
  }
  int z_degree_of(const Key& k) const {
    int d = 0;
    for (int j = 0; j < 2 * zvars_; ++j) d += k[j];
    return d;
  }

  Jet& add_term(const Key& k, cxd c) {
    if (int(k.size()) != nvars()) throw DimensionMismatch("jet key length");
    for (int e : k)
      if (e < 0) throw InvalidParameter("negative exponent");
    if (degree_of(k) > trunc_) return *this;  // truncated away
    auto it = terms_.find(k);
    cxd v = (it == terms_.end()) ? c : it->second + c;
    if (std::abs(v) <= 1e-300) {
      if (it != terms_.end()) terms_.erase(it);
    } else {
      terms_[k] = v;
    }
    return *this;
  }

  cxd coeff(const Key& k) const {
    auto it = terms_.find(k);
    return it == terms_.end() ? cxd(0.0) : it->second;
  }

  Jet& prune(double tol = 1e-14) {
    double scale = max_abs_coeff();
    if (scale == 0.0) return *this;
    for (auto it = terms_.begin(); it != terms_.end();) {
      if (std::abs(it->second) <= tol * scale)
        it = terms_.erase(it);
      else
        ++it;
    }
    return *this;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
    return m;
  }

  // ---- arithmetic ----

  friend Jet operator+(const Jet& a, const Jet& b) {
    a.require_compatible(b);
    Jet r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(k, c);
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    a.require_compatible(b);
    Jet r = a;
    for (const auto& [k, c] : b.terms_) r.add_term(k, -c);
    return r;
  }
  friend Jet operator*(cxd s, const Jet& a) {
    Jet r(a.zvars_, a.trunc_);
    for (const auto& [k, c] : a.terms_) r.add_term(k, s * c);
    return r;
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    a.require_compatible(b);
    Jet r(a.zvars_, a.trunc_);
    for (const auto& [ka, ca] : a.terms_) {
      const int da = degree_of(ka);
      for (const auto& [kb, cb] : b.terms_) {
        if (da + degree_of(kb) > a.trunc_) continue;
        Key k = ka;
        for (int j = 0; j < int(k.size()); ++j) k[j] += kb[j];
        r.add_term(k, ca * cb);
      }
    }
    return r;
  }

  /// Swaps the z-block with its conjugate block and conjugates coefficients
  /// (u, v are real variables).
  Jet conj() const {
    Jet r(zvars_, trunc_);
    for (const auto& [k, c] : terms_) {
      Key kk = k;
      for (int j = 0; j < zvars_; ++j) std::swap(kk[j], kk[zvars_ + j]);
      r.add_term(kk, std::conj(c));
    }
    return r;
  }

  Jet real_part() const { return cxd(0.5) * (*this + conj()); }
  Jet imag_part() const { return cxd(0.0, -0.5) * (*this - conj()); }

  bool is_real(double tol = 1e-10) const {
    Jet d = *this - conj();
    return d.is_zero(tol * std::max(1.0, max_abs_coeff()));
  }

  // ---- constructors for common pieces ----

  static Jet variable(int zvars, int var, int trunc = kMaxTotalDegree) {
    Jet j(zvars, trunc);
    Key k(2 * zvars + 2, 0);
    k[var] = 1;
    j.add_term(k, 1.0);
    return j;
  }
  static Jet constant(int zvars, cxd c, int trunc = kMaxTotalDegree) {
    Jet j(zvars, trunc);
    if (std::abs(c) > 0.0) j.add_term(Key(2 * zvars + 2, 0), c);
    return j;
  }
  /// t = u + i v as a complex-valued jet.
  static Jet t_variable(int zvars, int trunc = kMaxTotalDegree) {
    Jet j(zvars, trunc);
    Key ku(2 * zvars + 2, 0), kv(2 * zvars + 2, 0);
    ku[2 * zvars] = 1;
    kv[2 * zvars + 1] = 1;
    j.add_term(ku, 1.0);
    j.add_term(kv, cxd(0.0, 1.0));
    return j;
  }

  /// Substitutes jets for a subset of variables (index -> replacement);
  /// unlisted variables map to themselves.
  Jet substitute(const std::map<int, Jet>& repl) const {
    // Power cache per substituted variable.
    std::map<int, std::vector<Jet>> powers;
    auto power_of = [&](int var, int e) -> const Jet& {
      auto& vec = powers[var];
      if (vec.empty()) vec.push_back(Jet::constant(zvars_, 1.0, trunc_));
      while (int(vec.size()) <= e) {
        const Jet& base = repl.at(var);
        vec.push_back(vec.back() * base);
      }
      return vec[e];
    };

    Jet r(zvars_, trunc_);
    for (const auto& [k, c] : terms_) {
      Jet acc = Jet::constant(zvars_, c, trunc_);
      Key passthrough(nvars(), 0);
      bool pure = true;
      for (int j = 0; j < nvars(); ++j) {
        if (k[j] == 0) continue;
        if (repl.count(j)) {
          acc = acc * power_of(j, k[j]);
          pure = false;
        } else {
          passthrough[j] = k[j];
        }
      }
      if (pure) {
        r.add_term(k, c);
        continue;
      }
      if (degree_of(passthrough) > 0) {
        Jet mono(zvars_, trunc_);
        mono.add_term(passthrough, 1.0);
        acc = acc * mono;
      }
      for (const auto& [kk, cc] : acc.terms_) r.add_term(kk, cc);
    }
    return r;
  }

  /// Replaces the t coordinate by the complex jet t_expr:
  /// u -> Re(t_expr), v -> Im(t_expr).
  Jet substitute_t(const Jet& t_expr) const {
    std::map<int, Jet> repl;
    repl.emplace(u_index(), t_expr.real_part());
    repl.emplace(v_index(), t_expr.imag_part());
    return substitute(repl);
  }

  // ---- structural extraction ----

  /// Terms with no u or v.
  Jet pure_z_part() const {
    Jet r(zvars_, trunc_);
    for (const auto& [k, c] : terms_)
      if (k[u_index()] == 0 && k[v_index()] == 0) r.add_term(k, c);
    return r;
  }

  /// A(z) such that the u-linear block of the jet is u * A(z); returns only
  /// z-degree >= 1 terms.
  Jet u_linear_z_poly() const {
    Jet r(zvars_, trunc_);
    for (const auto& [k, c] : terms_) {
      if (k[u_index()] != 1 || k[v_index()] != 0) continue;
      if (z_degree_of(k) < 1) continue;
      Key kk = k;
      kk[u_index()] = 0;
      r.add_term(kk, c);
    }
    return r;
  }

  /// B(z) such that the v-linear block of the jet is v * B(z).
  Jet v_linear_z_poly() const {
    Jet r(zvars_, trunc_);
    for (const auto& [k, c] : terms_) {
      if (k[v_index()] != 1 || k[u_index()] != 0) continue;
      if (z_degree_of(k) < 1) continue;
      Key kk = k;
      kk[v_index()] = 0;
      r.add_term(kk, c);
    }
    return r;
  }

  cxd coeff_u() const { return coeff_uv(1, 0); }
  cxd coeff_u2() const { return coeff_uv(2, 0); }
  cxd coeff_uv() const { return coeff_uv(1, 1); }
  cxd coeff_v2() const { return coeff_uv(0, 2); }

  cxd coeff_uv(int pu, int pv) const {
    Key k(nvars(), 0);
    k[u_index()] = pu;
    k[v_index()] = pv;
    return coeff(k);
  }

  /// Lowest total z-degree among (pure-z) nonzero terms; -1 when zero.
  int min_degree(double tol = kZeroTol) const {
    int d = -1;
    for (const auto& [k, c] : terms_) {
      if (std::abs(c) <= tol) continue;
      int dk = degree_of(k);
      if (d < 0 || dk < d) d = dk;
    }
    return d;
  }

  int max_degree(double tol = kZeroTol) const {
    int d = -1;
    for (const auto& [k, c] : terms_) {
      if (std::abs(c) <= tol) continue;
      d = std::max(d, degree_of(k));
    }
    return d;
  }

  /// Homogeneous component of total degree s.
  Jet homogeneous_component(int s) const {
    Jet r(zvars_, trunc_);
    for (const auto& [k, c] : terms_)
      if (degree_of(k) == s) r.add_term(k, c);
    return r;
  }

  bool approx_equal(const Jet& other, double tol = 1e-10) const {
    Jet d = *this - other;
    double scale = std::max({1.0, max_abs_coeff(), other.max_abs_coeff()});
    return d.is_zero(tol * scale);
  }

  friend bool operator==(const Jet& a, const Jet& b) {
    return a.zvars_ == b.zvars_ && a.terms_ == b.terms_;
  }

 private:
  void require_compatible(const Jet& o) const {
    if (zvars_ != o.zvars_) throw DimensionMismatch("jet variable mismatch");
  }

  int zvars_;
  int trunc_;
  std::map<Key, cxd> terms_;
};

/// Ordered list of the nonzero homogeneous components of a z-polynomial.
inline std::vector<std::pair<int, Jet>> homogeneous_parts(const Jet& p) {
  std::vector<std::pair<int, Jet>> out;
  if (p.is_zero()) return out;
  int lo = p.min_degree(), hi = p.max_degree();
  for (int s = lo; s <= hi; ++s) {
    Jet comp = p.homogeneous_component(s);
    if (!comp.is_zero()) out.emplace_back(s, std::move(comp));
  }
  return out;
}

/// True iff every mixed second Wirtinger derivative of p vanishes, i.e.
/// no term carries both a z and a conj(z) factor.
inline bool is_pluriharmonic(const Jet& p, double tol = kZeroTol) {
  const int m = p.zvars();
  double scale = std::max(1.0, p.max_abs_coeff());
  for (const auto& [k, c] : p.terms()) {
    if (std::abs(c) <= tol * scale) continue;
    int holo = 0, anti = 0;
    for (int j = 0; j < m; ++j) holo += k[j];
    for (int j = 0; j < m; ++j) anti += k[m + j];
    if (holo > 0 && anti > 0) return false;
  }
  return true;
}

}  // namespace sqz

#endif  // SQZ_JET_HPP
