#ifndef SQZ_TYPES_HPP
#define SQZ_TYPES_HPP

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace sqz {

using cxd = std::complex<double>;

/// A point in C^n (n = 3 for all built-in domains).
using CPoint = std::vector<cxd>;

/// Coefficients below this threshold are treated as zero throughout.
inline constexpr double kZeroTol = 1e-12;

/// Hard cap on total degree of polynomial/jet expansions.
inline constexpr int kMaxTotalDegree = 24;

/// Sentinel for an order of contact beyond the representable degree.
inline constexpr int kInfiniteContact = std::numeric_limits<int>::max();

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

struct InvalidParameter : Error {
  explicit InvalidParameter(const std::string& msg) : Error(msg) {}
};

struct TruncationOverflow : Error {
  explicit TruncationOverflow(const std::string& msg) : Error(msg) {}
};

struct DegenerateNormal : Error {
  explicit DegenerateNormal(const std::string& msg) : Error(msg) {}
};

/// Raised when a closed-form lower bound is requested for a domain family
/// that does not satisfy the certified hypotheses.
struct CertificateUnavailable : Error {
  explicit CertificateUnavailable(const std::string& msg) : Error(msg) {}
};

struct HypothesisNotSatisfied : Error {
  explicit HypothesisNotSatisfied(const std::string& msg) : Error(msg) {}
};

struct SearchFailure : Error {
  explicit SearchFailure(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
  int line;
  int column;
  ParseError(int line_, int col_, const std::string& msg)
      : Error("parse error at line " + std::to_string(line_) + ", column " +
              std::to_string(col_) + ": " + msg),
        line(line_),
        column(col_) {}
};

inline double norm2(const CPoint& p) {
  double s = 0.0;
  for (const auto& c : p) s += std::norm(c);
  return s;
}

inline double norm(const CPoint& p) { return std::sqrt(norm2(p)); }

inline cxd inner(const CPoint& a, const CPoint& b) {
  // <a, b> = sum a_j conj(b_j)
  cxd s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) s += a[j] * std::conj(b[j]);
  return s;
}

inline CPoint operator+(const CPoint& a, const CPoint& b) {
  CPoint r(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) r[j] = a[j] + b[j];
  return r;
}

inline CPoint operator-(const CPoint& a, const CPoint& b) {
  CPoint r(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) r[j] = a[j] - b[j];
  return r;
}

inline CPoint operator*(cxd s, const CPoint& a) {
  CPoint r(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) r[j] = s * a[j];
  return r;
}

inline CPoint normalized(const CPoint& a) {
  double n = norm(a);
  if (n < kZeroTol) throw InvalidParameter("cannot normalize zero vector");
  return cxd(1.0 / n) * a;
}

}  // namespace sqz

#endif  // SQZ_TYPES_HPP
