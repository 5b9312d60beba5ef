#ifndef SQZ_SPEC_PARSER_HPP
#define SQZ_SPEC_PARSER_HPP

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "sqz/domain.hpp"
#include "sqz/jet.hpp"

namespace sqz {

// ---------------------------------------------------------------------------
// Number formatting with round-trip precision (shared by all emitters).

inline std::string format_real(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  // Prefer the shortest representation that still round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char s[64];
    std::snprintf(s, sizeof s, "%.*g", prec, x);
    if (std::strtod(s, nullptr) == x) return s;
  }
  return buf;
}

namespace parser_detail {

/// Monomial z^alpha * conj(z)^beta with a complex coefficient; a polynomial
/// is a list of these (collected at the end).
struct RawTerm {
  std::vector<int> alpha, beta;
  cxd coeff;
};

using RawPoly = std::vector<RawTerm>;

inline RawPoly mul(const RawPoly& a, const RawPoly& b, int dim) {
  RawPoly out;
  for (const auto& x : a)
    for (const auto& y : b) {
      RawTerm t;
      t.alpha.resize(dim);
      t.beta.resize(dim);
      for (int i = 0; i < dim; ++i) {
        t.alpha[i] = x.alpha[i] + y.alpha[i];
        t.beta[i] = x.beta[i] + y.beta[i];
      }
      t.coeff = x.coeff * y.coeff;
      out.push_back(std::move(t));
    }
  return out;
}

inline RawPoly conj(const RawPoly& a) {
  RawPoly out = a;
  for (auto& t : out) {
    std::swap(t.alpha, t.beta);
    t.coeff = std::conj(t.coeff);
  }
  return out;
}

inline RawPoly scaled(const RawPoly& a, cxd s) {
  RawPoly out = a;
  for (auto& t : out) t.coeff *= s;
  return out;
}

inline RawPoly constant(int dim, cxd c) {
  RawTerm t;
  t.alpha.assign(dim, 0);
  t.beta.assign(dim, 0);
  t.coeff = c;
  return {t};
}

inline RawPoly power(RawPoly base, int e, int dim) {
  RawPoly out = constant(dim, 1.0);
  for (int i = 0; i < e; ++i) out = mul(out, base, dim);
  return out;
}

/// Character-level cursor over one line; all errors carry line/column.
struct Cursor {
  const std::string& s;
  int line;
  std::size_t pos = 0;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos])))
      ++pos;
  }
  bool eof() {
    skip_ws();
    return pos >= s.size();
  }
  char peek() {
    skip_ws();
    return pos < s.size() ? s[pos] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c, const std::string& what) {
    if (!accept(c)) fail("expected '" + std::string(1, c) + "' " + what);
  }
  [[noreturn]] void fail(const std::string& msg) {
    throw ParseError(line, int(pos) + 1, msg);
  }
  bool accept_word(const std::string& w) {
    skip_ws();
    if (s.compare(pos, w.size(), w) == 0) {
      // Must not be a prefix of a longer identifier.
      std::size_t after = pos + w.size();
      if (after < s.size() &&
          std::isalnum(static_cast<unsigned char>(s[after])) && w != "|")
        return false;
      pos = after;
      return true;
    }
    return false;
  }
  double read_number() {
    skip_ws();
    const char* begin = s.c_str() + pos;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail("expected a number");
    pos += std::size_t(end - begin);
    return v;
  }
  int read_int(const std::string& what) {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])))
      ++pos;
    if (pos == start) fail("expected an integer " + what);
    return std::stoi(s.substr(start, pos - start));
  }
};

/// Recursive-descent parser for the defining-function expression grammar:
///   expr    := ['-'] term (('+'|'-') term)*
///   term    := factor ('*' factor)*        (a leading number is a factor)
///   factor  := number | '|' var '|' '^' even-int
///            | ('Re'|'Im') '(' product-of-monomials ')' ['^' int]
///            | monomial
///   monomial:= ('conj' '(' var ')' | var) ['^' int]
/// with var in {z, w, t}.
struct ExprParser {
  Cursor cur;
  static constexpr int dim = 3;

  explicit ExprParser(const std::string& text, int line) : cur{text, line} {}

  static int var_index(char c) {
    switch (c) {
      case 'z': return 0;
      case 'w': return 1;
      case 't': return 2;
    }
    return -1;
  }

  RawPoly parse_monomial() {
    bool conjugated = false;
    if (cur.accept_word("conj")) {
      conjugated = true;
      cur.expect('(', "after conj");
    }
    char c = cur.peek();
    int vi = var_index(c);
    if (vi < 0) cur.fail("expected a variable (z, w or t)");
    ++cur.pos;
    if (conjugated) cur.expect(')', "after conj variable");
    int e = 1;
    if (cur.accept('^')) e = cur.read_int("exponent");
    RawTerm t;
    t.alpha.assign(dim, 0);
    t.beta.assign(dim, 0);
    (conjugated ? t.beta : t.alpha)[vi] = e;
    t.coeff = 1.0;
    return {t};
  }

  RawPoly parse_mono_product() {
    RawPoly p = parse_monomial();
    while (true) {
      std::size_t save = cur.pos;
      if (!cur.accept('*')) break;
      char c = cur.peek();
      if (var_index(c) < 0 && c != 'c') {
        cur.pos = save;
        break;
      }
      p = mul(p, parse_monomial(), dim);
    }
    return p;
  }

  RawPoly parse_factor() {
    char c = cur.peek();
    if (c == '|') {
      ++cur.pos;
      char v = cur.peek();
      int vi = var_index(v);
      if (vi < 0) cur.fail("expected a variable inside |.|");
      ++cur.pos;
      cur.expect('|', "closing the absolute value");
      cur.expect('^', "after |v|");
      int e = cur.read_int("exponent");
      if (e % 2 != 0) cur.fail("|v|^n needs an even exponent");
      RawTerm t;
      t.alpha.assign(dim, 0);
      t.beta.assign(dim, 0);
      t.alpha[vi] = e / 2;
      t.beta[vi] = e / 2;
      t.coeff = 1.0;
      return {t};
    }
    if (cur.accept_word("Re")) return parse_re_im(true);
    if (cur.accept_word("Im")) return parse_re_im(false);
    if (c == 'c' || var_index(c) >= 0) return parse_monomial();
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '-' ||
        c == '+')
      return constant(dim, cur.read_number());
    cur.fail("expected a factor");
  }

  RawPoly parse_re_im(bool real) {
    cur.expect('(', "after Re/Im");
    RawPoly inner = parse_mono_product();
    cur.expect(')', "closing Re/Im");
    RawPoly base = real ? scaled(mul(constant(dim, 0.5), inner, dim) , 1.0)
                        : scaled(inner, cxd(0.0, -0.5));
    // Re(M) = (M + conj M)/2, Im(M) = (M - conj M)/(2i).
    RawPoly other = real ? scaled(conj(inner), 0.5) : scaled(conj(inner), cxd(0.0, 0.5));
    for (auto& t : other) base.push_back(t);
    if (cur.accept('^')) {
      int e = cur.read_int("exponent");
      base = power(base, e, dim);
    }
    return base;
  }

  RawPoly parse_term() {
    RawPoly p = parse_factor();
    while (cur.accept('*')) p = mul(p, parse_factor(), dim);
    return p;
  }

  RawPoly parse_expr() {
    RawPoly total;
    bool negate = false;
    if (cur.accept('-')) negate = true;
    while (true) {
      RawPoly t = parse_term();
      if (negate) t = scaled(t, -1.0);
      for (auto& x : t) total.push_back(std::move(x));
      if (cur.accept('+')) {
        negate = false;
      } else if (cur.accept('-')) {
        negate = true;
      } else {
        break;
      }
    }
    if (!cur.eof()) cur.fail("unexpected trailing input");
    return total;
  }
};

}  // namespace parser_detail

/// Parses the right-hand side of a `rho = ...` line into a polynomial;
/// raises ParseError with line/column on malformed input, including
/// non-real results.
inline HermitianPolynomial parse_rho_expression(const std::string& text,
                                                int line = 1) {
  parser_detail::ExprParser p(text, line);
  parser_detail::RawPoly raw = p.parse_expr();
  HermitianPolynomial rho(3);
  for (const auto& t : raw) rho.add_raw(t.alpha, t.beta, t.coeff);
  try {
    rho.check_hermitian();
  } catch (const Error& e) {
    throw ParseError(line, 1, std::string("expression is not real-valued: ") +
                                  e.what());
  }
  return rho;
}

/// Line-oriented domain-spec format:
///   dim = 3
///   q = (0, 0, 0)
///   locality_radius = 0.5
///   rho = Re(t) + |z|^2*|w|^2 + |z|^10 + |w|^10
/// Optional keys: bounding_radius, k.  Blank lines and '#' comments allowed.
inline DomainSpec parse_domain_spec(std::istream& in) {
  DomainSpec dom;
  dom.family = Family::custom;
  bool have_rho = false, have_q = false, have_loc = false;
  std::optional<double> bounding;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string s = raw;
    if (auto h = s.find('#'); h != std::string::npos) s.erase(h);
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ParseError(line_no, int(a) + 1, "expected `key = value`");
    std::string key = s.substr(0, eq);
    key.erase(key.find_last_not_of(" \t") + 1);
    key.erase(0, key.find_first_not_of(" \t"));
    std::string val = s.substr(eq + 1);

    parser_detail::Cursor cur{val, line_no};
    cur.pos = 0;
    if (key == "dim") {
      if (cur.read_int("dimension") != 3)
        throw ParseError(line_no, int(eq) + 2, "only dim = 3 is supported");
    } else if (key == "q") {
      cur.expect('(', "opening the point");
      CPoint q;
      for (int i = 0; i < 3; ++i) {
        double re = cur.read_number();
        double im = 0.0;
        if (cur.accept('i')) {
          im = re;
          re = 0.0;
        } else if (cur.peek() != ',' && cur.peek() != ')') {
          im = cur.read_number();
          cur.expect('i', "after the imaginary part");
        }
        q.push_back(cxd(re, im));
        if (i < 2) cur.expect(',', "between coordinates");
      }
      cur.expect(')', "closing the point");
      dom.q = q;
      have_q = true;
    } else if (key == "locality_radius") {
      dom.locality_radius = cur.read_number();
      have_loc = true;
    } else if (key == "bounding_radius") {
      bounding = cur.read_number();
    } else if (key == "k") {
      dom.declared_k = cur.read_int("k");
    } else if (key == "rho") {
      dom.rho = parse_rho_expression(val, line_no);
      have_rho = true;
    } else {
      throw ParseError(line_no, 1, "unknown key `" + key + "`");
    }
  }
  if (!have_rho) throw ParseError(line_no + 1, 1, "missing `rho` line");
  if (!have_q) throw ParseError(line_no + 1, 1, "missing `q` line");
  if (!have_loc)
    throw ParseError(line_no + 1, 1, "missing `locality_radius` line");
  dom.bounding_radius = bounding.value_or(norm(dom.q) + dom.locality_radius);
  try {
    dom.finalize();
  } catch (const Error& e) {
    throw ParseError(line_no + 1, 1, std::string("invalid domain: ") + e.what());
  }
  return dom;
}

inline DomainSpec parse_domain_spec_text(const std::string& text) {
  std::istringstream in(text);
  return parse_domain_spec(in);
}

inline DomainSpec parse_domain_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot open spec file: " + path);
  return parse_domain_spec(in);
}

// ---------------------------------------------------------------------------
// Emission back into the same grammar.

namespace parser_detail {

inline std::string var_name(int i) {
  static const char* names[] = {"z", "w", "t"};
  return names[i];
}

inline void append_monomial(std::string& out, const std::vector<int>& alpha,
                            const std::vector<int>& beta) {
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    for (int rep = 0; rep < (alpha[i] > 0 ? 1 : 0); ++rep) {
      if (!out.empty()) out += "*";
      out += var_name(int(i));
      if (alpha[i] > 1) out += "^" + std::to_string(alpha[i]);
    }
    if (beta[i] > 0) {
      if (!out.empty()) out += "*";
      out += "conj(" + var_name(int(i)) + ")";
      if (beta[i] > 1) out += "^" + std::to_string(beta[i]);
    }
  }
}

inline void append_term(std::string& out, double coeff,
                        const std::string& factors) {
  if (coeff == 0.0) return;
  if (out.empty()) {
    if (coeff < 0) out += "-";
  } else {
    out += coeff < 0 ? " - " : " + ";
  }
  double mag = std::abs(coeff);
  if (factors.empty()) {
    out += format_real(mag);
    return;
  }
  if (mag != 1.0) out += format_real(mag) + "*";
  out += factors;
}

}  // namespace parser_detail

/// Renders a real polynomial in the spec grammar; parse(emit(p)) == p.
inline std::string emit_polynomial(const HermitianPolynomial& rho) {
  using namespace parser_detail;
  std::string out;
  std::map<PairedIndex, cxd> done;
  for (const auto& [key, c] : rho.terms()) {
    if (done.count(key)) continue;
    if (key.self_conjugate()) {
      // Product of |v|^{2a} factors.
      std::string f;
      for (std::size_t i = 0; i < key.alpha.size(); ++i) {
        if (key.alpha[i] == 0) continue;
        if (!f.empty()) f += "*";
        f += "|" + var_name(int(i)) + "|^" + std::to_string(2 * key.alpha[i]);
      }
      append_term(out, c.real(), f);
      done[key] = c;
      continue;
    }
    PairedIndex mirror = key.swapped();
    done[key] = c;
    done[mirror] = rho.terms().count(mirror) ? rho.terms().at(mirror) : cxd(0.0);
    std::string mono;
    append_monomial(mono, key.alpha, key.beta);
    // c M + conj(c) conj(M) = 2 Re(c) Re(M) - 2 Im(c) Im(M)
    append_term(out, 2.0 * c.real(), "Re(" + mono + ")");
    append_term(out, -2.0 * c.imag(), "Im(" + mono + ")");
  }
  if (out.empty()) out = "0";
  return out;
}

inline std::string emit_domain_spec(const DomainSpec& dom) {
  std::string out;
  out += "dim = " + std::to_string(dom.dimension) + "\n";
  out += "q = (";
  for (int i = 0; i < 3; ++i) {
    if (i) out += ", ";
    out += format_real(dom.q[i].real());
    if (dom.q[i].imag() != 0.0) out += " " + format_real(dom.q[i].imag()) + "i";
  }
  out += ")\n";
  out += "locality_radius = " + format_real(dom.locality_radius) + "\n";
  out += "bounding_radius = " + format_real(dom.bounding_radius) + "\n";
  if (dom.declared_k) out += "k = " + std::to_string(*dom.declared_k) + "\n";
  out += "rho = " + emit_polynomial(dom.rho) + "\n";
  return out;
}

/// Renders a real jet in (z, w, u, v) in the spec grammar, writing u, v as
/// Re(t), Im(t).
inline std::string emit_jet(const Jet& j) {
  using namespace parser_detail;
  if (j.zvars() != 2)
    throw InvalidParameter("jet emission expects the two-variable z-block");
  std::string out;
  std::map<Jet::Key, bool> done;
  for (const auto& [key, c] : j.terms()) {
    if (done.count(key)) continue;
    done[key] = true;
    Jet::Key mirror = key;
    std::swap(mirror[0], mirror[2]);
    std::swap(mirror[1], mirror[3]);
    auto uv_factors = [&](std::string& f) {
      if (key[4] > 0) {
        if (!f.empty()) f += "*";
        f += "Re(t)";
        if (key[4] > 1) f += "^" + std::to_string(key[4]);
      }
      if (key[5] > 0) {
        if (!f.empty()) f += "*";
        f += "Im(t)";
        if (key[5] > 1) f += "^" + std::to_string(key[5]);
      }
    };
    if (mirror == key) {
      std::string f;
      for (int i = 0; i < 2; ++i) {
        if (key[i] == 0) continue;
        if (!f.empty()) f += "*";
        f += "|" + var_name(i) + "|^" + std::to_string(2 * key[i]);
      }
      uv_factors(f);
      append_term(out, c.real(), f);
      continue;
    }
    done[mirror] = true;
    std::string mono;
    append_monomial(mono, {key[0], key[1], 0}, {key[2], key[3], 0});
    std::string re_f = "Re(" + mono + ")";
    std::string im_f = "Im(" + mono + ")";
    std::string tail;
    uv_factors(tail);
    if (!tail.empty()) {
      re_f += "*" + tail;
      im_f += "*" + tail;
    }
    append_term(out, 2.0 * c.real(), re_f);
    append_term(out, -2.0 * c.imag(), im_f);
  }
  if (out.empty()) out = "0";
  return out;
}

}  // namespace sqz

#endif  // SQZ_SPEC_PARSER_HPP
