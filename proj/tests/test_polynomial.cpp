#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sqz/domain.hpp"
#include "sqz/hermitian_polynomial.hpp"

using namespace sqz;

TEST_CASE("evaluation of the built-in defining functions") {
  DomainSpec ball = make_ball(1.0);
  CHECK(ball.rho.evaluate({0.0, 0.0, 0.0}) == doctest::Approx(-1.0));

  DomainSpec model = make_model(2);
  CHECK(model.rho.evaluate({0.0, 0.0, -0.01}) == doctest::Approx(-0.01));

  // Independent arithmetic: -0.001 + 2e-12 + 1e-6 + 1e-8.
  DomainSpec herb = make_herbort();
  CHECK(herb.rho.evaluate({0.1, 0.1, -0.001}) ==
        doctest::Approx(-9.98989998e-4).epsilon(1e-12));
}

TEST_CASE("wirtinger gradient") {
  DomainSpec ball = make_ball(1.0);
  auto g = ball.rho.wirtinger_gradient({0.5, 0.0, 0.0});
  CHECK(std::abs(g[0] - cxd(0.5)) < 1e-14);
  CHECK(std::abs(g[1]) < 1e-14);
  CHECK(std::abs(g[2]) < 1e-14);

  HermitianPolynomial ret(3);
  ret.add_re_monomial({0, 0, 1});
  auto g2 = ret.wirtinger_gradient({0.3, -0.2, 0.7});
  CHECK(std::abs(g2[2] - cxd(0.5)) < 1e-14);

  HermitianPolynomial zw(3);
  zw.add_pair({1, 1, 0}, {1, 1, 0}, 1.0);  // |z|^2 |w|^2
  auto g3 = zw.wirtinger_gradient({1.0, 1.0, 0.0});
  CHECK(std::abs(g3[0] - cxd(1.0)) < 1e-14);
  CHECK(std::abs(g3[1] - cxd(1.0)) < 1e-14);
  CHECK(std::abs(g3[2]) < 1e-14);
}

TEST_CASE("levi form") {
  DomainSpec ball = make_ball(1.0);
  CHECK(levi_form(ball.rho, {{0.2, -0.1, 0.4}, {0.0, 1.0, 0.0}}) ==
        doctest::Approx(1.0));

  HermitianPolynomial zw(3);
  zw.add_pair({1, 1, 0}, {1, 1, 0}, 1.0);
  // Mixed Hessian at (1,1,0) is [[1,1],[1,1]] on the (z,w) block.
  CHECK(levi_form(zw, {{1.0, 1.0, 0.0}, {1.0, -1.0, 0.0}}) ==
        doctest::Approx(0.0));
  CHECK(levi_form(zw, {{1.0, 1.0, 0.0}, {1.0, 1.0, 0.0}}) ==
        doctest::Approx(4.0));
}

TEST_CASE("levi form of the ball equals the squared tangent norm everywhere") {
  DomainSpec ball = make_ball(1.0);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    CPoint p(3), s(3);
    for (int j = 0; j < 3; ++j) {
      p[j] = cxd(uni(rng), uni(rng));
      s[j] = cxd(uni(rng), uni(rng));
    }
    CHECK(levi_form(ball.rho, {p, s}) == doctest::Approx(norm2(s)));
  }
}

TEST_CASE("complex tangent completion") {
  HermitianPolynomial rho(3);
  rho.add_re_monomial({0, 0, 1});
  rho.add_pair({2, 0, 0}, {2, 0, 0}, 1.0);  // |z|^4
  auto s = complex_tangent_complete(rho, {0.0, 0.0, 0.0}, {1.0, 0.0});
  CHECK(std::abs(s[0] - cxd(1.0)) < 1e-14);
  CHECK(std::abs(s[2]) < 1e-14);

  DomainSpec ball = make_ball(1.0);
  auto s2 = complex_tangent_complete(ball.rho, {0.0, 0.0, 1.0}, {1.0, 0.0});
  CHECK(std::abs(s2[2]) < 1e-14);

  // Off-axis boundary point of Re t + |z|^4: re-substitute into the
  // tangency identity.
  const cxd a(0.3, 0.1);
  const double u0 = -std::pow(std::abs(a), 4.0);
  CPoint pt = {a, 0.0, cxd(u0, 0.2)};
  auto s3 = complex_tangent_complete(rho, pt, {1.0, 0.0});
  auto g = rho.wirtinger_gradient(pt);
  cxd resid = g[0] * s3[0] + g[1] * s3[1] + g[2] * s3[2];
  CHECK(std::abs(resid) < 1e-12);

  // Degenerate normal: d rho / d t of |z|^2-only polynomial vanishes.
  HermitianPolynomial flat(3);
  flat.add_abs_power(0, 1);
  CHECK_THROWS_AS(complex_tangent_complete(flat, {1.0, 0.0, 0.0}, {1.0, 0.0}),
                  DegenerateNormal);
}

TEST_CASE("order of contact along directions") {
  DomainSpec model = make_model(2);
  CHECK(order_of_contact_along(model.rho, model.q, {1.0, 0.0, 0.0}) == 10);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(order_of_contact_along(model.rho, model.q, {s, s, 0.0}) == 4);

  DomainSpec cc = make_convex_control();
  CHECK(order_of_contact_along(cc.rho, cc.q, {0.0, 1.0, 0.0}) == 6);

  // Scaling invariance of the direction.
  CHECK(order_of_contact_along(model.rho, model.q, {cxd(0.0, 2.5), 0.0, 0.0}) ==
        10);
  CHECK(order_of_contact_along(model.rho, model.q,
                               {cxd(0.3, 0.4), cxd(0.3, 0.4), 0.0}) == 4);
}

TEST_CASE("hermitian symmetry forces real evaluation") {
  DomainSpec herb = make_herbort();
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000000; ++i) {
    CPoint p(3);
    for (int j = 0; j < 3; ++j) p[j] = cxd(uni(rng), uni(rng));
    worst = std::max(worst, std::abs(herb.rho.evaluate_complex(p).imag()));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("model family P vanishes on the axes and is plurisubharmonic") {
  DomainSpec model = make_model(2);
  HermitianPolynomial P(3);
  P.add_pair({1, 1, 0}, {1, 1, 0}, 1.0);  // the degree-2k part of the model
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    cxd z(uni(rng), uni(rng));
    CHECK(std::abs(P.evaluate({z, 0.0, 0.0})) < 1e-14);
    CHECK(std::abs(P.evaluate({0.0, z, 0.0})) < 1e-14);
  }
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    CPoint p(3), s(3);
    for (int j = 0; j < 3; ++j) {
      p[j] = cxd(uni(rng), uni(rng));
      s[j] = cxd(uni(rng), uni(rng));
    }
    worst = std::min(worst, levi_form(P, {p, s}));
  }
  CHECK(worst >= -1e-10);
  CHECK(model.declared_d.value() == 4);
}

TEST_CASE("no valid degree-2 model exists: k=1 is rejected for a reason") {
  // A degree-2 Hermitian polynomial vanishing on both axes must be
  // 2 Re(c z conj(w)) + 2 Re(d z w).  Its Levi matrix is [[0, c], [cbar, 0]],
  // which has a strictly negative direction whenever c != 0; and with c = 0
  // the polynomial is pluriharmonic.  So no candidate P exists for k = 1.
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    cxd c(uni(rng), uni(rng));
    cxd d(uni(rng), uni(rng));
    HermitianPolynomial P(3);
    P.add_pair({1, 0, 0}, {0, 1, 0}, c);  // c z conj(w) + mirror
    P.add_pair({1, 1, 0}, {0, 0, 0}, d);  // d z w + mirror (pluriharmonic part)
    if (std::abs(c) > 1e-6) {
      // sigma = (1, -c/|c|, 0) scaled: Levi value 2 Re(c sigma1 conj(sigma2))
      CPoint sigma = {1.0, -c / std::abs(c), 0.0};
      CHECK(levi_form(P, {{0.3, 0.2, 0.0}, sigma}) < -1e-8);
    }
  }
  CHECK_THROWS_AS(make_model(1), InvalidParameter);
}

TEST_CASE("parameter validation of the model family") {
  CHECK_THROWS_AS(make_model(2, 4), InvalidParameter);          // 2m <= 4k
  CHECK_THROWS_AS(make_model(2, 5, 2, 1), InvalidParameter);    // a+b != k
  CHECK_THROWS_AS(make_model(3, 13), TruncationOverflow);       // 2m > cap
  DomainSpec m = make_model(2, 5, 1, 1);
  CHECK(m.rho.evaluate({0.5, 0.5, 0.0}) ==
        doctest::Approx(0.0625 + 2.0 * std::pow(0.5, 10.0)));
}

TEST_CASE("affine transport of a domain") {
  DomainSpec ball = make_ball(1.0);
  // Rotate (z, w) by 0.3 and translate by (0.1, 0, -0.2i).
  const double th = 0.3;
  std::vector<std::vector<cxd>> U = {{std::cos(th), -std::sin(th), 0.0},
                                     {std::sin(th), std::cos(th), 0.0},
                                     {0.0, 0.0, 1.0}};
  CPoint b = {0.1, 0.0, cxd(0.0, -0.2)};
  DomainSpec moved = transform_domain(ball, U, b);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> uni(-0.6, 0.6);
  for (int i = 0; i < 200; ++i) {
    CPoint p(3);
    for (int j = 0; j < 3; ++j) p[j] = cxd(uni(rng), uni(rng));
    CPoint q = apply_linear(U, p) + b;
    CHECK(moved.rho.evaluate(q) == doctest::Approx(ball.rho.evaluate(p)));
  }
}
