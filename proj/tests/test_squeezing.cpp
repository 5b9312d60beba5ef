#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "sqz/squeezing.hpp"

using namespace sqz;

namespace {
const CPoint kZ1 = {1.0, 0.0, 0.0};
const CPoint kZ2 = {0.0, 1.0, 0.0};
}  // namespace

TEST_CASE("rational exponent composition") {
  CHECK(exponent_composition(2, ExponentVariant::standard) == Rational(1, 72));
  CHECK(exponent_composition(3, ExponentVariant::positive_terms) ==
        Rational(1, 42));
  CHECK(exponent_composition(2, ExponentVariant::positive_terms) ==
        Rational(1, 20));
  CHECK(exponent_composition(1, ExponentVariant::standard) == Rational(1, 20));
  for (int k = 1; k <= 8; ++k) {
    Rational e = exponent_composition(k, ExponentVariant::standard);
    CHECK(e * Rational(4 * k, 1) * Rational(4 * k + 1, 1) == Rational(1, 1));
  }
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(1, -2).to_double() == doctest::Approx(-0.5));
  CHECK_THROWS_AS(Rational(1, 0), InvalidParameter);
  CHECK_THROWS_AS(exponent_composition(0, ExponentVariant::standard),
                  InvalidParameter);
}

TEST_CASE("obstruction epsilon") {
  // lambda = 1, r_d = 0.1, orthonormal axes: eps = 0.1 (1 + margin) / sqrt(2).
  double eps = obstruction_epsilon(1.0, 0.1, kZ1, kZ2, 0.0);
  CHECK(eps == doctest::Approx(0.1 / std::sqrt(2.0)));
  CHECK(eps == doctest::Approx(0.0707107).epsilon(1e-5));

  // Joint scale invariance: scaling lambda and r_d together fixes eps.
  for (double s : {0.25, 4.0}) {
    CHECK(obstruction_epsilon(s * 1.0, s * 0.1, kZ1, kZ2, 0.0) ==
          doctest::Approx(eps));
  }

  // The default margin enlarges eps slightly.
  CHECK(obstruction_epsilon(1.0, 0.1, kZ1, kZ2) ==
        doctest::Approx(eps * 1.001));

  CHECK_THROWS_AS(obstruction_epsilon(0.0, 0.1, kZ1, kZ2), InvalidParameter);
  CHECK_THROWS_AS(obstruction_epsilon(1.0, -0.1, kZ1, kZ2), InvalidParameter);
  CHECK_THROWS_AS(obstruction_epsilon(1.0, 0.1, kZ1, kZ1), InvalidParameter);
  CPoint parallel = {cxd(0.0, 2.0), 0.0, 0.0};
  CHECK_THROWS_AS(obstruction_epsilon(1.0, 0.1, kZ1, parallel),
                  InvalidParameter);
}

namespace {
StarShapedSet pinched_set(double axis_r, double diag_r) {
  // Radius axis_r near the axes, pinched down to diag_r near the (1,1,0)
  // diagonal (smooth interpolation in the diagonal alignment).
  StarShapedSet D;
  D.dimension = 3;
  D.radius = [axis_r, diag_r](const CPoint& u) {
    const CPoint diag = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0), 0.0};
    double align = std::abs(inner(u, diag));
    double w = std::pow(align, 8.0);
    return axis_r * (1.0 - w) + diag_r * w;
  };
  return D;
}
}  // namespace

TEST_CASE("no linear map squeezes a large ball through a pinched set") {
  StarShapedSet D = pinched_set(1.0, 0.05);
  const double lambda = 0.9;
  double eps = obstruction_epsilon(lambda, 0.05, kZ1, kZ2);
  CHECK(no_linear_map_check(D, kZ1, kZ2, lambda, eps, 2000));
}

TEST_CASE("hypothesis gating of the sampling check") {
  // A genuine ball: the witness direction stays inside, hypothesis fails.
  StarShapedSet ball;
  ball.dimension = 3;
  ball.radius = [](const CPoint&) { return 1.0; };
  CHECK_THROWS_AS(no_linear_map_check(ball, kZ1, kZ2, 0.9, 0.1),
                  HypothesisNotSatisfied);
  // lambda too large: the axis points leave the set.
  StarShapedSet D = pinched_set(1.0, 0.05);
  CHECK_THROWS_AS(no_linear_map_check(D, kZ1, kZ2, 1.5, 1.0),
                  HypothesisNotSatisfied);
  CPoint bad = {1.0, 0.0};
  CHECK_THROWS_AS(no_linear_map_check(D, bad, kZ2, 0.5, 1.0),
                  DimensionMismatch);
}

TEST_CASE("sampling check across randomized pinched shapes") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  int accepted = 0;
  for (int trial = 0; trial < 40 && accepted < 20; ++trial) {
    double axis_r = 0.5 + uni(rng);           // [0.5, 1.5]
    double diag_r = axis_r * (0.02 + 0.06 * uni(rng));
    StarShapedSet D = pinched_set(axis_r, diag_r);
    double lambda = 0.9 * axis_r;
    double eps = obstruction_epsilon(lambda, diag_r, kZ1, kZ2);
    CPoint witness = cxd(eps * lambda) * (kZ1 + kZ2);
    if (D.contains(witness)) continue;  // pinch too mild for the hypothesis
    ++accepted;
    CHECK(no_linear_map_check(D, kZ1, kZ2, lambda, eps, 500,
                              1000 + std::uint64_t(trial)));
  }
  CHECK(accepted == 20);
}

TEST_CASE("squeezing bound pipeline on the certified family") {
  DomainSpec model = make_model(2);
  DiscSearchConfig cfg;
  cfg.boundary_samples = 64;
  cfg.interior_rings = 4;
  const double delta = 1e-4;
  SqueezingBound b = squeezing_upper(model, delta, cfg);
  CHECK(b.basepoint[2] == cxd(-delta));
  CHECK(b.lambda > 0.0);
  CHECK(b.r_d == doctest::Approx(2.0 * std::sqrt(2.0) * std::pow(delta, 0.125)));
  CHECK(b.epsilon ==
        doctest::Approx(b.r_d * 1.001 / (b.lambda * std::sqrt(2.0))));
  CHECK(b.bound == doctest::Approx(std::min(1.0, 3.0 * b.epsilon)));
  CHECK(b.bound > 0.0);
  CHECK(b.bound <= 1.0);
  CHECK(b.trace.size() == 3);
  CHECK(b.diagnostic.empty());

  // The axis metric upper bound feeding lambda is dominated by the
  // explicit-disc value, so lambda is at least its reciprocal.
  const double beta_explicit =
      0.5 * axis_disc_epsilon0(model) * std::pow(delta, 1.0 / 9.0);
  CHECK(b.lambda >= beta_explicit * (1.0 - 1e-9));
}

TEST_CASE("families without a certificate get the vacuous bound") {
  for (auto make : {+[] { return make_convex_control(); },
                    +[] { return make_ball(1.0); }}) {
    DomainSpec dom = make();
    SqueezingBound b = squeezing_upper(dom, 1e-3);
    CHECK(b.bound == 1.0);
    CHECK(b.diagnostic == "no certificate");
    CHECK(b.trace.empty());
  }
  CHECK_THROWS_AS(squeezing_upper(make_model(2), 0.0), InvalidParameter);
}

TEST_CASE("closed-form experiment reproduces the exponent gap exactly") {
  DomainSpec model = make_model(2);
  std::vector<double> deltas;
  for (int i = 0; i < 9; ++i) deltas.push_back(1e-2 * std::pow(10.0, -0.5 * i));
  ExperimentTable t =
      decay_experiment(model, deltas, {}, ExperimentMode::closed_form);
  REQUIRE(t.slope.has_value());
  REQUIRE(t.theoretical_exponent.has_value());
  CHECK(*t.theoretical_exponent == Rational(1, 72));
  CHECK(std::abs(*t.slope - 1.0 / 72.0) < 1e-12);
  CHECK(t.verdict == "exact_exponent");
  for (std::size_t i = 0; i + 1 < t.rows.size(); ++i) {
    CHECK(t.rows[i + 1].bound < t.rows[i].bound);  // smaller delta, smaller bound
    CHECK(t.rows[i].bound < 1.0);
    CHECK(t.rows[i].bound > 0.0);
  }
  // The reported row columns satisfy the obstruction identity.
  for (const auto& r : t.rows) {
    CHECK(r.epsilon ==
          doctest::Approx(r.r_d * 1.001 /
                          ((1.0 / r.K_axis_upper) * std::sqrt(2.0))));
  }

  DomainSpec herb = make_herbort();
  ExperimentTable th =
      decay_experiment(herb, deltas, {}, ExperimentMode::closed_form);
  CHECK(*th.theoretical_exponent == Rational(1, 42));
  CHECK(std::abs(*th.slope - 1.0 / 42.0) < 1e-12);
}

TEST_CASE("numeric experiment on the control domain shows no decay") {
  DomainSpec cc = make_convex_control();
  std::vector<double> deltas = {1e-2, 1e-3, 1e-4};
  ExperimentTable t = decay_experiment(cc, deltas);
  CHECK(t.verdict == "no decay evidence");
  CHECK_FALSE(t.slope.has_value());
  CHECK_FALSE(t.theoretical_exponent.has_value());
  for (const auto& r : t.rows) {
    CHECK(r.bound == 1.0);
    CHECK(r.diagnostic == "no certificate");
  }
}

TEST_CASE("experiment input validation") {
  DomainSpec model = make_model(2);
  CHECK_THROWS_AS(decay_experiment(model, {}), InvalidParameter);
  CHECK_THROWS_AS(decay_experiment(model, {1e-3, 1e-2}), InvalidParameter);
  CHECK_THROWS_AS(decay_experiment(model, {1e-2, 1e-2}), InvalidParameter);
  CHECK_THROWS_AS(decay_experiment(model, {0.5, 1e-3}), InvalidParameter);
  CHECK_THROWS_AS(decay_experiment(model, {1e-2, -1e-3}), InvalidParameter);
  CHECK_THROWS_AS(
      decay_experiment(make_ball(1.0), {1e-2}, {}, ExperimentMode::closed_form),
      CertificateUnavailable);
}
