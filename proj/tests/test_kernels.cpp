#include <doctest.h>

#include <cmath>
#include <random>

#include "ngkde/kernels.hpp"
#include "support/oracles.hpp"

using namespace ngkde;

TEST_SUITE_BEGIN("kernels");

TEST_CASE("gaussian kernel values") {
  CHECK(gaussian_kernel(0.0) == doctest::Approx(0.3989422804014327).epsilon(1e-14));
  // closed form at 1, frozen from a 50-digit evaluation
  CHECK(gaussian_kernel(1.0) == doctest::Approx(0.2419707245191433).epsilon(1e-13));
  CHECK(gaussian_kernel(1.3) == gaussian_kernel(-1.3));
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-8.0, 8.0);
  for (int i = 0; i < 200; ++i) {
    const double t = u(rng);
    CHECK(gaussian_kernel(t) == gaussian_kernel(-t));
    CHECK(gaussian_kernel(t) >= 0.0);
    CHECK(std::isfinite(gaussian_kernel(t)));
  }
}

TEST_CASE("gaussian constants") {
  const auto [k2, k3] = gaussian_constants();
  CHECK(k2 == 1.0);
  CHECK(k3 == doctest::Approx(0.2820947917738781).epsilon(1e-13));
  // trapezoid quadrature of the squared kernel over [-10, 10]
  const int m = 200000;
  const double dt = 20.0 / m;
  double acc = 0.0;
  for (int i = 0; i <= m; ++i) {
    const double t = -10.0 + dt * i;
    const double v = gaussian_kernel(t) * gaussian_kernel(t);
    acc += (i == 0 || i == m) ? 0.5 * v : v;
  }
  CHECK(acc * dt == doctest::Approx(k3).epsilon(1e-10));
}

TEST_CASE("gamma kernel shape maps") {
  CHECK(gamma1_shape(0.0, 0.5) == 1.0);
  CHECK(gamma1_shape(1.0, 0.5) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(gamma1_shape(2.0, 1.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK_THROWS_AS(gamma1_shape(-0.1, 0.5), std::invalid_argument);

  for (double b : {0.05, 0.3, 1.0}) CHECK(gamma2_shape(0.0, b) == 1.0);
  CHECK(gamma2_shape(5.0, 1.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK_THROWS_AS(gamma2_shape(-1e-9, 1.0), std::invalid_argument);

  for (double b2 : {0.05, 0.3, 1.0}) CHECK(ng_alpha_shape(0.0, b2) == 2.0);
  CHECK(ng_alpha_shape(1.5 * 0.4, 0.4) == doctest::Approx(2.25).epsilon(1e-15));
  CHECK_THROWS_AS(ng_alpha_shape(-0.1, 0.4), std::invalid_argument);
}

TEST_CASE("shape maps are continuous and nondecreasing") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ub(0.02, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double b = ub(rng);
    // both branch formulas evaluated at the knot
    const double knot2 = 2.0 * b * b;
    const double upper2 = knot2 / (b * b);
    const double lower2 = 0.25 * (knot2 / (b * b)) * (knot2 / (b * b)) + 1.0;
    CHECK(std::abs(upper2 - lower2) <= 1e-15 * std::max(1.0, upper2));

    const double knot3 = 3.0 * b;
    const double upper3 = knot3 / b;
    const double lower3 = (knot3 / b) * (knot3 / b) / 9.0 + 2.0;
    CHECK(std::abs(upper3 - lower3) <= 1e-15 * std::max(1.0, upper3));
  }
  for (double b : {0.1, 0.7}) {
    double prev2 = -1.0, prev3 = -1.0;
    for (int i = 0; i <= 4000; ++i) {
      const double x2 = 6.0 * b * b * i / 4000.0;
      const double s2 = gamma2_shape(x2, b);
      CHECK(s2 >= prev2);
      prev2 = s2;
      const double x2n = 6.0 * b * i / 4000.0;
      const double s3 = ng_alpha_shape(x2n, b);
      CHECK(s3 >= prev3);
      prev3 = s3;
    }
  }
}

TEST_CASE("gamma pdf log") {
  CHECK(gamma_pdf_log(1.0, 0.25, 0.0) == doctest::Approx(std::log(4.0)).epsilon(1e-15));
  CHECK(std::exp(gamma_pdf_log(1.0, 0.25, 0.0)) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(gamma_pdf_log(5.0, 0.25, 0.0) == -std::numeric_limits<double>::infinity());

  // frozen from a 50-digit evaluation of the closed form
  CHECK(std::exp(gamma_pdf_log(5.0, 0.25, 1.0)) ==
        doctest::Approx(0.7814672592526584).epsilon(1e-12));

  const double mass = oracle::integrate(
      [](double t) { return std::exp(gamma_pdf_log(5.0, 0.25, t)); }, 0.0,
      5.0 * 0.25 + 40.0 * std::sqrt(5.0) * 0.25, 1e-10);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));

  CHECK_THROWS_AS(gamma_pdf_log(5.0, 0.25, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_pdf_log(-1.0, 0.25, 1.0), std::invalid_argument);
}

TEST_CASE("gamma pdf log stays finite for huge shapes") {
  for (double shape : {1e3, 1e5, 1e6}) {
    const double scale = 1e-6;
    const double mode = (shape - 1.0) * scale;
    const double lp = gamma_pdf_log(shape, scale, mode);
    CHECK(std::isfinite(lp));
    CHECK(std::isfinite(gamma_pdf_log(shape, scale, mode * 1.01)));
  }
}

TEST_CASE("gamma class-1 kernel normalization and mean") {
  for (double x2 : {0.0, 0.1, 1.0, 5.0}) {
    for (double b : {0.05, 0.3, 1.0}) {
      const double shape = gamma1_shape(x2, b);
      const double scale = b * b;
      const double hi = shape * scale + 40.0 * std::sqrt(shape) * scale;
      const double mass = oracle::integrate(
          [&](double t) { return std::exp(gamma_pdf_log(shape, scale, t)); },
          0.0, hi, 1e-8);
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));

      const double mean = oracle::integrate(
          [&](double t) {
            return t * std::exp(gamma_pdf_log(shape, scale, t));
          },
          0.0, hi, 1e-8);
      CHECK(mean == doctest::Approx(x2 + b * b).epsilon(1e-6));
      CHECK(shape * scale == doctest::Approx(x2 + b * b).epsilon(1e-12));
    }
  }
}

TEST_CASE("ng pdf") {
  NgTheta th{0.0, 1.0, 3.0, 1.0};

  // frozen from a 50-digit evaluation of the closed form
  CHECK(ng_pdf(th, 0.0, 1.0) ==
        doctest::Approx(0.07338133158686995).epsilon(1e-12));

  // factorization against the component densities
  const double lhs = ng_pdf(th, 0.5, 2.0);
  const double rhs = gaussian_kernel((0.5 - 0.0) * std::sqrt(1.0 * 2.0)) *
                         std::sqrt(1.0 * 2.0) *
                     std::exp(gamma_pdf_log(3.0, 1.0, 2.0));
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));

  // total density mass
  const double mass = oracle::integrate2d(
      [&](double t1, double t2) { return ng_pdf(th, t1, t2); }, -20.0, 20.0,
      1e-12, 40.0, 1e-8);
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));

  CHECK(ng_pdf(th, 0.3, 0.0) == 0.0);
  bool diverged = false;
  NgTheta low{0.0, 1.0, 0.4, 1.0};
  CHECK(ng_pdf(low, 0.0, 0.0, &diverged) == 0.0);
  CHECK(diverged);
  CHECK_THROWS_AS(ng_pdf(th, 0.0, -0.5), std::invalid_argument);
  NgTheta bad{0.0, -1.0, 3.0, 1.0};
  CHECK_THROWS_AS(ng_pdf(bad, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("ng normalization for estimator thetas") {
  for (double x1 : {0.0, 1.0, -2.0}) {
    for (double x2 : {0.0, 0.5, 2.0}) {
      for (double b : {0.1, 0.4}) {
        for (bool second : {false, true}) {
          const Obs2 x{x1, x2};
          const NgTheta th = second ? make_theta2(x, b, b) : make_theta1(x, b, b);
          // widest normal slice that still carries gamma mass
          const double t2_ref = 0.01 * th.alpha / th.beta;
          const double sd1 = 1.0 / std::sqrt(th.lambda * t2_ref);
          const double lo1 = x1 - 30.0 * sd1 - 5.0, hi1 = x1 + 30.0 * sd1 + 5.0;
          const double hi2 = (th.alpha / th.beta) + 40.0 * std::sqrt(th.alpha) / th.beta;
          const double mass = oracle::integrate2d(
              [&](double t1, double t2) { return ng_pdf(th, t1, t2); }, lo1,
              hi1, 1e-12, hi2, 1e-8);
          CHECK(mass == doctest::Approx(1.0).epsilon(1e-6));
        }
      }
    }
  }
}

TEST_CASE("theta construction") {
  Obs2 x{1.0, 2.0};
  NgTheta th = make_theta1(x, 0.1, 0.1);
  CHECK(th.mu == 1.0);
  CHECK(th.lambda == doctest::Approx(4.329004329004329).epsilon(1e-13));
  CHECK(th.alpha == doctest::Approx(22.0).epsilon(1e-13));
  CHECK(th.beta == doctest::Approx(10.0).epsilon(1e-13));

  NgTheta origin = make_theta1({0.0, 0.0}, 0.1, 0.1);
  CHECK(origin.lambda == doctest::Approx(1000.0).epsilon(1e-12));
  CHECK(origin.alpha == 2.0);
  CHECK(origin.beta == doctest::Approx(10.0).epsilon(1e-13));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(-4.0, 4.0), u2(0.0, 6.0),
      ub(0.02, 1.0);
  for (int i = 0; i < 100; ++i) {
    const Obs2 p{ux(rng), u2(rng)};
    const double b1 = ub(rng), b2 = ub(rng);
    const NgTheta t1 = make_theta1(p, b1, b2);
    CHECK(t1.alpha - t1.beta * p.x2 == doctest::Approx(2.0).epsilon(1e-10));
  }

  NgTheta t2 = make_theta2({1.0, 3.0 * 0.25}, 0.1, 0.25);
  CHECK(t2.alpha == doctest::Approx(3.0).epsilon(1e-14));
  NgTheta t2o = make_theta2({0.0, 0.0}, 0.1, 0.1);
  CHECK(t2o.alpha == 2.0);
  NgTheta t2n = make_theta2({-2.0, 0.15}, 0.1, 0.1);
  CHECK(t2n.alpha == doctest::Approx(2.25).epsilon(1e-13));
  CHECK(t2n.lambda ==
        doctest::Approx(1.0 / ((2.0 * 0.1 + 0.01) * 0.25)).epsilon(1e-12));
}

TEST_SUITE_END();
