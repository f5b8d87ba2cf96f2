#include "doctest.h"
#include "support.hpp"

#include "specdte/smooth.hpp"

using namespace specdte;
namespace ts = testing_support;

TEST_CASE("kernel shapes") {
  const SmoothKernel q(KernelKind::SymmetricQuartic);
  const SmoothKernel f(KernelKind::OneSidedQuintic);
  CHECK(q(0.0) == doctest::Approx(0.5));
  CHECK(f(0.0) == 1.0);
  CHECK(q(-1.0) == 1.0);
  CHECK(q(1.0) == 0.0);
  CHECK(f(1.0) == 0.0);
  CHECK(q(-5.0) == 1.0);
  CHECK(f(7.0) == 0.0);
  for (const auto& k : {q, f}) {
    double prev = 1.0;
    for (double u = -1.5; u <= 1.5; u += 1e-3) {
      const double v = k(u);
      REQUIRE(v >= 0.0);
      REQUIRE(v <= 1.0);
      REQUIRE(v <= prev + 1e-15);
      prev = v;
    }
  }
}

TEST_CASE("quartic kernel integrates the biweight density") {
  const SmoothKernel q(KernelKind::SymmetricQuartic);
  for (double u : {-0.9, -0.3, 0.2, 0.75}) {
    // Simpson rule on (15/16)(1 - t^2)^2 over [-1, u].
    const int m = 2000;
    const double h = (u + 1.0) / m;
    double acc = 0.0;
    for (int k = 0; k <= m; ++k) {
      const double t = -1.0 + k * h;
      const double w = (k == 0 || k == m) ? 1.0 : (k % 2 ? 4.0 : 2.0);
      acc += w * (15.0 / 16.0) * (1 - t * t) * (1 - t * t);
    }
    CHECK(q(u) == doctest::Approx(1.0 - acc * h / 3.0).epsilon(1e-10));
  }
}

TEST_CASE("kernel derivatives match finite differences") {
  for (auto kind : {KernelKind::SymmetricQuartic, KernelKind::OneSidedQuintic}) {
    const SmoothKernel k(kind);
    const double step = 1e-4;
    for (int i = 0; i < 48; ++i) {
      const double u = -1.2 + 0.05 * i + 0.013;
      const double d1 = (k(u + step) - k(u - step)) / (2 * step);
      const double d2 = (k.derivative(u + step) - k.derivative(u - step)) / (2 * step);
      REQUIRE(std::abs(d1 - k.derivative(u)) < 1e-4);
      REQUIRE(std::abs(d2 - k.second_derivative(u)) < 1e-4);
    }
    // The second derivative is continuous at the knots: one-sided values
    // shrink with the step.
    for (double knot : {-1.0, 0.0, 1.0}) {
      const double jump = std::abs(k.second_derivative(knot + step) - k.second_derivative(knot - step));
      const double jump_small = std::abs(k.second_derivative(knot + step / 10) - k.second_derivative(knot - step / 10));
      REQUIRE(jump < 1e-2);
      REQUIRE(jump_small <= jump / 5 + 1e-15);
      REQUIRE(std::abs(k.derivative(knot + step) - k.derivative(knot - step)) < 1e-4);
    }
  }
}

TEST_CASE("saturated and vanishing regimes") {
  std::mt19937_64 rng(91);
  const OutcomeMatrix y1(ts::normal_symmetric(6, rng));
  const OutcomeMatrix y0(ts::normal_symmetric(6, rng));
  const double h = 0.5;
  const double hi = 100.0;
  const Vector l1 = eig_values(indicator(y1, hi).entries);
  const Vector l0 = eig_values(indicator(y0, hi).entries);
  CHECK(smoothed_eig_product(y1, y0, hi, hi, h) == doctest::Approx(eig_dot(l1, l0, Pairing::Sorted)));
  CHECK(std::abs(smoothed_eig_product(y1, y0, -100.0, -100.0, h)) < 1e-12);

  const auto exact = dpo_bounds(y1, y0, hi, hi);
  const auto smooth = smoothed_dpo_bounds(y1, y0, hi, hi, h);
  CHECK(smooth.lower == doctest::Approx(exact.lower));
  CHECK(smooth.upper == doctest::Approx(exact.upper));
  const auto zero = smoothed_dpo_bounds(y1, y0, -100.0, -100.0, h);
  CHECK(zero.lower == doctest::Approx(0.0));
  CHECK(zero.upper == doctest::Approx(0.0));

  CHECK_THROWS_AS(smoothed_eig_product(y1, y0, 0.0, 0.0, 0.0), Error);
  CHECK_THROWS_AS(smoothed_ste_cdf(y1, y0, BasisTag::Treated, 0.0, -1.0), Error);
}

TEST_CASE("small bandwidth approaches the exact cross-product") {
  std::mt19937_64 rng(92);
  const OutcomeMatrix y1(ts::normal_symmetric(12, rng));
  const OutcomeMatrix y0(ts::normal_symmetric(12, rng));
  const double scale = entry_scale(y1.entries(), y0.entries());
  const double t1 = 0.1234;
  const double t0 = -0.4321;
  const double exact = eig_dot(eig_values(indicator(y1, t1).entries),
                               eig_values(indicator(y0, t0).entries), Pairing::Sorted);
  // Thresholds are well away from every entry, so tiny bandwidths saturate.
  CHECK(smoothed_eig_product(y1, y0, t1, t0, 1e-7 * scale) == doctest::Approx(exact).epsilon(1e-9));
  CHECK(std::abs(smoothed_eig_product(y1, y0, t1, t0, 1e-3 * scale) - exact) < 1e-3 + 0.05);
}

TEST_CASE("smoothed STE distribution function") {
  std::mt19937_64 rng(93);
  const OutcomeMatrix y1(ts::normal_symmetric(8, rng));
  const OutcomeMatrix y0(ts::normal_symmetric(8, rng));
  const Matrix s = stt(y1, y0).entries;
  const double h = 0.2;
  CHECK(smoothed_ste_cdf(y1, y0, BasisTag::Treated, s.maxCoeff() + 2 * h, h) == doctest::Approx(1.0));
  CHECK(smoothed_ste_cdf(y1, y0, BasisTag::Treated, s.minCoeff() - 2 * h, h) == doctest::Approx(0.0));
  double prev = 0.0;
  for (double y = -10.0; y <= 10.0; y += 0.1) {
    const double v = smoothed_ste_cdf(y1, y0, BasisTag::Untreated, y, h);
    REQUIRE(v >= prev - 1e-15);
    prev = v;
  }
  // Smoothed CDF tracks the counting CDF at small bandwidth.
  const double scale = s.maxCoeff() - s.minCoeff();
  for (double y : {-0.777, 0.0123, 0.5111}) {
    const double direct = ts::ecdf(s, y);
    CHECK(std::abs(smoothed_cdf(s, y, 0.01 * scale) - direct) < 0.02);
  }
}

TEST_CASE("bandwidth helpers") {
  Matrix m(2, 2);
  m << 0, 1, 1, 2;
  CHECK(entry_scale(m, Matrix::Constant(2, 2, 5.0)) == 5.0);
  CHECK(entry_scale(Matrix::Ones(2, 2), Matrix::Ones(2, 2)) == 1.0);
  const double sd = std::sqrt(0.5);
  CHECK(default_bandwidth(m) == doctest::Approx(1.06 * sd * std::pow(2.0, -1.0 / 3.0)));
  CHECK(default_bandwidth(Matrix::Ones(3, 3)) > 0.0);
}
