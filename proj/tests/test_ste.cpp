#include "doctest.h"
#include "support.hpp"

#include "specdte/ste.hpp"

using namespace specdte;
namespace ts = testing_support;

namespace {

Matrix exchange() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

// Random symmetric matrix with a well separated spectrum.
Matrix simple_spectrum(Index n, std::mt19937_64& rng) {
  const Matrix q = ts::random_orthonormal(n, rng);
  Vector d(n);
  for (Index i = 0; i < n; ++i) d(i) = static_cast<double>(i) - 0.37 * static_cast<double>(n);
  return q * d.asDiagonal() * q.transpose();
}

}  // namespace

TEST_CASE("identical arms give a zero effect") {
  std::mt19937_64 rng(51);
  const OutcomeMatrix y(ts::normal_symmetric(5, rng));
  CHECK(stt(y, y).entries.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(stu(y, y).entries.cwiseAbs().maxCoeff() < 1e-12);
  CHECK(ste(y, y, ts::random_orthonormal(5, rng)).entries.cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("shared eigenvectors recover the difference") {
  const OutcomeMatrix y0(exchange());
  const OutcomeMatrix y1(2.0 * exchange());
  const Matrix diff = y1.entries() - y0.entries();
  const auto s = stt(y1, y0);
  CHECK(s.basis_tag == BasisTag::Treated);
  CHECK((s.entries - diff).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((stu(y1, y0).entries - diff).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((ste(y1, y0, eig_sorted(y1).vectors).entries - exchange()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("ste energy is basis independent") {
  std::mt19937_64 rng(52);
  for (int rep = 0; rep < 100; ++rep) {
    const OutcomeMatrix y1(ts::normal_symmetric(6, rng));
    const OutcomeMatrix y0(ts::normal_symmetric(6, rng));
    const double a = stt(y1, y0).entries.norm();
    const double b = stu(y1, y0).entries.norm();
    const double c = ste(y1, y0, ts::random_orthonormal(6, rng)).entries.norm();
    const double want = (eig_sorted(y1).values - eig_sorted(y0).values).norm() * 6.0;
    REQUIRE(a == doctest::Approx(want).epsilon(1e-10));
    REQUIRE(std::abs(a - b) < 1e-8);
    REQUIRE(std::abs(a - c) < 1e-8);
    REQUIRE((stt(y1, y0).entries - stt(y1, y0).entries.transpose()).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("ste input checks") {
  std::mt19937_64 rng(53);
  const OutcomeMatrix y(ts::normal_symmetric(3, rng));
  CHECK_THROWS_AS(ste(y, y, Matrix::Ones(3, 3)), Error);
  const OutcomeMatrix small(ts::normal_symmetric(2, rng));
  CHECK_THROWS_AS(stt(y, small), Error);
}

TEST_CASE("stt through counterfactual weights") {
  std::mt19937_64 rng(54);
  for (int rep = 0; rep < 20; ++rep) {
    const OutcomeMatrix y1(ts::normal_symmetric(5, rng));
    const OutcomeMatrix y0(ts::normal_symmetric(5, rng));
    const Matrix w = counterfactual_weights(y1, y0);
    CHECK((w.transpose() * w - Matrix::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-8);
    const Matrix rebuilt = y1.entries() - w * y0.entries() * w.transpose();
    CHECK((rebuilt - stt(y1, y0).entries).norm() < 1e-8);
    // Alternative form through the treated eigenbasis.
    const Spectrum s1 = eig_sorted(y1);
    const Spectrum s0 = eig_sorted(y0);
    const Matrix alt = y1.entries() - s1.vectors * (5.0 * s0.values).asDiagonal() * s1.vectors.transpose();
    CHECK((alt - stt(y1, y0).entries).norm() < 1e-8);
  }
  const OutcomeMatrix y0(simple_spectrum(4, rng));
  const OutcomeMatrix y1(matrix_lift([](double x) { return 3.0 * x + 1.0; }, y0.entries()));
  const Matrix w = counterfactual_weights(y1, y0);
  CHECK((w * y0.entries() * w.transpose() - y0.entries()).norm() < 1e-8);
}

TEST_CASE("matrix lift") {
  std::mt19937_64 rng(55);
  const Matrix y = ts::normal_symmetric(5, rng);
  CHECK((matrix_lift([](double x) { return x; }, y) - y).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((matrix_lift([](double x) { return 2.0 * x; }, y) - 2.0 * y).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((matrix_lift([](double x) { return x * x; }, exchange()) - Matrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((matrix_lift([](double x) { return x * x * x; }, y) - y * y * y).cwiseAbs().maxCoeff() < 1e-9);
  CHECK_THROWS_AS(matrix_lift([](double x) { return std::log(x); }, y), Error);
}

TEST_CASE("rank invariance check") {
  std::mt19937_64 rng(56);
  const Matrix y0 = simple_spectrum(6, rng);
  const OutcomeMatrix m0(y0);
  const OutcomeMatrix lifted(matrix_lift([](double x) { return x * x * x + x; }, y0));
  auto rep = rank_invariance_check(lifted, m0);
  CHECK(rep.invariant);
  CHECK(rep.max_eigenvector_misalignment < 1e-8);

  rep = rank_invariance_check(OutcomeMatrix(-y0), m0);
  CHECK_FALSE(rep.invariant);
  CHECK(rep.g_monotonicity_violation > 0.0);

  // Same eigenvalues, eigenvectors rotated by 90 degrees in one plane.
  Matrix d(2, 2);
  d << 2, 0, 0, 1;
  Matrix rot(2, 2);
  rot << 0, -1, 1, 0;
  rep = rank_invariance_check(OutcomeMatrix(rot * d * rot.transpose()), OutcomeMatrix(d));
  CHECK_FALSE(rep.invariant);
  CHECK(rep.max_eigenvector_misalignment == doctest::Approx(1.0));
}

TEST_CASE("Hoffman-Wielandt gap") {
  std::mt19937_64 rng(57);
  const OutcomeMatrix y(ts::normal_symmetric(4, rng));
  auto g = hw_gap(y, y);
  CHECK(g.lhs == doctest::Approx(0.0));
  CHECK(g.rhs == doctest::Approx(0.0));

  Matrix a = Matrix::Zero(2, 2), b = Matrix::Zero(2, 2);
  a.diagonal() << 1, 2;
  b.diagonal() << 2, 1;
  g = hw_gap(OutcomeMatrix(a), OutcomeMatrix(b));
  CHECK(g.lhs == doctest::Approx(0.0));
  CHECK(g.rhs == doctest::Approx(0.5));

  for (int rep = 0; rep < 1000; ++rep) {
    const OutcomeMatrix y1(ts::normal_symmetric(7, rng));
    const OutcomeMatrix y0(ts::normal_symmetric(7, rng));
    const auto h = hw_gap(y1, y0);
    REQUIRE(h.lhs <= h.rhs + 1e-10);
  }
  const Matrix base = ts::normal_symmetric(6, rng);
  const auto eq = hw_gap(OutcomeMatrix(matrix_lift([](double x) { return std::exp(x / 3.0); }, base)),
                         OutcomeMatrix(base));
  CHECK(std::abs(eq.lhs - eq.rhs) < 1e-10);
}

TEST_CASE("non-extrapolative weights") {
  std::mt19937_64 rng(58);
  const OutcomeMatrix y(ts::normal_symmetric(5, rng));
  auto r = non_extrapolative_weights(y, y);
  CHECK(r.objective <= 1e-8);

  for (int rep = 0; rep < 10; ++rep) {
    const OutcomeMatrix y1(ts::normal_symmetric(4, rng));
    const OutcomeMatrix y0(ts::normal_symmetric(4, rng));
    r = non_extrapolative_weights(y1, y0);
    const Matrix& d = r.weights;
    CHECK((d.rowwise().sum().array() - 1.0).abs().maxCoeff() < 1e-8);
    CHECK((d.colwise().sum().array() - 1.0).abs().maxCoeff() < 1e-8);
    CHECK(d.minCoeff() >= -1e-12);
    CHECK(r.objective_trace.front() == doctest::Approx(weights_objective(y1.entries(), y0.entries(), Matrix::Identity(4, 4))));
    for (std::size_t k = 1; k < r.objective_trace.size(); ++k)
      CHECK(r.objective_trace[k] <= r.objective_trace[k - 1] + 1e-12);
    CHECK(r.objective == doctest::Approx(weights_objective(y1.entries(), y0.entries(), d)));
  }
  CHECK_THROWS_AS(non_extrapolative_weights(y, y, 0), Error);
}
