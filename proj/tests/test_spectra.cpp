#include "doctest.h"
#include "support.hpp"

#include "specdte/spectra.hpp"

using namespace specdte;
namespace ts = testing_support;

TEST_CASE("exchange matrix spectrum") {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  const Spectrum s = eig_sorted(m);
  CHECK(s.values(0) == doctest::Approx(0.5));
  CHECK(s.values(1) == doctest::Approx(-0.5));
  CHECK(s.scale == 2);
}

TEST_CASE("all-ones spectrum is rank one") {
  const Spectrum s = eig_sorted(Matrix::Ones(3, 3));
  CHECK(s.values(0) == doctest::Approx(1.0));
  CHECK(std::abs(s.values(1)) < 1e-12);
  CHECK(std::abs(s.values(2)) < 1e-12);
  CHECK(s.vectors(0, 0) > 0.0);
}

TEST_CASE("eigenvalues agree with a Jacobi solver") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 50; ++rep) {
    const Matrix m = ts::normal_symmetric(6, rng);
    const auto ref = ts::jacobi_eigenvalues(m);
    const Spectrum s = eig_sorted(m);
    for (Index r = 0; r < 6; ++r) CHECK(s.values(r) * 6.0 == doctest::Approx(ref[static_cast<std::size_t>(r)]).epsilon(1e-9));
    const Vector v = eig_values(m);
    CHECK((v - s.values).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("reconstruction, orthonormality and energy") {
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 1000; ++rep) {
    const Index n = 1 + static_cast<Index>(rep % 9);
    const Matrix m = ts::normal_symmetric(n, rng);
    const Spectrum s = eig_sorted(m);
    const Matrix rebuilt = s.vectors * (static_cast<double>(n) * s.values).asDiagonal() * s.vectors.transpose();
    REQUIRE((rebuilt - m).norm() < 1e-8);
    REQUIRE((s.vectors.transpose() * s.vectors - Matrix::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-10);
    REQUIRE(std::abs(s.energy() - m.squaredNorm() / static_cast<double>(n * n)) < 1e-10);
    for (Index r = 1; r < n; ++r) REQUIRE(s.values(r - 1) >= s.values(r));
    for (Index r = 0; r < n; ++r) {
      Index k = 0;
      while (k < n && std::abs(s.vectors(k, r)) <= 1e-10) ++k;
      if (k < n) REQUIRE(s.vectors(k, r) > 0.0);
    }
  }
}

TEST_CASE("spectrum is invariant to relabeling") {
  std::mt19937_64 rng(13);
  const Matrix m = ts::normal_symmetric(4, rng);
  const Vector base = eig_values(m);
  auto p = ts::identity_perm(4);
  do {
    CHECK((eig_values(ts::permute(m, p)) - base).cwiseAbs().maxCoeff() < 1e-12);
  } while (std::next_permutation(p.begin(), p.end()));
  for (int rep = 0; rep < 20; ++rep) {
    const Matrix big = ts::normal_symmetric(9, rng);
    auto q = ts::identity_perm(9);
    std::shuffle(q.begin(), q.end(), rng);
    CHECK((eig_values(ts::permute(big, q)) - eig_values(big)).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("outcome matrix validation") {
  Matrix a(2, 2);
  a << 0, 1, 1.0 + 1e-14, 0;
  const OutcomeMatrix ok(a);
  CHECK(ok(0, 1) == ok(1, 0));

  Matrix bad(2, 2);
  bad << 0, 1, 2, 0;
  CHECK_THROWS_WITH_AS(OutcomeMatrix{bad}, doctest::Contains("asymmetry"), Error);

  Matrix nan = Matrix::Zero(2, 2);
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(OutcomeMatrix{nan}, Error);
  CHECK_THROWS_AS(OutcomeMatrix{Matrix(2, 3)}, Error);
}

TEST_CASE("indicator uses a weak inequality") {
  Matrix y(2, 2);
  y << 0.2, 0.8, 0.8, 0.1;
  const OutcomeMatrix m(y);
  CHECK(indicator(m, 0.5).entries == Matrix::Identity(2, 2));
  CHECK(indicator(m, 0.0).entries == Matrix::Zero(2, 2));
  CHECK(indicator(m, 0.8).entries == Matrix::Ones(2, 2));
  CHECK(indicator(m, 0.5).mass() == doctest::Approx(0.5));
  CHECK_THROWS_AS(indicator(m, std::nan("")), Error);
}

TEST_CASE("indicator energy equals its mass") {
  std::mt19937_64 rng(14);
  for (int rep = 0; rep < 200; ++rep) {
    const Matrix y = ts::level_symmetric(7, 4, rng);
    for (double t : {-0.5, 0.0, 1.0, 2.0, 3.0}) {
      const auto a = indicator(y, t);
      REQUIRE(std::abs(eig_values(a.entries).squaredNorm() - a.mass()) < 1e-10);
      REQUIRE(a.mass() == doctest::Approx(ts::ecdf(y, t)));
    }
  }
}

TEST_CASE("eig_dot pairings") {
  Vector v(2);
  v << 0.5, -0.5;
  CHECK(eig_dot(v, v, Pairing::Sorted) == doctest::Approx(0.5));
  CHECK(eig_dot(v, v, Pairing::Antisorted) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(eig_dot(v, Vector::Zero(3), Pairing::Sorted), Error);
}

TEST_CASE("rearrangement: sorted >= any pairing >= antisorted") {
  std::mt19937_64 rng(15);
  for (int rep = 0; rep < 100; ++rep) {
    const Index n = 2 + rep % 5;
    const Vector a = eig_values(ts::normal_symmetric(n, rng));
    const Vector b = eig_values(ts::normal_symmetric(n, rng));
    const double hi = eig_dot(a, b, Pairing::Sorted);
    const double lo = eig_dot(a, b, Pairing::Antisorted);
    auto p = ts::identity_perm(n);
    do {
      double s = 0.0;
      for (Index r = 0; r < n; ++r) s += a(r) * b(p[static_cast<std::size_t>(r)]);
      REQUIRE(s <= hi + 1e-12);
      REQUIRE(s >= lo - 1e-12);
    } while (std::next_permutation(p.begin(), p.end()));
  }
}

TEST_CASE("padding keeps zeros between signs") {
  Vector v(3);
  v << 0.4, 0.1, -0.3;
  const Vector p = pad_spectrum(v, 5);
  Vector want(5);
  want << 0.4, 0.1, 0.0, 0.0, -0.3;
  CHECK(p == want);
}

TEST_CASE("threshold grid") {
  const auto g = threshold_grid(Matrix::Ones(2, 2), Matrix::Ones(3, 3));
  CHECK(g == std::vector<double>{0.0, 1.0, 2.0});

  Matrix a(2, 2);
  a << 1, 2, 2, 1;
  Matrix b(2, 2);
  b << 2, 3, 3, 2;
  CHECK(threshold_grid(a, b) == std::vector<double>{0.0, 1.0, 2.0, 3.0, 4.0});

  std::mt19937_64 rng(16);
  const Matrix x = ts::normal_symmetric(5, rng);
  const Matrix z = ts::normal_symmetric(4, rng);
  const auto big = threshold_grid(x, z);
  CHECK(big.size() <= 25 + 16 + 2);
  CHECK(std::is_sorted(big.begin(), big.end()));
  CHECK(half_min_gap({0.0, 1.0, 1.5}) == doctest::Approx(0.25));
}
