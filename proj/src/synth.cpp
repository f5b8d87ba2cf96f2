#include "specdte/synth.hpp"

#include "specdte/random.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numeric>
#include <sstream>

namespace specdte {

namespace {

Permutation permutation_from(Index n, std::mt19937_64 rng) {
  Permutation p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), Index{0});
  for (Index i = n - 1; i > 0; --i) {
    const auto j = static_cast<Index>(uniform_below(rng, static_cast<std::uint64_t>(i + 1)));
    std::swap(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
  }
  return p;
}

GeneratedExperiment assemble(Matrix y1, Matrix y0, std::uint64_t seed, std::string desc) {
  const Index n = y1.rows();
  Permutation p1 = permutation_from(n, substream(seed, 1));
  Permutation p0 = permutation_from(n, substream(seed, 2));
  OutcomeMatrix s1(std::move(y1), 1);
  OutcomeMatrix s0(std::move(y0), 0);
  OutcomeMatrix o1(relabel(s1.entries(), p1), 1);
  OutcomeMatrix o0(relabel(s0.entries(), p0), 0);
  const bool invariant = rank_invariance_check(s1, s0).invariant;
  GeneratedExperiment e{std::move(s1), std::move(s0), std::move(o1), std::move(o0),
                        std::move(p1),  std::move(p0), std::move(desc), invariant, {}};
  if (!invariant) e.warning = "generated pair fails the rank-invariance check";
  return e;
}

void check_adjacency(const Matrix& g, const char* who) {
  if (g.rows() != g.cols() || g.rows() == 0)
    throw Error(std::string(who) + ": adjacency must be square and non-empty");
  for (Index i = 0; i < g.rows(); ++i)
    for (Index j = 0; j < g.cols(); ++j) {
      const double v = g(i, j);
      if (v != 0.0 && v != 1.0)
        throw Error(std::string(who) + ": adjacency entries must be 0 or 1");
      if (v != g(j, i)) throw Error(std::string(who) + ": adjacency must be symmetric");
      if (i == j && v != 0.0) throw Error(std::string(who) + ": adjacency diagonal must be zero");
    }
}

}  // namespace

Permutation random_permutation(Index n, std::uint64_t seed) {
  if (n < 0) throw Error("random_permutation: negative size");
  return permutation_from(n, substream(seed, 0));
}

Matrix relabel(const Matrix& m, const Permutation& p) {
  const auto n = static_cast<Index>(p.size());
  if (m.rows() != n || m.cols() != n) throw Error("relabel: permutation length mismatch");
  Matrix out(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      out(i, j) = m(p[static_cast<std::size_t>(i)], p[static_cast<std::size_t>(j)]);
  return out;
}

GeneratedExperiment gen_diffusion(const Matrix& g, double alpha0, double alpha1, int periods,
                                  std::uint64_t seed) {
  check_adjacency(g, "gen_diffusion");
  if (periods < 1) throw Error("gen_diffusion: number of periods must be >= 1");
  if (!(alpha0 > 0.0 && alpha0 < 1.0 && alpha1 > 0.0 && alpha1 < 1.0))
    throw Error("gen_diffusion: alpha0 and alpha1 must lie in (0,1)");

  const Index n = g.rows();
  Matrix y1 = Matrix::Zero(n, n);
  Matrix y0 = Matrix::Zero(n, n);
  Matrix power = Matrix::Identity(n, n);
  double a1 = 1.0;
  double a0 = 1.0;
  for (int t = 1; t <= periods; ++t) {
    power = power * g;
    a1 *= alpha1;
    a0 *= alpha0;
    y1 += a1 * power;
    y0 += a0 * power;
  }

  std::ostringstream desc;
  desc << "diffusion: Y_s = sum_{t=1}^{" << periods << "} alpha_s^t G^t, alpha0=" << alpha0
       << ", alpha1=" << alpha1;
  auto e = assemble(std::move(y1), std::move(y0), seed, desc.str());

  std::string cond;
  if (!(alpha0 < alpha1)) cond = "alpha0 < alpha1 does not hold";
  else if (periods > 2 &&
           !(alpha1 < std::pow(1.0 / periods, 1.0 / static_cast<double>(periods - 2))))
    cond = "alpha1 exceeds (1/T)^(1/(T-2))";
  if (!cond.empty()) {
    e.warning = e.warning.empty() ? cond : cond + "; " + e.warning;
    e.rank_invariant = false;
  }
  return e;
}

GeneratedExperiment gen_social(const Matrix& g, double beta0, double beta1, double sigma2,
                               std::uint64_t seed) {
  if (g.rows() != g.cols() || g.rows() == 0)
    throw Error("gen_social: adjacency must be square and non-empty");
  if (!g.allFinite() || !g.isApprox(g.transpose(), 0.0))
    throw Error("gen_social: adjacency must be finite and symmetric");
  if (!(sigma2 > 0.0)) throw Error("gen_social: sigma2 must be positive");
  if (!(beta0 > 0.0 && beta0 < beta1))
    throw Error("gen_social: requires 0 < beta0 < beta1");
  const double radius =
      Eigen::SelfAdjointEigenSolver<Matrix>(g, Eigen::EigenvaluesOnly).eigenvalues().cwiseAbs().maxCoeff();
  if (beta1 * radius >= 1.0) {
    std::ostringstream os;
    os << "gen_social: beta1 = " << beta1 << " must be below 1/lambda_max(G) = "
       << (radius > 0.0 ? 1.0 / radius : INFINITY);
    throw Error(os.str());
  }

  const Index n = g.rows();
  auto equilibrium = [&](double beta) {
    const Matrix inv = (Matrix::Identity(n, n) - beta * g).inverse();
    Matrix y = sigma2 * inv * inv;
    return Matrix(0.5 * (y + y.transpose()));
  };
  std::ostringstream desc;
  desc << "social: Y_s = sigma2 (I - beta_s G)^(-2), beta0=" << beta0 << ", beta1=" << beta1
       << ", sigma2=" << sigma2;
  return assemble(equilibrium(beta1), equilibrium(beta0), seed, desc.str());
}

GeneratedExperiment gen_linkformation(const Matrix& x, double beta0, double beta1,
                                      std::uint64_t seed) {
  if (x.rows() == 0 || x.cols() == 0) throw Error("gen_linkformation: empty characteristics");
  if (!x.allFinite()) throw Error("gen_linkformation: characteristics must be finite");
  if (!(beta0 > 0.0 && beta1 >= beta0))
    throw Error("gen_linkformation: requires beta1 >= beta0 > 0");

  const Matrix gram = x * x.transpose();
  const Vector means = gram.rowwise().mean();
  const Index n = gram.rows();
  Matrix xt(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) xt(i, j) = gram(i, j) - means(i) - means(j);

  std::ostringstream desc;
  desc << "linkformation: Y_s = 2 beta_s Xtilde, g(x) = (" << beta1 << "/" << beta0 << ") x";
  return assemble(2.0 * beta1 * xt, 2.0 * beta0 * xt, seed, desc.str());
}

GeneratedExperiment gen_factor(const Matrix& loadings, const Vector& sigma2, double rho0,
                               double rho1, std::uint64_t seed) {
  if (loadings.rows() == 0 || loadings.cols() == 0) throw Error("gen_factor: empty loadings");
  if (sigma2.size() != loadings.rows())
    throw Error("gen_factor: sigma2 length must equal the number of loading rows");
  if (!loadings.allFinite() || !sigma2.allFinite())
    throw Error("gen_factor: inputs must be finite");
  if ((sigma2.array() <= 0.0).any()) throw Error("gen_factor: sigma2 must be positive");
  if (!(rho0 > 0.0 && rho1 >= rho0)) throw Error("gen_factor: requires rho1 >= rho0 > 0");

  const Matrix gram = loadings.transpose() * loadings;
  const double scale = std::max(1.0, gram.diagonal().cwiseAbs().maxCoeff());
  Matrix off = gram;
  off.diagonal().setZero();
  if (off.cwiseAbs().maxCoeff() > 1e-8 * scale)
    throw Error("gen_factor: loading columns are not orthogonal");

  const Matrix base = loadings.transpose() * sigma2.asDiagonal() * loadings;
  const Matrix sym = 0.5 * (base + base.transpose());
  std::ostringstream desc;
  desc << "factor: Y_s = rho_s L' diag(sigma2) L, g(x) = (" << rho1 << "/" << rho0 << ") x";
  return assemble(rho1 * sym, rho0 * sym, seed, desc.str());
}

Matrix random_graph(Index n, double p, std::uint64_t seed) {
  if (n < 1) throw Error("random_graph: size must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw Error("random_graph: p must lie in [0,1]");
  auto rng = substream(seed, 0);
  Matrix g = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i)
    for (Index j = i + 1; j < n; ++j)
      if (uniform01(rng) < p) g(i, j) = g(j, i) = 1.0;
  return g;
}

}  // namespace specdte
