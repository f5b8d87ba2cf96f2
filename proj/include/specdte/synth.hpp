#pragma once

// Rank-invariant synthetic experiments. Each generator returns the aligned
// potential-outcome pair and independently relabeled observed copies.

#include "specdte/oracle.hpp"
#include "specdte/ste.hpp"

#include <cstdint>
#include <string>

namespace specdte {

struct GeneratedExperiment {
  OutcomeMatrix y1_star;
  OutcomeMatrix y0_star;
  OutcomeMatrix y1_obs;  // P1 Y1* P1'
  OutcomeMatrix y0_obs;  // P0 Y0* P0'
  Permutation perm1;     // y1_obs(i,j) == y1_star(perm1[i], perm1[j])
  Permutation perm0;
  std::string g_description;
  bool rank_invariant = false;
  std::string warning;
};

/// Uniform random permutation from a seeded stream.
Permutation random_permutation(Index n, std::uint64_t seed);

/// out(i,j) = m(p[i], p[j]).
Matrix relabel(const Matrix& m, const Permutation& p);

/// Y_s = sum_{t=1..T} alpha_s^t G^t. Rank invariance is certified with
/// rank_invariance_check; the sufficient condition alpha1 < (1/T)^(1/(T-2))
/// for T > 2 only triggers a warning when violated.
GeneratedExperiment gen_diffusion(const Matrix& g, double alpha0, double alpha1, int periods,
                                  std::uint64_t seed);

/// Y_s = sigma2 (I - beta_s G)^(-2); requires 0 < beta0 < beta1 < 1/lambda_max(G).
GeneratedExperiment gen_social(const Matrix& g, double beta0, double beta1, double sigma2,
                               std::uint64_t seed);

/// Y_s = 2 beta_s Xtilde, Xtilde the Gram matrix X X' with row and column
/// means subtracted.
GeneratedExperiment gen_linkformation(const Matrix& x, double beta0, double beta1,
                                      std::uint64_t seed);

/// R x R rotated outcome Y_s(a,b) = sum_i rho_s sigma2_i L(i,a) L(i,b) for
/// loadings L with orthogonal columns.
GeneratedExperiment gen_factor(const Matrix& loadings, const Vector& sigma2, double rho0,
                               double rho1, std::uint64_t seed);

/// Symmetric binary zero-diagonal adjacency with iid Bernoulli(p) links.
Matrix random_graph(Index n, double p, std::uint64_t seed);

}  // namespace specdte
