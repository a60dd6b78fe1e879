#pragma once

#include "missreg/core.hpp"

#include <random>

namespace missreg {

// Synthetic linear-model data: rows X_i ~ N(0, Sigma) with
// Sigma = Q diag(1, 1/2, ..., 1/d) Q^T for a seeded Haar-random orthogonal Q,
// responses y_i = <X_i, beta_star> + eps_i, and i.i.d. Bernoulli(p_j) masks.
struct SynthConfig {
  Index d = 0;
  long n = 0;
  Vector beta_star;        // defaults to ones scaled to unit norm if empty
  double noise_std = 1.0;  // std of eps
  Vector p;                // per-feature observation probability
  std::uint64_t seed = 0;

  void validate() const;
};

struct SynthData {
  Matrix X;                          // complete pre-mask design, n x d
  Vector y;                          // responses
  std::vector<Observation> masked;   // the stream the algorithms see
  MissingnessModel miss;             // the generating p (Supplied)
  Matrix sigma;                      // population covariance
  Vector beta_star;                  // generating parameter actually used
};

SynthData generate(const SynthConfig& cfg);

// all-ones vector scaled to unit norm
Vector default_beta_star(Index d);

// Haar-distributed orthogonal matrix: QR of a Gaussian matrix with the sign
// convention that the triangular factor has positive diagonal.
Matrix random_orthogonal(Index d, std::mt19937_64& rng);

// per-replication RNG stream derived from (seed, replication index)
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Constants of the streaming excess-risk bound. gamma is the a.s. bound on
// ||X||; Gaussian designs use the realized max row norm as a surrogate.
struct BoundInputs {
  double gamma = 0.0;
  double p_m = 1.0;
  double noise_var = 0.0;
  double beta_star_norm = 0.0;
  Index d = 0;
  double alpha = 0.0;
  double L = 0.0;
  double init_dist = 0.0;  // ||beta_0 - beta_star||
};

// c(beta*) = noise_var / p_m^2 + ((2 + 5 p_m)(1 - p_m) / p_m^3) gamma^2 ||beta*||^2
double variance_constant(const BoundInputs& in);

// (1/2k) * ( sqrt(c d) / (1 - sqrt(alpha L)) + init_dist / sqrt(alpha) )^2;
// requires alpha * L < 1.
double excess_risk_bound(const BoundInputs& in, long k);

// Iterate bound under ridge: excess_risk_bound / lambda, lambda > 0.
double ridge_iterate_bound(const BoundInputs& in, double lambda, long k);

}  // namespace missreg
