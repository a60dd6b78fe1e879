#include "missreg/synthgen.hpp"

#include <cmath>
#include <stdexcept>

namespace missreg {

void SynthConfig::validate() const {
  if (d <= 0) throw std::invalid_argument("SynthConfig: d must be positive");
  if (n <= 0) throw std::invalid_argument("SynthConfig: n must be positive");
  if (beta_star.size() != 0 && beta_star.size() != d)
    throw std::invalid_argument("SynthConfig: beta_star size mismatch");
  if (!(noise_std >= 0.0) || !std::isfinite(noise_std))
    throw std::invalid_argument("SynthConfig: noise_std must be finite and >= 0");
  if (p.size() != d)
    throw std::invalid_argument("SynthConfig: p must have one entry per feature");
  for (Index j = 0; j < p.size(); ++j)
    if (!(p[j] > 0.0) || !(p[j] <= 1.0))
      throw std::invalid_argument("SynthConfig: p entries must lie in (0, 1]");
}

Vector default_beta_star(Index d) {
  if (d <= 0) throw std::invalid_argument("default_beta_star: d must be positive");
  return Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
}

Matrix random_orthogonal(Index d, std::mt19937_64& rng) {
  if (d <= 0) throw std::invalid_argument("random_orthogonal: d must be positive");
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix G(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) G(i, j) = gauss(rng);
  Eigen::HouseholderQR<Matrix> qr(G);
  Matrix Q = qr.householderQ();
  const Matrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  // fix the QR sign ambiguity so the draw is Haar distributed
  for (Index j = 0; j < d; ++j)
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  return Q;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the combined state
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SynthData generate(const SynthConfig& cfg) {
  cfg.validate();
  const Index d = cfg.d;
  const long n = cfg.n;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  SynthData out;
  out.beta_star = cfg.beta_star.size() == d ? cfg.beta_star : default_beta_star(d);

  const Matrix Q = random_orthogonal(d, rng);
  Vector eig(d);
  for (Index j = 0; j < d; ++j) eig[j] = 1.0 / static_cast<double>(j + 1);
  out.sigma = Q * eig.asDiagonal() * Q.transpose();
  const Matrix A = Q * eig.cwiseSqrt().asDiagonal();  // A A^T == sigma

  out.X.resize(n, d);
  Vector z(d);
  for (long i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) z[j] = gauss(rng);
    out.X.row(i) = (A * z).transpose();
  }

  out.y.resize(n);
  for (long i = 0; i < n; ++i)
    out.y[i] = out.X.row(i).dot(out.beta_star) + cfg.noise_std * gauss(rng);

  out.masked.reserve(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) {
    BoolArray mask(d);
    for (Index j = 0; j < d; ++j) mask[j] = unif(rng) < cfg.p[j];
    Vector vals = out.X.row(i).transpose();
    for (Index j = 0; j < d; ++j)
      if (!mask[j]) vals[j] = 0.0;
    out.masked.push_back(Observation{MaskedVector::from_parts(vals, mask), out.y[i]});
  }

  out.miss = MissingnessModel{cfg.p, Provenance::Supplied};
  return out;
}

double variance_constant(const BoundInputs& in) {
  if (!(in.p_m > 0.0) || !(in.p_m <= 1.0))
    throw std::invalid_argument("variance_constant: p_m must lie in (0, 1]");
  if (!(in.noise_var >= 0.0))
    throw std::invalid_argument("variance_constant: noise_var must be >= 0");
  if (!(in.gamma >= 0.0))
    throw std::invalid_argument("variance_constant: gamma must be >= 0");
  if (!(in.beta_star_norm >= 0.0))
    throw std::invalid_argument("variance_constant: beta_star_norm must be >= 0");
  const double pm = in.p_m;
  const double noise_part = in.noise_var / (pm * pm);
  const double miss_part = (2.0 + 5.0 * pm) * (1.0 - pm) / (pm * pm * pm) *
                           in.gamma * in.gamma * in.beta_star_norm * in.beta_star_norm;
  return noise_part + miss_part;
}

double excess_risk_bound(const BoundInputs& in, long k) {
  if (k <= 0) throw std::invalid_argument("excess_risk_bound: k must be positive");
  if (in.d <= 0) throw std::invalid_argument("excess_risk_bound: d must be positive");
  if (!(in.alpha > 0.0))
    throw std::invalid_argument("excess_risk_bound: alpha must be positive");
  if (!(in.L > 0.0)) throw std::invalid_argument("excess_risk_bound: L must be positive");
  if (!(in.alpha * in.L < 1.0))
    throw InvalidDataError("excess_risk_bound: requires alpha * L < 1");
  if (!(in.init_dist >= 0.0))
    throw std::invalid_argument("excess_risk_bound: init_dist must be >= 0");
  const double c = variance_constant(in);
  const double term = std::sqrt(c * static_cast<double>(in.d)) /
                          (1.0 - std::sqrt(in.alpha * in.L)) +
                      in.init_dist / std::sqrt(in.alpha);
  return term * term / (2.0 * static_cast<double>(k));
}

double ridge_iterate_bound(const BoundInputs& in, double lambda, long k) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("ridge_iterate_bound: lambda must be positive");
  return excess_risk_bound(in, k) / lambda;
}

}  // namespace missreg
