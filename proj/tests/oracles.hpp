#pragma once

// Shared test oracles. Everything here is deliberately brute-force and
// independent of the library's drivers: expectations are taken by enumerating
// all masks and weighting by their probabilities, and the reference SGD loop
// stores every iterate so averages can be recomputed from the definition.

#include "missreg/core.hpp"
#include "missreg/gradient.hpp"
#include "missreg/polyfeat.hpp"

#include <random>
#include <span>
#include <vector>

namespace missreg::testing {

// E over the 2^d Bernoulli masks of the debiased (optionally ridge) gradient
// at a fixed complete row. Cost 2^d, so keep d <= ~12.
inline Vector mask_expectation_plain(const Vector& x, double y, const Vector& beta,
                                     const Vector& p, double lambda = 0.0) {
  const Index d = x.size();
  const MissingnessModel miss = MissingnessModel::supplied(p);
  Vector acc = Vector::Zero(d);
  for (unsigned long bits = 0; bits < (1ul << d); ++bits) {
    double prob = 1.0;
    Vector vals = Vector::Zero(d);
    BoolArray mask(d);
    for (Index j = 0; j < d; ++j) {
      const bool on = (bits >> j) & 1ul;
      mask[j] = on;
      prob *= on ? p[j] : 1.0 - p[j];
      if (on) vals[j] = x[j];
    }
    if (prob == 0.0) continue;
    const MaskedVector mv = MaskedVector::from_parts(std::move(vals), std::move(mask));
    acc += prob * debiased_gradient_ridge(mv, y, beta, miss, lambda);
  }
  return acc;
}

inline Vector complete_gradient(const Vector& x, double y, const Vector& beta,
                                double lambda = 0.0) {
  Vector g = x * (x.dot(beta) - y);
  if (lambda != 0.0) g += (2.0 * lambda) * beta;
  return g;
}

// Same enumeration for the polynomial direction. Masks are drawn in raw
// space and the masked row is expanded per draw, so the correlation between
// expanded coordinates sharing raw variables is realized exactly.
inline Vector mask_expectation_poly(const Vector& x_raw, double y, const Vector& beta,
                                    const Vector& p, const FeatureMap& fm,
                                    const Matrix& U, double lambda = 0.0) {
  const Index d = x_raw.size();
  Vector acc = Vector::Zero(fm.d_exp());
  for (unsigned long bits = 0; bits < (1ul << d); ++bits) {
    double prob = 1.0;
    Vector vals = Vector::Zero(d);
    BoolArray mask(d);
    for (Index j = 0; j < d; ++j) {
      const bool on = (bits >> j) & 1ul;
      mask[j] = on;
      prob *= on ? p[j] : 1.0 - p[j];
      if (on) vals[j] = x_raw[j];
    }
    if (prob == 0.0) continue;
    const MaskedVector raw = MaskedVector::from_parts(std::move(vals), std::move(mask));
    Vector g = debiased_direction_poly(expand_row(raw, fm), y, beta, U);
    if (lambda != 0.0) g += (2.0 * lambda) * beta;
    acc += prob * g;
  }
  return acc;
}

inline Vector complete_gradient_poly(const Vector& x_raw, double y, const Vector& beta,
                                     const FeatureMap& fm, double lambda = 0.0) {
  const Vector xe = expand_row(MaskedVector::complete(x_raw), fm).values;
  Vector g = xe * (xe.dot(beta) - y);
  if (lambda != 0.0) g += (2.0 * lambda) * beta;
  return g;
}

// Textbook recursion with every iterate kept. Uses eval_gradient for the
// per-sample direction but owns its own loop, so driver bookkeeping
// (ordering, step schedule, averaging) is checked against the definition.
struct ReferenceRun {
  std::vector<Vector> iterates;  // beta_0 .. beta_K

  // average over all stored iterates, beta_0 included
  Vector average() const {
    Vector s = Vector::Zero(iterates.front().size());
    for (const auto& b : iterates) s += b;
    return s / static_cast<double>(iterates.size());
  }
  const Vector& last() const { return iterates.back(); }
};

inline ReferenceRun reference_sgd(std::span<const Observation> data,
                                  const MissingnessModel& miss, const GradientKind& kind,
                                  const StepPolicy& policy, long passes = 1) {
  const Index d = data.front().x.size();
  Vector beta = Vector::Zero(d);
  ReferenceRun out;
  out.iterates.push_back(beta);
  long done = 0;
  for (long pass = 0; pass < passes; ++pass) {
    for (const auto& ob : data) {
      beta -= policy.step_at(done) * eval_gradient(kind, ob.x, ob.y, beta, miss);
      out.iterates.push_back(beta);
      ++done;
    }
  }
  return out;
}

// Plain averaged SGD on complete rows, written with no missingness machinery
// at all. Mirrors the update and averaging expressions of the library driver
// so the complete-data reduction can be compared bit for bit.
struct PlainSgdResult {
  Vector beta;
  Vector beta_avg;
};

inline PlainSgdResult plain_averaged_sgd(const Matrix& X, const Vector& y, double alpha) {
  const Index d = X.cols();
  PlainSgdResult r{Vector::Zero(d), Vector::Zero(d)};
  for (Index i = 0; i < X.rows(); ++i) {
    const Vector x = X.row(i);
    const double resid = x.dot(r.beta) - y[i];
    const Vector g = x * resid;
    r.beta -= alpha * g;
    const double kk = static_cast<double>(i + 1);
    r.beta_avg = (kk / (kk + 1.0)) * r.beta_avg + (1.0 / (kk + 1.0)) * r.beta;
  }
  return r;
}

// masks rows of a complete design with seeded Bernoulli draws
inline std::vector<Observation> mask_rows(const Matrix& X, const Vector& y,
                                          const Vector& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Observation> out;
  out.reserve(static_cast<std::size_t>(X.rows()));
  for (Index i = 0; i < X.rows(); ++i) {
    Vector vals = Vector::Zero(X.cols());
    BoolArray mask(X.cols());
    for (Index j = 0; j < X.cols(); ++j) {
      const bool on = unif(rng) < p[j];
      mask[j] = on;
      if (on) vals[j] = X(i, j);
    }
    out.emplace_back(MaskedVector::from_parts(std::move(vals), std::move(mask)), y[i]);
  }
  return out;
}

}  // namespace missreg::testing
