#include "missreg/polyfeat.hpp"

#include <array>

namespace missreg {

namespace {

// union of two supports, each of size 1 or 2; returns count written
int support_union(const FeatureMap::Feature& f, const FeatureMap::Feature& g,
                  std::array<Index, 4>& out) {
  int n = 0;
  auto add = [&](Index v) {
    for (int i = 0; i < n; ++i) {
      if (out[i] == v) return;
    }
    out[n++] = v;
  };
  add(f.a);
  if (f.b >= 0) add(f.b);
  add(g.a);
  if (g.b >= 0) add(g.b);
  return n;
}

}  // namespace

FeatureMap FeatureMap::degree2(Index d_raw) {
  if (d_raw <= 0) {
    throw InvalidDataError("FeatureMap::degree2: d_raw must be positive");
  }
  FeatureMap fm;
  fm.d_raw = d_raw;
  fm.features.reserve(size_t(d_raw + d_raw * (d_raw + 1) / 2));
  for (Index j = 0; j < d_raw; ++j) {
    fm.features.push_back({j, -1});
  }
  for (Index i = 0; i < d_raw; ++i) {
    for (Index j = i + 1; j < d_raw; ++j) {
      fm.features.push_back({i, j});
    }
  }
  for (Index j = 0; j < d_raw; ++j) {
    fm.features.push_back({j, j});
  }
  return fm;
}

void FeatureMap::validate() const {
  if (d_raw <= 0) {
    throw InvalidDataError("FeatureMap: d_raw must be positive");
  }
  for (size_t f = 0; f < features.size(); ++f) {
    const Feature& ft = features[f];
    const bool in_range = ft.a >= 0 && ft.a < d_raw &&
                          (ft.b < 0 || (ft.b < d_raw && ft.a <= ft.b));
    if (!in_range) {
      throw InvalidDataError("FeatureMap: bad feature at index " + std::to_string(f));
    }
  }
  for (Index j = 0; j < std::min(d_raw, Index(features.size())); ++j) {
    if (!(features[j].a == j && features[j].is_singleton())) {
      throw InvalidDataError("FeatureMap: first d_raw entries must be the "
                             "singletons in raw order");
    }
  }
}

MaskedVector expand_row(const MaskedVector& x, const FeatureMap& fm) {
  if (x.size() != fm.d_raw) {
    throw InvalidDataError("expand_row: row length " + std::to_string(x.size()) +
                           " != d_raw = " + std::to_string(fm.d_raw));
  }
  const Index m = fm.d_exp();
  Vector values = Vector::Zero(m);
  BoolArray mask = BoolArray::Constant(m, false);
  for (Index f = 0; f < m; ++f) {
    const FeatureMap::Feature& ft = fm.features[f];
    const bool observed =
        ft.is_singleton() ? x.mask[ft.a] : (x.mask[ft.a] && x.mask[ft.b]);
    mask[f] = observed;
    if (observed) {
      values[f] = ft.is_singleton() ? x.values[ft.a]
                                    : x.values[ft.a] * x.values[ft.b];
    }
  }
  return MaskedVector{std::move(values), std::move(mask)};
}

Matrix build_probability_matrix(const FeatureMap& fm, const MissingnessModel& miss) {
  fm.validate();
  if (miss.dim() != fm.d_raw) {
    throw InvalidDataError("build_probability_matrix: p length != d_raw");
  }
  const Index m = fm.d_exp();
  Matrix U(m, m);
  std::array<Index, 4> vars{};
  for (Index a = 0; a < m; ++a) {
    for (Index b = a; b < m; ++b) {
      const int n = support_union(fm.features[a], fm.features[b], vars);
      double prob = 1.0;
      for (int i = 0; i < n; ++i) prob *= miss.p[vars[i]];
      U(a, b) = prob;
      U(b, a) = prob;
    }
  }
  return U;
}

}  // namespace missreg
