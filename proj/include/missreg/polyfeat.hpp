#pragma once

#include "missreg/core.hpp"

namespace missreg {

// Degree-2 polynomial feature bookkeeping. Each expanded feature is a
// multiset of raw indices: {j} for a raw variable, {i,j} with i<j for an
// interaction, {j,j} for a square. The order is raw singletons first (raw
// order), then pairs (i<j) lexicographic, then squares; it is part of the
// on-disk model format.
struct FeatureMap {
  struct Feature {
    Index a = 0;
    Index b = -1;  // -1 marks a singleton; otherwise a <= b

    bool is_singleton() const { return b < 0; }
    // distinct raw variables the feature depends on (its support set)
    Index support_size() const { return (b < 0 || b == a) ? 1 : 2; }
  };

  std::vector<Feature> features;
  Index d_raw = 0;

  Index d_exp() const { return Index(features.size()); }

  // Full degree-2 expansion: d_exp = d_raw + d_raw*(d_raw+1)/2.
  static FeatureMap degree2(Index d_raw);

  void validate() const;
};

// Expanded value = product of raw values over the multiset; expanded mask =
// AND of raw masks over the support. Unobserved expanded entries are zero.
MaskedVector expand_row(const MaskedVector& x, const FeatureMap& fm);

// U[a,b] = prod of p_j over the union of the two supports. Diagonal entries
// are the marginal observation probabilities of the expanded features.
Matrix build_probability_matrix(const FeatureMap& fm, const MissingnessModel& miss);

}  // namespace missreg
