#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "repsel/core.hpp"

namespace repsel {

/// Exhaustive-search result. `value` is the optimum (a subset size for cover
/// problems, a distance for fixed-k problems); `witness` achieves it and is
/// the lexicographically smallest optimal subset.
struct ExactResult {
  double value = 0.0;
  std::vector<SampleId> witness;
  std::uint64_t explored = 0;

  [[nodiscard]] std::size_t optimum_size() const { return witness.size(); }
};

struct ExactOptions {
  std::size_t max_samples = 20;
};

/// Smallest C with d(x, c) <= delta for some c in C, for every x. Enumerates
/// by size, then lexicographically, pruning branches that leave a sample
/// uncoverable. Throws RefusalError past the cap and NoCoverError when even
/// C = S fails.
ExactResult exact_min_cover(const DistanceOracle& oracle, double delta, ExactOptions options = {});

/// Covering number N(x): the size of the exact minimum cover at threshold x.
std::size_t covering_number(const DistanceOracle& oracle, double x, ExactOptions options = {});

/// Minimum over size-k subsets R of max_s min_{r in R} d(s, r).
ExactResult opt_max_for_k(const DistanceOracle& oracle, std::size_t k, ExactOptions options = {});

}  // namespace repsel
