#include "repsel/exact.hpp"

#include <algorithm>
#include <limits>

#include <fmt/format.h>

namespace repsel {

namespace {

using Mask = std::uint64_t;

void check_cap(std::size_t n, const ExactOptions& options) {
  if (n > options.max_samples || n > 64) {
    throw RefusalError(fmt::format("exact search refused: {} samples exceeds cap {}", n,
                                   std::min<std::size_t>(options.max_samples, 64)));
  }
}

Mask bit(std::size_t i) { return Mask{1} << i; }

Mask at_or_above(std::size_t i, std::size_t n) {
  if (i >= n) return 0;
  const Mask all = n == 64 ? ~Mask{0} : bit(n) - 1;
  return all & ~(bit(i) - 1);
}

/// Coverage of `witness` recomputed straight from the oracle.
double max_nearest(const DistanceOracle& oracle, const std::vector<SampleId>& witness) {
  double worst = 0.0;
  for (SampleId x = 0; x < oracle.size(); ++x) {
    double best = std::numeric_limits<double>::infinity();
    for (SampleId c : witness) best = std::min(best, oracle(x, c));
    worst = std::max(worst, best);
  }
  return worst;
}

struct CoverSearch {
  std::size_t n;
  std::vector<Mask> covered_by;  // covered_by[x]: candidates within delta of x
  std::vector<Mask> covers;      // covers[c]: samples c covers
  Mask full;
  std::uint64_t explored = 0;
  std::vector<SampleId> chosen;

  bool dfs(std::size_t start, Mask covered, std::size_t remaining) {
    ++explored;
    if (covered == full) return true;
    if (remaining == 0) return false;
    const Mask available = at_or_above(start, n);
    for (Mask open = full & ~covered; open != 0; open &= open - 1) {
      const auto x = static_cast<std::size_t>(__builtin_ctzll(open));
      if ((covered_by[x] & available) == 0) return false;
    }
    for (std::size_t c = start; c + remaining <= n; ++c) {
      chosen.push_back(c);
      if (dfs(c + 1, covered | covers[c], remaining - 1)) return true;
      chosen.pop_back();
    }
    return false;
  }
};

}  // namespace

ExactResult exact_min_cover(const DistanceOracle& oracle, double delta, ExactOptions options) {
  const std::size_t n = oracle.size();
  check_cap(n, options);
  ExactResult result;
  if (n == 0) return result;

  CoverSearch search{n, std::vector<Mask>(n, 0), std::vector<Mask>(n, 0), at_or_above(0, n), 0, {}};
  for (SampleId x = 0; x < n; ++x) {
    for (SampleId c = 0; c < n; ++c) {
      if (oracle(x, c) <= delta) {
        search.covered_by[x] |= bit(c);
        search.covers[c] |= bit(x);
      }
    }
    if (search.covered_by[x] == 0) {
      throw NoCoverError(fmt::format("sample {} is farther than {} from every sample", x, delta));
    }
  }

  for (std::size_t k = 1; k <= n; ++k) {
    search.chosen.clear();
    if (search.dfs(0, 0, k)) break;
  }
  result.witness = search.chosen;
  result.value = static_cast<double>(result.witness.size());
  result.explored = search.explored;

  if (result.witness.empty() || max_nearest(oracle, result.witness) > delta) {
    throw std::logic_error("exact_min_cover produced an invalid witness");
  }
  return result;
}

std::size_t covering_number(const DistanceOracle& oracle, double x, ExactOptions options) {
  return exact_min_cover(oracle, x, options).optimum_size();
}

ExactResult opt_max_for_k(const DistanceOracle& oracle, std::size_t k, ExactOptions options) {
  const std::size_t n = oracle.size();
  check_cap(n, options);
  if (k < 1 || k > n) throw ParameterError(fmt::format("k = {} outside [1, {}]", k, n));

  std::vector<double> d(n * n);
  for (SampleId x = 0; x < n; ++x) {
    for (SampleId c = 0; c < n; ++c) d[x * n + c] = oracle(x, c);
  }

  ExactResult result;
  result.value = std::numeric_limits<double>::infinity();
  std::vector<SampleId> chosen;
  // nearest[depth][x]: distance from x to the first `depth` chosen samples.
  std::vector<std::vector<double>> nearest(k + 1, std::vector<double>(n, std::numeric_limits<double>::infinity()));

  const auto dfs = [&](auto&& self, std::size_t start, std::size_t depth) -> void {
    if (depth == k) {
      ++result.explored;
      const double worst = *std::max_element(nearest[depth].begin(), nearest[depth].end());
      if (worst < result.value) {
        result.value = worst;
        result.witness = chosen;
      }
      return;
    }
    for (std::size_t c = start; c + (k - depth) <= n; ++c) {
      for (SampleId x = 0; x < n; ++x) nearest[depth + 1][x] = std::min(nearest[depth][x], d[x * n + c]);
      chosen.push_back(c);
      self(self, c + 1, depth + 1);
      chosen.pop_back();
    }
  };
  dfs(dfs, 0, 0);

  if (max_nearest(oracle, result.witness) != result.value) {
    throw std::logic_error("opt_max_for_k produced an inconsistent witness");
  }
  return result;
}

}  // namespace repsel
