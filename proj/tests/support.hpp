#pragma once

// Generators and independent reference implementations shared by the test
// binaries. Nothing here calls into the code under test except to build
// inputs.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "repsel/core.hpp"
#include "repsel/dataset.hpp"
#include "repsel/distances.hpp"

namespace testing {

using repsel::SampleId;

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

class Gen {
public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::size_t size(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(rng_); }
  std::mt19937_64& engine() { return rng_; }

  /// `n` points in `dims` dimensions, uniform in [0, scale).
  repsel::Dataset points(std::size_t n, std::size_t dims, double scale = 10.0) {
    std::vector<double> flat(n * dims);
    for (double& v : flat) v = real(0.0, scale);
    return repsel::Dataset::points(dims, std::move(flat));
  }

  /// Points clustered around a few centres, so selections are non-trivial.
  repsel::Dataset clustered_points(std::size_t n, std::size_t dims, std::size_t centres, double spread,
                                   double scale = 20.0) {
    std::vector<double> c(centres * dims);
    for (double& v : c) v = real(0.0, scale);
    std::normal_distribution<double> noise(0.0, spread);
    std::vector<double> flat;
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t k = size(0, centres - 1);
      for (std::size_t d = 0; d < dims; ++d) flat.push_back(c[k * dims + d] + noise(rng_));
    }
    return repsel::Dataset::points(dims, std::move(flat));
  }

  /// Asymmetric non-negative matrix; the diagonal is 0 or a small positive
  /// value not exceeding `max_diag`.
  repsel::DistanceMatrix asymmetric_matrix(std::size_t n, double scale, double max_diag) {
    std::vector<double> v(n * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        v[i * n + j] = i == j ? (coin(0.3) ? real(0.0, max_diag) : 0.0) : real(0.0, scale);
      }
    }
    return repsel::DistanceMatrix(n, std::move(v));
  }

  std::vector<int> tokens(std::size_t len, int lo, int hi) {
    std::vector<int> t(len);
    for (int& x : t) x = integer(lo, hi);
    return t;
  }

  repsel::MusicSegment segment(std::size_t min_len, std::size_t max_len) {
    const std::size_t len = size(min_len, max_len);
    std::vector<int> p(len);
    std::vector<double> d(len);
    int pitch = integer(55, 72);
    static constexpr double durations[] = {0.5, 1.0, 1.5, 2.0};
    for (std::size_t i = 0; i < len; ++i) {
      p[i] = pitch;
      pitch = std::clamp(pitch + integer(-5, 5), 40, 90);
      d[i] = durations[size(0, 3)];
    }
    return repsel::MusicSegment(std::move(p), std::move(d));
  }

  repsel::Trajectory trajectory(std::size_t len) {
    std::vector<repsel::Point2> pts;
    repsel::Point2 at{real(-50, 50), real(-30, 30)};
    double heading = real(-M_PI, M_PI);
    for (std::size_t i = 0; i < len; ++i) {
      pts.push_back(at);
      heading += real(-1.2, 1.2);
      const double speed = real(0.0, 9.0);
      at = {at.x + speed * std::cos(heading), at.y + speed * std::sin(heading)};
    }
    return repsel::Trajectory(std::move(pts));
  }

private:
  std::mt19937_64 rng_;
};

// ---------------------------------------------------------------------------
// Alignment references
// ---------------------------------------------------------------------------

/// Full-table Needleman-Wunsch.
template <class T>
double naive_global(const std::vector<T>& s, const std::vector<T>& t, const std::function<double(T, T)>& cost,
                    double gap) {
  const std::size_t n = s.size(), m = t.size();
  std::vector<std::vector<double>> D(n + 1, std::vector<double>(m + 1, 0.0));
  for (std::size_t i = 1; i <= n; ++i) D[i][0] = D[i - 1][0] + gap;
  for (std::size_t j = 1; j <= m; ++j) D[0][j] = D[0][j - 1] + gap;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      D[i][j] = std::min({D[i - 1][j - 1] + cost(s[i - 1], t[j - 1]), D[i - 1][j] + gap, D[i][j - 1] + gap});
    }
  }
  return D[n][m];
}

/// Full-table Smith-Waterman similarity with reward c0 - cost and gap reward -gap.
template <class T>
double naive_local_score(const std::vector<T>& s, const std::vector<T>& t, const std::function<double(T, T)>& cost,
                         double gap, double c0) {
  const std::size_t n = s.size(), m = t.size();
  std::vector<std::vector<double>> H(n + 1, std::vector<double>(m + 1, 0.0));
  double best = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      H[i][j] = std::max({0.0, H[i - 1][j - 1] + (c0 - cost(s[i - 1], t[j - 1])), H[i - 1][j] - gap,
                          H[i][j - 1] - gap});
      best = std::max(best, H[i][j]);
    }
  }
  return best;
}

/// Minimum over every explicit alignment path (exponential; short inputs only).
template <class T>
double brute_global(const std::vector<T>& s, const std::vector<T>& t, const std::function<double(T, T)>& cost,
                    double gap) {
  double best = std::numeric_limits<double>::infinity();
  const std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j, double acc) {
    if (i == s.size() && j == t.size()) {
      best = std::min(best, acc);
      return;
    }
    if (i < s.size() && j < t.size()) walk(i + 1, j + 1, acc + cost(s[i], t[j]));
    if (i < s.size()) walk(i + 1, j, acc + gap);
    if (j < t.size()) walk(i, j + 1, acc + gap);
  };
  walk(0, 0, 0.0);
  return best;
}

/// Maximum similarity over every pair of substrings and every alignment
/// path between them; 0 for the empty alignment.
template <class T>
double brute_local_score(const std::vector<T>& s, const std::vector<T>& t, const std::function<double(T, T)>& cost,
                         double gap, double c0) {
  double best = 0.0;
  for (std::size_t a = 0; a < s.size(); ++a) {
    for (std::size_t b = a; b <= s.size(); ++b) {
      for (std::size_t c = 0; c < t.size(); ++c) {
        for (std::size_t d = c; d <= t.size(); ++d) {
          const std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t i, std::size_t j,
                                                                                 double acc) {
            if (i == b && j == d) {
              best = std::max(best, acc);
              return;
            }
            if (i < b && j < d) walk(i + 1, j + 1, acc + (c0 - cost(s[i], t[j])));
            if (i < b) walk(i + 1, j, acc - gap);
            if (j < d) walk(i, j + 1, acc - gap);
          };
          walk(a, c, 0.0);
        }
      }
    }
  }
  return best;
}

// ---------------------------------------------------------------------------
// Cover references
// ---------------------------------------------------------------------------

inline std::vector<double> table(const repsel::DistanceOracle& oracle) {
  const std::size_t n = oracle.size();
  std::vector<double> d(n * n);
  for (SampleId i = 0; i < n; ++i)
    for (SampleId j = 0; j < n; ++j) d[i * n + j] = oracle(i, j);
  return d;
}

inline std::vector<SampleId> mask_ids(std::uint32_t mask) {
  std::vector<SampleId> ids;
  for (SampleId i = 0; mask; ++i, mask >>= 1)
    if (mask & 1u) ids.push_back(i);
  return ids;
}

/// Smallest covering subset by scanning every mask; lexicographically
/// smallest among optima. Empty when nothing covers.
inline std::vector<SampleId> brute_min_cover(const std::vector<double>& d, std::size_t n, double delta) {
  std::vector<SampleId> best;
  bool found = false;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    const auto ids = mask_ids(mask);
    if (found && ids.size() > best.size()) continue;
    bool ok = true;
    for (SampleId x = 0; x < n && ok; ++x) {
      ok = std::any_of(ids.begin(), ids.end(), [&](SampleId c) { return d[x * n + c] <= delta; });
    }
    if (!ok) continue;
    if (!found || ids.size() < best.size() || ids < best) best = ids;
    found = true;
  }
  return best;
}

inline double max_nearest(const std::vector<double>& d, std::size_t n, const std::vector<SampleId>& ids) {
  double worst = 0.0;
  for (SampleId x = 0; x < n; ++x) {
    double m = std::numeric_limits<double>::infinity();
    for (SampleId c : ids) m = std::min(m, d[x * n + c]);
    worst = std::max(worst, m);
  }
  return worst;
}

/// Best max-nearest distance over all size-k masks.
inline double brute_opt_max(const std::vector<double>& d, std::size_t n, std::size_t k) {
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) != k) continue;
    best = std::min(best, max_nearest(d, n, mask_ids(mask)));
  }
  return best;
}

}  // namespace testing
