#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "repsel/core.hpp"
#include "repsel/dataset.hpp"
#include "repsel/selectors.hpp"

namespace repsel {

// ---------------------------------------------------------------------------
// Coverage
// ---------------------------------------------------------------------------

struct Violation {
  SampleId sample = 0;
  double distance = 0.0;
};

struct CoverageReport {
  double delta = 0.0;
  std::size_t representative_count = 0;
  double max_distance = 0.0;
  double average_distance = 0.0;
  /// Samples farther than delta from their representative, or assigned to a
  /// sample that is not listed as a representative.
  std::vector<Violation> violations;
  /// Samples whose stored distance differs from the recomputed one.
  std::vector<SampleId> stale;

  [[nodiscard]] bool legal() const noexcept { return violations.empty(); }
};

/// Recomputes every assigned distance from the oracle. Samples assigned to a
/// non-representative are measured against their nearest listed
/// representative and always count as violations. Throws ParameterError when
/// the assignment is not total over the oracle's samples.
CoverageReport coverage_report(const RepresentativeSolution& solution, const DistanceOracle& oracle, double delta);

/// Jaccard overlap of two id-sets; two empty sets overlap fully.
double overlap(std::span<const SampleId> a, std::span<const SampleId> b);

// ---------------------------------------------------------------------------
// Stability
// ---------------------------------------------------------------------------

struct StabilityOptions {
  std::size_t shuffles = 10;
  std::uint64_t seed = 0;
  double bin_width = 0.05;
  /// Plain k-medoids: fixed k, or 0 to take the minimal covering k found at
  /// the base seed.
  std::size_t k = 0;
  std::size_t restarts = 1;
  bool merge_refine = false;
  unsigned threads = 1;
};

struct PairOverlap {
  std::size_t first = 0;
  std::size_t second = 0;
  double overlap = 0.0;
};

struct StabilityReport {
  Algorithm algorithm = Algorithm::DeltaMedoids;
  double delta = 0.0;
  std::size_t shuffles = 0;
  std::uint64_t seed = 0;
  std::size_t k = 0;
  /// Sorted representative set of every run.
  std::vector<std::vector<SampleId>> runs;
  std::vector<std::uint64_t> run_seeds;
  std::vector<PairOverlap> pairs;
  double mean_overlap = 1.0;
  double bin_width = 0.05;
  /// Counts of pair overlaps per bin of [0, 1]; 1.0 lands in the last bin.
  std::vector<std::size_t> histogram;
};

/// Runs `algorithm` once per shuffle and compares every pair of results.
/// Scan-based selectors get a seeded scan order per run; k-centers gets a
/// seeded start; k-medoids gets seeded initial medoids. Requires shuffles >= 2.
StabilityReport stability_experiment(const DistanceOracle& oracle, Algorithm algorithm, double delta,
                                     const StabilityOptions& options);

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

struct GaussianMixtureSpec {
  std::size_t dims = 10;
  std::size_t modes = 4;
  std::size_t per_mode = 250;
  double mean_min = 0.0;
  double mean_max = 10.0;
  double var_min = 0.5;
  double var_max = 1.5;
  std::uint64_t seed = 0;
};

/// Mode means uniform per coordinate in [mean_min, mean_max], diagonal
/// variances uniform in [var_min, var_max]. Samples are grouped by mode.
Dataset gen_multimodal_gaussian(const GaussianMixtureSpec& spec);

/// 1-D points start, start + step, ...
Dataset gen_line(std::size_t n, double step = 1.0, double start = 0.0);

/// 2-D lattice, row-major.
Dataset gen_grid(std::size_t rows, std::size_t cols, double step = 1.0);

// ---------------------------------------------------------------------------
// Benchmark
// ---------------------------------------------------------------------------

using OracleFactory = std::function<DistanceOracle(std::shared_ptr<const Dataset>)>;

struct BenchDataset {
  std::string name;
  std::shared_ptr<const Dataset> data;
  OracleFactory oracle;
};

struct BenchConfig {
  std::vector<BenchDataset> datasets;
  std::vector<Algorithm> algorithms;
  std::vector<double> deltas;
  std::size_t repetitions = 1;
  /// 0 uses the whole dataset.
  std::size_t subset_size = 0;
  std::uint64_t seed = 0;
  std::size_t restarts = 1;
  bool merge_refine = false;
  unsigned threads = 1;
};

struct BenchRow {
  std::string dataset;
  Algorithm algorithm = Algorithm::DeltaMedoids;
  double delta = 0.0;
  std::size_t repetition = 0;
  std::uint64_t seed = 0;
  std::size_t subset_size = 0;
  std::size_t rep_count = 0;
  double rep_pct = 0.0;
  double avg_dist = 0.0;
  double max_dist = 0.0;
  std::uint64_t dist_evals = 0;
  double wall_ms = 0.0;
  /// Empty for a legal cover; otherwise why the row is flagged.
  std::string flag;
};

struct MeanError {
  double mean = 0.0;
  double stderr_ = 0.0;
};

/// Sample standard deviation over sqrt(count); 0 for fewer than two values.
MeanError mean_and_stderr(std::span<const double> values);

struct BenchSummary {
  std::string dataset;
  Algorithm algorithm = Algorithm::DeltaMedoids;
  double delta = 0.0;
  std::size_t subset_size = 0;
  /// Unflagged repetitions the statistics are taken over.
  std::size_t count = 0;
  MeanError rep_count, rep_pct, avg_dist, max_dist, dist_evals, wall_ms;
};

struct BenchResult {
  /// Ordered by dataset, algorithm, delta, repetition as configured.
  std::vector<BenchRow> rows;
  /// One per (dataset, algorithm, delta) cell, same order.
  std::vector<BenchSummary> summaries;
  std::size_t repetitions = 1;
};

/// Repetition r draws a subset without replacement from seed
/// derive_seed(seed, r), shared by every algorithm and delta so runs are
/// paired. Failures are flagged rows; the run continues.
BenchResult benchmark_run(const BenchConfig& config);

}  // namespace repsel
