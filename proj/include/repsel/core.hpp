#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace repsel {

/// Position of a sample in its dataset's ingestion order.
using SampleId = std::size_t;

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// A user-supplied distance returned a negative or NaN value.
class ContractViolation : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Bad parameter (dimension mismatch, k out of range, malformed config, ...).
class ParameterError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An operation that needs a non-empty set received an empty one.
class EmptySetError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// No representative set can satisfy the threshold (some self-distance exceeds it
/// and nothing else covers the sample).
class NoCoverError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Exhaustive search refused because the instance exceeds the configured cap.
class RefusalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Distance oracle
// ---------------------------------------------------------------------------

/// Row-major square matrix of dissimilarities; entry (i, j) is d(i -> j).
class DistanceMatrix {
public:
  DistanceMatrix() = default;
  DistanceMatrix(std::size_t n, std::vector<double> values);

  [[nodiscard]] std::size_t size() const noexcept { return n_; }
  [[nodiscard]] double at(SampleId from, SampleId to) const noexcept { return values_[from * n_ + to]; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  /// Principal submatrix restricted to `ids`, in that order.
  [[nodiscard]] DistanceMatrix subset(std::span<const SampleId> ids) const;

private:
  std::size_t n_ = 0;
  std::vector<double> values_;
};

using PairwiseFunction = std::function<double(SampleId from, SampleId to)>;

struct CachePolicy {
  bool enabled = true;
  /// 0 means unbounded; otherwise least-recently-used entries are evicted.
  std::size_t capacity = 0;
};

/// Sole access path to d(from, to). The first argument is the sample being
/// covered, the second the candidate representative. Symmetry and zero
/// self-distance are never assumed.
///
/// Thread-safe: concurrent callers observe exactly the values a sequential
/// caller would. `evaluations()` counts underlying computations only; cache
/// hits are free.
class DistanceOracle {
public:
  static DistanceOracle from_matrix(DistanceMatrix matrix);
  static DistanceOracle from_function(std::size_t n, PairwiseFunction fn, CachePolicy policy = {});

  DistanceOracle(DistanceOracle&&) noexcept;
  DistanceOracle& operator=(DistanceOracle&&) noexcept;
  ~DistanceOracle();

  [[nodiscard]] std::size_t size() const noexcept;
  [[nodiscard]] double operator()(SampleId from, SampleId to) const;
  [[nodiscard]] double distance(SampleId from, SampleId to) const { return (*this)(from, to); }
  [[nodiscard]] std::uint64_t evaluations() const noexcept;

private:
  struct Impl;
  explicit DistanceOracle(std::unique_ptr<Impl> impl);
  std::unique_ptr<Impl> impl_;
};

/// Representative minimizing d(x, rep); ties go to the lowest sample index.
/// Throws EmptySetError when `reps` is empty.
std::pair<SampleId, double> nearest_representative(SampleId x, std::span<const SampleId> reps,
                                                   const DistanceOracle& oracle);

// ---------------------------------------------------------------------------
// Solutions
// ---------------------------------------------------------------------------

struct Cluster {
  SampleId representative = 0;
  std::vector<SampleId> members;
};

struct IterationTrace {
  std::size_t representative_count = 0;
  /// Sum over samples of the assigned distance after the assignment pass.
  double total_distance = 0.0;
};

struct SolutionStats {
  std::size_t iterations = 0;
  std::uint64_t distance_evaluations = 0;
  double wall_ms = 0.0;
  bool converged = true;
  std::vector<IterationTrace> trace;
};

/// Representatives, a total sample -> representative assignment, and the
/// assigned distances. `delta` is unset for k-medoids, which gives no
/// coverage guarantee.
struct RepresentativeSolution {
  std::optional<double> delta;
  /// Selection order (insertion order for scan-based selectors).
  std::vector<SampleId> representatives;
  std::vector<SampleId> assignment;
  std::vector<double> assigned_distance;
  SolutionStats stats;

  [[nodiscard]] std::size_t size() const noexcept { return assignment.size(); }
  /// Representatives sorted ascending.
  [[nodiscard]] std::vector<SampleId> representative_set() const;
  [[nodiscard]] double max_distance() const;
  [[nodiscard]] double average_distance() const;
  /// Regroups the assignment into clusters, ordered as `representatives`.
  [[nodiscard]] std::vector<Cluster> clusters() const;
};

/// Packages clusters (each member assigned to its cluster's representative)
/// into a solution, reading distances from the oracle.
RepresentativeSolution solution_from_clusters(std::span<const Cluster> clusters, std::size_t n,
                                              std::optional<double> delta, const DistanceOracle& oracle);

// ---------------------------------------------------------------------------
// Utilities
// ---------------------------------------------------------------------------

/// Seeded permutation of 0..n-1 (Fisher-Yates over mt19937_64).
std::vector<SampleId> seeded_permutation(std::size_t n, std::uint64_t seed);

/// Identity permutation 0..n-1.
std::vector<SampleId> canonical_order(std::size_t n);

/// True when `order` is a permutation of 0..n-1.
bool is_permutation_of(std::span<const SampleId> order, std::size_t n);

/// Mixes a base seed with a stream index (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// Worker count from REPSEL_THREADS (0 or unset = hardware concurrency).
unsigned configured_threads();

/// Runs fn(i) for i in [0, count) over up to `threads` workers. Callers write
/// results into per-index slots, so the outcome does not depend on scheduling.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

/// Exact running sum of finite doubles kept as non-overlapping partials.
class ExactSum {
public:
  void add(double x);
  /// Correctly rounded total.
  [[nodiscard]] double value() const;
  /// Sign of (*this - other), decided exactly.
  [[nodiscard]] int compare(const ExactSum& other) const;

private:
  std::vector<double> partials_;
};

}  // namespace repsel
