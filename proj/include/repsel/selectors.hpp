#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "repsel/core.hpp"

namespace repsel {

struct SelectorConfig {
  double delta = 0.0;
  /// Empty means canonical order.
  std::vector<SampleId> scan_order;
  std::uint64_t seed = 0;
  std::size_t max_iterations = 1000;
  bool merge_refine = false;
  /// Workers for the per-cluster medoid phase.
  unsigned threads = 1;
};

/// Single scan in `config.scan_order`: each sample joins its nearest
/// representative's cluster when within delta, otherwise it becomes a new
/// representative. Carried representatives are scanned like any other
/// sample; clusters left without members are dropped. New representatives
/// are appended to `insertion_log` when given.
std::vector<Cluster> rep_assign(const DistanceOracle& oracle, std::span<const SampleId> reps,
                                const SelectorConfig& config, std::vector<SampleId>* insertion_log = nullptr);

/// One scan from an empty representative set.
RepresentativeSolution one_shot_select(const DistanceOracle& oracle, const SelectorConfig& config);

/// Member minimizing sum_x d(x, s) (self term included) among candidates that
/// keep every member within delta. The current representative is always a
/// candidate; ties go to the lowest index; with no feasible candidate the
/// current representative is returned.
SampleId constrained_medoid(const Cluster& cluster, const DistanceOracle& oracle, double delta);

/// Alternates rep_assign and constrained medoid updates until the
/// representative set stops changing. `stats.trace` holds the representative
/// count and total assigned distance after every assignment pass.
RepresentativeSolution delta_medoids(const DistanceOracle& oracle, const SelectorConfig& config);

/// Pairwise merge of clusters whose representatives lie within delta (either
/// direction) when one member of the union covers all of it.
RepresentativeSolution merge_close_clusters(const RepresentativeSolution& solution, const DistanceOracle& oracle,
                                            double delta);

/// Farthest-first traversal from a seed-chosen start until every
/// non-representative lies within delta of the set.
RepresentativeSolution greedy_k_centers(const DistanceOracle& oracle, const SelectorConfig& config);

/// Alternating k-medoids from seed-chosen distinct medoids. No coverage
/// guarantee, so `delta` is left unset.
RepresentativeSolution k_medoids(const DistanceOracle& oracle, std::size_t k, std::uint64_t seed,
                                 std::size_t max_iterations = 1000);

struct MinKResult {
  std::size_t k = 0;
  RepresentativeSolution solution;
};

/// Smallest k for which one of `restarts` seeded k-medoids runs keeps every
/// sample within delta. Throws NoCoverError when even k = n fails.
MinKResult min_k_for_delta(const DistanceOracle& oracle, double delta, std::uint64_t seed, std::size_t restarts = 1,
                           std::size_t max_iterations = 1000);

// ---------------------------------------------------------------------------
// Dispatch
// ---------------------------------------------------------------------------

enum class Algorithm { DeltaMedoids, OneShot, KCenters, KMedoids, KMedoidsMinK };

Algorithm parse_algorithm(const std::string& name);
std::string to_string(Algorithm algorithm);

struct RunRequest {
  Algorithm algorithm = Algorithm::DeltaMedoids;
  SelectorConfig config;
  std::size_t k = 0;         // plain k-medoids only
  std::size_t restarts = 1;  // min-k search only
};

RepresentativeSolution run_algorithm(const DistanceOracle& oracle, const RunRequest& request);

}  // namespace repsel
