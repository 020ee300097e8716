#include "repsel/selectors.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include <fmt/format.h>

namespace repsel {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

void validate(const DistanceOracle& oracle, const SelectorConfig& config) {
  if (!(config.delta >= 0.0) || std::isinf(config.delta)) {
    throw ParameterError(fmt::format("delta must be a finite non-negative number, got {}", config.delta));
  }
  if (!config.scan_order.empty() && !is_permutation_of(config.scan_order, oracle.size())) {
    throw ParameterError("scan order is not a permutation of the dataset");
  }
  if (config.max_iterations == 0) throw ParameterError("max_iterations must be positive");
}

std::vector<SampleId> scan_order_of(const DistanceOracle& oracle, const SelectorConfig& config) {
  return config.scan_order.empty() ? canonical_order(oracle.size()) : config.scan_order;
}

std::vector<SampleId> sorted(std::vector<SampleId> v) {
  std::sort(v.begin(), v.end());
  return v;
}

/// Correctly rounded, so exact monotonicity of the objective survives rounding.
double total_distance(const RepresentativeSolution& sol) {
  ExactSum sum;
  for (double d : sol.assigned_distance) sum.add(d);
  return sum.value();
}

class Stopwatch {
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  [[nodiscard]] double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

/// Best candidate in `candidates` covering all `members` within delta (or any
/// candidate when `delta` is unset), minimizing the member distance sum.
/// Sums are compared exactly.
SampleId best_center(std::span<const SampleId> members, std::span<const SampleId> candidates,
                     const DistanceOracle& oracle, std::optional<double> delta) {
  SampleId best = kNone;
  ExactSum best_sum;
  for (SampleId s : candidates) {
    ExactSum sum;
    bool feasible = true;
    for (SampleId x : members) {
      const double d = oracle(x, s);
      if (delta && d > *delta) {
        feasible = false;
        break;
      }
      sum.add(d);
    }
    if (!feasible) continue;
    const int order = best == kNone ? -1 : sum.compare(best_sum);
    if (order < 0 || (order == 0 && s < best)) {
      best = s;
      best_sum = sum;
    }
  }
  return best;
}

/// Two clusters can pick the same medoid when one cluster's representative
/// was scanned into the other. Their union stays covered, so fold them.
void fold_shared_representatives(std::vector<Cluster>& clusters) {
  std::vector<Cluster> out;
  out.reserve(clusters.size());
  for (Cluster& c : clusters) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const Cluster& o) { return o.representative == c.representative; });
    if (it == out.end()) {
      out.push_back(std::move(c));
    } else {
      it->members.insert(it->members.end(), c.members.begin(), c.members.end());
    }
  }
  clusters = std::move(out);
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<Cluster> rep_assign(const DistanceOracle& oracle, std::span<const SampleId> reps,
                                const SelectorConfig& config, std::vector<SampleId>* insertion_log) {
  validate(oracle, config);
  const std::size_t n = oracle.size();
  const std::vector<SampleId> order = scan_order_of(oracle, config);

  std::vector<Cluster> clusters;
  std::vector<std::size_t> slot(n, kNone);
  std::vector<SampleId> current;
  for (SampleId r : reps) {
    if (r >= n) throw std::out_of_range(fmt::format("representative {} out of range", r));
    if (slot[r] != kNone) continue;
    slot[r] = clusters.size();
    clusters.push_back(Cluster{r, {}});
    current.push_back(r);
  }

  for (SampleId x : order) {
    if (!current.empty()) {
      const auto [rep, dist] = nearest_representative(x, current, oracle);
      if (dist <= config.delta) {
        clusters[slot[rep]].members.push_back(x);
        continue;
      }
    }
    if (slot[x] != kNone) {
      // A carried representative nothing covers: it still covers itself.
      clusters[slot[x]].members.push_back(x);
      continue;
    }
    slot[x] = clusters.size();
    clusters.push_back(Cluster{x, {x}});
    current.push_back(x);
    if (insertion_log) insertion_log->push_back(x);
  }

  std::erase_if(clusters, [](const Cluster& c) { return c.members.empty(); });
  return clusters;
}

RepresentativeSolution one_shot_select(const DistanceOracle& oracle, const SelectorConfig& config) {
  const Stopwatch clock;
  const std::uint64_t evals = oracle.evaluations();
  const auto clusters = rep_assign(oracle, {}, config);
  RepresentativeSolution sol = solution_from_clusters(clusters, oracle.size(), config.delta, oracle);
  sol.stats.iterations = 1;
  sol.stats.trace.push_back({sol.representatives.size(), total_distance(sol)});
  sol.stats.distance_evaluations = oracle.evaluations() - evals;
  sol.stats.wall_ms = clock.ms();
  return sol;
}

SampleId constrained_medoid(const Cluster& cluster, const DistanceOracle& oracle, double delta) {
  std::vector<SampleId> candidates = cluster.members;
  if (std::find(candidates.begin(), candidates.end(), cluster.representative) == candidates.end()) {
    candidates.push_back(cluster.representative);
  }
  const SampleId best = best_center(cluster.members, candidates, oracle, delta);
  return best == kNone ? cluster.representative : best;
}

RepresentativeSolution delta_medoids(const DistanceOracle& oracle, const SelectorConfig& config) {
  validate(oracle, config);
  const Stopwatch clock;
  const std::uint64_t evals = oracle.evaluations();
  const std::size_t n = oracle.size();

  std::vector<SampleId> reps;
  std::vector<IterationTrace> trace;
  RepresentativeSolution result;
  bool converged = false;
  std::size_t iteration = 0;

  while (iteration < config.max_iterations) {
    ++iteration;
    std::vector<Cluster> clusters = rep_assign(oracle, reps, config);
    {
      const auto pass = solution_from_clusters(clusters, n, config.delta, oracle);
      trace.push_back({pass.representatives.size(), total_distance(pass)});
    }

    std::vector<SampleId> medoids(clusters.size());
    parallel_for(clusters.size(), config.threads,
                 [&](std::size_t i) { medoids[i] = constrained_medoid(clusters[i], oracle, config.delta); });
    for (std::size_t i = 0; i < clusters.size(); ++i) clusters[i].representative = medoids[i];
    fold_shared_representatives(clusters);

    result = solution_from_clusters(clusters, n, config.delta, oracle);
    if (config.merge_refine) result = merge_close_clusters(result, oracle, config.delta);

    std::vector<SampleId> next = result.representatives;
    if (sorted(next) == sorted(reps)) {
      converged = true;
      break;
    }
    reps = std::move(next);
  }

  result.stats.iterations = iteration;
  result.stats.converged = converged;
  result.stats.trace = std::move(trace);
  result.stats.distance_evaluations = oracle.evaluations() - evals;
  result.stats.wall_ms = clock.ms();
  return result;
}

RepresentativeSolution merge_close_clusters(const RepresentativeSolution& solution, const DistanceOracle& oracle,
                                            double delta) {
  std::vector<Cluster> clusters = solution.clusters();
  std::sort(clusters.begin(), clusters.end(),
            [](const Cluster& a, const Cluster& b) { return a.representative < b.representative; });

  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t i = 0; i < clusters.size() && !merged; ++i) {
      for (std::size_t j = i + 1; j < clusters.size() && !merged; ++j) {
        const SampleId ri = clusters[i].representative;
        const SampleId rj = clusters[j].representative;
        if (!(oracle(ri, rj) <= delta || oracle(rj, ri) <= delta)) continue;
        std::vector<SampleId> united = clusters[i].members;
        united.insert(united.end(), clusters[j].members.begin(), clusters[j].members.end());
        std::sort(united.begin(), united.end());
        const SampleId center = best_center(united, united, oracle, delta);
        if (center == kNone) continue;
        clusters[i] = Cluster{center, std::move(united)};
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(j));
        std::sort(clusters.begin(), clusters.end(),
                  [](const Cluster& a, const Cluster& b) { return a.representative < b.representative; });
        merged = true;
      }
    }
  }

  RepresentativeSolution out = solution_from_clusters(clusters, solution.size(), solution.delta, oracle);
  out.stats = solution.stats;
  return out;
}

RepresentativeSolution greedy_k_centers(const DistanceOracle& oracle, const SelectorConfig& config) {
  validate(oracle, config);
  const Stopwatch clock;
  const std::uint64_t evals = oracle.evaluations();
  const std::size_t n = oracle.size();

  RepresentativeSolution sol;
  sol.delta = config.delta;
  if (n == 0) {
    sol.stats.iterations = 0;
    return sol;
  }

  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  const SampleId start = pick(rng);

  std::vector<bool> is_rep(n, false);
  std::vector<double> nearest(n);
  std::vector<SampleId>& reps = sol.representatives;
  reps.push_back(start);
  is_rep[start] = true;
  for (SampleId s = 0; s < n; ++s) nearest[s] = oracle(s, start);

  std::size_t rounds = 1;
  while (true) {
    SampleId far = kNone;
    for (SampleId s = 0; s < n; ++s) {
      if (is_rep[s]) continue;
      if (far == kNone || nearest[s] > nearest[far]) far = s;
    }
    if (far == kNone || nearest[far] <= config.delta) break;
    reps.push_back(far);
    is_rep[far] = true;
    ++rounds;
    for (SampleId s = 0; s < n; ++s) nearest[s] = std::min(nearest[s], oracle(s, far));
  }

  sol.assignment.resize(n);
  sol.assigned_distance.resize(n);
  for (SampleId s = 0; s < n; ++s) {
    const auto [rep, d] = nearest_representative(s, reps, oracle);
    sol.assignment[s] = rep;
    sol.assigned_distance[s] = d;
  }
  sol.stats.iterations = rounds;
  sol.stats.trace.push_back({reps.size(), total_distance(sol)});
  sol.stats.distance_evaluations = oracle.evaluations() - evals;
  sol.stats.wall_ms = clock.ms();
  return sol;
}

RepresentativeSolution k_medoids(const DistanceOracle& oracle, std::size_t k, std::uint64_t seed,
                                 std::size_t max_iterations) {
  const std::size_t n = oracle.size();
  if (k < 1 || k > n) throw ParameterError(fmt::format("k = {} outside [1, {}]", k, n));
  if (max_iterations == 0) throw ParameterError("max_iterations must be positive");
  const Stopwatch clock;
  const std::uint64_t evals = oracle.evaluations();

  // Partial Fisher-Yates: the first k entries are distinct uniform picks.
  std::vector<SampleId> pool = canonical_order(n);
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, n - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  std::vector<SampleId> medoids(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));

  RepresentativeSolution sol;
  sol.assignment.resize(n);
  sol.assigned_distance.resize(n);
  // Medoids always represent themselves, which keeps clusters disjoint and
  // their medoids distinct even when self-distances are non-zero.
  std::vector<bool> is_medoid(n, false);
  const auto assign = [&] {
    std::fill(is_medoid.begin(), is_medoid.end(), false);
    for (SampleId m : medoids) is_medoid[m] = true;
    for (SampleId s = 0; s < n; ++s) {
      if (is_medoid[s]) {
        sol.assignment[s] = s;
        sol.assigned_distance[s] = oracle(s, s);
        continue;
      }
      const auto [rep, d] = nearest_representative(s, medoids, oracle);
      sol.assignment[s] = rep;
      sol.assigned_distance[s] = d;
    }
  };

  std::size_t iteration = 0;
  bool converged = false;
  while (iteration < max_iterations) {
    ++iteration;
    assign();
    sol.stats.trace.push_back({k, total_distance(sol)});
    std::vector<std::vector<SampleId>> members(k);
    std::vector<std::size_t> slot(n, kNone);
    for (std::size_t i = 0; i < k; ++i) slot[medoids[i]] = i;
    for (SampleId s = 0; s < n; ++s) members[slot[sol.assignment[s]]].push_back(s);

    std::vector<SampleId> next = medoids;
    for (std::size_t i = 0; i < k; ++i) {
      if (members[i].empty()) continue;
      next[i] = best_center(members[i], members[i], oracle, std::nullopt);
    }
    if (sorted(next) == sorted(medoids)) {
      converged = true;
      break;
    }
    medoids = std::move(next);
  }
  if (!converged) assign();

  sol.representatives = medoids;
  sol.stats.iterations = iteration;
  sol.stats.converged = converged;
  sol.stats.distance_evaluations = oracle.evaluations() - evals;
  sol.stats.wall_ms = clock.ms();
  return sol;
}

MinKResult min_k_for_delta(const DistanceOracle& oracle, double delta, std::uint64_t seed, std::size_t restarts,
                           std::size_t max_iterations) {
  if (restarts < 1) throw ParameterError("restarts must be at least 1");
  if (!(delta >= 0.0)) throw ParameterError("delta must be non-negative");
  const Stopwatch clock;
  const std::uint64_t evals = oracle.evaluations();
  const std::size_t n = oracle.size();
  if (n == 0) {
    MinKResult empty;
    empty.solution.delta = delta;
    return empty;
  }
  for (std::size_t k = 1; k <= n; ++k) {
    for (std::size_t r = 0; r < restarts; ++r) {
      RepresentativeSolution sol = k_medoids(oracle, k, derive_seed(derive_seed(seed, k), r), max_iterations);
      if (sol.max_distance() <= delta) {
        sol.delta = delta;
        sol.stats.distance_evaluations = oracle.evaluations() - evals;
        sol.stats.wall_ms = clock.ms();
        return MinKResult{k, std::move(sol)};
      }
    }
  }
  throw NoCoverError(fmt::format("no k-medoids solution keeps every sample within {}", delta));
}

// ---------------------------------------------------------------------------

Algorithm parse_algorithm(const std::string& name) {
  if (name == "delta-medoids") return Algorithm::DeltaMedoids;
  if (name == "one-shot") return Algorithm::OneShot;
  if (name == "k-centers") return Algorithm::KCenters;
  if (name == "kmedoids") return Algorithm::KMedoids;
  if (name == "kmedoids-min-k") return Algorithm::KMedoidsMinK;
  throw ParameterError(fmt::format("unknown algorithm '{}'", name));
}

std::string to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::DeltaMedoids: return "delta-medoids";
    case Algorithm::OneShot: return "one-shot";
    case Algorithm::KCenters: return "k-centers";
    case Algorithm::KMedoids: return "kmedoids";
    case Algorithm::KMedoidsMinK: return "kmedoids-min-k";
  }
  return "unknown";
}

RepresentativeSolution run_algorithm(const DistanceOracle& oracle, const RunRequest& request) {
  const SelectorConfig& c = request.config;
  switch (request.algorithm) {
    case Algorithm::DeltaMedoids: return delta_medoids(oracle, c);
    case Algorithm::OneShot: return one_shot_select(oracle, c);
    case Algorithm::KCenters: return greedy_k_centers(oracle, c);
    case Algorithm::KMedoids: return k_medoids(oracle, request.k, c.seed, c.max_iterations);
    case Algorithm::KMedoidsMinK:
      return min_k_for_delta(oracle, c.delta, c.seed, request.restarts, c.max_iterations).solution;
  }
  throw ParameterError("unknown algorithm");
}

}  // namespace repsel
