#include "repsel/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include <fmt/format.h>

namespace repsel {

CoverageReport coverage_report(const RepresentativeSolution& solution, const DistanceOracle& oracle, double delta) {
  const std::size_t n = oracle.size();
  if (solution.assignment.size() != n) {
    throw ParameterError(fmt::format("assignment covers {} samples, dataset has {}", solution.assignment.size(), n));
  }
  const std::vector<SampleId> reps = solution.representative_set();
  for (SampleId r : reps) {
    if (r >= n) throw ParameterError(fmt::format("representative {} out of range", r));
  }

  CoverageReport report;
  report.delta = delta;
  report.representative_count = reps.size();
  double sum = 0.0;
  for (SampleId x = 0; x < n; ++x) {
    const SampleId assigned = solution.assignment[x];
    if (assigned >= n) throw ParameterError(fmt::format("sample {} assigned to out-of-range id {}", x, assigned));
    const bool listed = std::binary_search(reps.begin(), reps.end(), assigned);
    double d = 0.0;
    if (listed) {
      d = oracle(x, assigned);
    } else if (!reps.empty()) {
      d = nearest_representative(x, reps, oracle).second;
    } else {
      d = std::numeric_limits<double>::infinity();
    }
    if (x < solution.assigned_distance.size() && solution.assigned_distance[x] != d) report.stale.push_back(x);
    if (!listed || d > delta) report.violations.push_back({x, d});
    sum += d;
    report.max_distance = std::max(report.max_distance, d);
  }
  report.average_distance = n == 0 ? 0.0 : sum / static_cast<double>(n);
  return report;
}

double overlap(std::span<const SampleId> a, std::span<const SampleId> b) {
  std::vector<SampleId> x(a.begin(), a.end());
  std::vector<SampleId> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  x.erase(std::unique(x.begin(), x.end()), x.end());
  std::sort(y.begin(), y.end());
  y.erase(std::unique(y.begin(), y.end()), y.end());
  if (x.empty() && y.empty()) return 1.0;
  std::vector<SampleId> common;
  std::set_intersection(x.begin(), x.end(), y.begin(), y.end(), std::back_inserter(common));
  const std::size_t unite = x.size() + y.size() - common.size();
  return static_cast<double>(common.size()) / static_cast<double>(unite);
}

// ---------------------------------------------------------------------------

StabilityReport stability_experiment(const DistanceOracle& oracle, Algorithm algorithm, double delta,
                                     const StabilityOptions& options) {
  if (options.shuffles < 2) throw ParameterError("stability needs at least two shuffles");
  if (!(options.bin_width > 0.0) || options.bin_width > 1.0) {
    throw ParameterError(fmt::format("bin width must lie in (0, 1], got {}", options.bin_width));
  }
  const std::size_t n = oracle.size();

  StabilityReport report;
  report.algorithm = algorithm;
  report.delta = delta;
  report.shuffles = options.shuffles;
  report.seed = options.seed;
  report.bin_width = options.bin_width;

  if (algorithm == Algorithm::KMedoids) {
    report.k = options.k != 0 ? options.k
                              : min_k_for_delta(oracle, delta, options.seed, options.restarts).k;
  }

  report.run_seeds.resize(options.shuffles);
  for (std::size_t r = 0; r < options.shuffles; ++r) report.run_seeds[r] = derive_seed(options.seed, r);
  report.runs.resize(options.shuffles);

  parallel_for(options.shuffles, std::max(1u, options.threads), [&](std::size_t r) {
    RunRequest request;
    request.algorithm = algorithm;
    request.k = report.k;
    request.restarts = options.restarts;
    request.config.delta = delta;
    request.config.seed = report.run_seeds[r];
    request.config.merge_refine = options.merge_refine;
    if (algorithm == Algorithm::DeltaMedoids || algorithm == Algorithm::OneShot) {
      request.config.scan_order = seeded_permutation(n, report.run_seeds[r]);
    }
    report.runs[r] = run_algorithm(oracle, request).representative_set();
  });

  const auto bins = static_cast<std::size_t>(std::max(1.0, std::ceil(1.0 / options.bin_width - 1e-9)));
  report.histogram.assign(bins, 0);
  double sum = 0.0;
  for (std::size_t i = 0; i < options.shuffles; ++i) {
    for (std::size_t j = i + 1; j < options.shuffles; ++j) {
      const double o = overlap(report.runs[i], report.runs[j]);
      report.pairs.push_back({i, j, o});
      sum += o;
      const auto bin = std::min(bins - 1, static_cast<std::size_t>(o / options.bin_width));
      ++report.histogram[bin];
    }
  }
  report.mean_overlap = sum / static_cast<double>(report.pairs.size());
  return report;
}

// ---------------------------------------------------------------------------

Dataset gen_multimodal_gaussian(const GaussianMixtureSpec& spec) {
  if (spec.dims == 0 || spec.modes == 0 || spec.per_mode == 0) {
    throw ParameterError("gaussian generator needs positive dims, modes and per_mode");
  }
  if (!(spec.mean_min <= spec.mean_max) || !(spec.var_min <= spec.var_max) || spec.var_min < 0.0) {
    throw ParameterError("gaussian generator needs ordered ranges and non-negative variances");
  }
  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> mean_pick(spec.mean_min, spec.mean_max);
  std::uniform_real_distribution<double> var_pick(spec.var_min, spec.var_max);

  std::vector<double> means(spec.modes * spec.dims);
  std::vector<double> sigmas(spec.modes * spec.dims);
  for (std::size_t m = 0; m < spec.modes; ++m) {
    for (std::size_t d = 0; d < spec.dims; ++d) {
      means[m * spec.dims + d] = spec.mean_min == spec.mean_max ? spec.mean_min : mean_pick(rng);
      sigmas[m * spec.dims + d] = std::sqrt(spec.var_min == spec.var_max ? spec.var_min : var_pick(rng));
    }
  }

  std::vector<double> flat;
  flat.reserve(spec.modes * spec.per_mode * spec.dims);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (std::size_t m = 0; m < spec.modes; ++m) {
    for (std::size_t i = 0; i < spec.per_mode; ++i) {
      for (std::size_t d = 0; d < spec.dims; ++d) {
        const double sigma = sigmas[m * spec.dims + d];
        const double z = unit(rng);
        flat.push_back(sigma == 0.0 ? means[m * spec.dims + d] : means[m * spec.dims + d] + sigma * z);
      }
    }
  }
  return Dataset::points(spec.dims, std::move(flat));
}

Dataset gen_line(std::size_t n, double step, double start) {
  if (n == 0) throw ParameterError("line generator needs n > 0");
  std::vector<double> flat(n);
  for (std::size_t i = 0; i < n; ++i) flat[i] = start + step * static_cast<double>(i);
  return Dataset::points(1, std::move(flat));
}

Dataset gen_grid(std::size_t rows, std::size_t cols, double step) {
  if (rows == 0 || cols == 0) throw ParameterError("grid generator needs positive rows and cols");
  std::vector<double> flat;
  flat.reserve(rows * cols * 2);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      flat.push_back(step * static_cast<double>(r));
      flat.push_back(step * static_cast<double>(c));
    }
  }
  return Dataset::points(2, std::move(flat));
}

// ---------------------------------------------------------------------------

MeanError mean_and_stderr(std::span<const double> values) {
  MeanError out;
  if (values.empty()) return out;
  double sum = 0.0;
  for (double v : values) sum += v;
  const auto count = static_cast<double>(values.size());
  out.mean = sum / count;
  if (values.size() < 2) return out;
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.stderr_ = std::sqrt(ss / (count - 1.0)) / std::sqrt(count);
  return out;
}

namespace {

std::vector<SampleId> draw_subset(std::size_t n, std::size_t size, std::uint64_t seed) {
  if (size == 0 || size >= n) return canonical_order(n);
  std::vector<SampleId> perm = seeded_permutation(n, seed);
  perm.resize(size);
  std::sort(perm.begin(), perm.end());
  return perm;
}

void run_cell(const BenchConfig& config, const BenchDataset& dataset, BenchRow& row) {
  const std::vector<SampleId> ids = draw_subset(dataset.data->size(), config.subset_size, row.seed);
  auto sub = std::make_shared<const Dataset>(dataset.data->subset(ids));
  const DistanceOracle oracle = dataset.oracle(sub);
  row.subset_size = sub->size();

  RunRequest request;
  request.algorithm = row.algorithm;
  request.restarts = config.restarts;
  request.config.delta = row.delta;
  request.config.seed = row.seed;
  request.config.merge_refine = config.merge_refine;

  const auto start = std::chrono::steady_clock::now();
  try {
    const RepresentativeSolution sol = run_algorithm(oracle, request);
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    row.dist_evals = oracle.evaluations();
    const CoverageReport report = coverage_report(sol, oracle, row.delta);
    row.rep_count = report.representative_count;
    row.rep_pct = row.subset_size == 0
                      ? 0.0
                      : 100.0 * static_cast<double>(row.rep_count) / static_cast<double>(row.subset_size);
    row.avg_dist = report.average_distance;
    row.max_dist = report.max_distance;
    if (!report.legal()) {
      row.flag = fmt::format("{} samples farther than delta", report.violations.size());
    }
  } catch (const NoCoverError& e) {
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    row.dist_evals = oracle.evaluations();
    row.flag = e.what();
  }
}

}  // namespace

BenchResult benchmark_run(const BenchConfig& config) {
  if (config.repetitions == 0) throw ParameterError("repetitions must be at least 1");
  for (Algorithm a : config.algorithms) {
    if (a == Algorithm::KMedoids) throw ParameterError("plain kmedoids has no delta; use kmedoids-min-k");
  }
  for (const BenchDataset& d : config.datasets) {
    if (!d.data || !d.oracle) throw ParameterError(fmt::format("dataset '{}' is incomplete", d.name));
  }

  BenchResult result;
  result.repetitions = config.repetitions;
  for (const BenchDataset& d : config.datasets) {
    for (Algorithm a : config.algorithms) {
      for (double delta : config.deltas) {
        for (std::size_t r = 0; r < config.repetitions; ++r) {
          BenchRow row;
          row.dataset = d.name;
          row.algorithm = a;
          row.delta = delta;
          row.repetition = r;
          row.seed = derive_seed(config.seed, r);
          result.rows.push_back(std::move(row));
        }
      }
    }
  }

  const std::size_t per_dataset = config.algorithms.size() * config.deltas.size() * config.repetitions;
  parallel_for(result.rows.size(), std::max(1u, config.threads), [&](std::size_t i) {
    run_cell(config, config.datasets[i / per_dataset], result.rows[i]);
  });

  for (std::size_t begin = 0; begin < result.rows.size(); begin += config.repetitions) {
    const BenchRow& first = result.rows[begin];
    BenchSummary s;
    s.dataset = first.dataset;
    s.algorithm = first.algorithm;
    s.delta = first.delta;
    s.subset_size = first.subset_size;
    std::vector<double> rep_count, rep_pct, avg, max, evals, wall;
    for (std::size_t r = begin; r < begin + config.repetitions; ++r) {
      const BenchRow& row = result.rows[r];
      if (!row.flag.empty()) continue;
      rep_count.push_back(static_cast<double>(row.rep_count));
      rep_pct.push_back(row.rep_pct);
      avg.push_back(row.avg_dist);
      max.push_back(row.max_dist);
      evals.push_back(static_cast<double>(row.dist_evals));
      wall.push_back(row.wall_ms);
    }
    s.count = rep_count.size();
    s.rep_count = mean_and_stderr(rep_count);
    s.rep_pct = mean_and_stderr(rep_pct);
    s.avg_dist = mean_and_stderr(avg);
    s.max_dist = mean_and_stderr(max);
    s.dist_evals = mean_and_stderr(evals);
    s.wall_ms = mean_and_stderr(wall);
    result.summaries.push_back(std::move(s));
  }
  return result;
}

}  // namespace repsel
