// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.
// Usage: acceptance <path-to-repsel-cli>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <unistd.h>

#include "repsel/eval.hpp"
#include "repsel/exact.hpp"
#include "repsel/selectors.hpp"
#include "support.hpp"

using namespace repsel;
using testing::Gen;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

/// Value at quantile q of the off-diagonal entries.
double quantile(const DistanceOracle& oracle, double q) {
  const std::size_t n = oracle.size();
  std::vector<double> v;
  v.reserve(n * (n - 1));
  for (SampleId i = 0; i < n; ++i)
    for (SampleId j = 0; j < n; ++j)
      if (i != j) v.push_back(oracle(i, j));
  std::sort(v.begin(), v.end());
  return v[static_cast<std::size_t>(q * static_cast<double>(v.size() - 1))];
}

DistanceOracle matrix_oracle(const Dataset& data, DistanceKind kind) {
  return DistanceOracle::from_matrix(materialize(data, kind));
}

RepresentativeSolution run(const DistanceOracle& oracle, Algorithm alg, double delta, std::uint64_t seed,
                           bool merge = false) {
  RunRequest r;
  r.algorithm = alg;
  r.config.delta = delta;
  r.config.seed = seed;
  r.config.merge_refine = merge;
  return run_algorithm(oracle, r);
}

// ---------------------------------------------------------------------------
// Instance suite shared by the legality and convergence criteria
// ---------------------------------------------------------------------------

struct Instance {
  std::string kind;
  DistanceOracle oracle;
  double delta;
};

std::vector<Instance> legal_cover_suite() {
  std::vector<Instance> out;
  Gen g(20240601);
  for (std::size_t i = 0; i < 200; ++i) {
    switch (i % 4) {
      case 0: {
        const auto data = g.clustered_points(g.size(20, 500), g.size(2, 5), g.size(1, 8), g.real(0.3, 2.0));
        auto oracle = matrix_oracle(data, DistanceKind::Euclidean);
        const double delta = quantile(oracle, g.real(0.02, 0.4));
        out.push_back({"euclidean", std::move(oracle), delta});
        break;
      }
      case 1: {
        const std::size_t n = g.size(20, 200);
        auto m = g.asymmetric_matrix(n, 10.0, 0.0);
        const auto probe = DistanceOracle::from_matrix(m);
        const double delta = quantile(probe, g.real(0.02, 0.4));
        std::vector<double> v(n * n);
        for (SampleId a = 0; a < n; ++a)
          for (SampleId b = 0; b < n; ++b) v[a * n + b] = a == b ? (g.coin(0.3) ? g.real(0.0, delta) : 0.0) : m.at(a, b);
        out.push_back({"asymmetric", DistanceOracle::from_matrix(DistanceMatrix(n, std::move(v))), delta});
        break;
      }
      case 2: {
        std::vector<MusicSegment> segs;
        const std::size_t n = g.size(20, 100);
        for (std::size_t k = 0; k < n; ++k) segs.push_back(g.segment(2, 10));
        auto oracle = matrix_oracle(Dataset::sequences(std::move(segs)), DistanceKind::Music);
        double self = 0.0;
        for (SampleId k = 0; k < n; ++k) self = std::max(self, oracle(k, k));
        const double delta = std::max(self, quantile(oracle, g.real(0.02, 0.4)));
        out.push_back({"music", std::move(oracle), delta});
        break;
      }
      default: {
        std::vector<Trajectory> trajs;
        const std::size_t n = g.size(20, 100);
        const std::size_t len = g.size(3, 12);
        for (std::size_t k = 0; k < n; ++k) trajs.push_back(g.trajectory(len));
        auto oracle = matrix_oracle(Dataset::trajectories(std::move(trajs)), DistanceKind::Trajectory);
        double self = 0.0;
        for (SampleId k = 0; k < n; ++k) self = std::max(self, oracle(k, k));
        const double delta = std::max(self, quantile(oracle, g.real(0.02, 0.4)));
        out.push_back({"trajectory", std::move(oracle), delta});
        break;
      }
    }
  }
  return out;
}

struct SuiteResults {
  Outcome legal;
  Outcome convergence;
};

SuiteResults legal_and_convergence() {
  const auto suite = legal_cover_suite();
  std::size_t violations = 0, failures = 0, runs = 0;
  std::string first_bad;
  std::size_t trace_bad = 0, unconverged = 0, count_bad = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& inst = suite[i];
    const auto check = [&](const std::string& name, const RepresentativeSolution& sol) {
      ++runs;
      const auto report = coverage_report(sol, inst.oracle, inst.delta);
      if (!report.legal()) {
        violations += report.violations.size();
        if (first_bad.empty()) first_bad = fmt::format("{} on {} #{}", name, inst.kind, i);
      }
    };
    const auto seed = derive_seed(7, i);
    try {
      check("one-shot", run(inst.oracle, Algorithm::OneShot, inst.delta, seed));
      const auto dm = run(inst.oracle, Algorithm::DeltaMedoids, inst.delta, seed);
      check("delta-medoids", dm);
      check("delta-medoids+merge", run(inst.oracle, Algorithm::DeltaMedoids, inst.delta, seed, true));
      check("k-centers", run(inst.oracle, Algorithm::KCenters, inst.delta, seed));
      check("kmedoids-min-k", run(inst.oracle, Algorithm::KMedoidsMinK, inst.delta, seed));

      unconverged += !dm.stats.converged;
      const auto& t = dm.stats.trace;
      for (std::size_t k = 1; k < t.size(); ++k) {
        if (t[k].total_distance > t[k - 1].total_distance) {
          ++trace_bad;
          std::cerr << fmt::format("increase on {} #{} pass {}: {:.17g} -> {:.17g} (reps {} -> {})\n", inst.kind, i, k,
                                   t[k - 1].total_distance, t[k].total_distance, t[k - 1].representative_count,
                                   t[k].representative_count);
        }
        count_bad += t[k].representative_count > t[k - 1].representative_count;
      }
    } catch (const std::exception& e) {
      ++failures;
      if (first_bad.empty()) first_bad = fmt::format("{} #{} threw: {}", inst.kind, i, e.what());
    }
  }
  SuiteResults r;
  r.legal.pass = violations == 0 && failures == 0;
  r.legal.detail = fmt::format("{} instances, {} runs, {} violations, {} errors{}", suite.size(), runs, violations,
                               failures, first_bad.empty() ? "" : "; first: " + first_bad);
  r.convergence.pass = failures == 0 && unconverged == 0 && trace_bad == 0 && count_bad == 0;
  r.convergence.detail = fmt::format("{} instances, {} unconverged, {} distance increases, {} count increases",
                                     suite.size(), unconverged, trace_bad, count_bad);
  return r;
}

// ---------------------------------------------------------------------------
// Small instances checked against exhaustive search
// ---------------------------------------------------------------------------

struct SmallInstance {
  DistanceOracle oracle;
  double delta;
};

std::vector<SmallInstance> small_suite() {
  std::vector<SmallInstance> out;
  Gen g(777);
  for (std::size_t i = 0; i < 100; ++i) {
    const auto data = g.points(g.size(4, 12), 2);
    auto oracle = matrix_oracle(data, DistanceKind::Euclidean);
    const double delta = quantile(oracle, g.real(0.05, 0.6));
    out.push_back({std::move(oracle), delta});
  }
  return out;
}

Outcome metric_bounds(const std::vector<SmallInstance>& suite) {
  std::size_t size_bad = 0, avg_bad = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& s = suite[i];
    const auto sol = run(s.oracle, Algorithm::DeltaMedoids, s.delta, i);
    const std::size_t k = sol.representative_set().size();
    size_bad += k > covering_number(s.oracle, s.delta / 2.0);
    avg_bad += sol.average_distance() > 2.0 * opt_max_for_k(s.oracle, k).value;
  }
  return {size_bad == 0 && avg_bad == 0,
          fmt::format("{} instances, k > N(delta/2) on {}, avg > 2*opt_max(k) on {}", suite.size(), size_bad,
                      avg_bad)};
}

Outcome oracle_dominance(const std::vector<SmallInstance>& suite) {
  std::size_t below = 0, equal = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const auto& s = suite[i];
    const std::size_t best = exact_min_cover(s.oracle, s.delta).optimum_size();
    for (Algorithm alg : {Algorithm::OneShot, Algorithm::DeltaMedoids, Algorithm::KCenters, Algorithm::KMedoidsMinK}) {
      below += run(s.oracle, alg, s.delta, i).representative_set().size() < best;
    }
    below += run(s.oracle, Algorithm::DeltaMedoids, s.delta, i, true).representative_set().size() < best;
    equal += run(s.oracle, Algorithm::DeltaMedoids, s.delta, i).representative_set().size() == best;
  }
  const double rate = static_cast<double>(equal) / static_cast<double>(suite.size());
  return {below == 0 && rate >= 0.3,
          fmt::format("{} instances, {} heuristic runs below the optimum, delta-medoids optimal on {:.0f}%",
                      suite.size(), below, 100.0 * rate)};
}

// ---------------------------------------------------------------------------
// Gaussian-mixture protocol
// ---------------------------------------------------------------------------

Outcome mixture_protocol() {
  constexpr std::size_t kDatasets = 20;
  constexpr double kQuantiles[] = {0.05, 0.10, 0.15, 0.20};
  constexpr std::size_t kDeltas = std::size(kQuantiles);
  std::vector<std::array<double, 3>> size(kDatasets * kDeltas), avg(kDatasets * kDeltas);
  parallel_for(kDatasets, configured_threads(), [&](std::size_t d) {
    GaussianMixtureSpec spec;
    spec.per_mode = 75;
    spec.seed = derive_seed(5, d);
    const auto oracle = matrix_oracle(gen_multimodal_gaussian(spec), DistanceKind::Euclidean);
    for (std::size_t q = 0; q < kDeltas; ++q) {
      const double delta = quantile(oracle, kQuantiles[q]);
      const std::uint64_t seed = derive_seed(d, q);
      RunRequest dm;
      dm.config.delta = delta;
      dm.config.scan_order = seeded_permutation(oracle.size(), seed);
      const RepresentativeSolution sols[] = {run_algorithm(oracle, dm), run(oracle, Algorithm::KCenters, delta, seed),
                                             run(oracle, Algorithm::KMedoidsMinK, delta, seed)};
      for (std::size_t a = 0; a < 3; ++a) {
        size[d * kDeltas + q][a] = static_cast<double>(sols[a].representative_set().size());
        avg[d * kDeltas + q][a] = sols[a].average_distance();
      }
    }
  });
  std::size_t ordered_columns = 0, better_cells = 0;
  std::string columns;
  for (std::size_t q = 0; q < kDeltas; ++q) {
    std::array<double, 3> mean{};
    for (std::size_t d = 0; d < kDatasets; ++d)
      for (std::size_t a = 0; a < 3; ++a) mean[a] += size[d * kDeltas + q][a] / kDatasets;
    ordered_columns += mean[0] <= mean[1] && mean[1] <= mean[2];
    columns += fmt::format(" q{:.2f}:{:.1f}/{:.1f}/{:.1f}", kQuantiles[q], mean[0], mean[1], mean[2]);
  }
  for (const auto& cell : avg) better_cells += cell[0] < cell[1];
  const double rate = static_cast<double>(better_cells) / static_cast<double>(avg.size());
  return {ordered_columns == kDeltas && rate >= 0.8,
          fmt::format("size order held in {}/{} delta columns (mean sizes dm/kc/km:{}), delta-medoids avg below "
                      "k-centers in {:.0f}% of cells",
                      ordered_columns, kDeltas, columns, 100.0 * rate)};
}

Outcome stability_protocol() {
  constexpr std::size_t kDatasets = 50;
  const Algorithm algs[] = {Algorithm::DeltaMedoids, Algorithm::KMedoids, Algorithm::KCenters};
  std::vector<std::array<double, 3>> mean(kDatasets);
  parallel_for(kDatasets, configured_threads(), [&](std::size_t d) {
    GaussianMixtureSpec spec;
    spec.per_mode = 50;
    spec.seed = derive_seed(6, d);
    const auto oracle = matrix_oracle(gen_multimodal_gaussian(spec), DistanceKind::Euclidean);
    const double delta = quantile(oracle, 0.15);
    StabilityOptions opt;
    opt.shuffles = 10;
    opt.seed = derive_seed(60, d);
    for (std::size_t a = 0; a < 3; ++a) mean[d][a] = stability_experiment(oracle, algs[a], delta, opt).mean_overlap;
  });
  bool pass = true;
  std::string detail;
  for (std::size_t a = 0; a < 3; ++a) {
    std::size_t stable = 0;
    double total = 0.0;
    for (const auto& m : mean) {
      stable += m[a] > 0.9;
      total += m[a];
    }
    const double rate = static_cast<double>(stable) / kDatasets;
    pass = pass && rate >= 0.8;
    detail += fmt::format("{}{}: {:.0f}% of datasets above 0.9 (mean overlap {:.3f})", a ? "; " : "",
                          to_string(algs[a]), 100.0 * rate, total / kDatasets);
  }
  return {pass, detail};
}

// ---------------------------------------------------------------------------
// Distance kernels
// ---------------------------------------------------------------------------

Outcome alignment_equivalence() {
  Gen g(4242);
  const SubstitutionModel<int> model{[](const int& a, const int& b) { return music_substitution_cost(a, b); }, 1.5, {}};
  const std::function<double(int, int)> cost = [](int a, int b) { return music_substitution_cost(a, b); };
  std::size_t mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const auto s = g.tokens(g.size(0, 12), 48, 84);
    const auto t = g.tokens(g.size(0, 12), 48, 84);
    const std::span<const int> ss(s), ts(t);
    mismatches += global_alignment(ss, ts, model) != testing::naive_global(s, t, cost, 1.5);
    mismatches += local_alignment_score(ss, ts, model) != testing::naive_local_score(s, t, cost, 1.5, 1.5);
  }
  return {mismatches == 0, fmt::format("1000 pairs, {} mismatches against the full-table reference", mismatches)};
}

bool close(double got, double want) { return std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want)); }

Outcome distance_fixtures() {
  std::vector<std::string> bad;
  const MusicSegment a({60, 64}, {1, 1});
  const MusicSegment c({62, 65}, {1, 1});
  const MusicSegment octave({72, 76}, {1, 1});
  if (!close(music_distance(a, a), std::sqrt(2.0 * 0.0625))) bad.push_back("music self");
  const double g = std::pow(1.3, 0.5) + std::pow(1.3, 0.25);
  const double l = 1.0 / (1.0 + (3.0 - g));
  if (!close(music_distance(a, c), std::sqrt(40.0 + g * g + 2.0 * l * l))) bad.push_back("music neighbour");
  if (!close(music_distance(a, octave), std::sqrt(10.0 + 4.0 * std::pow(1.3, 6.0) + 2.0))) bad.push_back("music octave");

  const auto features = trajectory_features(std::vector<Point2>{{0, 0}, {0, 10}, {5, 10}, {8, 14}});
  const Bag<MovementTurn> expected{{10, TurnBin::UpperRight}, {5, TurnBin::UpperLeft}};
  if (!(features.bag == expected)) bad.push_back("trajectory bag tokens");

  const std::vector<double> beats(8, 1.0);
  const MusicSegment x(std::vector<int>(8, 60), beats), y(std::vector<int>(8, 67), beats), z(std::vector<int>(8, 74), beats);
  if (!(music_distance(x, z) > music_distance(x, y) + music_distance(y, z))) bad.push_back("triangle witness");

  std::string detail = "3 music fixtures, trajectory bag tokens, triangle witness";
  for (const auto& b : bad) detail += "; failed: " + b;
  return {bad.empty(), detail};
}

// ---------------------------------------------------------------------------
// CLI determinism
// ---------------------------------------------------------------------------

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome cli_determinism(const std::string& cli) {
  const fs::path dir = fs::temp_directory_path() / fmt::format("repsel-acceptance-{}", ::getpid());
  fs::create_directories(dir);
  const auto sh = [&](const std::string& args) {
    const std::string cmd = fmt::format("cd '{}' && '{}' {} > stdout.txt 2> stderr.txt", dir.string(), cli, args);
    return std::system(cmd.c_str());
  };
  {
    std::ofstream(dir / "bench.cfg") << "seed = 2\nrepetitions = 3\nsubset_size = 60\ndeltas = 3, 5\n"
                                        "algorithms = one-shot, delta-medoids, k-centers, kmedoids-min-k\n"
                                        "[dataset.mix]\nkind = gaussian\ndims = 5\nmodes = 3\nper_mode = 40\nseed = 9\n";
  }
  struct Case {
    std::string args;
    std::string output;
  };
  const std::vector<Case> cases{
      {"gen --kind gaussian --dims 5 --modes 3 --per-mode 40 --seed 4 --out pts.csv", "pts.csv"},
      {"select pts.csv --distance euclidean --algorithm delta-medoids --delta 4 --shuffle --seed 3 --merge-refine "
       "--out dm.json",
       "dm.json"},
      {"select pts.csv --distance euclidean --algorithm kmedoids-min-k --delta 5 --restarts 2 --out km.json",
       "km.json"},
      {"select pts.csv --distance euclidean --algorithm k-centers --delta 4 --seed 8 --out kc.json", "kc.json"},
      {"stability pts.csv --distance euclidean --algorithm delta-medoids --delta 4 --shuffles 6 --out st.csv",
       "st.csv"},
      {"bench bench.cfg --out bench.csv --svg bench.svg", "bench.csv"},
      {"eval pts.csv dm.json --distance euclidean", "stdout.txt"},
  };
  std::size_t identical = 0;
  std::string bad;
  for (const auto& c : cases) {
    const int first_code = sh(c.args);
    const std::string first = slurp(dir / c.output);
    const int second_code = sh(c.args);
    const std::string second = slurp(dir / c.output);
    bool same = first_code == 0 && first_code == second_code && first == second && !first.empty();
    if (c.output != "stdout.txt") {
      same = same && sh("rerun " + c.output) == 0 && slurp(dir / c.output) == first;
    }
    if (same) {
      ++identical;
    } else if (bad.empty()) {
      bad = c.args.substr(0, c.args.find(' '));
    }
  }
  fs::remove_all(dir);
  return {identical == cases.size(), fmt::format("{}/{} commands byte-identical on repeat and rerun{}", identical,
                                                 cases.size(), bad.empty() ? "" : "; first failure: " + bad)};
}

void report(const char* id, const Outcome& o, double seconds, bool& ok) {
  std::cout << fmt::format("{} {}: {} [{:.1f}s]", id, o.pass ? "PASS" : "FAIL", o.detail, seconds) << std::endl;
  ok = ok && o.pass;
}

double since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::cerr << "usage: acceptance <repsel-cli>\n";
    return 2;
  }
  bool ok = true;
  auto t = std::chrono::steady_clock::now();
  const auto suite = legal_and_convergence();
  const double suite_seconds = since(t);
  report("AC1", suite.legal, suite_seconds, ok);
  report("AC2", suite.convergence, suite_seconds, ok);

  t = std::chrono::steady_clock::now();
  const auto small = small_suite();
  const std::string cli = fs::absolute(argv[1]).string();
  const std::pair<const char*, std::function<Outcome()>> rest[] = {
      {"AC3", [&] { return metric_bounds(small); }},
      {"AC4", [&] { return oracle_dominance(small); }},
      {"AC5", mixture_protocol},
      {"AC6", stability_protocol},
      {"AC7", alignment_equivalence},
      {"AC8", distance_fixtures},
      {"AC9", [&] { return cli_determinism(cli); }},
  };
  for (const auto& [id, fn] : rest) {
    t = std::chrono::steady_clock::now();
    const Outcome o = fn();
    report(id, o, since(t), ok);
  }
  return ok ? 0 : 1;
}
