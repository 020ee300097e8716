#include <doctest.h>

#include <cmath>

#include "repsel/eval.hpp"
#include "support.hpp"

using namespace repsel;
using testing::Gen;

namespace {

DistanceOracle line_oracle(std::vector<double> xs) {
  auto data = std::make_shared<const Dataset>(Dataset::points(1, std::move(xs)));
  return make_oracle(data, DistanceKind::Euclidean);
}

OracleFactory euclidean() {
  return [](std::shared_ptr<const Dataset> d) { return make_oracle(std::move(d), DistanceKind::Euclidean); };
}

}  // namespace

TEST_CASE("coverage report examples") {
  const auto oracle = line_oracle({0, 0.5, 2, 2.4});
  const auto sol = solution_from_clusters(std::vector<Cluster>{{0, {0, 1}}, {2, {2, 3}}}, 4, 1.0, oracle);
  const auto r = coverage_report(sol, oracle, 1.0);
  CHECK(r.legal());
  CHECK(r.representative_count == 2);
  CHECK(r.max_distance == 0.5);
  CHECK(r.average_distance == doctest::Approx(0.225).epsilon(1e-15));
  CHECK(r.stale.empty());

  const auto tight = coverage_report(sol, oracle, 0.45);
  REQUIRE(tight.violations.size() == 1);
  CHECK(tight.violations[0].sample == 1);
  CHECK(tight.violations[0].distance == 0.5);

  auto removed = sol;
  removed.representatives = {0};
  const auto orphan = coverage_report(removed, oracle, 1.0);
  CHECK_FALSE(orphan.legal());
  REQUIRE(orphan.violations.size() == 2);
  CHECK(orphan.violations[0].sample == 2);
  CHECK(orphan.violations[0].distance == 2.0);

  auto stale = sol;
  stale.assigned_distance[1] = 0.1;
  CHECK(coverage_report(stale, oracle, 1.0).stale == std::vector<SampleId>{1});

  auto partial = sol;
  partial.assignment.pop_back();
  CHECK_THROWS_AS(coverage_report(partial, oracle, 1.0), ParameterError);
  auto out_of_range = sol;
  out_of_range.assignment[0] = 9;
  CHECK_THROWS_AS(coverage_report(out_of_range, oracle, 1.0), ParameterError);
}

TEST_CASE("coverage report counts representative self-distance") {
  const auto oracle = DistanceOracle::from_matrix(DistanceMatrix(2, {2, 0.5, 0.5, 0}));
  const auto sol = solution_from_clusters(std::vector<Cluster>{{0, {0}}, {1, {1}}}, 2, 1.0, oracle);
  const auto r = coverage_report(sol, oracle, 1.0);
  REQUIRE(r.violations.size() == 1);
  CHECK(r.violations[0].sample == 0);
}

TEST_CASE("overlap") {
  const std::vector<SampleId> a{1, 2, 3}, b{2, 3, 4}, empty;
  CHECK(overlap(a, b) == 0.5);
  CHECK(overlap(a, a) == 1.0);
  CHECK(overlap(empty, empty) == 1.0);
  CHECK(overlap(a, empty) == 0.0);
  const std::vector<SampleId> dup{3, 1, 1, 2};
  CHECK(overlap(a, dup) == 1.0);

  Gen g(51);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<SampleId> x, y;
    for (SampleId i = 0; i < 20; ++i) {
      if (g.coin()) x.push_back(i);
      if (g.coin()) y.push_back(i);
    }
    const double o = overlap(x, y);
    CHECK(o == overlap(y, x));
    CHECK(o >= 0.0);
    CHECK(o <= 1.0);
    std::size_t inter = 0;
    for (SampleId i : x) inter += std::count(y.begin(), y.end(), i);
    const std::size_t uni = x.size() + y.size() - inter;
    CHECK(o == (uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni)));
  }
}

TEST_CASE("stability experiment") {
  SUBCASE("delta past the diameter forces a single cover") {
    const auto oracle = line_oracle({0, 1, 2, 3});
    StabilityOptions opt;
    opt.shuffles = 5;
    opt.seed = 3;
    const auto r = stability_experiment(oracle, Algorithm::DeltaMedoids, 10.0, opt);
    CHECK(r.mean_overlap == 1.0);
    CHECK(r.pairs.size() == 10);
    CHECK(r.histogram.size() == 20);
    CHECK(r.histogram.back() == 10);
  }
  SUBCASE("delta-medoids settles on the middle point") {
    const auto oracle = line_oracle({0, 0.9, 1.0});
    StabilityOptions opt;
    opt.shuffles = 6;
    const auto r = stability_experiment(oracle, Algorithm::DeltaMedoids, 1.0, opt);
    CHECK(r.mean_overlap == 1.0);
    for (const auto& run : r.runs) CHECK(run == std::vector<SampleId>{1});
  }
  SUBCASE("determinism and histogram totals") {
    Gen g(52);
    auto data = std::make_shared<const Dataset>(g.clustered_points(60, 2, 4, 0.8));
    const auto oracle = make_oracle(data, DistanceKind::Euclidean);
    StabilityOptions opt;
    opt.shuffles = 7;
    opt.seed = 11;
    opt.bin_width = 0.3;
    for (Algorithm alg : {Algorithm::DeltaMedoids, Algorithm::OneShot, Algorithm::KCenters, Algorithm::KMedoids}) {
      const auto a = stability_experiment(oracle, alg, 2.5, opt);
      const auto b = stability_experiment(oracle, alg, 2.5, opt);
      CHECK(a.runs == b.runs);
      CHECK(a.mean_overlap == b.mean_overlap);
      CHECK(a.histogram.size() == 4);
      std::size_t total = 0;
      for (auto c : a.histogram) total += c;
      CHECK(total == 21);
      double sum = 0.0;
      for (const auto& p : a.pairs) sum += p.overlap;
      CHECK(a.mean_overlap == doctest::Approx(sum / 21.0));
    }
  }
  SUBCASE("parameter checks") {
    const auto oracle = line_oracle({0, 1});
    StabilityOptions opt;
    opt.shuffles = 1;
    CHECK_THROWS_AS(stability_experiment(oracle, Algorithm::OneShot, 1.0, opt), ParameterError);
    opt.shuffles = 2;
    opt.bin_width = 0.0;
    CHECK_THROWS_AS(stability_experiment(oracle, Algorithm::OneShot, 1.0, opt), ParameterError);
  }
}

TEST_CASE("generators") {
  GaussianMixtureSpec spec;
  spec.seed = 9;
  const auto a = gen_multimodal_gaussian(spec);
  CHECK(a.size() == 1000);
  CHECK(a.dims() == 10);
  const auto b = gen_multimodal_gaussian(spec);
  for (SampleId i = 0; i < a.size(); i += 97)
    for (std::size_t d = 0; d < 10; ++d) CHECK(a.point(i)[d] == b.point(i)[d]);
  spec.seed = 10;
  CHECK(gen_multimodal_gaussian(spec).point(0)[0] != a.point(0)[0]);

  GaussianMixtureSpec flat;
  flat.modes = 2;
  flat.per_mode = 3;
  flat.dims = 2;
  flat.var_min = flat.var_max = 0.0;
  const auto f = gen_multimodal_gaussian(flat);
  CHECK(f.point(0)[0] == f.point(2)[0]);
  CHECK(f.point(3)[1] == f.point(5)[1]);
  CHECK(f.point(0)[0] >= 0.0);
  CHECK(f.point(0)[0] <= 10.0);

  const auto line = gen_line(4, 0.5, 1.0);
  CHECK(line.size() == 4);
  CHECK(line.point(3)[0] == 2.5);
  const auto grid = gen_grid(2, 3, 2.0);
  CHECK(grid.size() == 6);
  CHECK(grid.point(4)[0] == 2.0);
  CHECK(grid.point(4)[1] == 2.0);
}

TEST_CASE("mean and standard error") {
  CHECK(mean_and_stderr(std::vector<double>{}).mean == 0.0);
  const auto one = mean_and_stderr(std::vector<double>{4.0});
  CHECK(one.mean == 4.0);
  CHECK(one.stderr_ == 0.0);
  const auto two = mean_and_stderr(std::vector<double>{1.0, 3.0});
  CHECK(two.mean == 2.0);
  CHECK(two.stderr_ == doctest::Approx(1.0));
}

TEST_CASE("benchmark harness") {
  auto line = std::make_shared<const Dataset>(gen_line(10));
  SUBCASE("single cell") {
    BenchConfig c;
    c.datasets = {{"line", line, euclidean()}};
    c.algorithms = {Algorithm::DeltaMedoids};
    c.deltas = {1.0};
    const auto r = benchmark_run(c);
    REQUIRE(r.rows.size() == 1);
    REQUIRE(r.summaries.size() == 1);
    CHECK(r.rows[0].subset_size == 10);
    CHECK(r.rows[0].rep_pct == doctest::Approx(100.0 * r.rows[0].rep_count / 10.0));
    CHECK(r.summaries[0].count == 1);
    CHECK(r.summaries[0].rep_count.stderr_ == 0.0);
    CHECK(r.rows[0].flag.empty());
  }
  SUBCASE("delta past the diameter") {
    BenchConfig c;
    c.datasets = {{"line", line, euclidean()}};
    c.algorithms = {Algorithm::OneShot, Algorithm::DeltaMedoids, Algorithm::KCenters, Algorithm::KMedoidsMinK};
    c.deltas = {100.0};
    c.repetitions = 3;
    c.subset_size = 6;
    const auto r = benchmark_run(c);
    CHECK(r.rows.size() == 12);
    for (const auto& row : r.rows) {
      CHECK(row.rep_count == 1);
      CHECK(row.subset_size == 6);
    }
  }
  SUBCASE("paired runs and determinism") {
    Gen g(53);
    auto data = std::make_shared<const Dataset>(g.clustered_points(120, 3, 5, 1.0));
    BenchConfig c;
    c.datasets = {{"blobs", data, euclidean()}};
    c.algorithms = {Algorithm::OneShot, Algorithm::DeltaMedoids};
    c.deltas = {1.5, 3.0};
    c.repetitions = 4;
    c.subset_size = 80;
    c.seed = 17;
    c.threads = 4;
    const auto a = benchmark_run(c);
    c.threads = 1;
    const auto b = benchmark_run(c);
    REQUIRE(a.rows.size() == 16);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
      CHECK(a.rows[i].rep_count == b.rows[i].rep_count);
      CHECK(a.rows[i].avg_dist == b.rows[i].avg_dist);
      CHECK(a.rows[i].seed == b.rows[i].seed);
    }
    // Row layout: algorithm-major, then delta, then repetition.
    for (std::size_t cell = 0; cell < 2; ++cell) {
      for (std::size_t rep = 0; rep < 4; ++rep) {
        const auto& shot = a.rows[cell * 4 + rep];
        const auto& med = a.rows[(2 + cell) * 4 + rep];
        CHECK(shot.algorithm == Algorithm::OneShot);
        CHECK(med.algorithm == Algorithm::DeltaMedoids);
        CHECK(shot.seed == med.seed);
        CHECK(med.avg_dist <= shot.avg_dist);
        CHECK(med.rep_count <= shot.rep_count);
      }
    }
  }
  SUBCASE("failures are flagged and excluded") {
    auto m = std::make_shared<const Dataset>(Dataset::points(1, {0.0, 1.0, 2.0}));
    OracleFactory bad = [](std::shared_ptr<const Dataset> d) {
      const std::size_t n = d->size();
      return DistanceOracle::from_function(n, [](SampleId, SampleId) { return 5.0; });
    };
    BenchConfig c;
    c.datasets = {{"bad", m, bad}};
    c.algorithms = {Algorithm::KMedoidsMinK, Algorithm::OneShot};
    c.deltas = {1.0};
    c.repetitions = 2;
    const auto r = benchmark_run(c);
    REQUIRE(r.rows.size() == 4);
    for (const auto& row : r.rows) CHECK_FALSE(row.flag.empty());
    for (const auto& s : r.summaries) CHECK(s.count == 0);
  }
  SUBCASE("plain k-medoids is rejected") {
    BenchConfig c;
    c.datasets = {{"line", line, euclidean()}};
    c.algorithms = {Algorithm::KMedoids};
    c.deltas = {1.0};
    CHECK_THROWS_AS(benchmark_run(c), ParameterError);
  }
}

TEST_CASE("paired benchmark on the default mixture") {
  auto data = std::make_shared<const Dataset>(gen_multimodal_gaussian(GaussianMixtureSpec{}));
  BenchConfig c;
  c.datasets = {{"mixture", data, [](std::shared_ptr<const Dataset> d) {
                   return DistanceOracle::from_matrix(materialize(*d, DistanceKind::Euclidean));
                 }}};
  c.algorithms = {Algorithm::DeltaMedoids, Algorithm::KCenters};
  c.deltas = {5.0};
  c.repetitions = 20;
  c.subset_size = 200;
  c.seed = 1;
  c.threads = 4;
  const auto r = benchmark_run(c);
  REQUIRE(r.rows.size() == 40);
  std::size_t wins = 0;
  for (std::size_t rep = 0; rep < 20; ++rep) wins += r.rows[rep].rep_count <= r.rows[20 + rep].rep_count;
  CHECK(wins >= 16);
}
