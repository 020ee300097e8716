#include "repsel/cli.hpp"

#include <filesystem>
#include <cmath>
#include <map>
#include <set>
#include <ostream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "repsel/config.hpp"
#include "repsel/dataset.hpp"
#include "repsel/eval.hpp"
#include "repsel/io.hpp"
#include "repsel/selectors.hpp"

namespace repsel {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

/// Usage problem detected after CLI11 parsing; maps to the input exit code.
class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

ordered_json model_to_json(const DistanceModelConfig& m) {
  const auto offset = [](const std::optional<double>& v) { return v ? ordered_json(*v) : ordered_json(nullptr); };
  ordered_json music;
  music["gap"] = m.music.gap;
  music["reward_offset"] = offset(m.music.reward_offset);
  music["bag_weight"] = m.music.bag_weight;
  music["local_weight"] = m.music.local_weight;
  music["fold_octaves"] = m.music.fold_octaves;
  ordered_json trajectory;
  trajectory["gap"] = m.trajectory.gap;
  trajectory["reward_offset"] = offset(m.trajectory.reward_offset);
  trajectory["bag_weight"] = m.trajectory.bag_weight;
  trajectory["local_weight"] = m.trajectory.local_weight;
  trajectory["angle_weight"] = m.trajectory.angle_weight;
  trajectory["resolution"] = m.trajectory.resolution;
  return ordered_json{{"music", std::move(music)}, {"trajectory", std::move(trajectory)}};
}

ordered_json manifest(const std::string& command, const std::vector<std::string>& args, ordered_json config) {
  ordered_json m;
  m["tool"] = "repsel";
  m["version"] = kVersion;
  m["command"] = command;
  m["args"] = args;
  m["config"] = std::move(config);
  return m;
}

DistanceModelConfig load_model(const std::string& path) {
  return path.empty() ? DistanceModelConfig{} : DistanceModelConfig::load(path);
}

// ---------------------------------------------------------------------------

struct CommonInput {
  std::string input;
  std::string distance;
  std::string model;
};

void add_common(CLI::App* cmd, CommonInput& c) {
  cmd->add_option("input", c.input, "Dataset file")->required();
  cmd->add_option("--distance", c.distance, "euclidean | precomputed | music | trajectory")->required();
  cmd->add_option("--model", c.model, "Distance-model parameter file");
}

struct Loaded {
  DistanceModelConfig model;
  DistanceKind kind = DistanceKind::Euclidean;
  std::shared_ptr<const Dataset> data;
};

Loaded load(const CommonInput& c) {
  Loaded l;
  l.kind = parse_distance_kind(c.distance);
  l.model = load_model(c.model);
  try {
    l.data = std::make_shared<const Dataset>(load_dataset(c.input, l.kind, l.model));
  } catch (const ParseError& e) {
    throw ParseError(0, fmt::format("{}: {}", c.input, e.what()));
  }
  return l;
}

ordered_json common_config(const CommonInput& c, const Loaded& l) {
  ordered_json j;
  j["input"] = c.input;
  j["distance"] = to_string(l.kind);
  j["model"] = model_to_json(l.model);
  return j;
}

// ---------------------------------------------------------------------------

struct SelectOptions {
  CommonInput common;
  std::string algorithm;
  double delta = 0.0;
  std::size_t k = 0;
  std::uint64_t seed = 0;
  bool shuffle = false;
  bool merge_refine = false;
  std::size_t restarts = 1;
  std::size_t max_iterations = 1000;
  bool timing = false;
  std::string out;
  CLI::Option* delta_opt = nullptr;
  CLI::Option* k_opt = nullptr;
};

int cmd_select(const SelectOptions& o, const std::vector<std::string>& args) {
  const Loaded l = load(o.common);
  RunRequest request;
  request.algorithm = parse_algorithm(o.algorithm);
  request.restarts = o.restarts;
  request.config.seed = o.seed;
  request.config.merge_refine = o.merge_refine;
  request.config.max_iterations = o.max_iterations;
  request.config.threads = configured_threads();
  if (request.algorithm == Algorithm::KMedoids) {
    if (o.k_opt->count() == 0) throw UsageError("--k is required for kmedoids");
    request.k = o.k;
  } else {
    if (o.delta_opt->count() == 0) throw UsageError(fmt::format("--delta is required for {}", o.algorithm));
    request.config.delta = o.delta;
  }
  const std::size_t n = l.data->size();
  if (o.shuffle) request.config.scan_order = seeded_permutation(n, o.seed);

  const DistanceOracle oracle = make_oracle(l.data, l.kind, l.model);
  const RepresentativeSolution sol = run_algorithm(oracle, request);

  ordered_json config = common_config(o.common, l);
  config["algorithm"] = to_string(request.algorithm);
  config["delta"] = o.delta_opt->count() ? ordered_json(o.delta) : ordered_json(nullptr);
  config["k"] = o.k_opt->count() ? ordered_json(o.k) : ordered_json(nullptr);
  config["seed"] = o.seed;
  config["shuffle"] = o.shuffle;
  config["merge_refine"] = o.merge_refine;
  config["restarts"] = o.restarts;
  config["max_iterations"] = o.max_iterations;
  config["output"] = o.out;

  ordered_json doc = solution_to_json(sol, to_string(request.algorithm), o.timing);
  doc["manifest"] = manifest("select", args, std::move(config));
  write_atomic(o.out, doc.dump(2) + "\n");
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct EvalOptions {
  CommonInput common;
  std::string solution;
  double delta = 0.0;
  CLI::Option* delta_opt = nullptr;
};

int cmd_eval(const EvalOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  const Loaded l = load(o.common);
  json doc;
  try {
    doc = json::parse(read_file(o.solution));
  } catch (const json::exception& e) {
    throw ParseError(0, fmt::format("{}: {}", o.solution, e.what()));
  }
  const RepresentativeSolution sol = solution_from_json(doc, l.data->size());
  double delta = o.delta;
  if (o.delta_opt->count() == 0) {
    if (!sol.delta) throw UsageError("solution carries no delta; pass --delta");
    delta = *sol.delta;
  }
  const DistanceOracle oracle = make_oracle(l.data, l.kind, l.model);
  const CoverageReport report = coverage_report(sol, oracle, delta);

  ordered_json config = common_config(o.common, l);
  config["solution"] = o.solution;
  config["delta"] = delta;
  ordered_json result = coverage_to_json(report);
  result["manifest"] = manifest("eval", args, std::move(config));
  out << result.dump(2) << "\n";
  return report.legal() ? kExitOk : kExitViolations;
}

// ---------------------------------------------------------------------------

struct StabilityCliOptions {
  CommonInput common;
  std::string algorithm;
  double delta = 0.0;
  std::size_t shuffles = 10;
  std::uint64_t seed = 0;
  double bin_width = 0.05;
  std::size_t k = 0;
  std::size_t restarts = 1;
  bool merge_refine = false;
  std::string out;
};

int cmd_stability(const StabilityCliOptions& o, const std::vector<std::string>& args, std::ostream& out) {
  const Loaded l = load(o.common);
  const Algorithm algorithm = parse_algorithm(o.algorithm);
  StabilityOptions options;
  options.shuffles = o.shuffles;
  options.seed = o.seed;
  options.bin_width = o.bin_width;
  options.k = o.k;
  options.restarts = o.restarts;
  options.merge_refine = o.merge_refine;
  options.threads = configured_threads();
  const DistanceOracle oracle = make_oracle(l.data, l.kind, l.model);
  const StabilityReport report = stability_experiment(oracle, algorithm, o.delta, options);

  ordered_json config = common_config(o.common, l);
  config["algorithm"] = to_string(algorithm);
  config["delta"] = o.delta;
  config["shuffles"] = o.shuffles;
  config["seed"] = o.seed;
  config["bin_width"] = o.bin_width;
  config["k"] = report.k;
  config["restarts"] = o.restarts;
  config["merge_refine"] = o.merge_refine;
  config["output"] = o.out.empty() ? ordered_json(nullptr) : ordered_json(o.out);
  const std::string csv = stability_to_csv(report, manifest("stability", args, std::move(config)));
  if (o.out.empty()) {
    out << csv;
  } else {
    write_atomic(o.out, csv);
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct BenchCliOptions {
  std::string config;
  std::string out;
  std::string svg;
  bool timing = false;
};

struct DatasetEntry {
  std::string name;
  std::map<std::string, KeyValue> keys;
};

std::size_t as_count(const KeyValue& kv) {
  const long long v = parse_integer(kv);
  if (v < 0) throw ParseError(kv.line, fmt::format("'{}' must be non-negative", kv.key));
  return static_cast<std::size_t>(v);
}

BenchDataset build_dataset(const DatasetEntry& entry, const DistanceModelConfig& model,
                           const std::filesystem::path& base) {
  const auto get = [&](const std::string& key) -> const KeyValue* {
    const auto it = entry.keys.find(key);
    return it == entry.keys.end() ? nullptr : &it->second;
  };
  static const std::set<std::string> known = {"path", "distance", "kind", "dims", "modes", "per_mode", "mean_min",
                                              "mean_max", "var_min", "var_max", "seed", "n", "step", "start",
                                              "rows", "cols"};
  for (const auto& [key, kv] : entry.keys) {
    if (!known.contains(key)) throw ParseError(kv.line, fmt::format("unknown dataset key '{}'", kv.key));
  }

  BenchDataset out;
  out.name = entry.name;
  DistanceKind kind = DistanceKind::Euclidean;
  if (const KeyValue* kv = get("distance")) {
    try {
      kind = parse_distance_kind(kv->value);
    } catch (const ParameterError& e) {
      throw ParseError(kv->line, e.what());
    }
  }

  const KeyValue* path = get("path");
  const KeyValue* generator = get("kind");
  if ((path == nullptr) == (generator == nullptr)) {
    throw ParseError(0, fmt::format("dataset '{}' needs exactly one of 'path' or 'kind'", entry.name));
  }
  if (path) {
    std::filesystem::path p(path->value);
    if (p.is_relative()) p = base / p;
    out.data = std::make_shared<const Dataset>(load_dataset(p.string(), kind, model));
  } else {
    if (kind != DistanceKind::Euclidean) {
      throw ParseError(generator->line, "generated datasets are points; use distance = euclidean");
    }
    const auto real = [&](const char* key, double fallback) { const KeyValue* kv = get(key); return kv ? parse_double(*kv) : fallback; };
    const auto count = [&](const char* key, std::size_t fallback) { const KeyValue* kv = get(key); return kv ? as_count(*kv) : fallback; };
    try {
      if (generator->value == "gaussian") {
        GaussianMixtureSpec spec;
        spec.dims = count("dims", spec.dims);
        spec.modes = count("modes", spec.modes);
        spec.per_mode = count("per_mode", spec.per_mode);
        spec.mean_min = real("mean_min", spec.mean_min);
        spec.mean_max = real("mean_max", spec.mean_max);
        spec.var_min = real("var_min", spec.var_min);
        spec.var_max = real("var_max", spec.var_max);
        spec.seed = count("seed", 0);
        out.data = std::make_shared<const Dataset>(gen_multimodal_gaussian(spec));
      } else if (generator->value == "line") {
        out.data = std::make_shared<const Dataset>(gen_line(count("n", 0), real("step", 1.0), real("start", 0.0)));
      } else if (generator->value == "grid") {
        out.data = std::make_shared<const Dataset>(gen_grid(count("rows", 0), count("cols", 0), real("step", 1.0)));
      } else {
        throw ParseError(generator->line, fmt::format("unknown generator '{}'", generator->value));
      }
    } catch (const ParameterError& e) {
      throw ParseError(generator->line, e.what());
    }
  }
  out.oracle = [kind, model](std::shared_ptr<const Dataset> d) { return make_oracle(std::move(d), kind, model); };
  return out;
}

BenchConfig parse_bench_config(const std::string& text, const std::filesystem::path& base) {
  BenchConfig cfg;
  DistanceModelConfig model;
  std::vector<DatasetEntry> entries;
  bool have_algorithms = false, have_deltas = false;
  for (const KeyValue& kv : parse_key_values(text)) {
    if (kv.key.starts_with("dataset.")) {
      const std::string rest = kv.key.substr(8);
      const auto dot = rest.find('.');
      if (dot == std::string::npos || dot == 0) {
        throw ParseError(kv.line, fmt::format("expected dataset.<name>.<key>, got '{}'", kv.key));
      }
      const std::string name = rest.substr(0, dot);
      auto it = std::find_if(entries.begin(), entries.end(), [&](const DatasetEntry& e) { return e.name == name; });
      if (it == entries.end()) {
        entries.push_back({name, {}});
        it = entries.end() - 1;
      }
      it->keys[rest.substr(dot + 1)] = kv;
    } else if (kv.key == "algorithms") {
      have_algorithms = true;
      for (const std::string& a : split_list(kv.value)) {
        try {
          cfg.algorithms.push_back(parse_algorithm(a));
        } catch (const ParameterError& e) {
          throw ParseError(kv.line, e.what());
        }
        if (cfg.algorithms.back() == Algorithm::KMedoids) {
          throw ParseError(kv.line, "plain kmedoids has no delta; use kmedoids-min-k");
        }
      }
    } else if (kv.key == "deltas") {
      have_deltas = true;
      for (const std::string& d : split_list(kv.value)) {
        const double v = parse_double(KeyValue{kv.key, d, kv.line});
        if (!(v >= 0.0) || std::isinf(v)) throw ParseError(kv.line, fmt::format("bad delta '{}'", d));
        cfg.deltas.push_back(v);
      }
    } else if (kv.key == "repetitions") {
      cfg.repetitions = as_count(kv);
      if (cfg.repetitions == 0) throw ParseError(kv.line, "repetitions must be at least 1");
    } else if (kv.key == "subset_size") {
      cfg.subset_size = as_count(kv);
    } else if (kv.key == "seed") {
      cfg.seed = as_count(kv);
    } else if (kv.key == "restarts") {
      cfg.restarts = std::max<std::size_t>(1, as_count(kv));
    } else if (kv.key == "merge_refine") {
      cfg.merge_refine = parse_bool(kv);
    } else if (!model.apply(kv)) {
      throw ParseError(kv.line, fmt::format("unknown key '{}'", kv.key));
    }
  }
  if (!have_algorithms || cfg.algorithms.empty()) throw ParseError(0, "config lists no algorithms");
  if (!have_deltas || cfg.deltas.empty()) throw ParseError(0, "config lists no deltas");
  if (entries.empty()) throw ParseError(0, "config lists no datasets");
  for (const DatasetEntry& e : entries) cfg.datasets.push_back(build_dataset(e, model, base));
  return cfg;
}

int cmd_bench(const BenchCliOptions& o, const std::vector<std::string>& args) {
  const std::string text = read_file(o.config);
  BenchConfig cfg;
  try {
    cfg = parse_bench_config(text, std::filesystem::path(o.config).parent_path());
  } catch (const ParseError& e) {
    throw ParseError(0, fmt::format("{}: {}", o.config, e.what()));
  }
  cfg.threads = configured_threads();
  const BenchResult result = benchmark_run(cfg);

  ordered_json config;
  config["config"] = o.config;
  config["config_text"] = text;
  config["output"] = o.out;
  config["svg"] = o.svg.empty() ? ordered_json(nullptr) : ordered_json(o.svg);
  config["timing"] = o.timing;
  const std::string csv = bench_to_csv(result, manifest("bench", args, std::move(config)), o.timing);
  const std::string svg = o.svg.empty() ? std::string{} : bench_to_svg(result);
  write_atomic(o.out, csv);
  if (!o.svg.empty()) write_atomic(o.svg, svg);
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct GenOptions {
  std::string kind;
  std::uint64_t seed = 0;
  std::string out;
  GaussianMixtureSpec gaussian;
  std::size_t n = 0;
  double step = 1.0;
  double start = 0.0;
  std::size_t rows = 0;
  std::size_t cols = 0;
  CLI::Option* n_opt = nullptr;
};

int cmd_gen(GenOptions o, const std::vector<std::string>& args) {
  Dataset data;
  ordered_json config;
  config["kind"] = o.kind;
  config["seed"] = o.seed;
  if (o.kind == "gaussian") {
    GaussianMixtureSpec spec = o.gaussian;
    spec.seed = o.seed;
    if (o.n_opt->count()) {
      if (spec.modes == 0 || o.n % spec.modes != 0) {
        throw UsageError(fmt::format("--n {} is not a multiple of --modes {}", o.n, spec.modes));
      }
      spec.per_mode = o.n / spec.modes;
    }
    data = gen_multimodal_gaussian(spec);
    config["dims"] = spec.dims;
    config["modes"] = spec.modes;
    config["per_mode"] = spec.per_mode;
    config["mean_range"] = {spec.mean_min, spec.mean_max};
    config["var_range"] = {spec.var_min, spec.var_max};
  } else if (o.kind == "line") {
    data = gen_line(o.n, o.step, o.start);
    config["n"] = o.n;
    config["step"] = o.step;
    config["start"] = o.start;
  } else if (o.kind == "grid") {
    data = gen_grid(o.rows, o.cols, o.step);
    config["rows"] = o.rows;
    config["cols"] = o.cols;
    config["step"] = o.step;
  } else {
    throw UsageError(fmt::format("unknown generator '{}'", o.kind));
  }
  config["output"] = o.out;
  write_atomic(o.out, "# manifest: " + manifest("gen", args, std::move(config)).dump() + "\n" + points_to_csv(data));
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct DistOptions {
  CommonInput common;
  SampleId from = 0;
  SampleId to = 0;
};

int cmd_dist(const DistOptions& o, std::ostream& out) {
  const Loaded l = load(o.common);
  const DistanceOracle oracle = make_oracle(l.data, l.kind, l.model);
  out << format_real(oracle(o.from, o.to)) << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

/// Arguments recorded in the manifest embedded in `path`.
std::vector<std::string> manifest_args(const std::string& path) {
  const std::string text = read_file(path);
  json m;
  try {
    constexpr std::string_view prefix = "# manifest: ";
    if (text.starts_with(prefix)) {
      m = json::parse(text.substr(prefix.size(), text.find('\n') - prefix.size()));
    } else {
      m = json::parse(text).at("manifest");
    }
    return m.at("args").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ParseError(1, fmt::format("{}: no readable manifest ({})", path, e.what()));
  }
}

int report(std::ostream& err, int code, const std::string& message) {
  err << "repsel: " << message << "\n";
  return code;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Representative selection under a distance threshold"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  SelectOptions sel;
  auto* select = app.add_subcommand("select", "Select representatives and write a solution JSON");
  add_common(select, sel.common);
  select->add_option("--algorithm", sel.algorithm, "delta-medoids | one-shot | k-centers | kmedoids | kmedoids-min-k")
      ->required();
  sel.delta_opt = select->add_option("--delta", sel.delta, "Distance threshold");
  sel.k_opt = select->add_option("--k", sel.k, "Cluster count for kmedoids");
  select->add_option("--seed", sel.seed, "Seed for shuffles and randomized starts");
  select->add_flag("--shuffle", sel.shuffle, "Scan samples in a seeded random order");
  select->add_flag("--merge-refine", sel.merge_refine, "Merge close clusters after each iteration");
  select->add_option("--restarts", sel.restarts, "k-medoids restarts per k in the minimal-k search");
  select->add_option("--max-iterations", sel.max_iterations, "Iteration cap");
  select->add_flag("--timing", sel.timing, "Record wall time (makes output run-dependent)");
  select->add_option("--out", sel.out, "Solution file")->required();

  EvalOptions ev;
  auto* eval = app.add_subcommand("eval", "Check a solution and print its coverage report");
  add_common(eval, ev.common);
  eval->add_option("solution", ev.solution, "Solution JSON")->required();
  ev.delta_opt = eval->add_option("--delta", ev.delta, "Threshold (defaults to the solution's)");

  StabilityCliOptions st;
  auto* stability = app.add_subcommand("stability", "Overlap of representative sets across shuffled runs");
  add_common(stability, st.common);
  stability->add_option("--algorithm", st.algorithm, "Selector")->required();
  stability->add_option("--delta", st.delta, "Distance threshold")->required();
  stability->add_option("--shuffles", st.shuffles, "Number of runs");
  stability->add_option("--seed", st.seed, "Base seed");
  stability->add_option("--bin-width", st.bin_width, "Overlap histogram bin width");
  stability->add_option("--k", st.k, "Fixed k for kmedoids (default: minimal covering k)");
  stability->add_option("--restarts", st.restarts, "Restarts per k in the minimal-k search");
  stability->add_flag("--merge-refine", st.merge_refine, "Merge close clusters after each iteration");
  stability->add_option("--out", st.out, "CSV file (default: stdout)");

  BenchCliOptions be;
  auto* bench = app.add_subcommand("bench", "Run a benchmark grid from a config file");
  bench->add_option("config", be.config, "Benchmark config")->required();
  bench->add_option("--out", be.out, "Results CSV")->required();
  bench->add_option("--svg", be.svg, "Optional SVG plot");
  bench->add_flag("--timing", be.timing, "Record wall time (makes output run-dependent)");

  GenOptions gn;
  auto* gen = app.add_subcommand("gen", "Generate a points CSV");
  gen->add_option("--kind", gn.kind, "gaussian | line | grid")->required();
  gen->add_option("--seed", gn.seed, "Seed");
  gen->add_option("--out", gn.out, "Output CSV")->required();
  gen->add_option("--dims", gn.gaussian.dims, "gaussian: dimensions");
  gen->add_option("--modes", gn.gaussian.modes, "gaussian: mixture components");
  gen->add_option("--per-mode", gn.gaussian.per_mode, "gaussian: samples per component");
  gen->add_option("--mean-min", gn.gaussian.mean_min, "gaussian: lower bound of mode means");
  gen->add_option("--mean-max", gn.gaussian.mean_max, "gaussian: upper bound of mode means");
  gen->add_option("--var-min", gn.gaussian.var_min, "gaussian: lower bound of variances");
  gen->add_option("--var-max", gn.gaussian.var_max, "gaussian: upper bound of variances");
  gn.n_opt = gen->add_option("--n", gn.n, "line: points; gaussian: total samples");
  gen->add_option("--step", gn.step, "line/grid: spacing");
  gen->add_option("--start", gn.start, "line: first coordinate");
  gen->add_option("--rows", gn.rows, "grid: rows");
  gen->add_option("--cols", gn.cols, "grid: columns");

  DistOptions di;
  auto* dist = app.add_subcommand("dist", "Print one distance d(from, to)");
  add_common(dist, di.common);
  dist->add_option("--from", di.from, "Covered sample")->required();
  dist->add_option("--to", di.to, "Candidate representative")->required();

  std::string rerun_file;
  auto* rerun = app.add_subcommand("rerun", "Repeat the command recorded in an output's manifest");
  rerun->add_option("file", rerun_file, "Output file carrying a manifest")->required();

  std::vector<std::string> argv_storage{"repsel"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_storage) argv.push_back(a.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (select->parsed()) return cmd_select(sel, args);
    if (eval->parsed()) return cmd_eval(ev, args, out);
    if (stability->parsed()) return cmd_stability(st, args, out);
    if (bench->parsed()) return cmd_bench(be, args);
    if (gen->parsed()) return cmd_gen(gn, args);
    if (dist->parsed()) return cmd_dist(di, out);
    if (rerun->parsed()) {
      const std::vector<std::string> recorded = manifest_args(rerun_file);
      if (!recorded.empty() && recorded.front() == "rerun") throw UsageError("manifest records a rerun");
      return run_cli(recorded, out, err);
    }
  } catch (const ParseError& e) {
    return report(err, kExitInput, e.what());
  } catch (const ContractViolation& e) {
    return report(err, kExitContract, fmt::format("contract violation: {}", e.what()));
  } catch (const NoCoverError& e) {
    return report(err, kExitNoCover, fmt::format("no cover: {}", e.what()));
  } catch (const std::exception& e) {
    return report(err, kExitInput, e.what());
  }
  return kExitInput;
}

}  // namespace repsel
