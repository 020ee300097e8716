#include "repsel/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>

#include <fmt/format.h>

#include "repsel/config.hpp"

namespace repsel {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

namespace {

/// Calls fn(line_number, line) for every non-blank, non-comment line.
template <typename Fn>
void for_each_line(std::string_view text, Fn&& fn) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t end = text.find('\n');
    std::string_view line = text.substr(0, end);
    text = end == std::string_view::npos ? std::string_view{} : text.substr(end + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    fn(line_no, t);
  }
}

std::vector<double> parse_row(std::size_t line_no, const std::string& line) {
  std::vector<double> row;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    const std::string cell = trim(std::string_view(line).substr(start, comma - start));
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size()) {
      throw ParseError(line_no, fmt::format("expected a number, got '{}'", cell));
    }
    row.push_back(v);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return row;
}

std::vector<std::vector<double>> parse_table(std::string_view text) {
  std::vector<std::vector<double>> rows;
  for_each_line(text, [&](std::size_t line_no, const std::string& line) {
    rows.push_back(parse_row(line_no, line));
    if (rows.back().size() != rows.front().size()) {
      throw ParseError(line_no, fmt::format("row has {} values, expected {}", rows.back().size(),
                                            rows.front().size()));
    }
  });
  return rows;
}

json parse_json_line(std::size_t line_no, const std::string& line) {
  try {
    json doc = json::parse(line);
    if (!doc.is_object()) throw ParseError(line_no, "expected a JSON object");
    return doc;
  } catch (const json::exception& e) {
    throw ParseError(line_no, e.what());
  }
}

template <typename T>
T field(std::size_t line_no, const json& doc, const char* key) {
  if (!doc.contains(key)) throw ParseError(line_no, fmt::format("missing field '{}'", key));
  try {
    return doc.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(line_no, fmt::format("field '{}': {}", key, e.what()));
  }
}

}  // namespace

Dataset parse_points_csv(std::string_view text) {
  const auto rows = parse_table(text);
  if (rows.empty()) return Dataset::points(1, {});
  return Dataset::points(rows);
}

Dataset parse_matrix_csv(std::string_view text) {
  const auto rows = parse_table(text);
  const std::size_t n = rows.size();
  std::vector<double> flat;
  flat.reserve(n * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw ParseError(0, fmt::format("matrix has {} rows but {} columns", n, r.size()));
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return Dataset::opaque(DistanceMatrix(n, std::move(flat)));
}

Dataset parse_sequences_jsonl(std::string_view text) {
  std::vector<MusicSegment> segments;
  for_each_line(text, [&](std::size_t line_no, const std::string& line) {
    const json doc = parse_json_line(line_no, line);
    auto pitches = field<std::vector<int>>(line_no, doc, "pitches");
    auto durations = field<std::vector<double>>(line_no, doc, "durations");
    const int transpose = doc.contains("transpose") ? field<int>(line_no, doc, "transpose") : 0;
    try {
      segments.emplace_back(std::move(pitches), std::move(durations), transpose);
    } catch (const ParameterError& e) {
      throw ParseError(line_no, e.what());
    }
  });
  return Dataset::sequences(std::move(segments));
}

Dataset parse_trajectories_jsonl(std::string_view text, double resolution) {
  std::vector<Trajectory> trajectories;
  for_each_line(text, [&](std::size_t line_no, const std::string& line) {
    const json doc = parse_json_line(line_no, line);
    const auto raw = field<std::vector<std::vector<double>>>(line_no, doc, "points");
    std::vector<Point2> points;
    for (const auto& p : raw) {
      if (p.size() != 2) throw ParseError(line_no, "every point needs exactly two coordinates");
      points.push_back({p[0], p[1]});
    }
    const double rotate = doc.contains("rotate") ? field<double>(line_no, doc, "rotate") : 0.0;
    try {
      trajectories.emplace_back(std::move(points), rotate, resolution);
    } catch (const ParameterError& e) {
      throw ParseError(line_no, e.what());
    }
  });
  return Dataset::trajectories(std::move(trajectories));
}

Dataset load_dataset(const std::string& path, DistanceKind kind, const DistanceModelConfig& model) {
  const std::string text = read_file(path);
  switch (kind) {
    case DistanceKind::Euclidean: return parse_points_csv(text);
    case DistanceKind::Precomputed: return parse_matrix_csv(text);
    case DistanceKind::Music: return parse_sequences_jsonl(text);
    case DistanceKind::Trajectory: return parse_trajectories_jsonl(text, model.trajectory.resolution);
  }
  throw ParameterError("unknown distance kind");
}

std::string points_to_csv(const Dataset& points) {
  std::string out;
  for (SampleId i = 0; i < points.size(); ++i) {
    const auto p = points.point(i);
    for (std::size_t d = 0; d < p.size(); ++d) {
      if (d) out += ',';
      out += format_real(p[d]);
    }
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------

ordered_json solution_to_json(const RepresentativeSolution& solution, const std::string& algorithm, bool timing) {
  ordered_json doc;
  doc["delta"] = solution.delta ? ordered_json(*solution.delta) : ordered_json(nullptr);
  doc["algorithm"] = algorithm;
  doc["representatives"] = solution.representatives;
  ordered_json assignment = ordered_json::object();
  for (SampleId x = 0; x < solution.size(); ++x) assignment[std::to_string(x)] = solution.assignment[x];
  doc["assignment"] = std::move(assignment);
  ordered_json stats;
  stats["iterations"] = solution.stats.iterations;
  stats["distance_evals"] = solution.stats.distance_evaluations;
  stats["wall_ms"] = timing ? ordered_json(solution.stats.wall_ms) : ordered_json(nullptr);
  stats["converged"] = solution.stats.converged;
  doc["stats"] = std::move(stats);
  return doc;
}

RepresentativeSolution solution_from_json(const json& doc, std::size_t n) {
  RepresentativeSolution sol;
  try {
    if (doc.contains("delta") && !doc.at("delta").is_null()) sol.delta = doc.at("delta").get<double>();
    sol.representatives = doc.at("representatives").get<std::vector<SampleId>>();
    const json& assignment = doc.at("assignment");
    if (!assignment.is_object()) throw ParameterError("assignment must be an object");
    sol.assignment.assign(n, 0);
    std::vector<bool> seen(n, false);
    for (const auto& [key, value] : assignment.items()) {
      std::size_t id = 0;
      const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), id);
      if (ec != std::errc{} || ptr != key.data() + key.size() || id >= n) {
        throw ParameterError(fmt::format("assignment id '{}' is not a sample of the input", key));
      }
      const auto rep = value.get<SampleId>();
      if (rep >= n) throw ParameterError(fmt::format("sample {} assigned to unknown id {}", id, rep));
      sol.assignment[id] = rep;
      seen[id] = true;
    }
    if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      throw ParameterError(fmt::format("assignment does not cover all {} samples", n));
    }
  } catch (const json::exception& e) {
    throw ParameterError(fmt::format("malformed solution: {}", e.what()));
  }
  for (SampleId r : sol.representatives) {
    if (r >= n) throw ParameterError(fmt::format("representative {} is not a sample of the input", r));
  }
  return sol;
}

ordered_json coverage_to_json(const CoverageReport& report) {
  ordered_json doc;
  doc["delta"] = report.delta;
  doc["representative_count"] = report.representative_count;
  doc["max_distance"] = report.max_distance;
  doc["average_distance"] = report.average_distance;
  ordered_json violations = ordered_json::array();
  for (const Violation& v : report.violations) {
    violations.push_back(ordered_json{{"sample", v.sample}, {"distance", v.distance}});
  }
  doc["violations"] = std::move(violations);
  doc["legal"] = report.legal();
  return doc;
}

// ---------------------------------------------------------------------------

namespace {

std::string manifest_line(const ordered_json& manifest) { return "# manifest: " + manifest.dump() + "\n"; }

std::string pair_cell(const MeanError& m) { return format_real(m.mean) + "|" + format_real(m.stderr_); }

}  // namespace

std::string stability_to_csv(const StabilityReport& report, const ordered_json& manifest) {
  std::string out = manifest_line(manifest);
  out += "row,a,b,value\n";
  for (const PairOverlap& p : report.pairs) out += fmt::format("pair,{},{},{}\n", p.first, p.second, format_real(p.overlap));
  for (std::size_t b = 0; b < report.histogram.size(); ++b) {
    const double lo = static_cast<double>(b) * report.bin_width;
    const double hi = std::min(1.0, static_cast<double>(b + 1) * report.bin_width);
    out += fmt::format("bin,{},{},{}\n", format_real(lo), format_real(hi), report.histogram[b]);
  }
  out += fmt::format("summary,,,{}\n", format_real(report.mean_overlap));
  return out;
}

std::string bench_to_csv(const BenchResult& result, const ordered_json& manifest, bool timing) {
  std::string out = manifest_line(manifest);
  out += "dataset,algorithm,delta,repetition,seed,subset_size,rep_count,rep_pct,avg_dist,max_dist,dist_evals,wall_ms\n";
  for (std::size_t cell = 0; cell < result.summaries.size(); ++cell) {
    const BenchSummary& s = result.summaries[cell];
    for (std::size_t row = cell * result.repetitions; row < (cell + 1) * result.repetitions; ++row) {
      const BenchRow& r = result.rows[row];
      if (!r.flag.empty()) {
        out += fmt::format("# flagged: {},{},{},{}: {}\n", r.dataset, to_string(r.algorithm), format_real(r.delta),
                           r.repetition, r.flag);
      }
      out += fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", r.dataset, to_string(r.algorithm),
                         format_real(r.delta), r.repetition, r.seed, r.subset_size, r.rep_count,
                         format_real(r.rep_pct), format_real(r.avg_dist), format_real(r.max_dist), r.dist_evals,
                         timing ? format_real(r.wall_ms) : std::string{});
    }
    out += fmt::format("{},{},{},summary,,{},{},{},{},{},{},{}\n", s.dataset, to_string(s.algorithm),
                       format_real(s.delta), s.subset_size, pair_cell(s.rep_count), pair_cell(s.rep_pct),
                       pair_cell(s.avg_dist), pair_cell(s.max_dist), pair_cell(s.dist_evals),
                       timing ? pair_cell(s.wall_ms) : std::string{});
  }
  return out;
}

std::string bench_to_svg(const BenchResult& result) {
  constexpr double width = 640, height = 400, margin = 50;
  double dmin = 0, dmax = 1, pmax = 1;
  if (!result.summaries.empty()) {
    dmin = dmax = result.summaries.front().delta;
    for (const BenchSummary& s : result.summaries) {
      dmin = std::min(dmin, s.delta);
      dmax = std::max(dmax, s.delta);
      pmax = std::max(pmax, s.rep_pct.mean);
    }
  }
  if (dmax == dmin) dmax = dmin + 1;
  const auto sx = [&](double d) { return margin + (d - dmin) / (dmax - dmin) * (width - 2 * margin); };
  const auto sy = [&](double p) { return height - margin - p / pmax * (height - 2 * margin); };

  std::map<std::string, std::vector<const BenchSummary*>> series;
  std::vector<std::string> order;
  for (const BenchSummary& s : result.summaries) {
    const std::string key = s.dataset + " / " + to_string(s.algorithm);
    if (!series.contains(key)) order.push_back(key);
    series[key].push_back(&s);
  }

  static constexpr const char* colors[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02"};
  std::string out = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{0}\" height=\"{1}\" viewBox=\"0 0 {0} {1}\">\n"
      "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      "<line x1=\"{2}\" y1=\"{3}\" x2=\"{4}\" y2=\"{3}\" stroke=\"black\"/>\n"
      "<line x1=\"{2}\" y1=\"{2}\" x2=\"{2}\" y2=\"{3}\" stroke=\"black\"/>\n"
      "<text x=\"{5}\" y=\"{6}\" text-anchor=\"middle\" font-size=\"12\">delta</text>\n"
      "<text x=\"14\" y=\"{7}\" font-size=\"12\" transform=\"rotate(-90 14 {7})\">representatives (%)</text>\n",
      width, height, margin, height - margin, width - margin, width / 2, height - 15, height / 2);
  for (std::size_t i = 0; i < order.size(); ++i) {
    const char* color = colors[i % std::size(colors)];
    std::string pts;
    for (const BenchSummary* s : series[order[i]]) {
      pts += fmt::format("{:.2f},{:.2f} ", sx(s->delta), sy(s->rep_pct.mean));
      out += fmt::format("<circle cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"3\" fill=\"{}\"/>\n", sx(s->delta),
                         sy(s->rep_pct.mean), color);
    }
    out += fmt::format("<polyline fill=\"none\" stroke=\"{}\" points=\"{}\"/>\n", color, pts);
    out += fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"11\" fill=\"{}\">{}</text>\n", width - margin - 150,
                       margin + 14 * static_cast<double>(i), color, order[i]);
  }
  out += "</svg>\n";
  return out;
}

void write_atomic(const std::string& path, std::string_view content) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error(fmt::format("cannot write {}", tmp.string()));
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    f.flush();
    if (!f) {
      f.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error(fmt::format("short write to {}", tmp.string()));
    }
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace repsel
