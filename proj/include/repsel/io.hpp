#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "repsel/core.hpp"
#include "repsel/dataset.hpp"
#include "repsel/eval.hpp"

namespace repsel {

/// 17 significant digits, enough to round-trip any double.
std::string format_real(double v);

// Inputs. Every parser throws ParseError with the offending 1-based line.
// Blank lines and lines starting with '#' are skipped.

/// Headerless CSV of reals, one row per sample.
Dataset parse_points_csv(std::string_view text);
/// Square CSV matrix; entry (i, j) is d(i -> j).
Dataset parse_matrix_csv(std::string_view text);
/// JSON lines {"id": ..., "pitches": [int...], "durations": [real...], "transpose": int?}.
Dataset parse_sequences_jsonl(std::string_view text);
/// JSON lines {"id": ..., "points": [[x, y]...], "rotate": radians?}.
Dataset parse_trajectories_jsonl(std::string_view text, double resolution = 5.0);

/// Reads `path` with the parser matching `kind`.
Dataset load_dataset(const std::string& path, DistanceKind kind, const DistanceModelConfig& model = {});

std::string points_to_csv(const Dataset& points);

// Solutions.

/// {delta, algorithm, representatives, assignment, stats}. wall_ms is null
/// unless `timing` is set, so repeated runs serialize identically.
nlohmann::ordered_json solution_to_json(const RepresentativeSolution& solution, const std::string& algorithm,
                                        bool timing);

/// Reads representatives and assignment back. Throws ParameterError when an
/// id falls outside [0, n) or the assignment is not total.
RepresentativeSolution solution_from_json(const nlohmann::json& doc, std::size_t n);

nlohmann::ordered_json coverage_to_json(const CoverageReport& report);

// Tables. `manifest` is emitted as a leading "# manifest: " comment line.

std::string stability_to_csv(const StabilityReport& report, const nlohmann::ordered_json& manifest);
std::string bench_to_csv(const BenchResult& result, const nlohmann::ordered_json& manifest, bool timing);
/// Mean representative percentage against delta, one polyline per
/// (dataset, algorithm).
std::string bench_to_svg(const BenchResult& result);

/// Writes to a sibling temporary file and renames it over `path`.
void write_atomic(const std::string& path, std::string_view content);

}  // namespace repsel
