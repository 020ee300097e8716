#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "repsel/core.hpp"
#include "repsel/distances.hpp"

namespace repsel {

enum class DatasetKind { Points, Sequences, Trajectories, Opaque };

/// Samples of a single kind in canonical (ingestion) order. Opaque datasets
/// carry only their precomputed dissimilarity matrix.
class Dataset {
public:
  Dataset() = default;

  static Dataset points(std::size_t dims, std::vector<double> row_major);
  static Dataset points(const std::vector<std::vector<double>>& rows);
  static Dataset sequences(std::vector<MusicSegment> segments);
  static Dataset trajectories(std::vector<Trajectory> trajectories);
  static Dataset opaque(DistanceMatrix matrix);

  [[nodiscard]] DatasetKind kind() const noexcept { return kind_; }
  [[nodiscard]] std::size_t size() const noexcept;
  [[nodiscard]] std::size_t dims() const noexcept { return dims_; }

  [[nodiscard]] std::span<const double> point(SampleId i) const;
  [[nodiscard]] const MusicSegment& segment(SampleId i) const;
  [[nodiscard]] const Trajectory& trajectory(SampleId i) const;
  [[nodiscard]] const DistanceMatrix& matrix() const;

  /// New dataset holding `ids` in the given order.
  [[nodiscard]] Dataset subset(std::span<const SampleId> ids) const;

private:
  DatasetKind kind_ = DatasetKind::Points;
  std::size_t dims_ = 0;
  std::variant<std::vector<double>, std::vector<MusicSegment>, std::vector<Trajectory>, DistanceMatrix> items_;
};

enum class DistanceKind { Euclidean, Precomputed, Music, Trajectory };

DistanceKind parse_distance_kind(const std::string& name);
std::string to_string(DistanceKind kind);

/// Oracle bound to `data`. The distance kind must match the dataset kind.
DistanceOracle make_oracle(std::shared_ptr<const Dataset> data, DistanceKind kind,
                           const DistanceModelConfig& model = {}, CachePolicy policy = {});

/// Evaluates every ordered pair. Intended for small inputs and test fixtures.
DistanceMatrix materialize(const Dataset& data, DistanceKind kind, const DistanceModelConfig& model = {});

}  // namespace repsel
