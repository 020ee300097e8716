#include "repsel/dataset.hpp"

#include <fmt/format.h>

namespace repsel {

Dataset Dataset::points(std::size_t dims, std::vector<double> row_major) {
  if (dims == 0 && !row_major.empty()) throw ParameterError("points need at least one dimension");
  if (dims > 0 && row_major.size() % dims != 0) {
    throw ParameterError(fmt::format("{} coordinates do not split into rows of {}", row_major.size(), dims));
  }
  Dataset d;
  d.kind_ = DatasetKind::Points;
  d.dims_ = dims;
  d.items_ = std::move(row_major);
  return d;
}

Dataset Dataset::points(const std::vector<std::vector<double>>& rows) {
  const std::size_t dims = rows.empty() ? 0 : rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * dims);
  for (const auto& r : rows) {
    if (r.size() != dims) throw ParameterError(fmt::format("row has {} values, expected {}", r.size(), dims));
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return points(dims, std::move(flat));
}

Dataset Dataset::sequences(std::vector<MusicSegment> segments) {
  Dataset d;
  d.kind_ = DatasetKind::Sequences;
  d.items_ = std::move(segments);
  return d;
}

Dataset Dataset::trajectories(std::vector<Trajectory> trajectories) {
  Dataset d;
  d.kind_ = DatasetKind::Trajectories;
  d.items_ = std::move(trajectories);
  return d;
}

Dataset Dataset::opaque(DistanceMatrix matrix) {
  Dataset d;
  d.kind_ = DatasetKind::Opaque;
  d.items_ = std::move(matrix);
  return d;
}

std::size_t Dataset::size() const noexcept {
  switch (kind_) {
    case DatasetKind::Points: {
      const auto& v = std::get<std::vector<double>>(items_);
      return dims_ == 0 ? 0 : v.size() / dims_;
    }
    case DatasetKind::Sequences: return std::get<std::vector<MusicSegment>>(items_).size();
    case DatasetKind::Trajectories: return std::get<std::vector<Trajectory>>(items_).size();
    case DatasetKind::Opaque: return std::get<DistanceMatrix>(items_).size();
  }
  return 0;
}

std::span<const double> Dataset::point(SampleId i) const {
  const auto& v = std::get<std::vector<double>>(items_);
  if (i >= size()) throw std::out_of_range(fmt::format("point {} out of range", i));
  return std::span<const double>(v).subspan(i * dims_, dims_);
}

const MusicSegment& Dataset::segment(SampleId i) const {
  return std::get<std::vector<MusicSegment>>(items_).at(i);
}

const Trajectory& Dataset::trajectory(SampleId i) const { return std::get<std::vector<Trajectory>>(items_).at(i); }

const DistanceMatrix& Dataset::matrix() const { return std::get<DistanceMatrix>(items_); }

Dataset Dataset::subset(std::span<const SampleId> ids) const {
  for (SampleId id : ids) {
    if (id >= size()) throw std::out_of_range(fmt::format("subset id {} out of range", id));
  }
  switch (kind_) {
    case DatasetKind::Points: {
      std::vector<double> flat;
      flat.reserve(ids.size() * dims_);
      for (SampleId id : ids) {
        const auto p = point(id);
        flat.insert(flat.end(), p.begin(), p.end());
      }
      return points(dims_, std::move(flat));
    }
    case DatasetKind::Sequences: {
      std::vector<MusicSegment> out;
      for (SampleId id : ids) out.push_back(segment(id));
      return sequences(std::move(out));
    }
    case DatasetKind::Trajectories: {
      std::vector<Trajectory> out;
      for (SampleId id : ids) out.push_back(trajectory(id));
      return trajectories(std::move(out));
    }
    case DatasetKind::Opaque: return opaque(matrix().subset(ids));
  }
  return {};
}

DistanceKind parse_distance_kind(const std::string& name) {
  if (name == "euclidean") return DistanceKind::Euclidean;
  if (name == "precomputed") return DistanceKind::Precomputed;
  if (name == "music") return DistanceKind::Music;
  if (name == "trajectory") return DistanceKind::Trajectory;
  throw ParameterError(fmt::format("unknown distance '{}'", name));
}

std::string to_string(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::Euclidean: return "euclidean";
    case DistanceKind::Precomputed: return "precomputed";
    case DistanceKind::Music: return "music";
    case DistanceKind::Trajectory: return "trajectory";
  }
  return "unknown";
}

namespace {

DatasetKind required_kind(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::Euclidean: return DatasetKind::Points;
    case DistanceKind::Precomputed: return DatasetKind::Opaque;
    case DistanceKind::Music: return DatasetKind::Sequences;
    case DistanceKind::Trajectory: return DatasetKind::Trajectories;
  }
  return DatasetKind::Opaque;
}

PairwiseFunction pairwise(std::shared_ptr<const Dataset> data, DistanceKind kind, const DistanceModelConfig& model) {
  switch (kind) {
    case DistanceKind::Euclidean:
      return [data](SampleId a, SampleId b) { return euclidean_distance(data->point(a), data->point(b)); };
    case DistanceKind::Music:
      return [data, m = model.music](SampleId a, SampleId b) {
        return music_distance(data->segment(a), data->segment(b), m);
      };
    case DistanceKind::Trajectory:
      return [data, m = model.trajectory](SampleId a, SampleId b) {
        return trajectory_distance(data->trajectory(a), data->trajectory(b), m);
      };
    case DistanceKind::Precomputed:
      return [data](SampleId a, SampleId b) { return data->matrix().at(a, b); };
  }
  return {};
}

}  // namespace

DistanceOracle make_oracle(std::shared_ptr<const Dataset> data, DistanceKind kind, const DistanceModelConfig& model,
                           CachePolicy policy) {
  if (!data) throw ParameterError("make_oracle: null dataset");
  if (data->kind() != required_kind(kind)) {
    throw ParameterError(fmt::format("distance '{}' does not apply to this dataset kind", to_string(kind)));
  }
  if (kind == DistanceKind::Precomputed) return DistanceOracle::from_matrix(data->matrix());
  const std::size_t n = data->size();
  return DistanceOracle::from_function(n, pairwise(std::move(data), kind, model), policy);
}

DistanceMatrix materialize(const Dataset& data, DistanceKind kind, const DistanceModelConfig& model) {
  if (data.kind() != required_kind(kind)) {
    throw ParameterError(fmt::format("distance '{}' does not apply to this dataset kind", to_string(kind)));
  }
  if (kind == DistanceKind::Precomputed) return data.matrix();
  // Non-owning alias: the function does not outlive this call.
  auto alias = std::shared_ptr<const Dataset>(std::shared_ptr<const Dataset>{}, &data);
  const auto fn = pairwise(alias, kind, model);
  const std::size_t n = data.size();
  std::vector<double> values(n * n);
  parallel_for(n, configured_threads(), [&](std::size_t i) {
    for (std::size_t j = 0; j < n; ++j) values[i * n + j] = fn(i, j);
  });
  return DistanceMatrix(n, std::move(values));
}

}  // namespace repsel
