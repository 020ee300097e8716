#include "repsel/distances.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "repsel/config.hpp"
#include "repsel/core.hpp"

namespace repsel {

double euclidean_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw ParameterError(fmt::format("dimension mismatch: {} vs {}", p.size(), q.size()));
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - q[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

// ---------------------------------------------------------------------------
// Music
// ---------------------------------------------------------------------------

double music_substitution_cost(int a, int b, bool fold_octaves) {
  if (a == b) return 0.0;
  const int diff = std::abs(a - b);
  const int interval = fold_octaves ? diff % 12 : diff;
  if (interval == 3 || interval == 4 || interval == 7) return 1.0;
  return std::pow(1.3, static_cast<double>(diff) / 4.0);
}

SubstitutionModel<int> music_substitution_model(const MusicModel& model) {
  const bool fold = model.fold_octaves;
  return SubstitutionModel<int>{[fold](const int& a, const int& b) { return music_substitution_cost(a, b, fold); },
                                model.gap, model.reward_offset};
}

MusicBags music_features(std::span<const int> pitches, std::span<const double> durations) {
  if (pitches.empty() || pitches.size() != durations.size()) {
    throw ParameterError(fmt::format("music segment needs matching non-empty pitches/durations ({} vs {})",
                                     pitches.size(), durations.size()));
  }
  MusicBags bags;
  for (std::size_t i = 0; i < pitches.size(); ++i) {
    bags.pitch.add(pitches[i]);
    bags.pitch_class.add(((pitches[i] % 12) + 12) % 12);
    if (i + 1 < pitches.size()) {
      const int step = pitches[i + 1] - pitches[i];
      bags.step.add(step);
      bags.interval.add(std::abs(step));
      bags.rhythm.add(RhythmPattern{durations[i], durations[i + 1]});
    }
  }
  return bags;
}

MusicSegment::MusicSegment(std::vector<int> pitches, std::vector<double> durations, int transpose)
    : pitches_(std::move(pitches)), durations_(std::move(durations)) {
  for (int& p : pitches_) p += transpose;
  for (double d : durations_) {
    if (!(d > 0.0)) throw ParameterError(fmt::format("durations must be positive, got {}", d));
  }
  bags_ = music_features(pitches_, durations_);
}

MusicDistanceParts music_distance_parts(const MusicSegment& a, const MusicSegment& b, const MusicModel& model) {
  const auto sub = music_substitution_model(model);
  const std::span<const int> pa = a.pitches();
  const std::span<const int> pb = b.pitches();
  MusicDistanceParts p;
  p.global = global_alignment(pa, pb, sub);
  p.local = local_alignment(pa, pb, sub);
  p.rhythm = bag_distance(a.bags().rhythm, b.bags().rhythm);
  p.interval = bag_distance(a.bags().interval, b.bags().interval);
  p.step = bag_distance(a.bags().step, b.bags().step);
  p.pitch = bag_distance(a.bags().pitch, b.bags().pitch);
  p.pitch_class = bag_distance(a.bags().pitch_class, b.bags().pitch_class);
  p.score_bag = p.rhythm * p.rhythm + p.interval * p.interval + p.step * p.step + p.pitch * p.pitch +
                p.pitch_class * p.pitch_class;
  p.score_alignment = p.global * p.global + model.local_weight * p.local * p.local;
  p.distance = std::sqrt(model.bag_weight * p.score_bag + p.score_alignment);
  return p;
}

double music_distance(const MusicSegment& a, const MusicSegment& b, const MusicModel& model) {
  return music_distance_parts(a, b, model).distance;
}

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

std::string to_string(TurnBin bin) {
  switch (bin) {
    case TurnBin::Forward: return "forward";
    case TurnBin::UpperRight: return "upper-right";
    case TurnBin::LowerRight: return "lower-right";
    case TurnBin::Backward: return "backward";
    case TurnBin::LowerLeft: return "lower-left";
    case TurnBin::UpperLeft: return "upper-left";
  }
  return "unknown";
}

TurnBin turn_bin(double degrees) {
  const double mag = std::abs(degrees);
  const bool right = degrees > 0.0;
  if (mag <= 30.0) return TurnBin::Forward;
  if (mag <= 90.0) return right ? TurnBin::UpperRight : TurnBin::UpperLeft;
  if (mag <= 150.0) return right ? TurnBin::LowerRight : TurnBin::LowerLeft;
  return TurnBin::Backward;
}

namespace {

constexpr double kPi = std::numbers::pi;

double heading_degrees(const Point2& v) { return std::atan2(v.y, v.x) * 180.0 / kPi; }

/// Clockwise turn from `from` to `to`, wrapped to (-180, 180].
double clockwise_turn(const Point2& from, const Point2& to) {
  double t = heading_degrees(from) - heading_degrees(to);
  while (t <= -180.0) t += 360.0;
  while (t > 180.0) t -= 360.0;
  return t;
}

int quantize(double length, double resolution) {
  const double steps = std::floor(length / resolution + 0.5);
  return static_cast<int>(std::llround(steps * resolution));
}

}  // namespace

TrajectoryFeatures trajectory_features(std::span<const Point2> points, double resolution) {
  if (points.size() < 2) {
    throw ParameterError(fmt::format("trajectory needs at least 2 points, got {}", points.size()));
  }
  if (!(resolution > 0.0)) throw ParameterError("quantization resolution must be positive");
  TrajectoryFeatures f;
  std::vector<Point2> moves;
  moves.reserve(points.size() - 1);
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    const Point2 m{points[i + 1].x - points[i].x, points[i + 1].y - points[i].y};
    const double len = std::sqrt(m.x * m.x + m.y * m.y);
    f.total_length += len;
    if (len > 0.0) moves.push_back(m);
  }
  for (std::size_t i = 0; i + 1 < moves.size(); ++i) {
    const double len = std::sqrt(moves[i].x * moves[i].x + moves[i].y * moves[i].y);
    f.bag.add(MovementTurn{quantize(len, resolution), turn_bin(clockwise_turn(moves[i], moves[i + 1]))});
  }
  const Point2 net{points.back().x - points.front().x, points.back().y - points.front().y};
  f.net_angle = (net.x == 0.0 && net.y == 0.0) ? 0.0 : std::atan2(net.y, net.x);
  return f;
}

Trajectory::Trajectory(std::vector<Point2> points, double rotate, double resolution)
    : points_(std::move(points)), resolution_(resolution) {
  if (points_.size() < 2) {
    throw ParameterError(fmt::format("trajectory needs at least 2 points, got {}", points_.size()));
  }
  const Point2 origin = points_.front();
  const double c = std::cos(rotate);
  const double s = std::sin(rotate);
  for (Point2& p : points_) {
    const double x = p.x - origin.x;
    const double y = p.y - origin.y;
    if (rotate == 0.0) {
      p = {x, y};
    } else {
      p = {c * x - s * y, s * x + c * y};
    }
  }
  features_ = trajectory_features(points_, resolution_);
}

double point_cost(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

SubstitutionModel<Point2> trajectory_substitution_model(const TrajectoryModel& model) {
  return SubstitutionModel<Point2>{point_cost, model.gap, model.reward_offset};
}

TrajectoryDistanceParts trajectory_distance_parts(const Trajectory& a, const Trajectory& b,
                                                  const TrajectoryModel& model) {
  if (a.points().size() != b.points().size()) {
    throw ParameterError(
        fmt::format("trajectory length mismatch: {} vs {}", a.points().size(), b.points().size()));
  }
  const auto sub = trajectory_substitution_model(model);
  const std::span<const Point2> pa = a.points();
  const std::span<const Point2> pb = b.points();

  const TrajectoryFeatures fa =
      a.resolution() == model.resolution ? a.features() : trajectory_features(pa, model.resolution);
  const TrajectoryFeatures fb =
      b.resolution() == model.resolution ? b.features() : trajectory_features(pb, model.resolution);

  TrajectoryDistanceParts p;
  p.global = global_alignment(pa, pb, sub);
  p.local = local_alignment(pa, pb, sub);
  const double bag = bag_distance(fa.bag, fb.bag);
  p.score_bag = bag * bag;
  p.delta_distance = std::abs(fa.total_length - fb.total_length);
  double da = std::fmod(std::abs(fa.net_angle - fb.net_angle), 2.0 * kPi);
  if (da > kPi) da = 2.0 * kPi - da;
  p.delta_angle = da;
  p.score_align = p.global * p.global + model.local_weight * p.local * p.local;
  const double weighted_angle = model.angle_weight * p.delta_angle;
  p.score_overall = p.delta_distance * p.delta_distance + weighted_angle * weighted_angle;
  p.distance = std::sqrt(model.bag_weight * p.score_bag + p.score_align) + p.score_overall;
  return p;
}

double trajectory_distance(const Trajectory& a, const Trajectory& b, const TrajectoryModel& model) {
  return trajectory_distance_parts(a, b, model).distance;
}

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

bool DistanceModelConfig::apply(const KeyValue& kv) {
  const auto non_negative = [&kv] {
    const double v = parse_double(kv);
    if (!(v >= 0.0)) throw ParseError(kv.line, fmt::format("'{}' must be non-negative", kv.key));
    return v;
  };
  if (kv.key == "music.gap") music.gap = non_negative();
  else if (kv.key == "music.reward_offset") music.reward_offset = non_negative();
  else if (kv.key == "music.bag_weight") music.bag_weight = non_negative();
  else if (kv.key == "music.local_weight") music.local_weight = non_negative();
  else if (kv.key == "music.fold_octaves") music.fold_octaves = parse_bool(kv);
  else if (kv.key == "trajectory.gap") trajectory.gap = non_negative();
  else if (kv.key == "trajectory.reward_offset") trajectory.reward_offset = non_negative();
  else if (kv.key == "trajectory.bag_weight") trajectory.bag_weight = non_negative();
  else if (kv.key == "trajectory.local_weight") trajectory.local_weight = non_negative();
  else if (kv.key == "trajectory.angle_weight") trajectory.angle_weight = non_negative();
  else if (kv.key == "trajectory.resolution") {
    trajectory.resolution = non_negative();
    if (trajectory.resolution == 0.0) throw ParseError(kv.line, "trajectory.resolution must be positive");
  } else {
    return false;
  }
  return true;
}

DistanceModelConfig DistanceModelConfig::parse(const std::string& text) {
  DistanceModelConfig cfg;
  for (const KeyValue& kv : parse_key_values(text)) {
    if (!cfg.apply(kv)) throw ParseError(kv.line, fmt::format("unknown distance-model key '{}'", kv.key));
  }
  return cfg;
}

DistanceModelConfig DistanceModelConfig::load(const std::string& path) { return parse(read_file(path)); }

}  // namespace repsel
