#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "repsel/config.hpp"

namespace repsel {

// ---------------------------------------------------------------------------
// Bags
// ---------------------------------------------------------------------------

/// Multiset of discrete tokens. Iteration order is the token order, so every
/// derived quantity is deterministic.
template <class Token>
class Bag {
public:
  Bag() = default;
  Bag(std::initializer_list<Token> tokens) {
    for (const Token& t : tokens) add(t);
  }

  void add(const Token& t, std::size_t times = 1) {
    if (times > 0) counts_[t] += times;
  }
  [[nodiscard]] std::size_t count(const Token& t) const {
    auto it = counts_.find(t);
    return it == counts_.end() ? 0 : it->second;
  }
  [[nodiscard]] std::size_t size() const {
    std::size_t total = 0;
    for (const auto& [t, c] : counts_) total += c;
    return total;
  }
  [[nodiscard]] bool empty() const { return counts_.empty(); }
  [[nodiscard]] const std::map<Token, std::size_t>& counts() const { return counts_; }

  friend bool operator==(const Bag&, const Bag&) = default;

private:
  std::map<Token, std::size_t> counts_;
};

/// |A symmetric-difference B| / |A union B| over multiplicities (union takes
/// the per-token max, the difference the per-token absolute gap). Two empty
/// bags are at distance 0.
template <class Token>
double bag_distance(const Bag<Token>& a, const Bag<Token>& b) {
  std::size_t diff = 0;
  std::size_t uni = 0;
  auto ia = a.counts().begin();
  auto ib = b.counts().begin();
  const auto ea = a.counts().end();
  const auto eb = b.counts().end();
  while (ia != ea || ib != eb) {
    if (ib == eb || (ia != ea && ia->first < ib->first)) {
      diff += ia->second;
      uni += ia->second;
      ++ia;
    } else if (ia == ea || ib->first < ia->first) {
      diff += ib->second;
      uni += ib->second;
      ++ib;
    } else {
      const std::size_t x = ia->second;
      const std::size_t y = ib->second;
      diff += x > y ? x - y : y - x;
      uni += std::max(x, y);
      ++ia;
      ++ib;
    }
  }
  if (uni == 0) return 0.0;
  return static_cast<double>(diff) / static_cast<double>(uni);
}

// ---------------------------------------------------------------------------
// Alignment
// ---------------------------------------------------------------------------

template <class T>
struct SubstitutionModel {
  std::function<double(const T&, const T&)> cost;
  double gap = 1.0;
  /// Per-pair reward offset c0 for local alignment; defaults to the gap penalty.
  std::optional<double> reward_offset;

  [[nodiscard]] double offset() const { return reward_offset.value_or(gap); }
};

/// Minimum-cost end-to-end alignment (Needleman-Wunsch). Two rolling rows.
template <class T>
double global_alignment(std::span<const T> s, std::span<const T> t, const SubstitutionModel<T>& model) {
  const std::size_t m = t.size();
  std::vector<double> prev(m + 1);
  std::vector<double> cur(m + 1);
  prev[0] = 0.0;
  for (std::size_t j = 1; j <= m; ++j) prev[j] = prev[j - 1] + model.gap;
  for (std::size_t i = 1; i <= s.size(); ++i) {
    cur[0] = prev[0] + model.gap;
    for (std::size_t j = 1; j <= m; ++j) {
      const double diag = prev[j - 1] + model.cost(s[i - 1], t[j - 1]);
      const double up = prev[j] + model.gap;
      const double left = cur[j - 1] + model.gap;
      cur[j] = std::min(diag, std::min(up, left));
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

/// Best local-alignment similarity H* (Smith-Waterman) with pair reward
/// c0 - cost(a, b), gap reward -gap, and a zero floor per cell.
template <class T>
double local_alignment_score(std::span<const T> s, std::span<const T> t, const SubstitutionModel<T>& model) {
  const double c0 = model.offset();
  const std::size_t m = t.size();
  std::vector<double> prev(m + 1, 0.0);
  std::vector<double> cur(m + 1, 0.0);
  double best = 0.0;
  for (std::size_t i = 1; i <= s.size(); ++i) {
    cur[0] = 0.0;
    for (std::size_t j = 1; j <= m; ++j) {
      const double diag = prev[j - 1] + (c0 - model.cost(s[i - 1], t[j - 1]));
      const double up = prev[j] - model.gap;
      const double left = cur[j - 1] - model.gap;
      cur[j] = std::max(0.0, std::max(diag, std::max(up, left)));
      best = std::max(best, cur[j]);
    }
    std::swap(prev, cur);
  }
  return best;
}

/// Local alignment as a bounded distance, 1 / (1 + H*), in (0, 1].
template <class T>
double local_alignment(std::span<const T> s, std::span<const T> t, const SubstitutionModel<T>& model) {
  return 1.0 / (1.0 + local_alignment_score(s, t, model));
}

// ---------------------------------------------------------------------------
// Points
// ---------------------------------------------------------------------------

/// L2 norm of p - q; throws ParameterError on dimension mismatch.
double euclidean_distance(std::span<const double> p, std::span<const double> q);

// ---------------------------------------------------------------------------
// Music segments
// ---------------------------------------------------------------------------

struct MusicModel {
  double gap = 1.5;
  std::optional<double> reward_offset;  // c0, defaults to gap
  double bag_weight = 10.0;
  double local_weight = 2.0;
  /// When true, thirds and fifths are recognised modulo the octave
  /// (compound intervals); by default only the simple intervals count.
  bool fold_octaves = false;
};

/// 0 for identical pitches, 1 for a third (3 or 4 semitones) or fifth
/// (7 semitones), otherwise 1.3^(|a-b|/4).
double music_substitution_cost(int a, int b, bool fold_octaves = false);

SubstitutionModel<int> music_substitution_model(const MusicModel& model = {});

using RhythmPattern = std::pair<double, double>;

struct MusicBags {
  Bag<int> pitch;
  Bag<int> pitch_class;
  Bag<int> interval;  // |step|
  Bag<int> step;      // signed pitch difference
  Bag<RhythmPattern> rhythm;

  friend bool operator==(const MusicBags&, const MusicBags&) = default;
};

/// A melodic segment: MIDI pitches with durations in beats, plus derived bags.
class MusicSegment {
public:
  /// `transpose` is added to every pitch before features are derived.
  MusicSegment(std::vector<int> pitches, std::vector<double> durations, int transpose = 0);

  [[nodiscard]] const std::vector<int>& pitches() const { return pitches_; }
  [[nodiscard]] const std::vector<double>& durations() const { return durations_; }
  [[nodiscard]] const MusicBags& bags() const { return bags_; }

private:
  std::vector<int> pitches_;
  std::vector<double> durations_;
  MusicBags bags_;
};

MusicBags music_features(std::span<const int> pitches, std::span<const double> durations);
inline MusicBags music_features(const MusicSegment& s) { return music_features(s.pitches(), s.durations()); }

struct MusicDistanceParts {
  double global = 0.0;
  double local = 0.0;
  double rhythm = 0.0;
  double interval = 0.0;
  double step = 0.0;
  double pitch = 0.0;
  double pitch_class = 0.0;
  double score_bag = 0.0;
  double score_alignment = 0.0;
  double distance = 0.0;
};

MusicDistanceParts music_distance_parts(const MusicSegment& a, const MusicSegment& b, const MusicModel& model = {});
double music_distance(const MusicSegment& a, const MusicSegment& b, const MusicModel& model = {});

// ---------------------------------------------------------------------------
// Trajectories
// ---------------------------------------------------------------------------

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

enum class TurnBin { Forward, UpperRight, LowerRight, Backward, LowerLeft, UpperLeft };

std::string to_string(TurnBin bin);

/// Bin for a turn of `degrees` in (-180, 180], positive = clockwise (right).
/// Boundaries are closed on the side away from straight ahead, so +90 is
/// upper-right and -90 upper-left.
TurnBin turn_bin(double degrees);

struct MovementTurn {
  int length = 0;  // quantized metres
  TurnBin turn = TurnBin::Forward;
  friend auto operator<=>(const MovementTurn&, const MovementTurn&) = default;
};

struct TrajectoryModel {
  double gap = 100.0;
  std::optional<double> reward_offset;  // c0, defaults to gap
  double bag_weight = 100.0;
  double local_weight = 2.5;
  double angle_weight = 10.0;
  double resolution = 5.0;  // movement quantization, metres
};

struct TrajectoryFeatures {
  Bag<MovementTurn> bag;
  double total_length = 0.0;
  double net_angle = 0.0;  // radians, direction of last - first
};

/// Fixed-timestep 2-D path, translated so the first point is the origin and
/// optionally rotated (radians, counter-clockwise) at construction.
class Trajectory {
public:
  explicit Trajectory(std::vector<Point2> points, double rotate = 0.0, double resolution = 5.0);

  [[nodiscard]] const std::vector<Point2>& points() const { return points_; }
  [[nodiscard]] const TrajectoryFeatures& features() const { return features_; }
  [[nodiscard]] double resolution() const { return resolution_; }

private:
  std::vector<Point2> points_;
  double resolution_;
  TrajectoryFeatures features_;
};

/// Movement-turn bag, path length and net direction of an origin-translated
/// path. Throws ParameterError for fewer than two points.
TrajectoryFeatures trajectory_features(std::span<const Point2> points, double resolution = 5.0);

double point_cost(const Point2& a, const Point2& b);
SubstitutionModel<Point2> trajectory_substitution_model(const TrajectoryModel& model = {});

struct TrajectoryDistanceParts {
  double global = 0.0;
  double local = 0.0;
  double score_bag = 0.0;
  double delta_distance = 0.0;
  double delta_angle = 0.0;
  double score_align = 0.0;
  double score_overall = 0.0;
  double distance = 0.0;
};

TrajectoryDistanceParts trajectory_distance_parts(const Trajectory& a, const Trajectory& b,
                                                  const TrajectoryModel& model = {});
double trajectory_distance(const Trajectory& a, const Trajectory& b, const TrajectoryModel& model = {});

// ---------------------------------------------------------------------------
// Configuration
// ---------------------------------------------------------------------------

struct DistanceModelConfig {
  MusicModel music;
  TrajectoryModel trajectory;

  /// Reads `music.gap = 1.5` style key/value lines. Unknown keys are errors.
  static DistanceModelConfig parse(const std::string& text);
  static DistanceModelConfig load(const std::string& path);
  /// Applies one `music.*` / `trajectory.*` key; false for any other key.
  bool apply(const KeyValue& kv);
};

}  // namespace repsel
