#include "repsel/core.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <random>
#include <thread>

#include <fmt/format.h>

namespace repsel {

DistanceMatrix::DistanceMatrix(std::size_t n, std::vector<double> values) : n_(n), values_(std::move(values)) {
  if (values_.size() != n_ * n_) {
    throw ParameterError(fmt::format("distance matrix needs {} entries, got {}", n_ * n_, values_.size()));
  }
}

DistanceMatrix DistanceMatrix::subset(std::span<const SampleId> ids) const {
  std::vector<double> out;
  out.reserve(ids.size() * ids.size());
  for (SampleId i : ids) {
    for (SampleId j : ids) {
      out.push_back(at(i, j));
    }
  }
  return DistanceMatrix(ids.size(), std::move(out));
}

namespace {

void check_value(double v, SampleId from, SampleId to) {
  if (!(v >= 0.0)) {
    throw ContractViolation(fmt::format("distance d({}, {}) = {} is not a non-negative number", from, to, v));
  }
}

}  // namespace

struct DistanceOracle::Impl {
  std::size_t n = 0;

  // Matrix source.
  std::optional<DistanceMatrix> matrix;
  std::unique_ptr<std::atomic<std::uint8_t>[]> seen;

  // Function source.
  PairwiseFunction fn;
  CachePolicy policy;
  mutable std::mutex mu;
  using Key = std::uint64_t;
  std::unordered_map<Key, double> cache;
  std::list<std::pair<Key, double>> lru;
  std::unordered_map<Key, std::list<std::pair<Key, double>>::iterator> lru_index;

  std::atomic<std::uint64_t> evaluations{0};

  double lookup(SampleId from, SampleId to) {
    if (from >= n || to >= n) {
      throw std::out_of_range(fmt::format("sample pair ({}, {}) out of range for {} samples", from, to, n));
    }
    if (matrix) {
      const std::size_t idx = from * n + to;
      if (seen[idx].exchange(1, std::memory_order_relaxed) == 0) {
        evaluations.fetch_add(1, std::memory_order_relaxed);
      }
      return matrix->at(from, to);
    }
    if (!policy.enabled) {
      const double v = fn(from, to);
      check_value(v, from, to);
      evaluations.fetch_add(1, std::memory_order_relaxed);
      return v;
    }
    const Key key = static_cast<Key>(from) * n + to;
    {
      std::lock_guard lock(mu);
      if (auto hit = find_locked(key)) {
        return *hit;
      }
    }
    // Evaluated outside the lock; pure functions make a racing duplicate harmless,
    // and only the inserting thread counts the evaluation.
    const double v = fn(from, to);
    check_value(v, from, to);
    std::lock_guard lock(mu);
    if (auto hit = find_locked(key)) {
      return *hit;
    }
    insert_locked(key, v);
    evaluations.fetch_add(1, std::memory_order_relaxed);
    return v;
  }

  std::optional<double> find_locked(Key key) {
    if (policy.capacity == 0) {
      auto it = cache.find(key);
      if (it == cache.end()) return std::nullopt;
      return it->second;
    }
    auto it = lru_index.find(key);
    if (it == lru_index.end()) return std::nullopt;
    lru.splice(lru.begin(), lru, it->second);
    return it->second->second;
  }

  void insert_locked(Key key, double v) {
    if (policy.capacity == 0) {
      cache.emplace(key, v);
      return;
    }
    lru.emplace_front(key, v);
    lru_index.emplace(key, lru.begin());
    while (lru.size() > policy.capacity) {
      lru_index.erase(lru.back().first);
      lru.pop_back();
    }
  }
};

DistanceOracle::DistanceOracle(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}
DistanceOracle::DistanceOracle(DistanceOracle&&) noexcept = default;
DistanceOracle& DistanceOracle::operator=(DistanceOracle&&) noexcept = default;
DistanceOracle::~DistanceOracle() = default;

DistanceOracle DistanceOracle::from_matrix(DistanceMatrix matrix) {
  const std::size_t n = matrix.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      check_value(matrix.at(i, j), i, j);
    }
  }
  auto impl = std::make_unique<Impl>();
  impl->n = n;
  impl->seen = std::make_unique<std::atomic<std::uint8_t>[]>(n * n);
  impl->matrix = std::move(matrix);
  return DistanceOracle(std::move(impl));
}

DistanceOracle DistanceOracle::from_function(std::size_t n, PairwiseFunction fn, CachePolicy policy) {
  if (!fn) {
    throw ParameterError("distance function is empty");
  }
  auto impl = std::make_unique<Impl>();
  impl->n = n;
  impl->fn = std::move(fn);
  impl->policy = policy;
  return DistanceOracle(std::move(impl));
}

std::size_t DistanceOracle::size() const noexcept { return impl_->n; }

double DistanceOracle::operator()(SampleId from, SampleId to) const { return impl_->lookup(from, to); }

std::uint64_t DistanceOracle::evaluations() const noexcept {
  return impl_->evaluations.load(std::memory_order_relaxed);
}

std::pair<SampleId, double> nearest_representative(SampleId x, std::span<const SampleId> reps,
                                                   const DistanceOracle& oracle) {
  if (reps.empty()) {
    throw EmptySetError("nearest_representative: empty representative set");
  }
  SampleId best = reps.front();
  double best_d = oracle(x, best);
  for (std::size_t i = 1; i < reps.size(); ++i) {
    const double d = oracle(x, reps[i]);
    if (d < best_d || (d == best_d && reps[i] < best)) {
      best = reps[i];
      best_d = d;
    }
  }
  return {best, best_d};
}

// ---------------------------------------------------------------------------

std::vector<SampleId> RepresentativeSolution::representative_set() const {
  std::vector<SampleId> out = representatives;
  std::sort(out.begin(), out.end());
  return out;
}

double RepresentativeSolution::max_distance() const {
  double m = 0.0;
  for (double d : assigned_distance) m = std::max(m, d);
  return m;
}

double RepresentativeSolution::average_distance() const {
  if (assigned_distance.empty()) return 0.0;
  double sum = 0.0;
  for (double d : assigned_distance) sum += d;
  return sum / static_cast<double>(assigned_distance.size());
}

std::vector<Cluster> RepresentativeSolution::clusters() const {
  std::vector<Cluster> out;
  out.reserve(representatives.size());
  std::unordered_map<SampleId, std::size_t> slot;
  for (SampleId r : representatives) {
    slot.emplace(r, out.size());
    out.push_back(Cluster{r, {}});
  }
  for (SampleId s = 0; s < assignment.size(); ++s) {
    auto it = slot.find(assignment[s]);
    if (it == slot.end()) {
      throw ParameterError(fmt::format("sample {} assigned to non-representative {}", s, assignment[s]));
    }
    out[it->second].members.push_back(s);
  }
  return out;
}

RepresentativeSolution solution_from_clusters(std::span<const Cluster> clusters, std::size_t n,
                                              std::optional<double> delta, const DistanceOracle& oracle) {
  RepresentativeSolution sol;
  sol.delta = delta;
  sol.assignment.assign(n, 0);
  sol.assigned_distance.assign(n, 0.0);
  std::vector<bool> seen(n, false);
  for (const Cluster& c : clusters) {
    sol.representatives.push_back(c.representative);
    for (SampleId m : c.members) {
      if (m >= n || seen[m]) {
        throw ParameterError(fmt::format("sample {} missing or assigned twice", m));
      }
      seen[m] = true;
      sol.assignment[m] = c.representative;
      sol.assigned_distance[m] = oracle(m, c.representative);
    }
  }
  if (std::find(seen.begin(), seen.end(), false) != seen.end()) {
    throw ParameterError("clusters do not cover every sample");
  }
  return sol;
}

// ---------------------------------------------------------------------------

std::vector<SampleId> canonical_order(std::size_t n) {
  std::vector<SampleId> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  return order;
}

std::vector<SampleId> seeded_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<SampleId> order = canonical_order(n);
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::uniform_int_distribution<std::size_t> pick(0, i - 1);
    std::swap(order[i - 1], order[pick(rng)]);
  }
  return order;
}

bool is_permutation_of(std::span<const SampleId> order, std::size_t n) {
  if (order.size() != n) return false;
  std::vector<bool> seen(n, false);
  for (SampleId s : order) {
    if (s >= n || seen[s]) return false;
    seen[s] = true;
  }
  return true;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

unsigned configured_threads() {
  if (const char* env = std::getenv("REPSEL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(error_mu);
            if (!error) error = std::current_exception();
            next.store(count);
          }
        }
      });
    }
  }
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------

void ExactSum::add(double x) {
  std::size_t kept = 0;
  for (double y : partials_) {
    if (std::abs(x) < std::abs(y)) std::swap(x, y);
    const double hi = x + y;
    const double lo = y - (hi - x);
    if (lo != 0.0) partials_[kept++] = lo;
    x = hi;
  }
  partials_.resize(kept);
  partials_.push_back(x);
}

double ExactSum::value() const {
  std::size_t n = partials_.size();
  if (n == 0) return 0.0;
  double hi = partials_[--n];
  double lo = 0.0;
  while (n > 0) {
    const double x = hi;
    const double y = partials_[--n];
    hi = x + y;
    lo = y - (hi - x);
    if (lo != 0.0) break;
  }
  // Round half to even across the remaining partials.
  if (n > 0 && ((lo < 0.0 && partials_[n - 1] < 0.0) || (lo > 0.0 && partials_[n - 1] > 0.0))) {
    const double y = lo * 2.0;
    const double x = hi + y;
    if (y == x - hi) hi = x;
  }
  return hi;
}

int ExactSum::compare(const ExactSum& other) const {
  ExactSum diff = *this;
  for (double p : other.partials_) diff.add(-p);
  const double v = diff.value();
  return (v > 0.0) - (v < 0.0);
}

}  // namespace repsel
