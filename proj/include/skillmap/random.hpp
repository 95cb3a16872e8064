#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

namespace skillmap {

// Seeded stream with platform-independent draws. std::uniform_int_distribution
// and std::shuffle are implementation-defined, so bounded draws and shuffles
// are done by hand on top of the (fully specified) mt19937_64 engine.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform in [0, n). Rejection sampling keeps it unbiased.
  std::size_t below(std::size_t n) {
    if (n <= 1) return 0;
    const std::uint64_t bound = static_cast<std::uint64_t>(n);
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    std::uint64_t x = next();
    while (x >= limit) x = next();
    return static_cast<std::size_t>(x % bound);
  }

  // Uniform in [lo, hi].
  int between(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<std::size_t>(hi - lo) + 1));
  }

  // Uniform in [0, 1).
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  // k distinct elements in draw order (partial Fisher-Yates).
  template <typename T>
  std::vector<T> sample(std::vector<T> pool, std::size_t k) {
    if (k > pool.size()) k = pool.size();
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(pool[i], pool[i + below(pool.size() - i)]);
    }
    pool.resize(k);
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

// Draws items without replacement; refills and reshuffles when exhausted.
template <typename T>
class Deck {
 public:
  Deck(Rng& rng, std::vector<T> pool) : rng_(rng), pool_(std::move(pool)) {}

  const T& draw() {
    if (remaining_.empty()) {
      remaining_ = pool_;
      rng_.shuffle(remaining_);
    }
    current_ = remaining_.back();
    remaining_.pop_back();
    return current_;
  }

 private:
  Rng& rng_;
  std::vector<T> pool_;
  std::vector<T> remaining_;
  T current_{};
};

}  // namespace skillmap
