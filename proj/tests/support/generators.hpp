#pragma once

// Hand-rolled generators for property tests. Each draws from a seeded
// std::mt19937_64 so failures reproduce from the printed case index.

#include <cstdint>
#include <random>
#include <vector>

namespace gen {

class Source {
 public:
  explicit Source(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool coin(double p = 0.5) { return uniform(0.0, 1.0) < p; }

  std::vector<double> reals(std::size_t n, double lo, double hi) {
    std::vector<double> v(n);
    for (auto& x : v) x = uniform(lo, hi);
    return v;
  }
  std::vector<int> ints(std::size_t n, int lo, int hi) {
    std::vector<int> v(n);
    for (auto& x : v) x = integer(lo, hi);
    return v;
  }
  // n positive values drawn from a pool of at most `distinct` values.
  std::vector<double> positive_with_repeats(std::size_t n, int distinct) {
    std::vector<double> pool(static_cast<std::size_t>(distinct));
    for (auto& p : pool) p = coin(0.5) ? integer(1, 30) : uniform(0.1, 50.0);
    std::vector<double> v(n);
    for (auto& x : v) x = pool[static_cast<std::size_t>(integer(0, distinct - 1))];
    return v;
  }
  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace gen
