#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

namespace qlo {

// xoshiro256++ seeded through splitmix64. We roll our own instead of
// <random> distributions because std::uniform_int_distribution is
// implementation-defined and experiment outputs must replay bit-for-bit.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // unbiased integer in [0, bound) by rejection
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  int range(int lo, int hi) {  // inclusive ends
    return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  bool coin() { return (next() >> 63) != 0; }

  // uniform double in [0,1) with 53 random bits
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Box-Muller; one value per call keeps replay simple
  double normal() {
    double u1 = uniform01(), u2 = uniform01();
    while (u1 == 0.0) u1 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  std::vector<double> unit_vector(int dim) {
    std::vector<double> v(dim);
    for (;;) {
      double norm2 = 0;
      for (auto& x : v) {
        x = normal();
        norm2 += x * x;
      }
      if (norm2 > 1e-30) {
        double inv = 1.0 / std::sqrt(norm2);
        for (auto& x : v) x *= inv;
        return v;
      }
    }
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

  // sorted sample of `count` distinct elements from {0,...,pool-1}
  std::vector<int> sample_without_replacement(int pool, int count);

  std::vector<int> random_permutation(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    shuffle(p);
    return p;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

inline std::vector<int> Rng::sample_without_replacement(int pool, int count) {
  // Floyd's algorithm
  std::vector<int> out;
  out.reserve(count);
  for (int j = pool - count; j < pool; ++j) {
    int t = static_cast<int>(below(static_cast<std::uint64_t>(j) + 1));
    bool seen = false;
    for (int x : out)
      if (x == t) { seen = true; break; }
    out.push_back(seen ? j : t);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace qlo
