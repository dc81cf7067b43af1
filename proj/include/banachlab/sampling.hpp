#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "banachlab/space.hpp"

// Deterministic sampling helpers.  The generator and the distributions are
// written out by hand so that a (seed, config) pair produces byte-identical
// experiment output on any platform; std::uniform_real_distribution and
// friends are implementation-defined and would break that.

namespace banachlab {

namespace detail {
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

// xoshiro256** seeded through splitmix64
class rng {
 public:
  explicit rng(std::uint64_t seed = 1) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = detail::splitmix64(sm);
  }

  // independent substream for (seed, i, j); used to make per-sample draws
  // order-independent
  static rng substream(std::uint64_t seed, std::uint64_t i, std::uint64_t j = 0) {
    std::uint64_t sm = seed;
    std::uint64_t a = detail::splitmix64(sm);
    sm = a ^ (i * 0x9e3779b97f4a7c15ULL) ^ (j + 0x3c6ef372fe94f82aULL);
    return rng(detail::splitmix64(sm));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // standard normal via Box-Muller
  double normal() {
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  int uniform_int(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

// Gaussian direction normalized in the given norm.  Not uniform on the
// sphere for p != 2, but it covers it and is all the sampling we need.
inline std::vector<double> random_unit(const space_spec& s, rng& r) {
  const int n = s.total_dim();
  std::vector<double> x(static_cast<std::size_t>(n));
  double nx = 0.0;
  while (nx == 0.0) {
    for (auto& v : x) v = r.normal();
    nx = norm_on(s, x);
  }
  for (auto& v : x) v /= nx;
  return x;
}

inline std::vector<double> random_with_norm(const space_spec& s, double radius, rng& r) {
  auto x = random_unit(s, r);
  for (auto& v : x) v *= radius;
  return x;
}

inline std::vector<double> random_nonneg_with_norm(const space_spec& s, double radius, rng& r) {
  auto x = random_unit(s, r);
  for (auto& v : x) v = std::abs(v) * radius;
  return x;
}

}  // namespace banachlab
