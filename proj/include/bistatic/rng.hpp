#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace bistatic {

// Deterministic substream RNG. Independent streams are derived from a master
// seed plus a key path (run index, step, purpose tag, ...) via splitmix64
// mixing, then generated with xoshiro256++. All samplers below are
// hand-rolled so output is identical across platforms and standard libraries.

inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Stream purpose tags; keeps e.g. clutter draws separated from bound-integral
// draws so reseeding one stream cannot perturb the other.
enum StreamTag : uint64_t {
  kTagIrf = 0x101,          // Lambda^1 Monte Carlo samples
  kTagIgf = 0x102,          // Lambda^2 Monte Carlo samples
  kTagBoundEval = 0x103,    // per-point / per-step bound evaluation seeds
  kTagMeasurement = 0x201,  // detection / noise / clutter generation
  kTagTruth = 0x202,        // target process noise
  kTagInit = 0x203,         // initial estimate draw
  kTagPolicy = 0x301,       // random control policy
  kTagControlCost = 0x302,  // shared candidate-cost seed within a step
};

class RngStream {
 public:
  RngStream() : RngStream(0) {}

  explicit RngStream(uint64_t seed) {
    uint64_t s = seed;
    for (auto& w : state_) w = splitmix64(s);
  }

  // Derive an independent stream from (seed, path...). The same key always
  // yields the same stream.
  static RngStream from_key(uint64_t seed, std::initializer_list<uint64_t> path) {
    return RngStream(derive_seed(seed, path));
  }

  static uint64_t derive_seed(uint64_t seed, std::initializer_list<uint64_t> path) {
    uint64_t h = seed;
    (void)splitmix64(h);
    for (uint64_t k : path) {
      h ^= k + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
      uint64_t t = h;
      h = splitmix64(t);
    }
    return h;
  }

  uint64_t next_u64() {
    const uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform01(); }

  // Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal() {
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi_ * u2);
  }

  // Poisson by inversion-by-multiplication; fine for the small means used here.
  int poisson(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    double prod = 1.0;
    int n = -1;
    do {
      prod *= uniform01();
      ++n;
    } while (prod > limit);
    return n;
  }

  // Uniform integer in [0, n).
  uint64_t below(uint64_t n) { return n ? next_u64() % n : 0; }

 private:
  static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  static constexpr double kPi_ = 3.141592653589793238462643383279502884;

  uint64_t state_[4] = {};
};

}  // namespace bistatic
