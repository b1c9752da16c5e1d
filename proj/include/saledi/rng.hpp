#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

// Deterministic random streams and normal-distribution helpers.
// std::random distributions are implementation-defined, so everything here
// is built from raw 64-bit output to keep results bit-identical across
// platforms and thread counts.

namespace saledi::rng {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Standard normal CDF, accurate to ~1e-15.
inline double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Standard normal quantile, Wichura's AS 241 (PPND16).
double norm_quantile(double p);

class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {
    // warm up so that small seeds decorrelate
    splitmix64(state_);
  }

  std::uint64_t next_u64() { return splitmix64(state_); }

  // uniform on the open interval (0,1)
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform()) / rate; }

  double normal() { return norm_quantile(uniform()); }

  // Counting process: number of unit-exponential gaps fitting in lambda.
  std::int64_t poisson(double lambda) {
    if (lambda < 0.0) throw std::invalid_argument("poisson: lambda < 0");
    std::int64_t count = 0;
    double accum = exponential(1.0);
    while (accum <= lambda) {
      ++count;
      accum += exponential(1.0);
    }
    return count;
  }

 private:
  std::uint64_t state_;
};

// Deterministic substream derivation: stream i is independent of how many
// draws were taken from streams j < i.
inline Stream substream(std::uint64_t master, std::uint64_t index) {
  std::uint64_t s = master;
  splitmix64(s);
  return Stream(s ^ (0xD1B54A32D192ED03ULL * (index + 1)));
}

}  // namespace saledi::rng
