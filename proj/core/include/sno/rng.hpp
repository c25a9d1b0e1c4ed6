#pragma once

#include <complex>
#include <cstdint>
#include <string_view>

namespace sno::rng {

// Single step of SplitMix64. Every random draw in the library comes from
// explicitly seeded streams built on this, so that a run is reproducible
// bit-for-bit from its seeds alone.
std::uint64_t splitmix64(std::uint64_t& state);

// Derives a child seed from (base, tag, index). Used to give each dataset
// sample, each parameter tensor and each experiment stage its own stream;
// draws are then independent of evaluation order.
std::uint64_t derive(std::uint64_t base, std::string_view tag, std::uint64_t index = 0);

// Deterministic scalar generator. Normal deviates use Box-Muller directly on
// SplitMix64 output; std::normal_distribution is avoided because its output
// sequence is implementation-defined.
class Stream {
 public:
  explicit Stream(std::uint64_t seed) : state_(seed) {}

  double uniform();                    // [0, 1)
  double uniform(double a, double b);  // [a, b)
  double normal();                     // N(0, 1)

  // Independent N(0,1) draws for real and imaginary part, real first.
  std::complex<double> normal_complex();

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace sno::rng
