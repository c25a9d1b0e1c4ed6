#include "sno/rng.hpp"

#include <cmath>
#include <numbers>

namespace sno::rng {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t derive(std::uint64_t base, std::string_view tag, std::uint64_t index) {
  // FNV-1a over the tag folded into a SplitMix64 walk; stable across platforms.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::uint64_t state = base;
  std::uint64_t a = splitmix64(state);
  state ^= h;
  std::uint64_t b = splitmix64(state);
  state ^= index * 0x9e3779b97f4a7c15ULL;
  std::uint64_t c = splitmix64(state);
  return a ^ (b + 0x2545f4914f6cdd1dULL * (index + 1)) ^ c;
}

double Stream::uniform() {
  // 53 high bits -> double in [0, 1).
  return static_cast<double>(splitmix64(state_) >> 11) * 0x1.0p-53;
}

double Stream::uniform(double a, double b) { return a + (b - a) * uniform(); }

double Stream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 nudged away from 0 so the log is finite.
  double u1 = uniform();
  double u2 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  double r = std::sqrt(-2.0 * std::log(u1));
  double theta = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(theta);
  has_spare_ = true;
  return r * std::cos(theta);
}

std::complex<double> Stream::normal_complex() {
  double re = normal();
  double im = normal();
  return {re, im};
}

}  // namespace sno::rng
