#pragma once

#include <cmath>
#include <cstdint>

namespace uhop {

// Deterministic generator used for everything that must be reproducible from
// a 64-bit seed (pattern generation, weight init, masking, noise). splitmix64
// underneath; distributions are implemented here rather than taken from
// <random> because libstdc++/libc++ do not guarantee identical streams.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0,1), 53-bit resolution.
  double next_uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; two fresh uniforms per draw.
  double next_normal() {
    double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
    double u2 = next_uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
  }

  // Uniform integer in [0,n), rejection-sampled to avoid modulo bias.
  std::uint64_t next_below(std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  // Derives an independent stream, e.g. per-trial or per-memory seeds.
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    Rng r(seed ^ (0xd1b54a32d192ed03ULL * (stream + 1)));
    return r.next_u64();
  }

 private:
  std::uint64_t state_;
};

}  // namespace uhop
