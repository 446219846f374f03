#pragma once

#include <cstdint>
#include <random>

namespace levydrift {

// One SplitMix64 step. Also the building block for substream derivation.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic per-replication seed: SplitMix64 mix of (master, cell, rep).
// Collision-tested over the experiment index range in the unit suite.
std::uint64_t substream_seed(std::uint64_t master, std::uint64_t cell,
                             std::uint64_t rep);

/// Seeded random stream with the distributions the samplers need.
/// All draws are deterministic functions of the seed and the call sequence.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  /// U(0,1).
  double uniform();
  /// Standard normal.
  double normal();
  /// Exponential with mean 1.
  double exponential();
  /// Gamma(shape, scale).
  double gamma(double shape, double scale);
  /// Poisson(mean).
  long long poisson(double mean);
  /// Standard stable S_alpha(1, beta, 0) via Chambers-Mallows-Stuck,
  /// in the 1-parameterization of Samorodnitsky-Taqqu / Cont-Tankov.
  double stable(double alpha, double beta);

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
};

}  // namespace levydrift
