#pragma once

#include <cstdint>

#include "lrsdp/types.hpp"

namespace lrsdp {

// xoshiro256++ with splitmix64 seeding. Self-contained so that streams are
// bit-identical across standard libraries and platforms; std::*_distribution
// makes no such guarantee.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  // Uniform on [0, 1) with 53 random bits.
  double uniform();

  // Unbiased integer in [0, bound).
  std::uint64_t uniform_below(std::uint64_t bound);

  // Standard normal via Box-Muller (pairs cached).
  double normal();

 private:
  std::uint64_t s_[4];
  double cached_ = 0.0;
  bool has_cached_ = false;
};

Matrix gaussian_matrix(Index rows, Index cols, Rng& rng);
Vector gaussian_vector(Index size, Rng& rng);

}  // namespace lrsdp
