#pragma once

#include "copolab/common.hpp"

#include <cstdint>

namespace copolab {

/// Deterministic, platform-independent random stream (splitmix64 core,
/// Box-Muller normals). Every Monte-Carlo verdict in the toolkit draws
/// from one of these, seeded explicitly.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  /// Derive a child seed for an indexed substream.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t next_u64();
  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double gaussian();
  Vector gaussian_vector(long n);
  Vector uniform_vector(long n, double lo, double hi);

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace copolab
