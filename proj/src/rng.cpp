#include "copolab/rng.hpp"

#include <cmath>

namespace copolab {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t x = seed ^ (0x2545f4914f6cdd1dULL * (stream + 1));
  return splitmix64(x);
}

std::uint64_t Rng::next_u64() { return splitmix64(state_); }

double Rng::uniform() {
  // 53 high bits -> [0, 1)
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::gaussian() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  spare_ = r * std::sin(theta);
  have_spare_ = true;
  return r * std::cos(theta);
}

Vector Rng::gaussian_vector(long n) {
  Vector v(n);
  for (long i = 0; i < n; ++i) v(i) = gaussian();
  return v;
}

Vector Rng::uniform_vector(long n, double lo, double hi) {
  Vector v(n);
  for (long i = 0; i < n; ++i) v(i) = uniform(lo, hi);
  return v;
}

}  // namespace copolab
