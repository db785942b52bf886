#include "banditlab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace banditlab {

namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed) : key_(mix64(seed + kGamma)) {}

RngStream::RngStream(std::uint64_t key, int) : key_(key) {}

RngStream RngStream::fork(std::string_view label) const {
  return RngStream(mix64(key_ ^ mix64(fnv1a(label))), 0);
}

RngStream RngStream::fork(std::uint64_t index) const {
  return RngStream(mix64(key_ ^ mix64(index * kGamma + 1)), 0);
}

std::uint64_t RngStream::next_u64() {
  ++counter_;
  return mix64(key_ + counter_ * kGamma);
}

double RngStream::next_double() {
  // top 53 bits -> [0,1)
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) {
  return lo + (hi - lo) * next_double();
}

int RngStream::uniform_int(int n) {
  if (n <= 0) throw std::invalid_argument("uniform_int: n must be positive");
  // rejection sampling for exact uniformity
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return static_cast<int>(x % un);
}

bool RngStream::bernoulli(double p) { return next_double() < p; }

double RngStream::gaussian() {
  if (has_spare_gaussian_) {
    has_spare_gaussian_ = false;
    return spare_gaussian_;
  }
  // polar method
  double u, v, s;
  do {
    u = uniform(-1.0, 1.0);
    v = uniform(-1.0, 1.0);
    s = u * u + v * v;
  } while (s >= 1.0 || s == 0.0);
  const double m = std::sqrt(-2.0 * std::log(s) / s);
  spare_gaussian_ = v * m;
  has_spare_gaussian_ = true;
  return u * m;
}

int RngStream::categorical(std::span<const double> weights) {
  if (weights.empty()) throw std::invalid_argument("categorical: empty weights");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0 || !std::isfinite(w))
      throw std::invalid_argument("categorical: weights must be finite and nonnegative");
    total += w;
  }
  if (total <= 0.0) throw std::invalid_argument("categorical: weights sum to zero");
  double x = next_double() * total;
  for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
    x -= weights[i];
    if (x < 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size() - 1);
}

}  // namespace banditlab
