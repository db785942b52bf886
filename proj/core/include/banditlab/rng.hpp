#pragma once

#include <cstdint>
#include <span>
#include <string_view>

namespace banditlab {

// Counter-based pseudorandom stream with string-labeled substreams.
// Same (seed, label path, draw sequence) yields the same outputs regardless
// of what other streams were drawn from in between.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  RngStream fork(std::string_view label) const;
  RngStream fork(std::uint64_t index) const;

  std::uint64_t next_u64();
  double next_double();                 // uniform [0, 1)
  double uniform(double lo, double hi);
  int uniform_int(int n);               // uniform over {0, ..., n-1}
  bool bernoulli(double p);
  double gaussian();                    // standard normal
  int categorical(std::span<const double> weights);  // proportional to weights

 private:
  RngStream(std::uint64_t key, int);    // internal: pre-mixed key

  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  bool has_spare_gaussian_ = false;
  double spare_gaussian_ = 0.0;
};

}  // namespace banditlab
