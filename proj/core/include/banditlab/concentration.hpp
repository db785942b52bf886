#pragma once

#include <span>
#include <vector>

namespace banditlab::concentration {

// Finite probability vector: entries >= 0, sums to 1 within 1e-12.
class ProbVector {
 public:
  explicit ProbVector(std::vector<double> p);
  const std::vector<double>& values() const { return p_; }
  double operator[](std::size_t i) const { return p_[i]; }
  std::size_t size() const { return p_.size(); }

  // Normalizes arbitrary nonnegative weights.
  static ProbVector normalized(std::vector<double> weights);

 private:
  std::vector<double> p_;
};

// sqrt(2 ln T / n); the half-width of the mean-reward confidence interval.
double hoeffding_radius(long long n, double horizon);

// sum_x p(x) ln(p(x)/q(x)) with 0 ln(0/q) = 0; +infinity when p(x) > 0 and
// q(x) = 0.
double kl_divergence(std::span<const double> p, std::span<const double> q);
double kl_divergence(const ProbVector& p, const ProbVector& q);

// Closed-form KL between a fair coin and a coin with expectation (1+eps)/2.
enum class CoinDirection { FairVsBiased, BiasedVsFair };
double coin_kl(double eps, CoinDirection direction);

// max_A |p(A) - q(A)| = (1/2) sum |p - q|.
double tv_distance(std::span<const double> p, std::span<const double> q);
double tv_distance(const ProbVector& p, const ProbVector& q);

}  // namespace banditlab::concentration
