#include "banditlab/concentration.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace banditlab::concentration {

ProbVector::ProbVector(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw std::invalid_argument("ProbVector: empty");
  double sum = 0.0;
  for (double x : p_) {
    if (!(x >= 0.0) || !std::isfinite(x))
      throw std::invalid_argument("ProbVector: entries must be finite and >= 0");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12 * std::max<double>(1.0, static_cast<double>(p_.size())))
    throw std::invalid_argument("ProbVector: entries must sum to 1");
}

ProbVector ProbVector::normalized(std::vector<double> weights) {
  double sum = 0.0;
  for (double w : weights) sum += w;
  if (!(sum > 0.0)) throw std::invalid_argument("ProbVector::normalized: weights sum to zero");
  for (double& w : weights) w /= sum;
  return ProbVector(std::move(weights));
}

double hoeffding_radius(long long n, double horizon) {
  if (n < 1) throw std::domain_error("hoeffding_radius: n must be >= 1");
  if (!(horizon >= 2.0)) throw std::domain_error("hoeffding_radius: horizon must be >= 2");
  return std::sqrt(2.0 * std::log(horizon) / static_cast<double>(n));
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::domain_error("kl_divergence: length mismatch");
  double kl = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) return std::numeric_limits<double>::infinity();
    kl += p[i] * std::log(p[i] / q[i]);
  }
  return kl;
}

double kl_divergence(const ProbVector& p, const ProbVector& q) {
  return kl_divergence(std::span<const double>(p.values()), std::span<const double>(q.values()));
}

double coin_kl(double eps, CoinDirection direction) {
  if (!(eps > 0.0 && eps < 0.5)) throw std::domain_error("coin_kl: eps must be in (0, 0.5)");
  if (direction == CoinDirection::FairVsBiased) {
    // KL(RC_0, RC_eps) = -1/2 ln(1 - eps^2)
    return -0.5 * std::log(1.0 - eps * eps);
  }
  // KL(RC_eps, RC_0) = 1/2 ln(1 - eps^2) + (eps/2) ln((1+eps)/(1-eps))
  return 0.5 * std::log(1.0 - eps * eps) + 0.5 * eps * std::log((1.0 + eps) / (1.0 - eps));
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw std::domain_error("tv_distance: length mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) total += std::abs(p[i] - q[i]);
  return 0.5 * total;
}

double tv_distance(const ProbVector& p, const ProbVector& q) {
  return tv_distance(std::span<const double>(p.values()), std::span<const double>(q.values()));
}

}  // namespace banditlab::concentration
