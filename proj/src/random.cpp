#include "rlos/random.hpp"

#include <cmath>
#include <numbers>

namespace rlos {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw ValidationError("Rng::below: range must be nonempty");
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t r = engine_();
    if (r >= threshold) return r % n;
  }
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::int64_t Rng::poisson(double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("Rng::poisson: rate must be positive and finite");
  }
  constexpr double kChunk = 200.0;
  std::int64_t total = 0;
  while (lambda > 0.0) {
    const double rate = std::min(lambda, kChunk);
    lambda -= rate;
    const double u = uniform();
    double p = std::exp(-rate);
    double cdf = p;
    std::int64_t k = 0;
    while (u > cdf) {
      ++k;
      p *= rate / static_cast<double>(k);
      cdf += p;
      if (p == 0.0 && cdf < u) break;  // float exhaustion of the tail
    }
    total += k;
  }
  return total;
}

Eigen::VectorXd Rng::simplex_point(Index d) {
  Eigen::VectorXd x(d);
  for (Index i = 0; i < d; ++i) {
    double u = uniform();
    while (u <= 0.0) u = uniform();
    x(i) = -std::log(u);
  }
  return x / x.sum();
}

}  // namespace rlos
