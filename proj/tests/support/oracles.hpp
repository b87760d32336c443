#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library's numerical code.

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

namespace oracle {

/// Textbook splitmix64 / xoshiro256** transcribed from the reference C code.
struct RefXoshiro {
  std::uint64_t s[4];

  explicit RefXoshiro(std::uint64_t seed) {
    std::uint64_t x = seed;
    for (auto& w : s) {
      std::uint64_t z = (x += 0x9e3779b97f4a7c15);
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9;
      z = (z ^ (z >> 27)) * 0x94d049bb133111eb;
      w = z ^ (z >> 31);
    }
  }

  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s[1] * 5, 7) * 9;
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }

  /// Unbiased draw from [0, n): reject the lowest 2^64 mod n outputs.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t reject_under = (~n + 1) % n;
    std::uint64_t r;
    do {
      r = next();
    } while (r < reject_under);
    return r % n;
  }
};

/// Exhaustive simplex grid with the given step for d <= 3; returns the best
/// value of f and its argmax among points passing `feasible`.
inline std::pair<double, Eigen::VectorXd> grid_max(Eigen::Index d, double step,
                                                   const std::function<double(const Eigen::VectorXd&)>& f,
                                                   const std::function<bool(const Eigen::VectorXd&)>& feasible) {
  const auto m = static_cast<long>(std::llround(1.0 / step));
  double best = -INFINITY;
  Eigen::VectorXd arg = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd b(d);
  auto visit = [&]() {
    if (!feasible(b)) return;
    const double v = f(b);
    if (v > best) {
      best = v;
      arg = b;
    }
  };
  if (d == 1) {
    b << 1.0;
    visit();
  } else if (d == 2) {
    for (long i = 0; i <= m; ++i) {
      b << double(i) / m, double(m - i) / m;
      visit();
    }
  } else {
    for (long i = 0; i <= m; ++i) {
      for (long j = 0; i + j <= m; ++j) {
        b << double(i) / m, double(j) / m, double(m - i - j) / m;
        visit();
      }
    }
  }
  return {best, arg};
}

/// log(bᵀμ) - bᵀΣb / (2(bᵀμ)²) written out with explicit loops.
inline double utility(const Eigen::VectorXd& b, const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma) {
  double ret = 0.0;
  for (Eigen::Index i = 0; i < b.size(); ++i) ret += b[i] * mu[i];
  double q = 0.0;
  for (Eigen::Index i = 0; i < b.size(); ++i) {
    for (Eigen::Index j = 0; j < b.size(); ++j) q += b[i] * sigma(i, j) * b[j];
  }
  return std::log(ret) - q / (2.0 * ret * ret);
}

/// Σ p_k log(bᵀx_k) with rows of `support` as outcomes.
inline double expected_log(const Eigen::VectorXd& b, const Eigen::MatrixXd& support, const Eigen::VectorXd& probs) {
  double v = 0.0;
  for (Eigen::Index k = 0; k < support.rows(); ++k) {
    double g = 0.0;
    for (Eigen::Index i = 0; i < b.size(); ++i) g += b[i] * support(k, i);
    v += probs[k] * std::log(g);
  }
  return v;
}

/// Pearson correlation by the two-pass textbook formula.
inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const double n = static_cast<double>(a.size());
  double ma = 0.0;
  double mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0;
  double saa = 0.0;
  double sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

/// Poisson(λ) pmf via log-gamma.
inline double poisson_pmf(long k, double lambda) {
  return std::exp(static_cast<double>(k) * std::log(lambda) - lambda - std::lgamma(static_cast<double>(k) + 1.0));
}

}  // namespace oracle
