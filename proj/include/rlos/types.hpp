#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace rlos {

using Index = Eigen::Index;

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Nonnegative weights summing to one, one entry per asset.
using PortfolioWeights = Eigen::VectorXd;

/// Close/open price ratio of every asset over one trading period.
using FluctuationVector = Eigen::VectorXd;

/// Raised when an input violates a documented precondition or invariant.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a computation fails at run time (divergence, I/O).
class RuntimeFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kWeightSumTolerance = 1e-9;

template <typename Derived>
bool is_valid_portfolio(const Eigen::MatrixBase<Derived>& b,
                        double tol = kWeightSumTolerance) {
  if (b.size() == 0 || !b.allFinite()) return false;
  if ((b.array() < 0).any()) return false;
  return std::abs(b.sum() - 1.0) <= tol;
}

template <typename Derived>
void require_portfolio(const Eigen::MatrixBase<Derived>& b,
                       const std::string& where) {
  if (!is_valid_portfolio(b)) {
    throw ValidationError(where + ": weights must be nonnegative and sum to 1");
  }
}

inline PortfolioWeights uniform_portfolio(Index d) {
  if (d < 1) throw ValidationError("uniform_portfolio: asset count must be >= 1");
  return PortfolioWeights::Constant(d, 1.0 / static_cast<double>(d));
}

}  // namespace rlos
