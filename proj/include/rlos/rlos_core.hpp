#pragma once

#include "rlos/simplex_solver.hpp"
#include "rlos/types.hpp"

#include <cmath>

namespace rlos {

/// First two moments of a fluctuation vector.
template <typename Scalar = double>
struct MomentEstimate {
  Vector<Scalar> mu;
  Matrix<Scalar> sigma;
  Index sample_count = 0;
};

/// Minimal expected return c and the L1 budget, which is pinned at 1
/// (no short selling).
struct ConstraintSet {
  double min_return = 0.0;
  static constexpr double l1_budget = 1.0;
};

struct AllocationOptions {
  int restarts = 16;
  double tolerance = 1e-10;
  std::uint64_t seed = 0xA110CULL;
};

/// Throws ValidationError unless mu > 0, sigma is square, symmetric within
/// 1e-9 and has no eigenvalue below -1e-9.
void validate_moments(const MomentEstimate<double>& m);

/// log(bᵀμ) - bᵀΣb / (2 (bᵀμ)²): the quadratic Taylor surrogate of E log(bᵀX).
template <typename DerivedB, typename Scalar>
Scalar allocation_utility(const Eigen::MatrixBase<DerivedB>& b, const MomentEstimate<Scalar>& m) {
  const Scalar ret = b.dot(m.mu);
  if (!(ret > Scalar(0))) {
    throw ValidationError("allocation_utility: expected portfolio return must be positive");
  }
  const Scalar risk = b.dot(m.sigma * b);
  using std::log;
  return log(ret) - risk / (Scalar(2) * ret * ret);
}

/// Gradient of allocation_utility with respect to b.
template <typename DerivedB, typename Scalar>
Vector<Scalar> allocation_utility_gradient(const Eigen::MatrixBase<DerivedB>& b,
                                           const MomentEstimate<Scalar>& m) {
  const Scalar s = b.dot(m.mu);
  const Vector<Scalar> sb = m.sigma * b;
  const Scalar q = b.dot(sb);
  return m.mu / s - sb / (s * s) + m.mu * (q / (s * s * s));
}

template <typename DerivedB, typename Scalar>
Matrix<Scalar> allocation_utility_hessian(const Eigen::MatrixBase<DerivedB>& b,
                                          const MomentEstimate<Scalar>& m) {
  const Scalar s = b.dot(m.mu);
  const Vector<Scalar> sb = m.sigma * b;
  const Scalar q = b.dot(sb);
  const Scalar s2 = s * s;
  const Matrix<Scalar> mm = m.mu * m.mu.transpose();
  const Matrix<Scalar> cross = sb * m.mu.transpose() + m.mu * sb.transpose();
  return -mm / s2 - m.sigma / s2 + cross * (Scalar(2) / (s2 * s)) - mm * (Scalar(3) * q / (s2 * s2));
}

/// Maximizes allocation_utility over the simplex intersected with bᵀμ >= c.
PortfolioWeights optimize_allocation(const MomentEstimate<double>& m, const ConstraintSet& cons,
                                     const AllocationOptions& opts = {});

/// Max-norm of the projected stationarity condition of the Lagrangian at b,
/// with the simplex and return-floor multipliers recovered by least squares.
/// Dual infeasibility (wrong-signed multipliers on active bounds) counts
/// toward the residual.
double kkt_residual(const PortfolioWeights& b, const MomentEstimate<double>& m,
                    const ConstraintSet& cons);

/// (1 / 2c²) · ‖b̂‖₁² · max_i Σ_j |σ_ij|, bounding the utility shift caused by
/// replacing Σ with Σ̂ when b̂ᵀμ >= c.
template <typename DerivedB, typename DerivedE>
typename DerivedB::Scalar robustness_bound(const Eigen::MatrixBase<DerivedB>& b_hat,
                                           typename DerivedB::Scalar c,
                                           const Eigen::MatrixBase<DerivedE>& sigma_err) {
  using Scalar = typename DerivedB::Scalar;
  if (!(c > Scalar(0))) throw ValidationError("robustness_bound: c must be positive");
  if (sigma_err.rows() != b_hat.size() || sigma_err.cols() != b_hat.size()) {
    throw ValidationError("robustness_bound: sigma_err shape does not match weights");
  }
  const Scalar l1 = b_hat.cwiseAbs().sum();
  const Scalar row_sum = sigma_err.cwiseAbs().rowwise().sum().maxCoeff();
  return l1 * l1 * row_sum / (Scalar(2) * c * c);
}

}  // namespace rlos
