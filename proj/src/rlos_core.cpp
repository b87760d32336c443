#include "rlos/rlos_core.hpp"

#include <string>

namespace rlos {
namespace {

struct UtilityObjective {
  const MomentEstimate<double>& m;

  double value(const Eigen::VectorXd& b) const {
    const double s = b.dot(m.mu);
    if (!(s > 0.0)) return -std::numeric_limits<double>::infinity();
    return std::log(s) - b.dot(m.sigma * b) / (2.0 * s * s);
  }
  Eigen::VectorXd gradient(const Eigen::VectorXd& b) const {
    return allocation_utility_gradient(b, m);
  }
  Eigen::MatrixXd hessian(const Eigen::VectorXd& b) const {
    return allocation_utility_hessian(b, m);
  }
};

}  // namespace

void validate_moments(const MomentEstimate<double>& m) {
  const Index d = m.mu.size();
  if (d < 1) throw ValidationError("moments: empty expectation vector");
  if (m.sigma.rows() != d || m.sigma.cols() != d) {
    throw ValidationError("moments: covariance shape does not match expectation");
  }
  if (!m.mu.allFinite() || !m.sigma.allFinite()) {
    throw ValidationError("moments: non-finite entries");
  }
  if ((m.mu.array() <= 0.0).any()) {
    throw ValidationError("moments: expectation entries must be positive");
  }
  if ((m.sigma - m.sigma.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
    throw ValidationError("moments: covariance is not symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.sigma, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-9) {
    throw ValidationError("moments: covariance is not positive semidefinite");
  }
}

PortfolioWeights optimize_allocation(const MomentEstimate<double>& m, const ConstraintSet& cons,
                                     const AllocationOptions& opts) {
  validate_moments(m);
  if (cons.min_return < 0.0) throw ValidationError("optimize_allocation: c must be >= 0");
  const Index d = m.mu.size();
  const Index top = detail::argmax_lowest(m.mu);
  if (cons.min_return > m.mu(top)) {
    throw ValidationError("optimize_allocation: infeasible, c = " + std::to_string(cons.min_return) +
                          " exceeds the largest expected return");
  }

  // Without risk the utility is log(bᵀμ): all weight on the best asset,
  // lowest index on ties.
  if (m.sigma.cwiseAbs().maxCoeff() == 0.0) {
    PortfolioWeights b = PortfolioWeights::Zero(d);
    b(top) = 1.0;
    return b;
  }

  std::optional<ReturnFloor> floor;
  if (cons.min_return > 0.0) floor = ReturnFloor{m.mu, cons.min_return};

  SimplexSolverOptions solver;
  solver.restarts = opts.restarts;
  solver.tolerance = opts.tolerance;
  solver.seed = opts.seed;
  const UtilityObjective objective{m};
  return maximize_on_simplex(objective, d, floor, solver).weights;
}

double kkt_residual(const PortfolioWeights& b, const MomentEstimate<double>& m,
                    const ConstraintSet& cons) {
  validate_moments(m);
  require_portfolio(b, "kkt_residual");
  const Index d = b.size();
  if (m.mu.size() != d) throw ValidationError("kkt_residual: dimension mismatch");

  const Eigen::VectorXd g = allocation_utility_gradient(b, m);
  constexpr double kAtBound = 1e-12;
  const double slack = b.dot(m.mu) - cons.min_return;
  const bool floor_active = cons.min_return > 0.0 && slack <= 1e-9 * std::max(1.0, cons.min_return);

  std::vector<Index> free;
  for (Index i = 0; i < d; ++i) {
    if (b(i) > kAtBound) free.push_back(i);
  }
  const auto nf = static_cast<Index>(free.size());
  Eigen::MatrixXd basis(nf, floor_active ? 2 : 1);
  Eigen::VectorXd gf(nf);
  for (Index k = 0; k < nf; ++k) {
    const Index i = free[static_cast<std::size_t>(k)];
    basis(k, 0) = 1.0;
    if (floor_active) basis(k, 1) = -m.mu(i);
    gf(k) = g(i);
  }
  const Eigen::VectorXd mult = basis.colPivHouseholderQr().solve(gf);
  const double nu = mult(0);
  const double gamma = floor_active ? mult(1) : 0.0;

  double residual = (gf - basis * mult).cwiseAbs().maxCoeff();
  for (Index i = 0; i < d; ++i) {
    if (b(i) > kAtBound) continue;
    residual = std::max(residual, g(i) - nu + gamma * m.mu(i));
  }
  if (floor_active) residual = std::max(residual, -gamma);
  return std::max(residual, 0.0);
}

}  // namespace rlos
