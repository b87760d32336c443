#include "rlos/pattern_matching.hpp"

#include <string>

namespace rlos {

BackgroundMatrix background(const Eigen::Ref<const Eigen::MatrixXd>& fluctuations, Index i, Index n) {
  if (n < 1) throw ValidationError("background: span must be >= 1");
  if (i < n) throw ValidationError("background: insufficient history for anchor " + std::to_string(i));
  if (i > fluctuations.cols()) throw ValidationError("background: anchor out of range");
  return {fluctuations.middleCols(i - n, n), i, n};
}

BackgroundMatrix background(const AssetPanel& panel, Index i, Index n) {
  return background(fluctuation_matrix(panel), i, n);
}

double similarity(const BackgroundMatrix& a, const BackgroundMatrix& b) {
  if (a.values.rows() != b.values.rows() || a.values.cols() != b.values.cols()) {
    throw ValidationError("similarity: background shapes differ");
  }
  return pearson(a.values, b.values);
}

SimilarSet similar_set(const Eigen::Ref<const Eigen::MatrixXd>& fluctuations, Index k, Index n, double rho) {
  if (n < 1) throw ValidationError("similar_set: span must be >= 1");
  if (k < n + 1) throw ValidationError("similar_set: anchor " + std::to_string(k) + " needs more history");
  if (k > fluctuations.cols()) throw ValidationError("similar_set: anchor out of range");
  SimilarSet out{k, n, rho, {}};
  const auto target = fluctuations.middleCols(k - n, n);
  for (Index i = n; i < k; ++i) {
    if (pearson(fluctuations.middleCols(i - n, n), target) > rho) out.indices.push_back(i);
  }
  return out;
}

SimilarSet similar_set(const AssetPanel& panel, Index k, Index n, double rho) {
  return similar_set(fluctuation_matrix(panel), k, n, rho);
}

MomentEstimate<double> estimate_moments(const Eigen::Ref<const Eigen::MatrixXd>& fluctuations,
                                        const std::vector<Index>& periods) {
  if (periods.size() < 2) throw ValidationError("estimate_moments: needs at least two periods");
  const Index d = fluctuations.rows();
  const auto m = static_cast<Index>(periods.size());
  Eigen::MatrixXd samples(d, m);
  for (Index j = 0; j < m; ++j) samples.col(j) = fluctuations.col(periods[static_cast<std::size_t>(j)]);

  MomentEstimate<double> est;
  est.mu = samples.rowwise().mean();
  const Eigen::MatrixXd centered = samples.colwise() - est.mu;
  Eigen::MatrixXd cov = centered * centered.transpose() / static_cast<double>(m - 1);
  cov = 0.5 * (cov + cov.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  if ((eig.eigenvalues().array() < 0.0).any()) {
    const Eigen::VectorXd floored = eig.eigenvalues().cwiseMax(0.0);
    cov = eig.eigenvectors() * floored.asDiagonal() * eig.eigenvectors().transpose();
    cov = 0.5 * (cov + cov.transpose()).eval();
  }
  est.sigma = std::move(cov);
  est.sample_count = m;
  return est;
}

PortfolioWeights rlos_portfolio(const Eigen::Ref<const Eigen::MatrixXd>& fluctuations, Index k,
                                const RlosParameters& params) {
  const Index d = fluctuations.rows();
  if (k < 3) throw ValidationError("rlos_portfolio: period must be >= 3");
  if (k > fluctuations.cols()) throw ValidationError("rlos_portfolio: period out of range");
  const PortfolioWeights uniform = uniform_portfolio(d);

  Eigen::VectorXd combined = Eigen::VectorXd::Zero(d);
  double weight_sum = 0.0;
  bool any = false;
  for (Index n = 2; n <= params.max_span && n + 1 <= k; ++n) {
    const SimilarSet set = similar_set(fluctuations, k, n, params.threshold);
    if (set.indices.size() < 2) continue;
    const MomentEstimate<double> m = estimate_moments(fluctuations, set.indices);
    if (params.constraints.min_return > m.mu.maxCoeff()) continue;
    const PortfolioWeights b = optimize_allocation(m, params.constraints, params.solver);
    double w = 0.0;
    for (Index i : set.indices) w += std::log(b.dot(fluctuations.col(i)));
    combined += w * b;
    weight_sum += w;
    any = true;
  }
  if (!any || weight_sum <= 1e-9) return uniform;
  combined /= weight_sum;
  combined = combined.cwiseMax(0.0);
  const double total = combined.sum();
  if (!(total > 0.0) || !std::isfinite(total)) return uniform;
  return combined / total;
}

PortfolioWeights rlos_portfolio(const AssetPanel& panel, Index k, const RlosParameters& params) {
  return rlos_portfolio(fluctuation_matrix(panel), k, params);
}

}  // namespace rlos
