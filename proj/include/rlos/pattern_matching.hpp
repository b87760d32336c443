#pragma once

#include "rlos/market_data.hpp"
#include "rlos/rlos_core.hpp"
#include "rlos/types.hpp"

#include <vector>

namespace rlos {

/// Fluctuations of the `span` periods before `anchor`, one column each.
struct BackgroundMatrix {
  Eigen::MatrixXd values;
  Index anchor = 0;
  Index span = 0;
};

/// Anchors i (span <= i < anchor) whose background correlates with the
/// anchor's background strictly above `threshold`.
struct SimilarSet {
  Index anchor = 0;
  Index span = 0;
  double threshold = 0.0;
  std::vector<Index> indices;
};

struct RlosParameters {
  Index max_span = 20;   // N
  double threshold = 0;  // rho
  ConstraintSet constraints{};
  AllocationOptions solver{};
};

// The fluctuation-matrix overloads take the d × T matrix of close/open
// ratios; passing only the leftmost k columns is enough for anchor k.

BackgroundMatrix background(const Eigen::Ref<const Eigen::MatrixXd>& fluctuations, Index i, Index n);
BackgroundMatrix background(const AssetPanel& panel, Index i, Index n);

/// Pearson correlation of the two matrices taken as flat vectors; 0 when
/// either has zero variance.
double similarity(const BackgroundMatrix& a, const BackgroundMatrix& b);

template <typename DerivedA, typename DerivedB>
double pearson(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  const double count = static_cast<double>(a.size());
  const auto ca = (a.array() - a.sum() / count).eval();
  const auto cb = (b.array() - b.sum() / count).eval();
  const double sxx = (ca * ca).sum();
  const double syy = (cb * cb).sum();
  if (!(sxx > 0.0) || !(syy > 0.0)) return 0.0;
  const double r = (ca * cb).sum() / std::sqrt(sxx * syy);
  return std::clamp(r, -1.0, 1.0);
}

SimilarSet similar_set(const Eigen::Ref<const Eigen::MatrixXd>& fluctuations, Index k, Index n, double rho);
SimilarSet similar_set(const AssetPanel& panel, Index k, Index n, double rho);

/// Sample mean and unbiased covariance (eigenvalues floored at 0) of the
/// fluctuation vectors at the given periods; needs at least two periods.
MomentEstimate<double> estimate_moments(const Eigen::Ref<const Eigen::MatrixXd>& fluctuations,
                                        const std::vector<Index>& periods);

/// The pattern-matching RLOS portfolio for period k using data before k.
PortfolioWeights rlos_portfolio(const Eigen::Ref<const Eigen::MatrixXd>& fluctuations, Index k,
                                const RlosParameters& params);
PortfolioWeights rlos_portfolio(const AssetPanel& panel, Index k, const RlosParameters& params);

}  // namespace rlos
