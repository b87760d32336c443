#pragma once

#include "rlos/market_data.hpp"

#include <string>

namespace testing_support {

/// Panel whose close/open ratios are exactly `x`; opens chain from 1.
inline rlos::AssetPanel panel_from_fluctuations(const Eigen::MatrixXd& x) {
  rlos::AssetPanel p;
  const rlos::Index d = x.rows();
  const rlos::Index T = x.cols();
  for (rlos::Index a = 0; a < d; ++a) p.asset_ids.push_back("A" + std::to_string(a));
  for (rlos::Index t = 0; t < T; ++t) p.period_labels.push_back(std::to_string(t));
  p.open.resize(d, T);
  p.close.resize(d, T);
  for (rlos::Index a = 0; a < d; ++a) {
    double price = 1.0;
    for (rlos::Index t = 0; t < T; ++t) {
      p.open(a, t) = price;
      p.close(a, t) = price * x(a, t);
      price = p.close(a, t);
    }
  }
  p.high = p.open.cwiseMax(p.close);
  p.low = p.open.cwiseMin(p.close);
  p.volume = Eigen::MatrixXd::Constant(d, T, 1000.0);
  return p;
}

}  // namespace testing_support
