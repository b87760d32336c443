#pragma once

#include "rlos/types.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace rlos {

/// Aligned OHLCV series: every matrix is assets × periods.
struct AssetPanel {
  std::vector<std::string> asset_ids;
  std::vector<std::string> period_labels;
  Eigen::MatrixXd open;
  Eigen::MatrixXd high;
  Eigen::MatrixXd low;
  Eigen::MatrixXd close;
  Eigen::MatrixXd volume;

  Index assets() const { return open.rows(); }
  Index periods() const { return open.cols(); }

  bool operator==(const AssetPanel&) const;
};

/// Throws ValidationError on shape mismatches, non-positive or non-finite
/// prices, negative volume, or OHLC ordering violations.
void validate_panel(const AssetPanel& panel);

/// Reads the `asset,period,open,high,low,close,volume` CSV format. Assets keep
/// their order of first appearance; periods are sorted ascending (numerically
/// when every label is an integer, lexically otherwise, which orders ISO
/// dates). Every asset must cover exactly the same periods.
AssetPanel load_panel(const std::filesystem::path& path);

/// Writes the CSV format read by load_panel with round-trip exact numbers.
void save_panel(const AssetPanel& panel, const std::filesystem::path& path);

FluctuationVector fluctuation(const AssetPanel& panel, Index t);

/// close / open for every (asset, period).
Eigen::MatrixXd fluctuation_matrix(const AssetPanel& panel);

enum class StateChannel : int { Open = 0, High = 1, Low = 2, Volume = 3 };

/// d × n × 4 observation: channel(c) is a d × n matrix covering the n
/// periods before the decision period.
struct StateTensor {
  std::array<Eigen::MatrixXd, 4> channels;

  Index assets() const { return channels[0].rows(); }
  Index history() const { return channels[0].cols(); }
  const Eigen::MatrixXd& channel(StateChannel c) const { return channels[static_cast<int>(c)]; }
};

/// Periods t-n … t-1; prices divided by each asset's open at t-1, volume by
/// the asset's mean volume over the slab (or 1 when that mean is 0).
StateTensor state_tensor(const AssetPanel& panel, Index t, Index n);

/// Read-only window onto the periods [0, end) of a panel. Strategies only
/// ever receive a view, so data at or after the decision period is out of
/// reach.
class PanelView {
 public:
  PanelView(const AssetPanel& panel, const Eigen::MatrixXd& fluctuations, Index end);

  Index assets() const { return panel_->assets(); }
  Index end() const { return end_; }

  auto open() const { return panel_->open.leftCols(end_); }
  auto high() const { return panel_->high.leftCols(end_); }
  auto low() const { return panel_->low.leftCols(end_); }
  auto close() const { return panel_->close.leftCols(end_); }
  auto volume() const { return panel_->volume.leftCols(end_); }
  auto fluctuations() const { return fluctuations_->leftCols(end_); }

  FluctuationVector fluctuation(Index t) const;
  StateTensor state_tensor(Index t, Index n) const;
  /// A narrower view ending at `end` <= this->end().
  PanelView truncated(Index end) const;

 private:
  const AssetPanel* panel_;
  const Eigen::MatrixXd* fluctuations_;
  Index end_;
};

/// k assets drawn uniformly with replacement (Rng::below on a stream seeded
/// with `seed`). Repeated picks keep distinct ids: the first occurrence
/// keeps the original id, later ones get "#2", "#3", ... appended.
AssetPanel bootstrap_select(const AssetPanel& universe, Index k, std::uint64_t seed);

/// Asset indices used by bootstrap_select, in draw order.
std::vector<Index> bootstrap_indices(Index universe_size, Index k, std::uint64_t seed);

}  // namespace rlos
