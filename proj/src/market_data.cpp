#include "rlos/market_data.hpp"

#include "rlos/random.hpp"
#include "rlos/text_format.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <unordered_map>

namespace rlos {
namespace {

constexpr std::string_view kHeader = "asset,period,open,high,low,close,volume";

bool all_integer_labels(const std::vector<std::string>& labels) {
  return std::all_of(labels.begin(), labels.end(), [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
  });
}

StateTensor make_state(const Eigen::Ref<const Eigen::MatrixXd>& open,
                       const Eigen::Ref<const Eigen::MatrixXd>& high,
                       const Eigen::Ref<const Eigen::MatrixXd>& low,
                       const Eigen::Ref<const Eigen::MatrixXd>& volume, Index t, Index n) {
  if (n < 1) throw ValidationError("state_tensor: history length must be >= 1");
  if (t < n) throw ValidationError("state_tensor: insufficient history before period " + std::to_string(t));
  if (t > open.cols()) throw ValidationError("state_tensor: period out of range");
  const Index first = t - n;
  const Eigen::ArrayXd last_open = open.col(t - 1).array();
  StateTensor s;
  s.channels[0] = (open.middleCols(first, n).array().colwise() / last_open).matrix();
  s.channels[1] = (high.middleCols(first, n).array().colwise() / last_open).matrix();
  s.channels[2] = (low.middleCols(first, n).array().colwise() / last_open).matrix();
  Eigen::MatrixXd vol = volume.middleCols(first, n);
  for (Index a = 0; a < vol.rows(); ++a) {
    const double mean = vol.row(a).mean();
    if (mean > 0.0) vol.row(a) /= mean;
  }
  s.channels[3] = std::move(vol);
  return s;
}

}  // namespace

bool AssetPanel::operator==(const AssetPanel& o) const {
  return asset_ids == o.asset_ids && period_labels == o.period_labels && open == o.open &&
         high == o.high && low == o.low && close == o.close && volume == o.volume;
}

void validate_panel(const AssetPanel& p) {
  const Index d = p.open.rows();
  const Index t = p.open.cols();
  if (d < 1 || t < 1) throw ValidationError("panel: needs at least one asset and one period");
  for (const Eigen::MatrixXd* m : {&p.high, &p.low, &p.close, &p.volume}) {
    if (m->rows() != d || m->cols() != t) throw ValidationError("panel: OHLCV matrices differ in shape");
  }
  if (static_cast<Index>(p.asset_ids.size()) != d) throw ValidationError("panel: asset id count mismatch");
  if (!p.period_labels.empty() && static_cast<Index>(p.period_labels.size()) != t) {
    throw ValidationError("panel: period label count mismatch");
  }
  for (Index a = 0; a < d; ++a) {
    for (Index j = 0; j < t; ++j) {
      const double o = p.open(a, j), h = p.high(a, j), l = p.low(a, j), c = p.close(a, j);
      const std::string where = " (asset " + p.asset_ids[static_cast<std::size_t>(a)] + ", period " +
                                std::to_string(j) + ")";
      if (!std::isfinite(o) || !std::isfinite(h) || !std::isfinite(l) || !std::isfinite(c) ||
          !std::isfinite(p.volume(a, j))) {
        throw ValidationError("panel: non-finite value" + where);
      }
      if (o <= 0.0 || h <= 0.0 || l <= 0.0 || c <= 0.0) throw ValidationError("panel: non-positive price" + where);
      if (h < l) throw ValidationError("panel: high < low" + where);
      if (o < l || o > h || c < l || c > h) throw ValidationError("panel: open/close outside [low, high]" + where);
      if (p.volume(a, j) < 0.0) throw ValidationError("panel: negative volume" + where);
    }
  }
}

AssetPanel load_panel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open panel file: " + path.string());

  struct Row {
    double open, high, low, close, volume;
  };
  std::vector<std::string> assets;
  std::unordered_map<std::string, std::size_t> asset_index;
  std::vector<std::map<std::string, Row>> rows;

  std::string line;
  if (!std::getline(in, line) || trim(line) != kHeader) {
    throw ValidationError("panel file " + path.string() + ": header must be '" + std::string(kHeader) + "'");
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split(trim(line), ',');
    const std::string where = path.string() + ":" + std::to_string(line_no);
    if (fields.size() != 7) throw ValidationError("malformed row at " + where);
    const std::string asset(trim(fields[0]));
    const std::string period(trim(fields[1]));
    if (asset.empty() || period.empty()) throw ValidationError("malformed row at " + where);
    Row r{parse_double(fields[2], where), parse_double(fields[3], where), parse_double(fields[4], where),
          parse_double(fields[5], where), parse_double(fields[6], where)};
    if (r.open <= 0.0 || r.high <= 0.0 || r.low <= 0.0 || r.close <= 0.0) {
      throw ValidationError("non-positive price at " + where);
    }
    if (r.high < r.low) throw ValidationError("high < low at " + where);
    auto [it, inserted] = asset_index.try_emplace(asset, assets.size());
    if (inserted) {
      assets.push_back(asset);
      rows.emplace_back();
    }
    if (!rows[it->second].emplace(period, r).second) {
      throw ValidationError("duplicate (asset, period) at " + where);
    }
  }
  if (assets.empty()) throw ValidationError("panel file " + path.string() + " has no rows");

  std::vector<std::string> labels;
  for (const auto& [label, _] : rows.front()) labels.push_back(label);
  for (std::size_t a = 1; a < rows.size(); ++a) {
    if (rows[a].size() != labels.size() ||
        !std::equal(labels.begin(), labels.end(), rows[a].begin(),
                    [](const std::string& l, const auto& kv) { return l == kv.first; })) {
      throw ValidationError("row count mismatch: asset " + assets[a] + " does not cover the same periods as " +
                            assets.front());
    }
  }
  if (all_integer_labels(labels)) {
    std::stable_sort(labels.begin(), labels.end(), [](const std::string& x, const std::string& y) {
      return parse_integer(x, "period") < parse_integer(y, "period");
    });
  }

  AssetPanel p;
  p.asset_ids = assets;
  p.period_labels = labels;
  const auto d = static_cast<Index>(assets.size());
  const auto t = static_cast<Index>(labels.size());
  p.open.resize(d, t);
  p.high.resize(d, t);
  p.low.resize(d, t);
  p.close.resize(d, t);
  p.volume.resize(d, t);
  for (Index a = 0; a < d; ++a) {
    for (Index j = 0; j < t; ++j) {
      const Row& r = rows[static_cast<std::size_t>(a)].at(labels[static_cast<std::size_t>(j)]);
      p.open(a, j) = r.open;
      p.high(a, j) = r.high;
      p.low(a, j) = r.low;
      p.close(a, j) = r.close;
      p.volume(a, j) = r.volume;
    }
  }
  validate_panel(p);
  return p;
}

void save_panel(const AssetPanel& p, const std::filesystem::path& path) {
  validate_panel(p);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write panel file: " + path.string());
  out << kHeader << '\n';
  for (Index a = 0; a < p.assets(); ++a) {
    for (Index j = 0; j < p.periods(); ++j) {
      const std::string label =
          p.period_labels.empty() ? std::to_string(j) : p.period_labels[static_cast<std::size_t>(j)];
      out << p.asset_ids[static_cast<std::size_t>(a)] << ',' << label << ',' << format_double(p.open(a, j)) << ','
          << format_double(p.high(a, j)) << ',' << format_double(p.low(a, j)) << ','
          << format_double(p.close(a, j)) << ',' << format_double(p.volume(a, j)) << '\n';
    }
  }
  if (!out) throw RuntimeFailure("failed writing panel file: " + path.string());
}

FluctuationVector fluctuation(const AssetPanel& panel, Index t) {
  if (t < 0 || t >= panel.periods()) {
    throw ValidationError("fluctuation: period " + std::to_string(t) + " out of range");
  }
  return panel.close.col(t).cwiseQuotient(panel.open.col(t));
}

Eigen::MatrixXd fluctuation_matrix(const AssetPanel& panel) {
  return panel.close.cwiseQuotient(panel.open);
}

StateTensor state_tensor(const AssetPanel& panel, Index t, Index n) {
  return make_state(panel.open, panel.high, panel.low, panel.volume, t, n);
}

PanelView::PanelView(const AssetPanel& panel, const Eigen::MatrixXd& fluctuations, Index end)
    : panel_(&panel), fluctuations_(&fluctuations), end_(end) {
  if (end < 0 || end > panel.periods()) throw ValidationError("PanelView: end out of range");
  if (fluctuations.rows() != panel.assets() || fluctuations.cols() != panel.periods()) {
    throw ValidationError("PanelView: fluctuation matrix does not match panel");
  }
}

FluctuationVector PanelView::fluctuation(Index t) const {
  if (t < 0 || t >= end_) throw ValidationError("PanelView: period " + std::to_string(t) + " not visible");
  return fluctuations_->col(t);
}

PanelView PanelView::truncated(Index end) const {
  if (end < 0 || end > end_) throw ValidationError("PanelView: cannot widen a view");
  return PanelView(*panel_, *fluctuations_, end);
}

StateTensor PanelView::state_tensor(Index t, Index n) const {
  if (t > end_) throw ValidationError("PanelView: state beyond visible window");
  return make_state(open(), high(), low(), volume(), t, n);
}

std::vector<Index> bootstrap_indices(Index universe_size, Index k, std::uint64_t seed) {
  if (universe_size < 1) throw ValidationError("bootstrap_select: empty universe");
  if (k < 1) throw ValidationError("bootstrap_select: k must be >= 1");
  Rng rng(seed);
  std::vector<Index> picks(static_cast<std::size_t>(k));
  for (auto& pick : picks) pick = static_cast<Index>(rng.below(static_cast<std::uint64_t>(universe_size)));
  return picks;
}

AssetPanel bootstrap_select(const AssetPanel& universe, Index k, std::uint64_t seed) {
  const auto picks = bootstrap_indices(universe.assets(), k, seed);
  AssetPanel out;
  const Index t = universe.periods();
  out.period_labels = universe.period_labels;
  out.open.resize(k, t);
  out.high.resize(k, t);
  out.low.resize(k, t);
  out.close.resize(k, t);
  out.volume.resize(k, t);
  std::unordered_map<Index, int> seen;
  for (Index j = 0; j < k; ++j) {
    const Index src = picks[static_cast<std::size_t>(j)];
    const int count = ++seen[src];
    const std::string& id = universe.asset_ids[static_cast<std::size_t>(src)];
    out.asset_ids.push_back(count == 1 ? id : id + "#" + std::to_string(count));
    out.open.row(j) = universe.open.row(src);
    out.high.row(j) = universe.high.row(src);
    out.low.row(j) = universe.low.row(src);
    out.close.row(j) = universe.close.row(src);
    out.volume.row(j) = universe.volume.row(src);
  }
  return out;
}

}  // namespace rlos
