#pragma once

#include "rlos/market_data.hpp"
#include "rlos/pattern_matching.hpp"
#include "rlos/random.hpp"
#include "rlos/rl_agent.hpp"
#include "rlos/types.hpp"

#include <cstdint>
#include <deque>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace rlos {

struct NaiveAverageSpec {};
struct FollowWinnerSpec {};
struct FollowLoserSpec {};

struct RlosSpec {
  RlosParameters params;
};

struct RlosRlSpec {
  RlosParameters rlos;
  AgentArchitecture arch;
  std::optional<std::filesystem::path> checkpoint;  // otherwise init_agent(arch, init_seed)
  std::uint64_t init_seed = 1;
  std::uint64_t replay_seed = 2;
  Hyperparameters hp;
  bool training = true;
  Index pretrain_steps = 0;  // warm-start steps over the warmup prefix
};

using StrategyConfig = std::variant<NaiveAverageSpec, FollowWinnerSpec, FollowLoserSpec, RlosSpec, RlosRlSpec>;

struct StrategySpec {
  std::string name;  // empty: the kind's default name
  StrategyConfig config;
};

std::string default_name(const StrategyConfig& config);
std::string strategy_name(const StrategySpec& spec);

/// Decision interface. decide() receives a view that ends at the decision
/// period t, so nothing from t onward is reachable; observe() reports the
/// realized fluctuation once the period closes.
class Strategy {
 public:
  virtual ~Strategy() = default;
  virtual const std::string& name() const = 0;
  /// Periods of history needed before the first decision.
  virtual Index warmup() const = 0;
  virtual PortfolioWeights decide(const PanelView& past, Index t) = 0;
  virtual void observe(Index /*t*/, const PortfolioWeights& /*b*/, const FluctuationVector& /*x*/) {}
};

std::unique_ptr<Strategy> make_strategy(const StrategySpec& spec);

struct TrainingLogEntry {
  std::int64_t step = 0;
  double loss = 0.0;
  double rate = 0.0;
};

/// Agent state and per-step training log of an rlosrl strategy; nullptr for
/// every other kind.
const AgentParameters* agent_of(const Strategy& strategy);
const std::vector<TrainingLogEntry>* training_log_of(const Strategy& strategy);

struct Span {
  Index start = 0;
  Index end = 0;

  Index length() const { return end - start; }
  std::string label() const;
  bool operator==(const Span&) const = default;
};

/// Parses "start-end".
Span parse_span(std::string_view text);

struct EquityCurve {
  std::string name;
  Index start = 0;
  std::vector<std::string> asset_ids;
  Eigen::VectorXd wealth;       // S_0 … S_n, S_0 = 1
  Eigen::MatrixXd weights;      // d × n, column s is the portfolio of period start + s
  Eigen::VectorXd log_returns;  // n entries
};

/// Runs the strategy over [span.start, span.end). Requires span.start >=
/// warmup >= strategy.warmup(). Throws ValidationError naming the period
/// when a decision is not a valid portfolio.
EquityCurve run_backtest(Strategy& strategy, const AssetPanel& panel, Span span, Index warmup);
EquityCurve run_backtest(Strategy& strategy, const AssetPanel& panel, Span span);

struct CellMetrics {
  double final_wealth = 1.0;
  double mean_log_return = 0.0;
  double max_drawdown = 0.0;
  double win_rate = 0.0;  // fraction of periods beating naive_average strictly
};

/// Metrics of a curve against the naive_average curve on the same panel.
CellMetrics summarize(const EquityCurve& curve, const EquityCurve& naive);

struct ReportCell {
  std::string strategy;
  Span span;
  std::uint64_t seed = 0;
  EquityCurve curve;
  CellMetrics metrics;
};

/// Cells ordered by span, then seed, then strategy list order.
struct Report {
  std::vector<std::string> strategies;
  std::vector<Span> spans;
  std::vector<std::uint64_t> seeds;
  std::vector<ReportCell> cells;
};

struct CompareOptions {
  Index bootstrap_assets = 0;  // 0: as many as the universe holds
  std::size_t workers = 1;
};

/// Every (span, seed, strategy) cell on bootstrap_select(universe, k, seed).
Report compare(const std::vector<StrategySpec>& strategies, const AssetPanel& universe,
               const std::vector<Span>& spans, const std::vector<std::uint64_t>& seeds,
               const CompareOptions& options = {});

/// Writes curve_<strategy>_<span>_<seed>.csv per cell, summary.csv,
/// summary.txt and span_<span>.svg per span. Returns the files written, in
/// write order. Output bytes depend on the report only.
std::vector<std::filesystem::path> emit_report(const Report& report, const std::filesystem::path& dir);

/// Rebuilds a report from summary.csv and the curve CSVs in `dir`. Wealth
/// metrics are recomputed from the curves; win rates are read back since the
/// naive_average reference curve may not have been written.
Report load_report(const std::filesystem::path& dir);

}  // namespace rlos
