#include "rlos/backtest.hpp"

#include "rlos/baselines.hpp"
#include "rlos/parallel.hpp"
#include "rlos/text_format.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace rlos {
namespace {

class NaiveAverage final : public Strategy {
 public:
  explicit NaiveAverage(std::string name) : name_(std::move(name)) {}
  const std::string& name() const override { return name_; }
  Index warmup() const override { return 0; }
  PortfolioWeights decide(const PanelView& past, Index) override { return naive_average(past.assets()); }

 private:
  std::string name_;
};

/// Momentum baselines: react to the previous period, uniform when there is none.
class FollowPrevious final : public Strategy {
 public:
  FollowPrevious(std::string name, bool winner) : name_(std::move(name)), winner_(winner) {}
  const std::string& name() const override { return name_; }
  Index warmup() const override { return 0; }
  PortfolioWeights decide(const PanelView& past, Index t) override {
    if (t == 0) return naive_average(past.assets());
    const FluctuationVector prev = past.fluctuation(t - 1);
    return winner_ ? follow_winner(prev) : follow_loser(prev);
  }

 private:
  std::string name_;
  bool winner_;
};

class RlosStrategy final : public Strategy {
 public:
  RlosStrategy(std::string name, RlosParameters params) : name_(std::move(name)), params_(std::move(params)) {
    if (params_.max_span < 2) throw ValidationError("rlos: max_span must be >= 2");
  }
  const std::string& name() const override { return name_; }
  Index warmup() const override { return params_.max_span + 1; }
  PortfolioWeights decide(const PanelView& past, Index t) override {
    return rlos_portfolio(past.fluctuations(), t, params_);
  }

 private:
  std::string name_;
  RlosParameters params_;
};

class RlosRlStrategy final : public Strategy {
 public:
  RlosRlStrategy(std::string name, const RlosRlSpec& spec)
      : name_(std::move(name)),
        spec_(spec),
        params_(spec.checkpoint ? load_checkpoint(*spec.checkpoint, &spec.arch) : init_agent(spec.arch, spec.init_seed)),
        rng_(spec.replay_seed) {
    spec_.hp.validate();
    if (spec_.rlos.max_span < 2) throw ValidationError("rlosrl: max_span must be >= 2");
    if (spec_.pretrain_steps < 0) throw ValidationError("rlosrl: pretrain_steps must be >= 0");
  }

  const std::string& name() const override { return name_; }
  Index warmup() const override { return std::max(spec_.rlos.max_span + 1, spec_.arch.history); }

  PortfolioWeights decide(const PanelView& past, Index t) override {
    if (!started_) {
      started_ = true;
      pretrain(past, t);
    }
    pending_ = make_record(past, t);
    return pending_->action;
  }

  void observe(Index t, const PortfolioWeights& b, const FluctuationVector& x) override {
    if (!pending_ || pending_->period != t) throw ValidationError("rlosrl: observe without a matching decision");
    TradeRecord rec = std::move(*pending_);
    pending_.reset();
    rec.realized = x;
    rec.realized_return = std::log(b.dot(x));
    push(std::move(rec));
    if (spec_.training) train_once(t);
  }

  const AgentParameters& params() const { return params_; }
  const std::vector<TrainingLogEntry>& log() const { return log_; }

 private:
  TradeRecord make_record(const PanelView& past, Index t) const {
    TradeRecord rec;
    rec.period = t;
    rec.advice = rlos_portfolio(past.fluctuations(), t, spec_.rlos);
    rec.state = past.state_tensor(t, spec_.arch.history);
    AgentOutput out = forward(params_, rec.state, rec.advice);
    rec.action = std::move(out.weights);
    rec.predicted_return = out.predicted_return;
    return rec;
  }

  void push(TradeRecord rec) {
    if (!store_.empty() && rec.period != store_.back().period + 1) {
      throw ValidationError("rlosrl: replay store must hold consecutive periods");
    }
    store_.push_back(std::move(rec));
  }

  void train_once(Index t) {
    const auto picks = sample_replay(t, store_.front().period, spec_.hp.lambda, spec_.hp.batch_size, rng_);
    std::vector<TradeRecord> batch;
    batch.reserve(picks.size());
    for (Index p : picks) batch.push_back(store_[static_cast<std::size_t>(p - store_.front().period)]);
    const double rate = spec_.hp.learning_rate(step_);
    const double loss = train_step(params_, velocity_, batch, spec_.hp, step_);
    log_.push_back({step_, loss, rate});
    ++step_;
  }

  // Warm start over periods before the first trading period.
  void pretrain(const PanelView& past, Index t) {
    if (spec_.pretrain_steps == 0) return;
    const Index first = std::max<Index>(spec_.arch.history, 3);
    if (first >= t) return;
    for (Index p = first; p < t; ++p) {
      const PanelView upto = past.truncated(p);
      TradeRecord rec = make_record(upto, p);
      rec.realized = past.fluctuation(p);
      rec.realized_return = std::log(rec.action.dot(rec.realized));
      push(std::move(rec));
    }
    for (Index s = 0; s < spec_.pretrain_steps; ++s) train_once(t - 1);
  }

  std::string name_;
  RlosRlSpec spec_;
  AgentParameters params_;
  Eigen::VectorXd velocity_;
  Rng rng_;
  std::deque<TradeRecord> store_;
  std::optional<TradeRecord> pending_;
  std::vector<TrainingLogEntry> log_;
  std::int64_t step_ = 0;
  bool started_ = false;
};

bool filename_safe(const std::string& name) {
  if (name.empty()) return false;
  return std::all_of(name.begin(), name.end(), [](char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || (ch >= '0' && ch <= '9') || ch == '_' ||
           ch == '.';
  });
}

double max_drawdown(const Eigen::VectorXd& wealth) {
  double peak = 0.0;
  double worst = 0.0;
  for (Index i = 0; i < wealth.size(); ++i) {
    peak = std::max(peak, wealth(i));
    worst = std::max(worst, 1.0 - wealth(i) / peak);
  }
  return worst;
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  out << bytes;
  if (!out) throw RuntimeFailure("failed writing " + path.string());
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string curve_filename(const ReportCell& cell) {
  return "curve_" + cell.strategy + "_" + cell.span.label() + "_" + std::to_string(cell.seed) + ".csv";
}

std::string curve_csv(const EquityCurve& c) {
  std::ostringstream out;
  out << "step,period,wealth,log_return";
  for (const auto& id : c.asset_ids) out << ",w_" << id;
  out << '\n';
  out << "0,," << format_double(c.wealth(0)) << ',';
  for (std::size_t a = 0; a < c.asset_ids.size(); ++a) out << ',';
  out << '\n';
  for (Index s = 0; s < c.log_returns.size(); ++s) {
    out << s + 1 << ',' << c.start + s << ',' << format_double(c.wealth(s + 1)) << ','
        << format_double(c.log_returns(s));
    for (Index a = 0; a < c.weights.rows(); ++a) out << ',' << format_double(c.weights(a, s));
    out << '\n';
  }
  return out.str();
}

EquityCurve parse_curve(const std::string& text, const std::string& name, Index start, const std::string& where) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(where + ": empty curve file");
  const auto header = split(line, ',');
  if (header.size() < 4 || header[0] != "step" || header[1] != "period" || header[2] != "wealth" ||
      header[3] != "log_return") {
    throw ValidationError(where + ": unexpected curve header");
  }
  EquityCurve c;
  c.name = name;
  c.start = start;
  for (std::size_t i = 4; i < header.size(); ++i) {
    if (header[i].rfind("w_", 0) != 0) throw ValidationError(where + ": weight column without w_ prefix");
    c.asset_ids.push_back(header[i].substr(2));
  }
  std::vector<double> wealth;
  std::vector<double> rets;
  std::vector<std::vector<double>> weights;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != header.size()) throw ValidationError(where + ": ragged row");
    const auto step = parse_integer(f[0], where);
    if (step != static_cast<Index>(wealth.size())) throw ValidationError(where + ": steps out of order");
    wealth.push_back(parse_double(f[2], where));
    if (step == 0) continue;
    if (parse_integer(f[1], where) != start + step - 1) throw ValidationError(where + ": period does not match span");
    rets.push_back(parse_double(f[3], where));
    std::vector<double> w;
    for (std::size_t i = 4; i < f.size(); ++i) w.push_back(parse_double(f[i], where));
    weights.push_back(std::move(w));
  }
  if (wealth.empty()) throw ValidationError(where + ": no wealth rows");
  c.wealth = Eigen::Map<const Eigen::VectorXd>(wealth.data(), static_cast<Index>(wealth.size()));
  c.log_returns = Eigen::Map<const Eigen::VectorXd>(rets.data(), static_cast<Index>(rets.size()));
  c.weights.resize(static_cast<Index>(c.asset_ids.size()), static_cast<Index>(weights.size()));
  for (std::size_t s = 0; s < weights.size(); ++s) {
    for (std::size_t a = 0; a < weights[s].size(); ++a) {
      c.weights(static_cast<Index>(a), static_cast<Index>(s)) = weights[s][a];
    }
  }
  return c;
}

std::string summary_csv(const Report& r) {
  std::ostringstream out;
  out << "strategy,span,seed,periods,final_wealth,mean_log_return,max_drawdown,win_rate\n";
  for (const auto& cell : r.cells) {
    out << cell.strategy << ',' << cell.span.label() << ',' << cell.seed << ',' << cell.curve.log_returns.size() << ','
        << format_double(cell.metrics.final_wealth) << ',' << format_double(cell.metrics.mean_log_return) << ','
        << format_double(cell.metrics.max_drawdown) << ',' << format_double(cell.metrics.win_rate) << '\n';
  }
  return out.str();
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string summary_text(const Report& r) {
  std::ostringstream out;
  auto join = [](const auto& items, auto&& fmt) {
    std::string s;
    for (const auto& item : items) s += (s.empty() ? "" : ", ") + fmt(item);
    return s;
  };
  out << "strategies: " << join(r.strategies, [](const std::string& s) { return s; }) << '\n';
  out << "spans: " << join(r.spans, [](const Span& s) { return s.label(); }) << '\n';
  out << "seeds: " << join(r.seeds, [](std::uint64_t s) { return std::to_string(s); }) << '\n';
  std::size_t width = 8;
  for (const auto& s : r.strategies) width = std::max(width, s.size());
  std::string group;
  for (const auto& cell : r.cells) {
    const std::string g = "span " + cell.span.label() + " seed " + std::to_string(cell.seed);
    if (g != group) {
      group = g;
      out << "\n[" << g << "]\n";
      out << pad("strategy", width + 2) << pad("final_wealth", 14) << pad("mean_log_ret", 14) << pad("max_drawdown", 14)
          << "win_rate\n";
    }
    out << pad(cell.strategy, width + 2) << pad(format_fixed(cell.metrics.final_wealth, 6), 14)
        << pad(format_fixed(cell.metrics.mean_log_return, 6), 14) << pad(format_fixed(cell.metrics.max_drawdown, 6), 14)
        << format_fixed(cell.metrics.win_rate, 4) << '\n';
  }
  return out.str();
}

// Wealth averaged over seeds, one polyline per strategy.
std::string span_svg(const Report& r, const Span& span) {
  constexpr double kWidth = 720.0;
  constexpr double kHeight = 400.0;
  constexpr double kLeft = 60.0;
  constexpr double kRight = 160.0;
  constexpr double kTop = 30.0;
  constexpr double kBottom = 40.0;
  constexpr std::array<const char*, 8> kColors{"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                               "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::vector<std::pair<std::string, Eigen::VectorXd>> lines;
  for (const auto& name : r.strategies) {
    Eigen::VectorXd sum;
    int count = 0;
    for (const auto& cell : r.cells) {
      if (cell.strategy != name || !(cell.span == span)) continue;
      if (count == 0) sum = Eigen::VectorXd::Zero(cell.curve.wealth.size());
      sum += cell.curve.wealth;
      ++count;
    }
    if (count > 0) lines.emplace_back(name, sum / count);
  }
  double lo = 1.0;
  double hi = 1.0;
  Index steps = 1;
  for (const auto& [name, w] : lines) {
    lo = std::min(lo, w.minCoeff());
    hi = std::max(hi, w.maxCoeff());
    steps = std::max<Index>(steps, w.size() - 1);
  }
  if (hi - lo < 1e-12) {
    lo -= 0.01;
    hi += 0.01;
  }
  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](Index s) { return kLeft + plot_w * static_cast<double>(s) / static_cast<double>(steps); };
  auto py = [&](double v) { return kTop + plot_h * (hi - v) / (hi - lo); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kLeft << "\" y=\"20\" font-family=\"sans-serif\" font-size=\"14\">wealth, periods "
      << span.label() << "</text>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + plot_h << "\" x2=\"" << kLeft + plot_w << "\" y2=\""
      << kTop + plot_h << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kTop + plot_h
      << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = lo + (hi - lo) * k / 4.0;
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << format_fixed(py(v) + 4, 2)
        << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" << format_fixed(v, 3) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + plot_w << "\" y=\"" << kTop + plot_h + 16
      << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" << steps << "</text>\n";
  out << "<text x=\"" << kLeft << "\" y=\"" << kTop + plot_h + 16
      << "\" font-family=\"sans-serif\" font-size=\"10\">0</text>\n";
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& [name, w] = lines[i];
    const char* color = kColors[i % kColors.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (Index s = 0; s < w.size(); ++s) out << (s ? " " : "") << format_fixed(px(s), 2) << ',' << format_fixed(py(w(s)), 2);
    out << "\"/>\n";
    const double ly = kTop + 14.0 * static_cast<double>(i + 1);
    out << "<line x1=\"" << kLeft + plot_w + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << kLeft + plot_w + 30
        << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kLeft + plot_w + 34 << "\" y=\"" << ly
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << name << "</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace

std::string default_name(const StrategyConfig& config) {
  static constexpr std::array<const char*, 5> kNames{"naive_average", "follow_winner", "follow_loser", "rlos", "rlosrl"};
  return kNames[config.index()];
}

std::string strategy_name(const StrategySpec& spec) {
  return spec.name.empty() ? default_name(spec.config) : spec.name;
}

std::unique_ptr<Strategy> make_strategy(const StrategySpec& spec) {
  std::string name = strategy_name(spec);
  if (!filename_safe(name)) throw ValidationError("strategy name '" + name + "' must use [A-Za-z0-9_.]");
  return std::visit(
      [&](const auto& cfg) -> std::unique_ptr<Strategy> {
        using T = std::decay_t<decltype(cfg)>;
        if constexpr (std::is_same_v<T, NaiveAverageSpec>) {
          return std::make_unique<NaiveAverage>(std::move(name));
        } else if constexpr (std::is_same_v<T, FollowWinnerSpec>) {
          return std::make_unique<FollowPrevious>(std::move(name), true);
        } else if constexpr (std::is_same_v<T, FollowLoserSpec>) {
          return std::make_unique<FollowPrevious>(std::move(name), false);
        } else if constexpr (std::is_same_v<T, RlosSpec>) {
          return std::make_unique<RlosStrategy>(std::move(name), cfg.params);
        } else {
          return std::make_unique<RlosRlStrategy>(std::move(name), cfg);
        }
      },
      spec.config);
}

const AgentParameters* agent_of(const Strategy& strategy) {
  const auto* rl = dynamic_cast<const RlosRlStrategy*>(&strategy);
  return rl ? &rl->params() : nullptr;
}

const std::vector<TrainingLogEntry>* training_log_of(const Strategy& strategy) {
  const auto* rl = dynamic_cast<const RlosRlStrategy*>(&strategy);
  return rl ? &rl->log() : nullptr;
}

std::string Span::label() const { return std::to_string(start) + "-" + std::to_string(end); }

Span parse_span(std::string_view text) {
  const auto parts = split(trim(text), '-');
  if (parts.size() != 2) throw ValidationError("span '" + std::string(text) + "' must look like start-end");
  Span s{parse_integer(parts[0], "span"), parse_integer(parts[1], "span")};
  if (s.start < 0 || s.end < s.start) throw ValidationError("span '" + std::string(text) + "' is empty or reversed");
  return s;
}

EquityCurve run_backtest(Strategy& strategy, const AssetPanel& panel, Span span, Index warmup) {
  validate_panel(panel);
  if (warmup < strategy.warmup()) {
    throw ValidationError(strategy.name() + ": warmup " + std::to_string(warmup) + " below the strategy's minimum " +
                          std::to_string(strategy.warmup()));
  }
  if (span.start < warmup) throw ValidationError(strategy.name() + ": span starts before the warmup ends");
  if (span.end > panel.periods() || span.end < span.start) {
    throw ValidationError(strategy.name() + ": span " + span.label() + " outside the panel");
  }
  const Eigen::MatrixXd fluct = fluctuation_matrix(panel);
  const Index n = span.length();
  const Index d = panel.assets();

  EquityCurve c;
  c.name = strategy.name();
  c.start = span.start;
  c.asset_ids = panel.asset_ids;
  c.wealth.resize(n + 1);
  c.weights.resize(d, n);
  c.log_returns.resize(n);
  c.wealth(0) = 1.0;
  for (Index s = 0; s < n; ++s) {
    const Index t = span.start + s;
    const PanelView past(panel, fluct, t);
    const PortfolioWeights b = strategy.decide(past, t);
    if (b.size() != d || !is_valid_portfolio(b)) {
      throw ValidationError(strategy.name() + ": invalid portfolio at period " + std::to_string(t));
    }
    const FluctuationVector x = fluct.col(t);
    const double growth = b.dot(x);
    c.weights.col(s) = b;
    c.log_returns(s) = std::log(growth);
    c.wealth(s + 1) = c.wealth(s) * growth;
    strategy.observe(t, b, x);
  }
  return c;
}

EquityCurve run_backtest(Strategy& strategy, const AssetPanel& panel, Span span) {
  return run_backtest(strategy, panel, span, strategy.warmup());
}

CellMetrics summarize(const EquityCurve& curve, const EquityCurve& naive) {
  if (curve.log_returns.size() != naive.log_returns.size()) {
    throw ValidationError("summarize: reference curve length differs");
  }
  CellMetrics m;
  const Index n = curve.log_returns.size();
  m.final_wealth = curve.wealth(curve.wealth.size() - 1);
  m.max_drawdown = max_drawdown(curve.wealth);
  if (n > 0) {
    m.mean_log_return = curve.log_returns.mean();
    m.win_rate = static_cast<double>((curve.log_returns.array() > naive.log_returns.array()).count()) /
                 static_cast<double>(n);
  }
  return m;
}

Report compare(const std::vector<StrategySpec>& strategies, const AssetPanel& universe,
               const std::vector<Span>& spans, const std::vector<std::uint64_t>& seeds,
               const CompareOptions& options) {
  if (strategies.empty()) throw ValidationError("compare: no strategies");
  if (seeds.empty()) throw ValidationError("compare: no seeds");
  validate_panel(universe);
  Report report;
  report.spans = spans;
  report.seeds = seeds;
  for (const auto& s : strategies) {
    const std::string name = strategy_name(s);
    if (std::find(report.strategies.begin(), report.strategies.end(), name) != report.strategies.end()) {
      throw ValidationError("compare: duplicate strategy name " + name);
    }
    report.strategies.push_back(name);
    make_strategy(s);  // surface configuration errors before any work starts
  }
  const Index k = options.bootstrap_assets > 0 ? options.bootstrap_assets : universe.assets();

  std::vector<AssetPanel> panels;
  for (std::uint64_t seed : seeds) panels.push_back(bootstrap_select(universe, k, seed));

  const std::size_t per_group = strategies.size() + 1;  // last slot: naive reference
  const std::size_t groups = spans.size() * seeds.size();
  std::vector<EquityCurve> curves(groups * per_group);
  parallel_for(curves.size(), options.workers, [&](std::size_t i) {
    const std::size_t group = i / per_group;
    const std::size_t slot = i % per_group;
    const Span& span = spans[group / seeds.size()];
    const AssetPanel& panel = panels[group % seeds.size()];
    const StrategySpec spec = slot < strategies.size() ? strategies[slot] : StrategySpec{"", NaiveAverageSpec{}};
    auto strategy = make_strategy(spec);
    curves[i] = run_backtest(*strategy, panel, span);
  });

  for (std::size_t group = 0; group < groups; ++group) {
    const EquityCurve& naive = curves[group * per_group + strategies.size()];
    for (std::size_t slot = 0; slot < strategies.size(); ++slot) {
      ReportCell cell;
      cell.strategy = report.strategies[slot];
      cell.span = spans[group / seeds.size()];
      cell.seed = seeds[group % seeds.size()];
      cell.curve = std::move(curves[group * per_group + slot]);
      cell.metrics = summarize(cell.curve, naive);
      report.cells.push_back(std::move(cell));
    }
  }
  return report;
}

std::vector<std::filesystem::path> emit_report(const Report& report, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw RuntimeFailure("cannot create " + dir.string() + ": " + ec.message());
  std::vector<std::filesystem::path> written;
  auto emit = [&](const std::string& name, const std::string& bytes) {
    write_file(dir / name, bytes);
    written.push_back(dir / name);
  };
  for (const auto& cell : report.cells) emit(curve_filename(cell), curve_csv(cell.curve));
  emit("summary.csv", summary_csv(report));
  emit("summary.txt", summary_text(report));
  for (const auto& span : report.spans) emit("span_" + span.label() + ".svg", span_svg(report, span));
  return written;
}

Report load_report(const std::filesystem::path& dir) {
  const std::string where = (dir / "summary.csv").string();
  std::istringstream in(read_file(dir / "summary.csv"));
  std::string line;
  if (!std::getline(in, line) || line != "strategy,span,seed,periods,final_wealth,mean_log_return,max_drawdown,win_rate") {
    throw ValidationError(where + ": unexpected header");
  }
  Report r;
  auto remember = [](auto& list, const auto& value) {
    if (std::find(list.begin(), list.end(), value) == list.end()) list.push_back(value);
  };
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 8) throw ValidationError(where + ": ragged row");
    ReportCell cell;
    cell.strategy = f[0];
    if (!filename_safe(cell.strategy)) throw ValidationError(where + ": bad strategy name " + cell.strategy);
    cell.span = parse_span(f[1]);
    cell.seed = static_cast<std::uint64_t>(parse_integer(f[2], where));
    const std::string curve_path = (dir / curve_filename(cell)).string();
    cell.curve = parse_curve(read_file(dir / curve_filename(cell)), cell.strategy, cell.span.start, curve_path);
    if (cell.curve.log_returns.size() != cell.span.length()) {
      throw ValidationError(curve_path + ": row count does not match the span");
    }
    const EquityCurve& c = cell.curve;
    cell.metrics.final_wealth = c.wealth(c.wealth.size() - 1);
    cell.metrics.max_drawdown = max_drawdown(c.wealth);
    cell.metrics.mean_log_return = c.log_returns.size() > 0 ? c.log_returns.mean() : 0.0;
    cell.metrics.win_rate = parse_double(f[7], where);
    remember(r.strategies, cell.strategy);
    remember(r.spans, cell.span);
    remember(r.seeds, cell.seed);
    r.cells.push_back(std::move(cell));
  }
  return r;
}

}  // namespace rlos
