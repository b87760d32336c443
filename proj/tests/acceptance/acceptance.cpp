// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails or overruns its time budget.
//
// RLOS_UPDATE_FIXTURES=1 rewrites the regression digests instead of
// comparing against them.

#include "rlos/backtest.hpp"
#include "rlos/cli.hpp"
#include "rlos/glos_oracle.hpp"
#include "rlos/oracle_suite.hpp"
#include "rlos/rl_agent.hpp"
#include "rlos/rlos_core.hpp"
#include "rlos/synthetic.hpp"
#include "rlos/text_format.hpp"

#include "agent_fixtures.hpp"
#include "oracles.hpp"
#include "temp_dir.hpp"

#include <boost/math/distributions/chi_squared.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace rlos;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double v) { return format_double(v); }

// Correlation matrix from a random factor matrix, rescaled to unit diagonal.
Eigen::MatrixXd random_correlation(Index d, std::mt19937_64& gen) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd a(d, d);
  for (Index i = 0; i < a.size(); ++i) a.data()[i] = z(gen);
  Eigen::MatrixXd c = a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(d, d);
  const Eigen::VectorXd s = c.diagonal().cwiseSqrt().cwiseInverse();
  return s.asDiagonal() * c * s.asDiagonal();
}

Outcome taylor_surrogate() {
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> z;
  double worst = 0.0;
  int failures = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const Index d = 2 + static_cast<Index>(inst % 3);
    MomentEstimate<double> m;
    m.mu = Eigen::VectorXd(d);
    Eigen::VectorXd sd(d);
    for (Index a = 0; a < d; ++a) {
      m.mu(a) = 0.9 + 0.3 * unit(gen);
      sd(a) = (0.005 + 0.045 * unit(gen)) * m.mu(a);  // coefficient of variation <= 0.05
    }
    m.sigma = sd.asDiagonal() * random_correlation(d, gen) * sd.asDiagonal();
    Eigen::VectorXd b(d);
    for (Index a = 0; a < d; ++a) b(a) = -std::log(1.0 - unit(gen));
    b /= b.sum();
    const Eigen::MatrixXd chol = m.sigma.llt().matrixL();
    const Eigen::VectorXd load = chol.transpose() * b;  // bᵀX = bᵀμ + loadᵀz
    const double mean = b.dot(m.mu);
    double acc = 0.0;
    for (int k = 0; k < 1'000'000; ++k) {
      double s = 0.0;
      for (Index a = 0; a < d; ++a) s += load(a) * z(gen);
      acc += std::log(mean + s);
    }
    const double gap = std::abs(allocation_utility(b, m) - acc / 1e6);
    worst = std::max(worst, gap);
    if (!(gap <= 1e-3)) ++failures;
  }
  return {failures == 0, "100 instances, worst |M - MC| " + fmt(worst) + " (limit 1e-3)"};
}

Outcome optimizer_equivalence() {
  std::mt19937_64 gen(77);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> z;
  double worst_gap = INFINITY;
  double worst_kkt = 0.0;
  int failures = 0;
  for (int inst = 0; inst < 200; ++inst) {
    const Index d = 1 + static_cast<Index>(inst % 3);
    MomentEstimate<double> m;
    m.mu = Eigen::VectorXd(d);
    for (Index a = 0; a < d; ++a) m.mu(a) = 0.95 + 0.15 * unit(gen);
    Eigen::MatrixXd f(d, d);
    for (Index i = 0; i < f.size(); ++i) f.data()[i] = z(gen);
    m.sigma = (0.02 * unit(gen)) * f * f.transpose() / static_cast<double>(d);
    ConstraintSet cons;
    // A third of the instances carry a floor somewhere inside the attainable range.
    if (inst % 3 == 2) cons.min_return = m.mu.minCoeff() + unit(gen) * (m.mu.maxCoeff() - m.mu.minCoeff());
    const PortfolioWeights b = optimize_allocation(m, cons);
    const auto [grid_best, grid_arg] = oracle::grid_max(
        d, 1e-3, [&](const Eigen::VectorXd& x) { return oracle::utility(x, m.mu, m.sigma); },
        [&](const Eigen::VectorXd& x) { return x.dot(m.mu) >= cons.min_return; });
    const double gap = oracle::utility(b, m.mu, m.sigma) - grid_best;
    const double kkt = kkt_residual(b, m, cons);
    worst_gap = std::min(worst_gap, gap);
    worst_kkt = std::max(worst_kkt, kkt);
    if (!(gap >= -1e-4) || !(kkt <= 1e-6) || !(b.dot(m.mu) >= cons.min_return - 1e-12)) ++failures;
  }
  return {failures == 0, "200 instances, min(utility - grid) " + fmt(worst_gap) + ", max KKT residual " +
                             fmt(worst_kkt)};
}

Outcome covariance_robustness() {
  std::mt19937_64 gen(31337);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> z;
  double tightest = INFINITY;
  int failures = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Index d = 2 + static_cast<Index>(trial % 4);
    MomentEstimate<double> truth;
    truth.mu = Eigen::VectorXd(d);
    for (Index a = 0; a < d; ++a) truth.mu(a) = 0.9 + 0.3 * unit(gen);
    Eigen::MatrixXd f(d, d);
    for (Index i = 0; i < f.size(); ++i) f.data()[i] = z(gen);
    truth.sigma = 0.01 * f * f.transpose() / static_cast<double>(d);
    Eigen::MatrixXd e(d, d);
    for (Index i = 0; i < e.size(); ++i) e.data()[i] = (2.0 * unit(gen) - 1.0) * 1e-3;
    e = (0.5 * (e + e.transpose())).eval();
    MomentEstimate<double> perturbed = truth;
    perturbed.sigma += e;
    Eigen::VectorXd b(d);
    for (Index a = 0; a < d; ++a) b(a) = -std::log(1.0 - unit(gen));
    b /= b.sum();
    const double c = (0.3 + 0.7 * unit(gen)) * b.dot(truth.mu);  // feasible: bᵀμ >= c
    const double shift = std::abs(oracle::utility(b, truth.mu, perturbed.sigma) - oracle::utility(b, truth.mu, truth.sigma));
    // ‖b‖₁² max_i Σ_j |E_ij| / (2c²), written out independently.
    double row = 0.0;
    for (Index i = 0; i < d; ++i) row = std::max(row, e.row(i).cwiseAbs().sum());
    const double bound = b.cwiseAbs().sum() * b.cwiseAbs().sum() * row / (2.0 * c * c);
    const double lib_bound = robustness_bound(b, c, Eigen::MatrixXd(truth.sigma - perturbed.sigma));
    tightest = std::min(tightest, bound - shift);
    if (!(shift <= lib_bound) || std::abs(lib_bound - bound) > 1e-15 * std::max(1.0, bound)) ++failures;
  }
  return {failures == 0, "1000 trials, " + std::to_string(1000 - failures) + " satisfied, min slack " + fmt(tightest)};
}

Outcome information_benefit() {
  double min_gain = INFINITY;
  double min_kl_slack = INFINITY;
  double min_mi_slack = INFINITY;
  int failures = 0;
  for (int trial = 0; trial < 500; ++trial) {
    Rng sub = Rng::substream(5150, static_cast<std::uint64_t>(trial));
    const InformationGain g = information_gain(random_joint(sub, false));
    min_gain = std::min(min_gain, g.per_y_gain.minCoeff());
    min_kl_slack = std::min(min_kl_slack, (g.per_y_kl - g.per_y_gain).minCoeff());
    min_mi_slack = std::min(min_mi_slack, g.mutual_information - g.expected_gain);
    if (!(g.per_y_gain.minCoeff() >= -1e-9) || !((g.per_y_kl - g.per_y_gain).minCoeff() >= -1e-9) ||
        !(g.mutual_information - g.expected_gain >= -1e-9)) {
      ++failures;
    }
  }
  double max_indep_gain = 0.0;
  double max_indep_mi = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Rng sub = Rng::substream(5151, static_cast<std::uint64_t>(trial));
    const InformationGain g = information_gain(random_joint(sub, true));
    max_indep_gain = std::max(max_indep_gain, std::abs(g.expected_gain));
    max_indep_mi = std::max(max_indep_mi, std::abs(g.mutual_information));
  }
  if (!(max_indep_gain <= 1e-9) || !(max_indep_mi <= 1e-12)) ++failures;
  std::ostringstream d;
  d << "500 joints: min gain " << fmt(min_gain) << ", min KL - gain " << fmt(min_kl_slack) << ", min MI - gain "
    << fmt(min_mi_slack) << "; 100 independent: max |gain| " << fmt(max_indep_gain) << ", max |MI| "
    << fmt(max_indep_mi);
  return {failures == 0, d.str()};
}

// Exact Pr(log S_n/S_n* > 2 log n) for the symmetric market against (1, 0):
// b* = (1/2, 1/2) by symmetry, so each period adds log 2 - log 1.25 or
// log 0.5 - log 1.25 with probability 1/2.
double exact_tail(Index n) {
  const double up = std::log(2.0) - std::log(1.25);
  const double down = std::log(0.5) - std::log(1.25);
  double p = 0.0;
  for (Index k = 0; k <= n; ++k) {
    if (static_cast<double>(k) * up + static_cast<double>(n - k) * down <= 2.0 * std::log(static_cast<double>(n))) continue;
    p += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) - n * std::log(2.0));
  }
  return p;
}

Outcome long_term_superiority() {
  const DiscreteDistribution dist = symmetric_two_outcome();
  const SequencePolicy competitor = constant_policy(Eigen::Vector2d(1.0, 0.0));
  bool ok = true;
  std::ostringstream d;
  double mean_rate_200 = 0.0;
  for (Index n : {10, 50, 200}) {
    // Same per-horizon seed as `rlos oracle --trials 2000 --seed 1`.
    const std::uint64_t seed = Rng::substream(1, 1000 + 5 + static_cast<std::uint64_t>(n)).next_u64();
    const SuperiorityStats s = superiority_trial(dist, competitor, n, 2000, seed, 1);
    const double bound = 1.0 / static_cast<double>(n * n);
    const double exact = exact_tail(n);
    ok = ok && s.exceed_fraction <= bound && exact <= bound;
    if (n == 200) {
      mean_rate_200 = s.mean_rate;
      ok = ok && s.mean_rate < 0.0;
    }
    d << "n=" << n << ": observed " << fmt(s.exceed_fraction) << ", exact " << fmt(exact) << ", bound " << fmt(bound)
      << "; ";
  }
  d << "mean rate at n=200 " << fmt(mean_rate_200);
  return {ok, d.str()};
}

Outcome gradient_correctness() {
  AgentArchitecture arch;
  arch.history = 8;
  arch.channels = {4, 5, 5, 5};
  arch.hidden = 6;
  const AgentParameters p = init_agent(arch, 2718);
  GeneratorSpec g;
  g.assets = 3;
  g.periods = 40;
  g.seed = 11;
  g.noise = 0.02;
  const AssetPanel panel = generate_panel(g);
  Rng rng(3);
  const auto batch = testing_support::make_records(p, panel, 20, 30, rng);
  const auto errors = testing_support::finite_difference_errors(p, batch, Hyperparameters{}, 1e-5, 1e-8);
  double worst = 0.0;
  std::string worst_block;
  for (const auto& e : errors) {
    if (e.worst >= worst) {
      worst = e.worst;
      worst_block = e.name;
    }
  }
  return {worst <= 1e-4, std::to_string(errors.size()) + " blocks, " + std::to_string(p.theta.size()) +
                             " parameters, 10 records; worst relative error " + fmt(worst) + " in " + worst_block};
}

Outcome replay_distribution() {
  const double lambda = 50.0;
  const Index t = 10'000;
  Rng rng(606);
  const auto xs = sample_replay(t, 0, lambda, 100'000, rng);
  std::map<long, long> counts;
  double mean = 0.0;
  for (Index i : xs) {
    ++counts[t - i];
    mean += static_cast<double>(t - i);
  }
  mean /= static_cast<double>(xs.size());
  // Bins: every k whose expected count is >= 5, with both tails pooled.
  const double n = static_cast<double>(xs.size());
  long lo = 0;
  while (n * oracle::poisson_pmf(lo, lambda) < 5.0) ++lo;
  long hi = static_cast<long>(lambda);
  while (n * oracle::poisson_pmf(hi + 1, lambda) >= 5.0) ++hi;
  double below = 0.0;
  for (long k = 0; k < lo; ++k) below += oracle::poisson_pmf(k, lambda);
  double inside = 0.0;
  double stat = 0.0;
  auto add = [&](double observed, double prob) {
    const double expected = n * prob;
    stat += (observed - expected) * (observed - expected) / expected;
  };
  long observed_below = 0;
  long observed_above = 0;
  for (const auto& [k, c] : counts) {
    if (k < lo) observed_below += c;
    if (k > hi) observed_above += c;
  }
  add(static_cast<double>(observed_below), below);
  for (long k = lo; k <= hi; ++k) {
    const double prob = oracle::poisson_pmf(k, lambda);
    inside += prob;
    add(static_cast<double>(counts.count(k) ? counts.at(k) : 0), prob);
  }
  add(static_cast<double>(observed_above), 1.0 - below - inside);
  const long bins = hi - lo + 3;
  const boost::math::chi_squared chi(static_cast<double>(bins - 1));
  const double critical = boost::math::quantile(chi, 0.99);
  const bool ok = mean >= 49.0 && mean <= 51.0 && stat <= critical;
  return {ok, "mean " + fmt(mean) + ", chi-square " + fmt(stat) + " on " + std::to_string(bins - 1) +
                  " dof vs critical " + fmt(critical)};
}

Outcome backtest_integrity() {
  DiscreteDistribution dist;
  dist.support.resize(3, 4);
  dist.support << 1.03, 0.99, 1.00, 0.98, 0.97, 1.02, 1.01, 1.03, 1.01, 1.00, 0.99, 1.00;
  dist.probs = Eigen::Vector3d(0.4, 0.35, 0.25);
  std::vector<StrategySpec> strategies{{"", NaiveAverageSpec{}},
                                       {"", FollowWinnerSpec{}},
                                       {"", FollowLoserSpec{}},
                                       {"", RlosSpec{}},
                                       {"", RlosRlSpec{}}};
  const Span span{30, 230};
  const Index cut = 130;  // data from here on is replaced in the mutated panel
  int checks = 0;
  std::vector<std::string> problems;
  for (GeneratorKind kind : {GeneratorKind::Const, GeneratorKind::Iid, GeneratorKind::Trend, GeneratorKind::MeanRevert}) {
    GeneratorSpec g;
    g.kind = kind;
    g.assets = 4;
    g.periods = 230;
    g.seed = 17;
    if (kind == GeneratorKind::Iid) g.distribution = dist;
    const AssetPanel panel = generate_panel(g);
    GeneratorSpec scramble = g;
    scramble.seed = 18;
    scramble.kind = GeneratorKind::MeanRevert;
    const AssetPanel noise = generate_panel(scramble);
    AssetPanel mutated = panel;
    const Index tail = panel.periods() - cut;
    mutated.open.rightCols(tail) = noise.open.rightCols(tail) * 2.0;
    mutated.high.rightCols(tail) = noise.high.rightCols(tail) * 2.0;
    mutated.low.rightCols(tail) = noise.low.rightCols(tail) * 2.0;
    mutated.close.rightCols(tail) = noise.close.rightCols(tail) * 2.0;
    mutated.volume.rightCols(tail) = noise.volume.rightCols(tail) * 5.0;
    const Eigen::MatrixXd x = fluctuation_matrix(panel);

    for (const auto& spec : strategies) {
      auto strategy = make_strategy(spec);
      const EquityCurve c = run_backtest(*strategy, panel, span);
      const std::string where = to_string(kind) + "/" + strategy->name();
      bool recursion = c.wealth(0) == 1.0;
      for (Index s = 0; s < c.log_returns.size(); ++s) {
        const double growth = c.weights.col(s).dot(x.col(span.start + s));
        recursion = recursion && c.wealth(s + 1) > 0.0 &&
                    std::abs(c.wealth(s + 1) - c.wealth(s) * growth) <= 1e-9 * c.wealth(s + 1) &&
                    is_valid_portfolio(c.weights.col(s));
      }
      if (!recursion) problems.push_back(where + " wealth recursion");
      if (!(std::abs(std::log(c.wealth(c.wealth.size() - 1)) - c.log_returns.sum()) <= 1e-9)) {
        problems.push_back(where + " log consistency");
      }
      auto twin = make_strategy(spec);
      const EquityCurve m = run_backtest(*twin, mutated, {span.start, cut + 1});
      // Every decision up to and including the cut saw identical history.
      if (!(m.weights == c.weights.leftCols(cut + 1 - span.start))) problems.push_back(where + " look-ahead");
      checks += 3;
    }
  }
  std::string detail = std::to_string(checks) + " checks over 4 generators x 5 strategies, span 30-230";
  for (const auto& p : problems) detail += "; " + p;
  return {problems.empty(), detail};
}

std::map<std::string, std::string> manifest_params(const fs::path& manifest) {
  std::map<std::string, std::string> out;
  std::istringstream in(testing_support::read_text(manifest));
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.rfind("param,", 0) != 0) continue;
    const auto comma = line.find(',', 6);
    std::string value = line.substr(comma + 1);
    if (value.size() >= 2 && value.front() == '"') value = value.substr(1, value.size() - 2);
    out[line.substr(6, comma - 6)] = value;
  }
  return out;
}

int run_cli(std::vector<std::string> args, std::string& err_text) {
  args.insert(args.begin(), "rlos");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  err_text = err.str();
  return code;
}

Outcome default_constants() {
  testing_support::TempDir dir;
  std::string err;
  ::unsetenv("RLOS_OUTPUT_DIR");
  const int code = run_cli({"backtest", "--output", dir.path().string()}, err);
  if (code != 0) return {false, "default backtest exited " + std::to_string(code) + ": " + err};
  const auto params = manifest_params(dir / "manifest.csv");
  const std::vector<std::pair<std::string, double>> expected{
      {"hyper.lambda", 50.0}, {"hyper.momentum", 0.9}, {"hyper.alpha", 1e-4}, {"hyper.beta", 1e-2},
      {"hyper.sigma", 1e-2},  {"hyper.c", 1e-4},       {"rlos.max_span", 20}, {"rlos.threshold", 0.0}};
  std::vector<std::string> wrong;
  std::ostringstream d;
  for (const auto& [key, value] : expected) {
    const auto it = params.find(key);
    if (it == params.end() || parse_double(it->second, key) != value) wrong.push_back(key);
    if (it != params.end()) d << key << "=" << it->second << " ";
  }
  const auto rates = params.count("hyper.lr_rates") ? split(params.at("hyper.lr_rates"), ',') : std::vector<std::string>{};
  const std::vector<double> schedule{1e-2, 1e-3, 1e-4};
  bool rates_ok = rates.size() == schedule.size();
  for (std::size_t i = 0; rates_ok && i < rates.size(); ++i) rates_ok = parse_double(trim(rates[i]), "rate") == schedule[i];
  if (!rates_ok) wrong.push_back("hyper.lr_rates");
  d << "hyper.lr_rates=" << (params.count("hyper.lr_rates") ? params.at("hyper.lr_rates") : "?");
  for (const auto& w : wrong) d << "; mismatch " << w;
  return {wrong.empty(), d.str()};
}

Outcome regression_fixture() {
  const fs::path fixtures = RLOS_FIXTURE_DIR;
  const fs::path digests = fixtures / "meanrevert_digests.csv";
  testing_support::TempDir dir;
  std::string err;
  const int code =
      run_cli({"backtest", "--config", (fixtures / "meanrevert.ini").string(), "--output", dir.path().string()}, err);
  if (code != 0) return {false, "fixture backtest exited " + std::to_string(code) + ": " + err};

  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(dir.path())) names.push_back(e.path().filename().string());
  std::sort(names.begin(), names.end());
  std::ostringstream current;
  current << "file,sha256\n";
  for (const auto& n : names) current << n << ',' << cli::sha256_file(dir / n) << '\n';

  const Report report = load_report(dir.path());
  double rlos_wealth = 0.0;
  double winner_wealth = 0.0;
  for (const auto& cell : report.cells) {
    if (cell.strategy == "rlos") rlos_wealth = cell.metrics.final_wealth;
    if (cell.strategy == "follow_winner") winner_wealth = cell.metrics.final_wealth;
  }
  const std::string wealth = "rlos final wealth " + fmt(rlos_wealth) + " vs follow_winner " + fmt(winner_wealth);

  if (const char* update = std::getenv("RLOS_UPDATE_FIXTURES"); update && std::string(update) == "1") {
    std::ofstream(digests, std::ios::binary) << current.str();
    return {rlos_wealth > winner_wealth, "digests rewritten (" + std::to_string(names.size()) + " files); " + wealth};
  }
  if (!fs::exists(digests)) return {false, "missing " + digests.string() + "; run with RLOS_UPDATE_FIXTURES=1"};
  const std::string committed = testing_support::read_text(digests);
  std::vector<std::string> differing;
  {
    std::map<std::string, std::string> want;
    std::map<std::string, std::string> got;
    auto load = [](const std::string& text, std::map<std::string, std::string>& into) {
      std::istringstream in(text);
      std::string line;
      std::getline(in, line);
      while (std::getline(in, line)) {
        const auto f = split(line, ',');
        if (f.size() == 2) into[f[0]] = f[1];
      }
    };
    load(committed, want);
    load(current.str(), got);
    for (const auto& [file, sha] : want) {
      if (!got.count(file) || got.at(file) != sha) differing.push_back(file);
    }
    for (const auto& [file, sha] : got) {
      if (!want.count(file)) differing.push_back(file + " (unexpected)");
    }
  }
  std::string detail = std::to_string(names.size()) + " files, " + std::to_string(names.size() - differing.size()) +
                       " digests match; " + wealth;
  for (const auto& f : differing) detail += "; differs: " + f;
  return {differing.empty() && rlos_wealth > winner_wealth, detail};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "taylor surrogate vs Monte Carlo", 60, taylor_surrogate},
      {2, "optimizer equivalence", 120, optimizer_equivalence},
      {3, "covariance robustness bound", 30, covariance_robustness},
      {4, "information benefit", 60, information_benefit},
      {5, "long-term superiority", 60, long_term_superiority},
      {6, "gradient correctness", 30, gradient_correctness},
      {7, "replay distribution", 10, replay_distribution},
      {8, "backtest integrity", 120, backtest_integrity},
      {9, "default constants echoed", 60, default_constants},
      {10, "regression fixture", 60, regression_fixture},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = seconds <= c.budget_seconds;
    const bool pass = o.passed && in_budget;
    if (!pass) ++failed;
    std::cout << (pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << ": " << o.detail << " ("
              << format_fixed(seconds, 2) << " s of " << format_fixed(c.budget_seconds, 0) << " s"
              << (in_budget ? "" : ", over budget") << ")" << std::endl;
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " criteria passed"
            << std::endl;
  return failed == 0 ? 0 : 1;
}
