#include "rlos/glos_oracle.hpp"

#include "rlos/parallel.hpp"
#include "rlos/random.hpp"
#include "rlos/simplex_solver.hpp"
#include "rlos/text_format.hpp"

#include <fstream>
#include <sstream>

namespace rlos {
namespace {

constexpr double kNegligibleProb = 1e-15;

struct LogReturnObjective {
  const DiscreteDistribution& dist;

  double value(const Eigen::VectorXd& b) const {
    const Eigen::ArrayXd r = (dist.support * b).array();
    if ((r <= 0.0).any()) return -std::numeric_limits<double>::infinity();
    return dist.probs.dot(r.log().matrix());
  }
  Eigen::VectorXd gradient(const Eigen::VectorXd& b) const {
    const Eigen::VectorXd w = dist.probs.cwiseQuotient(dist.support * b);
    return dist.support.transpose() * w;
  }
  Eigen::MatrixXd hessian(const Eigen::VectorXd& b) const {
    const Eigen::ArrayXd r = (dist.support * b).array();
    const Eigen::VectorXd w = (dist.probs.array() / (r * r)).matrix();
    return -(dist.support.transpose() * w.asDiagonal() * dist.support);
  }
};

/// Merges identical outcome rows and drops negligible mass.
DiscreteDistribution compact(const DiscreteDistribution& dist) {
  std::vector<Eigen::VectorXd> rows;
  std::vector<double> probs;
  for (Index k = 0; k < dist.outcomes(); ++k) {
    if (dist.probs(k) < kNegligibleProb) continue;
    const Eigen::VectorXd x = dist.support.row(k).transpose();
    bool merged = false;
    for (std::size_t j = 0; j < rows.size(); ++j) {
      if (rows[j] == x) {
        probs[j] += dist.probs(k);
        merged = true;
        break;
      }
    }
    if (!merged) {
      rows.push_back(x);
      probs.push_back(dist.probs(k));
    }
  }
  DiscreteDistribution out;
  out.support.resize(static_cast<Index>(rows.size()), dist.assets());
  out.probs.resize(static_cast<Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    out.support.row(static_cast<Index>(j)) = rows[j].transpose();
    out.probs(static_cast<Index>(j)) = probs[j];
  }
  return out;
}

double probability_of(const DiscreteDistribution& dist, const Eigen::VectorXd& x) {
  for (Index k = 0; k < dist.outcomes(); ++k) {
    if (dist.support.row(k).transpose() == x) return dist.probs(k);
  }
  return 0.0;
}

Eigen::VectorXd parse_row(const std::vector<std::string>& fields, std::size_t from, const std::string& where) {
  Eigen::VectorXd v(static_cast<Index>(fields.size() - from));
  for (std::size_t i = from; i < fields.size(); ++i) {
    v(static_cast<Index>(i - from)) = parse_double(fields[i], where);
  }
  return v;
}

DiscreteDistribution from_rows(const std::vector<double>& probs, const std::vector<Eigen::VectorXd>& rows,
                               const std::string& where) {
  if (rows.empty()) throw ValidationError("distribution has no outcomes: " + where);
  DiscreteDistribution d;
  const Index dim = rows.front().size();
  d.support.resize(static_cast<Index>(rows.size()), dim);
  d.probs.resize(static_cast<Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k].size() != dim) throw ValidationError("distribution rows differ in dimension: " + where);
    d.support.row(static_cast<Index>(k)) = rows[k].transpose();
    d.probs(static_cast<Index>(k)) = probs[k];
  }
  return d;
}

}  // namespace

void validate_distribution(const DiscreteDistribution& dist) {
  if (dist.outcomes() < 1 || dist.assets() < 1) throw ValidationError("distribution: empty support");
  if (dist.probs.size() != dist.outcomes()) throw ValidationError("distribution: probability count mismatch");
  if (!dist.support.allFinite() || !dist.probs.allFinite()) throw ValidationError("distribution: non-finite entries");
  if ((dist.probs.array() < 0.0).any()) throw ValidationError("distribution: negative probability");
  if (std::abs(dist.probs.sum() - 1.0) > 1e-12) throw ValidationError("distribution: probabilities must sum to 1");
  if ((dist.support.array() <= 0.0).any()) throw ValidationError("distribution: outcomes must be positive");
}

void validate_joint(const DiscreteJointDistribution& joint) {
  const auto ny = static_cast<Index>(joint.cond.size());
  if (ny < 1) throw ValidationError("joint: no labels");
  if (joint.y_probs.size() != ny || static_cast<Index>(joint.y_values.size()) != ny) {
    throw ValidationError("joint: label count mismatch");
  }
  if ((joint.y_probs.array() < 0.0).any() || std::abs(joint.y_probs.sum() - 1.0) > 1e-12) {
    throw ValidationError("joint: label probabilities must be nonnegative and sum to 1");
  }
  for (const auto& c : joint.cond) {
    validate_distribution(c);
    if (c.assets() != joint.cond.front().assets()) throw ValidationError("joint: conditionals differ in dimension");
  }
}

MomentEstimate<double> exact_moments(const DiscreteDistribution& dist) {
  validate_distribution(dist);
  MomentEstimate<double> m;
  m.mu = dist.support.transpose() * dist.probs;
  const Eigen::MatrixXd centered = dist.support.rowwise() - m.mu.transpose();
  m.sigma = centered.transpose() * dist.probs.asDiagonal() * centered;
  m.sigma = 0.5 * (m.sigma + m.sigma.transpose()).eval();
  m.sample_count = dist.outcomes();
  return m;
}

DiscreteDistribution marginal(const DiscreteJointDistribution& joint) {
  validate_joint(joint);
  Index total = 0;
  for (const auto& c : joint.cond) total += c.outcomes();
  DiscreteDistribution stacked;
  stacked.support.resize(total, joint.cond.front().assets());
  stacked.probs.resize(total);
  Index row = 0;
  for (std::size_t y = 0; y < joint.cond.size(); ++y) {
    const auto& c = joint.cond[y];
    stacked.support.middleRows(row, c.outcomes()) = c.support;
    stacked.probs.segment(row, c.outcomes()) = c.probs * joint.y_probs(static_cast<Index>(y));
    row += c.outcomes();
  }
  return compact(stacked);
}

double expected_log_return(const PortfolioWeights& b, const DiscreteDistribution& dist) {
  validate_distribution(dist);
  require_portfolio(b, "expected_log_return");
  if (b.size() != dist.assets()) throw ValidationError("expected_log_return: dimension mismatch");
  return LogReturnObjective{dist}.value(b);
}

double ratio_bound(const PortfolioWeights& b, const DiscreteDistribution& dist) {
  const Eigen::VectorXd w = dist.probs.cwiseQuotient(dist.support * b);
  return (dist.support.transpose() * w).maxCoeff();
}

PortfolioWeights glos_optimal(const DiscreteDistribution& dist, double tol) {
  validate_distribution(dist);
  SimplexSolverOptions opts;
  opts.restarts = 9;
  opts.tolerance = std::max(tol, 1e-15);
  opts.warmup_iterations = 5000;
  opts.seed = 0x610501ULL;
  return maximize_on_simplex(LogReturnObjective{dist}, dist.assets(), std::nullopt, opts).weights;
}

InformationGain information_gain(const DiscreteJointDistribution& joint, double tol) {
  const DiscreteDistribution fx = marginal(joint);
  const PortfolioWeights b_marginal = glos_optimal(fx, tol);
  const auto ny = static_cast<Index>(joint.cond.size());
  InformationGain out;
  out.per_y_gain.resize(ny);
  out.per_y_kl.resize(ny);
  for (Index y = 0; y < ny; ++y) {
    const DiscreteDistribution cond = compact(joint.cond[static_cast<std::size_t>(y)]);
    const PortfolioWeights b_cond = glos_optimal(cond, tol);
    const LogReturnObjective r{cond};
    out.per_y_gain(y) = r.value(b_cond) - r.value(b_marginal);
    double kl = 0.0;
    for (Index k = 0; k < cond.outcomes(); ++k) {
      const double p = cond.probs(k);
      const double q = probability_of(fx, cond.support.row(k).transpose());
      kl += p * std::log(p / q);
    }
    out.per_y_kl(y) = kl;
  }
  out.expected_gain = joint.y_probs.dot(out.per_y_gain);
  out.mutual_information = joint.y_probs.dot(out.per_y_kl);
  return out;
}

SequencePolicy constant_policy(PortfolioWeights b) {
  require_portfolio(b, "constant_policy");
  return [b = std::move(b)](Index, const std::vector<Eigen::VectorXd>&) { return b; };
}

SuperiorityStats superiority_trial(const DiscreteDistribution& dist, const SequencePolicy& competitor, Index n,
                                   Index trials, std::uint64_t seed, std::size_t workers) {
  validate_distribution(dist);
  if (n < 1) throw ValidationError("superiority_trial: horizon must be >= 1");
  if (trials < 1) throw ValidationError("superiority_trial: trials must be >= 1");
  const PortfolioWeights b_star = glos_optimal(dist);
  Eigen::VectorXd cdf(dist.outcomes());
  double acc = 0.0;
  for (Index k = 0; k < dist.outcomes(); ++k) cdf(k) = (acc += dist.probs(k));

  SuperiorityStats stats;
  stats.log_ratio.resize(static_cast<std::size_t>(trials));
  parallel_for(static_cast<std::size_t>(trials), workers, [&](std::size_t trial) {
    Rng rng = Rng::substream(seed, trial);
    std::vector<Eigen::VectorXd> history;
    history.reserve(static_cast<std::size_t>(n));
    double log_ratio = 0.0;
    for (Index i = 0; i < n; ++i) {
      const PortfolioWeights b = competitor(i, history);
      const double u = rng.uniform() * acc;
      Index k = 0;
      while (k < dist.outcomes() - 1 && u >= cdf(k)) ++k;
      const Eigen::VectorXd x = dist.support.row(k).transpose();
      log_ratio += std::log(b.dot(x)) - std::log(b_star.dot(x));
      history.push_back(x);
    }
    stats.log_ratio[trial] = log_ratio;
  });

  const double threshold = 2.0 * std::log(static_cast<double>(n));
  Index exceed = 0;
  double rate_sum = 0.0;
  for (double lr : stats.log_ratio) {
    if (lr > threshold) ++exceed;
    rate_sum += lr / static_cast<double>(n);
  }
  stats.exceed_fraction = static_cast<double>(exceed) / static_cast<double>(trials);
  stats.mean_rate = rate_sum / static_cast<double>(trials);
  return stats;
}

double taylor_gap(const PortfolioWeights& b, const DiscreteDistribution& dist) {
  return expected_log_return(b, dist) - allocation_utility(b, exact_moments(dist));
}

DiscreteDistribution parse_distribution(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<double> probs;
  std::vector<Eigen::VectorXd> rows;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const std::string where = "line " + std::to_string(line_no);
    const auto fields = split(t, ',');
    if (fields.size() < 2) throw ValidationError("distribution row needs prob and at least one outcome: " + where);
    probs.push_back(parse_double(fields[0], where));
    rows.push_back(parse_row(fields, 1, where));
  }
  DiscreteDistribution d = from_rows(probs, rows, "text");
  validate_distribution(d);
  return d;
}

DiscreteJointDistribution parse_joint(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  DiscreteJointDistribution joint;
  std::vector<double> y_probs;
  std::vector<double> probs;
  std::vector<Eigen::VectorXd> rows;
  auto flush = [&](const std::string& where) {
    if (joint.y_values.empty()) return;
    if (joint.cond.size() + 1 != joint.y_values.size()) return;
    joint.cond.push_back(from_rows(probs, rows, where));
    probs.clear();
    rows.clear();
  };
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const std::string where = "line " + std::to_string(line_no);
    const auto fields = split(t, ',');
    if (t.rfind("y=", 0) == 0) {
      flush(where);
      if (fields.size() != 2) throw ValidationError("label header must be y=<label>,<prob>: " + where);
      joint.y_values.emplace_back(trim(std::string_view(fields[0]).substr(2)));
      y_probs.push_back(parse_double(fields[1], where));
      continue;
    }
    if (joint.y_values.empty()) throw ValidationError("outcome row before any y= header: " + where);
    if (fields.size() < 2) throw ValidationError("distribution row needs prob and at least one outcome: " + where);
    probs.push_back(parse_double(fields[0], where));
    rows.push_back(parse_row(fields, 1, where));
  }
  flush("end of input");
  joint.y_probs = Eigen::Map<const Eigen::VectorXd>(y_probs.data(), static_cast<Index>(y_probs.size()));
  validate_joint(joint);
  return joint;
}

namespace {
std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open distribution file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}
}  // namespace

DiscreteDistribution load_distribution(const std::filesystem::path& path) {
  return parse_distribution(read_file(path));
}

DiscreteJointDistribution load_joint(const std::filesystem::path& path) { return parse_joint(read_file(path)); }

}  // namespace rlos
