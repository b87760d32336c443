#include "rlos/oracle_suite.hpp"

#include "rlos/parallel.hpp"
#include "rlos/random.hpp"
#include "rlos/rlos_core.hpp"
#include "rlos/text_format.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <sstream>

namespace rlos {
namespace {

DiscreteDistribution random_distribution(Rng& rng, Index d, Index outcomes, double lo, double hi) {
  DiscreteDistribution dist;
  dist.support.resize(outcomes, d);
  for (Index k = 0; k < outcomes; ++k) {
    for (Index a = 0; a < d; ++a) dist.support(k, a) = rng.uniform(lo, hi);
  }
  dist.probs = rng.simplex_point(outcomes);
  return dist;
}

// Runs `trial` on substreams (seed, 0..count-1); returns the worst margin
// (check passes when every margin is >= 0) and the failure count.
struct Sweep {
  double worst = 0.0;
  Index failures = 0;
};

Sweep sweep(Index count, std::uint64_t seed, std::size_t workers, const std::function<double(Rng&)>& trial) {
  std::vector<double> margins(static_cast<std::size_t>(count));
  parallel_for(margins.size(), workers, [&](std::size_t i) {
    Rng rng = Rng::substream(seed, i);
    margins[i] = trial(rng);
  });
  Sweep s;
  s.worst = margins.empty() ? 0.0 : *std::min_element(margins.begin(), margins.end());
  s.failures = std::count_if(margins.begin(), margins.end(), [](double m) { return !(m >= 0.0); });
  return s;
}

OracleCheck from_sweep(std::string group, std::string check, const Sweep& s, Index count) {
  std::ostringstream detail;
  detail << count - s.failures << "/" << count << " ok, worst margin " << format_double(s.worst);
  return {std::move(group), std::move(check), detail.str(), s.failures == 0};
}

}  // namespace

DiscreteDistribution symmetric_two_outcome() {
  DiscreteDistribution dist;
  dist.support.resize(2, 2);
  dist.support << 2.0, 0.5, 0.5, 2.0;
  dist.probs = Eigen::Vector2d(0.5, 0.5);
  return dist;
}

DiscreteJointDistribution random_joint(Rng& rng, bool independent) {
  const Index labels = 2 + static_cast<Index>(rng.below(2));
  const Index d = 2 + static_cast<Index>(rng.below(2));
  DiscreteJointDistribution joint;
  joint.y_probs = rng.simplex_point(labels);
  const DiscreteDistribution shared = random_distribution(rng, d, 2 + static_cast<Index>(rng.below(2)), 0.5, 2.0);
  for (Index y = 0; y < labels; ++y) {
    joint.y_values.push_back("y" + std::to_string(y));
    joint.cond.push_back(independent ? shared
                                     : random_distribution(rng, d, 2 + static_cast<Index>(rng.below(2)), 0.5, 2.0));
  }
  return joint;
}

std::vector<OracleCheck> run_oracle_suite(const OracleSuiteOptions& options) {
  if (options.trials < 1) throw ValidationError("oracle: trials must be >= 1");
  const Index trials = options.trials;
  const std::size_t workers = options.workers;
  std::vector<OracleCheck> out;
  // Each check family gets its own derived seed so adding checks never
  // shifts the draws of another.
  auto family_seed = [&](std::uint64_t family) { return Rng::substream(options.seed, 1000 + family).next_u64(); };

  out.push_back(from_sweep("jensen", "E log(b'X) <= log(b'mu)", sweep(trials, family_seed(1), workers, [](Rng& rng) {
    const Index d = 2 + static_cast<Index>(rng.below(3));
    const DiscreteDistribution dist = random_distribution(rng, d, 2 + static_cast<Index>(rng.below(4)), 0.5, 2.0);
    const PortfolioWeights b = rng.simplex_point(d);
    const MomentEstimate<double> m = exact_moments(dist);
    return std::log(b.dot(m.mu)) - expected_log_return(b, dist) + 1e-12;
  }), trials));

  out.push_back(from_sweep("ratio", "max_i E[X_i / b*'X] <= 1 + 1e-9", sweep(trials, family_seed(2), workers, [](Rng& rng) {
    const Index d = 2 + static_cast<Index>(rng.below(2));
    const DiscreteDistribution dist = random_distribution(rng, d, 2 + static_cast<Index>(rng.below(3)), 0.5, 2.0);
    return 1.0 + 1e-9 - ratio_bound(glos_optimal(dist), dist);
  }), trials));

  {
    std::vector<InformationGain> gains(static_cast<std::size_t>(trials));
    const std::uint64_t seed = family_seed(3);
    parallel_for(gains.size(), workers, [&](std::size_t i) {
      Rng rng = Rng::substream(seed, i);
      gains[i] = information_gain(random_joint(rng, false));
    });
    Sweep nonneg;
    Sweep kl;
    Sweep mi;
    nonneg.worst = kl.worst = mi.worst = 1.0;
    for (const auto& g : gains) {
      const double m0 = g.per_y_gain.minCoeff() + 1e-9;
      const double m1 = (g.per_y_kl - g.per_y_gain).minCoeff() + 1e-9;
      const double m2 = g.mutual_information - g.expected_gain + 1e-9;
      for (auto [s, m] : {std::pair{&nonneg, m0}, std::pair{&kl, m1}, std::pair{&mi, m2}}) {
        s->worst = std::min(s->worst, m);
        if (!(m >= 0.0)) ++s->failures;
      }
    }
    out.push_back(from_sweep("information benefit", "per-label gain >= 0", nonneg, trials));
    out.push_back(from_sweep("information benefit", "per-label gain <= KL", kl, trials));
    out.push_back(from_sweep("information benefit", "expected gain <= I(X;Y)", mi, trials));

    const Index indep = std::max<Index>(1, trials / 5);
    out.push_back(from_sweep("information benefit", "independent Y: |gain| <= 1e-9, |I| <= 1e-12",
                             sweep(indep, family_seed(4), workers, [](Rng& rng) {
                               const InformationGain g = information_gain(random_joint(rng, true));
                               return std::min(1e-9 - std::abs(g.expected_gain),
                                               1e-12 - std::abs(g.mutual_information));
                             }),
                             indep));
  }

  {
    const DiscreteDistribution dist = symmetric_two_outcome();
    const SequencePolicy competitor = constant_policy(Eigen::Vector2d(1.0, 0.0));
    double rate_at_largest = 0.0;
    for (Index n : {10, 50, 200}) {
      const SuperiorityStats s =
          superiority_trial(dist, competitor, n, trials, family_seed(5 + static_cast<std::uint64_t>(n)), workers);
      const double bound = 1.0 / static_cast<double>(n * n);
      std::ostringstream detail;
      detail << "observed " << format_double(s.exceed_fraction) << " vs bound " << format_double(bound);
      out.push_back({"superiority", "Pr(S_n > n^2 S_n*) <= 1/n^2 at n=" + std::to_string(n), detail.str(),
                     s.exceed_fraction <= bound});
      rate_at_largest = s.mean_rate;
    }
    out.push_back({"superiority", "mean (1/n) log(S_n/S_n*) < 0 at n=200",
                   "observed " + format_double(rate_at_largest), rate_at_largest < 0.0});
  }

  out.push_back(from_sweep("robustness", "|M(b,mu,Sigma_hat) - M(b,mu,Sigma)| <= bound",
                           sweep(trials, family_seed(6), workers, [](Rng& rng) {
                             const Index d = 2 + static_cast<Index>(rng.below(3));
                             MomentEstimate<double> truth;
                             truth.mu = Eigen::VectorXd(d);
                             for (Index a = 0; a < d; ++a) truth.mu(a) = rng.uniform(0.9, 1.2);
                             Eigen::MatrixXd A(d, d);
                             for (Index i = 0; i < A.size(); ++i) A.data()[i] = rng.normal();
                             truth.sigma = 0.01 * A * A.transpose() / static_cast<double>(d) +
                                           0.002 * Eigen::MatrixXd::Identity(d, d);
                             Eigen::MatrixXd E(d, d);
                             for (Index i = 0; i < E.size(); ++i) E.data()[i] = rng.uniform(-3e-4, 3e-4);
                             E = (0.5 * (E + E.transpose())).eval();
                             MomentEstimate<double> perturbed = truth;
                             perturbed.sigma += E;
                             const PortfolioWeights b = rng.simplex_point(d);
                             const double c = rng.uniform(0.5, 1.0) * b.dot(truth.mu);
                             const double shift =
                                 std::abs(allocation_utility(b, perturbed) - allocation_utility(b, truth));
                             const double bound = robustness_bound(b, c, Eigen::MatrixXd(truth.sigma - perturbed.sigma));
                             return bound * (1.0 + 1e-12) - shift;
                           }),
                           trials));

  out.push_back(from_sweep("taylor", "|E log(b'X) - M(b)| <= 1e-3 at low dispersion",
                           sweep(trials, family_seed(7), workers, [](Rng& rng) {
                             const Index d = 2 + static_cast<Index>(rng.below(3));
                             const DiscreteDistribution dist =
                                 random_distribution(rng, d, 2 + static_cast<Index>(rng.below(4)), 0.95, 1.05);
                             return 1e-3 - std::abs(taylor_gap(rng.simplex_point(d), dist));
                           }),
                           trials));
  return out;
}

std::string format_oracle_table(const std::vector<OracleCheck>& checks) {
  std::size_t gw = 5;
  std::size_t cw = 5;
  for (const auto& c : checks) {
    gw = std::max(gw, c.group.size());
    cw = std::max(cw, c.check.size());
  }
  auto pad = [](const std::string& s, std::size_t w) { return s + std::string(w - std::min(w, s.size()), ' '); };
  std::ostringstream out;
  out << pad("group", gw) << "  " << pad("check", cw) << "  result  detail\n";
  for (const auto& c : checks) {
    out << pad(c.group, gw) << "  " << pad(c.check, cw) << "  " << (c.passed ? "PASS  " : "FAIL  ") << "  " << c.detail
        << '\n';
  }
  return out.str();
}

}  // namespace rlos
