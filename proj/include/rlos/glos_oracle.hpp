#pragma once

#include "rlos/rlos_core.hpp"
#include "rlos/types.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace rlos {

/// Finite-support distribution of X: row k of `support` is an outcome with
/// probability probs(k).
struct DiscreteDistribution {
  Eigen::MatrixXd support;
  Eigen::VectorXd probs;

  Index assets() const { return support.cols(); }
  Index outcomes() const { return support.rows(); }
};

/// Side information Y with a conditional distribution of X per label.
struct DiscreteJointDistribution {
  std::vector<std::string> y_values;
  Eigen::VectorXd y_probs;
  std::vector<DiscreteDistribution> cond;
};

struct InformationGain {
  Eigen::VectorXd per_y_gain;
  double expected_gain = 0.0;
  double mutual_information = 0.0;
  Eigen::VectorXd per_y_kl;
};

void validate_distribution(const DiscreteDistribution& dist);
void validate_joint(const DiscreteJointDistribution& joint);

/// Mean vector and population covariance by enumeration.
MomentEstimate<double> exact_moments(const DiscreteDistribution& dist);

/// X-marginal of a joint; identical outcome vectors are merged.
DiscreteDistribution marginal(const DiscreteJointDistribution& joint);

/// Σ_k p_k log(bᵀx_k).
double expected_log_return(const PortfolioWeights& b, const DiscreteDistribution& dist);

/// The log-optimal portfolio b* over the simplex. Uses multiplicative ascent
/// from the uniform point plus 8 random restarts, then active-set Newton;
/// the returned point satisfies max_i E[X_i / b*ᵀX] <= 1 + tol when the
/// iteration converges.
PortfolioWeights glos_optimal(const DiscreteDistribution& dist, double tol = 1e-12);

/// max_i E[X_i / bᵀX]; equals 1 exactly at the log-optimum and bounds
/// E[b'ᵀX / bᵀX] for every simplex b'.
double ratio_bound(const PortfolioWeights& b, const DiscreteDistribution& dist);

/// Per-label and expected gains from conditioning on Y, with the KL and
/// mutual-information bounds, all in nats.
InformationGain information_gain(const DiscreteJointDistribution& joint, double tol = 1e-12);

/// Portfolio chosen for period i (0-based) given the outcomes drawn so far.
using SequencePolicy =
    std::function<PortfolioWeights(Index period, const std::vector<Eigen::VectorXd>& history)>;

SequencePolicy constant_policy(PortfolioWeights b);

struct SuperiorityStats {
  std::vector<double> log_ratio;  // log(S_n / S_n*) per trial
  double exceed_fraction = 0.0;   // fraction with S_n > n² S_n*
  double mean_rate = 0.0;         // mean of (1/n) log(S_n / S_n*)
};

/// Draws `trials` i.i.d. paths of length n; trial i uses Rng::substream(seed, i).
SuperiorityStats superiority_trial(const DiscreteDistribution& dist, const SequencePolicy& competitor,
                                   Index n, Index trials, std::uint64_t seed, std::size_t workers = 1);

/// expected_log_return(b, dist) - allocation_utility(b, exact_moments(dist)).
double taylor_gap(const PortfolioWeights& b, const DiscreteDistribution& dist);

/// Text format: one `prob,x1,...,xd` row per outcome; '#' comments and blank
/// lines ignored.
DiscreteDistribution load_distribution(const std::filesystem::path& path);

/// Joint format: groups of outcome rows, each opened by `y=<label>,<y_prob>`.
DiscreteJointDistribution load_joint(const std::filesystem::path& path);

DiscreteDistribution parse_distribution(const std::string& text);
DiscreteJointDistribution parse_joint(const std::string& text);

}  // namespace rlos
