#pragma once

#include "rlos/glos_oracle.hpp"
#include "rlos/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace rlos {

struct OracleCheck {
  std::string group;  // "information benefit", "superiority", ...
  std::string check;
  std::string detail;
  bool passed = false;
};

struct OracleSuiteOptions {
  Index trials = 500;
  std::uint64_t seed = 1;
  std::size_t workers = 1;
};

/// Randomized property checks of the log-optimal theory: the Jensen and ratio
/// inequalities, information benefit, long-term superiority (Markov step) at
/// n = 10, 50, 200, the covariance-robustness bound and the Taylor surrogate.
/// Each check family derives its own seed from `seed`; instance i then
/// draws from Rng::substream(family_seed, i).
std::vector<OracleCheck> run_oracle_suite(const OracleSuiteOptions& options);

/// Fixed-width pass/fail table, one row per check.
std::string format_oracle_table(const std::vector<OracleCheck>& checks);

/// Random small joint (2-3 labels, 2-3 assets, 2-3 outcomes per label); when
/// `independent`, every conditional is the same distribution.
DiscreteJointDistribution random_joint(Rng& rng, bool independent);

/// Symmetric two-outcome market: (2, 0.5) and (0.5, 2) with probability 1/2.
DiscreteDistribution symmetric_two_outcome();

}  // namespace rlos
