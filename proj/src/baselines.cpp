#include "rlos/baselines.hpp"

namespace rlos {
namespace {

void require_fluctuation(const FluctuationVector& x, const char* where) {
  if (x.size() < 1 || !x.allFinite() || (x.array() <= 0.0).any()) {
    throw ValidationError(std::string(where) + ": fluctuation entries must be positive and finite");
  }
}

}  // namespace

PortfolioWeights naive_average(Index d) { return uniform_portfolio(d); }

PortfolioWeights follow_winner(const FluctuationVector& prev) {
  require_fluctuation(prev, "follow_winner");
  Index best = 0;
  for (Index i = 1; i < prev.size(); ++i) {
    if (prev(i) > prev(best)) best = i;
  }
  PortfolioWeights b = PortfolioWeights::Zero(prev.size());
  b(best) = 1.0;
  return b;
}

PortfolioWeights follow_loser(const FluctuationVector& prev) {
  require_fluctuation(prev, "follow_loser");
  Index worst = 0;
  for (Index i = 1; i < prev.size(); ++i) {
    if (prev(i) < prev(worst)) worst = i;
  }
  PortfolioWeights b = PortfolioWeights::Zero(prev.size());
  b(worst) = 1.0;
  return b;
}

}  // namespace rlos
