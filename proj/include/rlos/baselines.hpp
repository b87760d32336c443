#pragma once

#include "rlos/types.hpp"

namespace rlos {

PortfolioWeights naive_average(Index d);

/// One-hot at the best asset of the previous period, lowest index on ties.
PortfolioWeights follow_winner(const FluctuationVector& prev);

/// One-hot at the worst asset of the previous period, lowest index on ties.
PortfolioWeights follow_loser(const FluctuationVector& prev);

}  // namespace rlos
