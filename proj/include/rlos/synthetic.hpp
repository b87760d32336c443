#pragma once

#include "rlos/glos_oracle.hpp"
#include "rlos/market_data.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace rlos {

enum class GeneratorKind { Const, Iid, Trend, MeanRevert };

GeneratorKind parse_generator_kind(std::string_view name);
std::string to_string(GeneratorKind kind);

/// Seeded synthetic market. Fluctuations per kind:
///   const       every X = 1, flat prices and volume
///   iid         rows drawn from `distribution` (its width sets the asset count)
///   trend       asset 0 grows by `drift` per period, all assets carry
///               log-normal noise of scale `noise`
///   meanrevert  even assets gain `amplitude` while odd assets lose it, the
///               roles swapping every `half_period` periods, plus noise
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::MeanRevert;
  Index assets = 4;
  Index periods = 250;
  std::uint64_t seed = 1;
  std::optional<DiscreteDistribution> distribution;
  double drift = 0.01;
  double noise = 0.01;
  double amplitude = 0.03;
  Index half_period = 2;
};

/// d × T fluctuation matrix for the spec.
Eigen::MatrixXd generate_fluctuations(const GeneratorSpec& spec);

/// Full OHLCV panel: open(t) = close(t-1), close = open · X, wicks and volume
/// drawn from the same seeded stream. Asset ids S000, S001, ...; integer
/// period labels.
AssetPanel generate_panel(const GeneratorSpec& spec);

}  // namespace rlos
