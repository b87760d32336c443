#pragma once

#include "rlos/market_data.hpp"
#include "rlos/random.hpp"
#include "rlos/types.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rlos {

/// Layer sizes of the trader network. Filters span the time axis only, so
/// the parameter count does not depend on the number of assets.
struct AgentArchitecture {
  Index history = 10;
  std::vector<Index> channels{4, 16, 16, 16};
  Index filter_width = 3;
  Index hidden = 16;

  Index conv_layers() const { return static_cast<Index>(channels.size()) - 1; }
  Index feature_length() const { return history - conv_layers() * (filter_width - 1); }
  Index flat_features() const { return channels.back() * feature_length(); }

  void validate() const;
  bool operator==(const AgentArchitecture&) const = default;
};

/// One named slice of the flat parameter vector, stored column-major.
struct BlockInfo {
  std::string name;
  Index offset = 0;
  Index rows = 0;
  Index cols = 0;

  Index size() const { return rows * cols; }
};

/// Blocks in storage order: conv<l>.{weight,bias,gamma,beta} per layer, then
/// fusion.{weight,bias}, policy.weight, value.{weight,bias}.
std::vector<BlockInfo> parameter_layout(const AgentArchitecture& arch);

struct AgentParameters {
  AgentArchitecture arch;
  Eigen::VectorXd theta;  // every trainable value
  std::vector<Eigen::VectorXd> running_mean;
  std::vector<Eigen::VectorXd> running_var;

  const BlockInfo& info(std::string_view name) const;
  Eigen::Map<const Eigen::MatrixXd> block(std::string_view name) const;
  Eigen::Map<Eigen::MatrixXd> block(std::string_view name);

 private:
  friend AgentParameters zero_agent(const AgentArchitecture&);
  std::vector<BlockInfo> layout_;
};

/// All trainable values zero, normalization statistics at (0, 1).
AgentParameters zero_agent(const AgentArchitecture& arch);

/// Rectifier-aware (He) normal initialization; normalization scale 1, shifts
/// and biases 0.
AgentParameters init_agent(const AgentArchitecture& arch, std::uint64_t seed);

struct LearningRateStage {
  std::int64_t end_step = 0;  // stage applies while step < end_step
  double rate = 0.0;
};

struct Hyperparameters {
  double alpha = 1e-4;
  double beta = 1e-2;
  double sigma = 1e-2;
  double c = 1e-4;
  double lambda = 50.0;
  double momentum = 0.9;
  /// Table thresholds are in hundreds of steps: 0-500, 500-1000, 1000-1500.
  std::vector<LearningRateStage> schedule{{50'000, 1e-2}, {100'000, 1e-3}, {150'000, 1e-4}};
  Index batch_size = 32;

  void validate() const;
  /// Rate of the first stage whose end lies beyond `step`; the last stage's
  /// rate persists after the table ends.
  double learning_rate(std::int64_t step) const;
};

struct TradeRecord {
  Index period = 0;
  StateTensor state;
  PortfolioWeights advice;
  PortfolioWeights action;
  double predicted_return = 0.0;
  FluctuationVector realized;
  double realized_return = 0.0;
};

struct AgentOutput {
  PortfolioWeights weights;
  double predicted_return = 0.0;
};

enum class NormMode { Inference, Training };

/// Inference-mode forward pass: normalization uses running statistics.
AgentOutput forward(const AgentParameters& params, const StateTensor& state, const PortfolioWeights& advice);

/// One-hot at argmax of x, lowest index on ties.
PortfolioWeights build_winner_target(const FluctuationVector& x);

/// α(r_pre - r_true)² - β b_optᵀ log b_pre - σ r_true + c‖θ‖ given the
/// network outputs; r_true = log(b_preᵀx).
double loss_from_outputs(const PortfolioWeights& b_pre, double r_pre, const FluctuationVector& x,
                         double theta_norm, const Hyperparameters& hp);

/// Single-record loss with outputs recomputed by the inference forward pass.
double loss(const AgentParameters& params, const TradeRecord& rec, const Hyperparameters& hp);

/// Mean loss over a batch. Training mode normalizes with the batch's own
/// statistics.
double batch_loss(const AgentParameters& params, std::span<const TradeRecord> batch, const Hyperparameters& hp,
                  NormMode mode);

struct LossGradient {
  double loss = 0.0;
  Eigen::VectorXd gradient;  // same layout as AgentParameters::theta
  std::vector<Eigen::VectorXd> batch_mean;  // per conv layer, training mode only
  std::vector<Eigen::VectorXd> batch_var;
};

/// Reverse-mode gradient of batch_loss.
LossGradient loss_and_gradient(const AgentParameters& params, std::span<const TradeRecord> batch,
                               const Hyperparameters& hp, NormMode mode = NormMode::Training);

Eigen::VectorXd gradient(const AgentParameters& params, std::span<const TradeRecord> batch,
                         const Hyperparameters& hp, NormMode mode = NormMode::Training);

/// Momentum SGD: velocity = r·velocity + ∇L, θ -= l(step)·velocity; running
/// normalization statistics move toward the batch statistics. Returns the
/// pre-update batch loss. Throws RuntimeFailure on a non-finite gradient.
double train_step(AgentParameters& params, Eigen::VectorXd& velocity, std::span<const TradeRecord> batch,
                  const Hyperparameters& hp, std::int64_t step);

/// Replay indices ξ with t - ξ ~ Poisson(λ), clamped to [earliest, t].
std::vector<Index> sample_replay(Index t, Index earliest, double lambda, Index batch, Rng& rng);

void save_checkpoint(const AgentParameters& params, const std::filesystem::path& path);

/// Loads a checkpoint; when `expected` is given its descriptor must match.
AgentParameters load_checkpoint(const std::filesystem::path& path, const AgentArchitecture* expected = nullptr);

}  // namespace rlos
