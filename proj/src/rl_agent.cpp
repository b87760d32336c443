#include "rlos/rl_agent.hpp"

#include "rlos/text_format.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace rlos {
namespace {

constexpr double kNormEpsilon = 1e-5;
constexpr double kRunningMomentum = 0.1;

std::string conv_name(Index layer, const char* part) {
  return "conv" + std::to_string(layer) + "." + part;
}

struct Input {
  const StateTensor* state;
  const PortfolioWeights* advice;
};

struct ConvCache {
  Eigen::MatrixXd cols;        // im2col of the layer input
  Eigen::MatrixXd pre;         // filter response before rectification
  Eigen::MatrixXd normalized;  // x̂
  Eigen::VectorXd mean;
  Eigen::VectorXd var;
  Eigen::VectorXd inv_std;
};

struct ForwardPass {
  std::vector<Index> offsets;  // first global asset of each record, plus the total
  std::vector<ConvCache> conv;
  Eigen::MatrixXd features;  // (F + 1) × G, last row is the advice
  Eigen::MatrixXd hidden_pre;
  Eigen::MatrixXd hidden;
  std::vector<Eigen::VectorXd> weights;
  std::vector<double> predicted;
};

Eigen::MatrixXd im2col(const Eigen::MatrixXd& input, Index groups, Index len_in, Index width) {
  const Index cin = input.rows();
  const Index len_out = len_in - width + 1;
  Eigen::MatrixXd cols(cin * width, groups * len_out);
  for (Index g = 0; g < groups; ++g) {
    for (Index t = 0; t < len_out; ++t) {
      for (Index c = 0; c < cin; ++c) {
        for (Index k = 0; k < width; ++k) {
          cols(c * width + k, g * len_out + t) = input(c, g * len_in + t + k);
        }
      }
    }
  }
  return cols;
}

Eigen::MatrixXd col2im(const Eigen::MatrixXd& dcols, Index cin, Index groups, Index len_in, Index width) {
  const Index len_out = len_in - width + 1;
  Eigen::MatrixXd dinput = Eigen::MatrixXd::Zero(cin, groups * len_in);
  for (Index g = 0; g < groups; ++g) {
    for (Index t = 0; t < len_out; ++t) {
      for (Index c = 0; c < cin; ++c) {
        for (Index k = 0; k < width; ++k) {
          dinput(c, g * len_in + t + k) += dcols(c * width + k, g * len_out + t);
        }
      }
    }
  }
  return dinput;
}

Eigen::Map<const Eigen::MatrixXd> view(const Eigen::VectorXd& v, const BlockInfo& b) {
  return {v.data() + b.offset, b.rows, b.cols};
}

Eigen::Map<Eigen::MatrixXd> view(Eigen::VectorXd& v, const BlockInfo& b) { return {v.data() + b.offset, b.rows, b.cols}; }

void check_input(const AgentArchitecture& arch, const StateTensor& s, const PortfolioWeights& advice) {
  if (s.history() != arch.history) {
    throw ValidationError("agent: state history " + std::to_string(s.history()) + " does not match architecture " +
                          std::to_string(arch.history));
  }
  if (s.assets() < 1) throw ValidationError("agent: state has no assets");
  for (const auto& ch : s.channels) {
    if (ch.rows() != s.assets() || ch.cols() != s.history()) throw ValidationError("agent: ragged state tensor");
  }
  if (advice.size() != s.assets()) throw ValidationError("agent: advice length does not match asset count");
}

ForwardPass run_forward(const AgentParameters& p, std::span<const Input> inputs, NormMode mode) {
  const AgentArchitecture& arch = p.arch;
  ForwardPass fp;
  fp.offsets.push_back(0);
  for (const Input& in : inputs) {
    check_input(arch, *in.state, *in.advice);
    fp.offsets.push_back(fp.offsets.back() + in.state->assets());
  }
  const Index groups = fp.offsets.back();
  const Index n = arch.history;
  const Index width = arch.filter_width;

  Eigen::MatrixXd act(arch.channels.front(), groups * n);
  for (std::size_t r = 0; r < inputs.size(); ++r) {
    const StateTensor& s = *inputs[r].state;
    for (Index a = 0; a < s.assets(); ++a) {
      const Index g = fp.offsets[r] + a;
      for (Index c = 0; c < 4; ++c) act.block(c, g * n, 1, n) = s.channels[static_cast<std::size_t>(c)].row(a);
    }
  }

  Index len = n;
  for (Index l = 0; l < arch.conv_layers(); ++l) {
    ConvCache cache;
    const auto w = p.block(conv_name(l, "weight"));
    const auto bias = p.block(conv_name(l, "bias"));
    const auto gamma = p.block(conv_name(l, "gamma"));
    const auto beta = p.block(conv_name(l, "beta"));
    cache.cols = im2col(act, groups, len, width);
    len = len - width + 1;
    cache.pre = w * cache.cols;
    cache.pre.colwise() += bias.col(0);
    const Eigen::MatrixXd rect = cache.pre.cwiseMax(0.0);
    if (mode == NormMode::Training) {
      cache.mean = rect.rowwise().mean();
      cache.var = (rect.colwise() - cache.mean).array().square().rowwise().mean();
    } else {
      cache.mean = p.running_mean[static_cast<std::size_t>(l)];
      cache.var = p.running_var[static_cast<std::size_t>(l)];
    }
    cache.inv_std = (cache.var.array() + kNormEpsilon).rsqrt();
    cache.normalized = ((rect.colwise() - cache.mean).array().colwise() * cache.inv_std.array()).matrix();
    act = (cache.normalized.array().colwise() * gamma.col(0).array()).matrix();
    act.colwise() += beta.col(0);
    fp.conv.push_back(std::move(cache));
  }

  const Index channels = arch.channels.back();
  const Index flat = channels * len;
  fp.features.resize(flat + 1, groups);
  for (Index g = 0; g < groups; ++g) {
    for (Index c = 0; c < channels; ++c) fp.features.block(c * len, g, len, 1) = act.block(c, g * len, 1, len).transpose();
  }
  for (std::size_t r = 0; r < inputs.size(); ++r) {
    fp.features.block(flat, fp.offsets[r], 1, inputs[r].state->assets()) = inputs[r].advice->transpose();
  }

  fp.hidden_pre = p.block("fusion.weight") * fp.features;
  fp.hidden_pre.colwise() += p.block("fusion.bias").col(0);
  fp.hidden = fp.hidden_pre.cwiseMax(0.0);

  const Eigen::RowVectorXd logits = p.block("policy.weight").col(0).transpose() * fp.hidden;
  const auto value_w = p.block("value.weight").col(0);
  const double value_b = p.block("value.bias")(0, 0);
  for (std::size_t r = 0; r < inputs.size(); ++r) {
    const Index off = fp.offsets[r];
    const Index d = fp.offsets[r + 1] - off;
    const Eigen::ArrayXd z = logits.segment(off, d).transpose().array();
    const Eigen::ArrayXd e = (z - z.maxCoeff()).exp();
    fp.weights.emplace_back((e / e.sum()).matrix());
    const Eigen::VectorXd pooled = fp.hidden.middleCols(off, d).rowwise().mean();
    fp.predicted.push_back(value_w.dot(pooled) + value_b);
  }
  return fp;
}

std::vector<Input> to_inputs(std::span<const TradeRecord> batch) {
  std::vector<Input> inputs;
  inputs.reserve(batch.size());
  for (const TradeRecord& rec : batch) {
    if (rec.realized.size() != rec.state.assets()) throw ValidationError("agent: realized fluctuation length mismatch");
    inputs.push_back({&rec.state, &rec.advice});
  }
  return inputs;
}

}  // namespace

void AgentArchitecture::validate() const {
  if (channels.size() < 2 || channels.front() != 4) {
    throw ValidationError("architecture: needs >= 1 conv layer and 4 input channels");
  }
  for (Index c : channels) {
    if (c < 1) throw ValidationError("architecture: channel counts must be positive");
  }
  if (filter_width < 1 || hidden < 1) throw ValidationError("architecture: sizes must be positive");
  if (feature_length() < 1) throw ValidationError("architecture: history too short for the filter stack");
}

std::vector<BlockInfo> parameter_layout(const AgentArchitecture& arch) {
  arch.validate();
  std::vector<BlockInfo> out;
  Index offset = 0;
  auto add = [&](std::string name, Index rows, Index cols) {
    out.push_back({std::move(name), offset, rows, cols});
    offset += rows * cols;
  };
  for (Index l = 0; l < arch.conv_layers(); ++l) {
    const Index cin = arch.channels[static_cast<std::size_t>(l)];
    const Index cout = arch.channels[static_cast<std::size_t>(l + 1)];
    add(conv_name(l, "weight"), cout, cin * arch.filter_width);
    add(conv_name(l, "bias"), cout, 1);
    add(conv_name(l, "gamma"), cout, 1);
    add(conv_name(l, "beta"), cout, 1);
  }
  add("fusion.weight", arch.hidden, arch.flat_features() + 1);
  add("fusion.bias", arch.hidden, 1);
  add("policy.weight", arch.hidden, 1);
  add("value.weight", arch.hidden, 1);
  add("value.bias", 1, 1);
  return out;
}

const BlockInfo& AgentParameters::info(std::string_view name) const {
  for (const BlockInfo& b : layout_) {
    if (b.name == name) return b;
  }
  throw ValidationError("agent: unknown parameter block " + std::string(name));
}

Eigen::Map<const Eigen::MatrixXd> AgentParameters::block(std::string_view name) const { return view(theta, info(name)); }

Eigen::Map<Eigen::MatrixXd> AgentParameters::block(std::string_view name) {
  const BlockInfo& b = info(name);
  return view(theta, b);
}

AgentParameters zero_agent(const AgentArchitecture& arch) {
  AgentParameters p;
  p.arch = arch;
  p.layout_ = parameter_layout(arch);
  p.theta = Eigen::VectorXd::Zero(p.layout_.back().offset + p.layout_.back().size());
  for (Index l = 0; l < arch.conv_layers(); ++l) {
    const Index cout = arch.channels[static_cast<std::size_t>(l + 1)];
    p.running_mean.push_back(Eigen::VectorXd::Zero(cout));
    p.running_var.push_back(Eigen::VectorXd::Ones(cout));
  }
  return p;
}

AgentParameters init_agent(const AgentArchitecture& arch, std::uint64_t seed) {
  AgentParameters p = zero_agent(arch);
  Rng rng(seed);
  auto fill = [&](std::string_view name, double stddev) {
    auto m = p.block(name);
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = stddev * rng.normal();
  };
  for (Index l = 0; l < arch.conv_layers(); ++l) {
    const auto fan_in = static_cast<double>(arch.channels[static_cast<std::size_t>(l)] * arch.filter_width);
    fill(conv_name(l, "weight"), std::sqrt(2.0 / fan_in));
    p.block(conv_name(l, "gamma")).setOnes();
  }
  fill("fusion.weight", std::sqrt(2.0 / static_cast<double>(arch.flat_features() + 1)));
  fill("policy.weight", std::sqrt(1.0 / static_cast<double>(arch.hidden)));
  fill("value.weight", std::sqrt(1.0 / static_cast<double>(arch.hidden)));
  return p;
}

void Hyperparameters::validate() const {
  if (!(alpha > 0) || !(beta > 0) || !(sigma > 0) || !(c > 0)) {
    throw ValidationError("hyperparameters: alpha, beta, sigma, c must be positive");
  }
  if (!(lambda > 0)) throw ValidationError("hyperparameters: lambda must be positive");
  if (!(momentum >= 0.0 && momentum < 1.0)) throw ValidationError("hyperparameters: momentum must lie in [0, 1)");
  if (schedule.empty()) throw ValidationError("hyperparameters: learning-rate schedule is empty");
  std::int64_t prev = 0;
  for (const auto& stage : schedule) {
    if (!(stage.rate > 0)) throw ValidationError("hyperparameters: learning rates must be positive");
    if (stage.end_step <= prev) throw ValidationError("hyperparameters: schedule thresholds must increase");
    prev = stage.end_step;
  }
  if (batch_size < 1) throw ValidationError("hyperparameters: batch size must be >= 1");
}

double Hyperparameters::learning_rate(std::int64_t step) const {
  for (const auto& stage : schedule) {
    if (step < stage.end_step) return stage.rate;
  }
  return schedule.back().rate;
}

AgentOutput forward(const AgentParameters& params, const StateTensor& state, const PortfolioWeights& advice) {
  const Input in{&state, &advice};
  ForwardPass fp = run_forward(params, std::span<const Input>(&in, 1), NormMode::Inference);
  return {std::move(fp.weights.front()), fp.predicted.front()};
}

PortfolioWeights build_winner_target(const FluctuationVector& x) {
  if (x.size() < 1) throw ValidationError("build_winner_target: empty fluctuation vector");
  Index best = 0;
  for (Index i = 1; i < x.size(); ++i) {
    if (x(i) > x(best)) best = i;
  }
  PortfolioWeights b = PortfolioWeights::Zero(x.size());
  b(best) = 1.0;
  return b;
}

double loss_from_outputs(const PortfolioWeights& b_pre, double r_pre, const FluctuationVector& x, double theta_norm,
                         const Hyperparameters& hp) {
  const double r_true = std::log(b_pre.dot(x));
  const PortfolioWeights target = build_winner_target(x);
  const double cross_entropy = -target.dot(b_pre.array().log().matrix());
  const double err = r_pre - r_true;
  return hp.alpha * err * err + hp.beta * cross_entropy - hp.sigma * r_true + hp.c * theta_norm;
}

double loss(const AgentParameters& params, const TradeRecord& rec, const Hyperparameters& hp) {
  const AgentOutput out = forward(params, rec.state, rec.advice);
  return loss_from_outputs(out.weights, out.predicted_return, rec.realized, params.theta.norm(), hp);
}

double batch_loss(const AgentParameters& params, std::span<const TradeRecord> batch, const Hyperparameters& hp,
                  NormMode mode) {
  if (batch.empty()) throw ValidationError("batch_loss: empty batch");
  const auto inputs = to_inputs(batch);
  const ForwardPass fp = run_forward(params, inputs, mode);
  const double norm = params.theta.norm();
  double total = 0.0;
  for (std::size_t r = 0; r < batch.size(); ++r) {
    total += loss_from_outputs(fp.weights[r], fp.predicted[r], batch[r].realized, norm, hp);
  }
  return total / static_cast<double>(batch.size());
}

LossGradient loss_and_gradient(const AgentParameters& params, std::span<const TradeRecord> batch,
                               const Hyperparameters& hp, NormMode mode) {
  if (batch.empty()) throw ValidationError("gradient: empty batch");
  const AgentArchitecture& arch = params.arch;
  const auto inputs = to_inputs(batch);
  const ForwardPass fp = run_forward(params, inputs, mode);
  const auto batch_n = static_cast<double>(batch.size());
  const double norm = params.theta.norm();

  LossGradient out;
  out.gradient = Eigen::VectorXd::Zero(params.theta.size());
  Eigen::VectorXd& grad = out.gradient;
  auto g = [&](std::string_view name) { return view(grad, params.info(name)); };

  const Index groups = fp.offsets.back();
  const auto policy_w = params.block("policy.weight").col(0);
  const auto value_w = params.block("value.weight").col(0);
  Eigen::MatrixXd d_hidden(arch.hidden, groups);
  Eigen::RowVectorXd d_logits(groups);
  double d_value_bias = 0.0;
  Eigen::VectorXd d_value_w = Eigen::VectorXd::Zero(arch.hidden);

  double total = 0.0;
  for (std::size_t r = 0; r < batch.size(); ++r) {
    const Index off = fp.offsets[r];
    const Index d = fp.offsets[r + 1] - off;
    const Eigen::VectorXd& p = fp.weights[r];
    const FluctuationVector& x = batch[r].realized;
    total += loss_from_outputs(p, fp.predicted[r], x, norm, hp);

    const double growth = p.dot(x);
    const double r_true = std::log(growth);
    const double err = fp.predicted[r] - r_true;
    const double d_pred = 2.0 * hp.alpha * err / batch_n;
    const double d_rtrue = (-2.0 * hp.alpha * err - hp.sigma) / batch_n;
    const Eigen::VectorXd d_p = d_rtrue * x / growth;
    Eigen::VectorXd dz = p.cwiseProduct(d_p.array().matrix() - Eigen::VectorXd::Constant(d, p.dot(d_p)));
    dz += (hp.beta / batch_n) * (p - build_winner_target(x));
    d_logits.segment(off, d) = dz.transpose();

    const Eigen::VectorXd pooled = fp.hidden.middleCols(off, d).rowwise().mean();
    d_value_w += d_pred * pooled;
    d_value_bias += d_pred;
    for (Index a = 0; a < d; ++a) {
      d_hidden.col(off + a) = policy_w * dz(a) + value_w * (d_pred / static_cast<double>(d));
    }
  }
  out.loss = total / batch_n;

  g("policy.weight").col(0) = fp.hidden * d_logits.transpose();
  g("value.weight").col(0) = d_value_w;
  g("value.bias")(0, 0) = d_value_bias;

  const Eigen::MatrixXd d_hidden_pre = d_hidden.cwiseProduct((fp.hidden_pre.array() > 0.0).cast<double>().matrix());
  g("fusion.weight") = d_hidden_pre * fp.features.transpose();
  g("fusion.bias").col(0) = d_hidden_pre.rowwise().sum();
  const Eigen::MatrixXd d_features = params.block("fusion.weight").transpose() * d_hidden_pre;

  const Index channels = arch.channels.back();
  const Index len_last = arch.feature_length();
  Eigen::MatrixXd d_act(channels, groups * len_last);
  for (Index gi = 0; gi < groups; ++gi) {
    for (Index c = 0; c < channels; ++c) {
      d_act.block(c, gi * len_last, 1, len_last) = d_features.block(c * len_last, gi, len_last, 1).transpose();
    }
  }

  for (Index l = arch.conv_layers() - 1; l >= 0; --l) {
    const ConvCache& cache = fp.conv[static_cast<std::size_t>(l)];
    const auto gamma = params.block(conv_name(l, "gamma")).col(0);
    g(conv_name(l, "gamma")).col(0) = d_act.cwiseProduct(cache.normalized).rowwise().sum();
    g(conv_name(l, "beta")).col(0) = d_act.rowwise().sum();

    const Eigen::ArrayXd scale = gamma.array() * cache.inv_std.array();
    Eigen::MatrixXd d_rect;
    if (mode == NormMode::Training) {
      const Eigen::VectorXd mean_dy = d_act.rowwise().mean();
      const Eigen::VectorXd mean_dy_xhat = d_act.cwiseProduct(cache.normalized).rowwise().mean();
      Eigen::MatrixXd centered = d_act.colwise() - mean_dy;
      centered -= (cache.normalized.array().colwise() * mean_dy_xhat.array()).matrix();
      d_rect = (centered.array().colwise() * scale).matrix();
    } else {
      d_rect = (d_act.array().colwise() * scale).matrix();
    }
    const Eigen::MatrixXd d_pre = d_rect.cwiseProduct((cache.pre.array() > 0.0).cast<double>().matrix());
    g(conv_name(l, "weight")) = d_pre * cache.cols.transpose();
    g(conv_name(l, "bias")).col(0) = d_pre.rowwise().sum();
    if (l > 0) {
      const Eigen::MatrixXd d_cols = params.block(conv_name(l, "weight")).transpose() * d_pre;
      const Index cin = arch.channels[static_cast<std::size_t>(l)];
      const Index len_in = arch.history - l * (arch.filter_width - 1);
      d_act = col2im(d_cols, cin, groups, len_in, arch.filter_width);
    }
    if (mode == NormMode::Training) {
      out.batch_mean.insert(out.batch_mean.begin(), cache.mean);
      out.batch_var.insert(out.batch_var.begin(), cache.var);
    }
  }

  if (norm > 0.0) grad += (hp.c / norm) * params.theta;
  return out;
}

Eigen::VectorXd gradient(const AgentParameters& params, std::span<const TradeRecord> batch,
                         const Hyperparameters& hp, NormMode mode) {
  return loss_and_gradient(params, batch, hp, mode).gradient;
}

double train_step(AgentParameters& params, Eigen::VectorXd& velocity, std::span<const TradeRecord> batch,
                  const Hyperparameters& hp, std::int64_t step) {
  if (batch.empty()) throw ValidationError("train_step: empty batch");
  if (velocity.size() == 0) velocity = Eigen::VectorXd::Zero(params.theta.size());
  if (velocity.size() != params.theta.size()) throw ValidationError("train_step: velocity shape mismatch");
  const LossGradient lg = loss_and_gradient(params, batch, hp, NormMode::Training);
  if (!lg.gradient.allFinite() || !std::isfinite(lg.loss)) {
    throw RuntimeFailure("train_step: non-finite gradient at step " + std::to_string(step));
  }
  velocity = hp.momentum * velocity + lg.gradient;
  params.theta -= hp.learning_rate(step) * velocity;
  for (std::size_t l = 0; l < lg.batch_mean.size(); ++l) {
    params.running_mean[l] = (1.0 - kRunningMomentum) * params.running_mean[l] + kRunningMomentum * lg.batch_mean[l];
    params.running_var[l] = (1.0 - kRunningMomentum) * params.running_var[l] + kRunningMomentum * lg.batch_var[l];
  }
  return lg.loss;
}

std::vector<Index> sample_replay(Index t, Index earliest, double lambda, Index batch, Rng& rng) {
  if (earliest > t) throw ValidationError("sample_replay: empty history");
  if (!(lambda > 0.0)) throw ValidationError("sample_replay: lambda must be positive");
  if (batch < 1) throw ValidationError("sample_replay: batch must be >= 1");
  std::vector<Index> out(static_cast<std::size_t>(batch));
  for (auto& xi : out) {
    const Index lag = static_cast<Index>(rng.poisson(lambda));
    xi = std::max(earliest, t - lag);
  }
  return out;
}

void save_checkpoint(const AgentParameters& params, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write checkpoint: " + path.string());
  const AgentArchitecture& a = params.arch;
  out << "rlos-agent-checkpoint 1\n";
  out << "history " << a.history << '\n';
  out << "channels";
  for (Index c : a.channels) out << ' ' << c;
  out << '\n';
  out << "filter_width " << a.filter_width << '\n';
  out << "hidden " << a.hidden << '\n';
  auto write_values = [&](const double* data, Index size) {
    for (Index i = 0; i < size; ++i) out << (i ? " " : "") << format_double(data[i]);
    out << '\n';
  };
  for (const BlockInfo& b : parameter_layout(a)) {
    out << "block " << b.name << ' ' << b.rows << ' ' << b.cols << '\n';
    write_values(params.theta.data() + b.offset, b.size());
  }
  for (std::size_t l = 0; l < params.running_mean.size(); ++l) {
    out << "running conv" << l << ' ' << params.running_mean[l].size() << '\n';
    write_values(params.running_mean[l].data(), params.running_mean[l].size());
    write_values(params.running_var[l].data(), params.running_var[l].size());
  }
  out << "end\n";
  if (!out) throw RuntimeFailure("failed writing checkpoint: " + path.string());
}

AgentParameters load_checkpoint(const std::filesystem::path& path, const AgentArchitecture* expected) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open checkpoint: " + path.string());
  const std::string where = "checkpoint " + path.string();
  auto next_line = [&]() {
    std::string line;
    if (!std::getline(in, line)) throw ValidationError(where + ": truncated");
    return line;
  };
  auto expect_key = [&](const std::string& line, const std::string& key) {
    auto fields = split(trim(line), ' ');
    if (fields.empty() || fields.front() != key) throw ValidationError(where + ": expected '" + key + "'");
    fields.erase(fields.begin());
    return fields;
  };
  auto read_values = [&](double* data, Index size) {
    const auto fields = split(trim(next_line()), ' ');
    if (static_cast<Index>(fields.size()) != size) throw ValidationError(where + ": value count mismatch");
    for (Index i = 0; i < size; ++i) data[i] = parse_double(fields[static_cast<std::size_t>(i)], where);
  };

  if (trim(next_line()) != "rlos-agent-checkpoint 1") throw ValidationError(where + ": unrecognized header");
  AgentArchitecture arch;
  arch.history = parse_integer(expect_key(next_line(), "history").at(0), where);
  arch.channels.clear();
  for (const auto& f : expect_key(next_line(), "channels")) arch.channels.push_back(parse_integer(f, where));
  arch.filter_width = parse_integer(expect_key(next_line(), "filter_width").at(0), where);
  arch.hidden = parse_integer(expect_key(next_line(), "hidden").at(0), where);
  arch.validate();
  if (expected && !(*expected == arch)) {
    throw ValidationError(where + ": architecture descriptor does not match the configured agent");
  }
  AgentParameters p = zero_agent(arch);
  for (const BlockInfo& b : parameter_layout(arch)) {
    const auto fields = expect_key(next_line(), "block");
    if (fields.size() != 3 || fields[0] != b.name || parse_integer(fields[1], where) != b.rows ||
        parse_integer(fields[2], where) != b.cols) {
      throw ValidationError(where + ": block '" + b.name + "' missing or misshapen");
    }
    read_values(p.theta.data() + b.offset, b.size());
  }
  for (std::size_t l = 0; l < p.running_mean.size(); ++l) {
    const auto fields = expect_key(next_line(), "running");
    if (fields.size() != 2 || fields[0] != "conv" + std::to_string(l) ||
        parse_integer(fields[1], where) != p.running_mean[l].size()) {
      throw ValidationError(where + ": running statistics for conv" + std::to_string(l) + " missing");
    }
    read_values(p.running_mean[l].data(), p.running_mean[l].size());
    read_values(p.running_var[l].data(), p.running_var[l].size());
  }
  if (trim(next_line()) != "end") throw ValidationError(where + ": missing end marker");
  if (!p.theta.allFinite()) throw ValidationError(where + ": non-finite parameters");
  return p;
}

}  // namespace rlos
