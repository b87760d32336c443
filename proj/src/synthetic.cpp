#include "rlos/synthetic.hpp"

#include "rlos/random.hpp"

#include <cmath>

namespace rlos {
namespace {

constexpr double kWick = 0.005;
constexpr double kBaseVolume = 1e6;

void validate_spec(const GeneratorSpec& spec) {
  if (spec.periods < 1) throw ValidationError("generator: periods must be >= 1");
  if (spec.kind == GeneratorKind::Iid) {
    if (!spec.distribution) throw ValidationError("generator: iid needs a distribution");
    validate_distribution(*spec.distribution);
    return;
  }
  if (spec.assets < 1) throw ValidationError("generator: assets must be >= 1");
  if (!(spec.noise >= 0.0) || !(spec.drift > -1.0)) throw ValidationError("generator: bad drift or noise");
  if (spec.kind == GeneratorKind::MeanRevert) {
    if (!(spec.amplitude >= 0.0 && spec.amplitude < 1.0)) throw ValidationError("generator: amplitude must lie in [0, 1)");
    if (spec.half_period < 1) throw ValidationError("generator: half_period must be >= 1");
  }
}

Index draw_outcome(const Eigen::VectorXd& probs, Rng& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (Index k = 0; k < probs.size(); ++k) {
    acc += probs(k);
    if (u < acc) return k;
  }
  return probs.size() - 1;
}

}  // namespace

GeneratorKind parse_generator_kind(std::string_view name) {
  if (name == "const") return GeneratorKind::Const;
  if (name == "iid") return GeneratorKind::Iid;
  if (name == "trend") return GeneratorKind::Trend;
  if (name == "meanrevert") return GeneratorKind::MeanRevert;
  throw ValidationError("unknown generator '" + std::string(name) + "' (const, iid, trend, meanrevert)");
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::Const: return "const";
    case GeneratorKind::Iid: return "iid";
    case GeneratorKind::Trend: return "trend";
    case GeneratorKind::MeanRevert: return "meanrevert";
  }
  return "unknown";
}

Eigen::MatrixXd generate_fluctuations(const GeneratorSpec& spec) {
  validate_spec(spec);
  Rng rng(spec.seed);
  const Index T = spec.periods;
  if (spec.kind == GeneratorKind::Iid) {
    const DiscreteDistribution& dist = *spec.distribution;
    Eigen::MatrixXd x(dist.assets(), T);
    for (Index t = 0; t < T; ++t) x.col(t) = dist.support.row(draw_outcome(dist.probs, rng)).transpose();
    return x;
  }
  const Index d = spec.assets;
  Eigen::MatrixXd x = Eigen::MatrixXd::Ones(d, T);
  if (spec.kind == GeneratorKind::Const) return x;
  for (Index t = 0; t < T; ++t) {
    const bool swapped = (t / spec.half_period) % 2 == 1;
    for (Index a = 0; a < d; ++a) {
      double base = 1.0;
      if (spec.kind == GeneratorKind::Trend) {
        base = a == 0 ? 1.0 + spec.drift : 1.0;
      } else {
        const bool up = (a % 2 == 0) != swapped;
        base = up ? 1.0 + spec.amplitude : 1.0 - spec.amplitude;
      }
      x(a, t) = base * std::exp(spec.noise * rng.normal());
    }
  }
  return x;
}

AssetPanel generate_panel(const GeneratorSpec& spec) {
  const Eigen::MatrixXd x = generate_fluctuations(spec);
  const Index d = x.rows();
  const Index T = x.cols();
  // Separate stream so wicks and volume never disturb the fluctuation draws.
  Rng rng = Rng::substream(spec.seed, 1);
  const bool flat = spec.kind == GeneratorKind::Const;

  AssetPanel p;
  for (Index a = 0; a < d; ++a) {
    std::string digits = std::to_string(a);
    if (digits.size() < 3) digits.insert(0, 3 - digits.size(), '0');
    p.asset_ids.push_back("S" + digits);
  }
  for (Index t = 0; t < T; ++t) p.period_labels.push_back(std::to_string(t));
  p.open.resize(d, T);
  p.high.resize(d, T);
  p.low.resize(d, T);
  p.close.resize(d, T);
  p.volume.resize(d, T);
  for (Index a = 0; a < d; ++a) {
    double price = 1.0;
    for (Index t = 0; t < T; ++t) {
      const double open = price;
      const double close = open * x(a, t);
      p.open(a, t) = open;
      p.close(a, t) = close;
      if (flat) {
        p.high(a, t) = std::max(open, close);
        p.low(a, t) = std::min(open, close);
        p.volume(a, t) = kBaseVolume;
      } else {
        p.high(a, t) = std::max(open, close) * (1.0 + kWick * rng.uniform());
        p.low(a, t) = std::min(open, close) * (1.0 - kWick * rng.uniform());
        p.volume(a, t) = kBaseVolume * std::exp(0.2 * rng.normal());
      }
      price = close;
    }
  }
  validate_panel(p);
  return p;
}

}  // namespace rlos
