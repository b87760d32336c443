#include "rlos/cli.hpp"

#include "rlos/oracle_suite.hpp"
#include "rlos/parallel.hpp"
#include "rlos/text_format.hpp"

#include <CLI11.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <openssl/evp.h>

#include <array>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <sstream>

namespace rlos::cli {
namespace {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"data", {"source", "path", "kind", "assets", "periods", "seed", "distribution", "drift", "noise", "amplitude",
                "half_period"}},
      {"strategies", {"list"}},
      {"rlos", {"max_span", "threshold", "min_return", "restarts", "seed"}},
      {"agent", {"history", "channels", "filter_width", "hidden", "checkpoint", "init_seed", "replay_seed", "training",
                 "pretrain_steps"}},
      {"hyper", {"alpha", "beta", "sigma", "c", "lambda", "momentum", "batch_size", "lr_steps", "lr_rates"}},
      {"backtest", {"spans", "seeds", "bootstrap_assets"}},
      {"output", {"dir"}},
  };
  return keys;
}

std::vector<std::string> list_of(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& item : split(text, ',')) {
    const auto t = trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

bool parse_bool(const std::string& text, const std::string& where) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  throw ValidationError(where + ": expected true or false, got '" + text + "'");
}

std::uint64_t parse_seed(const std::string& text, const std::string& where) {
  const auto v = parse_integer(text, where);
  if (v < 0) throw ValidationError(where + ": seeds must be non-negative");
  return static_cast<std::uint64_t>(v);
}

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (const auto& item : items) s += (s.empty() ? "" : ",") + item;
  return s;
}

template <typename T, typename Fmt>
std::string join_as(const std::vector<T>& items, Fmt&& fmt) {
  std::vector<std::string> parts;
  for (const auto& item : items) parts.push_back(fmt(item));
  return join(parts);
}

fs::path resolve(const fs::path& base, const fs::path& p) {
  if (p.empty() || p.is_absolute() || base.empty()) return p;
  return base / p;
}

StrategyConfig config_for(const std::string& name, const RunConfig& cfg) {
  if (name == "naive_average") return NaiveAverageSpec{};
  if (name == "follow_winner") return FollowWinnerSpec{};
  if (name == "follow_loser") return FollowLoserSpec{};
  if (name == "rlos") return RlosSpec{cfg.rlos};
  if (name == "rlosrl") {
    RlosRlSpec spec;
    spec.rlos = cfg.rlos;
    spec.arch = cfg.arch;
    if (!cfg.checkpoint.empty()) spec.checkpoint = cfg.checkpoint;
    spec.init_seed = cfg.init_seed;
    spec.replay_seed = cfg.replay_seed;
    spec.hp = cfg.hp;
    spec.training = cfg.training;
    spec.pretrain_steps = cfg.pretrain_steps;
    return spec;
  }
  throw ValidationError("unknown strategy '" + name + "' (naive_average, follow_winner, follow_loser, rlos, rlosrl)");
}

void write_text(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw RuntimeFailure("cannot write " + path.string());
  out << bytes;
  if (!out) throw RuntimeFailure("failed writing " + path.string());
}

fs::path output_dir(const RunConfig& cfg, const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("RLOS_OUTPUT_DIR"); env && *env) return env;
  return cfg.output_dir;
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw RuntimeFailure("cannot create " + dir.string() + ": " + ec.message());
}

}  // namespace

RunConfig parse_config(const std::string& text, const fs::path& base_dir) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError("config: " + e.message() + " at line " + std::to_string(e.line()));
  }
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (body.empty() || it == known_keys().end()) throw ValidationError("config: unknown section [" + section + "]");
    for (const auto& [key, value] : body) {
      if (!it->second.count(key)) throw ValidationError("config: unknown key " + section + "." + key);
    }
  }
  auto get = [&](const std::string& path) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(path, '.'))) return std::string(trim(*v));
    return std::nullopt;
  };
  auto get_int = [&](const std::string& key, auto& into) {
    if (auto v = get(key)) into = static_cast<std::decay_t<decltype(into)>>(parse_integer(*v, "config " + key));
  };
  auto get_double = [&](const std::string& key, double& into) {
    if (auto v = get(key)) into = parse_double(*v, "config " + key);
  };
  auto get_seed = [&](const std::string& key, std::uint64_t& into) {
    if (auto v = get(key)) into = parse_seed(*v, "config " + key);
  };

  RunConfig cfg;
  cfg.base_dir = base_dir;
  if (auto v = get("data.source")) cfg.source = *v;
  if (cfg.source != "generator" && cfg.source != "file") {
    throw ValidationError("config data.source: expected generator or file, got '" + cfg.source + "'");
  }
  if (auto v = get("data.path")) cfg.panel_path = *v;
  if (auto v = get("data.kind")) cfg.generator.kind = parse_generator_kind(*v);
  get_int("data.assets", cfg.generator.assets);
  get_int("data.periods", cfg.generator.periods);
  get_seed("data.seed", cfg.generator.seed);
  if (auto v = get("data.distribution")) cfg.distribution_path = *v;
  get_double("data.drift", cfg.generator.drift);
  get_double("data.noise", cfg.generator.noise);
  get_double("data.amplitude", cfg.generator.amplitude);
  get_int("data.half_period", cfg.generator.half_period);

  if (auto v = get("strategies.list")) cfg.strategies = list_of(*v);

  get_int("rlos.max_span", cfg.rlos.max_span);
  get_double("rlos.threshold", cfg.rlos.threshold);
  get_double("rlos.min_return", cfg.rlos.constraints.min_return);
  get_int("rlos.restarts", cfg.rlos.solver.restarts);
  get_seed("rlos.seed", cfg.rlos.solver.seed);

  get_int("agent.history", cfg.arch.history);
  if (auto v = get("agent.channels")) {
    cfg.arch.channels.clear();
    for (const auto& c : list_of(*v)) cfg.arch.channels.push_back(parse_integer(c, "config agent.channels"));
  }
  get_int("agent.filter_width", cfg.arch.filter_width);
  get_int("agent.hidden", cfg.arch.hidden);
  if (auto v = get("agent.checkpoint")) cfg.checkpoint = *v;
  get_seed("agent.init_seed", cfg.init_seed);
  get_seed("agent.replay_seed", cfg.replay_seed);
  if (auto v = get("agent.training")) cfg.training = parse_bool(*v, "config agent.training");
  get_int("agent.pretrain_steps", cfg.pretrain_steps);

  get_double("hyper.alpha", cfg.hp.alpha);
  get_double("hyper.beta", cfg.hp.beta);
  get_double("hyper.sigma", cfg.hp.sigma);
  get_double("hyper.c", cfg.hp.c);
  get_double("hyper.lambda", cfg.hp.lambda);
  get_double("hyper.momentum", cfg.hp.momentum);
  get_int("hyper.batch_size", cfg.hp.batch_size);
  const auto steps = get("hyper.lr_steps");
  const auto rates = get("hyper.lr_rates");
  if (steps || rates) {
    const auto s = list_of(steps.value_or(""));
    const auto r = list_of(rates.value_or(""));
    if (s.size() != r.size() || s.empty()) {
      throw ValidationError("config hyper.lr_steps and hyper.lr_rates must list the same number of entries");
    }
    cfg.hp.schedule.clear();
    for (std::size_t i = 0; i < s.size(); ++i) {
      cfg.hp.schedule.push_back({parse_integer(s[i], "config hyper.lr_steps"), parse_double(r[i], "config hyper.lr_rates")});
    }
  }

  if (auto v = get("backtest.spans")) {
    cfg.spans.clear();
    for (const auto& s : list_of(*v)) cfg.spans.push_back(parse_span(s));
  }
  if (auto v = get("backtest.seeds")) {
    cfg.seeds.clear();
    for (const auto& s : list_of(*v)) cfg.seeds.push_back(parse_seed(s, "config backtest.seeds"));
  }
  get_int("backtest.bootstrap_assets", cfg.bootstrap_assets);
  if (auto v = get("output.dir")) cfg.output_dir = resolve(base_dir, *v);

  // Invariants that do not need the data.
  cfg.hp.validate();
  cfg.arch.validate();
  if (cfg.strategies.empty()) throw ValidationError("config strategies.list is empty");
  for (const auto& name : cfg.strategies) config_for(name, cfg);
  if (cfg.seeds.empty()) throw ValidationError("config backtest.seeds is empty");
  if (cfg.bootstrap_assets < 0) throw ValidationError("config backtest.bootstrap_assets must be >= 0");
  if (cfg.source == "file") {
    if (cfg.panel_path.empty()) throw ValidationError("config data.path is required when data.source = file");
    if (!fs::exists(resolve(base_dir, cfg.panel_path))) {
      throw ValidationError("config data.path: no such file " + resolve(base_dir, cfg.panel_path).string());
    }
  }
  if (cfg.source == "generator" && cfg.generator.kind == GeneratorKind::Iid) {
    if (cfg.distribution_path.empty()) throw ValidationError("config data.distribution is required for kind = iid");
    if (!fs::exists(resolve(base_dir, cfg.distribution_path))) {
      throw ValidationError("config data.distribution: no such file " + resolve(base_dir, cfg.distribution_path).string());
    }
  }
  if (!cfg.checkpoint.empty() && !fs::exists(resolve(base_dir, cfg.checkpoint))) {
    throw ValidationError("config agent.checkpoint: no such file " + resolve(base_dir, cfg.checkpoint).string());
  }
  return cfg;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path());
}

std::vector<std::pair<std::string, std::string>> effective_parameters(const RunConfig& c) {
  std::vector<std::pair<std::string, std::string>> p;
  auto num = [](auto v) {
    if constexpr (std::is_floating_point_v<decltype(v)>) {
      return format_double(v);
    } else {
      return std::to_string(v);
    }
  };
  p.emplace_back("data.source", c.source);
  if (c.source == "file") {
    p.emplace_back("data.path", c.panel_path.generic_string());
  } else {
    p.emplace_back("data.kind", to_string(c.generator.kind));
    if (c.generator.kind == GeneratorKind::Iid) {
      p.emplace_back("data.distribution", c.distribution_path.generic_string());
    } else {
      p.emplace_back("data.assets", num(c.generator.assets));
    }
    p.emplace_back("data.periods", num(c.generator.periods));
    p.emplace_back("data.seed", num(c.generator.seed));
    p.emplace_back("data.drift", num(c.generator.drift));
    p.emplace_back("data.noise", num(c.generator.noise));
    p.emplace_back("data.amplitude", num(c.generator.amplitude));
    p.emplace_back("data.half_period", num(c.generator.half_period));
  }
  p.emplace_back("strategies.list", join(c.strategies));
  p.emplace_back("rlos.max_span", num(c.rlos.max_span));
  p.emplace_back("rlos.threshold", num(c.rlos.threshold));
  p.emplace_back("rlos.min_return", num(c.rlos.constraints.min_return));
  p.emplace_back("rlos.restarts", num(c.rlos.solver.restarts));
  p.emplace_back("rlos.seed", num(c.rlos.solver.seed));
  p.emplace_back("agent.history", num(c.arch.history));
  p.emplace_back("agent.channels", join_as(c.arch.channels, [&](Index v) { return num(v); }));
  p.emplace_back("agent.filter_width", num(c.arch.filter_width));
  p.emplace_back("agent.hidden", num(c.arch.hidden));
  p.emplace_back("agent.checkpoint", c.checkpoint.generic_string());
  p.emplace_back("agent.init_seed", num(c.init_seed));
  p.emplace_back("agent.replay_seed", num(c.replay_seed));
  p.emplace_back("agent.training", c.training ? "true" : "false");
  p.emplace_back("agent.pretrain_steps", num(c.pretrain_steps));
  p.emplace_back("hyper.alpha", num(c.hp.alpha));
  p.emplace_back("hyper.beta", num(c.hp.beta));
  p.emplace_back("hyper.sigma", num(c.hp.sigma));
  p.emplace_back("hyper.c", num(c.hp.c));
  p.emplace_back("hyper.lambda", num(c.hp.lambda));
  p.emplace_back("hyper.momentum", num(c.hp.momentum));
  p.emplace_back("hyper.batch_size", num(c.hp.batch_size));
  p.emplace_back("hyper.lr_steps", join_as(c.hp.schedule, [&](const LearningRateStage& s) { return num(s.end_step); }));
  p.emplace_back("hyper.lr_rates", join_as(c.hp.schedule, [&](const LearningRateStage& s) { return num(s.rate); }));
  p.emplace_back("backtest.spans", join_as(c.spans, [](const Span& s) { return s.label(); }));
  p.emplace_back("backtest.seeds", join_as(c.seeds, [&](std::uint64_t s) { return num(s); }));
  p.emplace_back("backtest.bootstrap_assets", num(c.bootstrap_assets));
  return p;
}

std::vector<StrategySpec> strategy_specs(const RunConfig& config) {
  RunConfig resolved = config;
  resolved.checkpoint = resolve(config.base_dir, config.checkpoint);
  std::vector<StrategySpec> specs;
  for (const auto& name : config.strategies) specs.push_back({name, config_for(name, resolved)});
  return specs;
}

AssetPanel load_data(const RunConfig& config) {
  if (config.source == "file") return load_panel(resolve(config.base_dir, config.panel_path));
  GeneratorSpec spec = config.generator;
  if (spec.kind == GeneratorKind::Iid) spec.distribution = load_distribution(resolve(config.base_dir, config.distribution_path));
  return generate_panel(spec);
}

std::string sha256_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RuntimeFailure("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw RuntimeFailure("sha256 init failed");
  std::array<char, 1 << 16> buf{};
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0 && EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount())) != 1) {
      throw RuntimeFailure("sha256 update failed");
    }
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_DigestFinal_ex(ctx.get(), md.data(), &len) != 1) throw RuntimeFailure("sha256 final failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[md[i] >> 4]);
    hex.push_back(kHex[md[i] & 0xF]);
  }
  return hex;
}

fs::path write_manifest(const fs::path& dir, const std::vector<fs::path>& artifacts,
                        const std::vector<std::pair<std::string, std::string>>& params) {
  std::ostringstream out;
  out << "kind,name,value\n";
  for (const auto& a : artifacts) out << "artifact," << a.filename().generic_string() << ',' << sha256_file(a) << '\n';
  for (const auto& [key, value] : params) {
    // Values holding commas are quoted so the file stays three columns wide.
    const bool quote = value.find(',') != std::string::npos;
    out << "param," << key << ',' << (quote ? "\"" : "") << value << (quote ? "\"" : "") << '\n';
  }
  const fs::path path = dir / "manifest.csv";
  write_text(path, out.str());
  return path;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Robust log-optimal portfolio selection: data generation, backtests, agent training, oracle checks",
               "rlos"};
  app.require_subcommand(1);
  std::size_t workers = default_workers();
  app.add_option("--workers", workers, "Worker threads for compare cells and Monte Carlo trials")
      ->check(CLI::PositiveNumber);

  auto* gen = app.add_subcommand("generate", "Write a seeded synthetic panel as CSV");
  std::string gen_kind = "meanrevert";
  GeneratorSpec gspec;
  std::string gen_dist;
  std::string gen_out;
  gen->add_option("--kind", gen_kind, "const, iid, trend or meanrevert")->capture_default_str();
  gen->add_option("--assets", gspec.assets, "Asset count (ignored for iid)")->capture_default_str();
  gen->add_option("--periods", gspec.periods, "Period count")->capture_default_str();
  gen->add_option("--seed", gspec.seed, "Generator seed")->capture_default_str();
  gen->add_option("--distribution", gen_dist, "Distribution file for iid");
  gen->add_option("--drift", gspec.drift, "Per-period drift of asset 0 (trend)")->capture_default_str();
  gen->add_option("--noise", gspec.noise, "Log-normal noise scale")->capture_default_str();
  gen->add_option("--amplitude", gspec.amplitude, "Regime amplitude (meanrevert)")->capture_default_str();
  gen->add_option("--half-period", gspec.half_period, "Periods per regime (meanrevert)")->capture_default_str();
  gen->add_option("--out", gen_out, "Output CSV path")->required();

  std::string config_path;
  std::string out_flag;
  auto* bt = app.add_subcommand("backtest", "Compare strategies over spans and bootstrap seeds, emit a report");
  bt->add_option("--config", config_path, "Run configuration file");
  bt->add_option("--output", out_flag, "Output directory (overrides RLOS_OUTPUT_DIR and the config)");

  auto* tr = app.add_subcommand("train", "Train the rlosrl agent online over the first span");
  tr->add_option("--config", config_path, "Run configuration file");
  tr->add_option("--output", out_flag, "Output directory (overrides RLOS_OUTPUT_DIR and the config)");

  auto* orc = app.add_subcommand("oracle", "Run the randomized log-optimality checks and print a pass/fail table");
  OracleSuiteOptions oopt;
  orc->add_option("--trials", oopt.trials, "Instances per check")->capture_default_str()->check(CLI::PositiveNumber);
  orc->add_option("--seed", oopt.seed, "Suite seed")->capture_default_str();

  auto* rep = app.add_subcommand("report", "Re-emit summary and charts from an existing output directory");
  std::string rep_in;
  rep->add_option("--input", rep_in, "Directory holding summary.csv and curve files")->required();
  rep->add_option("--output", out_flag, "Destination (default: the input directory)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kValidation;
  }

  try {
    if (*gen) {
      gspec.kind = parse_generator_kind(gen_kind);
      if (gspec.kind == GeneratorKind::Iid) {
        if (gen_dist.empty()) throw ValidationError("generate: --distribution is required for --kind iid");
        gspec.distribution = load_distribution(gen_dist);
      }
      const AssetPanel panel = generate_panel(gspec);
      const fs::path path(gen_out);
      if (path.has_parent_path()) ensure_dir(path.parent_path());
      save_panel(panel, path);
      out << "wrote " << path.string() << " (" << panel.assets() << " assets, " << panel.periods() << " periods)\n";
      return kOk;
    }
    if (*orc) {
      oopt.workers = workers;
      const auto checks = run_oracle_suite(oopt);
      out << format_oracle_table(checks);
      const bool ok = std::all_of(checks.begin(), checks.end(), [](const OracleCheck& c) { return c.passed; });
      if (!ok) err << "error: oracle checks failed\n";
      return ok ? kOk : kRuntime;
    }
    if (*rep) {
      const Report report = load_report(rep_in);
      const fs::path dir = out_flag.empty() ? fs::path(rep_in) : fs::path(out_flag);
      const auto files = emit_report(report, dir);
      write_manifest(dir, files, {{"report.cells", std::to_string(report.cells.size())}});
      out << "wrote " << files.size() + 1 << " files to " << dir.string() << '\n';
      return kOk;
    }

    const RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    const fs::path dir = output_dir(cfg, out_flag);
    const AssetPanel panel = load_data(cfg);
    if (*bt) {
      CompareOptions copt;
      copt.bootstrap_assets = cfg.bootstrap_assets;
      copt.workers = workers;
      const Report report = compare(strategy_specs(cfg), panel, cfg.spans, cfg.seeds, copt);
      const auto files = emit_report(report, dir);
      write_manifest(dir, files, effective_parameters(cfg));
      out << "wrote " << files.size() + 1 << " files to " << dir.string() << '\n';
      return kOk;
    }
    // train
    if (cfg.spans.empty()) throw ValidationError("train: config lists no spans");
    RunConfig train_cfg = cfg;
    train_cfg.training = true;
    StrategySpec spec{"rlosrl", config_for("rlosrl", train_cfg)};
    if (!cfg.checkpoint.empty()) std::get<RlosRlSpec>(spec.config).checkpoint = resolve(cfg.base_dir, cfg.checkpoint);
    auto strategy = make_strategy(spec);
    const EquityCurve curve = run_backtest(*strategy, panel, cfg.spans.front());
    ensure_dir(dir);
    const fs::path ckpt = dir / "agent.ckpt";
    save_checkpoint(*agent_of(*strategy), ckpt);
    std::ostringstream log;
    log << "step,loss,lr\n";
    for (const auto& e : *training_log_of(*strategy)) {
      log << e.step << ',' << format_double(e.loss) << ',' << format_double(e.rate) << '\n';
    }
    const fs::path log_path = dir / "training.csv";
    write_text(log_path, log.str());
    write_manifest(dir, {ckpt, log_path}, effective_parameters(cfg));
    out << "trained " << training_log_of(*strategy)->size() << " steps over " << cfg.spans.front().label()
        << ", final wealth " << format_double(curve.wealth(curve.wealth.size() - 1)) << "; wrote " << dir.string()
        << '\n';
    return kOk;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return kRuntime;
  }
}

}  // namespace rlos::cli
