#pragma once

#include "rlos/backtest.hpp"
#include "rlos/rl_agent.hpp"
#include "rlos/synthetic.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace rlos::cli {

enum ExitCode : int { kOk = 0, kValidation = 1, kRuntime = 2 };

/// Mean-reverting market of 8 assets over 300 periods, seed 7.
inline GeneratorSpec default_generator() {
  GeneratorSpec g;
  g.kind = GeneratorKind::MeanRevert;
  g.assets = 8;
  g.periods = 300;
  g.seed = 7;
  return g;
}

/// Everything a backtest or training run needs. Defaults are the reference
/// experimental constants; see README for the file grammar.
struct RunConfig {
  std::filesystem::path base_dir;  // relative paths below resolve against this

  // [data]
  std::string source = "generator";  // "generator" or "file"
  std::filesystem::path panel_path;
  GeneratorSpec generator = default_generator();
  std::filesystem::path distribution_path;  // iid generator only

  // [strategies]
  std::vector<std::string> strategies{"naive_average", "follow_winner", "follow_loser", "rlos", "rlosrl"};

  // [rlos]
  RlosParameters rlos;

  // [agent]
  AgentArchitecture arch;
  std::filesystem::path checkpoint;  // empty: fresh initialization
  std::uint64_t init_seed = 1;
  std::uint64_t replay_seed = 2;
  bool training = true;
  Index pretrain_steps = 0;

  // [hyper]
  Hyperparameters hp;

  // [backtest]
  std::vector<Span> spans{{30, 230}};
  std::vector<std::uint64_t> seeds{1};
  Index bootstrap_assets = 4;

  // [output]
  std::filesystem::path output_dir = "rlos_out";
};

/// Parses the sectioned key = value format. Relative paths resolve against
/// the config file's directory; unknown sections or keys are rejected.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir);

/// Effective parameters as (section.key, value) pairs in a fixed order.
std::vector<std::pair<std::string, std::string>> effective_parameters(const RunConfig& config);

std::vector<StrategySpec> strategy_specs(const RunConfig& config);

/// Panel named by the [data] section.
AssetPanel load_data(const RunConfig& config);

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Writes manifest.csv (kind,name,value): one artifact row per file with its
/// digest, then one param row per effective parameter.
std::filesystem::path write_manifest(const std::filesystem::path& dir, const std::vector<std::filesystem::path>& artifacts,
                                     const std::vector<std::pair<std::string, std::string>>& params);

/// Entry point of the rlos executable. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace rlos::cli
