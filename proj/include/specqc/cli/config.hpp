#pragma once

// quickcheck.json: tool-wide settings and per-strategy configuration.

#include "specqc/engine.hpp"

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace specqc::cli {

struct StrategyConfig {
  std::string name;
  std::optional<bool> enabled;
  /// Everything other than "name" and "enabled", stringified.
  StrategyOptions options;
};

struct ToolConfig {
  double timeout = 1.0;
  int workers = 1;
  std::vector<StrategyConfig> strategies;
  /// File the configuration came from; empty for built-in defaults.
  std::string source;
  std::vector<std::string> warnings;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// `<root>/.vscode/quickcheck.json`, else `<root>/quickcheck.json`, else
/// defaults. Throws ConfigError for unreadable or malformed files.
ToolConfig load_config(const std::filesystem::path& root);

ToolConfig load_config_file(const std::filesystem::path& file);

/// `origin` names the text in error messages.
ToolConfig parse_config(const std::string& text, const std::string& origin);

/// Applies the configuration over `settings`. Unknown strategies and rejected
/// options become warnings.
void apply_config(const ToolConfig& config, RunSettings& settings, std::vector<std::string>& warnings);

/// Timeout, workers and strategy listing with options, one item per line.
std::string describe_settings(const RunSettings& settings);

}  // namespace specqc::cli
