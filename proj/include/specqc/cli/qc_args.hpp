#pragma once

// The qc command line:
//   [-?|-help][-q|-v][-t <secs>][-i <status>]* [-s <strategy>]*
//   [-<strategy>:<option> <value>]* [<PO numbers/ranges/patterns>]

#include "specqc/engine.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace specqc::cli {

enum class Verbosity { Quiet, Normal, Verbose };

struct StrategyOptionArg {
  std::string strategy;
  std::string key;
  std::string value;
};

struct Selection {
  std::vector<std::pair<int, int>> ranges;  // inclusive; single numbers are n..n
  std::vector<std::string> patterns;        // globs over owner or module names

  bool empty() const { return ranges.empty() && patterns.empty(); }
};

struct QcCommandLine {
  bool help = false;
  Verbosity verbosity = Verbosity::Normal;
  std::optional<double> timeout;
  std::vector<Status> status_filters;
  std::vector<std::string> strategy_enables;
  std::vector<StrategyOptionArg> strategy_options;
  Selection selection;
};

struct UsageError {
  std::string message;
};

/// `known` supplies the valid strategy names.
std::variant<QcCommandLine, UsageError> parse_qc_args(const std::vector<std::string>& tokens,
                                                      const StrategySet& known);

/// Whitespace-separated words.
std::vector<std::string> split_words(const std::string& line);

/// The usage block followed by the strategy listing of `strategies`.
std::string usage_text(const StrategySet& strategies);

/// Layers the command line over `settings`. Returns the first rejected
/// strategy option.
std::optional<std::string> apply_qc_args(const QcCommandLine& args, RunSettings& settings);

/// Obligations chosen by `sel`, in number order; all of them when empty.
std::vector<ProofObligation> select_pos(const std::vector<ProofObligation>& pos, const Selection& sel,
                                        const std::string& module_name);

/// True when the result passes the `-i` filters (no filters passes all).
bool status_shown(const QcCommandLine& args, Status s);

}  // namespace specqc::cli
