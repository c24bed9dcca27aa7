#pragma once

// Strategy interface: given an obligation and its type binds, a strategy
// proposes values for the binds, may claim those values are exhaustive, and
// may decide the obligation outright.

#include "specqc/interpreter.hpp"
#include "specqc/pog.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace specqc {

struct Verdict {
  enum class Kind { Proved, Disproved };
  Kind kind = Kind::Proved;
  std::string reason;  // Proved: "trivial ...", "direct (...)"
  Binding binding;     // Disproved: the counterexample
};

struct StrategyResult {
  /// Values per bind key (`<pattern>:<type>`).
  std::map<std::string, std::vector<Value>> bindings;
  /// Every bind of the request received every value of its type.
  bool has_all_values = false;
  std::optional<Verdict> verdict;
  std::vector<std::string> diagnostics;
};

struct StrategyRequest {
  const ProofObligation& po;
  /// Type binds in quantifier order, type parameters already substituted.
  const std::vector<Bind>& binds;
  Context& ctx;
};

/// Per-run setup: the module being checked and the obligations selected.
struct StrategyPrepare {
  const ModuleEnv& env;
  const std::vector<ProofObligation>& pos;
  std::vector<std::string>& diagnostics;
};

using StrategyOptions = std::map<std::string, std::string>;

class Strategy {
 public:
  virtual ~Strategy() = default;

  virtual std::string name() const = 0;
  /// Option synopsis for the usage text, e.g. `[-finite:size <size>]`.
  virtual std::string synopsis() const { return "(no options)"; }
  virtual bool enabled_by_default() const { return true; }
  virtual std::unique_ptr<Strategy> clone() const = 0;

  /// Sets one option. Returns an error message for unknown keys or bad values.
  virtual std::optional<std::string> set_option(const std::string& key, const std::string& value);
  const StrategyOptions& options() const { return options_; }

  /// Called once per qc run, before any obligation is checked.
  virtual void prepare(const StrategyPrepare&) {}

  /// Must be safe to call concurrently for different obligations.
  virtual StrategyResult run(const StrategyRequest& req) const = 0;

 protected:
  StrategyOptions options_;
};

std::unique_ptr<Strategy> make_fixed_strategy();
std::unique_ptr<Strategy> make_random_strategy();
std::unique_ptr<Strategy> make_trivial_strategy();
std::unique_ptr<Strategy> make_finite_strategy();
std::unique_ptr<Strategy> make_search_strategy();
std::unique_ptr<Strategy> make_direct_strategy();

/// The registered strategies with their enabled flags.
class StrategySet {
 public:
  /// Built-ins in listing order, random disabled.
  static StrategySet defaults();

  StrategySet() = default;
  StrategySet(const StrategySet& other);
  StrategySet& operator=(const StrategySet& other);
  StrategySet(StrategySet&&) = default;
  StrategySet& operator=(StrategySet&&) = default;

  void add(std::unique_ptr<Strategy> s, bool enabled);
  Strategy* find(const std::string& name);
  const Strategy* find(const std::string& name) const;
  bool enable(const std::string& name, bool on = true);
  bool enabled(const std::string& name) const;
  std::vector<std::string> names() const;

  /// Strategies to run, in registration order.
  std::vector<Strategy*> active() const;

  /// `Enabled strategies:` / `Disabled strategies (add with -s <name>):` blocks.
  std::string listing() const;

 private:
  struct Entry {
    std::unique_ptr<Strategy> strategy;
    bool enabled = true;
  };
  std::vector<Entry> entries_;
};

inline constexpr std::size_t kDefaultFixedSize = 100;
inline constexpr std::size_t kDefaultRandomSize = 100;
inline constexpr std::size_t kDefaultFiniteSize = 1000;

/// Writes a bind-file template with one commented line per distinct type bind
/// across `pos`. Writes to a temporary file first; nothing is left on failure.
/// Returns an error message on failure.
std::optional<std::string> fixed_create(const std::vector<ProofObligation>& pos, const std::string& path);

/// Distinct type binds across obligations, in first-seen order, keyed by the
/// rendered `<pattern>:<type>`.
std::vector<Bind> distinct_binds(const std::vector<ProofObligation>& pos);

}  // namespace specqc
