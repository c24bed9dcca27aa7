#pragma once

// Tree-walking evaluator for checked expressions.
//
// Proof-obligation evaluation is instrumented: type binds in the obligation
// expression draw their values from BindOverrides instead of the (usually
// infinite) type, and the outermost quantifier chain reports which binding
// falsified or witnessed it.

#include "specqc/ast.hpp"

#include <atomic>
#include <chrono>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace specqc {

namespace errc {
inline constexpr int kNotNat1 = 4064;          // seq index not nat1 or out of range
inline constexpr int kMapKey = 4061;           // map apply outside the domain
inline constexpr int kDivByZero = 4134;
inline constexpr int kHdEmpty = 4010;
inline constexpr int kTlEmpty = 4011;
inline constexpr int kCasesNoMatch = 4004;
inline constexpr int kPreFailed = 4055;
inline constexpr int kPostFailed = 4056;
inline constexpr int kNotOfType = 4060;
inline constexpr int kInvariant = 4079;
inline constexpr int kLetBeNoValue = 4020;
inline constexpr int kWrongOperand = 4100;
inline constexpr int kMapConflict = 4130;
inline constexpr int kPatternFail = 4006;
// The following do not say anything about the obligation itself: the
// evaluation could not be carried out.
inline constexpr int kInfiniteBind = 4012;
inline constexpr int kNoState = 4013;
inline constexpr int kRecursion = 4015;
inline constexpr int kTooLarge = 4016;
}  // namespace errc

struct RuntimeError {
  int code = 0;
  std::string message;
  Location location;

  /// Errors that mean "could not evaluate" rather than "evaluated to an error".
  bool uncertain() const;

  /// `Error <code>: <message> in <file> at line <l>:<c>` and the source line.
  std::string format() const;
};

class EvalOutcome {
 public:
  enum class Kind { Ok, Error, Cancelled };

  static EvalOutcome ok(Value v) { return EvalOutcome(Kind::Ok, std::move(v), {}); }
  static EvalOutcome failure(RuntimeError e) { return EvalOutcome(Kind::Error, {}, std::move(e)); }
  static EvalOutcome cancelled() { return EvalOutcome(Kind::Cancelled, {}, {}); }

  Kind kind() const { return kind_; }
  bool is_ok() const { return kind_ == Kind::Ok; }
  bool is_error() const { return kind_ == Kind::Error; }
  bool is_cancelled() const { return kind_ == Kind::Cancelled; }
  const Value& value() const { return value_; }
  const RuntimeError& error() const { return *error_; }

 private:
  EvalOutcome(Kind k, Value v, std::optional<RuntimeError> e) : kind_(k), value_(std::move(v)), error_(std::move(e)) {}

  Kind kind_;
  Value value_;
  std::optional<RuntimeError> error_;
};

/// Shared cancellation flag, settable from any thread.
class CancelToken {
 public:
  CancelToken() : flag_(std::make_shared<std::atomic<bool>>(false)) {}
  void cancel() const { flag_->store(true, std::memory_order_relaxed); }
  bool cancelled() const { return flag_->load(std::memory_order_relaxed); }
  void reset() const { flag_->store(false, std::memory_order_relaxed); }

 private:
  std::shared_ptr<std::atomic<bool>> flag_;
};

/// Immutable evaluation environment for a checked module: definition lookup
/// tables and the values of module-level constants.
class ModuleEnv {
 public:
  explicit ModuleEnv(const SpecModule& m);

  const SpecModule& module() const { return module_; }
  const FunctionDef* function(const std::string& name) const;
  const TypeDef* type(const std::string& name) const;
  /// Null when the value failed to evaluate (see diagnostics()).
  const Value* value(const std::string& name) const;
  const std::vector<RuntimeError>& diagnostics() const { return diagnostics_; }

 private:
  friend class Context;

  const SpecModule& module_;
  std::unordered_map<std::string, const FunctionDef*> functions_;
  std::unordered_map<std::string, const TypeDef*> types_;
  std::unordered_map<std::string, Value> values_;
  std::vector<RuntimeError> diagnostics_;
};

struct EvalLimits {
  std::size_t step_budget = 10'000'000;
  std::size_t product_cap = 1'000'000;
  int max_call_depth = 200;
};

/// Values supplied for type binds, keyed by the rendered `<pattern>:<type>`.
struct BindValues {
  std::vector<Value> values;
  bool all_values = false;  // the list is every value of the type
};
using BindOverrides = std::map<std::string, BindValues>;

/// Per-evaluation state. Never shared between concurrent evaluations.
class Context {
 public:
  using Clock = std::chrono::steady_clock;

  explicit Context(const ModuleEnv& env, CancelToken token = {},
                   std::optional<Clock::time_point> deadline = std::nullopt, EvalLimits limits = {});

  const ModuleEnv& env() const { return env_; }
  const SpecModule& module() const { return env_.module(); }
  const EvalLimits& limits() const { return limits_; }

  /// Type-parameter assignment in force for the obligation being evaluated.
  void set_type_params(TypeParamMap params);
  const TypeParamMap& type_params() const;
  void set_overrides(const BindOverrides* overrides) { overrides_ = overrides; }

  /// True once the step budget ran out (as opposed to a cancel or deadline).
  bool budget_exhausted() const { return budget_exhausted_; }
  std::size_t steps() const { return steps_; }

  /// Evaluation hooks used by the public operations; the Evaluator is the
  /// only writer.
  struct Frame {
    std::string name;
    Value value;
  };

 private:
  friend class Evaluator;

  const ModuleEnv& env_;
  CancelToken token_;
  std::optional<Clock::time_point> deadline_;
  EvalLimits limits_;
  const BindOverrides* overrides_ = nullptr;
  std::vector<Frame> frames_;
  std::vector<std::size_t> barriers_{0};
  std::vector<TypeParamMap> type_params_{TypeParamMap{}};
  int call_depth_ = 0;
  std::size_t steps_ = 0;
  bool budget_exhausted_ = false;
  bool approximate_ = false;
};

EvalOutcome evaluate(const Expr& e, Context& ctx);
inline EvalOutcome evaluate(const ExprPtr& e, Context& ctx) { return evaluate(*e, ctx); }

/// Evaluates with extra local bindings in scope.
EvalOutcome evaluate_with(const Expr& e, const Binding& locals, Context& ctx);

struct QuantifierReport {
  EvalOutcome result = EvalOutcome::ok(Value::boolean(true));
  std::optional<Binding> failing;
  std::optional<Binding> witness;
  bool exhausted = false;
  /// Some combination could not be decided (an inner quantifier ran over an
  /// incomplete value list, or evaluation hit a "could not evaluate" error).
  bool uncertain = false;
  std::size_t combinations = 0;
};

/// Evaluates an obligation: the outermost forall/exists chain iterates the
/// Cartesian product of override lists, leftmost bind varying slowest.
QuantifierReport evaluate_quantified(const Expr& e, const BindOverrides& overrides, Context& ctx);

/// Bindings for a pattern match, or nullopt for no match.
std::optional<Binding> match_pattern(const Pattern& p, const Value& v, Context& ctx);

EvalOutcome call_function(const FunctionDef& f, const std::vector<Value>& args,
                          const std::vector<TypePtr>& type_args, Context& ctx);

/// Membership including numeric ranges and invariants of named types.
bool type_membership(const Value& v, const TypePtr& t, Context& ctx);

/// The type binds of an obligation's outermost quantifier chain, plus any
/// other type binds in the expression (outside called functions).
std::vector<Bind> collect_type_binds(const Expr& e);

/// `<pattern>:<type>` with type parameters replaced.
std::string override_key(const Bind& b, const TypeParamMap& params);

}  // namespace specqc
