#pragma once

// Checking obligations: run strategies, merge their bindings, evaluate the
// instrumented obligation and turn the outcome into a status.

#include "specqc/strategy.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace specqc {

enum class Status { Provable, Failed, Maybe, Timeout, Unchecked };

/// Lowercase status word, as accepted by `-i`.
std::string_view status_word(Status s);
std::optional<Status> parse_status(std::string_view word);

using TypeAssignment = std::vector<std::pair<std::string, TypePtr>>;

struct CheckedResult {
  int po_number = 0;
  Status status = Status::Maybe;
  std::string reason;  // PROVABLE: "trivial ...", "finite types", "witness ..."
  double elapsed = 0;  // seconds
  std::optional<Binding> counterexample;
  std::optional<Binding> witness;
  /// Type-parameter assignment under which the counterexample was found.
  TypeAssignment type_assignment;
  std::string message;  // runtime error or explanation
  std::vector<std::string> diagnostics;
};

struct RunSettings {
  double timeout = 1.0;  // seconds per obligation
  StrategySet strategies = StrategySet::defaults();
  /// 0 or 1: check obligations one at a time.
  int workers = 1;
  EvalLimits limits;
};

/// One assignment per combination of candidate types: annotated parameters
/// take their listed types, the rest `real`. No parameters gives one empty
/// assignment.
std::vector<TypeAssignment> assign_type_params(const ProofObligation& po, const SpecModule& m);

/// The strategies must already be prepared for this run.
CheckedResult check_po(const ProofObligation& po, const RunSettings& settings, const ModuleEnv& env,
                       const CancelToken& cancel = {});

using ProgressSink = std::function<void(const CheckedResult&)>;

/// Prepares the strategies, then checks every obligation. Results come back in
/// input order; an entry is empty when cancellation stopped it first. The
/// sink may be called from several threads, but never concurrently.
std::vector<std::optional<CheckedResult>> run_batch(const std::vector<ProofObligation>& pos, RunSettings& settings,
                                                    const ModuleEnv& env, const ProgressSink& sink = {},
                                                    const CancelToken& cancel = {},
                                                    std::vector<std::string>* diagnostics = nullptr);

/// Reference implementation: strictly one obligation after another.
std::vector<std::optional<CheckedResult>> run_batch_serial(const std::vector<ProofObligation>& pos,
                                                           const RunSettings& settings, const ModuleEnv& env,
                                                           const ProgressSink& sink, const CancelToken& cancel);

/// OpenMP implementation over obligations with `settings.workers` threads.
std::vector<std::optional<CheckedResult>> run_batch_parallel(const std::vector<ProofObligation>& pos,
                                                             const RunSettings& settings, const ModuleEnv& env,
                                                             const ProgressSink& sink, const CancelToken& cancel);

/// `0.013`, `0.0`, `6.232`: millisecond resolution, trailing zeros dropped.
std::string format_elapsed(double seconds);

/// The result line(s): `PO #1, FAILED in 0.013s: Counterexample: ...` and for
/// FAILED the `----` separator and rendered obligation.
std::string render_result(const CheckedResult& r, const ProofObligation& po);

struct Rerun {
  bool runnable = false;
  std::string message;  // when not runnable
  std::string call;     // `f([], 0)`
  std::optional<EvalOutcome> outcome;
};

/// Calls the obligation's function with arguments taken from the stored
/// counterexample or witness.
Rerun rerun_counterexample(const ProofObligation& po, const std::optional<CheckedResult>& result,
                           const ModuleEnv& env);

}  // namespace specqc
