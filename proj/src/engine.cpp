#include "specqc/engine.hpp"

#include "specqc/generators.hpp"
#include "specqc/printer.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

namespace specqc {

std::string_view status_word(Status s) {
  switch (s) {
    case Status::Provable: return "provable";
    case Status::Failed: return "failed";
    case Status::Maybe: return "maybe";
    case Status::Timeout: return "timeout";
    case Status::Unchecked: return "unchecked";
  }
  return "maybe";
}

std::optional<Status> parse_status(std::string_view word) {
  for (Status s : {Status::Provable, Status::Failed, Status::Maybe, Status::Timeout, Status::Unchecked}) {
    if (status_word(s) == word) return s;
  }
  return std::nullopt;
}

std::vector<TypeAssignment> assign_type_params(const ProofObligation& po, const SpecModule& m) {
  std::vector<TypeAssignment> out{{}};
  for (const auto& param : po.type_params) {
    std::vector<TypePtr> candidates;
    for (const auto& a : m.annotations) {
      if (a.function_name == po.owner && a.param_name == param) candidates = a.candidate_types;
    }
    if (candidates.empty()) candidates.push_back(types::real());
    std::vector<TypeAssignment> next;
    for (const auto& partial : out) {
      for (const auto& t : candidates) {
        TypeAssignment a = partial;
        a.emplace_back(param, t);
        next.push_back(std::move(a));
      }
    }
    out = std::move(next);
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

TypeParamMap to_map(const TypeAssignment& a) { return TypeParamMap(a.begin(), a.end()); }

bool quantified(const Expr& e) {
  return e.kind == ExprKind::Forall || e.kind == ExprKind::Exists || e.kind == ExprKind::Exists1;
}

struct Attempt {
  Status status = Status::Maybe;
  std::string reason;
  std::optional<Binding> counterexample;
  std::optional<Binding> witness;
  std::string message;
  bool cancelled = false;  // stopped by the caller's token, not the deadline
};

/// Checks the obligation under one type-parameter assignment.
Attempt attempt(const ProofObligation& po, const TypeAssignment& assignment, const RunSettings& settings,
                const ModuleEnv& env, const CancelToken& cancel, Clock::time_point deadline,
                std::vector<std::string>& diagnostics) {
  Attempt out;
  Context ctx(env, cancel, deadline, settings.limits);
  const TypeParamMap params = to_map(assignment);
  ctx.set_type_params(params);

  std::vector<Bind> binds;
  std::set<std::string> keys;
  for (const auto& b : collect_type_binds(*po.expr)) {
    Bind s = make_type_bind(b.pattern, substitute(b.type, params));
    if (keys.insert(s.key).second) binds.push_back(std::move(s));
  }

  std::vector<StrategyResult> results;
  for (const Strategy* s : settings.strategies.active()) {
    try {
      results.push_back(s->run(StrategyRequest{po, binds, ctx}));
    } catch (const std::exception& e) {
      diagnostics.push_back(s->name() + ": " + e.what());
      results.emplace_back();
    }
    for (const auto& d : results.back().diagnostics) diagnostics.push_back(d);
  }

  // A disproof is only believed once the counterexample re-falsifies.
  for (const auto& r : results) {
    if (!r.verdict || r.verdict->kind != Verdict::Kind::Disproved) continue;
    BindOverrides single;
    for (const auto& b : binds) {
      for (const auto& [name, v] : r.verdict->binding) {
        if (b.pattern.kind == PatternKind::Identifier && b.pattern.name == name) single[b.key] = {{v}, false};
      }
    }
    QuantifierReport check = evaluate_quantified(*po.expr, single, ctx);
    if (check.failing) {
      out.status = Status::Failed;
      out.counterexample = r.verdict->binding;
      return out;
    }
    diagnostics.push_back("Disproof not confirmed by evaluation: " + render_binding(r.verdict->binding));
  }
  for (const auto& r : results) {
    if (r.verdict && r.verdict->kind == Verdict::Kind::Proved) {
      out.status = Status::Provable;
      out.reason = r.verdict->reason;
      return out;
    }
  }

  BindOverrides overrides;
  bool has_all = true;
  for (const auto& b : binds) {
    BindValues merged;
    std::set<Value> seen;
    bool complete = false;
    for (const auto& r : results) {
      auto it = r.bindings.find(b.key);
      if (it == r.bindings.end()) continue;
      complete = complete || r.has_all_values;
      for (const auto& v : it->second) {
        if (seen.insert(v).second) merged.values.push_back(v);
      }
    }
    if (merged.values.empty()) {
      merged.values = fixed_values(b.type, kDefaultFixedSize, ctx);
      seen.insert(merged.values.begin(), merged.values.end());
    }
    if (!complete) {
      const Cardinality c = cardinality(b.type, env.module(), params);
      complete = c.finite && c.count <= seen.size();
    }
    merged.all_values = complete;
    has_all = has_all && complete;
    overrides[b.key] = std::move(merged);
  }

  if (Clock::now() > deadline) {
    out.status = Status::Timeout;
    return out;
  }

  QuantifierReport report = evaluate_quantified(*po.expr, overrides, ctx);
  const auto& result = report.result;
  if (result.is_cancelled()) {
    out.cancelled = cancel.cancelled();
    out.status = Status::Timeout;
    return out;
  }
  const bool decided = has_all && report.exhausted && !report.uncertain;

  if (po.polarity == Polarity::Existential) {
    if (result.is_ok() && result.value().is(Value::Kind::Bool) && result.value().as_bool() && report.witness) {
      out.status = Status::Provable;
      out.witness = report.witness;
      out.reason = "witness " + render_binding(sorted_binding(*report.witness));
    } else if (result.is_ok() && decided) {
      out.status = Status::Failed;
      out.counterexample = Binding{};
      out.message = "No witness exists for the existential obligation";
    } else if (result.is_error() && !result.error().uncertain() && !quantified(*po.expr)) {
      out.status = Status::Failed;
      out.counterexample = Binding{};
      out.message = result.error().format();
    }
    return out;
  }

  if (result.is_error()) {
    if (result.error().uncertain()) return out;
    out.status = Status::Failed;
    out.counterexample = report.failing ? *report.failing : Binding{};
    out.message = result.error().format();
    return out;
  }
  if (!result.value().is(Value::Kind::Bool)) return out;
  if (!result.value().as_bool()) {
    out.status = Status::Failed;
    out.counterexample = report.failing ? *report.failing : Binding{};
    return out;
  }
  if (decided) {
    out.status = Status::Provable;
    out.reason = "finite types";
  }
  return out;
}

}  // namespace

CheckedResult check_po(const ProofObligation& po, const RunSettings& settings, const ModuleEnv& env,
                       const CancelToken& cancel) {
  const auto start = Clock::now();
  CheckedResult out;
  out.po_number = po.number;
  if (!po.executable) {
    out.status = Status::Unchecked;
    return out;
  }
  const auto deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(settings.timeout));

  bool all_provable = true;
  bool timed_out = false;
  std::string reason;
  for (const auto& assignment : assign_type_params(po, env.module())) {
    Attempt a;
    try {
      a = attempt(po, assignment, settings, env, cancel, deadline, out.diagnostics);
    } catch (const std::exception& e) {
      a.status = Status::Maybe;
      a.message = std::string("Internal error: ") + e.what();
    }
    if (a.cancelled) break;
    if (a.status == Status::Failed) {
      out.status = Status::Failed;
      out.counterexample = std::move(a.counterexample);
      out.type_assignment = assignment;
      out.message = std::move(a.message);
      out.elapsed = seconds_since(start);
      return out;
    }
    if (a.status == Status::Timeout) timed_out = true;
    if (a.status == Status::Provable) {
      if (reason.empty()) reason = a.reason;
      if (a.witness && !out.witness) {
        out.witness = std::move(a.witness);
        out.type_assignment = assignment;
      }
    } else {
      all_provable = false;
    }
    if (!a.message.empty() && out.message.empty()) out.message = std::move(a.message);
    if (timed_out) break;
  }
  out.elapsed = seconds_since(start);
  if (timed_out) {
    out.status = Status::Timeout;
  } else if (all_provable) {
    out.status = Status::Provable;
    out.reason = reason;
  } else {
    out.status = Status::Maybe;
    out.witness.reset();
  }
  return out;
}

std::vector<std::optional<CheckedResult>> run_batch_serial(const std::vector<ProofObligation>& pos,
                                                           const RunSettings& settings, const ModuleEnv& env,
                                                           const ProgressSink& sink, const CancelToken& cancel) {
  std::vector<std::optional<CheckedResult>> out(pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (cancel.cancelled()) break;
    CheckedResult r = check_po(pos[i], settings, env, cancel);
    if (cancel.cancelled()) break;
    out[i] = std::move(r);
    if (sink) sink(*out[i]);
  }
  return out;
}

std::vector<std::optional<CheckedResult>> run_batch_parallel(const std::vector<ProofObligation>& pos,
                                                             const RunSettings& settings, const ModuleEnv& env,
                                                             const ProgressSink& sink, const CancelToken& cancel) {
  std::vector<std::optional<CheckedResult>> out(pos.size());
  const auto n = static_cast<std::int64_t>(pos.size());
  const int workers = std::max(1, settings.workers);
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
  for (std::int64_t i = 0; i < n; ++i) {
    if (cancel.cancelled()) continue;
    CheckedResult r = check_po(pos[static_cast<std::size_t>(i)], settings, env, cancel);
    if (cancel.cancelled()) continue;
    out[static_cast<std::size_t>(i)] = std::move(r);
    if (sink) {
#pragma omp critical(specqc_progress)
      sink(*out[static_cast<std::size_t>(i)]);
    }
  }
  return out;
}

std::vector<std::optional<CheckedResult>> run_batch(const std::vector<ProofObligation>& pos, RunSettings& settings,
                                                    const ModuleEnv& env, const ProgressSink& sink,
                                                    const CancelToken& cancel, std::vector<std::string>* diagnostics) {
  std::vector<std::string> local;
  std::vector<std::string>& diags = diagnostics ? *diagnostics : local;
  for (Strategy* s : settings.strategies.active()) s->prepare(StrategyPrepare{env, pos, diags});
  if (settings.workers > 1) return run_batch_parallel(pos, settings, env, sink, cancel);
  return run_batch_serial(pos, settings, env, sink, cancel);
}

std::string format_elapsed(double seconds) {
  const auto ms = static_cast<long long>(std::llround(std::max(0.0, seconds) * 1000));
  std::string frac = std::to_string(1000 + ms % 1000).substr(1);
  while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
  return std::to_string(ms / 1000) + "." + frac;
}

namespace {

std::string render_assignment(const TypeAssignment& a) {
  std::string s;
  for (const auto& [name, t] : a) {
    if (!s.empty()) s += ", ";
    s += name + " = " + render_type(t, TypeStyle::Resolved);
  }
  return s;
}

}  // namespace

std::string render_result(const CheckedResult& r, const ProofObligation& po) {
  const std::string head = "PO #" + std::to_string(r.po_number) + ", ";
  const std::string in = " in " + format_elapsed(r.elapsed) + "s";
  switch (r.status) {
    case Status::Provable: return head + "PROVABLE by " + r.reason + in;
    case Status::Maybe: return head + "MAYBE" + in;
    case Status::Timeout: return head + "TIMEOUT" + in;
    case Status::Unchecked: return head + "UNCHECKED";
    case Status::Failed: break;
  }
  std::string detail;
  if (r.counterexample && !r.counterexample->empty()) {
    detail = "Counterexample: " + render_binding(sorted_binding(*r.counterexample));
    if (!r.type_assignment.empty()) detail += ",\n  " + render_assignment(r.type_assignment);
  } else if (!r.type_assignment.empty()) {
    detail = "Counterexample: " + render_assignment(r.type_assignment);
  } else {
    detail = r.message.empty() ? "Obligation is false" : r.message.substr(0, r.message.find('\n'));
  }
  return head + "FAILED" + in + ": " + detail + "\n----\n" + render_po_body(po) + "\n";
}

Rerun rerun_counterexample(const ProofObligation& po, const std::optional<CheckedResult>& result,
                           const ModuleEnv& env) {
  Rerun out;
  const Binding* binding = nullptr;
  if (result && result->counterexample && !result->counterexample->empty()) binding = &*result->counterexample;
  if (!binding && result && result->witness) binding = &*result->witness;
  if (!binding) {
    out.message = "Obligation does not have a counterexample/witness. Run qc?";
    return out;
  }
  const FunctionDef* f = po.function;
  if (!f) {
    out.message = "Obligation " + std::to_string(po.number) + " is not inside a function";
    return out;
  }
  std::vector<Value> args;
  for (const auto& p : f->param_patterns) {
    const auto it = std::find_if(binding->begin(), binding->end(),
                                 [&](const auto& kv) { return p.kind == PatternKind::Identifier && kv.first == p.name; });
    if (it == binding->end()) {
      out.message = "Cannot match the counterexample to the parameters of " + f->name;
      return out;
    }
    args.push_back(it->second);
  }
  std::vector<TypePtr> type_args;
  std::string targs;
  for (const auto& [name, t] : result->type_assignment) {
    type_args.push_back(t);
    targs += (targs.empty() ? "" : ", ") + render_type(t);
  }
  out.call = f->name + (targs.empty() ? "" : "[" + targs + "]") + "(";
  for (std::size_t i = 0; i < args.size(); ++i) out.call += (i ? ", " : "") + args[i].to_string();
  out.call += ")";
  out.runnable = true;
  Context ctx(env);
  ctx.set_type_params(to_map(result->type_assignment));
  out.outcome = call_function(*f, args, type_args, ctx);
  return out;
}

}  // namespace specqc
