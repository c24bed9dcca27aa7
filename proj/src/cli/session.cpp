#include "specqc/cli/session.hpp"

#include "specqc/checker.hpp"
#include "specqc/cli/config.hpp"
#include "specqc/parser.hpp"
#include "specqc/printer.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

namespace specqc::cli {

Session::Session(std::ostream& out, RunSettings settings, CancelToken interrupt)
    : out_(out), settings_(std::move(settings)), interrupt_(std::move(interrupt)) {}

Session::~Session() = default;

bool Session::load(const std::vector<std::string>& files) {
  env_.reset();
  module_.reset();
  pos_.clear();
  results_.clear();
  std::vector<SourceText> sources;
  for (const auto& f : files) {
    std::ifstream in(f);
    if (!in) {
      out_ << "Cannot read " << f << "\n";
      return false;
    }
    std::stringstream ss;
    ss << in.rdbuf();
    sources.push_back(SourceText{f, ss.str()});
  }
  ParseResult parsed = parse_specifications(sources);
  for (const auto& w : parsed.warnings) out_ << format_diagnostic(w) << "\n";
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors) out_ << format_diagnostic(e) << "\n";
    out_ << "Syntax errors in specification\n";
    return false;
  }
  auto module = std::make_unique<SpecModule>(std::move(parsed.module));
  CheckResult checked = check_module(*module);
  for (const auto& w : checked.warnings) out_ << format_diagnostic(w) << "\n";
  if (!checked.ok()) {
    for (const auto& e : checked.errors) out_ << format_diagnostic(e) << "\n";
    out_ << "Type errors in specification\n";
    return false;
  }
  module_ = std::move(module);
  env_ = std::make_unique<ModuleEnv>(*module_);
  for (const auto& d : env_->diagnostics()) out_ << d.format() << "\n";
  pos_ = generate_pos(*module_);
  default_module_ = module_->name;
  return true;
}

bool Session::execute(const std::string& line) {
  const auto words = split_words(line);
  if (words.empty()) return true;
  const std::string& cmd = words[0];
  const std::vector<std::string> rest(words.begin() + 1, words.end());
  const std::string tail = line.substr(std::min(line.size(), line.find(cmd) + cmd.size()));

  if (cmd == "quit" || cmd == "q" || cmd == "exit") return false;
  if (cmd == "help" || cmd == "?") {
    help();
  } else if (cmd == "pog") {
    pog();
  } else if (cmd == "qc" || cmd == "quickcheck") {
    qc(rest);
  } else if (cmd == "qr" || cmd == "qcrun") {
    qr(rest.empty() ? "" : rest[0]);
  } else if (cmd == "print" || cmd == "p") {
    print(tail);
  } else if (cmd == "default") {
    set_default(rest.empty() ? "" : rest[0]);
  } else {
    out_ << "Unknown command '" << cmd << "'. Type help for a list of commands.\n";
  }
  return true;
}

void Session::repl(std::istream& in) {
  for (;;) {
    out_ << "> " << std::flush;
    std::string line;
    if (!std::getline(in, line)) {
      out_ << "\n";
      return;
    }
    if (!execute(line)) return;
  }
}

void Session::help() {
  out_ << "pog                      - list the proof obligations\n"
          "qc [options] [POs]       - check obligations (qc -? for options)\n"
          "qr <PO#>                 - re-run a counterexample or witness\n"
          "print <expression>       - evaluate an expression\n"
          "default <module>         - set the default module\n"
          "help                     - show this list\n"
          "quit                     - leave the session\n";
}

void Session::pog() {
  if (!loaded()) {
    out_ << "No specification loaded\n";
    return;
  }
  out_ << render_pog(pos_) << "\n";
}

int Session::qc(const std::vector<std::string>& args) {
  auto parsed = parse_qc_args(args, settings_.strategies);
  if (auto* err = std::get_if<UsageError>(&parsed)) {
    out_ << err->message << "\n";
    return 2;
  }
  const QcCommandLine& cl = std::get<QcCommandLine>(parsed);
  RunSettings run = settings_;
  if (auto err = apply_qc_args(cl, run)) {
    out_ << *err << "\n";
    return 2;
  }
  if (cl.help) {
    out_ << usage_text(run.strategies);
    return 0;
  }
  if (!loaded()) {
    out_ << "No specification loaded\n";
    return 2;
  }
  const auto selected = select_pos(pos_, cl.selection, default_module_);
  if (cl.verbosity == Verbosity::Verbose) out_ << describe_settings(run);

  interrupt_.reset();
  std::vector<std::string> diagnostics;
  const auto results = run_batch(selected, run, *env_, {}, interrupt_, &diagnostics);
  if (cl.verbosity != Verbosity::Quiet) {
    for (const auto& d : diagnostics) out_ << d << "\n";
  }

  int code = 0;
  std::size_t done = 0;
  for (std::size_t i = 0; i < selected.size(); ++i) {
    if (!results[i]) continue;
    ++done;
    const CheckedResult& r = *results[i];
    results_[r.po_number] = r;
    if (r.status == Status::Failed || r.status == Status::Timeout) code = 1;
    if (!status_shown(cl, r.status)) continue;
    if (cl.verbosity == Verbosity::Quiet && r.status != Status::Failed && r.status != Status::Timeout) continue;
    out_ << render_result(r, selected[i]) << "\n";
    if (cl.verbosity == Verbosity::Verbose) {
      if (!r.message.empty() && r.status != Status::Failed) out_ << "  " << r.message << "\n";
      for (const auto& d : r.diagnostics) out_ << "  " << d << "\n";
    }
  }
  if (done < selected.size()) {
    out_ << "Interrupted: " << done << " of " << selected.size() << " obligations checked\n";
  }
  return code;
}

void Session::qr(const std::string& arg) {
  if (!loaded()) {
    out_ << "No specification loaded\n";
    return;
  }
  int n = 0;
  try {
    n = std::stoi(arg);
  } catch (const std::exception&) {
    out_ << "Usage: qr <PO number>\n";
    return;
  }
  const auto po = std::find_if(pos_.begin(), pos_.end(), [&](const auto& p) { return p.number == n; });
  if (po == pos_.end()) {
    out_ << "No such obligation: " << n << "\n";
    return;
  }
  std::optional<CheckedResult> result;
  if (auto it = results_.find(n); it != results_.end()) result = it->second;
  const Rerun rr = rerun_counterexample(*po, result, *env_);
  if (!rr.runnable) {
    out_ << rr.message << "\n";
    return;
  }
  out_ << "=> print " << rr.call << "\n";
  if (rr.outcome->is_error()) {
    out_ << rr.outcome->error().format() << "\n";
  } else if (rr.outcome->is_ok()) {
    out_ << "= " << rr.outcome->value().to_string() << "\n";
  }
  out_ << "\n";
}

void Session::print(const std::string& text) {
  if (!loaded()) {
    out_ << "No specification loaded\n";
    return;
  }
  auto parsed = parse_expression(text);
  if (!parsed.ok()) {
    for (const auto& e : parsed.errors) out_ << format_diagnostic(e) << "\n";
    return;
  }
  const auto errors = check_expression(parsed.value, *module_);
  if (!errors.empty()) {
    for (const auto& e : errors) out_ << format_diagnostic(e) << "\n";
    return;
  }
  interrupt_.reset();
  Context ctx(*env_, interrupt_);
  const EvalOutcome v = evaluate(parsed.value, ctx);
  if (v.is_ok()) {
    out_ << "= " << v.value().to_string() << "\n";
  } else if (v.is_error()) {
    out_ << v.error().format() << "\n";
  } else {
    out_ << "Interrupted\n";
  }
}

void Session::set_default(const std::string& name) {
  if (!loaded()) {
    out_ << "No specification loaded\n";
  } else if (name != module_->name) {
    out_ << "Module " << name << " not loaded (have " << module_->name << ")\n";
  } else {
    default_module_ = name;
    out_ << "Default module set to " << name << "\n";
  }
}

}  // namespace specqc::cli
