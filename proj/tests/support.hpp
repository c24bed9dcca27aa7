#pragma once

// Helpers shared by the test binaries: loading specifications from text or
// the specimen directory, and evaluating free expressions against them.

#include "specqc/checker.hpp"
#include "specqc/engine.hpp"
#include "specqc/parser.hpp"
#include "specqc/pog.hpp"

#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>

namespace specqc::testing {

struct Loaded {
  std::unique_ptr<SpecModule> module;
  std::unique_ptr<ModuleEnv> env;
  std::vector<ProofObligation> pos;
};

inline std::string specimen_path(const std::string& name) { return std::string(SPECQC_SPECIMENS) + "/" + name; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Throws with the diagnostics when the text does not parse and check.
inline Loaded load_text(const std::string& text, const std::string& file = "test.vdmsl") {
  ParseResult parsed = parse_specification(text, file);
  std::string problems;
  for (const auto& e : parsed.errors) problems += format_diagnostic(e) + "\n";
  if (!problems.empty()) throw std::runtime_error(problems);
  Loaded out;
  out.module = std::make_unique<SpecModule>(std::move(parsed.module));
  const CheckResult checked = check_module(*out.module);
  for (const auto& e : checked.errors) problems += format_diagnostic(e) + "\n";
  if (!problems.empty()) throw std::runtime_error(problems);
  out.env = std::make_unique<ModuleEnv>(*out.module);
  out.pos = generate_pos(*out.module);
  return out;
}

/// Specimens load under the name `test.vdmsl`, as in the transcripts.
inline Loaded load_specimen(const std::string& name) { return load_text(read_file(specimen_path(name))); }

/// Parses, checks and evaluates `text` in the module's context.
inline EvalOutcome eval_in(const Loaded& l, const std::string& text, const Binding& locals = {}) {
  auto parsed = parse_expression(text);
  if (!parsed.ok()) throw std::runtime_error("parse: " + format_diagnostic(parsed.errors.front()));
  std::vector<std::pair<std::string, TypePtr>> scope;
  for (const auto& [name, v] : locals) {
    (void)v;
    scope.emplace_back(name, types::unknown());
  }
  const auto errors = check_expression(parsed.value, *l.module, scope);
  if (!errors.empty()) throw std::runtime_error("check: " + format_diagnostic(errors.front()));
  Context ctx(*l.env);
  return evaluate_with(*parsed.value, locals, ctx);
}

inline Loaded empty_module() { return load_text(""); }

}  // namespace specqc::testing
