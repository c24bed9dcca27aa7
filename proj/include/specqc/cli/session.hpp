#pragma once

// Console session: holds the loaded specification, its obligations and the
// latest qc results, and executes pog / qc / qr / print / default commands.

#include "specqc/cli/qc_args.hpp"
#include "specqc/engine.hpp"

#include <iosfwd>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace specqc::cli {

class Session {
 public:
  /// `settings` are the defaults after the configuration file; qc flags are
  /// layered on a copy for each run. `interrupt` is cancelled from outside
  /// (SIGINT) to stop a running qc.
  Session(std::ostream& out, RunSettings settings, CancelToken interrupt = {});
  ~Session();

  /// Parses and checks the files as one specification. Errors are printed;
  /// on failure the session has no module.
  bool load(const std::vector<std::string>& files);
  bool loaded() const { return module_ != nullptr; }

  /// Runs one command line. False after `quit`.
  bool execute(const std::string& line);

  /// Prompt loop until end of input or `quit`.
  void repl(std::istream& in);

  /// qc with the given words. 0: nothing FAILED or TIMEOUT; 1: some did;
  /// 2: usage error or nothing loaded.
  int qc(const std::vector<std::string>& args);

  void pog();
  void qr(const std::string& arg);
  void print(const std::string& expr);
  void set_default(const std::string& name);
  void help();

  const std::vector<ProofObligation>& obligations() const { return pos_; }
  const std::map<int, CheckedResult>& results() const { return results_; }
  const RunSettings& settings() const { return settings_; }

 private:
  std::ostream& out_;
  RunSettings settings_;
  CancelToken interrupt_;
  std::unique_ptr<SpecModule> module_;
  std::unique_ptr<ModuleEnv> env_;
  std::vector<ProofObligation> pos_;
  std::map<int, CheckedResult> results_;
  std::string default_module_;
};

}  // namespace specqc::cli
