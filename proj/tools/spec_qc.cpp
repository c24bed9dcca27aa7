// spec-qc: load specification files, then run an interactive session or a
// single batch qc.

#include "specqc/cli/config.hpp"
#include "specqc/cli/session.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <filesystem>
#include <iostream>

namespace {

specqc::CancelToken g_interrupt;

extern "C" void on_sigint(int) { g_interrupt.cancel(); }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quick checking of proof obligations"};
  std::vector<std::string> files;
  std::string batch;
  std::string config_path;
  std::string root = ".";
  int workers = 0;
  bool show_config = false;
  app.add_option("files", files, "Specification files");
  auto* batch_opt = app.add_option("--batch", batch, "Run qc once with these arguments and exit");
  app.add_option("--config", config_path, "Configuration file (default: quickcheck.json lookup under --root)");
  app.add_option("--root", root, "Project root for the configuration lookup");
  app.add_option("--workers", workers, "Obligations checked in parallel")->check(CLI::PositiveNumber);
  app.add_flag("--show-config", show_config, "Print the effective settings and exit");
  CLI11_PARSE(app, argc, argv);

  specqc::RunSettings settings;
  std::vector<std::string> warnings;
  try {
    const auto config = config_path.empty() ? specqc::cli::load_config(root)
                                            : specqc::cli::load_config_file(config_path);
    specqc::cli::apply_config(config, settings, warnings);
  } catch (const specqc::cli::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }
  for (const auto& w : warnings) std::cerr << "Warning: " << w << "\n";
  if (workers > 0) settings.workers = workers;

  if (show_config) {
    std::cout << specqc::cli::describe_settings(settings);
    return 0;
  }

  specqc::cli::Session session(std::cout, settings, g_interrupt);
  const bool ok = files.empty() || session.load(files);
  if (*batch_opt) {
    if (!ok || files.empty()) {
      if (files.empty()) std::cerr << "No specification files given\n";
      return 2;
    }
    return session.qc(specqc::cli::split_words(batch));
  }

  std::signal(SIGINT, on_sigint);
  session.repl(std::cin);
  return 0;
}
