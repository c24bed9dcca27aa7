// Serial versus OpenMP run_batch on a synthetic module. Checks that both
// produce the same statuses and counterexamples, then prints timings.

#include "specqc/checker.hpp"
#include "specqc/engine.hpp"
#include "specqc/parser.hpp"

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <omp.h>
#include <sstream>

using namespace specqc;

namespace {

std::string synthetic_module(int functions) {
  std::ostringstream s;
  s << "functions\n";
  for (int i = 0; i < functions; ++i) {
    s << "  f" << i << ": seq of nat * nat -> nat\n"
      << "  f" << i << "(s, i) == if i < " << (i % 7) << " then 0 else s(i) + i div (i - " << (i % 5) << ");\n"
      << "  g" << i << ": set of bool * nat -> bool\n"
      << "  g" << i << "(b, n) == card b <= 2 and (n > " << i << " => n mod (n - " << i << ") >= 0);\n";
  }
  return s.str();
}

template <typename F>
double timed(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

bool same(const std::vector<std::optional<CheckedResult>>& a, const std::vector<std::optional<CheckedResult>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!a[i] || !b[i] || a[i]->status != b[i]->status || a[i]->counterexample != b[i]->counterexample) return false;
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  const int functions = argc > 1 ? std::atoi(argv[1]) : 20;
  const int workers = argc > 2 ? std::atoi(argv[2]) : omp_get_max_threads();
  ParseResult parsed = parse_specification(synthetic_module(functions), "bench.vdmsl");
  if (!parsed.ok() || !check_module(parsed.module).ok()) {
    std::cerr << "synthetic module failed to load\n";
    return 2;
  }
  const auto pos = generate_pos(parsed.module);
  ModuleEnv env(parsed.module);
  RunSettings settings;
  settings.timeout = 10;
  settings.workers = workers;

  std::vector<std::optional<CheckedResult>> serial, parallel;
  const double ts = timed([&] { serial = run_batch_serial(pos, settings, env, {}, {}); });
  const double tp = timed([&] { parallel = run_batch_parallel(pos, settings, env, {}, {}); });

  std::cout << "obligations " << pos.size() << "\n"
            << "serial      " << ts << " s\n"
            << "parallel    " << tp << " s (" << workers << " threads)\n"
            << "speedup     " << (tp > 0 ? ts / tp : 0) << "\n"
            << "agreement   " << (same(serial, parallel) ? "yes" : "NO") << "\n";
  return same(serial, parallel) ? 0 : 1;
}
