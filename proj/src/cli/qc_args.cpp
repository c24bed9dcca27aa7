#include "specqc/cli/qc_args.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <charconv>
#include <sstream>

namespace specqc::cli {

namespace {

std::optional<int> po_number(const std::string& s) {
  int n = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), n);
  if (ec != std::errc() || ptr != s.data() + s.size() || n < 1) return std::nullopt;
  return n;
}

std::optional<double> seconds(const std::string& s) {
  try {
    std::size_t used = 0;
    const double d = std::stod(s, &used);
    if (used != s.size()) return std::nullopt;
    return d;
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

std::string strategy_list(const StrategySet& known) {
  std::string s;
  for (const auto& n : known.names()) s += (s.empty() ? "" : ", ") + n;
  return s;
}

}  // namespace

std::vector<std::string> split_words(const std::string& line) {
  std::istringstream in(line);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::variant<QcCommandLine, UsageError> parse_qc_args(const std::vector<std::string>& tokens,
                                                      const StrategySet& known) {
  QcCommandLine out;
  bool quiet = false;
  bool verbose = false;
  auto argument = [&](std::size_t& i) -> std::optional<std::string> {
    if (i + 1 >= tokens.size()) return std::nullopt;
    return tokens[++i];
  };

  for (std::size_t i = 0; i < tokens.size(); ++i) {
    const std::string& t = tokens[i];
    if (t == "-?" || t == "-help") {
      out.help = true;
    } else if (t == "-q") {
      quiet = true;
    } else if (t == "-v") {
      verbose = true;
    } else if (t == "-t") {
      auto v = argument(i);
      if (!v) return UsageError{"Missing value for -t"};
      auto secs = seconds(*v);
      if (!secs || *secs <= 0) return UsageError{"Timeout must be a positive number of seconds: " + *v};
      out.timeout = secs;
    } else if (t == "-i") {
      auto v = argument(i);
      if (!v) return UsageError{"Missing status for -i"};
      auto s = parse_status(*v);
      if (!s) return UsageError{"Unknown status '" + *v + "' (provable, failed, maybe, timeout, unchecked)"};
      out.status_filters.push_back(*s);
    } else if (t == "-s") {
      auto v = argument(i);
      if (!v) return UsageError{"Missing strategy for -s"};
      if (!known.find(*v)) return UsageError{"Unknown strategy '" + *v + "'; valid: " + strategy_list(known)};
      out.strategy_enables.push_back(*v);
    } else if (t.size() > 1 && t[0] == '-' && t.find(':') != std::string::npos) {
      const auto colon = t.find(':');
      StrategyOptionArg opt{t.substr(1, colon - 1), t.substr(colon + 1), {}};
      if (!known.find(opt.strategy)) {
        return UsageError{"Unknown strategy in '" + t + "'; valid: " + strategy_list(known)};
      }
      if (opt.key.empty()) return UsageError{"Missing option name in '" + t + "'"};
      auto v = argument(i);
      if (!v) return UsageError{"Missing value for " + t};
      opt.value = *v;
      out.strategy_options.push_back(std::move(opt));
    } else if (auto n = po_number(t)) {
      // `n - m` as three words, or `n-m` as one
      if (i + 2 < tokens.size() && tokens[i + 1] == "-") {
        auto m = po_number(tokens[i + 2]);
        if (!m) return UsageError{"Bad range end '" + tokens[i + 2] + "'"};
        out.selection.ranges.emplace_back(*n, *m);
        i += 2;
      } else {
        out.selection.ranges.emplace_back(*n, *n);
      }
    } else if (auto dash = t.find('-'); dash != std::string::npos && dash > 0 && po_number(t.substr(0, dash))) {
      auto m = po_number(t.substr(dash + 1));
      if (!m) return UsageError{"Bad range '" + t + "'"};
      out.selection.ranges.emplace_back(*po_number(t.substr(0, dash)), *m);
    } else if (t[0] == '-') {
      return UsageError{"Unknown option '" + t + "'"};
    } else {
      out.selection.patterns.push_back(t);
    }
  }
  if (quiet && verbose) return UsageError{"-q and -v cannot be used together"};
  out.verbosity = quiet ? Verbosity::Quiet : verbose ? Verbosity::Verbose : Verbosity::Normal;
  return out;
}

std::string usage_text(const StrategySet& strategies) {
  return "Usage: quickcheck [-?|-help][-q|-v][-t <secs>]\n"
         "  [-i <status>]* [-s <strategy>]* [-<strategy:option>]*\n"
         "  [<PO numbers/ranges/patterns>]\n"
         "\n"
         "  -?|-help           - show command help\n"
         "  -q|-v              - run with minimal or verbose output\n"
         "  -t <secs>          - timeout in secs\n"
         "  -i <status>        - only show this result status\n"
         "  -s <strategy>      - enable this strategy (below)\n"
         "  -<strategy:option> - pass option to strategy\n"
         "  PO# numbers        - only process these POs\n"
         "  PO# - PO#          - process a range of POs\n"
         "  <pattern>          - process PO names or modules matching\n"
         "\n" +
         strategies.listing();
}

std::optional<std::string> apply_qc_args(const QcCommandLine& args, RunSettings& settings) {
  if (args.timeout) settings.timeout = *args.timeout;
  for (const auto& name : args.strategy_enables) settings.strategies.enable(name, true);
  for (const auto& opt : args.strategy_options) {
    Strategy* s = settings.strategies.find(opt.strategy);
    if (!s) return "Unknown strategy '" + opt.strategy + "'";
    if (auto err = s->set_option(opt.key, opt.value)) return err;
  }
  return std::nullopt;
}

std::vector<ProofObligation> select_pos(const std::vector<ProofObligation>& pos, const Selection& sel,
                                        const std::string& module_name) {
  if (sel.empty()) return pos;
  std::vector<ProofObligation> out;
  for (const auto& po : pos) {
    const bool by_number = std::any_of(sel.ranges.begin(), sel.ranges.end(), [&](const auto& r) {
      return po.number >= std::min(r.first, r.second) && po.number <= std::max(r.first, r.second);
    });
    const bool by_name = std::any_of(sel.patterns.begin(), sel.patterns.end(), [&](const std::string& p) {
      return fnmatch(p.c_str(), po.owner.c_str(), 0) == 0 || fnmatch(p.c_str(), module_name.c_str(), 0) == 0;
    });
    if (by_number || by_name) out.push_back(po);
  }
  return out;
}

bool status_shown(const QcCommandLine& args, Status s) {
  return args.status_filters.empty() ||
         std::find(args.status_filters.begin(), args.status_filters.end(), s) != args.status_filters.end();
}

}  // namespace specqc::cli
