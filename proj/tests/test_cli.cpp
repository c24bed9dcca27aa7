#include "specqc/cli/config.hpp"
#include "specqc/cli/qc_args.hpp"
#include "specqc/cli/session.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <regex>
#include <sstream>

using namespace specqc;
using namespace specqc::cli;
namespace fs = std::filesystem;

namespace {

QcCommandLine parse_ok(const std::string& line) {
  auto r = parse_qc_args(split_words(line), StrategySet::defaults());
  if (auto* e = std::get_if<UsageError>(&r)) {
    ADD_FAILURE() << line << ": " << e->message;
    return {};
  }
  return std::get<QcCommandLine>(r);
}

std::string usage_error(const std::string& line) {
  auto r = parse_qc_args(split_words(line), StrategySet::defaults());
  if (auto* e = std::get_if<UsageError>(&r)) return e->message;
  return "";
}

std::string strip_elapsed(const std::string& s) {
  return std::regex_replace(s, std::regex(R"( in \d+\.\d{1,3}s)"), " in <t>s");
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("specqc_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

void write(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream(p) << text;
}

struct Run {
  int code = -1;
  std::string out;
};

Run run_tool(const std::string& args) {
  Run r;
  FILE* p = popen((std::string(SPECQC_TOOL) + " " + args + " 2>&1").c_str(), "r");
  if (!p) return r;
  char buf[4096];
  for (std::size_t n; (n = fread(buf, 1, sizeof buf, p)) > 0;) r.out.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

}  // namespace

TEST(QcArgs, FullExample) {
  const auto c = parse_ok("-t 10 -s random -random:seed 42 1 - 5");
  EXPECT_EQ(c.timeout, 10.0);
  EXPECT_EQ(c.strategy_enables, std::vector<std::string>{"random"});
  ASSERT_EQ(c.strategy_options.size(), 1u);
  EXPECT_EQ(c.strategy_options[0].strategy, "random");
  EXPECT_EQ(c.strategy_options[0].key, "seed");
  EXPECT_EQ(c.strategy_options[0].value, "42");
  ASSERT_EQ(c.selection.ranges.size(), 1u);
  EXPECT_EQ(c.selection.ranges[0], std::make_pair(1, 5));
}

TEST(QcArgs, RepeatedFiltersNumbersPatterns) {
  const auto c = parse_ok("-i maybe -i failed 3 7-8 item* -v");
  EXPECT_EQ(c.status_filters, (std::vector<Status>{Status::Maybe, Status::Failed}));
  EXPECT_EQ(c.selection.ranges, (std::vector<std::pair<int, int>>{{3, 3}, {7, 8}}));
  EXPECT_EQ(c.selection.patterns, std::vector<std::string>{"item*"});
  EXPECT_EQ(c.verbosity, Verbosity::Verbose);
  EXPECT_TRUE(status_shown(c, Status::Maybe));
  EXPECT_FALSE(status_shown(c, Status::Provable));
}

TEST(QcArgs, Help) {
  EXPECT_TRUE(parse_ok("-?").help);
  EXPECT_TRUE(parse_ok("-help").help);
}

TEST(QcArgs, Errors) {
  EXPECT_NE(usage_error("-q -v"), "");
  EXPECT_NE(usage_error("-t"), "");
  EXPECT_NE(usage_error("-t 0"), "");
  EXPECT_NE(usage_error("-t abc"), "");
  EXPECT_NE(usage_error("-i sometimes"), "");
  EXPECT_NE(usage_error("-x").find("-x"), std::string::npos);
  const auto unknown = usage_error("-s magic");
  EXPECT_NE(unknown.find("magic"), std::string::npos);
  EXPECT_NE(unknown.find("fixed, search, finite, trivial, direct, random"), std::string::npos);
  EXPECT_NE(usage_error("-magic:size 3"), "");
  EXPECT_NE(usage_error("-fixed:size"), "");
}

TEST(QcArgs, UsageTextListsStrategies) {
  auto s = StrategySet::defaults();
  const std::string text = usage_text(s);
  EXPECT_EQ(text.rfind("Usage: quickcheck [-?|-help][-q|-v][-t <secs>]\n", 0), 0u);
  EXPECT_NE(text.find("  <pattern>          - process PO names or modules matching\n\nEnabled strategies:\n"),
            std::string::npos);
  s.enable("random");
  s.enable("direct", false);
  const std::string changed = usage_text(s);
  EXPECT_NE(changed.find("Disabled strategies (add with -s <name>):\n  direct (no options)\n"), std::string::npos);
  EXPECT_NE(changed.find("  random [-random:size <size>][-random:seed <seed>]\n"), std::string::npos);
}

TEST(QcArgs, Selection) {
  const auto l = specqc::testing::load_specimen("mixed.vdmsl");
  EXPECT_EQ(select_pos(l.pos, parse_ok("1 - 3").selection, "DEFAULT").size(), 3u);
  EXPECT_EQ(select_pos(l.pos, parse_ok("").selection, "DEFAULT").size(), l.pos.size());
  const auto sums = select_pos(l.pos, parse_ok("su*").selection, "DEFAULT");
  ASSERT_EQ(sums.size(), 2u);
  EXPECT_EQ(sums[0].owner, "sum");
  EXPECT_EQ(select_pos(l.pos, parse_ok("DEF*").selection, "DEFAULT").size(), l.pos.size());
}

TEST(Config, PaperExample) {
  const auto c = load_config_file(specqc::testing::specimen_path("quickcheck.json"));
  RunSettings s;
  std::vector<std::string> warnings;
  apply_config(c, s, warnings);
  EXPECT_TRUE(warnings.empty());
  EXPECT_EQ(s.timeout, 10.0);
  EXPECT_TRUE(s.strategies.enabled("fixed"));
  EXPECT_EQ(s.strategies.find("fixed")->options().at("size"), "1000");
  EXPECT_FALSE(s.strategies.enabled("direct"));
  EXPECT_TRUE(s.strategies.enabled("trivial"));
  EXPECT_FALSE(s.strategies.enabled("search"));
  EXPECT_TRUE(s.strategies.enabled("finite"));
}

TEST(Config, Defaults) {
  const auto dir = scratch("defaults");
  const auto c = load_config(dir);
  RunSettings s;
  std::vector<std::string> warnings;
  apply_config(c, s, warnings);
  EXPECT_EQ(s.timeout, 1.0);
  EXPECT_EQ(describe_settings(s), describe_settings(RunSettings{}));
}

TEST(Config, PartialFileMerges) {
  const auto c = parse_config(R"({"config": {"timeout": 3}})", "inline");
  RunSettings s;
  std::vector<std::string> warnings;
  apply_config(c, s, warnings);
  EXPECT_EQ(s.timeout, 3.0);
  for (const auto& n : s.strategies.names()) EXPECT_EQ(s.strategies.enabled(n), n != "random");
}

TEST(Config, VscodeDirectoryWins) {
  const auto dir = scratch("lookup");
  write(dir / "quickcheck.json", R"({"config": {"timeout": 2}})");
  EXPECT_EQ(load_config(dir).timeout, 2.0);
  write(dir / ".vscode" / "quickcheck.json", R"({"config": {"timeout": 4}})");
  EXPECT_EQ(load_config(dir).timeout, 4.0);
}

TEST(Config, MalformedReportsLineAndColumn) {
  try {
    parse_config("{\n  \"config\": {\n    \"timeout\": ,\n  }\n}", "bad.json");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("bad.json:3:", 0), 0u) << e.what();
  }
  EXPECT_THROW(parse_config(R"({"config": {"timeout": -1}})", "x"), ConfigError);
  EXPECT_THROW(parse_config(R"({"strategies": [{"enabled": true}]})", "x"), ConfigError);
}

TEST(Config, UnknownStrategyWarns) {
  const auto c = parse_config(R"({"strategies": [{"name": "magic", "enabled": true}]})", "x.json");
  RunSettings s;
  std::vector<std::string> warnings;
  apply_config(c, s, warnings);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_NE(warnings[0].find("magic"), std::string::npos);
}

TEST(Config, FlagsOverrideConfig) {
  RunSettings s;
  std::vector<std::string> warnings;
  apply_config(load_config_file(specqc::testing::specimen_path("quickcheck.json")), s, warnings);
  ASSERT_FALSE(apply_qc_args(parse_ok("-t 2 -s search -fixed:size 5"), s));
  EXPECT_EQ(s.timeout, 2.0);
  EXPECT_TRUE(s.strategies.enabled("search"));
  EXPECT_EQ(s.strategies.find("fixed")->options().at("size"), "5");
}

TEST(Session, ItemAtTranscript) {
  std::ostringstream out;
  Session session(out, RunSettings{});
  ASSERT_TRUE(session.load({specqc::testing::specimen_path("itemat.vdmsl")}));
  std::istringstream in("qr 1\nqc\nqr 1\nquit\n");
  session.repl(in);
  const std::string path = specqc::testing::specimen_path("itemat.vdmsl");
  const std::string expected =
      "> Obligation does not have a counterexample/witness. Run qc?\n"
      "> PO #1, FAILED in <t>s: Counterexample: index = 0, list = []\n"
      "----\n"
      "itemAt: sequence apply obligation in " + path + " at line 3:28\n"
      "(forall list:seq of nat, index:nat &\n"
      "  index in set inds list)\n"
      "\n"
      "> => print itemAt([], 0)\n"
      "Error 4064: Value 0 is not a nat1 in " + path + " at line 3:28\n"
      "3:      itemAt(list, index) == list(index);\n"
      "\n"
      "> ";
  EXPECT_EQ(strip_elapsed(out.str()), expected);
}

TEST(Session, PogListing) {
  std::ostringstream out;
  Session session(out, RunSettings{});
  ASSERT_TRUE(session.load({specqc::testing::specimen_path("itemat_if.vdmsl")}));
  session.execute("pog");
  EXPECT_NE(out.str().find("Generated 1 proof obligation:\n\nProof Obligation 1: (Unproved)\n"), std::string::npos);
  out.str("");
  session.execute("qc");
  EXPECT_EQ(strip_elapsed(out.str()), "PO #1, PROVABLE by trivial index in set (inds list) in <t>s\n");
}

TEST(Session, FilterQuietAndPrint) {
  std::ostringstream out;
  Session session(out, RunSettings{});
  ASSERT_TRUE(session.load({specqc::testing::specimen_path("mixed.vdmsl")}));
  EXPECT_EQ(session.qc(split_words("-i maybe")), 1);
  const std::string shown = strip_elapsed(out.str());
  EXPECT_EQ(shown, "PO #3, MAYBE in <t>s\nPO #5, MAYBE in <t>s\nPO #7, MAYBE in <t>s\nPO #8, MAYBE in <t>s\n");
  EXPECT_EQ(session.results().size(), 8u);
  out.str("");
  session.qc(split_words("-q"));
  EXPECT_EQ(out.str().find("PROVABLE"), std::string::npos);
  EXPECT_NE(out.str().find("FAILED"), std::string::npos);
  out.str("");
  session.execute("print sum([1, 2, 3])");
  EXPECT_EQ(out.str(), "= 6\n");
  out.str("");
  session.execute("print avg([])");
  EXPECT_EQ(out.str().rfind("Error 4134:", 0), 0u);
}

TEST(Session, CommandErrorsKeepGoing) {
  std::ostringstream out;
  Session session(out, RunSettings{});
  EXPECT_TRUE(session.execute("pog"));
  EXPECT_NE(out.str().find("No specification loaded"), std::string::npos);
  EXPECT_TRUE(session.execute("frobnicate"));
  EXPECT_NE(out.str().find("Unknown command"), std::string::npos);
  EXPECT_EQ(session.qc(split_words("-q -v")), 2);
  EXPECT_TRUE(session.execute("default DEFAULT"));
  EXPECT_FALSE(session.execute("quit"));
}

TEST(Session, HelpShowsUsageAndRunsNothing) {
  std::ostringstream out;
  Session session(out, RunSettings{});
  ASSERT_TRUE(session.load({specqc::testing::specimen_path("itemat.vdmsl")}));
  EXPECT_EQ(session.qc(split_words("-?")), 0);
  EXPECT_EQ(out.str().rfind("Usage: quickcheck", 0), 0u);
  EXPECT_TRUE(session.results().empty());
}

TEST(Session, VerboseShowsSettings) {
  std::ostringstream out;
  RunSettings s;
  std::vector<std::string> warnings;
  apply_config(load_config_file(specqc::testing::specimen_path("quickcheck.json")), s, warnings);
  Session session(out, s);
  ASSERT_TRUE(session.load({specqc::testing::specimen_path("itemat_if.vdmsl")}));
  session.qc(split_words("-v"));
  EXPECT_NE(out.str().find("timeout 10\n"), std::string::npos);
  EXPECT_NE(out.str().find("strategy fixed enabled size=1000\n"), std::string::npos);
  EXPECT_NE(out.str().find("strategy direct disabled\n"), std::string::npos);
}

TEST(Session, DefaultModule) {
  std::ostringstream out;
  Session session(out, RunSettings{});
  ASSERT_TRUE(session.load({specqc::testing::specimen_path("itemat.vdmsl")}));
  session.execute("default Other");
  EXPECT_NE(out.str().find("not loaded"), std::string::npos);
  session.execute("default DEFAULT");
  EXPECT_NE(out.str().find("Default module set to DEFAULT"), std::string::npos);
}

TEST(Tool, BatchExitCodes) {
  EXPECT_EQ(run_tool("--batch '' " + specqc::testing::specimen_path("itemat.vdmsl")).code, 1);
  EXPECT_EQ(run_tool("--batch '' " + specqc::testing::specimen_path("itemat_if.vdmsl")).code, 0);
  const auto dir = scratch("broken");
  write(dir / "broken.vdmsl", "functions f: int -> int f(x) == x + ;");
  EXPECT_EQ(run_tool("--batch '' " + (dir / "broken.vdmsl").string()).code, 2);
  EXPECT_EQ(run_tool("--batch '-q -v' " + specqc::testing::specimen_path("itemat.vdmsl")).code, 2);
}

TEST(Tool, ShowConfigAndBadConfig) {
  const auto r = run_tool("--config " + specqc::testing::specimen_path("quickcheck.json") + " --show-config");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("timeout 10\n"), std::string::npos);
  const auto dir = scratch("badcfg");
  write(dir / "quickcheck.json", "{ \"config\": ");
  const auto bad = run_tool("--root " + dir.string() + " --show-config");
  EXPECT_EQ(bad.code, 2);
  EXPECT_NE(bad.out.find("quickcheck.json:1:"), std::string::npos);
}

TEST(Tool, InteractiveQuit) {
  const auto r = run_tool(specqc::testing::specimen_path("itemat.vdmsl") + " < /dev/null");
  EXPECT_EQ(r.code, 0);
  const auto q = run_tool("--batch '' --workers 2 " + specqc::testing::specimen_path("itemat_if.vdmsl"));
  EXPECT_EQ(q.code, 0);
}
