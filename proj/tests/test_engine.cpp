#include "specqc/printer.hpp"
#include "specqc/engine.hpp"
#include "po_corpus.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <regex>
#include <thread>

using namespace specqc;
using specqc::testing::load_specimen;
using specqc::testing::load_text;
using specqc::testing::Loaded;

namespace {

CheckedResult check(const Loaded& l, std::size_t i, RunSettings settings = {}) {
  auto results = run_batch({l.pos.at(i)}, settings, *l.env);
  return *results.at(0);
}

/// Strategy stub returning a fixed verdict, for precedence tests.
class Fixed final : public Strategy {
 public:
  Fixed(std::string name, std::optional<Verdict> v) : name_(std::move(name)), verdict_(std::move(v)) {}
  std::string name() const override { return name_; }
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<Fixed>(*this); }
  StrategyResult run(const StrategyRequest&) const override {
    StrategyResult r;
    r.verdict = verdict_;
    return r;
  }

 private:
  std::string name_;
  std::optional<Verdict> verdict_;
};

const std::regex kElapsed(R"( in \d+\.\d{1,3}s)");

std::string strip_elapsed(const std::string& s) { return std::regex_replace(s, kElapsed, " in <t>s"); }

}  // namespace

TEST(Engine, ItemAtFails) {
  const auto l = load_specimen("itemat.vdmsl");
  const auto r = check(l, 0);
  ASSERT_EQ(r.status, Status::Failed);
  ASSERT_TRUE(r.counterexample);
  EXPECT_EQ(render_binding(sorted_binding(*r.counterexample)), "index = 0, list = []");
  EXPECT_EQ(strip_elapsed(render_result(r, l.pos[0])),
            "PO #1, FAILED in <t>s: Counterexample: index = 0, list = []\n"
            "----\n"
            "itemAt: sequence apply obligation in test.vdmsl at line 3:28\n"
            "(forall list:seq of nat, index:nat &\n"
            "  index in set inds list)\n");
}

TEST(Engine, PreGuardedIsMaybe) {
  const auto l = load_specimen("itemat_pre.vdmsl");
  EXPECT_EQ(check(l, 0).status, Status::Maybe);
}

TEST(Engine, IfGuardedIsTrivial) {
  const auto l = load_specimen("itemat_if.vdmsl");
  const auto r = check(l, 0);
  ASSERT_EQ(r.status, Status::Provable);
  EXPECT_EQ(strip_elapsed(render_result(r, l.pos[0])), "PO #1, PROVABLE by trivial index in set (inds list) in <t>s");
}

TEST(Engine, FiniteTypes) {
  const auto l = load_specimen("finite.vdmsl");
  const auto r = check(l, 0);
  ASSERT_EQ(r.status, Status::Provable);
  EXPECT_EQ(r.reason, "finite types");
}

TEST(Engine, CardOfSetOfBoolAtMostTwo) {
  const auto l = load_text("");
  auto e = parse_expression("forall s:set of bool & card s <= 2");
  ASSERT_TRUE(check_expression(e.value, *l.module).empty());
  ProofObligation po;
  po.number = 1;
  po.expr = e.value;
  const auto r = check_po(po, RunSettings{}, *l.env);
  ASSERT_EQ(r.status, Status::Provable);
  EXPECT_EQ(r.reason, "finite types");
}

TEST(Engine, PolymorphicDefaultsToReal) {
  const auto l = load_specimen("poly.vdmsl");
  const auto assignments = assign_type_params(l.pos[0], *l.module);
  ASSERT_EQ(assignments.size(), 1u);
  EXPECT_EQ(render_type(assignments[0][0].second), "real");
  const auto r = check(l, 0);
  ASSERT_EQ(r.status, Status::Failed);
  const std::string head = "PO #1, FAILED in <t>s: Counterexample: i = 0, s = [],\n  T = real\n";
  EXPECT_EQ(strip_elapsed(render_result(r, l.pos[0])).substr(0, head.size()), head);
}

TEST(Engine, AnnotatedCandidatesInOrder) {
  const auto l = load_specimen("poly_annotated.vdmsl");
  const auto assignments = assign_type_params(l.pos[0], *l.module);
  ASSERT_EQ(assignments.size(), 2u);
  EXPECT_EQ(render_type(assignments[0][0].second, TypeStyle::Resolved), "set of (nat)");
  EXPECT_EQ(render_type(assignments[1][0].second, TypeStyle::Resolved), "set of (bool)");
  const auto r = check(l, 0);
  ASSERT_EQ(r.status, Status::Failed);
  EXPECT_NE(render_result(r, l.pos[0]).find("Counterexample: i = 0, s = [],\n  T = set of (nat)\n"), std::string::npos);
}

TEST(Engine, NoTypeParamsSingleEmptyAssignment) {
  const auto l = load_specimen("itemat.vdmsl");
  const auto a = assign_type_params(l.pos[0], *l.module);
  ASSERT_EQ(a.size(), 1u);
  EXPECT_TRUE(a[0].empty());
}

TEST(Engine, UncheckedWithoutEvaluation) {
  const auto l = load_specimen("state.vdmsl");
  RunSettings s;
  auto results = run_batch(l.pos, s, *l.env);
  EXPECT_EQ(results[0]->status, Status::Unchecked);
  EXPECT_EQ(results[1]->status, Status::Unchecked);
  EXPECT_EQ(results[1]->elapsed, 0.0);
  EXPECT_EQ(render_result(*results[1], l.pos[1]), "PO #2, UNCHECKED");
}

TEST(Engine, TimeoutHonoursBudget) {
  const auto l = load_specimen("timeout.vdmsl");
  RunSettings s;
  s.timeout = 0.3;
  const auto start = std::chrono::steady_clock::now();
  const auto r = check(l, 1, s);
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_EQ(r.status, Status::Timeout);
  EXPECT_GE(r.elapsed, 0.3);
  EXPECT_LE(wall, 0.3 + 0.5);
}

TEST(Engine, DisprovedBeatsProved) {
  const auto l = load_specimen("itemat.vdmsl");
  RunSettings s;
  s.strategies = StrategySet{};
  s.strategies.add(std::make_unique<Fixed>("yes", Verdict{Verdict::Kind::Proved, "stub", {}}), true);
  Verdict no{Verdict::Kind::Disproved, "", {{"list", Value::seq({})}, {"index", Value::integer(0)}}};
  s.strategies.add(std::make_unique<Fixed>("no", no), true);
  const auto r = check(l, 0, s);
  EXPECT_EQ(r.status, Status::Failed);
}

TEST(Engine, UnconfirmedDisproofIsIgnored) {
  const auto l = load_specimen("itemat_if.vdmsl");
  RunSettings s;
  Verdict no{Verdict::Kind::Disproved, "", {{"list", Value::seq({Value::integer(1)})}, {"index", Value::integer(1)}}};
  s.strategies.add(std::make_unique<Fixed>("liar", no), true);
  EXPECT_EQ(check(l, 0, s).status, Status::Provable);
}

TEST(Engine, StrategyExceptionDoesNotAbort) {
  class Throws final : public Strategy {
   public:
    std::string name() const override { return "throws"; }
    std::unique_ptr<Strategy> clone() const override { return std::make_unique<Throws>(); }
    StrategyResult run(const StrategyRequest&) const override { throw std::runtime_error("boom"); }
  };
  const auto l = load_specimen("itemat.vdmsl");
  RunSettings s;
  s.strategies.add(std::make_unique<Throws>(), true);
  const auto r = check(l, 0, s);
  EXPECT_EQ(r.status, Status::Failed);
  EXPECT_FALSE(r.diagnostics.empty());
}

TEST(Engine, EmptyBindsFallBackToFixedValues) {
  const auto l = load_specimen("itemat.vdmsl");
  RunSettings s;
  s.strategies = StrategySet{};
  EXPECT_EQ(check(l, 0, s).status, Status::Failed);
}

TEST(Engine, WitnessRendering) {
  const auto l = load_specimen("mixed.vdmsl");
  const auto r = check(l, 1);
  ASSERT_EQ(r.status, Status::Provable);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(strip_elapsed(render_result(r, l.pos[1])), "PO #2, PROVABLE by witness x = 3 in <t>s");
}

TEST(Engine, NoWitnessFails) {
  const auto l = load_text("functions\n  c: () -> nat\n  c() == let x in set {1, 2} be st x > 5 in x;\n");
  const auto r = check(l, 0);
  ASSERT_EQ(r.status, Status::Failed);
  EXPECT_TRUE(r.counterexample && r.counterexample->empty());
  EXPECT_FALSE(r.message.empty());
}

TEST(Engine, FormatElapsed) {
  EXPECT_EQ(format_elapsed(0.013), "0.013");
  EXPECT_EQ(format_elapsed(0.0), "0.0");
  EXPECT_EQ(format_elapsed(6.232), "6.232");
  EXPECT_EQ(format_elapsed(0.1004), "0.1");
  EXPECT_EQ(format_elapsed(12.5), "12.5");
}

TEST(Engine, StatusWords) {
  for (Status s : {Status::Provable, Status::Failed, Status::Maybe, Status::Timeout, Status::Unchecked}) {
    EXPECT_EQ(parse_status(status_word(s)), s);
  }
  EXPECT_FALSE(parse_status("FAILED"));
}

TEST(Rerun, ItemAt) {
  const auto l = load_specimen("itemat.vdmsl");
  const auto r = check(l, 0);
  const auto rr = rerun_counterexample(l.pos[0], r, *l.env);
  ASSERT_TRUE(rr.runnable);
  EXPECT_EQ(rr.call, "itemAt([], 0)");
  ASSERT_TRUE(rr.outcome && rr.outcome->is_error());
  EXPECT_EQ(rr.outcome->error().format(),
            "Error 4064: Value 0 is not a nat1 in test.vdmsl at line 3:28\n"
            "3:      itemAt(list, index) == list(index);");
}

TEST(Rerun, BeforeQc) {
  const auto l = load_specimen("itemat.vdmsl");
  const auto rr = rerun_counterexample(l.pos[0], std::nullopt, *l.env);
  EXPECT_FALSE(rr.runnable);
  EXPECT_EQ(rr.message, "Obligation does not have a counterexample/witness. Run qc?");
}

TEST(Rerun, MissingParameterNotRunnable) {
  const auto l = load_specimen("itemat.vdmsl");
  CheckedResult r;
  r.status = Status::Failed;
  r.counterexample = Binding{{"list", Value::seq({})}};
  const auto rr = rerun_counterexample(l.pos[0], r, *l.env);
  EXPECT_FALSE(rr.runnable);
  EXPECT_FALSE(rr.message.empty());
}

TEST(Rerun, PolymorphicPassesTypeArguments) {
  const auto l = load_specimen("poly.vdmsl");
  const auto rr = rerun_counterexample(l.pos[0], check(l, 0), *l.env);
  ASSERT_TRUE(rr.runnable);
  EXPECT_EQ(rr.call, "f[real]([], 0)");
  ASSERT_TRUE(rr.outcome->is_error());
  EXPECT_EQ(rr.outcome->error().code, 4064);
}

TEST(Batch, OrderSelectionAndCancellation) {
  const auto l = load_specimen("mixed.vdmsl");
  RunSettings s;
  std::vector<int> seen;
  auto results = run_batch(l.pos, s, *l.env, [&](const CheckedResult& r) { seen.push_back(r.po_number); });
  ASSERT_EQ(results.size(), l.pos.size());
  for (std::size_t i = 0; i < results.size(); ++i) EXPECT_EQ(results[i]->po_number, static_cast<int>(i) + 1);
  EXPECT_EQ(seen.size(), l.pos.size());

  CancelToken cancel;
  cancel.cancel();
  auto none = run_batch(l.pos, s, *l.env, {}, cancel);
  for (const auto& r : none) EXPECT_FALSE(r);
}

TEST(Batch, ParallelMatchesSerial) {
  const auto l = load_specimen("mixed.vdmsl");
  RunSettings s;
  s.workers = 4;
  const auto a = run_batch_serial(l.pos, s, *l.env, {}, {});
  const auto b = run_batch_parallel(l.pos, s, *l.env, {}, {});
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i]->status, b[i]->status);
    EXPECT_EQ(a[i]->counterexample, b[i]->counterexample);
    EXPECT_EQ(a[i]->witness, b[i]->witness);
    EXPECT_EQ(a[i]->reason, b[i]->reason);
  }
}

// Same seed and settings: same statuses, counterexamples and witnesses.
TEST(EngineProperty, Deterministic) {
  for (const char* name : {"itemat.vdmsl", "mixed.vdmsl", "poly_annotated.vdmsl"}) {
    const auto l = load_specimen(name);
    RunSettings s;
    s.strategies.enable("random");
    ASSERT_FALSE(s.strategies.find("random")->set_option("seed", "99"));
    RunSettings t = s;
    const auto a = run_batch(l.pos, s, *l.env);
    const auto b = run_batch(l.pos, t, *l.env);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_EQ(a[i]->status, b[i]->status) << name;
      EXPECT_EQ(a[i]->counterexample, b[i]->counterexample) << name;
      EXPECT_EQ(a[i]->witness, b[i]->witness) << name;
    }
  }
}

// Disabling strategies never turns FAILED into PROVABLE or back.
TEST(EngineProperty, MonotoneSafety) {
  specqc::testing::CorpusGenerator gen(5);
  const auto l = load_text(specqc::testing::kCorpusModule);
  std::vector<ProofObligation> pos;
  for (int i = 0; i < 80; ++i) pos.push_back(specqc::testing::corpus_obligation(gen.next(), *l.module, i + 1));
  RunSettings all;
  const auto full = run_batch(pos, all, *l.env);
  for (const auto& name : all.strategies.names()) {
    RunSettings fewer;
    fewer.strategies.enable(name, false);
    const auto part = run_batch(pos, fewer, *l.env);
    for (std::size_t i = 0; i < pos.size(); ++i) {
      const Status a = full[i]->status;
      const Status b = part[i]->status;
      EXPECT_FALSE(a == Status::Failed && b == Status::Provable) << name << " " << render_expr(pos[i].expr);
      EXPECT_FALSE(a == Status::Provable && b == Status::Failed) << name << " " << render_expr(pos[i].expr);
    }
  }
}

// FAILED counterexamples re-falsify, witnesses re-verify and PROVABLE claims
// survive brute force.
TEST(EngineProperty, CorpusAgreesWithOracle) {
  specqc::testing::CorpusGenerator gen(11);
  const auto l = load_text(specqc::testing::kCorpusModule);
  std::vector<specqc::testing::CorpusPo> corpus;
  std::vector<ProofObligation> pos;
  for (int i = 0; i < 150; ++i) {
    corpus.push_back(gen.next());
    pos.push_back(specqc::testing::corpus_obligation(corpus.back(), *l.module, i + 1));
  }
  RunSettings s;
  const auto results = run_batch(pos, s, *l.env);
  for (std::size_t i = 0; i < pos.size(); ++i) {
    ASSERT_TRUE(results[i]);
    EXPECT_EQ(specqc::testing::oracle_disagreement(corpus[i], *results[i]), "") << corpus[i].text;
  }
}
