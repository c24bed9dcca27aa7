#include "specqc/interpreter.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <thread>

using namespace specqc;
using specqc::testing::eval_in;
using specqc::testing::load_text;

namespace {

Value ok(const EvalOutcome& o) {
  if (!o.is_ok()) {
    ADD_FAILURE() << (o.is_error() ? o.error().format() : "cancelled");
    return {};
  }
  return o.value();
}

int error_code(const EvalOutcome& o) { return o.is_error() ? o.error().code : 0; }

const char* kSpec =
    "types\n"
    "  Even = nat inv e == e mod 2 = 0;\n"
    "  P :: x : int y : int;\n"
    "values\n"
    "  K = 3;\n"
    "functions\n"
    "  itemAt: seq of nat * nat -> nat\n"
    "  itemAt(list, index) == list(index);\n"
    "  fact: nat -> nat\n"
    "  fact(n) == if n = 0 then 1 else n * fact(n - 1);\n"
    "  safe: nat -> nat\n"
    "  safe(n) == 10 div n\n"
    "  pre n > 0\n"
    "  post RESULT <= 10;\n"
    "  ident[@T]: @T -> @T\n"
    "  ident(x) == x;\n"
    "  loop: nat -> nat\n"
    "  loop(n) == loop(n + 1);\n";

}  // namespace

TEST(Interpreter, Arithmetic) {
  auto l = load_text(kSpec);
  EXPECT_EQ(ok(eval_in(l, "1 + 2 * 3")), Value::integer(7));
  EXPECT_EQ(ok(eval_in(l, "7 div 2")), Value::integer(3));
  EXPECT_EQ(ok(eval_in(l, "-7 div 2")), Value::integer(-3));
  EXPECT_EQ(ok(eval_in(l, "-7 mod 2")), Value::integer(1));
  EXPECT_EQ(ok(eval_in(l, "-7 rem 2")), Value::integer(-1));
  EXPECT_EQ(ok(eval_in(l, "1 / 4")), Value::number(Rational(1, 4)));
  EXPECT_EQ(ok(eval_in(l, "floor 2.5")), Value::integer(2));
  EXPECT_EQ(ok(eval_in(l, "K * 2")), Value::integer(6));
}

TEST(Interpreter, CollectionsAndComprehensions) {
  auto l = load_text(kSpec);
  EXPECT_EQ(ok(eval_in(l, "card {x * 2 | x in set {1, ..., 10} & x mod 3 = 0}")), Value::integer(3));
  EXPECT_EQ(ok(eval_in(l, "[x | x in set {3, 1, 2}]")), ok(eval_in(l, "[1, 2, 3]")));
  EXPECT_EQ(ok(eval_in(l, "inds [7, 8]")), ok(eval_in(l, "{1, 2}")));
  EXPECT_EQ(ok(eval_in(l, "dom ({1 |-> 2} ++ {3 |-> 4})")), ok(eval_in(l, "{1, 3}")));
  EXPECT_EQ(ok(eval_in(l, "card power {1, 2, 3}")), Value::integer(8));
  EXPECT_EQ(ok(eval_in(l, "mk_P(1, 2).y")), Value::integer(2));
  EXPECT_EQ(ok(eval_in(l, "mk_(1, true).#2")), Value::boolean(true));
}

TEST(Interpreter, Quantifiers) {
  auto l = load_text(kSpec);
  EXPECT_EQ(ok(eval_in(l, "forall x in set {1, 2, 3} & x > 0")), Value::boolean(true));
  EXPECT_EQ(ok(eval_in(l, "exists x in set {1, 2, 3} & x > 2")), Value::boolean(true));
  EXPECT_EQ(ok(eval_in(l, "exists1 x in set {1, 2, 3} & x > 1")), Value::boolean(false));
  EXPECT_EQ(ok(eval_in(l, "forall b:bool & b or not b")), Value::boolean(true));
}

TEST(Interpreter, SequenceIndexErrorIs4064) {
  auto l = load_text(kSpec);
  const auto r = eval_in(l, "itemAt([], 0)");
  ASSERT_TRUE(r.is_error());
  EXPECT_EQ(r.error().code, errc::kNotNat1);
  EXPECT_EQ(r.error().message, "Value 0 is not a nat1");
  EXPECT_EQ(error_code(eval_in(l, "[1](2)")), errc::kNotNat1);
}

TEST(Interpreter, Errors) {
  auto l = load_text(kSpec);
  EXPECT_EQ(error_code(eval_in(l, "1 div 0")), errc::kDivByZero);
  EXPECT_EQ(error_code(eval_in(l, "hd []")), errc::kHdEmpty);
  EXPECT_EQ(error_code(eval_in(l, "{1 |-> 2}(3)")), errc::kMapKey);
  EXPECT_EQ(error_code(eval_in(l, "safe(0)")), errc::kPreFailed);
  EXPECT_EQ(error_code(eval_in(l, "let x in set {} be st true in x")), errc::kLetBeNoValue);
  EXPECT_EQ(error_code(eval_in(l, "forall x:nat & x >= 0")), errc::kInfiniteBind);
}

TEST(Interpreter, ShortCircuit) {
  auto l = load_text(kSpec);
  EXPECT_EQ(ok(eval_in(l, "false and 1 div 0 = 1")), Value::boolean(false));
  EXPECT_EQ(ok(eval_in(l, "true or 1 div 0 = 1")), Value::boolean(true));
  EXPECT_EQ(ok(eval_in(l, "false => 1 div 0 = 1")), Value::boolean(true));
}

TEST(Interpreter, FunctionsPreAndPost) {
  auto l = load_text(kSpec);
  EXPECT_EQ(ok(eval_in(l, "fact(5)")), Value::integer(120));
  EXPECT_EQ(ok(eval_in(l, "pre_safe(0)")), Value::boolean(false));
  EXPECT_EQ(ok(eval_in(l, "post_safe(1, 10)")), Value::boolean(true));
  EXPECT_EQ(ok(eval_in(l, "ident[nat](4)")), Value::integer(4));
}

TEST(Interpreter, RecursionDepthIsUncertain) {
  auto l = load_text(kSpec);
  const auto r = eval_in(l, "loop(0)");
  ASSERT_TRUE(r.is_error());
  EXPECT_TRUE(r.error().uncertain());
}

TEST(Interpreter, TypeMembershipHonoursInvariants) {
  auto l = load_text(kSpec);
  Context ctx(*l.env);
  EXPECT_TRUE(type_membership(Value::integer(4), types::named("Even"), ctx));
  EXPECT_FALSE(type_membership(Value::integer(3), types::named("Even"), ctx));
  EXPECT_FALSE(type_membership(Value::integer(-2), types::named("Even"), ctx));
  EXPECT_TRUE(type_membership(Value::integer(1), types::nat1(), ctx));
  EXPECT_FALSE(type_membership(Value::integer(0), types::nat1(), ctx));
}

TEST(Interpreter, PatternMatching) {
  auto l = load_text(kSpec);
  EXPECT_EQ(ok(eval_in(l, "cases [7]: [] -> 0, [h] -> h + 1 end")), Value::integer(8));
  EXPECT_EQ(ok(eval_in(l, "let mk_(a, b) = mk_(1, 2) in a + b")), Value::integer(3));
  EXPECT_EQ(error_code(eval_in(l, "cases 3: 1 -> 0, 2 -> 1 end")), errc::kCasesNoMatch);
}

TEST(Interpreter, CancelStopsEvaluation) {
  auto l = load_text(kSpec);
  auto e = parse_expression("card {x * y | x in set {1, ..., 900}, y in set {1, ..., 900} & (x + y) mod 7 = 0}");
  ASSERT_TRUE(e.ok());
  ASSERT_TRUE(check_expression(e.value, *l.module).empty());
  CancelToken token;
  Context ctx(*l.env, token);
  std::thread t([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
    token.cancel();
  });
  const auto r = evaluate(e.value, ctx);
  t.join();
  EXPECT_TRUE(r.is_cancelled());
}

TEST(Interpreter, DeadlineStopsEvaluation) {
  auto l = load_text(kSpec);
  auto e = parse_expression("card {x * y | x in set {1, ..., 900}, y in set {1, ..., 900} & (x + y) mod 7 = 0}");
  ASSERT_TRUE(check_expression(e.value, *l.module).empty());
  Context ctx(*l.env, {}, Context::Clock::now() + std::chrono::milliseconds(100));
  const auto start = Context::Clock::now();
  EXPECT_TRUE(evaluate(e.value, ctx).is_cancelled());
  EXPECT_LT(std::chrono::duration<double>(Context::Clock::now() - start).count(), 0.5);
}

TEST(Interpreter, QuantifiedReportsFailingBinding) {
  auto l = load_text(kSpec);
  auto e = parse_expression("forall list:seq of nat, index:nat & index in set inds list");
  ASSERT_TRUE(check_expression(e.value, *l.module).empty());
  BindOverrides o;
  o["list:seq of nat"] = {{Value::seq({Value::integer(5)}), Value::seq({})}, false};
  o["index:nat"] = {{Value::integer(1), Value::integer(0)}, false};
  Context ctx(*l.env);
  const auto rep = evaluate_quantified(*e.value, o, ctx);
  ASSERT_TRUE(rep.result.is_ok());
  EXPECT_EQ(rep.result.value(), Value::boolean(false));
  ASSERT_TRUE(rep.failing);
  EXPECT_EQ(render_binding(sorted_binding(*rep.failing)), "index = 0, list = [5]");
}

TEST(Interpreter, QuantifiedExistsReportsWitness) {
  auto l = load_text(kSpec);
  auto e = parse_expression("exists c:nat, r:nat & c = r");
  ASSERT_TRUE(check_expression(e.value, *l.module).empty());
  BindOverrides o;
  o["c:nat"] = {{Value::integer(0), Value::integer(1)}, false};
  o["r:nat"] = {{Value::integer(0), Value::integer(1)}, false};
  Context ctx(*l.env);
  const auto rep = evaluate_quantified(*e.value, o, ctx);
  ASSERT_TRUE(rep.witness);
  EXPECT_EQ(render_binding(*rep.witness), "c = 0, r = 0");
}

TEST(Interpreter, QuantifiedExhaustedOnlyWithAllValues) {
  auto l = load_text(kSpec);
  auto e = parse_expression("forall b:bool & b or not b");
  ASSERT_TRUE(check_expression(e.value, *l.module).empty());
  BindOverrides o;
  o["b:bool"] = {{Value::boolean(false), Value::boolean(true)}, true};
  Context ctx(*l.env);
  auto rep = evaluate_quantified(*e.value, o, ctx);
  EXPECT_TRUE(rep.exhausted);
  EXPECT_EQ(rep.combinations, 2u);
}

TEST(Interpreter, ModuleValueFailureIsDiagnosed) {
  auto l = load_text("values\n  Z = 1 div 0;\n");
  EXPECT_EQ(l.env->value("Z"), nullptr);
  EXPECT_FALSE(l.env->diagnostics().empty());
}
