#include "specqc/generators.hpp"
#include "support.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace specqc;
using specqc::testing::load_text;

namespace {

TypePtr type_of(const std::string& text) {
  auto t = parse_type(text);
  EXPECT_TRUE(t.ok()) << text;
  return t.value;
}

std::set<Value> as_set(const std::vector<Value>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST(Cardinality, Basics) {
  const SpecModule m;
  EXPECT_EQ(cardinality(types::boolean(), m).count, 2);
  EXPECT_EQ(cardinality(type_of("set of bool"), m).count, 4);
  EXPECT_FALSE(cardinality(types::nat(), m).finite);
  EXPECT_FALSE(cardinality(type_of("seq of bool"), m).finite);
  EXPECT_EQ(cardinality(type_of("map bool to bool"), m).count, 9);
  EXPECT_EQ(cardinality(type_of("[bool]"), m).count, 3);
}

// Tuples over a union: count by listing every tuple by hand.
TEST(Cardinality, ProductOfUnionMatchesListing) {
  const SpecModule m;
  std::set<std::pair<bool, std::string>> listed;
  for (bool a : {false, true}) {
    for (std::string b : {"false", "true", "<A>"}) listed.insert({a, b});
  }
  EXPECT_EQ(cardinality(type_of("bool * (bool | <A>)"), m).count, listed.size());
}

TEST(Cardinality, UnionDuplicatesCountOnce) {
  const SpecModule m;
  EXPECT_EQ(cardinality(type_of("bool | bool | <A>"), m).count, 3);
}

TEST(EnumerateAll, SetOfBool) {
  auto l = load_text("");
  Context ctx(*l.env);
  const auto e = enumerate_all(type_of("set of bool"), 1000, ctx);
  EXPECT_TRUE(e.exhausted);
  const std::set<Value> expected{Value::set({}), Value::set({Value::boolean(false)}),
                                 Value::set({Value::boolean(true)}),
                                 Value::set({Value::boolean(false), Value::boolean(true)})};
  EXPECT_EQ(e.values.size(), 4u);
  EXPECT_EQ(as_set(e.values), expected);
}

TEST(EnumerateAll, InfiniteGivesNothing) {
  auto l = load_text("");
  Context ctx(*l.env);
  const auto e = enumerate_all(types::nat(), 1000, ctx);
  EXPECT_FALSE(e.exhausted);
  EXPECT_TRUE(e.values.empty());
}

TEST(EnumerateAll, OverLimitGivesNothing) {
  auto l = load_text("");
  Context ctx(*l.env);
  EXPECT_FALSE(enumerate_all(type_of("set of (bool * bool * bool)"), 100, ctx).exhausted);
}

TEST(FixedValues, HundredIntegers) {
  auto l = load_text("");
  Context ctx(*l.env);
  const auto v = fixed_values(types::integer(), 100, ctx);
  std::set<Value> expected;
  for (int i = -50; i <= 49; ++i) expected.insert(Value::integer(i));
  EXPECT_EQ(v.size(), 100u);
  EXPECT_EQ(as_set(v), expected);
}

TEST(FixedValues, Nat1StartsAtOne) {
  auto l = load_text("");
  Context ctx(*l.env);
  EXPECT_EQ(fixed_values(types::nat1(), 3, ctx),
            (std::vector<Value>{Value::integer(1), Value::integer(2), Value::integer(3)}));
}

TEST(FixedValues, SequencesAreDistinctMembersStartingEmpty) {
  auto l = load_text("");
  Context ctx(*l.env);
  const auto t = type_of("seq of bool");
  const auto v = fixed_values(t, 5, ctx);
  ASSERT_EQ(v.size(), 5u);
  EXPECT_EQ(as_set(v).size(), 5u);
  EXPECT_EQ(v[0], Value::seq({}));
  for (const auto& s : v) {
    EXPECT_TRUE(type_membership(s, t, ctx));
    for (const auto& x : s.items()) EXPECT_TRUE(x.is(Value::Kind::Bool));
  }
}

TEST(FixedValues, InvariantFiltered) {
  auto l = load_text("types\n  Small = nat inv n == n <= 5;\n");
  Context ctx(*l.env);
  const auto v = fixed_values(types::named("Small"), 100, ctx);
  std::set<Value> expected;
  for (int i = 0; i <= 5; ++i) expected.insert(Value::integer(i));
  EXPECT_EQ(as_set(v), expected);
}

TEST(EnumerateAll, NamedWithInvariant) {
  auto l = load_text("types\n  T = nat1 inv t == t < 3;\n  B = bool inv b == b;\n");
  Context ctx(*l.env);
  const auto b = enumerate_all(types::named("B"), 10, ctx);
  EXPECT_TRUE(b.exhausted);
  EXPECT_EQ(b.values, std::vector<Value>{Value::boolean(true)});
  // T sits over an infinite base type, so nothing is enumerated.
  EXPECT_FALSE(enumerate_all(types::named("T"), 10, ctx).exhausted);
}

TEST(TypeMembership, SetInvariant) {
  auto l = load_text("types\n  S = set of nat inv s == card s <= 1;\n");
  Context ctx(*l.env);
  EXPECT_FALSE(type_membership(Value::set({Value::integer(1), Value::integer(2)}), types::named("S"), ctx));
  EXPECT_TRUE(type_membership(Value::set({Value::integer(1)}), types::named("S"), ctx));
  EXPECT_TRUE(type_membership(Value::integer(0), types::nat(), ctx));
}

// The k-th integer draw lies in [-10k, 10k].
TEST(RandomValueProperty, IntegerRangeWidensWithOrdinal) {
  auto l = load_text("");
  Context ctx(*l.env);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 rng(seed);
    for (std::size_t k = 1; k <= 100; ++k) {
      const auto v = random_value(types::integer(), rng, k, ctx);
      ASSERT_TRUE(v);
      const Integer bound = Integer(10) * k;
      EXPECT_LE(v->as_int(), bound);
      EXPECT_GE(v->as_int(), -bound);
    }
  }
}

TEST(RandomValueProperty, SameSeedSameSequence) {
  auto l = load_text("");
  Context ctx(*l.env);
  for (const char* t : {"int", "seq of nat", "set of bool", "map nat to [bool]", "real * char"}) {
    std::mt19937_64 a(42), b(42);
    for (std::size_t k = 1; k <= 20; ++k) {
      EXPECT_EQ(random_value(type_of(t), a, k, ctx), random_value(type_of(t), b, k, ctx)) << t;
    }
  }
}

TEST(RandomValueProperty, ValuesAreMembers) {
  auto l = load_text("types\n  Even = nat inv e == e mod 2 = 0;\n");
  Context ctx(*l.env);
  std::mt19937_64 rng(3);
  for (const char* t : {"nat1", "seq of nat1", "set of int", "Even", "bool"}) {
    const auto type = type_of(t);
    for (std::size_t k = 1; k <= 50; ++k) {
      const auto v = random_value(type, rng, k, ctx);
      ASSERT_TRUE(v) << t;
      EXPECT_TRUE(type_membership(*v, type, ctx)) << t << " " << v->to_string();
    }
  }
}

// Fixed values are members, distinct, and deterministic.
TEST(FixedValuesProperty, MembersDistinctDeterministic) {
  auto l = load_text("types\n  R :: a : bool b : nat;\n");
  Context ctx(*l.env);
  for (const char* t : {"int", "real", "char", "seq of nat", "set of int", "map bool to nat", "R", "[nat] * bool",
                        "<A> | <B> | nat"}) {
    const auto type = type_of(t);
    const auto v = fixed_values(type, 50, ctx);
    EXPECT_EQ(v, fixed_values(type, 50, ctx)) << t;
    EXPECT_EQ(as_set(v).size(), v.size()) << t;
    for (const auto& x : v) EXPECT_TRUE(type_membership(x, type, ctx)) << t << " " << x.to_string();
  }
}
