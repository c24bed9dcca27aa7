#include "specqc/value.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace specqc;

TEST(Value, RationalWithUnitDenominatorIsInteger) {
  const Value v = Value::number(Rational(4, 2));
  EXPECT_TRUE(v.is(Value::Kind::Int));
  EXPECT_EQ(v, Value::integer(2));
}

TEST(Value, SetsAreSortedAndDeduplicated) {
  const Value s = Value::set({Value::integer(3), Value::integer(1), Value::integer(3)});
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.items()[0], Value::integer(1));
  EXPECT_TRUE(s.set_contains(Value::integer(3)));
  EXPECT_FALSE(s.set_contains(Value::integer(2)));
}

TEST(Value, MapRejectsConflictingKeys) {
  EXPECT_FALSE(Value::map({{Value::integer(1), Value::integer(2)}, {Value::integer(1), Value::integer(3)}}));
  auto m = Value::map({{Value::integer(1), Value::integer(2)}, {Value::integer(1), Value::integer(2)}});
  ASSERT_TRUE(m);
  EXPECT_EQ(m->size(), 1u);
  ASSERT_NE(m->find(Value::integer(1)), nullptr);
  EXPECT_EQ(*m->find(Value::integer(1)), Value::integer(2));
}

TEST(Value, Rendering) {
  EXPECT_EQ(Value::seq({}).to_string(), "[]");
  EXPECT_EQ(Value::set({}).to_string(), "{}");
  EXPECT_EQ(Value::seq({Value::integer(1), Value::integer(2)}).to_string(), "[1, 2]");
  EXPECT_EQ(Value::boolean(true).to_string(), "true");
  EXPECT_EQ(Value::nil().to_string(), "nil");
  EXPECT_EQ(Value::quote("A").to_string(), "<A>");
  EXPECT_EQ(Value::number(Rational(1, 4)).to_string(), "0.25");
  EXPECT_EQ(Value::tuple({Value::integer(1), Value::boolean(false)}).to_string(), "mk_(1, false)");
}

TEST(Value, RenderRational) {
  EXPECT_EQ(render_rational(Rational(-1, 2)), "-0.5");
  EXPECT_EQ(render_rational(Rational(1, 3)), "1/3");
}

TEST(Value, BindingRendering) {
  const Binding b{{"list", Value::seq({})}, {"index", Value::integer(0)}};
  EXPECT_EQ(render_binding(b), "list = [], index = 0");
  EXPECT_EQ(render_binding(sorted_binding(b)), "index = 0, list = []");
}

TEST(Value, BigIntegersAreExact) {
  Integer big = 1;
  for (int i = 0; i < 100; ++i) big *= 10;
  EXPECT_EQ(Value::integer(big).to_string(), "1" + std::string(100, '0'));
}

// Ordering is a strict total order consistent with equality.
TEST(ValueProperty, OrderingIsTotalAndConsistent) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> small(-3, 3);
  auto random_value = [&](auto&& self, int depth) -> Value {
    switch (depth > 0 ? rng() % 6 : rng() % 3) {
      case 0: return Value::integer(small(rng));
      case 1: return Value::boolean(rng() % 2);
      case 2: return Value::number(Rational(small(rng), 2));
      case 3: return Value::seq({self(self, depth - 1), self(self, depth - 1)});
      case 4: return Value::set({self(self, depth - 1), self(self, depth - 1)});
      default: return Value::tuple({self(self, depth - 1), self(self, depth - 1)});
    }
  };
  for (int i = 0; i < 500; ++i) {
    const Value a = random_value(random_value, 2);
    const Value b = random_value(random_value, 2);
    const Value c = random_value(random_value, 2);
    EXPECT_EQ(a == b, compare(a, b) == 0);
    EXPECT_EQ(compare(a, b) < 0, compare(b, a) > 0);
    if (a < b && b < c) EXPECT_LT(a, c);
    EXPECT_EQ(a, a);
  }
}
