#pragma once

// Runtime value universe for the specification interpreter.
//
// Values are immutable. Compound values share their element storage, so
// copying a Value is cheap. Numbers are normalised: a rational with unit
// denominator is always stored as an Integer, which makes structural equality
// coincide with numeric equality (1 = 2/2).

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace specqc {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

class Value;
using ValueList = std::vector<Value>;
using MapEntries = std::vector<std::pair<Value, Value>>;

class Value {
 public:
  enum class Kind { Nil, Bool, Int, Real, Char, Quote, Seq, Set, Map, Tuple, Record };

  Value() = default;  // nil

  static Value nil() { return Value(); }
  static Value boolean(bool b);
  static Value integer(Integer i);
  static Value integer(std::int64_t i) { return integer(Integer(i)); }
  /// Normalises to an Integer when the denominator is one.
  static Value number(Rational r);
  static Value character(char32_t c);
  static Value quote(std::string tag);
  static Value seq(ValueList items);
  static Value string(std::string_view text);
  /// Sorts and removes duplicates.
  static Value set(ValueList items);
  /// Sorts by key. Returns nullopt when a key maps to two different values.
  static std::optional<Value> map(MapEntries entries);
  static Value tuple(ValueList items);
  static Value record(std::string type_name, ValueList fields);

  Kind kind() const { return kind_; }
  bool is(Kind k) const { return kind_ == k; }
  bool is_number() const { return kind_ == Kind::Int || kind_ == Kind::Real; }

  bool as_bool() const { return std::get<bool>(rep_); }
  const Integer& as_int() const { return std::get<Integer>(rep_); }
  Rational as_rational() const;
  char32_t as_char() const { return std::get<char32_t>(rep_); }
  const std::string& quote_tag() const;
  const std::string& record_name() const;

  /// Elements of a seq, set or tuple, or the fields of a record.
  const ValueList& items() const;
  const MapEntries& entries() const;
  std::size_t size() const;

  /// Looks up a map key. Precondition: kind() == Map.
  const Value* find(const Value& key) const;
  bool set_contains(const Value& v) const;

  std::string to_string() const;

  friend std::strong_ordering compare(const Value& a, const Value& b);
  friend bool operator==(const Value& a, const Value& b) { return compare(a, b) == 0; }
  friend std::strong_ordering operator<=>(const Value& a, const Value& b) { return compare(a, b); }

 private:
  struct Quote {
    std::string tag;
  };
  struct Items {
    std::string name;  // record type name, empty otherwise
    ValueList items;
  };
  struct Entries {
    MapEntries entries;
  };

  Kind kind_ = Kind::Nil;
  std::variant<std::monostate, bool, Integer, Rational, char32_t, std::shared_ptr<const Quote>,
               std::shared_ptr<const Items>, std::shared_ptr<const Entries>>
      rep_;
};

std::ostream& operator<<(std::ostream& os, const Value& v);

/// Ordered name/value pairs, e.g. a counterexample.
using Binding = std::vector<std::pair<std::string, Value>>;

/// Renders `a = 1, b = []` with names in the given order.
std::string render_binding(const Binding& binding);

/// Returns a copy sorted by variable name.
Binding sorted_binding(Binding binding);

/// Renders a rational: terminating decimals as `0.25`, otherwise `1/3`.
std::string render_rational(const Rational& r);

}  // namespace specqc
