#pragma once

// Value generation for types: exact cardinality, exhaustive enumeration,
// deterministic "fixed" samples and seeded random draws.

#include "specqc/interpreter.hpp"

#include <random>
#include <string>
#include <vector>

namespace specqc {

struct Cardinality {
  bool finite = false;
  Integer count = 0;

  static Cardinality of(Integer n) { return {true, std::move(n)}; }
  static Cardinality infinite() { return {}; }
  bool at_most(std::size_t n) const { return finite && count <= n; }
};

/// Size of `t` ignoring invariants. Recursive named types are infinite.
/// Type parameters resolve through `params`; unresolved ones are infinite.
Cardinality cardinality(const TypePtr& t, const SpecModule& m, const TypeParamMap& params = {});

inline constexpr std::size_t kCharAlphabet = 128;

struct Enumeration {
  std::vector<Value> values;
  bool exhausted = false;
  std::vector<std::string> diagnostics;
};

/// Every invariant-satisfying value of `t` in a deterministic order, when the
/// invariant-free cardinality is at most `limit`; otherwise nothing.
Enumeration enumerate_all(const TypePtr& t, std::size_t limit, Context& ctx);

/// Deterministic sample of at most `size` values: numbers centred on zero,
/// compounds built from small constituents first, invariant-filtered.
std::vector<Value> fixed_values(const TypePtr& t, std::size_t size, Context& ctx);

/// True when `fixed_values(t, size)` is provably every value of `t`.
bool fixed_values_complete(const TypePtr& t, std::size_t size, Context& ctx);

/// One pseudo-random value; `ordinal` (1-based) widens the integer range to
/// [-10k, 10k]. Gives up after 100 invariant rejections.
std::optional<Value> random_value(const TypePtr& t, std::mt19937_64& rng, std::size_t ordinal, Context& ctx);

}  // namespace specqc
