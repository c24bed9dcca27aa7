#pragma once

#include "specqc/ast.hpp"

#include <vector>

namespace specqc {

struct CheckResult {
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;

  bool ok() const { return errors.empty(); }
};

/// Resolves names, assigns static types and validates annotations, writing
/// the results into the module's expression nodes. Running it twice gives the
/// same annotations. Sets `m.checked` on success.
CheckResult check_module(SpecModule& m);

/// Checks a free-standing expression (console `print`, bind-file sets)
/// against a checked module. `locals` are extra variables in scope and
/// `type_params` the `@T` names that may appear in types.
std::vector<Diagnostic> check_expression(const ExprPtr& e, const SpecModule& m,
                                         const std::vector<std::pair<std::string, TypePtr>>& locals = {},
                                         const std::vector<std::string>& type_params = {});

/// Validates a type written outside the module (annotations, bind files).
std::vector<Diagnostic> check_type(const TypePtr& t, const SpecModule& m, const Location& where);

/// Follows Named references to a structural type. Records stay records.
/// Unknown names and cycles yield Unknown.
TypePtr expand_type(const TypePtr& t, const SpecModule& m);

/// Structural subtyping without invariants: nat1 <= nat <= int <= real,
/// covariant collections, union/optional widening. Unknown is a subtype of
/// everything.
bool is_subtype(const TypePtr& a, const TypePtr& b, const SpecModule& m);

/// True when some named type reachable in `t` carries an invariant.
bool has_invariant(const TypePtr& t, const SpecModule& m);

/// Name of `pre_f` / `post_f` / `inv_T` targets; empty when not that form.
std::string_view strip_prefix(std::string_view name, std::string_view prefix);

}  // namespace specqc
