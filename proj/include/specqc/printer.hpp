#pragma once

#include "specqc/ast.hpp"

#include <string>

namespace specqc {

/// Parsed operator nodes print fully parenthesised, `(a + b)`, so printing and
/// re-parsing is the identity on the AST. Synthetic nodes print without their
/// own parentheses, adding them only where precedence requires.
std::string render_expr(const Expr& e);
inline std::string render_expr(const ExprPtr& e) { return render_expr(*e); }

/// `x:nat` or `x in set s`.
std::string render_bind(const Bind& b);
std::string render_binds(const std::vector<Bind>& binds);

/// Pretty-prints a whole module in the surface syntax.
std::string render_module(const SpecModule& m);

}  // namespace specqc
