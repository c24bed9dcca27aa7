#pragma once

// Proof obligation generation.

#include "specqc/ast.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace specqc {

enum class PoKind {
  SeqApply,
  MapApply,
  NonZero,
  NonEmptySeq,
  CasesExhaustive,
  Subtype,
  LetBeExists,
  PostCondition,
  StateInvariant,
};

/// "sequence apply", "non-zero", ...
std::string_view kind_name(PoKind k);

enum class Polarity { Universal, Existential };

struct ProofObligation {
  int number = 0;
  PoKind kind = PoKind::SeqApply;
  std::string owner;
  Location location;
  ExprPtr expr;
  Polarity polarity = Polarity::Universal;
  bool executable = true;
  std::vector<std::string> type_params;

  /// Owning function, or null for state obligations.
  const FunctionDef* function = nullptr;
  /// The expression that triggered the obligation (cases, body, ...).
  const Expr* source = nullptr;
  /// Body is guarded by `pre_f(...) =>`.
  bool pre_guarded = false;
};

/// Obligations for every function of a checked module, plus the state
/// invariant, numbered from 1 in definition order.
std::vector<ProofObligation> generate_pos(const SpecModule& m);

/// Locator line and expression, as shown after a FAILED result.
std::string render_po_body(const ProofObligation& po);

/// `Proof Obligation <n>: (Unproved)` followed by render_po_body.
std::string render_po(const ProofObligation& po);

/// `Generated <n> proof obligation(s):` and each obligation, blank-line separated.
std::string render_pog(const std::vector<ProofObligation>& pos);

/// True when `e` reads a state field.
bool reads_state(const Expr& e);

}  // namespace specqc
