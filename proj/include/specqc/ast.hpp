#pragma once

// Abstract syntax for the specification language: types, patterns,
// expressions and definitions, plus the module that owns them.

#include "specqc/value.hpp"

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace specqc {

struct SourceFile {
  std::string name;
  std::vector<std::string> lines;

  /// 1-based; empty when out of range.
  std::string_view line(int n) const;
};

struct Location {
  std::shared_ptr<const SourceFile> file;
  int line = 0;
  int column = 0;

  std::string file_name() const { return file ? file->name : std::string("?"); }
};

struct Diagnostic {
  Location location;
  std::string message;
};

/// `<message> in <file> at line <l>:<c>`
std::string format_diagnostic(const Diagnostic& d);

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

enum class TypeKind {
  Bool,
  Nat,
  Nat1,
  Int,
  Real,
  Char,
  Quote,
  Seq,
  Set,
  Map,
  Product,
  Optional,
  Union,
  Named,
  TypeParam,
  Record,   // body of a `Name :: fields` definition
  Unknown,  // internal: element type of [] / {}, type of nil, error recovery
};

struct TypeExpr;
using TypePtr = std::shared_ptr<const TypeExpr>;

struct Field {
  std::string name;
  TypePtr type;
};

struct TypeExpr {
  TypeKind kind = TypeKind::Unknown;
  /// Quote tag, Named/Record name, or TypeParam name without the `@`.
  std::string name;
  /// Seq/Set/Optional: {elem}; Map: {dom, rng}; Product/Union: members.
  std::vector<TypePtr> args;
  std::vector<Field> fields;  // Record only
};

namespace types {
TypePtr basic(TypeKind k);
TypePtr boolean();
TypePtr nat();
TypePtr nat1();
TypePtr integer();
TypePtr real();
TypePtr character();
TypePtr unknown();
TypePtr quote(std::string tag);
TypePtr seq_of(TypePtr elem);
TypePtr set_of(TypePtr elem);
TypePtr map_of(TypePtr dom, TypePtr rng);
TypePtr product(std::vector<TypePtr> members);
TypePtr optional(TypePtr inner);
TypePtr union_of(std::vector<TypePtr> members);
TypePtr named(std::string name);
TypePtr param(std::string name);
TypePtr record(std::string name, std::vector<Field> fields);
}  // namespace types

bool type_equal(const TypeExpr& a, const TypeExpr& b);
inline bool type_equal(const TypePtr& a, const TypePtr& b) { return type_equal(*a, *b); }

bool is_numeric(const TypeExpr& t);
bool mentions_type_param(const TypeExpr& t);

using TypeParamMap = std::map<std::string, TypePtr>;

/// Replaces TypeParam nodes bound in `params`.
TypePtr substitute(const TypePtr& t, const TypeParamMap& params);

enum class TypeStyle {
  Source,   // `seq of nat`, `seq of (@T)`: parentheses only where needed
  Resolved  // `set of (nat)`: element types always parenthesised
};

std::string render_type(const TypeExpr& t, TypeStyle style = TypeStyle::Source);
inline std::string render_type(const TypePtr& t, TypeStyle style = TypeStyle::Source) {
  return render_type(*t, style);
}

// ---------------------------------------------------------------------------
// Patterns
// ---------------------------------------------------------------------------

enum class PatternKind { Identifier, DontCare, Literal, Tuple, Record, SeqEnum };

struct Pattern {
  PatternKind kind = PatternKind::DontCare;
  std::string name;  // identifier or record name
  Value literal;
  std::vector<Pattern> items;
  Location location;

  bool irrefutable() const { return kind == PatternKind::Identifier || kind == PatternKind::DontCare; }
};

/// Names bound by a pattern, left to right.
std::vector<std::string> pattern_variables(const Pattern& p);
std::string render_pattern(const Pattern& p);
bool pattern_equal(const Pattern& a, const Pattern& b);

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

enum class ExprKind {
  Literal,
  Var,
  Unary,
  Binary,
  If,         // args = {c1, t1, c2, t2, ..., else}
  Cases,      // args = {scrutinee}; alts; others
  Let,        // defs; args = {body}
  LetBe,      // binds; args = {predicate or null, body}
  Forall,     // binds; args = {body}
  Exists,
  Exists1,
  Apply,      // args = {callee, arg...}
  FunInstance,// name; type_args: `f[nat]`
  SetEnum,
  SetRange,   // args = {lo, hi}
  SetComp,    // args = {elem, predicate or null}; binds
  SeqEnum,
  SeqComp,    // args = {elem, predicate or null}; binds (one set bind)
  MapEnum,    // args = {k1, v1, k2, v2, ...}
  MapComp,    // args = {key, value, predicate or null}; binds
  TupleCons,
  RecordCons, // name; args = fields
  FieldSelect,// args = {record}; name
  TupleSelect,// args = {tuple}; index (1-based)
  IsType,     // args = {value}; type
};

enum class Op {
  None,
  // unary
  Not,
  Neg,
  Pos,
  Abs,
  Floor,
  Hd,
  Tl,
  Len,
  Elems,
  Inds,
  Card,
  Dom,
  Rng,
  Power,
  Dunion,
  Dinter,
  Conc,
  // binary
  Plus,
  Minus,
  Times,
  Divide,
  Div,
  Mod,
  Rem,
  Equal,
  NotEqual,
  Less,
  LessEq,
  Greater,
  GreaterEq,
  And,
  Or,
  Implies,
  Equiv,
  InSet,
  NotInSet,
  Subset,
  PSubset,
  Union,
  Inter,
  Difference,
  Concat,
  Override,
  Munion,
};

std::string_view op_text(Op op);

/// How an Apply node is evaluated; resolved by the checker.
enum class ApplyKind { Unresolved, Function, PreCondition, PostCondition, Invariant, SeqIndex, MapLookup };

/// Where a variable reference resolves; set by the checker.
enum class VarScope { Unresolved, Local, ModuleValue, StateField };

struct Expr;
using ExprPtr = std::shared_ptr<Expr>;

struct Bind {
  Pattern pattern;
  TypePtr type;    // type bind
  ExprPtr set;     // set bind
  std::string key; // `<pattern>:<type>` for type binds

  bool is_type_bind() const { return type != nullptr; }
};

std::string bind_key(const Pattern& p, const TypeExpr& t);
Bind make_type_bind(Pattern p, TypePtr t);

struct LetDef {
  Pattern pattern;
  TypePtr type;  // optional
  ExprPtr value;
};

struct CaseAlt {
  std::vector<Pattern> patterns;
  ExprPtr body;
};

struct Expr {
  ExprKind kind = ExprKind::Literal;
  Location location;
  Op op = Op::None;
  std::string name;
  Value literal;
  std::vector<ExprPtr> args;
  std::vector<Bind> binds;
  std::vector<LetDef> defs;
  std::vector<CaseAlt> alts;
  ExprPtr others;
  TypePtr type;
  std::vector<TypePtr> type_args;
  int index = 0;
  /// Built by obligation generation rather than parsed; printed without the
  /// outer parentheses that parsed operator nodes get.
  bool synthetic = false;

  // Filled in by the checker.
  TypePtr static_type;
  ApplyKind apply = ApplyKind::Unresolved;
  VarScope scope = VarScope::Unresolved;
};

namespace exprs {
ExprPtr literal(Value v, Location loc = {});
ExprPtr var(std::string name, Location loc = {});
ExprPtr unary(Op op, ExprPtr e, Location loc = {});
ExprPtr binary(Op op, ExprPtr l, ExprPtr r, Location loc = {});
}  // namespace exprs

/// Structural equality ignoring locations, checker annotations and the
/// synthetic flag.
bool expr_equal(const Expr& a, const Expr& b);

/// Calls `f` on each direct subexpression: arguments, bind sets, let values,
/// case bodies and the others clause.
void for_each_child(const Expr& e, const std::function<void(const Expr&)>& f);

// ---------------------------------------------------------------------------
// Definitions
// ---------------------------------------------------------------------------

struct TypeDef {
  std::string name;
  TypePtr type;  // TypeKind::Record for `::` definitions
  std::optional<Pattern> inv_pattern;
  ExprPtr inv;
  Location location;
};

struct FunctionDef {
  std::string name;
  std::vector<std::string> type_params;  // without `@`
  std::vector<TypePtr> param_types;
  TypePtr return_type;
  bool total_arrow = false;  // declared with +>
  std::vector<Pattern> param_patterns;
  ExprPtr body;
  ExprPtr pre;
  ExprPtr post;
  Location location;
  Location body_location;
};

struct ValueDef {
  std::string name;
  TypePtr type;  // optional
  ExprPtr value;
  Location location;
};

/// The state record is also registered as a TypeDef of the same name.
struct StateDef {
  std::string name;
  std::vector<Field> fields;
  std::optional<Pattern> inv_pattern;
  ExprPtr inv;
  std::optional<Pattern> init_pattern;
  ExprPtr init;
  Location location;
};

struct QuickCheckAnnotation {
  std::string function_name;
  std::string param_name;  // without `@`
  std::vector<TypePtr> candidate_types;
  Location location;
};

enum class DefinitionKind { Type, Function, Value, State };

struct DefinitionRef {
  DefinitionKind kind;
  std::size_t index;
};

struct SpecModule {
  std::string name = "DEFAULT";
  std::vector<TypeDef> type_defs;
  std::vector<FunctionDef> function_defs;
  std::vector<ValueDef> value_defs;
  std::optional<StateDef> state;
  std::vector<QuickCheckAnnotation> annotations;
  /// Definitions in source order.
  std::vector<DefinitionRef> order;
  std::vector<std::shared_ptr<const SourceFile>> files;
  bool checked = false;

  const TypeDef* find_type(std::string_view n) const;
  const FunctionDef* find_function(std::string_view n) const;
  const ValueDef* find_value(std::string_view n) const;
};

}  // namespace specqc
