#include "specqc/ast.hpp"

#include <algorithm>
#include <sstream>

namespace specqc {

std::string_view SourceFile::line(int n) const {
  if (n < 1 || n > static_cast<int>(lines.size())) return {};
  return lines[n - 1];
}

std::string format_diagnostic(const Diagnostic& d) {
  std::ostringstream os;
  os << d.message << " in " << d.location.file_name() << " at line " << d.location.line << ":"
     << d.location.column;
  return os.str();
}

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

namespace types {

namespace {
TypePtr make(TypeKind k, std::string name = {}, std::vector<TypePtr> args = {}) {
  auto t = std::make_shared<TypeExpr>();
  t->kind = k;
  t->name = std::move(name);
  t->args = std::move(args);
  return t;
}
}  // namespace

TypePtr basic(TypeKind k) {
  switch (k) {
    case TypeKind::Bool: return boolean();
    case TypeKind::Nat: return nat();
    case TypeKind::Nat1: return nat1();
    case TypeKind::Int: return integer();
    case TypeKind::Real: return real();
    case TypeKind::Char: return character();
    default: return unknown();
  }
}

TypePtr boolean() {
  static const TypePtr t = make(TypeKind::Bool);
  return t;
}
TypePtr nat() {
  static const TypePtr t = make(TypeKind::Nat);
  return t;
}
TypePtr nat1() {
  static const TypePtr t = make(TypeKind::Nat1);
  return t;
}
TypePtr integer() {
  static const TypePtr t = make(TypeKind::Int);
  return t;
}
TypePtr real() {
  static const TypePtr t = make(TypeKind::Real);
  return t;
}
TypePtr character() {
  static const TypePtr t = make(TypeKind::Char);
  return t;
}
TypePtr unknown() {
  static const TypePtr t = make(TypeKind::Unknown);
  return t;
}
TypePtr quote(std::string tag) { return make(TypeKind::Quote, std::move(tag)); }
TypePtr seq_of(TypePtr elem) { return make(TypeKind::Seq, {}, {std::move(elem)}); }
TypePtr set_of(TypePtr elem) { return make(TypeKind::Set, {}, {std::move(elem)}); }
TypePtr map_of(TypePtr dom, TypePtr rng) { return make(TypeKind::Map, {}, {std::move(dom), std::move(rng)}); }
TypePtr product(std::vector<TypePtr> members) { return make(TypeKind::Product, {}, std::move(members)); }
TypePtr optional(TypePtr inner) { return make(TypeKind::Optional, {}, {std::move(inner)}); }
TypePtr union_of(std::vector<TypePtr> members) { return make(TypeKind::Union, {}, std::move(members)); }
TypePtr named(std::string name) { return make(TypeKind::Named, std::move(name)); }
TypePtr param(std::string name) { return make(TypeKind::TypeParam, std::move(name)); }
TypePtr record(std::string name, std::vector<Field> fields) {
  auto t = std::make_shared<TypeExpr>();
  t->kind = TypeKind::Record;
  t->name = std::move(name);
  t->fields = std::move(fields);
  return t;
}

}  // namespace types

bool type_equal(const TypeExpr& a, const TypeExpr& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind || a.name != b.name || a.args.size() != b.args.size() ||
      a.fields.size() != b.fields.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!type_equal(*a.args[i], *b.args[i])) return false;
  }
  for (std::size_t i = 0; i < a.fields.size(); ++i) {
    if (a.fields[i].name != b.fields[i].name || !type_equal(*a.fields[i].type, *b.fields[i].type)) return false;
  }
  return true;
}

bool is_numeric(const TypeExpr& t) {
  switch (t.kind) {
    case TypeKind::Nat:
    case TypeKind::Nat1:
    case TypeKind::Int:
    case TypeKind::Real:
      return true;
    default:
      return false;
  }
}

bool mentions_type_param(const TypeExpr& t) {
  if (t.kind == TypeKind::TypeParam) return true;
  for (const auto& a : t.args) {
    if (mentions_type_param(*a)) return true;
  }
  for (const auto& f : t.fields) {
    if (mentions_type_param(*f.type)) return true;
  }
  return false;
}

TypePtr substitute(const TypePtr& t, const TypeParamMap& params) {
  if (params.empty() || !mentions_type_param(*t)) return t;
  if (t->kind == TypeKind::TypeParam) {
    auto it = params.find(t->name);
    return it == params.end() ? t : it->second;
  }
  auto copy = std::make_shared<TypeExpr>(*t);
  for (auto& a : copy->args) a = substitute(a, params);
  for (auto& f : copy->fields) f.type = substitute(f.type, params);
  return copy;
}

namespace {

void render_type_to(std::ostream& os, const TypeExpr& t, TypeStyle style);

bool needs_parens_as_element(const TypeExpr& t) {
  switch (t.kind) {
    case TypeKind::Product:
    case TypeKind::Union:
    case TypeKind::Map:
    case TypeKind::TypeParam:
      return true;
    default:
      return false;
  }
}

void render_element(std::ostream& os, const TypeExpr& t, TypeStyle style) {
  if (style == TypeStyle::Resolved || needs_parens_as_element(t)) {
    os << '(';
    render_type_to(os, t, style);
    os << ')';
  } else {
    render_type_to(os, t, style);
  }
}

void render_member(std::ostream& os, const TypeExpr& t, TypeStyle style, bool in_product) {
  const bool parens = t.kind == TypeKind::Union || t.kind == TypeKind::Map ||
                      (in_product && t.kind == TypeKind::Product);
  if (parens) os << '(';
  render_type_to(os, t, style);
  if (parens) os << ')';
}

void render_type_to(std::ostream& os, const TypeExpr& t, TypeStyle style) {
  switch (t.kind) {
    case TypeKind::Bool: os << "bool"; break;
    case TypeKind::Nat: os << "nat"; break;
    case TypeKind::Nat1: os << "nat1"; break;
    case TypeKind::Int: os << "int"; break;
    case TypeKind::Real: os << "real"; break;
    case TypeKind::Char: os << "char"; break;
    case TypeKind::Unknown: os << "?"; break;
    case TypeKind::Quote: os << '<' << t.name << '>'; break;
    case TypeKind::Named:
    case TypeKind::Record: os << t.name; break;
    case TypeKind::TypeParam: os << '@' << t.name; break;
    case TypeKind::Seq:
      os << "seq of ";
      render_element(os, *t.args[0], style);
      break;
    case TypeKind::Set:
      os << "set of ";
      render_element(os, *t.args[0], style);
      break;
    case TypeKind::Map:
      os << "map ";
      render_element(os, *t.args[0], style);
      os << " to ";
      render_element(os, *t.args[1], style);
      break;
    case TypeKind::Optional:
      os << '[';
      render_type_to(os, *t.args[0], style);
      os << ']';
      break;
    case TypeKind::Product:
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i > 0) os << " * ";
        render_member(os, *t.args[i], style, true);
      }
      break;
    case TypeKind::Union:
      for (std::size_t i = 0; i < t.args.size(); ++i) {
        if (i > 0) os << " | ";
        render_member(os, *t.args[i], style, false);
      }
      break;
  }
}

}  // namespace

std::string render_type(const TypeExpr& t, TypeStyle style) {
  std::ostringstream os;
  render_type_to(os, t, style);
  return os.str();
}

// ---------------------------------------------------------------------------
// Patterns
// ---------------------------------------------------------------------------

namespace {
void collect_pattern_variables(const Pattern& p, std::vector<std::string>& out) {
  if (p.kind == PatternKind::Identifier) out.push_back(p.name);
  for (const auto& item : p.items) collect_pattern_variables(item, out);
}
}  // namespace

std::vector<std::string> pattern_variables(const Pattern& p) {
  std::vector<std::string> out;
  collect_pattern_variables(p, out);
  return out;
}

std::string render_pattern(const Pattern& p) {
  auto items = [&p] {
    std::string s;
    for (std::size_t i = 0; i < p.items.size(); ++i) {
      if (i > 0) s += ", ";
      s += render_pattern(p.items[i]);
    }
    return s;
  };
  switch (p.kind) {
    case PatternKind::Identifier: return p.name;
    case PatternKind::DontCare: return "-";
    case PatternKind::Literal: return p.literal.to_string();
    case PatternKind::Tuple: return "mk_(" + items() + ")";
    case PatternKind::Record: return "mk_" + p.name + "(" + items() + ")";
    case PatternKind::SeqEnum: return "[" + items() + "]";
  }
  return "?";
}

bool pattern_equal(const Pattern& a, const Pattern& b) {
  if (a.kind != b.kind || a.name != b.name || a.items.size() != b.items.size()) return false;
  if (a.kind == PatternKind::Literal && a.literal != b.literal) return false;
  for (std::size_t i = 0; i < a.items.size(); ++i) {
    if (!pattern_equal(a.items[i], b.items[i])) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

std::string_view op_text(Op op) {
  switch (op) {
    case Op::None: return "";
    case Op::Not: return "not";
    case Op::Neg: return "-";
    case Op::Pos: return "+";
    case Op::Abs: return "abs";
    case Op::Floor: return "floor";
    case Op::Hd: return "hd";
    case Op::Tl: return "tl";
    case Op::Len: return "len";
    case Op::Elems: return "elems";
    case Op::Inds: return "inds";
    case Op::Card: return "card";
    case Op::Dom: return "dom";
    case Op::Rng: return "rng";
    case Op::Power: return "power";
    case Op::Dunion: return "dunion";
    case Op::Dinter: return "dinter";
    case Op::Conc: return "conc";
    case Op::Plus: return "+";
    case Op::Minus: return "-";
    case Op::Times: return "*";
    case Op::Divide: return "/";
    case Op::Div: return "div";
    case Op::Mod: return "mod";
    case Op::Rem: return "rem";
    case Op::Equal: return "=";
    case Op::NotEqual: return "<>";
    case Op::Less: return "<";
    case Op::LessEq: return "<=";
    case Op::Greater: return ">";
    case Op::GreaterEq: return ">=";
    case Op::And: return "and";
    case Op::Or: return "or";
    case Op::Implies: return "=>";
    case Op::Equiv: return "<=>";
    case Op::InSet: return "in set";
    case Op::NotInSet: return "not in set";
    case Op::Subset: return "subset";
    case Op::PSubset: return "psubset";
    case Op::Union: return "union";
    case Op::Inter: return "inter";
    case Op::Difference: return "\\";
    case Op::Concat: return "^";
    case Op::Override: return "++";
    case Op::Munion: return "munion";
  }
  return "?";
}

std::string bind_key(const Pattern& p, const TypeExpr& t) { return render_pattern(p) + ":" + render_type(t); }

Bind make_type_bind(Pattern p, TypePtr t) {
  Bind b;
  b.key = bind_key(p, *t);
  b.pattern = std::move(p);
  b.type = std::move(t);
  return b;
}

namespace exprs {

ExprPtr literal(Value v, Location loc) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Literal;
  e->literal = std::move(v);
  e->location = std::move(loc);
  return e;
}

ExprPtr var(std::string name, Location loc) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Var;
  e->name = std::move(name);
  e->location = std::move(loc);
  return e;
}

ExprPtr unary(Op op, ExprPtr arg, Location loc) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Unary;
  e->op = op;
  e->args = {std::move(arg)};
  e->location = std::move(loc);
  return e;
}

ExprPtr binary(Op op, ExprPtr l, ExprPtr r, Location loc) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Binary;
  e->op = op;
  e->args = {std::move(l), std::move(r)};
  e->location = std::move(loc);
  return e;
}

}  // namespace exprs

namespace {

bool ptr_expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return expr_equal(*a, *b);
}

bool ptr_type_equal(const TypePtr& a, const TypePtr& b) {
  if (!a || !b) return !a && !b;
  return type_equal(*a, *b);
}

}  // namespace

bool expr_equal(const Expr& a, const Expr& b) {
  if (&a == &b) return true;
  if (a.kind != b.kind || a.op != b.op || a.name != b.name || a.index != b.index) return false;
  if (a.kind == ExprKind::Literal && a.literal != b.literal) return false;
  if (a.args.size() != b.args.size() || a.binds.size() != b.binds.size() || a.defs.size() != b.defs.size() ||
      a.alts.size() != b.alts.size() || a.type_args.size() != b.type_args.size())
    return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!ptr_expr_equal(a.args[i], b.args[i])) return false;
  }
  for (std::size_t i = 0; i < a.binds.size(); ++i) {
    const auto& x = a.binds[i];
    const auto& y = b.binds[i];
    if (!pattern_equal(x.pattern, y.pattern) || !ptr_type_equal(x.type, y.type) || !ptr_expr_equal(x.set, y.set))
      return false;
  }
  for (std::size_t i = 0; i < a.defs.size(); ++i) {
    const auto& x = a.defs[i];
    const auto& y = b.defs[i];
    if (!pattern_equal(x.pattern, y.pattern) || !ptr_type_equal(x.type, y.type) || !ptr_expr_equal(x.value, y.value))
      return false;
  }
  for (std::size_t i = 0; i < a.alts.size(); ++i) {
    const auto& x = a.alts[i];
    const auto& y = b.alts[i];
    if (x.patterns.size() != y.patterns.size() || !ptr_expr_equal(x.body, y.body)) return false;
    for (std::size_t j = 0; j < x.patterns.size(); ++j) {
      if (!pattern_equal(x.patterns[j], y.patterns[j])) return false;
    }
  }
  for (std::size_t i = 0; i < a.type_args.size(); ++i) {
    if (!type_equal(*a.type_args[i], *b.type_args[i])) return false;
  }
  return ptr_expr_equal(a.others, b.others) && ptr_type_equal(a.type, b.type);
}

void for_each_child(const Expr& e, const std::function<void(const Expr&)>& f) {
  for (const auto& b : e.binds) {
    if (b.set) f(*b.set);
  }
  for (const auto& d : e.defs) f(*d.value);
  for (const auto& a : e.args) {
    if (a) f(*a);
  }
  for (const auto& alt : e.alts) f(*alt.body);
  if (e.others) f(*e.others);
}

// ---------------------------------------------------------------------------
// Module
// ---------------------------------------------------------------------------

const TypeDef* SpecModule::find_type(std::string_view n) const {
  for (const auto& t : type_defs) {
    if (t.name == n) return &t;
  }
  return nullptr;
}

const FunctionDef* SpecModule::find_function(std::string_view n) const {
  for (const auto& f : function_defs) {
    if (f.name == n) return &f;
  }
  return nullptr;
}

const ValueDef* SpecModule::find_value(std::string_view n) const {
  for (const auto& v : value_defs) {
    if (v.name == n) return &v;
  }
  return nullptr;
}

}  // namespace specqc
