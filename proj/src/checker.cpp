#include "specqc/checker.hpp"

#include "specqc/printer.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>

namespace specqc {

std::string_view strip_prefix(std::string_view name, std::string_view prefix) {
  if (name.size() > prefix.size() && name.substr(0, prefix.size()) == prefix) return name.substr(prefix.size());
  return {};
}

TypePtr expand_type(const TypePtr& t, const SpecModule& m) {
  TypePtr cur = t;
  for (int guard = 0; cur && cur->kind == TypeKind::Named; ++guard) {
    const TypeDef* def = m.find_type(cur->name);
    if (!def || guard > 64) return types::unknown();
    cur = def->type;
  }
  return cur;
}

namespace {

int numeric_rank(TypeKind k) {
  switch (k) {
    case TypeKind::Nat1: return 0;
    case TypeKind::Nat: return 1;
    case TypeKind::Int: return 2;
    case TypeKind::Real: return 3;
    default: return -1;
  }
}

TypePtr numeric_of_rank(int r) {
  static const TypeKind kinds[] = {TypeKind::Nat1, TypeKind::Nat, TypeKind::Int, TypeKind::Real};
  return types::basic(kinds[std::clamp(r, 0, 3)]);
}

bool is_unknown(const TypePtr& t) { return !t || t->kind == TypeKind::Unknown; }

bool has_invariant_impl(const TypePtr& t, const SpecModule& m, std::set<std::string>& seen) {
  if (!t) return false;
  if (t->kind == TypeKind::Named) {
    if (!seen.insert(t->name).second) return false;
    const TypeDef* def = m.find_type(t->name);
    if (!def) return false;
    if (def->inv) return true;
    return has_invariant_impl(def->type, m, seen);
  }
  for (const auto& a : t->args) {
    if (has_invariant_impl(a, m, seen)) return true;
  }
  for (const auto& f : t->fields) {
    if (has_invariant_impl(f.type, m, seen)) return true;
  }
  return false;
}

}  // namespace

bool has_invariant(const TypePtr& t, const SpecModule& m) {
  std::set<std::string> seen;
  return has_invariant_impl(t, m, seen);
}

bool is_subtype(const TypePtr& a, const TypePtr& b, const SpecModule& m) {
  if (is_unknown(a) || is_unknown(b)) return true;
  if (a->kind == TypeKind::Named && b->kind == TypeKind::Named && a->name == b->name) return true;
  const TypePtr x = a->kind == TypeKind::Named ? expand_type(a, m) : a;
  const TypePtr y = b->kind == TypeKind::Named ? expand_type(b, m) : b;
  if (is_unknown(x) || is_unknown(y)) return true;

  if (x->kind == TypeKind::Union) {
    return std::all_of(x->args.begin(), x->args.end(), [&](const TypePtr& t) { return is_subtype(t, y, m); });
  }
  if (y->kind == TypeKind::Union) {
    return std::any_of(y->args.begin(), y->args.end(), [&](const TypePtr& t) { return is_subtype(x, t, m); });
  }
  if (y->kind == TypeKind::Optional) {
    if (x->kind == TypeKind::Optional) return is_subtype(x->args[0], y->args[0], m);
    return is_subtype(x, y->args[0], m);
  }
  const int rx = numeric_rank(x->kind);
  const int ry = numeric_rank(y->kind);
  if (rx >= 0 || ry >= 0) return rx >= 0 && ry >= 0 && rx <= ry;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case TypeKind::Seq:
    case TypeKind::Set: return is_subtype(x->args[0], y->args[0], m);
    case TypeKind::Map: return is_subtype(x->args[0], y->args[0], m) && is_subtype(x->args[1], y->args[1], m);
    case TypeKind::Product:
      if (x->args.size() != y->args.size()) return false;
      for (std::size_t i = 0; i < x->args.size(); ++i) {
        if (!is_subtype(x->args[i], y->args[i], m)) return false;
      }
      return true;
    case TypeKind::Optional: return is_subtype(x->args[0], y->args[0], m);
    case TypeKind::Record:
    case TypeKind::Quote:
    case TypeKind::TypeParam: return x->name == y->name;
    default: return true;  // bool, char
  }
}

namespace {

/// Could a value inhabit both types? Used for argument and operand checks,
/// where narrowing is allowed (and becomes an obligation or runtime check).
bool compatible(const TypePtr& a, const TypePtr& b, const SpecModule& m) {
  const TypePtr x = expand_type(a, m);
  const TypePtr y = expand_type(b, m);
  if (is_unknown(x) || is_unknown(y)) return true;
  if (x->kind == TypeKind::TypeParam || y->kind == TypeKind::TypeParam) return true;
  if (x->kind == TypeKind::Union) {
    return std::any_of(x->args.begin(), x->args.end(), [&](const TypePtr& t) { return compatible(t, y, m); });
  }
  if (y->kind == TypeKind::Union) {
    return std::any_of(y->args.begin(), y->args.end(), [&](const TypePtr& t) { return compatible(x, t, m); });
  }
  if (x->kind == TypeKind::Optional || y->kind == TypeKind::Optional) {
    if (x->kind == TypeKind::Optional && y->kind == TypeKind::Optional) return true;  // both admit nil
    const TypePtr& inner = x->kind == TypeKind::Optional ? x->args[0] : y->args[0];
    const TypePtr& other = x->kind == TypeKind::Optional ? y : x;
    return compatible(inner, other, m);
  }
  if (numeric_rank(x->kind) >= 0 || numeric_rank(y->kind) >= 0) {
    return numeric_rank(x->kind) >= 0 && numeric_rank(y->kind) >= 0;
  }
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case TypeKind::Seq:
    case TypeKind::Set: return compatible(x->args[0], y->args[0], m);
    case TypeKind::Map: return compatible(x->args[0], y->args[0], m) && compatible(x->args[1], y->args[1], m);
    case TypeKind::Product:
      if (x->args.size() != y->args.size()) return false;
      for (std::size_t i = 0; i < x->args.size(); ++i) {
        if (!compatible(x->args[i], y->args[i], m)) return false;
      }
      return true;
    case TypeKind::Record:
    case TypeKind::Quote: return x->name == y->name;
    default: return true;
  }
}

TypePtr join(const TypePtr& a, const TypePtr& b, const SpecModule& m) {
  if (is_unknown(a)) return b;
  if (is_unknown(b)) return a;
  if (is_subtype(a, b, m)) return b;
  if (is_subtype(b, a, m)) return a;
  const TypePtr x = expand_type(a, m);
  const TypePtr y = expand_type(b, m);
  const int rx = numeric_rank(x->kind);
  const int ry = numeric_rank(y->kind);
  if (rx >= 0 && ry >= 0) return numeric_of_rank(std::max(rx, ry));
  if (x->kind == y->kind && (x->kind == TypeKind::Seq || x->kind == TypeKind::Set)) {
    auto elem = join(x->args[0], y->args[0], m);
    return x->kind == TypeKind::Seq ? types::seq_of(elem) : types::set_of(elem);
  }
  std::vector<TypePtr> members;
  auto add = [&](const TypePtr& t) {
    if (t->kind == TypeKind::Union) {
      for (const auto& u : t->args) members.push_back(u);
    } else {
      members.push_back(t);
    }
  };
  add(a);
  add(b);
  std::vector<TypePtr> unique;
  for (const auto& t : members) {
    if (std::none_of(unique.begin(), unique.end(), [&](const TypePtr& u) { return type_equal(t, u); })) {
      unique.push_back(t);
    }
  }
  return unique.size() == 1 ? unique[0] : types::union_of(std::move(unique));
}

TypePtr literal_type(const Value& v) {
  switch (v.kind()) {
    case Value::Kind::Nil: return types::optional(types::unknown());
    case Value::Kind::Bool: return types::boolean();
    case Value::Kind::Int:
      if (v.as_int() >= 1) return types::nat1();
      if (v.as_int() == 0) return types::nat();
      return types::integer();
    case Value::Kind::Real: return types::real();
    case Value::Kind::Char: return types::character();
    case Value::Kind::Quote: return types::quote(v.quote_tag());
    case Value::Kind::Seq: return types::seq_of(types::character());  // string literal
    default: return types::unknown();
  }
}

class Checker {
 public:
  Checker(const SpecModule& m, std::vector<Diagnostic>& errors) : m_(m), errors_(errors) {}

  void check_all(SpecModule& m) {
    for (auto& def : m.type_defs) {
      validate(def.type, def.location);
      if (def.inv) {
        Scope scope(*this);
        bind_pattern(*def.inv_pattern, def.type);
        expect_bool(def.inv);
      }
    }
    for (auto& def : m.value_defs) {
      if (def.type) validate(def.type, def.location);
      TypePtr t = check(def.value);
      if (def.type && !compatible(t, def.type, m_)) mismatch(def.value, def.type, t);
      value_types_[def.name] = def.type ? def.type : t;
    }
    for (auto& f : m.function_defs) check_function(f);
    if (m.state) {
      for (const auto& field : m.state->fields) validate(field.type, m.state->location);
      const TypePtr self = types::named(m.state->name);
      if (m.state->inv) {
        Scope scope(*this);
        bind_pattern(*m.state->inv_pattern, self);
        expect_bool(m.state->inv);
      }
      if (m.state->init) {
        Scope scope(*this);
        bind_pattern(*m.state->init_pattern, self);
        expect_bool(m.state->init);
      }
    }
    for (const auto& a : m.annotations) {
      for (const auto& t : a.candidate_types) validate(t, a.location);
      const FunctionDef* f = m.find_function(a.function_name);
      if (!f || std::find(f->type_params.begin(), f->type_params.end(), a.param_name) == f->type_params.end()) {
        error(a.location, "@QuickCheck annotation names @" + a.param_name + ", which is not a type parameter of " +
                              a.function_name);
      }
    }
  }

  void seed_values() {
    for (const auto& def : m_.value_defs) {
      value_types_[def.name] = def.type ? def.type : (def.value->static_type ? def.value->static_type : types::unknown());
    }
  }

  void set_type_params(std::vector<std::string> params) { type_params_ = std::move(params); }

  void push_local(std::string name, TypePtr t) { locals_.emplace_back(std::move(name), std::move(t)); }

  TypePtr check(const ExprPtr& e) {
    TypePtr t = infer(*e);
    e->static_type = t ? t : types::unknown();
    return e->static_type;
  }

  void validate(const TypePtr& t, const Location& where) {
    if (!t) return;
    switch (t->kind) {
      case TypeKind::Named:
        if (!m_.find_type(t->name)) error(where, "Unknown type '" + t->name + "'");
        break;
      case TypeKind::TypeParam:
        if (std::find(type_params_.begin(), type_params_.end(), t->name) == type_params_.end()) {
          error(where, "Unknown type parameter '@" + t->name + "'");
        }
        break;
      default:
        break;
    }
    for (const auto& a : t->args) validate(a, where);
    for (const auto& f : t->fields) validate(f.type, where);
  }

 private:
  struct Scope {
    explicit Scope(Checker& c) : c_(c), size_(c.locals_.size()) {}
    ~Scope() { c_.locals_.resize(size_); }
    Checker& c_;
    std::size_t size_;
  };

  void error(const Location& where, std::string message) { errors_.push_back(Diagnostic{where, std::move(message)}); }

  void mismatch(const ExprPtr& e, const TypePtr& expected, const TypePtr& found) {
    error(e->location, "Type mismatch: expected " + render_type(expected) + ", found " + render_type(found));
  }

  TypePtr expanded(const TypePtr& t) const { return expand_type(t, m_); }

  bool is_bool(const TypePtr& t) const {
    const TypePtr x = expanded(t);
    return is_unknown(x) || x->kind == TypeKind::Bool || x->kind == TypeKind::TypeParam;
  }

  bool is_num(const TypePtr& t) const {
    const TypePtr x = expanded(t);
    return is_unknown(x) || numeric_rank(x->kind) >= 0 || x->kind == TypeKind::TypeParam;
  }

  int rank(const TypePtr& t) const {
    const int r = numeric_rank(expanded(t)->kind);
    return r < 0 ? 3 : r;
  }

  void expect_bool(const ExprPtr& e) {
    const TypePtr t = check(e);
    if (!is_bool(t)) mismatch(e, types::boolean(), t);
  }

  TypePtr expect_num(const ExprPtr& e) {
    const TypePtr t = check(e);
    if (!is_num(t)) mismatch(e, types::real(), t);
    return t;
  }

  /// Element type when `t` is a `kind` collection (seq/set), else nullptr.
  TypePtr element(const TypePtr& t, TypeKind kind) const {
    const TypePtr x = expanded(t);
    if (is_unknown(x) || x->kind == TypeKind::TypeParam) return types::unknown();
    if (x->kind == kind) return x->args[0];
    if (x->kind == TypeKind::Union) {
      TypePtr out;
      for (const auto& u : x->args) {
        TypePtr e = element(u, kind);
        if (!e) return nullptr;
        out = out ? join(out, e, m_) : e;
      }
      return out;
    }
    return nullptr;
  }

  TypePtr expect_collection(const ExprPtr& e, TypeKind kind) {
    const TypePtr t = check(e);
    TypePtr elem = element(t, kind);
    if (!elem) {
      error(e->location, std::string("Expected a ") + (kind == TypeKind::Seq ? "sequence" : "set") + ", found " +
                             render_type(t));
      return types::unknown();
    }
    return elem;
  }

  /// {dom, rng} when `t` is a map.
  std::optional<std::pair<TypePtr, TypePtr>> map_parts(const TypePtr& t) const {
    const TypePtr x = expanded(t);
    if (is_unknown(x) || x->kind == TypeKind::TypeParam) return std::make_pair(types::unknown(), types::unknown());
    if (x->kind == TypeKind::Map) return std::make_pair(x->args[0], x->args[1]);
    return std::nullopt;
  }

  std::pair<TypePtr, TypePtr> expect_map(const ExprPtr& e) {
    const TypePtr t = check(e);
    auto parts = map_parts(t);
    if (!parts) {
      error(e->location, "Expected a map, found " + render_type(t));
      return {types::unknown(), types::unknown()};
    }
    return *parts;
  }

  void bind_pattern(const Pattern& p, const TypePtr& t) {
    switch (p.kind) {
      case PatternKind::Identifier: push_local(p.name, t); break;
      case PatternKind::DontCare: break;
      case PatternKind::Literal:
        if (!compatible(literal_type(p.literal), t, m_)) {
          error(p.location, "Pattern " + render_pattern(p) + " cannot match type " + render_type(t));
        }
        break;
      case PatternKind::Tuple: {
        const TypePtr x = expanded(t);
        const bool ok = is_unknown(x) || (x->kind == TypeKind::Product && x->args.size() == p.items.size());
        if (!ok) error(p.location, "Pattern " + render_pattern(p) + " cannot match type " + render_type(t));
        for (std::size_t i = 0; i < p.items.size(); ++i) {
          bind_pattern(p.items[i], ok && !is_unknown(x) ? x->args[i] : types::unknown());
        }
        break;
      }
      case PatternKind::Record: {
        const TypeDef* def = m_.find_type(p.name);
        if (!def || def->type->kind != TypeKind::Record || def->type->fields.size() != p.items.size()) {
          error(p.location, "Pattern " + render_pattern(p) + " does not name a record type of that arity");
          for (const auto& item : p.items) bind_pattern(item, types::unknown());
          break;
        }
        for (std::size_t i = 0; i < p.items.size(); ++i) bind_pattern(p.items[i], def->type->fields[i].type);
        break;
      }
      case PatternKind::SeqEnum: {
        TypePtr elem = element(t, TypeKind::Seq);
        if (!elem) {
          error(p.location, "Pattern " + render_pattern(p) + " cannot match type " + render_type(t));
          elem = types::unknown();
        }
        for (const auto& item : p.items) bind_pattern(item, elem);
        break;
      }
    }
  }

  /// Checks set expressions in the enclosing scope, then binds all patterns.
  void bind_all(std::vector<Bind>& binds, const Location& where) {
    std::vector<TypePtr> bound;
    for (auto& b : binds) {
      if (b.is_type_bind()) {
        validate(b.type, where);
        bound.push_back(b.type);
      } else {
        bound.push_back(expect_collection(b.set, TypeKind::Set));
      }
    }
    for (std::size_t i = 0; i < binds.size(); ++i) bind_pattern(binds[i].pattern, bound[i]);
  }

  const TypePtr* lookup_local(const std::string& name) const {
    for (auto it = locals_.rbegin(); it != locals_.rend(); ++it) {
      if (it->first == name) return &it->second;
    }
    return nullptr;
  }

  void check_function(FunctionDef& f) {
    type_params_ = f.type_params;
    for (const auto& t : f.param_types) validate(t, f.location);
    validate(f.return_type, f.location);
    Scope scope(*this);
    for (std::size_t i = 0; i < f.param_patterns.size() && i < f.param_types.size(); ++i) {
      bind_pattern(f.param_patterns[i], f.param_types[i]);
    }
    const TypePtr body = check(f.body);
    if (!compatible(body, f.return_type, m_)) {
      error(f.body_location, "Function '" + f.name + "' returns " + render_type(f.return_type) +
                                 " but its body has type " + render_type(body));
    }
    if (f.pre) expect_bool(f.pre);
    if (f.post) {
      Scope post_scope(*this);
      push_local("RESULT", f.return_type);
      expect_bool(f.post);
    }
    type_params_.clear();
  }

  TypePtr infer(Expr& e) {
    switch (e.kind) {
      case ExprKind::Literal: return literal_type(e.literal);
      case ExprKind::Var: return variable(e);
      case ExprKind::Unary: return unary(e);
      case ExprKind::Binary: return binary(e);
      case ExprKind::If: {
        TypePtr result;
        for (std::size_t i = 0; i + 1 < e.args.size(); i += 2) {
          expect_bool(e.args[i]);
          const TypePtr t = check(e.args[i + 1]);
          result = result ? join(result, t, m_) : t;
        }
        return join(result, check(e.args.back()), m_);
      }
      case ExprKind::Cases: {
        const TypePtr scrutinee = check(e.args[0]);
        TypePtr result;
        for (auto& alt : e.alts) {
          Scope scope(*this);
          for (const auto& p : alt.patterns) bind_pattern(p, scrutinee);
          const TypePtr t = check(alt.body);
          result = result ? join(result, t, m_) : t;
        }
        if (e.others) {
          const TypePtr t = check(e.others);
          result = result ? join(result, t, m_) : t;
        }
        return result ? result : types::unknown();
      }
      case ExprKind::Let: {
        Scope scope(*this);
        for (auto& def : e.defs) {
          const TypePtr t = check(def.value);
          if (def.type) {
            validate(def.type, def.pattern.location);
            if (!compatible(t, def.type, m_)) mismatch(def.value, def.type, t);
          }
          bind_pattern(def.pattern, def.type ? def.type : t);
        }
        return check(e.args[0]);
      }
      case ExprKind::LetBe: {
        Scope scope(*this);
        bind_all(e.binds, e.location);
        if (e.args[0]) expect_bool(e.args[0]);
        return check(e.args[1]);
      }
      case ExprKind::Forall:
      case ExprKind::Exists:
      case ExprKind::Exists1: {
        Scope scope(*this);
        bind_all(e.binds, e.location);
        expect_bool(e.args[0]);
        return types::boolean();
      }
      case ExprKind::Apply: return apply(e);
      case ExprKind::FunInstance:
        error(e.location, "Polymorphic function '" + e.name + "' must be applied");
        return types::unknown();
      case ExprKind::SetEnum: {
        TypePtr elem = types::unknown();
        for (const auto& a : e.args) elem = join(elem, check(a), m_);
        return types::set_of(elem);
      }
      case ExprKind::SetRange: {
        const TypePtr lo = expect_num(e.args[0]);
        expect_num(e.args[1]);
        return types::set_of(rank(lo) <= 1 ? types::nat() : types::integer());
      }
      case ExprKind::SetComp: {
        Scope scope(*this);
        bind_all(e.binds, e.location);
        const TypePtr elem = check(e.args[0]);
        if (e.args[1]) expect_bool(e.args[1]);
        return types::set_of(elem);
      }
      case ExprKind::SeqEnum: {
        TypePtr elem = types::unknown();
        for (const auto& a : e.args) elem = join(elem, check(a), m_);
        return types::seq_of(elem);
      }
      case ExprKind::SeqComp: {
        Scope scope(*this);
        bind_all(e.binds, e.location);
        const TypePtr elem = check(e.args[0]);
        if (e.args[1]) expect_bool(e.args[1]);
        return types::seq_of(elem);
      }
      case ExprKind::MapEnum: {
        TypePtr dom = types::unknown();
        TypePtr rng = types::unknown();
        for (std::size_t i = 0; i + 1 < e.args.size(); i += 2) {
          dom = join(dom, check(e.args[i]), m_);
          rng = join(rng, check(e.args[i + 1]), m_);
        }
        return types::map_of(dom, rng);
      }
      case ExprKind::MapComp: {
        Scope scope(*this);
        bind_all(e.binds, e.location);
        const TypePtr dom = check(e.args[0]);
        const TypePtr rng = check(e.args[1]);
        if (e.args[2]) expect_bool(e.args[2]);
        return types::map_of(dom, rng);
      }
      case ExprKind::TupleCons: {
        std::vector<TypePtr> parts;
        for (const auto& a : e.args) parts.push_back(check(a));
        return types::product(std::move(parts));
      }
      case ExprKind::RecordCons: {
        const TypeDef* def = m_.find_type(e.name);
        for (const auto& a : e.args) check(a);
        if (!def || def->type->kind != TypeKind::Record) {
          error(e.location, "Unknown record type '" + e.name + "'");
          return types::unknown();
        }
        const auto& fields = def->type->fields;
        if (fields.size() != e.args.size()) {
          error(e.location, "mk_" + e.name + " expects " + std::to_string(fields.size()) + " field(s), found " +
                                std::to_string(e.args.size()));
        } else {
          for (std::size_t i = 0; i < fields.size(); ++i) {
            if (!compatible(e.args[i]->static_type, fields[i].type, m_)) {
              mismatch(e.args[i], fields[i].type, e.args[i]->static_type);
            }
          }
        }
        return types::named(e.name);
      }
      case ExprKind::FieldSelect: {
        const TypePtr t = expanded(check(e.args[0]));
        if (is_unknown(t)) return types::unknown();
        if (t->kind == TypeKind::Record) {
          for (const auto& f : t->fields) {
            if (f.name == e.name) return f.type;
          }
        }
        error(e.location, "No field '" + e.name + "' in " + render_type(e.args[0]->static_type));
        return types::unknown();
      }
      case ExprKind::TupleSelect: {
        const TypePtr t = expanded(check(e.args[0]));
        if (is_unknown(t)) return types::unknown();
        if (t->kind == TypeKind::Product && e.index >= 1 && e.index <= static_cast<int>(t->args.size())) {
          return t->args[e.index - 1];
        }
        error(e.location, "Cannot select .#" + std::to_string(e.index) + " from " +
                              render_type(e.args[0]->static_type));
        return types::unknown();
      }
      case ExprKind::IsType:
        check(e.args[0]);
        validate(e.type, e.location);
        return types::boolean();
    }
    return types::unknown();
  }

  TypePtr variable(Expr& e) {
    if (const TypePtr* t = lookup_local(e.name)) {
      e.scope = VarScope::Local;
      return *t;
    }
    if (auto it = value_types_.find(e.name); it != value_types_.end()) {
      e.scope = VarScope::ModuleValue;
      return it->second;
    }
    if (m_.state) {
      for (const auto& f : m_.state->fields) {
        if (f.name == e.name) {
          e.scope = VarScope::StateField;
          return f.type;
        }
      }
    }
    if (m_.find_function(e.name)) {
      error(e.location, "Function '" + e.name + "' must be applied");
    } else {
      error(e.location, "Unknown identifier '" + e.name + "'");
    }
    return types::unknown();
  }

  TypePtr unary(Expr& e) {
    const ExprPtr& a = e.args[0];
    switch (e.op) {
      case Op::Not: expect_bool(a); return types::boolean();
      case Op::Neg: return numeric_of_rank(std::max(rank(expect_num(a)), 2));
      case Op::Pos: return expect_num(a);
      case Op::Abs: {
        const int r = rank(expect_num(a));
        return numeric_of_rank(r == 2 ? 1 : r);
      }
      case Op::Floor: return numeric_of_rank(std::min(rank(expect_num(a)), 2));
      case Op::Card: expect_collection(a, TypeKind::Set); return types::nat();
      case Op::Len: expect_collection(a, TypeKind::Seq); return types::nat();
      case Op::Hd: return expect_collection(a, TypeKind::Seq);
      case Op::Tl: return types::seq_of(expect_collection(a, TypeKind::Seq));
      case Op::Elems: return types::set_of(expect_collection(a, TypeKind::Seq));
      case Op::Inds: expect_collection(a, TypeKind::Seq); return types::set_of(types::nat1());
      case Op::Dom: return types::set_of(expect_map(a).first);
      case Op::Rng: return types::set_of(expect_map(a).second);
      case Op::Power: return types::set_of(types::set_of(expect_collection(a, TypeKind::Set)));
      case Op::Dunion:
      case Op::Dinter: {
        const TypePtr inner = expect_collection(a, TypeKind::Set);
        TypePtr elem = element(inner, TypeKind::Set);
        if (!elem) {
          error(a->location, "Expected a set of sets, found " + render_type(a->static_type));
          elem = types::unknown();
        }
        return types::set_of(elem);
      }
      case Op::Conc: {
        const TypePtr inner = expect_collection(a, TypeKind::Seq);
        TypePtr elem = element(inner, TypeKind::Seq);
        if (!elem) {
          error(a->location, "Expected a sequence of sequences, found " + render_type(a->static_type));
          elem = types::unknown();
        }
        return types::seq_of(elem);
      }
      default: return types::unknown();
    }
  }

  TypePtr binary(Expr& e) {
    const ExprPtr& l = e.args[0];
    const ExprPtr& r = e.args[1];
    switch (e.op) {
      case Op::And:
      case Op::Or:
      case Op::Implies:
      case Op::Equiv:
        expect_bool(l);
        expect_bool(r);
        return types::boolean();
      case Op::Plus:
      case Op::Times: {
        const int a = rank(expect_num(l));
        const int b = rank(expect_num(r));
        int result = std::max(a, b);
        if (e.op == Op::Plus && result == 1 && std::min(a, b) == 0) result = 0;
        return numeric_of_rank(result);
      }
      case Op::Minus: return numeric_of_rank(std::max({rank(expect_num(l)), rank(expect_num(r)), 2}));
      case Op::Divide: expect_num(l); expect_num(r); return types::real();
      case Op::Div:
      case Op::Mod:
      case Op::Rem: {
        const int a = rank(expect_num(l));
        const int b = rank(expect_num(r));
        if (e.op == Op::Rem) return numeric_of_rank(a <= 1 ? 1 : 2);
        if (e.op == Op::Mod) return numeric_of_rank(b <= 1 ? 1 : 2);
        return numeric_of_rank(std::max(a, b) <= 1 ? 1 : 2);
      }
      case Op::Less:
      case Op::LessEq:
      case Op::Greater:
      case Op::GreaterEq:
        expect_num(l);
        expect_num(r);
        return types::boolean();
      case Op::Equal:
      case Op::NotEqual: {
        const TypePtr a = check(l);
        const TypePtr b = check(r);
        if (!compatible(a, b, m_)) {
          error(e.location, "Cannot compare " + render_type(a) + " with " + render_type(b));
        }
        return types::boolean();
      }
      case Op::InSet:
      case Op::NotInSet: {
        const TypePtr a = check(l);
        const TypePtr elem = expect_collection(r, TypeKind::Set);
        if (!compatible(a, elem, m_)) error(e.location, "Cannot test " + render_type(a) + " for membership in " + render_type(r->static_type));
        return types::boolean();
      }
      case Op::Subset:
      case Op::PSubset:
        expect_collection(l, TypeKind::Set);
        expect_collection(r, TypeKind::Set);
        return types::boolean();
      case Op::Union:
      case Op::Inter:
      case Op::Difference: {
        const TypePtr a = expect_collection(l, TypeKind::Set);
        const TypePtr b = expect_collection(r, TypeKind::Set);
        return types::set_of(e.op == Op::Difference ? a : join(a, b, m_));
      }
      case Op::Concat: {
        const TypePtr a = expect_collection(l, TypeKind::Seq);
        const TypePtr b = expect_collection(r, TypeKind::Seq);
        return types::seq_of(join(a, b, m_));
      }
      case Op::Override: {
        const TypePtr left = check(l);
        if (auto elem = element(left, TypeKind::Seq); elem && !is_unknown(expanded(left))) {
          auto [dom, rng] = expect_map(r);
          return types::seq_of(join(elem, rng, m_));
        }
        auto lp = map_parts(left);
        if (!lp) {
          error(l->location, "Expected a map or sequence, found " + render_type(left));
          check(r);
          return types::unknown();
        }
        auto [dom, rng] = expect_map(r);
        return types::map_of(join(lp->first, dom, m_), join(lp->second, rng, m_));
      }
      case Op::Munion: {
        auto [d1, r1] = expect_map(l);
        auto [d2, r2] = expect_map(r);
        return types::map_of(join(d1, d2, m_), join(r1, r2, m_));
      }
      default: return types::unknown();
    }
  }

  TypePtr apply(Expr& e) {
    const ExprPtr& callee = e.args[0];
    const std::size_t argc = e.args.size() - 1;
    auto check_args = [&](const std::vector<TypePtr>& params, const TypeParamMap& subst, const std::string& what) {
      if (params.size() != argc) {
        error(e.location, what + " expects " + std::to_string(params.size()) + " argument(s), found " +
                              std::to_string(argc));
      }
      for (std::size_t i = 1; i < e.args.size(); ++i) {
        const TypePtr t = check(e.args[i]);
        if (i - 1 < params.size()) {
          const TypePtr p = substitute(params[i - 1], subst);
          if (!compatible(t, p, m_)) mismatch(e.args[i], p, t);
        }
      }
    };

    if (callee->kind == ExprKind::FunInstance) {
      const FunctionDef* f = m_.find_function(callee->name);
      if (!f) {
        error(callee->location, "Unknown function '" + callee->name + "'");
        for (std::size_t i = 1; i < e.args.size(); ++i) check(e.args[i]);
        return types::unknown();
      }
      if (callee->type_args.size() != f->type_params.size()) {
        error(callee->location, "Function '" + f->name + "' takes " + std::to_string(f->type_params.size()) +
                                    " type parameter(s)");
      }
      TypeParamMap subst;
      for (std::size_t i = 0; i < callee->type_args.size() && i < f->type_params.size(); ++i) {
        validate(callee->type_args[i], callee->location);
        subst[f->type_params[i]] = callee->type_args[i];
      }
      callee->static_type = types::unknown();
      e.apply = ApplyKind::Function;
      e.name = f->name;
      check_args(f->param_types, subst, "Function '" + f->name + "'");
      return substitute(f->return_type, subst);
    }

    if (callee->kind == ExprKind::Var && !lookup_local(callee->name) && !value_types_.count(callee->name)) {
      const std::string& name = callee->name;
      callee->static_type = types::unknown();
      if (const FunctionDef* f = m_.find_function(name)) {
        e.apply = ApplyKind::Function;
        e.name = f->name;
        TypeParamMap subst;
        for (const auto& p : f->type_params) subst[p] = types::unknown();
        check_args(f->param_types, subst, "Function '" + f->name + "'");
        return substitute(f->return_type, subst);
      }
      if (auto target = strip_prefix(name, "pre_"); !target.empty()) {
        if (const FunctionDef* f = m_.find_function(target)) {
          e.apply = ApplyKind::PreCondition;
          e.name = f->name;
          check_args(f->param_types, unknown_params(*f), "'" + name + "'");
          return types::boolean();
        }
      }
      if (auto target = strip_prefix(name, "post_"); !target.empty()) {
        if (const FunctionDef* f = m_.find_function(target)) {
          e.apply = ApplyKind::PostCondition;
          e.name = f->name;
          auto params = f->param_types;
          params.push_back(f->return_type);
          check_args(params, unknown_params(*f), "'" + name + "'");
          return types::boolean();
        }
      }
      if (auto target = strip_prefix(name, "inv_"); !target.empty()) {
        if (const TypeDef* t = m_.find_type(target)) {
          e.apply = ApplyKind::Invariant;
          e.name = t->name;
          check_args({t->type}, {}, "'" + name + "'");
          return types::boolean();
        }
      }
    }

    const TypePtr t = check(callee);
    if (argc != 1) {
      for (std::size_t i = 1; i < e.args.size(); ++i) check(e.args[i]);
      if (!is_unknown(expanded(t))) error(e.location, "Expression of type " + render_type(t) + " is not applicable");
      return types::unknown();
    }
    if (TypePtr elem = element(t, TypeKind::Seq); elem && !is_unknown(expanded(t))) {
      e.apply = ApplyKind::SeqIndex;
      expect_num(e.args[1]);
      return elem;
    }
    if (auto parts = map_parts(t); parts && !is_unknown(expanded(t))) {
      e.apply = ApplyKind::MapLookup;
      const TypePtr k = check(e.args[1]);
      if (!compatible(k, parts->first, m_)) mismatch(e.args[1], parts->first, k);
      return parts->second;
    }
    check(e.args[1]);
    if (!is_unknown(expanded(t))) error(e.location, "Expression of type " + render_type(t) + " is not applicable");
    return types::unknown();
  }

  static TypeParamMap unknown_params(const FunctionDef& f) {
    TypeParamMap subst;
    for (const auto& p : f.type_params) subst[p] = types::unknown();
    return subst;
  }

  const SpecModule& m_;
  std::vector<Diagnostic>& errors_;
  std::vector<std::pair<std::string, TypePtr>> locals_;
  std::vector<std::string> type_params_;
  std::unordered_map<std::string, TypePtr> value_types_;
};

}  // namespace

CheckResult check_module(SpecModule& m) {
  CheckResult result;
  Checker checker(m, result.errors);
  checker.check_all(m);
  m.checked = result.ok();
  return result;
}

std::vector<Diagnostic> check_expression(const ExprPtr& e, const SpecModule& m,
                                         const std::vector<std::pair<std::string, TypePtr>>& locals,
                                         const std::vector<std::string>& type_params) {
  std::vector<Diagnostic> errors;
  Checker checker(m, errors);
  checker.seed_values();
  checker.set_type_params(type_params);
  for (const auto& [name, type] : locals) checker.push_local(name, type);
  checker.check(e);
  return errors;
}

std::vector<Diagnostic> check_type(const TypePtr& t, const SpecModule& m, const Location& where) {
  std::vector<Diagnostic> errors;
  Checker checker(m, errors);
  checker.validate(t, where);
  return errors;
}

}  // namespace specqc
