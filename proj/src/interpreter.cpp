#include "specqc/interpreter.hpp"

#include "specqc/generators.hpp"
#include "specqc/printer.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace specqc {

bool RuntimeError::uncertain() const {
  return code == errc::kInfiniteBind || code == errc::kNoState || code == errc::kRecursion || code == errc::kTooLarge;
}

std::string RuntimeError::format() const {
  std::string out = "Error " + std::to_string(code) + ": " + format_diagnostic(Diagnostic{location, message});
  if (location.file) {
    const auto text = location.file->line(location.line);
    if (!text.empty()) out += "\n" + std::to_string(location.line) + ":  " + std::string(text);
  }
  return out;
}

namespace {

struct Thrown {
  RuntimeError error;
};
struct Stop {};  // cancelled, deadline passed or step budget spent

[[noreturn]] void raise(int code, std::string message, const Location& where) {
  throw Thrown{RuntimeError{code, std::move(message), where}};
}

}  // namespace

class Evaluator {
 public:
  explicit Evaluator(Context& ctx) : c_(ctx) {}

  Value eval(const Expr& e);

  bool eval_bool(const Expr& e) {
    Value v = eval(e);
    if (!v.is(Value::Kind::Bool)) wrong(e, v, "bool");
    return v.as_bool();
  }

  Value call(const FunctionDef& f, const std::vector<Value>& args, const std::vector<TypePtr>& type_args,
             const Location& site);
  bool member(const Value& v, const TypePtr& t);
  bool match(const Pattern& p, const Value& v, Binding& out);

  void push(std::string name, Value v) { c_.frames_.push_back(Context::Frame{std::move(name), std::move(v)}); }
  void push_all(const Binding& b) {
    for (const auto& [n, v] : b) push(n, v);
  }

  struct Scope {
    explicit Scope(Context& c) : c_(c), size_(c.frames_.size()) {}
    ~Scope() { c_.frames_.resize(size_); }
    Context& c_;
    std::size_t size_;
  };

  struct Source {
    std::vector<Value> values;
    bool complete = true;
  };
  Source values_for(const Bind& b);

  void tick() {
    if (++c_.steps_ > c_.limits_.step_budget) {
      c_.budget_exhausted_ = true;
      throw Stop{};
    }
    if ((c_.steps_ & 1023) == 0) {
      if (c_.token_.cancelled()) throw Stop{};
      if (c_.deadline_ && Context::Clock::now() > *c_.deadline_) throw Stop{};
    }
  }

  QuantifierReport quantified(const Expr& e, const BindOverrides& overrides);

  Context& c_;

 private:
  const TypeParamMap& params() const { return c_.type_params_.back(); }

  const Value& lookup(const Expr& e) {
    for (std::size_t i = c_.frames_.size(); i > c_.barriers_.back(); --i) {
      if (c_.frames_[i - 1].name == e.name) return c_.frames_[i - 1].value;
    }
    if (e.scope != VarScope::Local) {
      if (const Value* v = c_.env_.value(e.name)) return *v;
      if (e.scope == VarScope::StateField) raise(errc::kNoState, "State is not available: " + e.name, e.location);
    }
    raise(errc::kWrongOperand, "Unknown identifier " + e.name, e.location);
  }

  [[noreturn]] void wrong(const Expr& at, const Value& v, std::string_view expected) {
    raise(errc::kWrongOperand, "Value " + v.to_string() + " is not a " + std::string(expected), at.location);
  }

  Rational number(const Expr& at, const Value& v) {
    if (!v.is_number()) wrong(at, v, "number");
    return v.as_rational();
  }

  const Integer& integer(const Expr& at, const Value& v) {
    if (!v.is(Value::Kind::Int)) wrong(at, v, "int");
    return v.as_int();
  }

  const ValueList& seq(const Expr& at, const Value& v) {
    if (!v.is(Value::Kind::Seq)) wrong(at, v, "sequence");
    return v.items();
  }

  const ValueList& set(const Expr& at, const Value& v) {
    if (!v.is(Value::Kind::Set)) wrong(at, v, "set");
    return v.items();
  }

  const Value& map(const Expr& at, const Value& v) {
    if (!v.is(Value::Kind::Map)) wrong(at, v, "map");
    return v;
  }

  Value make_map(MapEntries entries, const Expr& at) {
    auto m = Value::map(std::move(entries));
    if (!m) raise(errc::kMapConflict, "Duplicate map keys have different values", at.location);
    return *m;
  }

  Value unary(const Expr& e);
  Value binary(const Expr& e);
  Value apply(const Expr& e);
  Value quantifier(const Expr& e);
  Value cases(const Expr& e);
  Value let_be(const Expr& e);
  Value comprehension(const Expr& e);

  /// Calls `body` once per combination of values for `binds` whose patterns
  /// match; `body` returns false to stop early. Returns false if stopped.
  template <typename F>
  bool for_each_combination(const std::vector<Bind>& binds, const std::vector<Source>& sources, F&& body);
};

// ---------------------------------------------------------------------------
// ModuleEnv / Context
// ---------------------------------------------------------------------------

ModuleEnv::ModuleEnv(const SpecModule& m) : module_(m) {
  for (const auto& f : m.function_defs) functions_.emplace(f.name, &f);
  for (const auto& t : m.type_defs) types_.emplace(t.name, &t);
  for (const auto& v : m.value_defs) {
    Context ctx(*this);
    EvalOutcome out = evaluate(*v.value, ctx);
    if (out.is_ok() && v.type && !type_membership(out.value(), v.type, ctx)) {
      diagnostics_.push_back(RuntimeError{errc::kNotOfType,
                                          "Value " + out.value().to_string() + " is not of type " + render_type(v.type),
                                          v.value->location});
    } else if (out.is_ok()) {
      values_.emplace(v.name, out.value());
    } else if (out.is_error()) {
      diagnostics_.push_back(out.error());
    }
  }
}

const FunctionDef* ModuleEnv::function(const std::string& name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : it->second;
}

const TypeDef* ModuleEnv::type(const std::string& name) const {
  auto it = types_.find(name);
  return it == types_.end() ? nullptr : it->second;
}

const Value* ModuleEnv::value(const std::string& name) const {
  auto it = values_.find(name);
  return it == values_.end() ? nullptr : &it->second;
}

Context::Context(const ModuleEnv& env, CancelToken token, std::optional<Clock::time_point> deadline, EvalLimits limits)
    : env_(env), token_(std::move(token)), deadline_(deadline), limits_(limits) {}

void Context::set_type_params(TypeParamMap params) { type_params_.front() = std::move(params); }

const TypeParamMap& Context::type_params() const { return type_params_.back(); }

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

Value Evaluator::eval(const Expr& e) {
  tick();
  switch (e.kind) {
    case ExprKind::Literal: return e.literal;
    case ExprKind::Var: return lookup(e);
    case ExprKind::Unary: return unary(e);
    case ExprKind::Binary: return binary(e);
    case ExprKind::If:
      for (std::size_t i = 0; i + 1 < e.args.size(); i += 2) {
        if (eval_bool(*e.args[i])) return eval(*e.args[i + 1]);
      }
      return eval(*e.args.back());
    case ExprKind::Cases: return cases(e);
    case ExprKind::Let: {
      Scope scope(c_);
      for (const auto& def : e.defs) {
        Value v = eval(*def.value);
        if (def.type && !member(v, substitute(def.type, params()))) {
          raise(errc::kNotOfType, "Value " + v.to_string() + " is not of type " + render_type(def.type),
                def.value->location);
        }
        Binding b;
        if (!match(def.pattern, v, b)) {
          raise(errc::kPatternFail, "Pattern " + render_pattern(def.pattern) + " does not match " + v.to_string(),
                def.pattern.location);
        }
        push_all(b);
      }
      return eval(*e.args[0]);
    }
    case ExprKind::LetBe: return let_be(e);
    case ExprKind::Forall:
    case ExprKind::Exists:
    case ExprKind::Exists1: return quantifier(e);
    case ExprKind::Apply: return apply(e);
    case ExprKind::FunInstance: raise(errc::kWrongOperand, "Function " + e.name + " is not applied", e.location);
    case ExprKind::SetEnum: {
      ValueList items;
      items.reserve(e.args.size());
      for (const auto& a : e.args) items.push_back(eval(*a));
      return Value::set(std::move(items));
    }
    case ExprKind::SetRange: {
      const Rational lo = number(*e.args[0], eval(*e.args[0]));
      const Rational hi = number(*e.args[1], eval(*e.args[1]));
      Integer first = numerator(lo) / denominator(lo);
      if (first * denominator(lo) < numerator(lo)) ++first;
      Integer last = numerator(hi) / denominator(hi);
      if (last * denominator(hi) > numerator(hi)) --last;
      ValueList items;
      if (last >= first) {
        if (last - first > Integer(c_.limits_.product_cap)) {
          raise(errc::kTooLarge, "Set range is too large to evaluate", e.location);
        }
        for (Integer i = first; i <= last; ++i) items.push_back(Value::integer(i));
      }
      return Value::set(std::move(items));
    }
    case ExprKind::SetComp:
    case ExprKind::SeqComp:
    case ExprKind::MapComp: return comprehension(e);
    case ExprKind::SeqEnum: {
      ValueList items;
      items.reserve(e.args.size());
      for (const auto& a : e.args) items.push_back(eval(*a));
      return Value::seq(std::move(items));
    }
    case ExprKind::MapEnum: {
      MapEntries entries;
      for (std::size_t i = 0; i + 1 < e.args.size(); i += 2) {
        Value k = eval(*e.args[i]);
        entries.emplace_back(std::move(k), eval(*e.args[i + 1]));
      }
      return make_map(std::move(entries), e);
    }
    case ExprKind::TupleCons: {
      ValueList items;
      for (const auto& a : e.args) items.push_back(eval(*a));
      return Value::tuple(std::move(items));
    }
    case ExprKind::RecordCons: {
      ValueList items;
      for (const auto& a : e.args) items.push_back(eval(*a));
      Value r = Value::record(e.name, std::move(items));
      const TypeDef* def = c_.env_.type(e.name);
      if (def && !member(r, types::named(e.name))) {
        raise(errc::kInvariant, "Invariant violated by " + r.to_string(), e.location);
      }
      return r;
    }
    case ExprKind::FieldSelect: {
      Value r = eval(*e.args[0]);
      if (!r.is(Value::Kind::Record)) wrong(e, r, "record");
      const TypeDef* def = c_.env_.type(r.record_name());
      if (def && def->type->kind == TypeKind::Record) {
        const auto& fields = def->type->fields;
        for (std::size_t i = 0; i < fields.size() && i < r.items().size(); ++i) {
          if (fields[i].name == e.name) return r.items()[i];
        }
      }
      raise(errc::kWrongOperand, "No field " + e.name + " in " + r.to_string(), e.location);
    }
    case ExprKind::TupleSelect: {
      Value t = eval(*e.args[0]);
      if (!t.is(Value::Kind::Tuple) || e.index < 1 || e.index > static_cast<int>(t.size())) {
        raise(errc::kWrongOperand, "Cannot select .#" + std::to_string(e.index) + " from " + t.to_string(),
              e.location);
      }
      return t.items()[e.index - 1];
    }
    case ExprKind::IsType: {
      Value v = eval(*e.args[0]);
      return Value::boolean(member(v, substitute(e.type, params())));
    }
  }
  raise(errc::kWrongOperand, "Cannot evaluate expression", e.location);
}

namespace {

Integer floor_of(const Rational& r) {
  Integer q = numerator(r) / denominator(r);
  if (q * denominator(r) > numerator(r)) --q;
  return q;
}

}  // namespace

Value Evaluator::unary(const Expr& e) {
  const Expr& a = *e.args[0];
  if (e.op == Op::Not) return Value::boolean(!eval_bool(a));
  Value v = eval(a);
  switch (e.op) {
    case Op::Neg:
      if (v.is(Value::Kind::Int)) return Value::integer(Integer(-v.as_int()));
      return Value::number(-number(a, v));
    case Op::Pos: number(a, v); return v;
    case Op::Abs:
      if (v.is(Value::Kind::Int)) return Value::integer(Integer(abs(v.as_int())));
      return Value::number(abs(number(a, v)));
    case Op::Floor: return Value::integer(floor_of(number(a, v)));
    case Op::Card: return Value::integer(static_cast<std::int64_t>(set(a, v).size()));
    case Op::Len: return Value::integer(static_cast<std::int64_t>(seq(a, v).size()));
    case Op::Hd: {
      const auto& items = seq(a, v);
      if (items.empty()) raise(errc::kHdEmpty, "Cannot take hd of an empty sequence", e.location);
      return items.front();
    }
    case Op::Tl: {
      const auto& items = seq(a, v);
      if (items.empty()) raise(errc::kTlEmpty, "Cannot take tl of an empty sequence", e.location);
      return Value::seq(ValueList(items.begin() + 1, items.end()));
    }
    case Op::Elems: return Value::set(seq(a, v));
    case Op::Inds: {
      ValueList idx;
      const auto n = static_cast<std::int64_t>(seq(a, v).size());
      for (std::int64_t i = 1; i <= n; ++i) idx.push_back(Value::integer(i));
      return Value::set(std::move(idx));
    }
    case Op::Dom: {
      ValueList keys;
      for (const auto& [k, _] : map(a, v).entries()) keys.push_back(k);
      return Value::set(std::move(keys));
    }
    case Op::Rng: {
      ValueList vals;
      for (const auto& [_, x] : map(a, v).entries()) vals.push_back(x);
      return Value::set(std::move(vals));
    }
    case Op::Power: {
      const auto& items = set(a, v);
      if (items.size() > 16) raise(errc::kTooLarge, "Set is too large for power", e.location);
      ValueList subsets;
      for (std::size_t mask = 0; mask < (std::size_t{1} << items.size()); ++mask) {
        ValueList s;
        for (std::size_t i = 0; i < items.size(); ++i) {
          if (mask & (std::size_t{1} << i)) s.push_back(items[i]);
        }
        subsets.push_back(Value::set(std::move(s)));
      }
      return Value::set(std::move(subsets));
    }
    case Op::Dunion: {
      ValueList all;
      for (const auto& s : set(a, v)) {
        const auto& inner = set(a, s);
        all.insert(all.end(), inner.begin(), inner.end());
      }
      return Value::set(std::move(all));
    }
    case Op::Dinter: {
      const auto& sets = set(a, v);
      if (sets.empty()) raise(errc::kWrongOperand, "Cannot take dinter of an empty set", e.location);
      ValueList acc = set(a, sets[0]);
      for (std::size_t i = 1; i < sets.size(); ++i) {
        ValueList next;
        for (const auto& x : acc) {
          if (sets[i].set_contains(x)) next.push_back(x);
        }
        acc = std::move(next);
      }
      return Value::set(std::move(acc));
    }
    case Op::Conc: {
      ValueList all;
      for (const auto& s : seq(a, v)) {
        const auto& inner = seq(a, s);
        all.insert(all.end(), inner.begin(), inner.end());
      }
      return Value::seq(std::move(all));
    }
    default: raise(errc::kWrongOperand, "Unsupported operator", e.location);
  }
}

Value Evaluator::binary(const Expr& e) {
  const Expr& l = *e.args[0];
  const Expr& r = *e.args[1];
  switch (e.op) {
    case Op::And: return Value::boolean(eval_bool(l) && eval_bool(r));
    case Op::Or: return Value::boolean(eval_bool(l) || eval_bool(r));
    case Op::Implies: return Value::boolean(!eval_bool(l) || eval_bool(r));
    case Op::Equiv: {
      const bool a = eval_bool(l);
      return Value::boolean(a == eval_bool(r));
    }
    default: break;
  }
  Value a = eval(l);
  Value b = eval(r);
  const bool ints = a.is(Value::Kind::Int) && b.is(Value::Kind::Int);
  switch (e.op) {
    case Op::Plus:
      if (ints) return Value::integer(Integer(a.as_int() + b.as_int()));
      return Value::number(number(l, a) + number(r, b));
    case Op::Minus:
      if (ints) return Value::integer(Integer(a.as_int() - b.as_int()));
      return Value::number(number(l, a) - number(r, b));
    case Op::Times:
      if (ints) return Value::integer(Integer(a.as_int() * b.as_int()));
      return Value::number(number(l, a) * number(r, b));
    case Op::Divide: {
      const Rational x = number(l, a);
      const Rational y = number(r, b);
      if (y == 0) raise(errc::kDivByZero, "Division by zero", e.location);
      return Value::number(x / y);
    }
    case Op::Div:
    case Op::Rem:
    case Op::Mod: {
      const Integer& x = integer(l, a);
      const Integer& y = integer(r, b);
      if (y == 0) raise(errc::kDivByZero, "Division by zero", e.location);
      if (e.op == Op::Div) return Value::integer(Integer(x / y));
      Integer rem = x % y;
      if (e.op == Op::Mod && rem != 0 && ((rem < 0) != (y < 0))) rem += y;
      return Value::integer(rem);
    }
    case Op::Less:
    case Op::LessEq:
    case Op::Greater:
    case Op::GreaterEq: {
      int cmp;
      if (ints) {
        cmp = a.as_int() < b.as_int() ? -1 : (a.as_int() > b.as_int() ? 1 : 0);
      } else {
        const Rational x = number(l, a);
        const Rational y = number(r, b);
        cmp = x < y ? -1 : (x > y ? 1 : 0);
      }
      switch (e.op) {
        case Op::Less: return Value::boolean(cmp < 0);
        case Op::LessEq: return Value::boolean(cmp <= 0);
        case Op::Greater: return Value::boolean(cmp > 0);
        default: return Value::boolean(cmp >= 0);
      }
    }
    case Op::Equal: return Value::boolean(a == b);
    case Op::NotEqual: return Value::boolean(a != b);
    case Op::InSet: set(r, b); return Value::boolean(b.set_contains(a));
    case Op::NotInSet: set(r, b); return Value::boolean(!b.set_contains(a));
    case Op::Subset:
    case Op::PSubset: {
      const auto& xs = set(l, a);
      set(r, b);
      const bool sub = std::all_of(xs.begin(), xs.end(), [&](const Value& x) { return b.set_contains(x); });
      return Value::boolean(e.op == Op::Subset ? sub : sub && xs.size() < b.size());
    }
    case Op::Union: {
      ValueList all = set(l, a);
      const auto& ys = set(r, b);
      all.insert(all.end(), ys.begin(), ys.end());
      return Value::set(std::move(all));
    }
    case Op::Inter:
    case Op::Difference: {
      set(r, b);
      ValueList out;
      for (const auto& x : set(l, a)) {
        if (b.set_contains(x) == (e.op == Op::Inter)) out.push_back(x);
      }
      return Value::set(std::move(out));
    }
    case Op::Concat: {
      ValueList all = seq(l, a);
      const auto& ys = seq(r, b);
      all.insert(all.end(), ys.begin(), ys.end());
      return Value::seq(std::move(all));
    }
    case Op::Override: {
      if (a.is(Value::Kind::Seq)) {
        ValueList items = a.items();
        for (const auto& [k, v] : map(r, b).entries()) {
          if (!k.is(Value::Kind::Int) || k.as_int() < 1 || k.as_int() > items.size()) {
            raise(errc::kNotNat1, "Sequence index " + k.to_string() + " out of range", e.location);
          }
          items[static_cast<std::size_t>(k.as_int()) - 1] = v;
        }
        return Value::seq(std::move(items));
      }
      MapEntries entries;
      map(r, b);
      for (const auto& kv : map(l, a).entries()) {
        if (!b.find(kv.first)) entries.push_back(kv);
      }
      for (const auto& kv : b.entries()) entries.push_back(kv);
      return make_map(std::move(entries), e);
    }
    case Op::Munion: {
      MapEntries entries = map(l, a).entries();
      for (const auto& kv : map(r, b).entries()) entries.push_back(kv);
      return make_map(std::move(entries), e);
    }
    default: raise(errc::kWrongOperand, "Unsupported operator", e.location);
  }
}

Value Evaluator::apply(const Expr& e) {
  switch (e.apply) {
    case ApplyKind::Function:
    case ApplyKind::PreCondition:
    case ApplyKind::PostCondition: {
      const FunctionDef* f = c_.env_.function(e.name);
      if (!f) raise(errc::kWrongOperand, "Unknown function " + e.name, e.location);
      std::vector<Value> args;
      args.reserve(e.args.size() - 1);
      for (std::size_t i = 1; i < e.args.size(); ++i) args.push_back(eval(*e.args[i]));
      std::vector<TypePtr> type_args;
      for (const auto& t : e.args[0]->type_args) type_args.push_back(substitute(t, params()));
      if (e.apply == ApplyKind::Function) return call(*f, args, type_args, e.location);

      const ExprPtr& cond = e.apply == ApplyKind::PreCondition ? f->pre : f->post;
      if (!cond) return Value::boolean(true);
      if (c_.call_depth_ >= c_.limits_.max_call_depth) {
        raise(errc::kRecursion, "Recursion depth exceeded", e.location);
      }
      TypeParamMap tp;
      for (std::size_t i = 0; i < f->type_params.size() && i < type_args.size(); ++i) tp[f->type_params[i]] = type_args[i];
      c_.barriers_.push_back(c_.frames_.size());
      c_.type_params_.push_back(std::move(tp));
      ++c_.call_depth_;
      struct Restore {
        Context& c;
        std::size_t size;
        ~Restore() {
          --c.call_depth_;
          c.type_params_.pop_back();
          c.barriers_.pop_back();
          c.frames_.resize(size);
        }
      } restore{c_, c_.frames_.size()};
      for (std::size_t i = 0; i < f->param_patterns.size() && i < args.size(); ++i) {
        Binding b;
        if (!match(f->param_patterns[i], args[i], b)) return Value::boolean(false);
        push_all(b);
      }
      if (e.apply == ApplyKind::PostCondition && args.size() > f->param_patterns.size()) push("RESULT", args.back());
      return Value::boolean(eval_bool(*cond));
    }
    case ApplyKind::Invariant: {
      Value v = eval(*e.args[1]);
      const TypeDef* def = c_.env_.type(e.name);
      if (!def || !def->inv) return Value::boolean(true);
      return Value::boolean(member(v, types::named(e.name)));
    }
    case ApplyKind::SeqIndex: {
      Value s = eval(*e.args[0]);
      Value i = eval(*e.args[1]);
      const auto& items = seq(*e.args[0], s);
      if (!i.is(Value::Kind::Int) || i.as_int() < 1) {
        raise(errc::kNotNat1, "Value " + i.to_string() + " is not a nat1", e.location);
      }
      if (i.as_int() > items.size()) {
        raise(errc::kNotNat1, "Sequence index " + i.to_string() + " out of range", e.location);
      }
      return items[static_cast<std::size_t>(i.as_int()) - 1];
    }
    case ApplyKind::MapLookup: {
      Value m = eval(*e.args[0]);
      Value k = eval(*e.args[1]);
      const Value* v = map(*e.args[0], m).find(k);
      if (!v) raise(errc::kMapKey, "No such key value in map: " + k.to_string(), e.location);
      return *v;
    }
    case ApplyKind::Unresolved: break;
  }
  raise(errc::kWrongOperand, "Expression is not applicable", e.location);
}

Value Evaluator::call(const FunctionDef& f, const std::vector<Value>& args, const std::vector<TypePtr>& type_args,
                      const Location& site) {
  if (c_.call_depth_ >= c_.limits_.max_call_depth) raise(errc::kRecursion, "Recursion depth exceeded", site);
  if (args.size() != f.param_types.size()) {
    raise(errc::kWrongOperand, "Function " + f.name + " expects " + std::to_string(f.param_types.size()) + " argument(s)",
          site);
  }
  TypeParamMap tp;
  for (std::size_t i = 0; i < f.type_params.size() && i < type_args.size(); ++i) tp[f.type_params[i]] = type_args[i];
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (!member(args[i], substitute(f.param_types[i], tp))) {
      raise(errc::kNotOfType, "Value " + args[i].to_string() + " is not of type " + render_type(f.param_types[i]),
            site);
    }
  }

  c_.barriers_.push_back(c_.frames_.size());
  c_.type_params_.push_back(std::move(tp));
  ++c_.call_depth_;
  struct Restore {
    Context& c;
    std::size_t size;
    ~Restore() {
      --c.call_depth_;
      c.type_params_.pop_back();
      c.barriers_.pop_back();
      c.frames_.resize(size);
    }
  } restore{c_, c_.frames_.size()};

  for (std::size_t i = 0; i < args.size(); ++i) {
    Binding b;
    if (!match(f.param_patterns[i], args[i], b)) {
      raise(errc::kPatternFail, "Pattern " + render_pattern(f.param_patterns[i]) + " does not match " + args[i].to_string(),
            f.param_patterns[i].location);
    }
    push_all(b);
  }
  if (f.pre && !eval_bool(*f.pre)) raise(errc::kPreFailed, "Precondition failure: pre_" + f.name, site);
  Value result = eval(*f.body);
  if (!member(result, substitute(f.return_type, params()))) {
    raise(errc::kNotOfType, "Value " + result.to_string() + " is not of type " + render_type(f.return_type),
          f.body->location);
  }
  if (f.post) {
    Scope scope(c_);
    push("RESULT", result);
    if (!eval_bool(*f.post)) raise(errc::kPostFailed, "Postcondition failure: post_" + f.name, site);
  }
  return result;
}

Value Evaluator::cases(const Expr& e) {
  Value v = eval(*e.args[0]);
  for (const auto& alt : e.alts) {
    for (const auto& p : alt.patterns) {
      Binding b;
      if (match(p, v, b)) {
        Scope scope(c_);
        push_all(b);
        return eval(*alt.body);
      }
    }
  }
  if (e.others) return eval(*e.others);
  raise(errc::kCasesNoMatch, "Cases exhausted: no clause matches " + v.to_string(), e.location);
}

std::string override_key(const Bind& b, const TypeParamMap& params) {
  if (params.empty() || !mentions_type_param(*b.type)) return b.key;
  return bind_key(b.pattern, *substitute(b.type, params));
}

Evaluator::Source Evaluator::values_for(const Bind& b) {
  if (!b.is_type_bind()) {
    Value s = eval(*b.set);
    return {set(*b.set, s), true};
  }
  if (c_.call_depth_ == 0 && c_.overrides_) {
    auto it = c_.overrides_->find(override_key(b, params()));
    if (it != c_.overrides_->end()) return {it->second.values, it->second.all_values};
  }
  const TypePtr t = substitute(b.type, params());
  const std::size_t limit = 1000;
  if (cardinality(t, c_.env_.module(), params()).at_most(limit)) {
    Enumeration all = enumerate_all(t, limit, c_);
    if (all.exhausted) return {std::move(all.values), true};
  }
  raise(errc::kInfiniteBind, "Cannot evaluate type bind " + render_bind(b), b.pattern.location);
}

template <typename F>
bool Evaluator::for_each_combination(const std::vector<Bind>& binds, const std::vector<Source>& sources, F&& body) {
  std::size_t total = 1;
  for (const auto& s : sources) {
    if (s.values.empty()) return true;
    if (total > c_.limits_.product_cap / s.values.size() + 1) {
      total = c_.limits_.product_cap + 1;
      break;
    }
    total *= s.values.size();
  }
  if (total > c_.limits_.product_cap) raise(errc::kTooLarge, "Too many bind combinations", binds[0].pattern.location);
  std::vector<std::size_t> index(sources.size(), 0);
  for (;;) {
    {
      Scope scope(c_);
      bool matched = true;
      for (std::size_t i = 0; i < binds.size() && matched; ++i) {
        Binding b;
        matched = match(binds[i].pattern, sources[i].values[index[i]], b);
        push_all(b);
      }
      if (matched && !body()) return false;
    }
    std::size_t k = sources.size();
    while (k > 0) {
      --k;
      if (++index[k] < sources[k].values.size()) break;
      index[k] = 0;
      if (k == 0) return true;
    }
    if (sources.empty()) return true;
  }
}

Value Evaluator::quantifier(const Expr& e) {
  std::vector<Source> sources;
  bool complete = true;
  for (const auto& b : e.binds) {
    sources.push_back(values_for(b));
    complete = complete && sources.back().complete;
  }
  if (e.kind == ExprKind::Exists1) {
    int count = 0;
    for_each_combination(e.binds, sources, [&] {
      if (eval_bool(*e.args[0])) ++count;
      return count < 2;
    });
    if (count < 2 && !complete) c_.approximate_ = true;
    return Value::boolean(count == 1);
  }
  const bool universal = e.kind == ExprKind::Forall;
  const bool finished = for_each_combination(e.binds, sources, [&] { return eval_bool(*e.args[0]) == universal; });
  if (finished && !complete) c_.approximate_ = true;
  return Value::boolean(finished == universal);
}

Value Evaluator::let_be(const Expr& e) {
  Source source = values_for(e.binds[0]);
  const std::vector<Bind>& binds = e.binds;
  std::optional<Value> result;
  for_each_combination(binds, {source}, [&] {
    if (e.args[0] && !eval_bool(*e.args[0])) return true;
    result = eval(*e.args[1]);
    return false;
  });
  if (result) return *result;
  if (!source.complete) raise(errc::kInfiniteBind, "No value found for let be st among the values tried", e.location);
  raise(errc::kLetBeNoValue, "Let be st found no applicable bindings", e.location);
}

Value Evaluator::comprehension(const Expr& e) {
  std::vector<Source> sources;
  for (const auto& b : e.binds) {
    sources.push_back(values_for(b));
    if (!sources.back().complete) {
      raise(errc::kInfiniteBind, "Cannot evaluate comprehension over " + render_bind(b), e.location);
    }
  }
  if (e.kind == ExprKind::SeqComp) {
    ValueList items;
    for_each_combination(e.binds, sources, [&] {
      if (!e.args[1] || eval_bool(*e.args[1])) items.push_back(eval(*e.args[0]));
      return true;
    });
    return Value::seq(std::move(items));
  }
  if (e.kind == ExprKind::SetComp) {
    ValueList items;
    for_each_combination(e.binds, sources, [&] {
      if (!e.args[1] || eval_bool(*e.args[1])) items.push_back(eval(*e.args[0]));
      return true;
    });
    return Value::set(std::move(items));
  }
  MapEntries entries;
  for_each_combination(e.binds, sources, [&] {
    if (!e.args[2] || eval_bool(*e.args[2])) {
      Value k = eval(*e.args[0]);
      entries.emplace_back(std::move(k), eval(*e.args[1]));
    }
    return true;
  });
  return make_map(std::move(entries), e);
}

bool Evaluator::match(const Pattern& p, const Value& v, Binding& out) {
  switch (p.kind) {
    case PatternKind::Identifier: out.emplace_back(p.name, v); return true;
    case PatternKind::DontCare: return true;
    case PatternKind::Literal: return p.literal == v;
    case PatternKind::Tuple:
    case PatternKind::Record:
    case PatternKind::SeqEnum: {
      const auto kind = p.kind == PatternKind::Tuple    ? Value::Kind::Tuple
                        : p.kind == PatternKind::Record ? Value::Kind::Record
                                                        : Value::Kind::Seq;
      if (!v.is(kind) || v.items().size() != p.items.size()) return false;
      if (p.kind == PatternKind::Record && v.record_name() != p.name) return false;
      for (std::size_t i = 0; i < p.items.size(); ++i) {
        if (!match(p.items[i], v.items()[i], out)) return false;
      }
      return true;
    }
  }
  return false;
}

bool Evaluator::member(const Value& v, const TypePtr& t) {
  switch (t->kind) {
    case TypeKind::Unknown: return true;
    case TypeKind::Bool: return v.is(Value::Kind::Bool);
    case TypeKind::Nat: return v.is(Value::Kind::Int) && v.as_int() >= 0;
    case TypeKind::Nat1: return v.is(Value::Kind::Int) && v.as_int() >= 1;
    case TypeKind::Int: return v.is(Value::Kind::Int);
    case TypeKind::Real: return v.is_number();
    case TypeKind::Char: return v.is(Value::Kind::Char);
    case TypeKind::Quote: return v.is(Value::Kind::Quote) && v.quote_tag() == t->name;
    case TypeKind::Seq:
    case TypeKind::Set: {
      if (!v.is(t->kind == TypeKind::Seq ? Value::Kind::Seq : Value::Kind::Set)) return false;
      for (const auto& x : v.items()) {
        if (!member(x, t->args[0])) return false;
      }
      return true;
    }
    case TypeKind::Map:
      if (!v.is(Value::Kind::Map)) return false;
      for (const auto& [k, x] : v.entries()) {
        if (!member(k, t->args[0]) || !member(x, t->args[1])) return false;
      }
      return true;
    case TypeKind::Product:
      if (!v.is(Value::Kind::Tuple) || v.size() != t->args.size()) return false;
      for (std::size_t i = 0; i < t->args.size(); ++i) {
        if (!member(v.items()[i], t->args[i])) return false;
      }
      return true;
    case TypeKind::Optional: return v.is(Value::Kind::Nil) || member(v, t->args[0]);
    case TypeKind::Union:
      return std::any_of(t->args.begin(), t->args.end(), [&](const TypePtr& u) { return member(v, u); });
    case TypeKind::TypeParam: {
      auto found = params().find(t->name);
      return found == params().end() || member(v, found->second);
    }
    case TypeKind::Record:
      if (!v.is(Value::Kind::Record) || v.record_name() != t->name || v.size() != t->fields.size()) return false;
      for (std::size_t i = 0; i < t->fields.size(); ++i) {
        if (!member(v.items()[i], t->fields[i].type)) return false;
      }
      return true;
    case TypeKind::Named: {
      const TypeDef* def = c_.env_.type(t->name);
      if (!def || !member(v, def->type)) return false;
      if (!def->inv) return true;
      // The invariant runs like a function body: no overrides, own frame.
      c_.barriers_.push_back(c_.frames_.size());
      ++c_.call_depth_;
      struct Restore {
        Context& c;
        std::size_t size;
        ~Restore() {
          --c.call_depth_;
          c.barriers_.pop_back();
          c.frames_.resize(size);
        }
      } restore{c_, c_.frames_.size()};
      Binding b;
      if (!match(*def->inv_pattern, v, b)) return false;
      push_all(b);
      try {
        return eval_bool(*def->inv);
      } catch (const Thrown& err) {
        if (err.error.uncertain()) throw;
        return false;
      }
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Public entry points
// ---------------------------------------------------------------------------

namespace {

template <typename F>
EvalOutcome guarded(F&& f) {
  try {
    return EvalOutcome::ok(f());
  } catch (const Thrown& t) {
    return EvalOutcome::failure(t.error);
  } catch (const Stop&) {
    return EvalOutcome::cancelled();
  }
}

}  // namespace

EvalOutcome evaluate(const Expr& e, Context& ctx) {
  Evaluator ev(ctx);
  return guarded([&] { return ev.eval(e); });
}

EvalOutcome evaluate_with(const Expr& e, const Binding& locals, Context& ctx) {
  Evaluator ev(ctx);
  Evaluator::Scope scope(ctx);
  ev.push_all(locals);
  return guarded([&] { return ev.eval(e); });
}

std::optional<Binding> match_pattern(const Pattern& p, const Value& v, Context& ctx) {
  Evaluator ev(ctx);
  Binding b;
  if (!ev.match(p, v, b)) return std::nullopt;
  return b;
}

EvalOutcome call_function(const FunctionDef& f, const std::vector<Value>& args, const std::vector<TypePtr>& type_args,
                          Context& ctx) {
  Evaluator ev(ctx);
  return guarded([&] { return ev.call(f, args, type_args, f.location); });
}

bool type_membership(const Value& v, const TypePtr& t, Context& ctx) {
  Evaluator ev(ctx);
  try {
    return ev.member(v, t);
  } catch (const Thrown&) {
    return false;
  } catch (const Stop&) {
    return false;
  }
}

namespace {

bool is_quantifier(const Expr& e) { return e.kind == ExprKind::Forall || e.kind == ExprKind::Exists; }

bool all_type_binds(const Expr& e) {
  return std::all_of(e.binds.begin(), e.binds.end(), [](const Bind& b) { return b.is_type_bind(); });
}

/// The outer chain of same-kind quantifiers whose binds are all type binds.
std::pair<std::vector<const Bind*>, const Expr*> quantifier_chain(const Expr& e) {
  std::vector<const Bind*> binds;
  const Expr* cur = &e;
  if (!is_quantifier(e)) return {binds, cur};
  const ExprKind kind = e.kind;
  bool first = true;
  while (cur->kind == kind && (first || all_type_binds(*cur))) {
    for (const auto& b : cur->binds) binds.push_back(&b);
    cur = cur->args[0].get();
    first = false;
    if (!all_type_binds(*cur)) break;
  }
  return {binds, cur};
}

void collect_nested(const Expr& e, std::vector<Bind>& out, std::set<std::string>& seen) {
  for (const auto& b : e.binds) {
    if (b.is_type_bind() && seen.insert(b.key).second) out.push_back(b);
  }
  for_each_child(e, [&](const Expr& c) { collect_nested(c, out, seen); });
}

}  // namespace

std::vector<Bind> collect_type_binds(const Expr& e) {
  std::vector<Bind> out;
  std::set<std::string> seen;
  auto [chain, body] = quantifier_chain(e);
  for (const Bind* b : chain) {
    if (b->is_type_bind() && seen.insert(b->key).second) out.push_back(*b);
  }
  for (const Bind* b : chain) {
    if (b->set) collect_nested(*b->set, out, seen);
  }
  collect_nested(*body, out, seen);
  return out;
}

QuantifierReport evaluate_quantified(const Expr& e, const BindOverrides& overrides, Context& ctx) {
  Evaluator ev(ctx);
  return ev.quantified(e, overrides);
}

QuantifierReport Evaluator::quantified(const Expr& e, const BindOverrides& overrides) {
  QuantifierReport report;
  Context& ctx = c_;
  Evaluator& ev = *this;
  const BindOverrides* saved = ctx.overrides_;
  ctx.set_overrides(&overrides);
  struct RestoreOverrides {
    Context& c;
    const BindOverrides* saved;
    ~RestoreOverrides() { c.set_overrides(saved); }
  } restore{ctx, saved};

  auto [chain, body] = quantifier_chain(e);
  const bool universal = e.kind != ExprKind::Exists;

  std::vector<Evaluator::Source> sources;
  try {
    for (const Bind* b : chain) {
      if (b->is_type_bind()) {
        auto it = overrides.find(override_key(*b, ctx.type_params()));
        if (it != overrides.end()) {
          sources.push_back({it->second.values, it->second.all_values});
          continue;
        }
      }
      try {
        sources.push_back(ev.values_for(*b));
      } catch (const Thrown& t) {
        if (!t.error.uncertain()) throw;
        sources.push_back({{}, false});
      }
    }
  } catch (const Thrown& t) {
    report.result = EvalOutcome::failure(t.error);
    return report;
  } catch (const Stop&) {
    report.result = EvalOutcome::cancelled();
    return report;
  }

  std::size_t total = 1;
  bool capped = false;
  for (const auto& s : sources) {
    if (s.values.empty()) {
      total = 0;
      break;
    }
    if (total > ctx.limits().product_cap / s.values.size()) capped = true;
    total = capped ? ctx.limits().product_cap : total * s.values.size();
  }

  auto binding_now = [&](const std::vector<std::size_t>& index) {
    Binding b;
    for (std::size_t i = 0; i < chain.size(); ++i) {
      ev.match(chain[i]->pattern, sources[i].values[index[i]], b);
    }
    return b;
  };

  std::vector<std::size_t> index(sources.size(), 0);
  for (std::size_t n = 0; n < total; ++n) {
    if (n > 0) {
      std::size_t k = sources.size();
      while (k > 0) {
        --k;
        if (++index[k] < sources[k].values.size()) break;
        index[k] = 0;
      }
    }
    ++report.combinations;
    Evaluator::Scope scope(ctx);
    bool matched = true;
    for (std::size_t i = 0; i < chain.size() && matched; ++i) {
      Binding b;
      matched = ev.match(chain[i]->pattern, sources[i].values[index[i]], b);
      ev.push_all(b);
    }
    if (!matched) continue;
    ctx.approximate_ = false;
    try {
      const bool value = ev.eval_bool(*body);
      if (value != universal) {
        if (ctx.approximate_) {
          report.uncertain = true;
          continue;
        }
        (universal ? report.failing : report.witness) = binding_now(index);
        report.result = EvalOutcome::ok(Value::boolean(value));
        return report;
      }
    } catch (const Thrown& t) {
      if (t.error.uncertain()) {
        report.uncertain = true;
        continue;
      }
      if (universal) {
        report.failing = binding_now(index);
        report.result = EvalOutcome::failure(t.error);
        return report;
      }
    } catch (const Stop&) {
      report.result = EvalOutcome::cancelled();
      return report;
    }
  }
  report.result = EvalOutcome::ok(Value::boolean(universal));
  bool vacuous_ok = true;
  for (const auto& s : sources) {
    if (s.values.empty() && !s.complete) vacuous_ok = false;
  }
  report.exhausted = !capped && vacuous_ok;
  return report;
}

}  // namespace specqc
