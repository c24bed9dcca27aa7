#include "specqc/checker.hpp"
#include "specqc/generators.hpp"
#include "specqc/parser.hpp"
#include "specqc/printer.hpp"
#include "specqc/strategy.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <set>

namespace specqc {

namespace {

std::optional<std::size_t> parse_count(const std::string& text) {
  std::size_t n = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, n);
  if (ec != std::errc() || ptr != end || n == 0) return std::nullopt;
  return n;
}

std::optional<std::string> bad_value(const std::string& strategy, const std::string& key, const std::string& value) {
  return "Strategy " + strategy + ": option '" + key + "' expects a positive integer, found '" + value + "'";
}

const Expr& strip_quantifiers(const Expr& e) {
  const Expr* cur = &e;
  while (cur->kind == ExprKind::Forall) cur = cur->args[0].get();
  return *cur;
}

void conjuncts(const ExprPtr& e, std::vector<ExprPtr>& out) {
  if (e->kind == ExprKind::Binary && e->op == Op::And) {
    conjuncts(e->args[0], out);
    conjuncts(e->args[1], out);
  } else {
    out.push_back(e);
  }
}

bool is_bool_literal(const Expr& e, bool b) {
  return e.kind == ExprKind::Literal && e.literal.is(Value::Kind::Bool) && e.literal.as_bool() == b;
}

std::string strip_outer_parens(std::string s) {
  if (s.size() < 2 || s.front() != '(' || s.back() != ')') return s;
  int depth = 0;
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (depth == 0) return s;  // the first paren closes before the end
  }
  return s.substr(1, s.size() - 2);
}

// ---------------------------------------------------------------------------

class FixedStrategy final : public Strategy {
 public:
  std::string name() const override { return "fixed"; }
  std::string synopsis() const override {
    return "[-fixed:file <file> |\n    -fixed:create <file>][-fixed:size <size>]";
  }
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<FixedStrategy>(*this); }

  std::optional<std::string> set_option(const std::string& key, const std::string& value) override {
    if (key == "size") {
      if (!parse_count(value)) return bad_value(name(), key, value);
    } else if (key != "file" && key != "create") {
      return Strategy::set_option(key, value);
    }
    options_[key] = value;
    return std::nullopt;
  }

  void prepare(const StrategyPrepare& p) override {
    file_values_.clear();
    if (auto it = options_.find("create"); it != options_.end()) {
      if (auto err = fixed_create(p.pos, it->second)) p.diagnostics.push_back(*err);
    }
    if (auto it = options_.find("file"); it != options_.end()) load(it->second, p);
  }

  StrategyResult run(const StrategyRequest& req) const override {
    StrategyResult r;
    const std::size_t size = options_.count("size") ? *parse_count(options_.at("size")) : kDefaultFixedSize;
    r.has_all_values = true;
    for (const auto& b : req.binds) {
      if (auto it = file_values_.find(b.key); it != file_values_.end()) {
        for (const auto& v : it->second) {
          if (type_membership(v, b.type, req.ctx)) r.bindings[b.key].push_back(v);
        }
        r.has_all_values = false;
        continue;
      }
      r.bindings[b.key] = fixed_values(b.type, size, req.ctx);
      r.has_all_values = r.has_all_values && fixed_values_complete(b.type, size, req.ctx);
    }
    return r;
  }

 private:
  void load(const std::string& path, const StrategyPrepare& p) {
    std::ifstream in(path);
    if (!in) {
      p.diagnostics.push_back("fixed: cannot read bind file " + path);
      return;
    }
    std::string line;
    for (int n = 1; std::getline(in, line); ++n) {
      const auto first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line.compare(first, 2, "--") == 0) continue;
      const auto where = path + " line " + std::to_string(n) + ": ";
      const auto eq = line.find('=');
      if (eq == std::string::npos) {
        p.diagnostics.push_back(where + "expected <bind> = <set expression>");
        continue;
      }
      auto bind = parse_type_bind(line.substr(0, eq), path);
      auto set = parse_expression(line.substr(eq + 1), path);
      if (!bind.ok() || !set.ok()) {
        const auto& errs = !bind.ok() ? bind.errors : set.errors;
        p.diagnostics.push_back(where + errs.front().message);
        continue;
      }
      auto errs = check_type(bind.value.type, p.env.module(), {});
      auto more = check_expression(set.value, p.env.module());
      errs.insert(errs.end(), more.begin(), more.end());
      if (!errs.empty()) {
        p.diagnostics.push_back(where + errs.front().message);
        continue;
      }
      Context ctx(p.env);
      EvalOutcome v = evaluate(set.value, ctx);
      if (!v.is_ok() || !v.value().is(Value::Kind::Set)) {
        p.diagnostics.push_back(where + (v.is_error() ? v.error().message : "expression is not a set"));
        continue;
      }
      file_values_[bind.value.key] = v.value().items();
    }
  }

  std::map<std::string, std::vector<Value>> file_values_;
};

// ---------------------------------------------------------------------------

class RandomStrategy final : public Strategy {
 public:
  RandomStrategy() : clock_seed_(static_cast<std::uint64_t>(std::chrono::system_clock::now().time_since_epoch().count())) {}

  std::string name() const override { return "random"; }
  std::string synopsis() const override { return "[-random:size <size>][-random:seed <seed>]"; }
  bool enabled_by_default() const override { return false; }
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<RandomStrategy>(*this); }

  std::optional<std::string> set_option(const std::string& key, const std::string& value) override {
    if (key == "size") {
      if (!parse_count(value)) return bad_value(name(), key, value);
    } else if (key == "seed") {
      std::uint64_t s = 0;
      auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), s);
      if (ec != std::errc() || ptr != value.data() + value.size()) {
        return "Strategy random: option 'seed' expects an integer, found '" + value + "'";
      }
    } else {
      return Strategy::set_option(key, value);
    }
    options_[key] = value;
    return std::nullopt;
  }

  StrategyResult run(const StrategyRequest& req) const override {
    StrategyResult r;
    const std::size_t size = options_.count("size") ? *parse_count(options_.at("size")) : kDefaultRandomSize;
    const std::uint64_t seed = options_.count("seed") ? std::stoull(options_.at("seed")) : clock_seed_;
    for (std::size_t i = 0; i < req.binds.size(); ++i) {
      const Bind& b = req.binds[i];
      std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                        static_cast<std::uint32_t>(req.po.number), static_cast<std::uint32_t>(i)};
      std::mt19937_64 rng(seq);
      auto& values = r.bindings[b.key];
      for (std::size_t k = 1; k <= size; ++k) {
        if (auto v = random_value(b.type, rng, k, req.ctx)) values.push_back(std::move(*v));
      }
      if (values.size() < size) {
        r.diagnostics.push_back("random: generated " + std::to_string(values.size()) + " of " + std::to_string(size) +
                                " values for " + b.key);
      }
    }
    return r;
  }

 private:
  std::uint64_t clock_seed_;
};

// ---------------------------------------------------------------------------

/// Conservative: any operator that can fail anywhere in `e` blocks.
bool total(const Expr& e, const SpecModule& m) {
  switch (e.kind) {
    case ExprKind::Unary:
      if (e.op == Op::Hd || e.op == Op::Tl || e.op == Op::Dinter || e.op == Op::Power) return false;
      break;
    case ExprKind::Binary:
      switch (e.op) {
        case Op::Divide:
        case Op::Div:
        case Op::Mod:
        case Op::Rem:
        case Op::Munion:
        case Op::Override: return false;
        default: break;
      }
      break;
    case ExprKind::Cases:
      if (!e.others) return false;
      for (const auto& alt : e.alts) {
        for (const auto& p : alt.patterns) {
          if (!p.irrefutable() && p.kind != PatternKind::Literal) return false;
        }
      }
      break;
    case ExprKind::LetBe:
    case ExprKind::SetRange:
    case ExprKind::FunInstance:
    case ExprKind::FieldSelect:
    case ExprKind::TupleSelect:
    case ExprKind::MapEnum:
    case ExprKind::MapComp: return false;
    case ExprKind::Let:
      for (const auto& d : e.defs) {
        if (!d.pattern.irrefutable()) return false;
        if (d.type && !(d.value->static_type && is_subtype(d.value->static_type, d.type, m))) return false;
      }
      break;
    case ExprKind::RecordCons: {
      const TypeDef* def = m.find_type(e.name);
      if (!def || def->inv) return false;
      break;
    }
    case ExprKind::Apply:
      switch (e.apply) {
        case ApplyKind::SeqIndex:
        case ApplyKind::MapLookup:
        case ApplyKind::Unresolved: return false;
        case ApplyKind::Function: {
          const FunctionDef* f = m.find_function(e.name);
          if (!f || f->pre || !f->type_params.empty()) return false;
          for (std::size_t i = 1; i < e.args.size(); ++i) {
            const TypePtr& t = e.args[i]->static_type;
            if (!t || i - 1 >= f->param_types.size() || !is_subtype(t, f->param_types[i - 1], m) ||
                has_invariant(f->param_types[i - 1], m)) {
              return false;
            }
          }
          break;
        }
        default: break;
      }
      break;
    default: break;
  }
  bool ok = true;
  for_each_child(e, [&](const Expr& c) { ok = ok && total(c, m); });
  return ok;
}

class TrivialStrategy final : public Strategy {
 public:
  std::string name() const override { return "trivial"; }
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<TrivialStrategy>(*this); }

  StrategyResult run(const StrategyRequest& req) const override {
    StrategyResult r;
    const Expr* body = &strip_quantifiers(*req.po.expr);
    std::vector<ExprPtr> antecedents;
    ExprPtr conclusion;
    while (body->kind == ExprKind::Binary && body->op == Op::Implies) {
      conjuncts(body->args[0], antecedents);
      conclusion = body->args[1];
      body = conclusion.get();
    }
    if (!conclusion || !total(strip_quantifiers(*req.po.expr), req.ctx.module())) return r;
    if (is_bool_literal(*conclusion, true)) {
      r.verdict = Verdict{Verdict::Kind::Proved, "trivial true", {}};
      return r;
    }
    for (const auto& a : antecedents) {
      if (is_bool_literal(*a, false)) {
        r.verdict = Verdict{Verdict::Kind::Proved, "trivial false", {}};
        return r;
      }
    }
    std::vector<ExprPtr> goals;
    conjuncts(conclusion, goals);
    std::string reason;
    for (const auto& g : goals) {
      const auto hit = std::find_if(antecedents.begin(), antecedents.end(),
                                    [&](const ExprPtr& a) { return expr_equal(*a, *g); });
      if (hit == antecedents.end()) return r;
      reason += (reason.empty() ? "" : " and ") + strip_outer_parens(render_expr(*hit));
    }
    r.verdict = Verdict{Verdict::Kind::Proved, "trivial " + reason, {}};
    return r;
  }
};

// ---------------------------------------------------------------------------

class FiniteStrategy final : public Strategy {
 public:
  std::string name() const override { return "finite"; }
  std::string synopsis() const override { return "[-finite:size <size>]"; }
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<FiniteStrategy>(*this); }

  std::optional<std::string> set_option(const std::string& key, const std::string& value) override {
    if (key != "size") return Strategy::set_option(key, value);
    if (!parse_count(value)) return bad_value(name(), key, value);
    options_[key] = value;
    return std::nullopt;
  }

  StrategyResult run(const StrategyRequest& req) const override {
    StrategyResult r;
    const std::size_t cap = options_.count("size") ? *parse_count(options_.at("size")) : kDefaultFiniteSize;
    r.has_all_values = true;
    for (const auto& b : req.binds) {
      Enumeration all = enumerate_all(b.type, cap, req.ctx);
      if (!all.exhausted) {
        r.has_all_values = false;
        continue;
      }
      r.bindings[b.key] = std::move(all.values);
      r.diagnostics.insert(r.diagnostics.end(), all.diagnostics.begin(), all.diagnostics.end());
    }
    return r;
  }
};

// ---------------------------------------------------------------------------

class SearchStrategy final : public Strategy {
 public:
  std::string name() const override { return "search"; }
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<SearchStrategy>(*this); }

  StrategyResult run(const StrategyRequest& req) const override {
    StrategyResult r;
    std::map<std::string, const Bind*> vars;
    for (const auto& b : req.binds) {
      if (b.pattern.kind == PatternKind::Identifier) vars.emplace(b.pattern.name, &b);
    }
    scan(*req.po.expr, vars, req.ctx, r);
    return r;
  }

 private:
  static std::optional<Value> constant(const Expr& e) {
    if (e.kind == ExprKind::Literal) return e.literal;
    if (e.kind == ExprKind::Unary && e.op == Op::Neg && e.args[0]->kind == ExprKind::Literal &&
        e.args[0]->literal.is_number()) {
      return Value::number(-e.args[0]->literal.as_rational());
    }
    return std::nullopt;
  }

  static Op mirror(Op op) {
    switch (op) {
      case Op::Less: return Op::Greater;
      case Op::Greater: return Op::Less;
      case Op::LessEq: return Op::GreaterEq;
      case Op::GreaterEq: return Op::LessEq;
      default: return op;
    }
  }

  static std::vector<Value> falsifiers(Op op, const Value& k) {
    if (!k.is_number()) {
      if (op == Op::NotEqual) return {k};
      if (op == Op::Equal && k.is(Value::Kind::Bool)) return {Value::boolean(!k.as_bool())};
      return {};
    }
    const Rational q = k.as_rational();
    switch (op) {
      case Op::Greater: return {k};
      case Op::GreaterEq: return {Value::number(q - 1)};
      case Op::Less: return {k};
      case Op::LessEq: return {Value::number(q + 1)};
      case Op::Equal: return {Value::number(q + 1), Value::number(q - 1)};
      case Op::NotEqual: return {k};
      default: return {};
    }
  }

  static void scan(const Expr& e, const std::map<std::string, const Bind*>& vars, Context& ctx, StrategyResult& r) {
    if (e.kind == ExprKind::Binary) {
      const Expr& l = *e.args[0];
      const Expr& rhs = *e.args[1];
      const Expr* var = nullptr;
      std::optional<Value> k;
      Op op = e.op;
      if (l.kind == ExprKind::Var && (k = constant(rhs))) {
        var = &l;
      } else if (rhs.kind == ExprKind::Var && (k = constant(l))) {
        var = &rhs;
        op = mirror(op);
      }
      if (var) {
        if (auto it = vars.find(var->name); it != vars.end()) {
          auto& values = r.bindings[it->second->key];
          for (const auto& v : falsifiers(op, *k)) {
            if (!type_membership(v, it->second->type, ctx)) continue;
            if (std::find(values.begin(), values.end(), v) == values.end()) values.push_back(v);
            if (op == Op::Equal) break;
          }
          if (values.empty()) r.bindings.erase(it->second->key);
        }
      }
    }
    for_each_child(e, [&](const Expr& c) { scan(c, vars, ctx, r); });
  }
};

// ---------------------------------------------------------------------------

class DirectStrategy final : public Strategy {
 public:
  std::string name() const override { return "direct"; }
  std::unique_ptr<Strategy> clone() const override { return std::make_unique<DirectStrategy>(*this); }

  StrategyResult run(const StrategyRequest& req) const override {
    StrategyResult r;
    const ProofObligation& po = req.po;
    if (po.kind == PoKind::CasesExhaustive && po.source && exhaustive(*po.source, req.ctx)) {
      r.verdict = Verdict{Verdict::Kind::Proved, "direct (cases exhaustive)", {}};
    } else if (po.kind == PoKind::Subtype && po.function) {
      const FunctionDef& f = *po.function;
      const SpecModule& m = req.ctx.module();
      const TypePtr body_type = f.body->static_type ? f.body->static_type : types::unknown();
      if (total(*f.body, m) && body_type->kind != TypeKind::Unknown && is_subtype(body_type, f.return_type, m) &&
          !has_invariant(f.return_type, m)) {
        r.verdict = Verdict{Verdict::Kind::Proved, "direct (body is total)", {}};
      }
    }
    return r;
  }

 private:
  static bool exhaustive(const Expr& cases, Context& ctx) {
    for (const auto& alt : cases.alts) {
      for (const auto& p : alt.patterns) {
        if (p.irrefutable()) return true;
      }
    }
    const TypePtr& t = cases.args[0]->static_type;
    if (!t) return false;
    Enumeration all = enumerate_all(substitute(t, ctx.type_params()), kDefaultFiniteSize, ctx);
    if (!all.exhausted) return false;
    for (const auto& v : all.values) {
      bool hit = false;
      for (const auto& alt : cases.alts) {
        for (const auto& p : alt.patterns) hit = hit || match_pattern(p, v, ctx).has_value();
      }
      if (!hit) return false;
    }
    return true;
  }
};

}  // namespace

std::unique_ptr<Strategy> make_fixed_strategy() { return std::make_unique<FixedStrategy>(); }
std::unique_ptr<Strategy> make_random_strategy() { return std::make_unique<RandomStrategy>(); }
std::unique_ptr<Strategy> make_trivial_strategy() { return std::make_unique<TrivialStrategy>(); }
std::unique_ptr<Strategy> make_finite_strategy() { return std::make_unique<FiniteStrategy>(); }
std::unique_ptr<Strategy> make_search_strategy() { return std::make_unique<SearchStrategy>(); }
std::unique_ptr<Strategy> make_direct_strategy() { return std::make_unique<DirectStrategy>(); }

}  // namespace specqc
