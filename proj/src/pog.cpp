#include "specqc/pog.hpp"

#include "specqc/checker.hpp"
#include "specqc/printer.hpp"

#include <functional>
#include <sstream>

namespace specqc {

std::string_view kind_name(PoKind k) {
  switch (k) {
    case PoKind::SeqApply: return "sequence apply";
    case PoKind::MapApply: return "map apply";
    case PoKind::NonZero: return "non-zero";
    case PoKind::NonEmptySeq: return "non-empty sequence";
    case PoKind::CasesExhaustive: return "cases exhaustive";
    case PoKind::Subtype: return "subtype";
    case PoKind::LetBeExists: return "let be st existence";
    case PoKind::PostCondition: return "post condition";
    case PoKind::StateInvariant: return "state invariant";
  }
  return "unknown";
}

bool reads_state(const Expr& e) {
  if (e.kind == ExprKind::Var && e.scope == VarScope::StateField) return true;
  bool found = false;
  for_each_child(e, [&](const Expr& c) { found = found || reads_state(c); });
  return found;
}

namespace {

ExprPtr synth(ExprPtr e) {
  e->synthetic = true;
  return e;
}

ExprPtr unary(Op op, ExprPtr a) { return synth(exprs::unary(op, std::move(a))); }
ExprPtr binary(Op op, ExprPtr l, ExprPtr r) { return synth(exprs::binary(op, std::move(l), std::move(r))); }
ExprPtr literal(Value v) { return synth(exprs::literal(std::move(v))); }

ExprPtr quantified(ExprKind kind, std::vector<Bind> binds, ExprPtr body) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->binds = std::move(binds);
  e->args = {std::move(body)};
  return synth(e);
}

ExprPtr call(const std::string& name, std::vector<ExprPtr> args) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::Apply;
  e->args.push_back(synth(exprs::var(name)));
  for (auto& a : args) e->args.push_back(std::move(a));
  return synth(e);
}

ExprPtr singleton(const ExprPtr& v) {
  auto e = std::make_shared<Expr>();
  e->kind = ExprKind::SetEnum;
  e->args = {v};
  return synth(e);
}

Bind set_bind(Pattern p, ExprPtr set) {
  Bind b;
  b.pattern = std::move(p);
  b.set = std::move(set);
  return b;
}

/// Expression denoting the value a pattern matched; null for `-`.
ExprPtr pattern_expr(const Pattern& p) {
  switch (p.kind) {
    case PatternKind::Identifier: return synth(exprs::var(p.name));
    case PatternKind::DontCare: return nullptr;
    case PatternKind::Literal: return literal(p.literal);
    case PatternKind::Tuple:
    case PatternKind::Record:
    case PatternKind::SeqEnum: {
      auto e = std::make_shared<Expr>();
      e->kind = p.kind == PatternKind::Tuple    ? ExprKind::TupleCons
                : p.kind == PatternKind::Record ? ExprKind::RecordCons
                                                : ExprKind::SeqEnum;
      e->name = p.name;
      for (const auto& item : p.items) {
        ExprPtr x = pattern_expr(item);
        if (!x) return nullptr;
        e->args.push_back(std::move(x));
      }
      return synth(e);
    }
  }
  return nullptr;
}

/// `e` can match `p`: true for irrefutable patterns.
ExprPtr matches(const Pattern& p, const ExprPtr& e) {
  if (p.irrefutable()) return literal(Value::boolean(true));
  if (p.kind == PatternKind::Literal) return binary(Op::Equal, e, literal(p.literal));
  return quantified(ExprKind::Exists, {set_bind(p, singleton(e))}, literal(Value::boolean(true)));
}

class Generator {
 public:
  explicit Generator(const SpecModule& m) : m_(m) {}

  std::vector<ProofObligation> run() {
    for (const auto& ref : m_.order) {
      if (ref.kind == DefinitionKind::Function) function(m_.function_defs[ref.index]);
      if (ref.kind == DefinitionKind::State) state();
    }
    for (std::size_t i = 0; i < out_.size(); ++i) out_[i].number = static_cast<int>(i) + 1;
    return std::move(out_);
  }

 private:
  using Wrapper = std::function<ExprPtr(ExprPtr)>;

  void function(const FunctionDef& f) {
    f_ = &f;
    reads_state_ = reads_state(*f.body) || (f.pre && reads_state(*f.pre)) || (f.post && reads_state(*f.post));
    walk(f.body);

    const TypePtr body_type = f.body->static_type ? f.body->static_type : types::unknown();
    if (f.total_arrow || has_invariant(f.return_type, m_) || !is_subtype(body_type, f.return_type, m_)) {
      auto is = std::make_shared<Expr>();
      is->kind = ExprKind::IsType;
      is->args = {f.body};
      is->type = f.return_type;
      emit(PoKind::Subtype, f.body_location, synth(is), f.body.get());
    }
    if (f.post) {
      std::vector<ExprPtr> args;
      bool ok = true;
      for (const auto& p : f.param_patterns) {
        ExprPtr a = pattern_expr(p);
        ok = ok && a;
        args.push_back(std::move(a));
      }
      if (ok) {
        args.push_back(f.body);
        emit(PoKind::PostCondition, f.post->location, call("post_" + f.name, std::move(args)), f.post.get());
      }
    }
    f_ = nullptr;
  }

  void state() {
    const StateDef& s = *m_.state;
    if (!s.init || !s.inv || s.init_pattern->kind != PatternKind::Identifier) return;
    ExprPtr self = synth(exprs::var(s.init_pattern->name));
    ExprPtr body = binary(Op::Implies, s.init, call("inv_" + s.name, {self}));
    ProofObligation po;
    po.kind = PoKind::StateInvariant;
    po.owner = s.name;
    po.location = s.location;
    po.expr = quantified(ExprKind::Forall, {make_type_bind(*s.init_pattern, types::named(s.name))}, body);
    po.executable = false;
    po.source = s.init.get();
    check_expression(po.expr, m_);
    out_.push_back(std::move(po));
  }

  void emit(PoKind kind, const Location& where, ExprPtr obligation, const Expr* source) {
    ExprPtr body = std::move(obligation);
    for (auto it = wrappers_.rbegin(); it != wrappers_.rend(); ++it) body = (*it)(body);

    ProofObligation po;
    po.kind = kind;
    po.owner = f_->name;
    po.location = where;
    po.function = f_;
    po.source = source;
    po.type_params = f_->type_params;
    po.executable = !reads_state_;

    if (f_->pre) {
      std::vector<ExprPtr> args;
      bool ok = true;
      for (const auto& p : f_->param_patterns) {
        ExprPtr a = pattern_expr(p);
        ok = ok && a;
        args.push_back(std::move(a));
      }
      if (ok) {
        body = binary(Op::Implies, call("pre_" + f_->name, std::move(args)), body);
        po.pre_guarded = true;
      }
    }
    if (!f_->param_patterns.empty()) {
      std::vector<Bind> binds;
      for (std::size_t i = 0; i < f_->param_patterns.size(); ++i) {
        binds.push_back(make_type_bind(f_->param_patterns[i], f_->param_types[i]));
      }
      body = quantified(ExprKind::Forall, std::move(binds), body);
    }
    po.polarity = body->kind == ExprKind::Exists ? Polarity::Existential : Polarity::Universal;
    po.expr = body;
    check_expression(po.expr, m_, {}, f_->type_params);
    if (reads_state(*po.expr)) po.executable = false;
    out_.push_back(std::move(po));
  }

  /// Path condition: `(guard => po)`, printed with its own parentheses.
  static Wrapper guard(ExprPtr cond) {
    return [cond](ExprPtr po) { return exprs::binary(Op::Implies, cond, std::move(po)); };
  }

  static Wrapper forall(std::vector<Bind> binds) {
    return [binds](ExprPtr po) { return quantified(ExprKind::Forall, binds, std::move(po)); };
  }

  template <typename F>
  void with(Wrapper w, F&& f) {
    wrappers_.push_back(std::move(w));
    f();
    wrappers_.pop_back();
  }

  void walk_binds(const std::vector<Bind>& binds) {
    for (const auto& b : binds) {
      if (b.set) walk(b.set);
    }
  }

  void walk(const ExprPtr& ep) {
    if (!ep) return;
    const Expr& e = *ep;
    switch (e.kind) {
      case ExprKind::Literal:
      case ExprKind::Var:
      case ExprKind::FunInstance: return;
      case ExprKind::Unary:
        if (e.op == Op::Hd || e.op == Op::Tl) {
          emit(PoKind::NonEmptySeq, e.location, binary(Op::NotEqual, e.args[0], synth(exprs::literal(Value::seq({})))),
               &e);
        }
        walk(e.args[0]);
        return;
      case ExprKind::Binary: binary_node(e); return;
      case ExprKind::If: if_node(e); return;
      case ExprKind::Cases: cases_node(e); return;
      case ExprKind::Let: let_node(e, 0); return;
      case ExprKind::LetBe: {
        walk_binds(e.binds);
        ExprPtr pred = e.args[0] ? e.args[0] : literal(Value::boolean(true));
        emit(PoKind::LetBeExists, e.location, quantified(ExprKind::Exists, e.binds, pred), &e);
        with(forall(e.binds), [&] {
          walk(e.args[0]);
          if (e.args[0]) {
            with(guard(e.args[0]), [&] { walk(e.args[1]); });
          } else {
            walk(e.args[1]);
          }
        });
        return;
      }
      case ExprKind::Forall:
      case ExprKind::Exists:
      case ExprKind::Exists1:
        walk_binds(e.binds);
        with(forall(e.binds), [&] { walk(e.args[0]); });
        return;
      case ExprKind::SetComp:
      case ExprKind::SeqComp:
      case ExprKind::MapComp: {
        walk_binds(e.binds);
        const std::size_t pred = e.kind == ExprKind::MapComp ? 2 : 1;
        with(forall(e.binds), [&] {
          walk(e.args[pred]);
          auto elems = [&] {
            for (std::size_t i = 0; i < pred; ++i) walk(e.args[i]);
          };
          if (e.args[pred]) {
            with(guard(e.args[pred]), elems);
          } else {
            elems();
          }
        });
        return;
      }
      case ExprKind::Apply:
        if (e.apply == ApplyKind::SeqIndex) {
          emit(PoKind::SeqApply, e.location,
               binary(Op::InSet, e.args[1], unary(Op::Inds, e.args[0])), &e);
        } else if (e.apply == ApplyKind::MapLookup) {
          emit(PoKind::MapApply, e.location, binary(Op::InSet, e.args[1], unary(Op::Dom, e.args[0])), &e);
        }
        if (e.args[0]->kind != ExprKind::Var) walk(e.args[0]);
        for (std::size_t i = 1; i < e.args.size(); ++i) walk(e.args[i]);
        return;
      default:
        for (const auto& a : e.args) walk(a);
        return;
    }
  }

  void binary_node(const Expr& e) {
    const ExprPtr& l = e.args[0];
    const ExprPtr& r = e.args[1];
    switch (e.op) {
      case Op::And:
      case Op::Implies:
        walk(l);
        with(guard(l), [&] { walk(r); });
        return;
      case Op::Or:
        walk(l);
        with(guard(unary(Op::Not, l)), [&] { walk(r); });
        return;
      case Op::Divide:
      case Op::Div:
      case Op::Mod:
      case Op::Rem:
        emit(PoKind::NonZero, e.location, binary(Op::NotEqual, r, synth(exprs::literal(Value::integer(0)))), &e);
        break;
      default: break;
    }
    walk(l);
    walk(r);
  }

  void if_node(const Expr& e) {
    std::vector<Wrapper> negations;
    auto under = [&](const std::vector<Wrapper>& ws, const std::function<void()>& f) {
      const std::size_t size = wrappers_.size();
      wrappers_.insert(wrappers_.end(), ws.begin(), ws.end());
      f();
      wrappers_.resize(size);
    };
    for (std::size_t i = 0; i + 1 < e.args.size(); i += 2) {
      const ExprPtr& cond = e.args[i];
      under(negations, [&] {
        walk(cond);
        with(guard(cond), [&] { walk(e.args[i + 1]); });
      });
      negations.push_back(guard(unary(Op::Not, cond)));
    }
    under(negations, [&] { walk(e.args.back()); });
  }

  void cases_node(const Expr& e) {
    const ExprPtr& scrutinee = e.args[0];
    walk(scrutinee);
    if (!e.others) {
      ExprPtr any;
      for (const auto& alt : e.alts) {
        for (const auto& p : alt.patterns) {
          ExprPtr m = matches(p, scrutinee);
          any = any ? binary(Op::Or, any, m) : m;
        }
      }
      if (any) emit(PoKind::CasesExhaustive, e.location, any, &e);
    }
    std::vector<Wrapper> misses;
    bool reachable = true;
    for (const auto& alt : e.alts) {
      if (!reachable) break;
      const std::size_t size = wrappers_.size();
      wrappers_.insert(wrappers_.end(), misses.begin(), misses.end());
      if (alt.patterns.size() == 1) {
        const Pattern& p = alt.patterns[0];
        if (p.kind == PatternKind::Identifier) {
          LetDef def{p, nullptr, scrutinee};
          wrappers_.push_back([def](ExprPtr po) {
            auto let = std::make_shared<Expr>();
            let->kind = ExprKind::Let;
            let->defs = {def};
            let->args = {std::move(po)};
            return synth(let);
          });
        } else if (p.kind == PatternKind::Literal) {
          wrappers_.push_back(guard(matches(p, scrutinee)));
        } else if (p.kind != PatternKind::DontCare) {
          wrappers_.push_back(forall({set_bind(p, singleton(scrutinee))}));
        }
      }
      walk(alt.body);
      wrappers_.resize(size);
      for (const auto& p : alt.patterns) {
        if (p.irrefutable()) reachable = false;
        misses.push_back(guard(unary(Op::Not, matches(p, scrutinee))));
      }
    }
    if (e.others && reachable) {
      const std::size_t size = wrappers_.size();
      wrappers_.insert(wrappers_.end(), misses.begin(), misses.end());
      walk(e.others);
      wrappers_.resize(size);
    }
  }

  void let_node(const Expr& e, std::size_t i) {
    if (i == e.defs.size()) {
      walk(e.args[0]);
      return;
    }
    const LetDef& def = e.defs[i];
    walk(def.value);
    with(
        [def](ExprPtr po) {
          auto let = std::make_shared<Expr>();
          let->kind = ExprKind::Let;
          let->defs = {def};
          let->args = {std::move(po)};
          return synth(let);
        },
        [&] { let_node(e, i + 1); });
  }

  const SpecModule& m_;
  const FunctionDef* f_ = nullptr;
  bool reads_state_ = false;
  std::vector<Wrapper> wrappers_;
  std::vector<ProofObligation> out_;
};

}  // namespace

std::vector<ProofObligation> generate_pos(const SpecModule& m) { return Generator(m).run(); }

std::string render_po_body(const ProofObligation& po) {
  std::ostringstream os;
  os << po.owner << ": " << kind_name(po.kind) << " obligation in " << po.location.file_name() << " at line "
     << po.location.line << ':' << po.location.column << '\n';
  const Expr& e = *po.expr;
  if ((e.kind == ExprKind::Forall || e.kind == ExprKind::Exists) && po.function &&
      !po.function->param_patterns.empty()) {
    os << '(' << (e.kind == ExprKind::Forall ? "forall " : "exists ") << render_binds(e.binds) << " &\n"
       << (po.pre_guarded ? "    " : "  ") << render_expr(e.args[0]) << ')';
  } else {
    os << render_expr(e);
  }
  return os.str();
}

std::string render_po(const ProofObligation& po) {
  return "Proof Obligation " + std::to_string(po.number) + ": (Unproved)\n" + render_po_body(po);
}

std::string render_pog(const std::vector<ProofObligation>& pos) {
  std::string out = "Generated " + std::to_string(pos.size()) + " proof obligation" + (pos.size() == 1 ? "" : "s") + ":\n";
  for (const auto& po : pos) out += "\n" + render_po(po) + "\n";
  return out;
}

}  // namespace specqc
