#include "specqc/printer.hpp"

#include <sstream>

namespace specqc {

namespace {

int precedence(Op op) {
  switch (op) {
    case Op::Equiv: return 1;
    case Op::Implies: return 2;
    case Op::Or: return 3;
    case Op::And: return 4;
    case Op::Not: return 5;
    case Op::Equal:
    case Op::NotEqual:
    case Op::Less:
    case Op::LessEq:
    case Op::Greater:
    case Op::GreaterEq:
    case Op::Subset:
    case Op::PSubset:
    case Op::InSet:
    case Op::NotInSet: return 6;
    case Op::Plus:
    case Op::Minus:
    case Op::Union:
    case Op::Difference:
    case Op::Munion:
    case Op::Override:
    case Op::Concat: return 7;
    case Op::Times:
    case Op::Divide:
    case Op::Div:
    case Op::Mod:
    case Op::Rem:
    case Op::Inter: return 8;
    default: return 9;  // prefix operators
  }
}

/// Precedence an unparenthesised rendering of `e` occupies.
int rendered_precedence(const Expr& e) {
  if (!e.synthetic) return 10;
  if (e.kind == ExprKind::Binary || e.kind == ExprKind::Unary) return precedence(e.op);
  return 10;
}

bool is_word_op(Op op) {
  const auto t = op_text(op);
  return !t.empty() && std::isalpha(static_cast<unsigned char>(t[0]));
}

class Printer {
 public:
  std::string str() const { return os_.str(); }

  void expr(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Literal: os_ << e.literal; break;
      case ExprKind::Var: os_ << e.name; break;
      case ExprKind::Unary: unary(e); break;
      case ExprKind::Binary: binary(e); break;
      case ExprKind::If: {
        os_ << "(if ";
        const auto& a = e.args;
        expr(*a[0]);
        os_ << " then ";
        expr(*a[1]);
        for (std::size_t i = 2; i + 1 < a.size(); i += 2) {
          os_ << " elseif ";
          expr(*a[i]);
          os_ << " then ";
          expr(*a[i + 1]);
        }
        os_ << " else ";
        expr(*a.back());
        os_ << ')';
        break;
      }
      case ExprKind::Cases: {
        os_ << "cases ";
        expr(*e.args[0]);
        os_ << ": ";
        bool first = true;
        for (const auto& alt : e.alts) {
          if (!first) os_ << ", ";
          first = false;
          for (std::size_t i = 0; i < alt.patterns.size(); ++i) {
            if (i > 0) os_ << ", ";
            os_ << render_pattern(alt.patterns[i]);
          }
          os_ << " -> ";
          expr(*alt.body);
        }
        if (e.others) {
          if (!first) os_ << ", ";
          os_ << "others -> ";
          expr(*e.others);
        }
        os_ << " end";
        break;
      }
      case ExprKind::Let: {
        os_ << "(let ";
        for (std::size_t i = 0; i < e.defs.size(); ++i) {
          if (i > 0) os_ << ", ";
          os_ << render_pattern(e.defs[i].pattern);
          if (e.defs[i].type) os_ << ":" << render_type(e.defs[i].type);
          os_ << " = ";
          expr(*e.defs[i].value);
        }
        os_ << " in ";
        expr(*e.args[0]);
        os_ << ')';
        break;
      }
      case ExprKind::LetBe:
        os_ << "(let " << render_binds(e.binds);
        if (e.args[0]) {
          os_ << " be st ";
          expr(*e.args[0]);
        }
        os_ << " in ";
        expr(*e.args[1]);
        os_ << ')';
        break;
      case ExprKind::Forall:
      case ExprKind::Exists:
      case ExprKind::Exists1:
        os_ << '(' << (e.kind == ExprKind::Forall ? "forall " : e.kind == ExprKind::Exists ? "exists " : "exists1 ")
            << render_binds(e.binds) << " & ";
        expr(*e.args[0]);
        os_ << ')';
        break;
      case ExprKind::Apply:
        callee(*e.args[0]);
        os_ << '(';
        list(e.args, 1);
        os_ << ')';
        break;
      case ExprKind::FunInstance:
        os_ << e.name << '[';
        for (std::size_t i = 0; i < e.type_args.size(); ++i) {
          if (i > 0) os_ << ", ";
          os_ << render_type(e.type_args[i]);
        }
        os_ << ']';
        break;
      case ExprKind::SetEnum:
        os_ << '{';
        list(e.args, 0);
        os_ << '}';
        break;
      case ExprKind::SetRange:
        os_ << '{';
        expr(*e.args[0]);
        os_ << ", ..., ";
        expr(*e.args[1]);
        os_ << '}';
        break;
      case ExprKind::SetComp:
        os_ << '{';
        expr(*e.args[0]);
        comprehension_tail(e, e.args[1]);
        os_ << '}';
        break;
      case ExprKind::SeqEnum:
        os_ << '[';
        list(e.args, 0);
        os_ << ']';
        break;
      case ExprKind::SeqComp:
        os_ << '[';
        expr(*e.args[0]);
        comprehension_tail(e, e.args[1]);
        os_ << ']';
        break;
      case ExprKind::MapEnum:
        if (e.args.empty()) {
          os_ << "{|->}";
          break;
        }
        os_ << '{';
        for (std::size_t i = 0; i + 1 < e.args.size(); i += 2) {
          if (i > 0) os_ << ", ";
          expr(*e.args[i]);
          os_ << " |-> ";
          expr(*e.args[i + 1]);
        }
        os_ << '}';
        break;
      case ExprKind::MapComp:
        os_ << '{';
        expr(*e.args[0]);
        os_ << " |-> ";
        expr(*e.args[1]);
        comprehension_tail(e, e.args[2]);
        os_ << '}';
        break;
      case ExprKind::TupleCons:
      case ExprKind::RecordCons:
        os_ << "mk_" << e.name << '(';
        list(e.args, 0);
        os_ << ')';
        break;
      case ExprKind::FieldSelect:
        callee(*e.args[0]);
        os_ << '.' << e.name;
        break;
      case ExprKind::TupleSelect:
        callee(*e.args[0]);
        os_ << ".#" << e.index;
        break;
      case ExprKind::IsType:
        os_ << "is_(";
        expr(*e.args[0]);
        os_ << ", " << render_type(e.type) << ')';
        break;
    }
  }

 private:
  void list(const std::vector<ExprPtr>& items, std::size_t from) {
    for (std::size_t i = from; i < items.size(); ++i) {
      if (i > from) os_ << ", ";
      expr(*items[i]);
    }
  }

  void comprehension_tail(const Expr& e, const ExprPtr& predicate) {
    os_ << " | " << render_binds(e.binds);
    if (predicate) {
      os_ << " & ";
      expr(*predicate);
    }
  }

  /// Operand of application or selection: only simple forms stay bare.
  void callee(const Expr& e) {
    if (rendered_precedence(e) < 10) {
      os_ << '(';
      expr(e);
      os_ << ')';
    } else {
      expr(e);
    }
  }

  void operand(const Expr& e, bool parens) {
    if (parens) os_ << '(';
    expr(e);
    if (parens) os_ << ')';
  }

  void unary(const Expr& e) {
    const Expr& arg = *e.args[0];
    if (!e.synthetic) os_ << '(';
    os_ << op_text(e.op);
    if (is_word_op(e.op)) os_ << ' ';
    operand(arg, rendered_precedence(arg) < precedence(e.op));
    if (!e.synthetic) os_ << ')';
  }

  void binary(const Expr& e) {
    const int p = precedence(e.op);
    const bool right_assoc = e.op == Op::Implies;
    const int lp = rendered_precedence(*e.args[0]);
    const int rp = rendered_precedence(*e.args[1]);
    if (!e.synthetic) os_ << '(';
    operand(*e.args[0], right_assoc ? lp <= p : lp < p);
    os_ << ' ' << op_text(e.op) << ' ';
    operand(*e.args[1], right_assoc ? rp < p : rp <= p);
    if (!e.synthetic) os_ << ')';
  }

  std::ostringstream os_;
};

std::string param_type(const TypePtr& t) {
  const bool parens = t->kind == TypeKind::Product || t->kind == TypeKind::Union;
  return parens ? "(" + render_type(t) + ")" : render_type(t);
}

std::string fields_text(const std::vector<Field>& fields, const std::string& indent) {
  std::string s;
  for (const auto& f : fields) s += "\n" + indent + f.name + " : " + render_type(f.type);
  return s;
}

}  // namespace

std::string render_expr(const Expr& e) {
  Printer p;
  p.expr(e);
  return p.str();
}

std::string render_bind(const Bind& b) {
  if (b.is_type_bind()) return render_pattern(b.pattern) + ":" + render_type(b.type);
  return render_pattern(b.pattern) + " in set " + render_expr(*b.set);
}

std::string render_binds(const std::vector<Bind>& binds) {
  std::string s;
  for (std::size_t i = 0; i < binds.size(); ++i) {
    if (i > 0) s += ", ";
    s += render_bind(binds[i]);
  }
  return s;
}

std::string render_module(const SpecModule& m) {
  std::ostringstream os;
  std::optional<DefinitionKind> section;
  auto open = [&](DefinitionKind k, const char* header) {
    if (section != k) {
      if (section) os << '\n';
      if (header) os << header << '\n';
      section = k;
    }
  };
  for (const auto& ref : m.order) {
    switch (ref.kind) {
      case DefinitionKind::Type: {
        open(ref.kind, "types");
        const auto& t = m.type_defs[ref.index];
        if (t.type->kind == TypeKind::Record) {
          os << "    " << t.name << " ::" << fields_text(t.type->fields, "        ");
        } else {
          os << "    " << t.name << " = " << render_type(t.type);
        }
        if (t.inv) os << "\n    inv " << render_pattern(*t.inv_pattern) << " == " << render_expr(t.inv);
        os << ";\n";
        break;
      }
      case DefinitionKind::Value: {
        open(ref.kind, "values");
        const auto& v = m.value_defs[ref.index];
        os << "    " << v.name;
        if (v.type) os << " : " << render_type(v.type);
        os << " = " << render_expr(v.value) << ";\n";
        break;
      }
      case DefinitionKind::Function: {
        open(ref.kind, "functions");
        const auto& f = m.function_defs[ref.index];
        std::string tparams;
        if (!f.type_params.empty()) {
          tparams = "[";
          for (std::size_t i = 0; i < f.type_params.size(); ++i) {
            if (i > 0) tparams += ", ";
            tparams += "@" + f.type_params[i];
          }
          tparams += "]";
        }
        os << "    " << f.name << tparams << ": ";
        if (f.param_types.empty()) os << "()";
        for (std::size_t i = 0; i < f.param_types.size(); ++i) {
          if (i > 0) os << " * ";
          os << param_type(f.param_types[i]);
        }
        os << (f.total_arrow ? " +> " : " -> ") << render_type(f.return_type) << '\n';
        os << "    " << f.name << '(';
        for (std::size_t i = 0; i < f.param_patterns.size(); ++i) {
          if (i > 0) os << ", ";
          os << render_pattern(f.param_patterns[i]);
        }
        os << ") ==\n        " << render_expr(f.body);
        if (f.pre) os << "\n    pre " << render_expr(f.pre);
        if (f.post) os << "\n    post " << render_expr(f.post);
        os << ";\n";
        break;
      }
      case DefinitionKind::State: {
        open(ref.kind, nullptr);
        const auto& s = *m.state;
        os << "state " << s.name << " of" << fields_text(s.fields, "    ");
        if (s.inv) os << "\n    inv " << render_pattern(*s.inv_pattern) << " == " << render_expr(s.inv);
        if (s.init) os << "\n    init " << render_pattern(*s.init_pattern) << " == " << render_expr(s.init);
        os << "\nend\n";
        break;
      }
    }
  }
  return os.str();
}

}  // namespace specqc
