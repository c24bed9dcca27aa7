#include "specqc/parser.hpp"

#include <set>

namespace specqc {

namespace {

struct SyntaxError {
  Diagnostic diagnostic;
};

Value parse_number_literal(const std::string& text) {
  std::string mantissa;
  std::string fraction;
  long exponent = 0;
  std::size_t i = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) mantissa += text[i++];
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) fraction += text[i++];
  }
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    exponent = std::stol(text.substr(i + 1));
  }
  Integer value(mantissa + fraction);
  exponent -= static_cast<long>(fraction.size());
  Integer scale = 1;
  for (long k = 0; k < std::labs(exponent); ++k) scale *= 10;
  if (exponent >= 0) return Value::integer(value * scale);
  return Value::number(Rational(value, scale));
}

std::optional<TypeKind> basic_type_keyword(std::string_view w) {
  if (w == "bool") return TypeKind::Bool;
  if (w == "nat") return TypeKind::Nat;
  if (w == "nat1") return TypeKind::Nat1;
  if (w == "int") return TypeKind::Int;
  if (w == "real") return TypeKind::Real;
  if (w == "char") return TypeKind::Char;
  return std::nullopt;
}

std::optional<Op> unary_keyword(std::string_view w) {
  static const std::pair<std::string_view, Op> table[] = {
      {"abs", Op::Abs},     {"floor", Op::Floor}, {"card", Op::Card},     {"len", Op::Len},
      {"hd", Op::Hd},       {"tl", Op::Tl},       {"elems", Op::Elems},   {"inds", Op::Inds},
      {"dom", Op::Dom},     {"rng", Op::Rng},     {"power", Op::Power},   {"dunion", Op::Dunion},
      {"dinter", Op::Dinter}, {"conc", Op::Conc},
  };
  for (const auto& [k, op] : table) {
    if (k == w) return op;
  }
  return std::nullopt;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, std::vector<Diagnostic>& errors)
      : tokens_(std::move(tokens)), errors_(errors) {}

  // ----- entry points --------------------------------------------------

  void parse_document(SpecModule& m, std::vector<AnnotationAnchor>& anchors) {
    while (!at_end()) {
      try {
        if (accept_word("types")) {
          parse_types(m);
        } else if (accept_word("values")) {
          parse_values(m);
        } else if (accept_word("functions")) {
          parse_functions(m, anchors);
        } else if (accept_word("state")) {
          parse_state(m);
        } else {
          fail("Expected 'types', 'values', 'functions' or 'state'");
        }
      } catch (const SyntaxError& e) {
        errors_.push_back(e.diagnostic);
        resync();
      }
    }
  }

  ExprPtr parse_standalone_expression() {
    auto e = expression();
    expect_end();
    return e;
  }

  TypePtr parse_standalone_type() {
    auto t = type();
    expect_end();
    return t;
  }

  Bind parse_standalone_type_bind() {
    Pattern p = pattern();
    expect(":");
    TypePtr t = type();
    expect_end();
    return make_type_bind(std::move(p), std::move(t));
  }

  /// Used when a caller needs partial success (annotations).
  template <typename F>
  bool attempt(F&& f) {
    try {
      f();
      return true;
    } catch (const SyntaxError& e) {
      errors_.push_back(e.diagnostic);
      return false;
    }
  }

  std::vector<TypePtr> annotation_types() {
    std::vector<TypePtr> out{type()};
    while (accept(",")) out.push_back(type());
    accept(";");
    expect_end();
    return out;
  }

  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t i = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[i];
  }

  bool accept(std::string_view sym) {
    if (is_symbol(sym)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(std::string_view sym) {
    if (!accept(sym)) fail("Expected '" + std::string(sym) + "'");
  }

  std::string identifier() {
    const Token& t = peek();
    if (t.kind != TokenKind::Identifier || is_reserved_word(t.text)) fail("Expected identifier");
    ++pos_;
    return t.text;
  }

 private:
  // ----- token helpers --------------------------------------------------

  bool at_end() const { return peek().kind == TokenKind::End; }

  bool is_symbol(std::string_view sym, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokenKind::Symbol && t.text == sym;
  }

  bool is_word(std::string_view w, std::size_t ahead = 0) const {
    const Token& t = peek(ahead);
    return t.kind == TokenKind::Identifier && t.text == w;
  }

  bool accept_word(std::string_view w) {
    if (is_word(w)) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect_word(std::string_view w) {
    if (!accept_word(w)) fail("Expected '" + std::string(w) + "'");
  }

  bool at_definition_name() const {
    const Token& t = peek();
    return t.kind == TokenKind::Identifier && !is_reserved_word(t.text);
  }

  void expect_end() {
    if (!at_end()) fail("Unexpected '" + token_text(peek()) + "'");
  }

  static std::string token_text(const Token& t) {
    switch (t.kind) {
      case TokenKind::End: return "end of input";
      case TokenKind::MkName: return "mk_" + t.text;
      case TokenKind::IsName: return "is_" + t.text;
      case TokenKind::Quote: return "<" + t.text + ">";
      case TokenKind::String: return "\"" + t.text + "\"";
      case TokenKind::Character: return "'" + t.text + "'";
      default: return t.text;
    }
  }

  [[noreturn]] void fail(std::string message) const {
    const Token& t = peek();
    if (t.kind != TokenKind::End) message += ", found '" + token_text(t) + "'";
    throw SyntaxError{Diagnostic{t.location, std::move(message)}};
  }

  /// Skips to just after the next `;` or to the next section keyword.
  void resync() {
    const std::size_t start = pos_;
    while (!at_end()) {
      if (pos_ > start && (is_word("types") || is_word("values") || is_word("functions") || is_word("state")))
        return;
      if (accept(";")) return;
      ++pos_;
    }
  }

  /// Parses definitions until the next section; errors skip one definition.
  template <typename F>
  void definitions(F&& one) {
    while (at_definition_name()) {
      try {
        one();
        accept(";");
      } catch (const SyntaxError& e) {
        errors_.push_back(e.diagnostic);
        resync();
      }
    }
  }

  // ----- sections -------------------------------------------------------

  void parse_types(SpecModule& m) {
    definitions([&] {
      TypeDef def;
      def.location = peek().location;
      def.name = identifier();
      if (accept("::")) {
        def.type = types::record(def.name, fields());
      } else {
        expect("=");
        def.type = type();
      }
      if (accept_word("inv")) {
        def.inv_pattern = pattern();
        expect("==");
        def.inv = expression();
      }
      m.order.push_back({DefinitionKind::Type, m.type_defs.size()});
      m.type_defs.push_back(std::move(def));
    });
  }

  std::vector<Field> fields() {
    std::vector<Field> out;
    while (peek().kind == TokenKind::Identifier && !is_reserved_word(peek().text) && is_symbol(":", 1)) {
      Field f;
      f.name = identifier();
      expect(":");
      f.type = type();
      out.push_back(std::move(f));
    }
    return out;
  }

  void parse_values(SpecModule& m) {
    definitions([&] {
      ValueDef def;
      def.location = peek().location;
      def.name = identifier();
      if (accept(":")) def.type = type();
      expect("=");
      def.value = expression();
      m.order.push_back({DefinitionKind::Value, m.value_defs.size()});
      m.value_defs.push_back(std::move(def));
    });
  }

  void parse_functions(SpecModule& m, std::vector<AnnotationAnchor>& anchors) {
    definitions([&] {
      FunctionDef def;
      const int after_line = pos_ > 0 ? tokens_[pos_ - 1].location.line : 0;
      def.location = peek().location;
      def.name = identifier();
      if (accept("[")) def.type_params = type_param_list();
      expect(":");
      if (is_symbol("(") && is_symbol(")", 1)) {
        pos_ += 2;
      } else {
        def.param_types = product_components();
        if (is_symbol("|")) {
          std::vector<TypePtr> members{def.param_types.size() == 1 ? def.param_types[0]
                                                                   : types::product(def.param_types)};
          while (accept("|")) members.push_back(product_type());
          def.param_types = {types::union_of(std::move(members))};
        }
      }
      if (accept("+>")) {
        def.total_arrow = true;
      } else {
        expect("->");
      }
      def.return_type = type();

      const Token& second = peek();
      if (second.kind != TokenKind::Identifier || second.text != def.name) {
        fail("Expected definition of '" + def.name + "'");
      }
      ++pos_;
      if (accept("[")) {
        auto repeated = type_param_list();
        if (repeated != def.type_params) fail("Type parameters of '" + def.name + "' do not match its signature");
      }
      expect("(");
      if (!is_symbol(")")) {
        def.param_patterns.push_back(pattern());
        while (accept(",")) def.param_patterns.push_back(pattern());
      }
      expect(")");
      expect("==");
      def.body_location = peek().location;
      def.body = expression();
      if (accept_word("pre")) def.pre = expression();
      if (accept_word("post")) def.post = expression();
      if (def.param_patterns.size() != def.param_types.size()) {
        throw SyntaxError{Diagnostic{def.location, "Function '" + def.name + "' has " +
                                                       std::to_string(def.param_types.size()) +
                                                       " parameter type(s) but " +
                                                       std::to_string(def.param_patterns.size()) + " pattern(s)"}};
      }
      anchors.push_back(AnnotationAnchor{def.name, def.type_params, after_line, def.location.line,
                                         def.location.file_name()});
      m.order.push_back({DefinitionKind::Function, m.function_defs.size()});
      m.function_defs.push_back(std::move(def));
    });
  }

  std::vector<std::string> type_param_list() {
    std::vector<std::string> out;
    do {
      expect("@");
      out.push_back(identifier());
    } while (accept(","));
    expect("]");
    return out;
  }

  void parse_state(SpecModule& m) {
    StateDef def;
    def.location = peek().location;
    def.name = identifier();
    expect_word("of");
    def.fields = fields();
    if (accept_word("inv")) {
      def.inv_pattern = pattern();
      expect("==");
      def.inv = expression();
    }
    if (accept_word("init")) {
      def.init_pattern = pattern();
      expect("==");
      def.init = expression();
    }
    expect_word("end");
    accept(";");
    if (m.state) {
      throw SyntaxError{Diagnostic{def.location, "Only one state definition is allowed"}};
    }
    TypeDef record;
    record.name = def.name;
    record.type = types::record(def.name, def.fields);
    record.inv_pattern = def.inv_pattern;
    record.inv = def.inv;
    record.location = def.location;
    m.order.push_back({DefinitionKind::State, 0});
    m.type_defs.push_back(std::move(record));
    m.state = std::move(def);
  }

  // ----- types ------------------------------------------------------------

 public:
  TypePtr type() {
    std::vector<TypePtr> members{product_type()};
    while (accept("|")) members.push_back(product_type());
    if (members.size() == 1) return members[0];
    return types::union_of(std::move(members));
  }

 private:
  TypePtr product_type() {
    auto parts = product_components();
    if (parts.size() == 1) return parts[0];
    return types::product(std::move(parts));
  }

  std::vector<TypePtr> product_components() {
    std::vector<TypePtr> parts{basic_type()};
    while (accept("*")) parts.push_back(basic_type());
    return parts;
  }

  TypePtr basic_type() {
    const Token& t = peek();
    if (t.kind == TokenKind::Quote) {
      ++pos_;
      return types::quote(t.text);
    }
    if (accept("(")) {
      auto inner = type();
      expect(")");
      return inner;
    }
    if (accept("[")) {
      auto inner = type();
      expect("]");
      return types::optional(std::move(inner));
    }
    if (accept("@")) return types::param(identifier());
    if (t.kind == TokenKind::Identifier) {
      if (auto k = basic_type_keyword(t.text)) {
        ++pos_;
        return types::basic(*k);
      }
      if (accept_word("seq")) {
        expect_word("of");
        return types::seq_of(basic_type());
      }
      if (accept_word("set")) {
        expect_word("of");
        return types::set_of(basic_type());
      }
      if (accept_word("map")) {
        auto dom = basic_type();
        expect_word("to");
        return types::map_of(std::move(dom), basic_type());
      }
      if (!is_reserved_word(t.text)) {
        ++pos_;
        return types::named(t.text);
      }
    }
    fail("Expected type");
  }

  // ----- patterns -------------------------------------------------------

 public:
  Pattern pattern() {
    Pattern p;
    p.location = peek().location;
    const Token& t = peek();
    if (t.kind == TokenKind::Symbol && t.text == "-") {
      if (peek(1).kind == TokenKind::Number) {
        pos_ += 2;
        p.kind = PatternKind::Literal;
        p.literal = negate(parse_number_literal(tokens_[pos_ - 1].text));
        return p;
      }
      ++pos_;
      p.kind = PatternKind::DontCare;
      return p;
    }
    if (auto lit = literal_token()) {
      p.kind = PatternKind::Literal;
      p.literal = *lit;
      return p;
    }
    if (t.kind == TokenKind::MkName) {
      ++pos_;
      p.kind = t.text.empty() ? PatternKind::Tuple : PatternKind::Record;
      p.name = t.text;
      expect("(");
      if (!is_symbol(")")) {
        p.items.push_back(pattern());
        while (accept(",")) p.items.push_back(pattern());
      }
      expect(")");
      return p;
    }
    if (accept("[")) {
      p.kind = PatternKind::SeqEnum;
      if (!is_symbol("]")) {
        p.items.push_back(pattern());
        while (accept(",")) p.items.push_back(pattern());
      }
      expect("]");
      return p;
    }
    p.kind = PatternKind::Identifier;
    p.name = identifier();
    return p;
  }

 private:
  static Value negate(const Value& v) { return Value::number(-v.as_rational()); }

  std::optional<Value> literal_token() {
    const Token& t = peek();
    switch (t.kind) {
      case TokenKind::Number:
        ++pos_;
        return parse_number_literal(t.text);
      case TokenKind::Character:
        ++pos_;
        return Value::character(static_cast<unsigned char>(t.text[0]));
      case TokenKind::String:
        ++pos_;
        return Value::string(t.text);
      case TokenKind::Quote:
        ++pos_;
        return Value::quote(t.text);
      case TokenKind::Identifier:
        if (t.text == "true" || t.text == "false") {
          ++pos_;
          return Value::boolean(t.text == "true");
        }
        if (t.text == "nil") {
          ++pos_;
          return Value::nil();
        }
        return std::nullopt;
      default:
        return std::nullopt;
    }
  }

  // ----- binds --------------------------------------------------------------

  /// `p1, p2 : T` or `p1, p2 in set S`, expanded to one Bind per pattern.
  void multiple_bind(std::vector<Bind>& out) {
    std::vector<Pattern> patterns{pattern()};
    while (accept(",")) patterns.push_back(pattern());
    if (accept(":")) {
      TypePtr t = type();
      for (auto& p : patterns) out.push_back(make_type_bind(std::move(p), t));
    } else if (is_word("in") && is_word("set", 1)) {
      pos_ += 2;
      ExprPtr s = expression();
      for (auto& p : patterns) {
        Bind b;
        b.pattern = std::move(p);
        b.set = s;
        out.push_back(std::move(b));
      }
    } else {
      fail("Expected ':' or 'in set' in bind");
    }
  }

  std::vector<Bind> bind_list() {
    std::vector<Bind> out;
    multiple_bind(out);
    while (accept(",")) multiple_bind(out);
    return out;
  }

  // ----- expressions ------------------------------------------------------

 public:
  ExprPtr expression() { return equivalence(); }

 private:
  ExprPtr make(ExprKind kind, Location loc) {
    auto e = std::make_shared<Expr>();
    e->kind = kind;
    e->location = std::move(loc);
    return e;
  }

  ExprPtr equivalence() {
    auto left = implication();
    while (is_symbol("<=>")) {
      Location loc = peek().location;
      ++pos_;
      left = exprs::binary(Op::Equiv, left, implication(), loc);
    }
    return left;
  }

  ExprPtr implication() {
    auto left = disjunction();
    if (is_symbol("=>")) {
      Location loc = peek().location;
      ++pos_;
      return exprs::binary(Op::Implies, left, implication(), loc);
    }
    return left;
  }

  ExprPtr disjunction() {
    auto left = conjunction();
    while (is_word("or")) {
      Location loc = peek().location;
      ++pos_;
      left = exprs::binary(Op::Or, left, conjunction(), loc);
    }
    return left;
  }

  ExprPtr conjunction() {
    auto left = negation();
    while (is_word("and")) {
      Location loc = peek().location;
      ++pos_;
      left = exprs::binary(Op::And, left, negation(), loc);
    }
    return left;
  }

  ExprPtr negation() {
    if (is_word("not") && !(is_word("in", 1) && is_word("set", 2))) {
      Location loc = peek().location;
      ++pos_;
      return exprs::unary(Op::Not, negation(), loc);
    }
    return relation();
  }

  ExprPtr relation() {
    auto left = additive();
    Location loc = peek().location;
    std::optional<Op> op;
    std::size_t width = 1;
    const Token& t = peek();
    if (t.kind == TokenKind::Symbol) {
      if (t.text == "=") op = Op::Equal;
      else if (t.text == "<>") op = Op::NotEqual;
      else if (t.text == "<") op = Op::Less;
      else if (t.text == "<=") op = Op::LessEq;
      else if (t.text == ">") op = Op::Greater;
      else if (t.text == ">=") op = Op::GreaterEq;
    } else if (t.kind == TokenKind::Identifier) {
      if (t.text == "subset") op = Op::Subset;
      else if (t.text == "psubset") op = Op::PSubset;
      else if (t.text == "in" && is_word("set", 1)) {
        op = Op::InSet;
        width = 2;
      } else if (t.text == "not" && is_word("in", 1) && is_word("set", 2)) {
        op = Op::NotInSet;
        width = 3;
      }
    }
    if (!op) return left;
    pos_ += width;
    return exprs::binary(*op, left, additive(), loc);
  }

  ExprPtr additive() {
    auto left = multiplicative();
    for (;;) {
      const Token& t = peek();
      std::optional<Op> op;
      if (t.kind == TokenKind::Symbol) {
        if (t.text == "+") op = Op::Plus;
        else if (t.text == "-") op = Op::Minus;
        else if (t.text == "\\") op = Op::Difference;
        else if (t.text == "++") op = Op::Override;
        else if (t.text == "^") op = Op::Concat;
      } else if (t.kind == TokenKind::Identifier) {
        if (t.text == "union") op = Op::Union;
        else if (t.text == "munion") op = Op::Munion;
      }
      if (!op) return left;
      Location loc = t.location;
      ++pos_;
      left = exprs::binary(*op, left, multiplicative(), loc);
    }
  }

  ExprPtr multiplicative() {
    auto left = unary();
    for (;;) {
      const Token& t = peek();
      std::optional<Op> op;
      if (t.kind == TokenKind::Symbol) {
        if (t.text == "*") op = Op::Times;
        else if (t.text == "/") op = Op::Divide;
      } else if (t.kind == TokenKind::Identifier) {
        if (t.text == "div") op = Op::Div;
        else if (t.text == "mod") op = Op::Mod;
        else if (t.text == "rem") op = Op::Rem;
        else if (t.text == "inter") op = Op::Inter;
      }
      if (!op) return left;
      Location loc = t.location;
      ++pos_;
      left = exprs::binary(*op, left, unary(), loc);
    }
  }

  ExprPtr unary() {
    const Token& t = peek();
    Location loc = t.location;
    if (t.kind == TokenKind::Symbol && (t.text == "-" || t.text == "+")) {
      const Op op = t.text == "-" ? Op::Neg : Op::Pos;
      ++pos_;
      return exprs::unary(op, unary(), loc);
    }
    if (t.kind == TokenKind::Identifier) {
      if (auto op = unary_keyword(t.text)) {
        ++pos_;
        return exprs::unary(*op, unary(), loc);
      }
    }
    return postfix();
  }

  ExprPtr postfix() {
    auto e = primary();
    for (;;) {
      if (is_symbol("(")) {
        ++pos_;
        auto apply = make(ExprKind::Apply, e->location);
        apply->args.push_back(e);
        if (!is_symbol(")")) {
          apply->args.push_back(expression());
          while (accept(",")) apply->args.push_back(expression());
        }
        expect(")");
        e = apply;
      } else if (is_symbol(".#")) {
        Location loc = peek().location;
        ++pos_;
        const Token& n = peek();
        if (n.kind != TokenKind::Number) fail("Expected tuple index");
        ++pos_;
        auto sel = make(ExprKind::TupleSelect, loc);
        sel->args.push_back(e);
        sel->index = std::stoi(n.text);
        e = sel;
      } else if (is_symbol(".")) {
        Location loc = peek().location;
        ++pos_;
        auto sel = make(ExprKind::FieldSelect, loc);
        sel->args.push_back(e);
        sel->name = identifier();
        e = sel;
      } else {
        return e;
      }
    }
  }

  ExprPtr primary() {
    const Token& t = peek();
    Location loc = t.location;
    if (auto lit = literal_token()) return exprs::literal(*lit, loc);
    switch (t.kind) {
      case TokenKind::MkName: {
        ++pos_;
        auto e = make(t.text.empty() ? ExprKind::TupleCons : ExprKind::RecordCons, loc);
        e->name = t.text;
        expect("(");
        if (!is_symbol(")")) {
          e->args.push_back(expression());
          while (accept(",")) e->args.push_back(expression());
        }
        expect(")");
        if (e->kind == ExprKind::TupleCons && e->args.size() < 2) {
          throw SyntaxError{Diagnostic{loc, "Tuple constructor needs at least two values"}};
        }
        return e;
      }
      case TokenKind::IsName: {
        ++pos_;
        auto e = make(ExprKind::IsType, loc);
        expect("(");
        e->args.push_back(expression());
        if (t.text.empty()) {
          expect(",");
          e->type = type();
        } else if (auto k = basic_type_keyword(t.text)) {
          e->type = types::basic(*k);
        } else {
          e->type = types::named(t.text);
        }
        expect(")");
        return e;
      }
      case TokenKind::Symbol:
        if (t.text == "(") {
          ++pos_;
          auto e = expression();
          expect(")");
          return e;
        }
        if (t.text == "{") return braces();
        if (t.text == "[") return brackets();
        break;
      case TokenKind::Identifier:
        if (t.text == "if") return if_expression();
        if (t.text == "cases") return cases_expression();
        if (t.text == "let") return let_expression();
        if (t.text == "forall" || t.text == "exists" || t.text == "exists1") {
          ++pos_;
          auto e = make(t.text == "forall" ? ExprKind::Forall
                                           : (t.text == "exists" ? ExprKind::Exists : ExprKind::Exists1),
                        loc);
          e->binds = bind_list();
          expect("&");
          e->args.push_back(expression());
          return e;
        }
        if (t.text == "RESULT" || !is_reserved_word(t.text)) {
          ++pos_;
          if (is_symbol("[") && is_symbol("@", 1) == false && looks_like_instantiation()) {
            ++pos_;
            auto e = make(ExprKind::FunInstance, loc);
            e->name = t.text;
            e->type_args.push_back(type());
            while (accept(",")) e->type_args.push_back(type());
            expect("]");
            return e;
          }
          return exprs::var(t.text, loc);
        }
        break;
      default:
        break;
    }
    fail("Expected expression");
  }

  /// `name[` followed by a type and `](`.
  bool looks_like_instantiation() const {
    int depth = 0;
    for (std::size_t i = pos_; i < tokens_.size(); ++i) {
      const Token& t = tokens_[i];
      if (t.kind == TokenKind::End) return false;
      if (t.kind == TokenKind::Symbol) {
        if (t.text == "[" || t.text == "(") ++depth;
        if (t.text == "]" || t.text == ")") {
          --depth;
          if (depth == 0) return i + 1 < tokens_.size() && tokens_[i + 1].kind == TokenKind::Symbol &&
                                 tokens_[i + 1].text == "(";
        }
        if (t.text == ";" || t.text == "&" || t.text == "==") return false;
      }
    }
    return false;
  }

  ExprPtr if_expression() {
    auto e = make(ExprKind::If, peek().location);
    expect_word("if");
    e->args.push_back(expression());
    expect_word("then");
    e->args.push_back(expression());
    while (accept_word("elseif")) {
      e->args.push_back(expression());
      expect_word("then");
      e->args.push_back(expression());
    }
    expect_word("else");
    e->args.push_back(expression());
    return e;
  }

  ExprPtr cases_expression() {
    auto e = make(ExprKind::Cases, peek().location);
    expect_word("cases");
    e->args.push_back(expression());
    expect(":");
    for (;;) {
      if (accept_word("others")) {
        expect("->");
        e->others = expression();
        break;
      }
      CaseAlt alt;
      alt.patterns.push_back(pattern());
      while (accept(",")) alt.patterns.push_back(pattern());
      expect("->");
      alt.body = expression();
      e->alts.push_back(std::move(alt));
      if (!accept(",")) break;
    }
    expect_word("end");
    return e;
  }

  ExprPtr let_expression() {
    Location loc = peek().location;
    expect_word("let");
    // Decide between `let defs in` and `let bind be st`.
    const std::size_t save = pos_;
    Pattern p = pattern();
    TypePtr t;
    if (accept(":")) t = type();
    if (is_word("be") || (is_word("in") && is_word("set", 1))) {
      pos_ = save;
      auto e = make(ExprKind::LetBe, loc);
      multiple_bind(e->binds);
      if (e->binds.size() != 1) fail("'let be st' takes a single bind");
      ExprPtr predicate;
      if (accept_word("be")) {
        expect_word("st");
        predicate = expression();
      }
      expect_word("in");
      e->args.push_back(predicate);
      e->args.push_back(expression());
      return e;
    }
    auto e = make(ExprKind::Let, loc);
    for (;;) {
      LetDef def;
      def.pattern = std::move(p);
      def.type = std::move(t);
      expect("=");
      def.value = expression();
      e->defs.push_back(std::move(def));
      if (!accept(",")) break;
      p = pattern();
      t = nullptr;
      if (accept(":")) t = type();
    }
    expect_word("in");
    e->args.push_back(expression());
    return e;
  }

  ExprPtr braces() {
    Location loc = peek().location;
    expect("{");
    if (accept("}")) return make(ExprKind::SetEnum, loc);
    if (is_symbol("|->") && is_symbol("}", 1)) {
      pos_ += 2;
      return make(ExprKind::MapEnum, loc);
    }
    auto first = expression();
    if (accept("|->")) {
      auto value = expression();
      if (accept("|")) {
        auto e = make(ExprKind::MapComp, loc);
        e->binds = bind_list();
        ExprPtr predicate;
        if (accept("&")) predicate = expression();
        expect("}");
        e->args = {first, value, predicate};
        return e;
      }
      auto e = make(ExprKind::MapEnum, loc);
      e->args = {first, value};
      while (accept(",")) {
        e->args.push_back(expression());
        expect("|->");
        e->args.push_back(expression());
      }
      expect("}");
      return e;
    }
    if (accept("|")) {
      auto e = make(ExprKind::SetComp, loc);
      e->binds = bind_list();
      ExprPtr predicate;
      if (accept("&")) predicate = expression();
      expect("}");
      e->args = {first, predicate};
      return e;
    }
    if (is_symbol(",") && is_symbol("...", 1)) {
      pos_ += 2;
      expect(",");
      auto e = make(ExprKind::SetRange, loc);
      e->args = {first, expression()};
      expect("}");
      return e;
    }
    auto e = make(ExprKind::SetEnum, loc);
    e->args.push_back(first);
    while (accept(",")) e->args.push_back(expression());
    expect("}");
    return e;
  }

  ExprPtr brackets() {
    Location loc = peek().location;
    expect("[");
    if (accept("]")) return make(ExprKind::SeqEnum, loc);
    auto first = expression();
    if (accept("|")) {
      auto e = make(ExprKind::SeqComp, loc);
      multiple_bind(e->binds);
      if (e->binds.size() != 1 || e->binds[0].is_type_bind()) {
        fail("Sequence comprehension needs a single set bind");
      }
      ExprPtr predicate;
      if (accept("&")) predicate = expression();
      expect("]");
      e->args = {first, predicate};
      return e;
    }
    auto e = make(ExprKind::SeqEnum, loc);
    e->args.push_back(first);
    while (accept(",")) e->args.push_back(expression());
    expect("]");
    return e;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::vector<Diagnostic>& errors_;
};

void check_duplicates(const SpecModule& m, std::vector<Diagnostic>& errors) {
  std::set<std::string> seen;
  auto note = [&](const std::string& name, const Location& loc) {
    if (!seen.insert(name).second) errors.push_back(Diagnostic{loc, "Duplicate definition: " + name});
  };
  for (const auto& ref : m.order) {
    switch (ref.kind) {
      case DefinitionKind::Type: note(m.type_defs[ref.index].name, m.type_defs[ref.index].location); break;
      case DefinitionKind::Function:
        note(m.function_defs[ref.index].name, m.function_defs[ref.index].location);
        break;
      case DefinitionKind::Value: note(m.value_defs[ref.index].name, m.value_defs[ref.index].location); break;
      case DefinitionKind::State: break;  // its record TypeDef is checked above
    }
  }
}

void parse_into(const std::shared_ptr<const SourceFile>& file, ParseResult& result) {
  LexResult lexed = tokenize(file);
  result.errors.insert(result.errors.end(), lexed.errors.begin(), lexed.errors.end());
  std::vector<AnnotationAnchor> anchors;
  SpecModule part;
  Parser parser(std::move(lexed.tokens), result.errors);
  parser.parse_document(part, anchors);
  auto annotations = extract_annotations(lexed.comments, anchors, result.warnings);

  SpecModule& m = result.module;
  m.files.push_back(file);
  for (auto ref : part.order) {
    switch (ref.kind) {
      case DefinitionKind::Type: ref.index += m.type_defs.size(); break;
      case DefinitionKind::Function: ref.index += m.function_defs.size(); break;
      case DefinitionKind::Value: ref.index += m.value_defs.size(); break;
      case DefinitionKind::State: break;
    }
    m.order.push_back(ref);
  }
  for (auto& d : part.type_defs) m.type_defs.push_back(std::move(d));
  for (auto& d : part.function_defs) m.function_defs.push_back(std::move(d));
  for (auto& d : part.value_defs) m.value_defs.push_back(std::move(d));
  for (auto& a : annotations) m.annotations.push_back(std::move(a));
  if (part.state) {
    if (m.state) {
      result.errors.push_back(Diagnostic{part.state->location, "Only one state definition is allowed"});
    } else {
      m.state = std::move(part.state);
    }
  }
}

}  // namespace

ParseResult parse_specification(std::string_view source, std::string file_name) {
  return parse_specifications({SourceText{std::move(file_name), std::string(source)}});
}

ParseResult parse_specifications(const std::vector<SourceText>& sources) {
  ParseResult result;
  for (const auto& src : sources) parse_into(make_source_file(src.text, src.name), result);
  check_duplicates(result.module, result.errors);
  return result;
}

namespace {

template <typename T, typename F>
Parsed<T> parse_fragment(std::string_view text, std::string file_name, F&& body) {
  Parsed<T> out;
  LexResult lexed = tokenize(make_source_file(text, std::move(file_name)));
  out.errors = lexed.errors;
  if (!out.errors.empty()) return out;
  Parser parser(std::move(lexed.tokens), out.errors);
  parser.attempt([&] { out.value = body(parser); });
  return out;
}

}  // namespace

Parsed<ExprPtr> parse_expression(std::string_view text, std::string file_name) {
  return parse_fragment<ExprPtr>(text, std::move(file_name), [](Parser& p) { return p.parse_standalone_expression(); });
}

Parsed<TypePtr> parse_type(std::string_view text, std::string file_name) {
  return parse_fragment<TypePtr>(text, std::move(file_name), [](Parser& p) { return p.parse_standalone_type(); });
}

Parsed<Bind> parse_type_bind(std::string_view text, std::string file_name) {
  return parse_fragment<Bind>(text, std::move(file_name), [](Parser& p) { return p.parse_standalone_type_bind(); });
}

std::vector<QuickCheckAnnotation> extract_annotations(const std::vector<Comment>& comments,
                                                      const std::vector<AnnotationAnchor>& anchors,
                                                      std::vector<Diagnostic>& warnings) {
  std::vector<QuickCheckAnnotation> out;
  for (const auto& c : comments) {
    std::string_view text = c.text;
    const auto start = text.find_first_not_of(" \t");
    if (start == std::string_view::npos) continue;
    text.remove_prefix(start);
    constexpr std::string_view kTag = "@QuickCheck";
    if (text.substr(0, kTag.size()) != kTag) continue;
    text.remove_prefix(kTag.size());

    const AnnotationAnchor* anchor = nullptr;
    for (const auto& a : anchors) {
      if (a.file_name == c.location.file_name() && c.location.line > a.after_line && c.location.line < a.line) {
        anchor = &a;
        break;
      }
    }
    if (!anchor) {
      warnings.push_back(Diagnostic{c.location, "@QuickCheck annotation does not precede a function definition"});
      continue;
    }

    // Body: `@T = type, type ;`
    std::vector<Diagnostic> errors;
    LexResult lexed = tokenize(make_source_file(text, c.location.file_name()));
    QuickCheckAnnotation annotation;
    annotation.function_name = anchor->function_name;
    annotation.location = c.location;
    bool ok = lexed.errors.empty();
    if (ok) {
      Parser parser(std::move(lexed.tokens), errors);
      ok = parser.attempt([&] {
        parser.expect("@");
        annotation.param_name = parser.identifier();
        parser.expect("=");
        annotation.candidate_types = parser.annotation_types();
      });
    }
    if (!ok) {
      warnings.push_back(Diagnostic{c.location, "Malformed @QuickCheck annotation ignored"});
      continue;
    }
    const auto& params = anchor->type_params;
    if (std::find(params.begin(), params.end(), annotation.param_name) == params.end()) {
      warnings.push_back(Diagnostic{c.location, "@QuickCheck annotation names @" + annotation.param_name +
                                                    ", which is not a type parameter of " + anchor->function_name});
      continue;
    }
    out.push_back(std::move(annotation));
  }
  return out;
}

}  // namespace specqc
