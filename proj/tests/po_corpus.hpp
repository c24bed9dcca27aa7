#pragma once

// Random small obligations over bool, set of bool, a set-bound 0..5 and an
// invariant-restricted nat (N5), each paired with a native C++ evaluator that
// serves as an independent oracle for the engine's verdicts.

#include "specqc/engine.hpp"
#include "support.hpp"

#include <memory>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace specqc::testing {

inline constexpr const char* kCorpusModule = "types\n  N5 = nat inv x == x <= 5;\n";

struct Assignment {
  bool b = false;
  int s = 0;  // bit 0: false in s, bit 1: true in s
  long a = 0;
  long n = 0;
};

struct Node {
  enum Kind { BoolVar, HasFalse, HasTrue, Not, And, Or, Implies, Cmp, IntVar, NVar, Card, Const, Add, Sub, Mul, Div, Mod };
  Kind kind = Const;
  std::string op;  // Cmp: = <> < <= > >=
  long value = 0;
  std::shared_ptr<Node> l, r;

  std::string text() const {
    switch (kind) {
      case BoolVar: return "b";
      case HasFalse: return "(false in set s)";
      case HasTrue: return "(true in set s)";
      case Not: return "(not " + l->text() + ")";
      case And: return "(" + l->text() + " and " + r->text() + ")";
      case Or: return "(" + l->text() + " or " + r->text() + ")";
      case Implies: return "(" + l->text() + " => " + r->text() + ")";
      case Cmp: return "(" + l->text() + " " + op + " " + r->text() + ")";
      case IntVar: return "a";
      case NVar: return "n";
      case Card: return "(card s)";
      case Const: return std::to_string(value);
      case Add: return "(" + l->text() + " + " + r->text() + ")";
      case Sub: return "(" + l->text() + " - " + r->text() + ")";
      case Mul: return "(" + l->text() + " * " + r->text() + ")";
      case Div: return "(" + l->text() + " div " + r->text() + ")";
      case Mod: return "(" + l->text() + " mod " + r->text() + ")";
    }
    return "?";
  }

  // nullopt: runtime error
  std::optional<long> num(const Assignment& x) const {
    switch (kind) {
      case IntVar: return x.a;
      case NVar: return x.n;
      case Card: return __builtin_popcount(x.s);
      case Const: return value;
      default: break;
    }
    const auto p = l->num(x);
    if (!p) return std::nullopt;
    const auto q = r->num(x);
    if (!q) return std::nullopt;
    switch (kind) {
      case Add: return *p + *q;
      case Sub: return *p - *q;
      case Mul: return *p * *q;
      case Div:  // truncates toward zero
        if (*q == 0) return std::nullopt;
        return *p / *q;
      case Mod: {  // result takes the sign of the divisor
        if (*q == 0) return std::nullopt;
        long m = *p % *q;
        if (m != 0 && ((m < 0) != (*q < 0))) m += *q;
        return m;
      }
      default: return std::nullopt;
    }
  }

  std::optional<bool> truth(const Assignment& x) const {
    switch (kind) {
      case BoolVar: return x.b;
      case HasFalse: return (x.s & 1) != 0;
      case HasTrue: return (x.s & 2) != 0;
      case Not: {
        auto v = l->truth(x);
        if (!v) return std::nullopt;
        return !*v;
      }
      case And: {
        auto v = l->truth(x);
        if (!v) return std::nullopt;
        if (!*v) return false;
        return r->truth(x);
      }
      case Or: {
        auto v = l->truth(x);
        if (!v) return std::nullopt;
        if (*v) return true;
        return r->truth(x);
      }
      case Implies: {
        auto v = l->truth(x);
        if (!v) return std::nullopt;
        if (!*v) return true;
        return r->truth(x);
      }
      case Cmp: {
        auto p = l->num(x);
        if (!p) return std::nullopt;
        auto q = r->num(x);
        if (!q) return std::nullopt;
        if (op == "=") return *p == *q;
        if (op == "<>") return *p != *q;
        if (op == "<") return *p < *q;
        if (op == "<=") return *p <= *q;
        if (op == ">") return *p > *q;
        return *p >= *q;
      }
      default: return std::nullopt;
    }
  }
};

using NodePtr = std::shared_ptr<Node>;

struct CorpusPo {
  std::string text;
  bool existential = false;
  bool uses_b = false, uses_s = false, uses_a = false, uses_n = false;
  NodePtr body;

  std::vector<Assignment> domain() const {
    std::vector<Assignment> out;
    for (int b = 0; b <= (uses_b ? 1 : 0); ++b)
      for (int s = 0; s <= (uses_s ? 3 : 0); ++s)
        for (long a = 0; a <= (uses_a ? 5 : 0); ++a)
          for (long n = 0; n <= (uses_n ? 5 : 0); ++n) out.push_back(Assignment{b != 0, s, a, n});
    return out;
  }
};

class CorpusGenerator {
 public:
  explicit CorpusGenerator(std::uint64_t seed) : rng_(seed) {}

  CorpusPo next() {
    CorpusPo po;
    do {
      po.uses_b = coin(0.5);
      po.uses_s = coin(0.5);
      po.uses_a = coin(0.4);
      po.uses_n = coin(0.3);
    } while (!po.uses_b && !po.uses_s && !po.uses_a && !po.uses_n);
    current_ = &po;
    po.existential = coin(0.2);
    if (!po.existential && coin(0.15)) {
      // guard-implies-itself shapes
      auto p = boolean(2);
      if (coin(0.5)) {
        po.body = bin(Node::Implies, p, p);
      } else {
        po.body = bin(Node::Implies, bin(Node::And, boolean(1), p), p);
      }
    } else {
      po.body = boolean(3);
    }
    std::vector<std::string> binds;
    if (po.uses_b) binds.push_back("b:bool");
    if (po.uses_a) binds.push_back("a in set {0, ..., 5}");
    if (po.uses_s) binds.push_back("s:set of bool");
    if (po.uses_n) binds.push_back("n:N5");
    std::string joined;
    for (const auto& b : binds) joined += (joined.empty() ? "" : ", ") + b;
    po.text = std::string(po.existential ? "exists " : "forall ") + joined + " & " + po.body->text();
    return po;
  }

 private:
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  static NodePtr bin(Node::Kind k, NodePtr l, NodePtr r, std::string op = {}) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->l = std::move(l);
    n->r = std::move(r);
    n->op = std::move(op);
    return n;
  }

  NodePtr integer(int depth) {
    if (depth <= 0 || coin(0.4)) {
      std::vector<Node::Kind> leaves{Node::Const, Node::Const};
      if (current_->uses_a) leaves.push_back(Node::IntVar);
      if (current_->uses_n) leaves.push_back(Node::NVar);
      if (current_->uses_s) leaves.push_back(Node::Card);
      auto n = std::make_shared<Node>();
      n->kind = leaves[pick(static_cast<int>(leaves.size()))];
      n->value = pick(4);
      return n;
    }
    static const Node::Kind ops[] = {Node::Add, Node::Sub, Node::Mul, Node::Div, Node::Mod};
    return bin(ops[pick(5)], integer(depth - 1), integer(depth - 1));
  }

  NodePtr boolean(int depth) {
    if (depth <= 0 || coin(0.3)) {
      std::vector<Node::Kind> leaves{Node::Cmp, Node::Cmp};
      if (current_->uses_b) leaves.push_back(Node::BoolVar);
      if (current_->uses_s) {
        leaves.push_back(Node::HasFalse);
        leaves.push_back(Node::HasTrue);
      }
      const auto k = leaves[pick(static_cast<int>(leaves.size()))];
      if (k == Node::Cmp) {
        static const char* cmps[] = {"=", "<>", "<", "<=", ">", ">="};
        return bin(Node::Cmp, integer(1), integer(1), cmps[pick(6)]);
      }
      auto n = std::make_shared<Node>();
      n->kind = k;
      return n;
    }
    switch (pick(4)) {
      case 0: return bin(Node::Not, boolean(depth - 1), nullptr);
      case 1: return bin(Node::And, boolean(depth - 1), boolean(depth - 1));
      case 2: return bin(Node::Or, boolean(depth - 1), boolean(depth - 1));
      default: return bin(Node::Implies, boolean(depth - 1), boolean(depth - 1));
    }
  }

  std::mt19937_64 rng_;
  const CorpusPo* current_ = nullptr;
};

/// Turns corpus text into an obligation of the corpus module.
inline ProofObligation corpus_obligation(const CorpusPo& c, const SpecModule& m, int number) {
  auto parsed = parse_expression(c.text, "corpus");
  if (!parsed.ok()) throw std::runtime_error("corpus parse: " + c.text);
  const auto errors = check_expression(parsed.value, m);
  if (!errors.empty()) throw std::runtime_error("corpus check: " + format_diagnostic(errors[0]) + " in " + c.text);
  ProofObligation po;
  po.number = number;
  po.kind = PoKind::NonZero;
  po.owner = "corpus";
  po.expr = parsed.value;
  po.polarity = c.existential ? Polarity::Existential : Polarity::Universal;
  return po;
}

/// Reads an engine binding back into a native assignment; nullopt when a
/// quantified variable is missing or has the wrong shape.
inline std::optional<Assignment> to_assignment(const CorpusPo& c, const Binding& binding) {
  Assignment x;
  auto find = [&](const std::string& name) -> const Value* {
    for (const auto& [k, v] : binding) {
      if (k == name) return &v;
    }
    return nullptr;
  };
  if (c.uses_b) {
    const Value* v = find("b");
    if (!v || !v->is(Value::Kind::Bool)) return std::nullopt;
    x.b = v->as_bool();
  }
  if (c.uses_s) {
    const Value* v = find("s");
    if (!v || !v->is(Value::Kind::Set)) return std::nullopt;
    for (const auto& e : v->items()) x.s |= e.as_bool() ? 2 : 1;
  }
  if (c.uses_a) {
    const Value* v = find("a");
    if (!v || !v->is(Value::Kind::Int)) return std::nullopt;
    x.a = static_cast<long>(v->as_int());
  }
  if (c.uses_n) {
    const Value* v = find("n");
    if (!v || !v->is(Value::Kind::Int) || v->as_int() < 0 || v->as_int() > 5) return std::nullopt;
    x.n = static_cast<long>(v->as_int());
  }
  return x;
}

/// Empty when the result agrees with brute force; otherwise a description.
inline std::string oracle_disagreement(const CorpusPo& c, const CheckedResult& r) {
  const auto dom = c.domain();
  auto all_true = [&] {
    for (const auto& x : dom) {
      auto t = c.body->truth(x);
      if (!t || !*t) return false;
    }
    return true;
  };
  auto some_true = [&] {
    for (const auto& x : dom) {
      auto t = c.body->truth(x);
      if (t && *t) return true;
    }
    return false;
  };
  switch (r.status) {
    case Status::Failed:
      if (c.existential) return some_true() ? "FAILED but a witness exists" : "";
      if (!r.counterexample) return "FAILED without counterexample";
      if (r.counterexample->empty()) return all_true() ? "FAILED with empty counterexample on a tautology" : "";
      if (auto x = to_assignment(c, *r.counterexample)) {
        auto t = c.body->truth(*x);
        return (t && *t) ? "counterexample " + render_binding(*r.counterexample) + " satisfies the body" : "";
      }
      return "counterexample does not cover the variables: " + render_binding(*r.counterexample);
    case Status::Provable:
      if (r.witness) {
        auto x = to_assignment(c, *r.witness);
        if (!x) return "witness does not cover the variables";
        auto t = c.body->truth(*x);
        return (t && *t) ? "" : "witness " + render_binding(*r.witness) + " does not satisfy the body";
      }
      if (c.existential) return some_true() ? "" : "PROVABLE existential with no witness";
      return all_true() ? "" : "PROVABLE (" + r.reason + ") but brute force finds a counterexample";
    default: return "";
  }
}

}  // namespace specqc::testing
