#include "specqc/generators.hpp"

#include "specqc/checker.hpp"

#include <algorithm>
#include <set>

namespace specqc {

namespace {

Cardinality card(const TypePtr& t, const SpecModule& m, const TypeParamMap& params, std::vector<std::string>& stack) {
  switch (t->kind) {
    case TypeKind::Bool: return Cardinality::of(2);
    case TypeKind::Char: return Cardinality::of(kCharAlphabet);
    case TypeKind::Quote: return Cardinality::of(1);
    case TypeKind::Nat:
    case TypeKind::Nat1:
    case TypeKind::Int:
    case TypeKind::Real:
    case TypeKind::Unknown: return Cardinality::infinite();
    case TypeKind::Seq: {
      // Only `seq of <empty type>` is finite: it holds [] alone.
      Cardinality e = card(t->args[0], m, params, stack);
      return e.finite && e.count == 0 ? Cardinality::of(1) : Cardinality::infinite();
    }
    case TypeKind::Set: {
      Cardinality e = card(t->args[0], m, params, stack);
      if (!e.finite || e.count > 4096) return Cardinality::infinite();
      return Cardinality::of(Integer(1) << static_cast<unsigned>(e.count));
    }
    case TypeKind::Map: {
      Cardinality d = card(t->args[0], m, params, stack);
      Cardinality r = card(t->args[1], m, params, stack);
      if (!d.finite || !r.finite || d.count > 4096) return Cardinality::infinite();
      return Cardinality::of(boost::multiprecision::pow(Integer(r.count + 1), static_cast<unsigned>(d.count)));
    }
    case TypeKind::Product: {
      Integer n = 1;
      for (const auto& a : t->args) {
        Cardinality c = card(a, m, params, stack);
        if (!c.finite) return c;
        n *= c.count;
      }
      return Cardinality::of(n);
    }
    case TypeKind::Record: {
      Integer n = 1;
      for (const auto& f : t->fields) {
        Cardinality c = card(f.type, m, params, stack);
        if (!c.finite) return c;
        n *= c.count;
      }
      return Cardinality::of(n);
    }
    case TypeKind::Optional: {
      Cardinality c = card(t->args[0], m, params, stack);
      return c.finite ? Cardinality::of(c.count + 1) : c;
    }
    case TypeKind::Union: {
      std::vector<TypePtr> distinct;
      for (const auto& a : t->args) {
        TypePtr x = expand_type(substitute(a, params), m);
        if (std::none_of(distinct.begin(), distinct.end(), [&](const TypePtr& d) { return type_equal(d, x); })) {
          distinct.push_back(x);
        }
      }
      Integer n = 0;
      for (const auto& d : distinct) {
        Cardinality c = card(d, m, params, stack);
        if (!c.finite) return c;
        n += c.count;
      }
      return Cardinality::of(n);
    }
    case TypeKind::TypeParam: {
      auto it = params.find(t->name);
      if (it == params.end() || it->second->kind == TypeKind::TypeParam) return Cardinality::infinite();
      return card(it->second, m, {}, stack);
    }
    case TypeKind::Named: {
      if (std::find(stack.begin(), stack.end(), t->name) != stack.end()) return Cardinality::infinite();
      const TypeDef* def = m.find_type(t->name);
      if (!def) return Cardinality::infinite();
      stack.push_back(t->name);
      Cardinality c = card(def->type, m, params, stack);
      stack.pop_back();
      return c;
    }
  }
  return Cardinality::infinite();
}

const std::string& char_alphabet() {
  static const std::string alphabet = [] {
    std::string s;
    for (char c = 'a'; c <= 'z'; ++c) s += c;
    for (char c = 'A'; c <= 'Z'; ++c) s += c;
    for (char c = '0'; c <= '9'; ++c) s += c;
    for (int c = 0; c < static_cast<int>(kCharAlphabet); ++c) {
      if (s.find(static_cast<char>(c)) == std::string::npos) s += static_cast<char>(c);
    }
    return s;
  }();
  return alphabet;
}

/// Odometer over `positions` indices each below `bound`. When `increasing`,
/// only strictly increasing index tuples are produced (subsets).
template <typename F>
bool for_each_index_tuple(std::size_t positions, std::size_t bound, bool increasing, F&& f) {
  if (positions == 0) return f(std::vector<std::size_t>{});
  if (bound == 0 || (increasing && positions > bound)) return true;
  std::vector<std::size_t> idx(positions);
  for (std::size_t i = 0; i < positions; ++i) idx[i] = increasing ? i : 0;
  for (;;) {
    if (!f(idx)) return false;
    std::size_t k = positions;
    for (;;) {
      if (k == 0) return true;
      --k;
      const std::size_t limit = increasing ? bound - (positions - k) : bound - 1;
      if (idx[k] < limit) {
        ++idx[k];
        for (std::size_t j = k + 1; j < positions; ++j) idx[j] = increasing ? idx[j - 1] + 1 : 0;
        break;
      }
    }
  }
}

class Fixed {
 public:
  Fixed(Context& ctx, std::vector<std::string>* diagnostics) : ctx_(ctx), diagnostics_(diagnostics) {}

  std::vector<Value> values(const TypePtr& t, std::size_t size) {
    if (size == 0) return {};
    switch (t->kind) {
      case TypeKind::Bool: return truncate({Value::boolean(false), Value::boolean(true)}, size);
      case TypeKind::Nat:
      case TypeKind::Nat1: {
        std::vector<Value> out;
        const std::int64_t first = t->kind == TypeKind::Nat ? 0 : 1;
        for (std::size_t i = 0; i < size; ++i) out.push_back(Value::integer(first + static_cast<std::int64_t>(i)));
        return out;
      }
      case TypeKind::Int: {
        std::vector<Value> out;
        const auto n = static_cast<std::int64_t>(size);
        for (std::int64_t i = -(n / 2); i <= (n + 1) / 2 - 1; ++i) out.push_back(Value::integer(i));
        return out;
      }
      case TypeKind::Real: {
        std::vector<Value> out;
        const auto n = static_cast<std::int64_t>(size);
        for (std::int64_t i = -(n / 2); i <= (n + 1) / 2 - 1; ++i) {
          out.push_back(Value::integer(i));
          out.push_back(Value::number(Rational(i, 2)));
        }
        out = Value::set(std::move(out)).items();
        std::stable_sort(out.begin(), out.end(), [](const Value& a, const Value& b) {
          return abs(a.as_rational()) < abs(b.as_rational());
        });
        out.resize(std::min(out.size(), size));
        std::sort(out.begin(), out.end());
        return out;
      }
      case TypeKind::Char: {
        std::vector<Value> out;
        for (char c : char_alphabet()) {
          if (out.size() == size) break;
          out.push_back(Value::character(static_cast<char32_t>(c)));
        }
        return out;
      }
      case TypeKind::Quote: return {Value::quote(t->name)};
      case TypeKind::Optional: {
        std::vector<Value> out{Value::nil()};
        for (auto& v : values(t->args[0], size - 1)) out.push_back(std::move(v));
        return out;
      }
      case TypeKind::Union: {
        std::vector<std::vector<Value>> members;
        for (const auto& a : t->args) members.push_back(values(a, size));
        std::vector<Value> out;
        std::set<Value> seen;
        for (std::size_t i = 0; out.size() < size; ++i) {
          bool any = false;
          for (const auto& mvals : members) {
            if (i < mvals.size()) {
              any = true;
              if (seen.insert(mvals[i]).second && out.size() < size) out.push_back(mvals[i]);
            }
          }
          if (!any) break;
        }
        return out;
      }
      case TypeKind::Product: {
        std::vector<std::vector<Value>> parts;
        for (const auto& a : t->args) parts.push_back(values(a, size));
        return combine(parts, size, [](ValueList items) { return Value::tuple(std::move(items)); });
      }
      case TypeKind::Record: {
        std::vector<std::vector<Value>> parts;
        for (const auto& f : t->fields) parts.push_back(values(f.type, size));
        const std::string name = t->name;
        return combine(parts, size, [&](ValueList items) { return Value::record(name, std::move(items)); });
      }
      case TypeKind::Seq:
      case TypeKind::Set: return collection(t, size);
      case TypeKind::Map: return maps(t, size);
      case TypeKind::TypeParam: {
        auto it = ctx_.type_params().find(t->name);
        if (it == ctx_.type_params().end()) return {};
        return values(it->second, size);
      }
      case TypeKind::Named: return named(t, size);
      case TypeKind::Unknown: return {};
    }
    return {};
  }

 private:
  static std::vector<Value> truncate(std::vector<Value> v, std::size_t size) {
    if (v.size() > size) v.resize(size);
    return v;
  }

  /// Breadth-first: level k uses the first k values of each constituent.
  template <typename Make>
  std::vector<Value> combine(const std::vector<std::vector<Value>>& parts, std::size_t size, Make&& make) {
    std::vector<Value> out;
    std::size_t widest = 0;
    for (const auto& p : parts) {
      if (p.empty()) return out;
      widest = std::max(widest, p.size());
    }
    if (parts.empty()) {
      out.push_back(make({}));
      return out;
    }
    for (std::size_t level = 1; level <= widest && out.size() < size; ++level) {
      std::vector<std::size_t> idx(parts.size(), 0);
      for (;;) {
        bool fresh = false;
        for (std::size_t i = 0; i < parts.size(); ++i) fresh = fresh || idx[i] + 1 == level;
        if (fresh) {
          ValueList items;
          for (std::size_t i = 0; i < parts.size(); ++i) items.push_back(parts[i][idx[i]]);
          out.push_back(make(std::move(items)));
          if (out.size() == size) return out;
        }
        bool advanced = false;
        for (std::size_t k = parts.size(); k > 0 && !advanced; --k) {
          if (idx[k - 1] + 1 < std::min(level, parts[k - 1].size())) {
            ++idx[k - 1];
            advanced = true;
          } else {
            idx[k - 1] = 0;
          }
        }
        if (!advanced) break;
      }
    }
    return out;
  }

  std::vector<Value> collection(const TypePtr& t, std::size_t size) {
    const bool is_set = t->kind == TypeKind::Set;
    const std::vector<Value> pool = values(t->args[0], size);
    std::vector<Value> out{is_set ? Value::set({}) : Value::seq({})};
    for (std::size_t level = 1; out.size() < size; ++level) {
      const std::size_t bound = std::min(level, pool.size());
      if (bound == 0 || (is_set && level > pool.size())) break;
      for (std::size_t len = 1; len <= level && out.size() < size; ++len) {
        for_each_index_tuple(len, bound, is_set, [&](const std::vector<std::size_t>& idx) {
          const bool fresh = len == level || std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return i + 1 == level; });
          if (!fresh) return true;
          ValueList items;
          for (std::size_t i : idx) items.push_back(pool[i]);
          out.push_back(is_set ? Value::set(std::move(items)) : Value::seq(std::move(items)));
          return out.size() < size;
        });
      }
    }
    return out;
  }

  std::vector<Value> maps(const TypePtr& t, std::size_t size) {
    const std::vector<Value> keys = values(t->args[0], size);
    const std::vector<Value> vals = values(t->args[1], size);
    std::vector<Value> out{*Value::map({})};
    if (vals.empty()) return out;
    const std::size_t widest = std::max(keys.size(), vals.size());
    for (std::size_t level = 1; level <= widest && out.size() < size; ++level) {
      const std::size_t kb = std::min(level, keys.size());
      const std::size_t vb = std::min(level, vals.size());
      for (std::size_t len = 1; len <= std::min(level, keys.size()) && out.size() < size; ++len) {
        for_each_index_tuple(len, kb, true, [&](const std::vector<std::size_t>& ki) {
          return for_each_index_tuple(len, vb, false, [&](const std::vector<std::size_t>& vi) {
            const auto hits = [&](const std::vector<std::size_t>& idx) {
              return std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return i + 1 == level; });
            };
            if (len != level && !hits(ki) && !hits(vi)) return true;
            MapEntries entries;
            for (std::size_t i = 0; i < len; ++i) entries.emplace_back(keys[ki[i]], vals[vi[i]]);
            out.push_back(*Value::map(std::move(entries)));
            return out.size() < size;
          });
        });
      }
    }
    return out;
  }

  std::vector<Value> named(const TypePtr& t, std::size_t size) {
    if (std::count(stack_.begin(), stack_.end(), t->name) >= 2) return {};
    const TypeDef* def = ctx_.module().find_type(t->name);
    if (!def) return {};
    stack_.push_back(t->name);
    std::vector<Value> body = values(def->type, size);
    stack_.pop_back();
    if (!def->inv) return body;
    std::vector<Value> out;
    for (auto& v : body) {
      if (satisfies(*def, v)) out.push_back(std::move(v));
    }
    return out;
  }

 public:
  bool satisfies(const TypeDef& def, const Value& v) {
    auto binding = match_pattern(*def.inv_pattern, v, ctx_);
    if (!binding) return false;
    EvalOutcome r = evaluate_with(*def.inv, *binding, ctx_);
    if (r.is_ok() && r.value().is(Value::Kind::Bool)) return r.value().as_bool();
    if (diagnostics_) {
      diagnostics_->push_back("Invariant of " + def.name + " could not be evaluated for " + v.to_string() +
                              (r.is_error() ? ": " + r.error().message : std::string()));
    }
    return false;
  }

 private:
  Context& ctx_;
  std::vector<std::string>* diagnostics_;
  std::vector<std::string> stack_;
};

class Random {
 public:
  Random(std::mt19937_64& rng, std::size_t ordinal, Context& ctx) : rng_(rng), k_(std::max<std::size_t>(ordinal, 1)), ctx_(ctx) {}

  std::optional<Value> draw(const TypePtr& t) {
    const auto bound = static_cast<std::int64_t>(10 * k_);
    switch (t->kind) {
      case TypeKind::Bool: return Value::boolean(uniform(0, 1) == 1);
      case TypeKind::Int: return Value::integer(uniform(-bound, bound));
      case TypeKind::Nat: return Value::integer(uniform(0, bound));
      case TypeKind::Nat1: return Value::integer(uniform(1, bound));
      case TypeKind::Real: return Value::number(Rational(uniform(-4 * bound, 4 * bound), 4));
      case TypeKind::Char: return Value::character(static_cast<char32_t>(uniform(32, 126)));
      case TypeKind::Quote: return Value::quote(t->name);
      case TypeKind::Optional:
        if (uniform(0, 3) == 0) return Value::nil();
        return draw(t->args[0]);
      case TypeKind::Union: return draw(t->args[static_cast<std::size_t>(uniform(0, static_cast<std::int64_t>(t->args.size()) - 1))]);
      case TypeKind::Product: {
        ValueList items;
        for (const auto& a : t->args) {
          auto v = draw(a);
          if (!v) return std::nullopt;
          items.push_back(std::move(*v));
        }
        return Value::tuple(std::move(items));
      }
      case TypeKind::Record: {
        ValueList items;
        for (const auto& f : t->fields) {
          auto v = draw(f.type);
          if (!v) return std::nullopt;
          items.push_back(std::move(*v));
        }
        return Value::record(t->name, std::move(items));
      }
      case TypeKind::Seq:
      case TypeKind::Set: {
        ValueList items;
        const auto len = uniform(0, 5);
        for (std::int64_t i = 0; i < len; ++i) {
          auto v = draw(t->args[0]);
          if (!v) return std::nullopt;
          items.push_back(std::move(*v));
        }
        return t->kind == TypeKind::Seq ? Value::seq(std::move(items)) : Value::set(std::move(items));
      }
      case TypeKind::Map: {
        MapEntries entries;
        std::set<Value> keys;
        const auto len = uniform(0, 5);
        for (std::int64_t i = 0; i < len; ++i) {
          auto k = draw(t->args[0]);
          auto v = draw(t->args[1]);
          if (!k || !v) return std::nullopt;
          if (keys.insert(*k).second) entries.emplace_back(std::move(*k), std::move(*v));
        }
        return *Value::map(std::move(entries));
      }
      case TypeKind::TypeParam: {
        auto it = ctx_.type_params().find(t->name);
        if (it == ctx_.type_params().end()) return std::nullopt;
        return draw(it->second);
      }
      case TypeKind::Named: {
        if (depth_ > 8) return std::nullopt;
        const TypeDef* def = ctx_.module().find_type(t->name);
        if (!def) return std::nullopt;
        ++depth_;
        struct Leave {
          int& d;
          ~Leave() { --d; }
        } leave{depth_};
        for (int attempt = 0; attempt < 100; ++attempt) {
          auto v = draw(def->type);
          if (v && (!def->inv || Fixed(ctx_, nullptr).satisfies(*def, *v))) return v;
        }
        return std::nullopt;
      }
      case TypeKind::Unknown: return std::nullopt;
    }
    return std::nullopt;
  }

 private:
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }

  std::mt19937_64& rng_;
  std::size_t k_;
  Context& ctx_;
  int depth_ = 0;
};

}  // namespace

Cardinality cardinality(const TypePtr& t, const SpecModule& m, const TypeParamMap& params) {
  std::vector<std::string> stack;
  return card(t, m, params, stack);
}

Enumeration enumerate_all(const TypePtr& t, std::size_t limit, Context& ctx) {
  Enumeration out;
  Cardinality c = cardinality(t, ctx.module(), ctx.type_params());
  if (!c.at_most(limit)) return out;
  Fixed gen(ctx, &out.diagnostics);
  out.values = gen.values(t, static_cast<std::size_t>(c.count));
  out.exhausted = true;
  return out;
}

std::vector<Value> fixed_values(const TypePtr& t, std::size_t size, Context& ctx) {
  return Fixed(ctx, nullptr).values(t, size);
}

bool fixed_values_complete(const TypePtr& t, std::size_t size, Context& ctx) {
  return cardinality(t, ctx.module(), ctx.type_params()).at_most(size);
}

std::optional<Value> random_value(const TypePtr& t, std::mt19937_64& rng, std::size_t ordinal, Context& ctx) {
  Random gen(rng, ordinal, ctx);
  for (int attempt = 0; attempt < 100; ++attempt) {
    auto v = gen.draw(t);
    if (v && type_membership(*v, substitute(t, ctx.type_params()), ctx)) return v;
  }
  return std::nullopt;
}

}  // namespace specqc
