#include "specqc/value.hpp"

#include <algorithm>
#include <sstream>

namespace specqc {

namespace {

int kind_rank(Value::Kind k) {
  switch (k) {
    case Value::Kind::Nil: return 0;
    case Value::Kind::Bool: return 1;
    case Value::Kind::Int:
    case Value::Kind::Real: return 2;
    case Value::Kind::Char: return 3;
    case Value::Kind::Quote: return 4;
    case Value::Kind::Seq: return 5;
    case Value::Kind::Set: return 6;
    case Value::Kind::Map: return 7;
    case Value::Kind::Tuple: return 8;
    case Value::Kind::Record: return 9;
  }
  return 10;
}

std::strong_ordering compare_lists(const ValueList& a, const ValueList& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = compare(a[i], b[i]); c != 0) return c;
  }
  return a.size() <=> b.size();
}

void render_char(std::ostream& os, char32_t c, char quote) {
  if (c == U'\n') {
    os << "\\n";
  } else if (c == U'\t') {
    os << "\\t";
  } else if (c == static_cast<char32_t>(quote) || c == U'\\') {
    os << '\\' << static_cast<char>(c);
  } else if (c < 0x20 || c >= 0x7f) {
    os << "\\u" << std::hex << static_cast<std::uint32_t>(c) << std::dec;
  } else {
    os << static_cast<char>(c);
  }
}

}  // namespace

Value Value::boolean(bool b) {
  Value v;
  v.kind_ = Kind::Bool;
  v.rep_ = b;
  return v;
}

Value Value::integer(Integer i) {
  Value v;
  v.kind_ = Kind::Int;
  v.rep_ = std::move(i);
  return v;
}

Value Value::number(Rational r) {
  if (boost::multiprecision::denominator(r) == 1) return integer(boost::multiprecision::numerator(r));
  Value v;
  v.kind_ = Kind::Real;
  v.rep_ = std::move(r);
  return v;
}

Value Value::character(char32_t c) {
  Value v;
  v.kind_ = Kind::Char;
  v.rep_ = c;
  return v;
}

Value Value::quote(std::string tag) {
  Value v;
  v.kind_ = Kind::Quote;
  v.rep_ = std::make_shared<const Quote>(Quote{std::move(tag)});
  return v;
}

Value Value::seq(ValueList items) {
  Value v;
  v.kind_ = Kind::Seq;
  v.rep_ = std::make_shared<const Items>(Items{{}, std::move(items)});
  return v;
}

Value Value::string(std::string_view text) {
  ValueList chars;
  chars.reserve(text.size());
  for (unsigned char c : text) chars.push_back(character(c));
  return seq(std::move(chars));
}

Value Value::set(ValueList items) {
  std::sort(items.begin(), items.end());
  items.erase(std::unique(items.begin(), items.end()), items.end());
  Value v;
  v.kind_ = Kind::Set;
  v.rep_ = std::make_shared<const Items>(Items{{}, std::move(items)});
  return v;
}

std::optional<Value> Value::map(MapEntries entries) {
  std::sort(entries.begin(), entries.end());
  MapEntries unique;
  unique.reserve(entries.size());
  for (auto& e : entries) {
    if (!unique.empty() && unique.back().first == e.first) {
      if (unique.back().second != e.second) return std::nullopt;
      continue;
    }
    unique.push_back(std::move(e));
  }
  Value v;
  v.kind_ = Kind::Map;
  v.rep_ = std::make_shared<const Entries>(Entries{std::move(unique)});
  return v;
}

Value Value::tuple(ValueList items) {
  Value v;
  v.kind_ = Kind::Tuple;
  v.rep_ = std::make_shared<const Items>(Items{{}, std::move(items)});
  return v;
}

Value Value::record(std::string type_name, ValueList fields) {
  Value v;
  v.kind_ = Kind::Record;
  v.rep_ = std::make_shared<const Items>(Items{std::move(type_name), std::move(fields)});
  return v;
}

Rational Value::as_rational() const {
  if (kind_ == Kind::Int) return Rational(as_int());
  return std::get<Rational>(rep_);
}

const std::string& Value::quote_tag() const { return std::get<std::shared_ptr<const Quote>>(rep_)->tag; }

const std::string& Value::record_name() const { return std::get<std::shared_ptr<const Items>>(rep_)->name; }

const ValueList& Value::items() const { return std::get<std::shared_ptr<const Items>>(rep_)->items; }

const MapEntries& Value::entries() const { return std::get<std::shared_ptr<const Entries>>(rep_)->entries; }

std::size_t Value::size() const {
  if (kind_ == Kind::Map) return entries().size();
  return items().size();
}

const Value* Value::find(const Value& key) const {
  const auto& es = entries();
  auto it = std::lower_bound(es.begin(), es.end(), key,
                             [](const auto& e, const Value& k) { return compare(e.first, k) < 0; });
  if (it != es.end() && it->first == key) return &it->second;
  return nullptr;
}

bool Value::set_contains(const Value& v) const {
  const auto& xs = items();
  return std::binary_search(xs.begin(), xs.end(), v);
}

std::strong_ordering compare(const Value& a, const Value& b) {
  const int ra = kind_rank(a.kind_);
  const int rb = kind_rank(b.kind_);
  if (ra != rb) return ra <=> rb;
  switch (a.kind_) {
    case Value::Kind::Nil:
      return std::strong_ordering::equal;
    case Value::Kind::Bool:
      return a.as_bool() <=> b.as_bool();
    case Value::Kind::Int:
    case Value::Kind::Real: {
      if (a.kind_ == Value::Kind::Int && b.kind_ == Value::Kind::Int) {
        const int c = a.as_int().compare(b.as_int());
        return c <=> 0;
      }
      const Rational x = a.as_rational();
      const Rational y = b.as_rational();
      if (x < y) return std::strong_ordering::less;
      if (y < x) return std::strong_ordering::greater;
      return std::strong_ordering::equal;
    }
    case Value::Kind::Char:
      return a.as_char() <=> b.as_char();
    case Value::Kind::Quote:
      return a.quote_tag().compare(b.quote_tag()) <=> 0;
    case Value::Kind::Seq:
    case Value::Kind::Set:
    case Value::Kind::Tuple:
      return compare_lists(a.items(), b.items());
    case Value::Kind::Record:
      if (auto c = a.record_name().compare(b.record_name()) <=> 0; c != 0) return c;
      return compare_lists(a.items(), b.items());
    case Value::Kind::Map: {
      const auto& x = a.entries();
      const auto& y = b.entries();
      const std::size_t n = std::min(x.size(), y.size());
      for (std::size_t i = 0; i < n; ++i) {
        if (auto c = compare(x[i].first, y[i].first); c != 0) return c;
        if (auto c = compare(x[i].second, y[i].second); c != 0) return c;
      }
      return x.size() <=> y.size();
    }
  }
  return std::strong_ordering::equal;
}

std::string render_rational(const Rational& r) {
  Integer num = boost::multiprecision::numerator(r);
  Integer den = boost::multiprecision::denominator(r);
  // Terminating iff den has no prime factors other than 2 and 5.
  Integer d = den;
  int twos = 0;
  int fives = 0;
  while (d % 2 == 0) {
    d /= 2;
    ++twos;
  }
  while (d % 5 == 0) {
    d /= 5;
    ++fives;
  }
  std::ostringstream os;
  if (d != 1) {
    os << num << "/" << den;
    return os.str();
  }
  const int digits = std::max(twos, fives);
  Integer scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Integer scaled = num * (scale / den);
  const bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string text = scaled.str();
  if (static_cast<int>(text.size()) <= digits) text.insert(0, digits - text.size() + 1, '0');
  text.insert(text.size() - digits, ".");
  return (negative ? "-" : "") + text;
}

std::ostream& operator<<(std::ostream& os, const Value& v) {
  auto list = [&os](const ValueList& xs) {
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (i > 0) os << ", ";
      os << xs[i];
    }
  };
  switch (v.kind()) {
    case Value::Kind::Nil:
      return os << "nil";
    case Value::Kind::Bool:
      return os << (v.as_bool() ? "true" : "false");
    case Value::Kind::Int:
      return os << v.as_int();
    case Value::Kind::Real:
      return os << render_rational(v.as_rational());
    case Value::Kind::Char:
      os << '\'';
      render_char(os, v.as_char(), '\'');
      return os << '\'';
    case Value::Kind::Quote:
      return os << '<' << v.quote_tag() << '>';
    case Value::Kind::Seq: {
      const auto& xs = v.items();
      const bool text = !xs.empty() && std::all_of(xs.begin(), xs.end(),
                                                   [](const Value& x) { return x.is(Value::Kind::Char); });
      if (text) {
        os << '"';
        for (const auto& x : xs) render_char(os, x.as_char(), '"');
        return os << '"';
      }
      os << '[';
      list(xs);
      return os << ']';
    }
    case Value::Kind::Set:
      os << '{';
      list(v.items());
      return os << '}';
    case Value::Kind::Map: {
      const auto& es = v.entries();
      if (es.empty()) return os << "{|->}";
      os << '{';
      for (std::size_t i = 0; i < es.size(); ++i) {
        if (i > 0) os << ", ";
        os << es[i].first << " |-> " << es[i].second;
      }
      return os << '}';
    }
    case Value::Kind::Tuple:
      os << "mk_(";
      list(v.items());
      return os << ')';
    case Value::Kind::Record:
      os << "mk_" << v.record_name() << '(';
      list(v.items());
      return os << ')';
  }
  return os;
}

std::string Value::to_string() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

std::string render_binding(const Binding& binding) {
  std::string out;
  for (const auto& [name, value] : binding) {
    if (!out.empty()) out += ", ";
    out += name + " = " + value.to_string();
  }
  return out;
}

Binding sorted_binding(Binding binding) {
  std::stable_sort(binding.begin(), binding.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return binding;
}

}  // namespace specqc
