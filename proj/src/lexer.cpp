#include "specqc/lexer.hpp"

#include <array>
#include <cctype>

namespace specqc {

namespace {

constexpr std::array<std::string_view, 24> kSymbols = {
    "<=>", "|->", "...", "=>", "->", "+>", "==", "<>", "<=", ">=", "++", "::", ".#",
    "&",   "(",   ")",   "[",  "]",  "{",  "}",  ",",  ";",  ":",  "=",
};
constexpr std::string_view kSingles = "<>+-*/\\^|.@";

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '\'';
}

class Lexer {
 public:
  explicit Lexer(std::shared_ptr<const SourceFile> file) : file_(std::move(file)) {}

  LexResult run() {
    for (line_ = 1; line_ <= static_cast<int>(file_->lines.size()); ++line_) {
      text_ = file_->lines[line_ - 1];
      pos_ = 0;
      while (pos_ < text_.size()) step();
    }
    Token end;
    end.kind = TokenKind::End;
    end.location = here(static_cast<int>(text_.size()) + 1);
    if (file_->lines.empty()) end.location = Location{file_, 1, 1};
    result_.tokens.push_back(std::move(end));
    return std::move(result_);
  }

 private:
  Location here(int column) const { return Location{file_, line_, column}; }

  void push(TokenKind kind, std::string text, std::size_t start) {
    result_.tokens.push_back(Token{kind, std::move(text), here(static_cast<int>(start) + 1)});
  }

  void error(std::size_t at, std::string message) {
    result_.errors.push_back(Diagnostic{here(static_cast<int>(at) + 1), std::move(message)});
  }

  void step() {
    const char c = text_[pos_];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos_;
      return;
    }
    const std::size_t start = pos_;
    if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
      result_.comments.push_back(Comment{std::string(text_.substr(pos_ + 2)), here(static_cast<int>(start) + 1)});
      pos_ = text_.size();
      return;
    }
    if (ident_start(c)) {
      while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
      std::string word(text_.substr(start, pos_ - start));
      if (word.rfind("mk_", 0) == 0) {
        push(TokenKind::MkName, word.substr(3), start);
      } else if (word.rfind("is_", 0) == 0) {
        push(TokenKind::IsName, word.substr(3), start);
      } else {
        push(TokenKind::Identifier, std::move(word), start);
      }
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      lex_number(start);
      return;
    }
    if (c == '\'') {
      lex_char(start);
      return;
    }
    if (c == '"') {
      lex_string(start);
      return;
    }
    if (c == '<' && try_quote(start)) return;
    for (auto sym : kSymbols) {
      if (text_.substr(pos_, sym.size()) == sym) {
        pos_ += sym.size();
        push(TokenKind::Symbol, std::string(sym), start);
        return;
      }
    }
    if (kSingles.find(c) != std::string_view::npos) {
      ++pos_;
      push(TokenKind::Symbol, std::string(1, c), start);
      return;
    }
    error(start, std::string("Unexpected character '") + c + "'");
    ++pos_;
  }

  void lex_number(std::size_t start) {
    auto digits = [this] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    // A '.' begins a fraction only when followed by a digit (so `1,...,5` and `x.#1` lex properly).
    if (pos_ + 1 < text_.size() && text_[pos_] == '.' && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        digits();
      } else {
        pos_ = save;
      }
    }
    push(TokenKind::Number, std::string(text_.substr(start, pos_ - start)), start);
  }

  bool read_escaped(std::string& out) {
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_++];
    if (c != '\\') {
      out += c;
      return true;
    }
    if (pos_ >= text_.size()) return false;
    char e = text_[pos_++];
    switch (e) {
      case 'n': out += '\n'; break;
      case 't': out += '\t'; break;
      case 'r': out += '\r'; break;
      default: out += e; break;
    }
    return true;
  }

  void lex_char(std::size_t start) {
    ++pos_;
    std::string value;
    if (!read_escaped(value) || pos_ >= text_.size() || text_[pos_] != '\'') {
      error(start, "Malformed character literal");
      pos_ = text_.size();
      return;
    }
    ++pos_;
    push(TokenKind::Character, value, start);
  }

  void lex_string(std::size_t start) {
    ++pos_;
    std::string value;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (!read_escaped(value)) break;
    }
    if (pos_ >= text_.size()) {
      error(start, "Unterminated string literal");
      return;
    }
    ++pos_;
    push(TokenKind::String, value, start);
  }

  bool try_quote(std::size_t start) {
    std::size_t p = pos_ + 1;
    if (p >= text_.size() || !ident_start(text_[p])) return false;
    while (p < text_.size() && ident_char(text_[p])) ++p;
    if (p >= text_.size() || text_[p] != '>') return false;
    push(TokenKind::Quote, std::string(text_.substr(pos_ + 1, p - pos_ - 1)), start);
    pos_ = p + 1;
    return true;
  }

  std::shared_ptr<const SourceFile> file_;
  LexResult result_;
  int line_ = 1;
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

LexResult tokenize(std::shared_ptr<const SourceFile> file) { return Lexer(std::move(file)).run(); }

std::shared_ptr<const SourceFile> make_source_file(std::string_view text, std::string name) {
  auto file = std::make_shared<SourceFile>();
  file->name = std::move(name);
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      if (start < text.size()) file->lines.emplace_back(text.substr(start));
      break;
    }
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    file->lines.emplace_back(line);
    start = end + 1;
  }
  return file;
}

bool is_reserved_word(std::string_view w) {
  static constexpr std::string_view kWords[] = {
      "functions", "types", "values", "state", "of",     "end",    "inv",    "init",   "pre",    "post",
      "if",        "then",  "elseif", "else",  "cases",  "others", "let",    "in",     "be",     "st",
      "forall",    "exists","exists1","and",   "or",     "not",    "true",   "false",  "nil",    "set",
      "seq",       "map",   "to",     "bool",  "nat",    "nat1",   "int",    "real",   "char",   "subset",
      "psubset",   "union", "inter",  "div",   "mod",    "rem",    "abs",    "floor",  "hd",     "tl",
      "len",       "elems", "inds",   "card",  "dom",    "rng",    "power",  "dunion", "dinter", "conc",
      "munion",
  };
  for (auto k : kWords) {
    if (k == w) return true;
  }
  return false;
}

}  // namespace specqc
