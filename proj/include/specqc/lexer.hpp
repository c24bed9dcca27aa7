#pragma once

#include "specqc/ast.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace specqc {

enum class TokenKind {
  End,
  Identifier,  // includes keywords; the parser decides
  MkName,      // `mk_Name`, or `mk_` alone for tuples (text holds the name part)
  IsName,      // `is_Name`, or `is_` alone (text holds the name part)
  Number,
  Character,
  String,
  Quote,       // `<TAG>` (text holds TAG)
  Symbol,
};

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  Location location;
};

struct Comment {
  std::string text;  // without the leading `--`
  Location location;
};

struct LexResult {
  std::vector<Token> tokens;  // always terminated by an End token
  std::vector<Comment> comments;
  std::vector<Diagnostic> errors;
};

LexResult tokenize(std::shared_ptr<const SourceFile> file);

std::shared_ptr<const SourceFile> make_source_file(std::string_view text, std::string name);

bool is_reserved_word(std::string_view word);

}  // namespace specqc
