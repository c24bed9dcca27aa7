#pragma once

#include "specqc/ast.hpp"
#include "specqc/lexer.hpp"

#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace specqc {

struct ParseResult {
  SpecModule module;
  std::vector<Diagnostic> errors;
  std::vector<Diagnostic> warnings;

  bool ok() const { return errors.empty(); }
};

/// Parses one source file into a (not yet checked) module. Lexical and syntax
/// errors are collected; parsing resumes at the next definition.
ParseResult parse_specification(std::string_view source, std::string file_name);

struct SourceText {
  std::string name;
  std::string text;
};

/// Parses several files into one flat module.
ParseResult parse_specifications(const std::vector<SourceText>& sources);

template <typename T>
struct Parsed {
  T value{};
  std::vector<Diagnostic> errors;

  bool ok() const { return errors.empty(); }
};

Parsed<ExprPtr> parse_expression(std::string_view text, std::string file_name = "console");
Parsed<TypePtr> parse_type(std::string_view text, std::string file_name = "console");
/// `<pattern>:<type>`
Parsed<Bind> parse_type_bind(std::string_view text, std::string file_name = "console");

/// A function definition an annotation comment may attach to: comments on
/// lines in (after_line, line) belong to it.
struct AnnotationAnchor {
  std::string function_name;
  std::vector<std::string> type_params;
  int after_line = 0;
  int line = 0;
  std::string file_name;
};

/// Turns `-- @QuickCheck @T = type, ...;` comments into annotations.
/// Malformed or misplaced annotations produce warnings only.
std::vector<QuickCheckAnnotation> extract_annotations(const std::vector<Comment>& comments,
                                                      const std::vector<AnnotationAnchor>& anchors,
                                                      std::vector<Diagnostic>& warnings);

}  // namespace specqc
