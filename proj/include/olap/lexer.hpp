#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "olap/error.hpp"

namespace olap {

enum class TokenKind { Ident, Number, String, Symbol, End };

struct Token {
  TokenKind kind = TokenKind::End;
  std::string text;
  SourcePos pos;
  std::size_t offset = 0;  // byte offset of the first character
  std::size_t end = 0;     // byte offset one past the last character

  bool is_symbol(std::string_view s) const { return kind == TokenKind::Symbol && text == s; }
  bool is_keyword(std::string_view kw) const;
};

// Tokenizer shared by the schema DDL, the rule language and the REPL
// commands. Identifiers are Unicode letters/digits/underscore (any non-ASCII
// byte is accepted as a letter); `--` starts a line comment; `->` is a single
// symbol. Unknown characters raise a lex-error with their position.
std::vector<Token> tokenize(std::string_view source);

std::string describe(const Token& t);

/// Cursor over a token vector with the usual expect/accept helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& next();
  bool at_end() const { return peek().kind == TokenKind::End; }

  bool accept_keyword(std::string_view kw);
  bool accept_symbol(std::string_view sym);
  const Token& expect_keyword(std::string_view kw);
  const Token& expect_symbol(std::string_view sym);
  const Token& expect_ident(std::string_view what = "identifier");
  [[noreturn]] void fail(std::string_view expected) const;

 private:
  std::vector<Token> tokens_;
  std::size_t index_ = 0;
};

}  // namespace olap
