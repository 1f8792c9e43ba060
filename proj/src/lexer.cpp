#include "olap/lexer.hpp"

#include "olap/text.hpp"

namespace olap {

namespace {

bool is_ident_start(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' || c >= 0x80;
}

bool is_digit(unsigned char c) { return c >= '0' && c <= '9'; }

bool is_ident_char(unsigned char c) { return is_ident_start(c) || is_digit(c); }

}  // namespace

bool Token::is_keyword(std::string_view kw) const {
  return kind == TokenKind::Ident && iequals(text, kw);
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  SourcePos pos;
  std::size_t i = 0;

  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      auto c = static_cast<unsigned char>(src[i]);
      if (c == '\n') {
        ++pos.line;
        pos.column = 1;
      } else if ((c & 0xC0) != 0x80) {
        ++pos.column;
      }
    }
  };

  while (i < src.size()) {
    auto c = static_cast<unsigned char>(src[i]);
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      advance(1);
      continue;
    }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token t;
    t.pos = pos;
    t.offset = i;
    std::size_t j = i;
    if (is_ident_start(c)) {
      while (j < src.size() && is_ident_char(static_cast<unsigned char>(src[j]))) ++j;
      t.kind = TokenKind::Ident;
      t.text = std::string(src.substr(i, j - i));
    } else if (is_digit(c) ||
               (c == '.' && i + 1 < src.size() && is_digit(static_cast<unsigned char>(src[i + 1])))) {
      while (j < src.size() && is_digit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.' && j + 1 < src.size() &&
          is_digit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() && is_digit(static_cast<unsigned char>(src[j]))) ++j;
      }
      if (j < src.size() && is_ident_start(static_cast<unsigned char>(src[j]))) {
        // "12abc": digits glued to letters form an identifier (e.g. dept codes)
        while (j < src.size() && is_ident_char(static_cast<unsigned char>(src[j]))) ++j;
        t.kind = TokenKind::Ident;
      } else {
        t.kind = TokenKind::Number;
      }
      t.text = std::string(src.substr(i, j - i));
    } else if (c == '\'' || c == '"') {
      ++j;
      std::string value;
      bool closed = false;
      while (j < src.size()) {
        if (static_cast<unsigned char>(src[j]) == c) {
          if (j + 1 < src.size() && static_cast<unsigned char>(src[j + 1]) == c) {
            value.push_back(src[j]);
            j += 2;
            continue;
          }
          closed = true;
          ++j;
          break;
        }
        value.push_back(src[j]);
        ++j;
      }
      if (!closed) throw Error(ErrorCode::LexError, "unterminated string literal", pos);
      t.kind = TokenKind::String;
      t.text = std::move(value);
    } else if (c == '-' && i + 1 < src.size() && src[i + 1] == '>') {
      j = i + 2;
      t.kind = TokenKind::Symbol;
      t.text = "->";
    } else if (c == '<' || c == '>' || c == '!') {
      j = i + 1;
      if (j < src.size() && (src[j] == '=' || (c == '<' && src[j] == '>'))) ++j;
      if (c == '!' && j == i + 1) {
        throw Error(ErrorCode::LexError, "unexpected character '!'", pos);
      }
      t.kind = TokenKind::Symbol;
      t.text = std::string(src.substr(i, j - i));
    } else if (std::string_view("()[].,;:=-*").find(static_cast<char>(c)) != std::string_view::npos) {
      j = i + 1;
      t.kind = TokenKind::Symbol;
      t.text = std::string(1, static_cast<char>(c));
    } else {
      throw Error(ErrorCode::LexError,
                  "unexpected character '" + std::string(1, static_cast<char>(c)) + "'", pos);
    }
    t.end = j;
    out.push_back(std::move(t));
    advance(j - i);
  }
  Token end;
  end.kind = TokenKind::End;
  end.pos = pos;
  end.offset = end.end = src.size();
  out.push_back(std::move(end));
  return out;
}

std::string describe(const Token& t) {
  switch (t.kind) {
    case TokenKind::End: return "end of input";
    case TokenKind::String: return "string '" + t.text + "'";
    case TokenKind::Number: return "number " + t.text;
    default: return "'" + t.text + "'";
  }
}

const Token& TokenStream::peek(std::size_t ahead) const {
  auto i = std::min(index_ + ahead, tokens_.size() - 1);
  return tokens_[i];
}

const Token& TokenStream::next() {
  const Token& t = tokens_[index_];
  if (index_ + 1 < tokens_.size()) ++index_;
  return t;
}

bool TokenStream::accept_keyword(std::string_view kw) {
  if (peek().is_keyword(kw)) {
    next();
    return true;
  }
  return false;
}

bool TokenStream::accept_symbol(std::string_view sym) {
  if (peek().is_symbol(sym)) {
    next();
    return true;
  }
  return false;
}

const Token& TokenStream::expect_keyword(std::string_view kw) {
  if (!peek().is_keyword(kw)) fail(std::string(kw));
  return next();
}

const Token& TokenStream::expect_symbol(std::string_view sym) {
  if (!peek().is_symbol(sym)) fail("'" + std::string(sym) + "'");
  return next();
}

const Token& TokenStream::expect_ident(std::string_view what) {
  if (peek().kind != TokenKind::Ident) fail(what);
  return next();
}

void TokenStream::fail(std::string_view expected) const {
  throw Error(ErrorCode::SyntaxError,
              "expected " + std::string(expected) + ", got " + describe(peek()), peek().pos);
}

}  // namespace olap
