#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tmuml/errors.hpp"
#include "tmuml/model.hpp"

namespace tmuml::detail {

struct Token {
  enum class Kind { Word, String, LBrace, RBrace, Arrow, Comma, Eq, End };
  Kind kind = Kind::End;
  std::string text;
  std::uint32_t line = 0;
  std::uint32_t column = 0;
};

// Character scanner shared by the text formats. Whitespace separates tokens,
// '#' comments run to end of line, ';' is accepted as a no-op separator.
// Words are dotted identifier paths; strings are double-quoted with \" and
// \\ escapes.
class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  Token next() {
    skip_blank();
    Token t;
    t.line = line_;
    t.column = column_;
    if (eof()) {
      t.kind = Token::Kind::End;
      return t;
    }
    char c = peek();
    if (c == '{') return punct(t, Token::Kind::LBrace);
    if (c == '}') return punct(t, Token::Kind::RBrace);
    if (c == ',') return punct(t, Token::Kind::Comma);
    if (c == '=') return punct(t, Token::Kind::Eq);
    if (c == '-') {
      advance();
      if (eof() || peek() != '>') throw ParseError(t.line, t.column, "expected '->'");
      advance();
      t.kind = Token::Kind::Arrow;
      t.text = "->";
      return t;
    }
    if (c == '"') {
      advance();
      t.kind = Token::Kind::String;
      while (!eof() && peek() != '"') {
        char d = peek();
        if (d == '\\') {
          advance();
          if (eof()) break;
          d = peek();
          if (d != '"' && d != '\\')
            throw ParseError(line_, column_, "unsupported escape in string");
        }
        if (d == '\n') throw ParseError(t.line, t.column, "unterminated string");
        t.text += d;
        advance();
      }
      if (eof()) throw ParseError(t.line, t.column, "unterminated string");
      advance();
      return t;
    }
    if (identifier_start(c)) {
      t.kind = Token::Kind::Word;
      // Interior '-' is allowed (role names) but '->' always ends the word.
      while (!eof()) {
        char d = peek();
        bool hyphen = d == '-' && pos_ + 1 < text_.size() && identifier_char(text_[pos_ + 1]);
        if (!identifier_char(d) && d != '.' && !hyphen) break;
        t.text += d;
        advance();
      }
      return t;
    }
    throw ParseError(t.line, t.column, std::string("unexpected character '") + c + "'");
  }

  const Token& peek_token() {
    if (!has_lookahead_) {
      lookahead_ = next();
      has_lookahead_ = true;
    }
    return lookahead_;
  }

  Token take() {
    if (has_lookahead_) {
      has_lookahead_ = false;
      return lookahead_;
    }
    return next();
  }

 private:
  Token& punct(Token& t, Token::Kind kind) {
    t.kind = kind;
    t.text = peek();
    advance();
    return t;
  }

  void skip_blank() {
    while (!eof()) {
      char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == ';') {
        advance();
      } else {
        break;
      }
    }
  }

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::uint32_t line_ = 1;
  std::uint32_t column_ = 1;
  Token lookahead_;
  bool has_lookahead_ = false;
};

inline std::string quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

// Splits input into (line number, content) pairs with comments stripped,
// for the line-oriented formats. A '#' inside a quoted string or a bracket
// condition is kept.
inline std::vector<std::pair<std::uint32_t, std::string>> content_lines(std::string_view text) {
  std::vector<std::pair<std::uint32_t, std::string>> out;
  std::uint32_t line_no = 1;
  std::string line;
  auto flush = [&] {
    bool quoted = false;
    bool bracket = false;
    std::string kept;
    for (char c : line) {
      if (c == '"') quoted = !quoted;
      if (c == '[' && !quoted) bracket = true;
      if (c == ']' && !quoted) bracket = false;
      if (c == '#' && !quoted && !bracket) break;
      kept += c;
    }
    while (!kept.empty() && (kept.back() == ' ' || kept.back() == '\t' || kept.back() == '\r'))
      kept.pop_back();
    std::size_t start = kept.find_first_not_of(" \t");
    if (start != std::string::npos) out.emplace_back(line_no, kept.substr(start));
    line.clear();
  };
  for (char c : text) {
    if (c == '\n') {
      flush();
      ++line_no;
    } else {
      line += c;
    }
  }
  flush();
  return out;
}

// Whitespace-splits a line into fields.
inline std::vector<std::string> split_fields(std::string_view s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == '\t') {
      if (!cur.empty()) {
        out.push_back(cur);
        cur.clear();
      }
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace tmuml::detail
