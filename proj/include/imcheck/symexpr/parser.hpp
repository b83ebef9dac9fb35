#pragma once

// Shared tokenizer and recursive-descent driver for the expression grammar.
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?
//   primary := number | identifier | identifier '(' expr ')' | '(' expr ')'
//
// The driver is parameterized by a semantics object so the same grammar
// yields scalar expressions (symexpr) and differential forms (cartan), where
// '^' doubles as the wedge product. UTF-8 aliases: '·' for '*', '−' for '-',
// '∧' for '^'. Identifiers may contain non-ASCII letters (ẋ1, ξ2, ...).

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "imcheck/symexpr/rational.hpp"

namespace imcheck::sym {

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset)
      : std::runtime_error(message + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

struct Token {
  enum class Kind { Number, Identifier, Plus, Minus, Star, Slash, Caret, LParen, RParen, End };
  Kind kind;
  std::string text;
  std::size_t offset;
};

std::vector<Token> tokenize(std::string_view source);

template <class Semantics>
class Parser {
 public:
  using Value = typename Semantics::Value;

  Parser(std::string_view source, Semantics& sem) : tokens_(tokenize(source)), sem_(sem) {}

  Value parse() {
    Value v = expr();
    if (peek().kind != Token::Kind::End) throw ParseError("unexpected token '" + peek().text + "'", peek().offset);
    return v;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }
  bool accept(Token::Kind k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }

  Value expr() {
    Value v = term();
    for (;;) {
      std::size_t at = peek().offset;
      if (accept(Token::Kind::Plus))
        v = sem_.add(std::move(v), term(), at);
      else if (accept(Token::Kind::Minus))
        v = sem_.sub(std::move(v), term(), at);
      else
        return v;
    }
  }

  Value term() {
    Value v = unary();
    for (;;) {
      std::size_t at = peek().offset;
      if (accept(Token::Kind::Star))
        v = sem_.mul(std::move(v), unary(), at);
      else if (accept(Token::Kind::Slash))
        v = sem_.div(std::move(v), unary(), at);
      else
        return v;
    }
  }

  Value unary() {
    std::size_t at = peek().offset;
    if (accept(Token::Kind::Minus)) return sem_.neg(unary(), at);
    if (accept(Token::Kind::Plus)) return unary();
    return power();
  }

  Value power() {
    Value base = primary();
    std::size_t at = peek().offset;
    if (accept(Token::Kind::Caret)) return sem_.pow(std::move(base), unary(), at);
    return base;
  }

  Value primary() {
    const Token& t = next();
    switch (t.kind) {
      case Token::Kind::Number:
        return sem_.number(t.text, t.offset);
      case Token::Kind::Identifier:
        if (accept(Token::Kind::LParen)) {
          Value arg = expr();
          expect_rparen();
          return sem_.call(t.text, std::move(arg), t.offset);
        }
        return sem_.identifier(t.text, t.offset);
      case Token::Kind::LParen: {
        Value v = expr();
        expect_rparen();
        return v;
      }
      case Token::Kind::End:
        throw ParseError("unexpected end of input", t.offset);
      default:
        throw ParseError("unexpected token '" + t.text + "'", t.offset);
    }
  }

  void expect_rparen() {
    if (peek().kind != Token::Kind::RParen) {
      if (peek().kind == Token::Kind::End) throw ParseError("missing ')'", peek().offset);
      throw ParseError("expected ')'", peek().offset);
    }
    ++pos_;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  Semantics& sem_;
};

}  // namespace imcheck::sym
