#pragma once

#include <cctype>
#include <string>

#include "oscidecay/multipoly.hpp"

namespace oscidecay {

/// Parse error with 1-based line/column position.
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t col)
      : Error(msg + " at line " + std::to_string(line) + ", column " + std::to_string(col)),
        line_(line),
        col_(col) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return col_; }

 private:
  std::size_t line_, col_;
};

/// Recursive-descent parser for the polynomial expression grammar.
///
/// Precedence, tightest first:  ^  >  unary minus  >  * /  >  + -
/// Literals are integers and fractions p/q; sqrt(m) is accepted only for the
/// declared radicand; identifiers must be declared variables. `^` takes a
/// nonnegative integer exponent. `/` requires a constant, nonzero divisor.
class ExprParser {
 public:
  ExprParser(std::string text, VarSet vars, long long radicand)
      : text_(std::move(text)), vars_(std::move(vars)), radicand_(radicand) {}

  MultiPoly parse() {
    MultiPoly p = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return p;
  }

 private:
  MultiPoly parse_expr() {
    MultiPoly acc = parse_term();
    for (;;) {
      skip_ws();
      if (peek() == '+') {
        ++pos_;
        acc += parse_term();
      } else if (peek() == '-') {
        ++pos_;
        acc -= parse_term();
      } else {
        return acc;
      }
    }
  }

  MultiPoly parse_term() {
    MultiPoly acc = parse_factor();
    for (;;) {
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        acc *= parse_factor();
      } else if (peek() == '/') {
        std::size_t at = ++pos_;
        MultiPoly divisor = parse_factor();
        if (!divisor.is_constant()) fail_at("divisor must be a constant", at);
        if (divisor.is_zero()) fail_at("division by zero", at);
        acc = (QuadExt(1) / divisor.constant_value()) * acc;
      } else {
        return acc;
      }
    }
  }

  MultiPoly parse_factor() {
    skip_ws();
    if (peek() == '-') {
      ++pos_;
      return -parse_factor();
    }
    if (peek() == '+') {
      ++pos_;
      return parse_factor();
    }
    MultiPoly base = parse_primary();
    skip_ws();
    if (peek() == '^') {
      ++pos_;
      skip_ws();
      std::size_t at = pos_;
      if (!std::isdigit(peek())) fail("exponent must be a nonnegative integer");
      unsigned long long e = 0;
      while (std::isdigit(peek())) {
        e = e * 10 + static_cast<unsigned long long>(peek() - '0');
        if (e > 64) fail_at("exponent too large", at);
        ++pos_;
      }
      return base.pow(static_cast<unsigned>(e));
    }
    return base;
  }

  MultiPoly parse_primary() {
    skip_ws();
    const char c = peek();
    if (c == '(') {
      ++pos_;
      MultiPoly p = parse_expr();
      skip_ws();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return p;
    }
    if (std::isdigit(c)) {
      return MultiPoly::constant(vars_, QuadExt(Rational(parse_integer())));
    }
    if (std::isalpha(c) || c == '_') {
      std::size_t at = pos_;
      std::string id = parse_identifier();
      if (id == "sqrt") {
        skip_ws();
        if (peek() != '(') fail("expected '(' after sqrt");
        ++pos_;
        skip_ws();
        bool neg = false;
        if (peek() == '-') {
          neg = true;
          ++pos_;
        }
        if (!std::isdigit(peek())) fail("sqrt takes an integer radicand");
        BigInt m = parse_integer();
        skip_ws();
        if (peek() != ')') fail("expected ')'");
        ++pos_;
        if (neg || m < 2) fail_at("radicand must be an integer >= 2", at);
        if (m != radicand_)
          fail_at("mixed radicands: this problem uses sqrt(" + std::to_string(radicand_) + ")",
                  at);
        return MultiPoly::constant(vars_, QuadExt::sqrt_of(radicand_));
      }
      if (!vars_.contains(id)) fail_at("unknown identifier '" + id + "'", at);
      return MultiPoly::variable(vars_, id);
    }
    if (c == '\0') fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
    return MultiPoly();  // unreachable
  }

  BigInt parse_integer() {
    BigInt v = 0;
    while (std::isdigit(peek())) {
      v = v * 10 + (peek() - '0');
      ++pos_;
    }
    return v;
  }

  std::string parse_identifier() {
    std::string id;
    while (std::isalnum(peek()) || peek() == '_') {
      id += peek();
      ++pos_;
    }
    return id;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, pos_); }

  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw ParseError(msg, line, col);
  }

  std::string text_;
  VarSet vars_;
  long long radicand_;
  std::size_t pos_ = 0;
};

inline MultiPoly parse_polynomial(const std::string& text, const VarSet& vars,
                                  long long radicand = 2) {
  return ExprParser(text, vars, radicand).parse();
}

/// Parse a variable-free expression into one scalar (used for vector entries).
inline QuadExt parse_scalar(const std::string& text, long long radicand = 2) {
  MultiPoly p = ExprParser(text, VarSet(std::vector<std::string>{}), radicand).parse();
  return p.constant_value();
}

}  // namespace oscidecay
