#include "superjet/expr.hpp"

#include <cctype>
#include <string>

#include "superjet/errors.hpp"

namespace superjet {

namespace {

constexpr unsigned kMaxExponent = 1000;

class Parser {
 public:
  Parser(std::string_view text, const TablePtr& table) : text_(text), table_(table) {}

  SuperPoly parse() {
    skip_space();
    if (at_end()) fail("empty expression");
    SuperPoly value = expr();
    skip_space();
    if (!at_end()) fail(std::string("unexpected '") + peek() + "'");
    return value;
  }

 private:
  SuperPoly expr() {
    SuperPoly value = term();
    for (;;) {
      skip_space();
      if (accept('+')) {
        value += term();
      } else if (accept('-')) {
        value -= term();
      } else {
        return value;
      }
    }
  }

  SuperPoly term() {
    SuperPoly value = unary();
    for (;;) {
      skip_space();
      if (accept('*')) {
        value = mul(value, unary());
      } else if (accept('/')) {
        skip_space();
        const std::size_t at = pos_;
        const mpz_class d = integer();
        if (d == 0) fail_at("division by zero", at);
        value = Scalar(mpz_class(1), d) * value;
      } else {
        return value;
      }
    }
  }

  SuperPoly unary() {
    skip_space();
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power_expr();
  }

  SuperPoly power_expr() {
    SuperPoly base = primary();
    skip_space();
    if (!accept('^')) return base;
    skip_space();
    if (!at_end() && peek() == '-') fail("negative exponent");
    const std::size_t at = pos_;
    const mpz_class e = integer();
    if (e > kMaxExponent) fail_at("exponent too large", at);
    return power(base, static_cast<unsigned>(e.get_ui()));
  }

  SuperPoly primary() {
    skip_space();
    if (at_end()) fail("unexpected end of expression");
    const char c = peek();
    if (std::isdigit(static_cast<unsigned char>(c))) return SuperPoly(table_, Scalar(integer()));
    if (is_ident_start(c)) {
      const std::size_t at = pos_;
      std::string name;
      while (!at_end() && is_ident_char(peek())) name += text_[pos_++];
      if (!table_->find(name)) fail_at("unknown identifier '" + name + "'", at);
      return SuperPoly::generator(table_, name);
    }
    if (accept('(')) {
      SuperPoly inner = expr();
      skip_space();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    fail(std::string("unexpected '") + c + "'");
  }

  mpz_class integer() {
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) fail("expected integer literal");
    std::string digits;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) digits += text_[pos_++];
    return mpz_class(digits, 10);
  }

  static bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  bool accept(char c) {
    if (!at_end() && peek() == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void skip_space() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& message) const { fail_at(message, pos_); }
  [[noreturn]] void fail_at(const std::string& message, std::size_t at) const {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < at && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError(message, line, column);
  }

  std::string_view text_;
  const TablePtr& table_;
  std::size_t pos_ = 0;
};

}  // namespace

SuperPoly parse_poly(std::string_view text, const TablePtr& table) { return Parser(text, table).parse(); }

}  // namespace superjet
