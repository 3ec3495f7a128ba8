#pragma once

#include <cctype>
#include <functional>
#include <stdexcept>
#include <string>

#include "dyhat/bigrat.hpp"

namespace dyhat {

// Recursive-descent parser for + - * / ^ with integer literals, identifiers
// and parentheses. The value type supplies the arithmetic.
template <typename V>
class ExprParser {
 public:
  using Num = std::function<V(const BigRat&)>;
  using Var = std::function<V(const std::string&)>;
  using Div = std::function<V(const V&, const V&)>;

  ExprParser(const std::string& s, Num num, Var var, Div div)
      : s_(s), num_(std::move(num)), var_(std::move(var)), div_(std::move(div)) {}

  V parse() {
    V r = expr();
    skip();
    if (pos_ != s_.size()) fail("trailing input");
    return r;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("parse: " + what + " at position " + std::to_string(pos_) + " in '" + s_ + "'");
  }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool eat(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  V expr() {
    V acc = term();
    for (;;) {
      if (eat('+')) acc = acc + term();
      else if (eat('-')) acc = acc - term();
      else return acc;
    }
  }
  V term() {
    V acc = unary();
    for (;;) {
      if (eat('*')) acc = acc * unary();
      else if (eat('/')) acc = div_(acc, unary());
      else return acc;
    }
  }
  V unary() {
    if (eat('-')) return -unary();
    if (eat('+')) return unary();
    return power();
  }
  V power() {
    V base = atom();
    if (eat('^')) {
      skip();
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      if (start == pos_) fail("expected exponent");
      unsigned n = static_cast<unsigned>(std::stoul(s_.substr(start, pos_ - start)));
      V r = num_(BigRat(1));
      for (unsigned i = 0; i < n; ++i) r = r * base;
      return r;
    }
    return base;
  }
  V atom() {
    skip();
    if (eat('(')) {
      V r = expr();
      if (!eat(')')) fail("expected ')'");
      return r;
    }
    if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
      size_t start = pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      return num_(BigRat(s_.substr(start, pos_ - start)));
    }
    if (pos_ < s_.size() && (std::isalpha(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
      size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      return var_(s_.substr(start, pos_ - start));
    }
    fail("unexpected character");
  }

  const std::string& s_;
  Num num_;
  Var var_;
  Div div_;
  size_t pos_ = 0;
};

}  // namespace dyhat
