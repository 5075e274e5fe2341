#pragma once

// Tiny arithmetic grammar for closed-form targets and coefficient rules,
// e.g. "sin(pi x) + 0.5 sin(3 pi x)" or "1/n^2 * exp(-n)".
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary | unary)*     juxtaposition multiplies
//   unary   := ('+' | '-') unary | power
//   power   := primary ('^' unary)?                   right associative
//   primary := number | name | name '(' expr ')' | '(' expr ')'
//
// Names: the variables n and x, the constants pi and e, and the functions
// exp, log, sin, cos, sqrt, abs.

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace soft2hard {

class ExpressionError : public std::invalid_argument {
 public:
  ExpressionError(std::string_view source, std::size_t position, const std::string& what);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

struct Bindings {
  double n = 0.0;
  double x = 0.0;
};

class Expression {
 public:
  /// Throws ExpressionError pointing at the offending character.
  static Expression parse(std::string_view source);

  double operator()(const Bindings& b) const { return eval_(b); }
  double at_x(double x) const { return eval_({0.0, x}); }
  double at_n(int n) const { return eval_({static_cast<double>(n), 0.0}); }

  bool uses_n() const { return uses_n_; }
  bool uses_x() const { return uses_x_; }
  const std::string& source() const { return source_; }

 private:
  std::function<double(const Bindings&)> eval_;
  bool uses_n_ = false;
  bool uses_x_ = false;
  std::string source_;

  friend class ExpressionParser;
};

}  // namespace soft2hard
