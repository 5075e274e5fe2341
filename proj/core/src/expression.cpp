#include "soft2hard/expression.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>

namespace soft2hard {

using Eval = std::function<double(const Bindings&)>;

ExpressionError::ExpressionError(std::string_view source, std::size_t position,
                                 const std::string& what)
    : std::invalid_argument("expression '" + std::string(source) + "' at column " +
                            std::to_string(position + 1) + ": " + what),
      position_(position) {}

class ExpressionParser {
 public:
  explicit ExpressionParser(std::string_view src) : src_(src) {}

  Expression run() {
    Expression e;
    e.eval_ = expr();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected '" + std::string(1, src_[pos_]) + "'");
    e.uses_n_ = uses_n_;
    e.uses_x_ = uses_x_;
    e.source_ = std::string(src_);
    return e;
  }

 private:
  std::string_view src_;
  std::size_t pos_ = 0;
  bool uses_n_ = false;
  bool uses_x_ = false;

  [[noreturn]] void fail(const std::string& what) const {
    throw ExpressionError(src_, pos_, what);
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  char peek() {
    skip_space();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  bool starts_primary() {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' ||
           std::isalpha(static_cast<unsigned char>(c));
  }

  Eval expr() {
    Eval lhs = term();
    for (;;) {
      const char c = peek();
      if (c != '+' && c != '-') return lhs;
      ++pos_;
      Eval rhs = term();
      if (c == '+') {
        lhs = [lhs, rhs](const Bindings& b) { return lhs(b) + rhs(b); };
      } else {
        lhs = [lhs, rhs](const Bindings& b) { return lhs(b) - rhs(b); };
      }
    }
  }

  Eval term() {
    Eval lhs = unary();
    for (;;) {
      const char c = peek();
      if (c == '*' || c == '/') {
        ++pos_;
        Eval rhs = unary();
        if (c == '*') {
          lhs = [lhs, rhs](const Bindings& b) { return lhs(b) * rhs(b); };
        } else {
          lhs = [lhs, rhs](const Bindings& b) { return lhs(b) / rhs(b); };
        }
      } else if (starts_primary()) {
        Eval rhs = unary();
        lhs = [lhs, rhs](const Bindings& b) { return lhs(b) * rhs(b); };
      } else {
        return lhs;
      }
    }
  }

  Eval unary() {
    const char c = peek();
    if (c == '-') {
      ++pos_;
      Eval inner = unary();
      return [inner](const Bindings& b) { return -inner(b); };
    }
    if (c == '+') {
      ++pos_;
      return unary();
    }
    return power();
  }

  Eval power() {
    Eval base = primary();
    if (peek() == '^') {
      ++pos_;
      Eval exponent = unary();
      return [base, exponent](const Bindings& b) { return std::pow(base(b), exponent(b)); };
    }
    return base;
  }

  Eval primary() {
    const char c = peek();
    if (c == '(') {
      ++pos_;
      Eval inner = expr();
      if (peek() != ')') fail("expected ')'");
      ++pos_;
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return name();
    if (c == '\0') fail("unexpected end of expression");
    fail("unexpected '" + std::string(1, c) + "'");
  }

  Eval number() {
    double value = 0.0;
    const char* begin = src_.data() + pos_;
    auto [ptr, ec] = std::from_chars(begin, src_.data() + src_.size(), value);
    if (ec != std::errc{}) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return [value](const Bindings&) { return value; };
  }

  Eval name() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) {
      ++pos_;
    }
    const std::string id(src_.substr(start, pos_ - start));
    if (peek() == '(') {
      double (*fn)(double) = nullptr;
      if (id == "exp") fn = [](double v) { return std::exp(v); };
      else if (id == "log") fn = [](double v) { return std::log(v); };
      else if (id == "sin") fn = [](double v) { return std::sin(v); };
      else if (id == "cos") fn = [](double v) { return std::cos(v); };
      else if (id == "sqrt") fn = [](double v) { return std::sqrt(v); };
      else if (id == "abs") fn = [](double v) { return std::abs(v); };
      if (fn == nullptr) {
        pos_ = start;
        fail("unknown function '" + id + "'");
      }
      ++pos_;
      Eval arg = expr();
      if (peek() != ')') fail("expected ')' after argument of " + id);
      ++pos_;
      return [fn, arg](const Bindings& b) { return fn(arg(b)); };
    }
    if (id == "n") {
      uses_n_ = true;
      return [](const Bindings& b) { return b.n; };
    }
    if (id == "x") {
      uses_x_ = true;
      return [](const Bindings& b) { return b.x; };
    }
    if (id == "pi") return [](const Bindings&) { return std::numbers::pi; };
    if (id == "e") return [](const Bindings&) { return std::numbers::e; };
    pos_ = start;
    fail("unknown name '" + id + "'");
  }
};

Expression Expression::parse(std::string_view source) {
  return ExpressionParser(source).run();
}

}  // namespace soft2hard
