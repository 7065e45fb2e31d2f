#include "perihyp/expressions.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "perihyp/errors.hpp"

namespace perihyp {

using OpCode = Expression::OpCode;

class ExprParser {
 public:
  ExprParser(const std::string& text, std::span<const std::string> vars)
      : text_(text), vars_(vars) {}

  Expression run() {
    Expression e;
    e.text_ = text_;
    e.used_.assign(vars_.size(), false);
    out_ = &e;
    parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  void fail(const std::string& msg) const {
    throw ConfigError("expression error at position " + std::to_string(pos_) + " in '" +
                      text_ + "': " + msg);
  }
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  void emit(OpCode code, double value = 0.0, int var = 0) {
    out_->program_.push_back({code, value, var});
  }

  void parse_expr() {
    parse_term();
    while (true) {
      if (consume('+')) {
        parse_term();
        emit(OpCode::add);
      } else if (consume('-')) {
        parse_term();
        emit(OpCode::sub);
      } else {
        return;
      }
    }
  }

  void parse_term() {
    parse_unary();
    while (true) {
      if (consume('*')) {
        parse_unary();
        emit(OpCode::mul);
      } else if (consume('/')) {
        parse_unary();
        emit(OpCode::div);
      } else {
        return;
      }
    }
  }

  void parse_unary() {
    if (consume('-')) {
      parse_unary();
      emit(OpCode::neg);
      return;
    }
    parse_power();
  }

  void parse_power() {
    parse_atom();
    if (consume('^')) {
      parse_unary();  // right associative
      emit(OpCode::pow);
    }
  }

  void parse_atom() {
    skip_ws();
    if (pos_ >= text_.size()) fail("expected value");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      parse_expr();
      if (!consume(')')) fail("expected ')'");
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(text_.substr(pos_), &used);
      } catch (...) {
        fail("bad number");
      }
      pos_ += used;
      emit(OpCode::push_const, v);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t end = pos_;
      while (end < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[end])) || text_[end] == '_'))
        ++end;
      const std::string name = text_.substr(pos_, end - pos_);
      pos_ = end;
      if (peek() == '(') {
        ++pos_;
        parse_expr();
        if (!consume(')')) fail("expected ')' after function argument");
        if (name == "sin")
          emit(OpCode::sin);
        else if (name == "cos")
          emit(OpCode::cos);
        else if (name == "exp")
          emit(OpCode::exp);
        else
          fail("unknown function '" + name + "'");
        return;
      }
      if (name == "pi") {
        emit(OpCode::push_const, std::numbers::pi);
        return;
      }
      for (size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i] == name) {
          out_->used_[i] = true;
          emit(OpCode::push_var, 0.0, static_cast<int>(i));
          return;
        }
      fail("unknown identifier '" + name + "'");
    }
    fail("unexpected character");
  }

  const std::string& text_;
  std::span<const std::string> vars_;
  size_t pos_ = 0;
  Expression* out_ = nullptr;
};

Expression Expression::parse(const std::string& text, std::span<const std::string> variables) {
  return ExprParser(text, variables).run();
}

double Expression::eval(std::span<const double> values) const {
  double stack[64];
  int top = 0;
  for (const Op& op : program_) {
    switch (op.code) {
      case OpCode::push_const: stack[top++] = op.value; break;
      case OpCode::push_var: stack[top++] = values[op.var]; break;
      case OpCode::add: --top; stack[top - 1] += stack[top]; break;
      case OpCode::sub: --top; stack[top - 1] -= stack[top]; break;
      case OpCode::mul: --top; stack[top - 1] *= stack[top]; break;
      case OpCode::div: --top; stack[top - 1] /= stack[top]; break;
      case OpCode::pow: --top; stack[top - 1] = std::pow(stack[top - 1], stack[top]); break;
      case OpCode::neg: stack[top - 1] = -stack[top - 1]; break;
      case OpCode::sin: stack[top - 1] = std::sin(stack[top - 1]); break;
      case OpCode::cos: stack[top - 1] = std::cos(stack[top - 1]); break;
      case OpCode::exp: stack[top - 1] = std::exp(stack[top - 1]); break;
    }
    if (top >= 63) throw ConfigError("expression too deep: '" + text_ + "'");
  }
  return (top > 0) ? stack[top - 1] : 0.0;
}

}  // namespace perihyp
