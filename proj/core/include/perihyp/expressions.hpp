#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

namespace perihyp {

/// Small arithmetic expression over named variables with sin, cos, exp,
/// the four operations, '^', unary minus, numeric literals and 'pi'.
/// Parsed once, evaluated against a value vector aligned with the variable
/// list given at parse time.
class Expression {
 public:
  static Expression parse(const std::string& text, std::span<const std::string> variables);

  double eval(std::span<const double> values) const;
  bool uses(size_t var_index) const { return var_index < used_.size() && used_[var_index]; }
  const std::string& text() const { return text_; }

  enum class OpCode { push_const, push_var, add, sub, mul, div, pow, neg, sin, cos, exp };

 private:
  struct Op {
    OpCode code;
    double value = 0.0;
    int var = 0;
  };
  std::string text_;
  std::vector<Op> program_;  // postfix program
  std::vector<bool> used_;
  friend class ExprParser;
};

}  // namespace perihyp
