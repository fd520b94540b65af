#pragma once

#include <map>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fman/error.hpp"
#include "fman/jet.hpp"

namespace fman {

enum class UnaryOp { neg, exp, ln, sqrt, sin, cos };

struct Rational {
  long num = 1;
  long den = 1;
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend bool operator==(const Rational&, const Rational&) = default;
};

struct ExprNode {
  enum class Kind { constant, variable, parameter, unary, binary, power };

  Kind kind = Kind::constant;
  double value = 0.0;  // constant, or parameter value
  int var = -1;        // variable slot; the Lax variable p is slot == chart size
  std::string name;    // variable or parameter name
  UnaryOp op1 = UnaryOp::neg;
  char op2 = '+';      // one of + - * /
  Rational exponent;
  std::shared_ptr<const ExprNode> lhs;
  std::shared_ptr<const ExprNode> rhs;
};

bool same_tree(const ExprNode& a, const ExprNode& b);

using Parameters = std::map<std::string, double, std::less<>>;

// Parsed scalar field over a chart. Immutable; cheap to copy.
class FieldExpr {
 public:
  FieldExpr() = default;
  FieldExpr(std::shared_ptr<const ExprNode> root, std::vector<std::string> chart, bool allow_p);

  static FieldExpr constant(double value, std::vector<std::string> chart);

  const ExprNode& root() const { return *root_; }
  const std::shared_ptr<const ExprNode>& root_ptr() const { return root_; }
  const std::vector<std::string>& chart() const { return chart_; }
  bool allows_p() const { return allow_p_; }
  bool uses_p() const;
  // Number of variable slots: chart size, plus one when p is allowed.
  int arity() const { return static_cast<int>(chart_.size()) + (allow_p_ ? 1 : 0); }
  bool is_zero_constant() const;
  // No chart variable or p occurs.
  bool is_constant() const;
  std::string to_string() const;

 private:
  std::shared_ptr<const ExprNode> root_;
  std::vector<std::string> chart_;
  bool allow_p_ = false;
};

// Grammar: sum := prod (('+'|'-') prod)*, prod := unary (('*'|'/') unary)*,
// unary := '-' unary | pow, pow := atom ('^' unary)?, exponent folded to a
// rational constant. Functions exp ln sqrt sin cos.
FieldExpr parse(std::string_view src, std::vector<std::string> chart, bool allow_p = false,
                const Parameters& params = {});

std::string to_string(const ExprNode& node);

// Per-algebra hooks used by evaluate(); overloads for double and Jet.
double apply_unary(UnaryOp op, double x);
double apply_power(double x, Rational e);
Jet apply_unary(UnaryOp op, const Jet& x);
Jet apply_power(const Jet& x, Rational e);

// Evaluate over any algebra T with + - * / and apply_unary/apply_power hooks.
// `lift` turns a real constant into a T. Domain errors are annotated with the
// innermost failing subexpression.
template <class T, class Lift>
T evaluate(const ExprNode& node, std::span<const T> vars, const Lift& lift) {
  try {
    switch (node.kind) {
      case ExprNode::Kind::constant:
      case ExprNode::Kind::parameter:
        return lift(node.value);
      case ExprNode::Kind::variable:
        return vars[static_cast<std::size_t>(node.var)];
      case ExprNode::Kind::unary:
        return apply_unary(node.op1, evaluate<T>(*node.lhs, vars, lift));
      case ExprNode::Kind::power:
        return apply_power(evaluate<T>(*node.lhs, vars, lift), node.exponent);
      case ExprNode::Kind::binary: {
        T a = evaluate<T>(*node.lhs, vars, lift);
        T b = evaluate<T>(*node.rhs, vars, lift);
        switch (node.op2) {
          case '+': return a + b;
          case '-': return a - b;
          case '*': return a * b;
          default: return a / b;
        }
      }
    }
  } catch (const DomainError& e) {
    if (!e.subexpression().empty()) throw;
    throw DomainError(e.what(), to_string(node), {});
  }
  return lift(0.0);
}

// Jet of the expression at x0 (size == arity()).
Jet eval_jet(const FieldExpr& e, std::span<const double> x0, int order);
// Expression with each variable slot replaced by a jet (all in one layout).
Jet eval_jet(const FieldExpr& e, std::span<const Jet> vars);
double eval(const FieldExpr& e, std::span<const double> x);

}  // namespace fman
