#include "fman/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <numeric>

namespace fman {

namespace {

struct Token {
  enum class Kind { number, ident, op, lparen, rparen, end };
  Kind kind;
  std::string text;
  double number = 0.0;
  int line = 1;
  int column = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_space();
    Token t{Token::Kind::end, "", 0.0, line_, column_};
    if (pos_ >= src_.size()) return t;
    const char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number(t);
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        advance();
      t.kind = Token::Kind::ident;
      t.text = std::string(src_.substr(start, pos_ - start));
      return t;
    }
    advance();
    t.text = std::string(1, c);
    switch (c) {
      case '+': case '-': case '*': case '/': case '^':
        t.kind = Token::Kind::op;
        return t;
      case '(':
        t.kind = Token::Kind::lparen;
        return t;
      case ')':
        t.kind = Token::Kind::rparen;
        return t;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", t.line, t.column);
    }
  }

 private:
  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) advance();
  }

  Token number(Token t) {
    std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) advance();
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      advance();
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_;
      int save_col = column_;
      advance();
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) advance();
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        digits();
      } else {
        pos_ = save;
        column_ = save_col;
      }
    }
    t.kind = Token::Kind::number;
    t.text = std::string(src_.substr(start, pos_ - start));
    auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
    if (ec != std::errc() || ptr != t.text.data() + t.text.size())
      throw ParseError("malformed number '" + t.text + "'", t.line, t.column);
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_constant(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::constant;
  n->value = v;
  return n;
}

NodePtr make_unary(UnaryOp op, NodePtr arg) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::unary;
  n->op1 = op;
  n->lhs = std::move(arg);
  return n;
}

NodePtr make_binary(char op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::binary;
  n->op2 = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

bool has_variables(const ExprNode& n) {
  if (n.kind == ExprNode::Kind::variable) return true;
  if (n.lhs && has_variables(*n.lhs)) return true;
  if (n.rhs && has_variables(*n.rhs)) return true;
  return false;
}

// Best rational approximation with bounded denominator; exact for the
// exponents people write (integers, halves, thirds, ...).
bool to_rational(double x, Rational& out) {
  if (!std::isfinite(x)) return false;
  for (long den = 1; den <= 1000; ++den) {
    const double num = std::round(x * static_cast<double>(den));
    if (std::abs(num / static_cast<double>(den) - x) <= 1e-12 * std::max(1.0, std::abs(x))) {
      long g = std::gcd(static_cast<long>(std::abs(num)), den);
      if (g == 0) g = 1;
      out.num = static_cast<long>(num) / g;
      out.den = den / g;
      return true;
    }
  }
  return false;
}

class Parser {
 public:
  Parser(std::string_view src, const std::vector<std::string>& chart, bool allow_p, const Parameters& params)
      : lex_(src), chart_(chart), allow_p_(allow_p), params_(params) {
    cur_ = lex_.next();
  }

  NodePtr parse_all() {
    if (cur_.kind == Token::Kind::end) throw ParseError("empty expression", cur_.line, cur_.column);
    NodePtr n = sum();
    if (cur_.kind != Token::Kind::end)
      throw ParseError("unexpected token '" + cur_.text + "'", cur_.line, cur_.column);
    return n;
  }

 private:
  void take() { cur_ = lex_.next(); }

  bool at_op(char c) const { return cur_.kind == Token::Kind::op && cur_.text[0] == c; }

  NodePtr sum() {
    NodePtr lhs = product();
    while (at_op('+') || at_op('-')) {
      char op = cur_.text[0];
      take();
      lhs = make_binary(op, lhs, product());
    }
    return lhs;
  }

  NodePtr product() {
    NodePtr lhs = unary();
    while (at_op('*') || at_op('/')) {
      char op = cur_.text[0];
      take();
      lhs = make_binary(op, lhs, unary());
    }
    return lhs;
  }

  NodePtr unary() {
    if (at_op('-')) {
      take();
      return make_unary(UnaryOp::neg, unary());
    }
    if (at_op('+')) {
      take();
      return unary();
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (!at_op('^')) return base;
    Token caret = cur_;
    take();
    NodePtr e = unary();
    if (has_variables(*e))
      throw ParseError("exponent must be a rational constant", caret.line, caret.column);
    const double ev = evaluate<double>(*e, std::span<const double>{}, [](double v) { return v; });
    Rational r;
    if (!to_rational(ev, r)) throw ParseError("exponent is not a rational constant", caret.line, caret.column);
    auto n = std::make_shared<ExprNode>();
    n->kind = ExprNode::Kind::power;
    n->lhs = base;
    n->exponent = r;
    return n;
  }

  NodePtr atom() {
    Token t = cur_;
    switch (t.kind) {
      case Token::Kind::number:
        take();
        return make_constant(t.number);
      case Token::Kind::lparen: {
        take();
        NodePtr inner = sum();
        if (cur_.kind != Token::Kind::rparen) throw ParseError("expected ')'", cur_.line, cur_.column);
        take();
        return inner;
      }
      case Token::Kind::ident:
        take();
        return identifier(t);
      case Token::Kind::end:
        throw ParseError("unexpected end of expression", t.line, t.column);
      default:
        throw ParseError("unexpected token '" + t.text + "'", t.line, t.column);
    }
  }

  NodePtr identifier(const Token& t) {
    static const std::pair<const char*, UnaryOp> functions[] = {
        {"exp", UnaryOp::exp}, {"ln", UnaryOp::ln}, {"sqrt", UnaryOp::sqrt},
        {"sin", UnaryOp::sin}, {"cos", UnaryOp::cos}};
    if (cur_.kind == Token::Kind::lparen) {
      for (const auto& [name, op] : functions) {
        if (t.text == name) {
          take();
          NodePtr arg = sum();
          if (cur_.kind != Token::Kind::rparen) throw ParseError("expected ')'", cur_.line, cur_.column);
          take();
          return make_unary(op, arg);
        }
      }
      throw UnknownIdentifier(t.text, t.line, t.column);
    }
    auto n = std::make_shared<ExprNode>();
    n->name = t.text;
    for (std::size_t i = 0; i < chart_.size(); ++i) {
      if (chart_[i] == t.text) {
        n->kind = ExprNode::Kind::variable;
        n->var = static_cast<int>(i);
        return n;
      }
    }
    if (allow_p_ && t.text == "p") {
      n->kind = ExprNode::Kind::variable;
      n->var = static_cast<int>(chart_.size());
      return n;
    }
    if (auto it = params_.find(t.text); it != params_.end()) {
      n->kind = ExprNode::Kind::parameter;
      n->value = it->second;
      return n;
    }
    throw UnknownIdentifier(t.text, t.line, t.column);
  }

  Lexer lex_;
  Token cur_;
  const std::vector<std::string>& chart_;
  bool allow_p_;
  const Parameters& params_;
};

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

const char* unary_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::exp: return "exp";
    case UnaryOp::ln: return "ln";
    case UnaryOp::sqrt: return "sqrt";
    case UnaryOp::sin: return "sin";
    case UnaryOp::cos: return "cos";
    case UnaryOp::neg: return "-";
  }
  return "?";
}

bool uses_var(const ExprNode& n, int var) {
  if (n.kind == ExprNode::Kind::variable && n.var == var) return true;
  if (n.lhs && uses_var(*n.lhs, var)) return true;
  if (n.rhs && uses_var(*n.rhs, var)) return true;
  return false;
}

}  // namespace

bool same_tree(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case ExprNode::Kind::constant:
      return a.value == b.value;
    case ExprNode::Kind::variable:
      return a.var == b.var && a.name == b.name;
    case ExprNode::Kind::parameter:
      return a.name == b.name && a.value == b.value;
    case ExprNode::Kind::unary:
      return a.op1 == b.op1 && same_tree(*a.lhs, *b.lhs);
    case ExprNode::Kind::power:
      return a.exponent == b.exponent && same_tree(*a.lhs, *b.lhs);
    case ExprNode::Kind::binary:
      return a.op2 == b.op2 && same_tree(*a.lhs, *b.lhs) && same_tree(*a.rhs, *b.rhs);
  }
  return false;
}

std::string to_string(const ExprNode& n) {
  switch (n.kind) {
    case ExprNode::Kind::constant: {
      std::string s = format_number(n.value);
      return n.value < 0 ? "(" + s + ")" : s;
    }
    case ExprNode::Kind::variable:
    case ExprNode::Kind::parameter:
      return n.name;
    case ExprNode::Kind::unary:
      if (n.op1 == UnaryOp::neg) return "(-" + to_string(*n.lhs) + ")";
      return std::string(unary_name(n.op1)) + "(" + to_string(*n.lhs) + ")";
    case ExprNode::Kind::power: {
      std::string e = n.exponent.den == 1 ? std::to_string(n.exponent.num)
                                          : std::to_string(n.exponent.num) + "/" + std::to_string(n.exponent.den);
      return "(" + to_string(*n.lhs) + "^(" + e + "))";
    }
    case ExprNode::Kind::binary:
      return "(" + to_string(*n.lhs) + " " + n.op2 + " " + to_string(*n.rhs) + ")";
  }
  return "";
}

FieldExpr::FieldExpr(std::shared_ptr<const ExprNode> root, std::vector<std::string> chart, bool allow_p)
    : root_(std::move(root)), chart_(std::move(chart)), allow_p_(allow_p) {}

FieldExpr FieldExpr::constant(double value, std::vector<std::string> chart) {
  return FieldExpr(make_constant(value), std::move(chart), false);
}

bool FieldExpr::is_constant() const {
  for (int v = 0; v < arity(); ++v)
    if (uses_var(*root_, v)) return false;
  return true;
}

bool FieldExpr::uses_p() const { return allow_p_ && uses_var(*root_, static_cast<int>(chart_.size())); }

bool FieldExpr::is_zero_constant() const {
  return root_->kind == ExprNode::Kind::constant && root_->value == 0.0;
}

std::string FieldExpr::to_string() const { return fman::to_string(*root_); }

FieldExpr parse(std::string_view src, std::vector<std::string> chart, bool allow_p, const Parameters& params) {
  Parser parser(src, chart, allow_p, params);
  NodePtr root = parser.parse_all();
  return FieldExpr(std::move(root), std::move(chart), allow_p);
}

double apply_unary(UnaryOp op, double x) {
  switch (op) {
    case UnaryOp::neg: return -x;
    case UnaryOp::exp: return std::exp(x);
    case UnaryOp::ln:
      if (!(x > 0.0)) throw DomainError("ln of non-positive value " + format_number(x));
      return std::log(x);
    case UnaryOp::sqrt:
      if (x < 0.0) throw DomainError("sqrt of negative value " + format_number(x));
      return std::sqrt(x);
    case UnaryOp::sin: return std::sin(x);
    case UnaryOp::cos: return std::cos(x);
  }
  return x;
}

double apply_power(double x, Rational e) { return pow_rational(x, e.num, e.den); }

Jet apply_unary(UnaryOp op, const Jet& x) {
  switch (op) {
    case UnaryOp::neg: return -x;
    case UnaryOp::exp: return apply(ElementaryFn::exp, x);
    case UnaryOp::ln: return apply(ElementaryFn::ln, x);
    case UnaryOp::sqrt: return apply(ElementaryFn::sqrt, x);
    case UnaryOp::sin: return apply(ElementaryFn::sin, x);
    case UnaryOp::cos: return apply(ElementaryFn::cos, x);
  }
  return x;
}

Jet apply_power(const Jet& x, Rational e) { return pow_rational(x, e.num, e.den); }

Jet eval_jet(const FieldExpr& e, std::span<const Jet> vars) {
  if (static_cast<int>(vars.size()) != e.arity()) throw std::invalid_argument("variable count mismatch");
  const int dim = vars[0].dim();
  const int order = vars[0].order();
  return evaluate<Jet>(e.root(), vars, [&](double v) { return Jet::constant(v, dim, order); });
}

Jet eval_jet(const FieldExpr& e, std::span<const double> x0, int order) {
  if (static_cast<int>(x0.size()) != e.arity()) throw std::invalid_argument("point dimension mismatch");
  std::vector<Jet> vars;
  vars.reserve(x0.size());
  for (std::size_t i = 0; i < x0.size(); ++i) vars.push_back(Jet::variable(static_cast<int>(i), x0, order));
  try {
    return eval_jet(e, vars);
  } catch (const DomainError& err) {
    throw DomainError(err.what(), err.subexpression(), std::vector<double>(x0.begin(), x0.end()));
  }
}

double eval(const FieldExpr& e, std::span<const double> x) {
  if (static_cast<int>(x.size()) != e.arity()) throw std::invalid_argument("point dimension mismatch");
  try {
    return evaluate<double>(e.root(), x, [](double v) { return v; });
  } catch (const DomainError& err) {
    throw DomainError(err.what(), err.subexpression(), std::vector<double>(x.begin(), x.end()));
  }
}

}  // namespace fman
