#pragma once

#include <climits>
#include <vector>

#include "fman/expr.hpp"
#include "fman/jet.hpp"

namespace fman {

// Truncated Laurent series in w with jet coefficients, plus an optional
// multiple of ln w. Coefficients of powers lead()..top() are exact; when
// exact() is set all powers beyond the stored ones vanish.
class Laurent {
 public:
  Laurent() = default;
  // c * w^power, exact.
  Laurent(Jet c, int power, int cap);

  int lead() const { return lead_; }
  int top() const { return top_; }
  bool exact() const { return exact_; }
  int cap() const { return cap_; }
  bool has_log() const { return !log_.empty(); }
  const Jet& log_coeff() const { return log_; }
  // Coefficient of w^k; zero jet-compatible value when k is below lead.
  Jet coeff(int k) const;

  Laurent& operator+=(const Laurent& o);
  Laurent& operator-=(const Laurent& o);
  friend Laurent operator+(Laurent a, const Laurent& b) { return a += b; }
  friend Laurent operator-(Laurent a, const Laurent& b) { return a -= b; }
  friend Laurent operator*(const Laurent& a, const Laurent& b);
  friend Laurent operator/(const Laurent& a, const Laurent& b);
  Laurent operator-() const;

  Laurent reciprocal() const;
  Laurent ln() const;
  Laurent pow(long num, long den) const;
  // exp, sin, cos of a series without negative powers.
  Laurent apply_regular(UnaryOp op) const;

 private:
  Jet zero() const;
  void normalize();
  bool is_power_zero_monomial() const;
  // Split as w^lead * c0 * (1 + s) with s starting at w^1.
  void split(Jet& c0, Laurent& s) const;

  int lead_ = 0;
  int top_ = 0;
  bool exact_ = true;
  int cap_ = 0;
  std::vector<Jet> c_;  // powers lead_ .. lead_ + size - 1
  Jet log_;
};

Laurent apply_unary(UnaryOp op, const Laurent& x);
Laurent apply_power(const Laurent& x, Rational e);

}  // namespace fman
