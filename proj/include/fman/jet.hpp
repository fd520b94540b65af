#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace fman {

// Enumeration of all multi-indices of total degree <= order in `dim` variables,
// graded by degree and lexicographically descending inside a degree. Because
// the ordering is graded, the monomials of an order-k layout are a prefix of
// those of any order-k' layout with k' > k and the same dim.
class JetLayout {
 public:
  struct ProductTerm {
    std::uint32_t lhs;
    std::uint32_t rhs;
    std::uint32_t out;
  };

  // Shared, immutable layout. Thread safe.
  static std::shared_ptr<const JetLayout> get(int dim, int order);

  int dim() const { return dim_; }
  int order() const { return order_; }
  std::size_t size() const { return degree_.size(); }

  std::span<const std::uint8_t> index(std::size_t rank) const {
    return {indices_.data() + rank * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
  }
  int degree(std::size_t rank) const { return degree_[rank]; }
  // Number of monomials of degree <= d (so [0, count_upto(d)) are those ranks).
  std::size_t count_upto(int d) const;
  // -1 if the degree exceeds the order.
  std::ptrdiff_t rank_of(std::span<const int> alpha) const;
  // Rank of alpha + e_var, or -1 when that exceeds the order.
  std::ptrdiff_t raise(std::size_t rank, int var) const { return raise_[rank * dim_ + var]; }
  // Rank of alpha - e_var, or -1 when alpha_var == 0.
  std::ptrdiff_t lower(std::size_t rank, int var) const { return lower_[rank * dim_ + var]; }
  // alpha! = prod alpha_i!
  double factorial(std::size_t rank) const { return factorial_[rank]; }
  const std::vector<ProductTerm>& product_terms() const { return products_; }

 private:
  JetLayout(int dim, int order);

  int dim_;
  int order_;
  std::vector<std::uint8_t> indices_;
  std::vector<int> degree_;
  std::vector<std::size_t> degree_start_;
  std::vector<std::ptrdiff_t> raise_;
  std::vector<std::ptrdiff_t> lower_;
  std::vector<double> factorial_;
  std::vector<ProductTerm> products_;
};

enum class ElementaryFn { exp, ln, sqrt, sin, cos };

// Truncated multivariate Taylor expansion at a point. Coefficient of rank r is
// the partial derivative of multi-index alpha(r) divided by alpha!.
// Jets are values; arithmetic between jets of different orders truncates to
// the smaller order.
class Jet {
 public:
  Jet() = default;
  Jet(std::shared_ptr<const JetLayout> layout, std::vector<double> coeffs);

  static Jet constant(double value, int dim, int order);
  // Coordinate function x^i expanded at x0.
  static Jet variable(int i, std::span<const double> x0, int order);

  bool empty() const { return layout_ == nullptr; }
  int dim() const { return layout_->dim(); }
  int order() const { return layout_->order(); }
  const JetLayout& layout() const { return *layout_; }
  const std::shared_ptr<const JetLayout>& layout_ptr() const { return layout_; }

  double value() const { return coeffs_[0]; }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }
  double coeff(std::span<const int> alpha) const;
  // Partial derivative d^alpha at the expansion point.
  double partial(std::span<const int> alpha) const;
  // First derivative along one variable, at the expansion point.
  double d(int var) const;
  // Mixed second derivative.
  double dd(int a, int b) const;

  // Jet of d/dx^var; one order lower.
  Jet derivative(int var) const;
  Jet truncated(int order) const;
  // Same function regarded as a function of `new_dim` variables, where old
  // variable i becomes new variable var_map[i].
  Jet embedded(int new_dim, std::span<const int> var_map) const;

  Jet& operator+=(const Jet& other);
  Jet& operator-=(const Jet& other);
  Jet& operator*=(const Jet& other);
  Jet& operator/=(const Jet& other);
  Jet& operator+=(double s);
  Jet& operator-=(double s);
  Jet& operator*=(double s);
  Jet& operator/=(double s);

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b) { return Jet(a) /= b; }
  friend Jet operator+(Jet a, double s) { return a += s; }
  friend Jet operator+(double s, Jet a) { return a += s; }
  friend Jet operator-(Jet a, double s) { return a -= s; }
  friend Jet operator-(double s, const Jet& a) { return -a + s; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator/(Jet a, double s) { return a /= s; }
  friend Jet operator/(double s, const Jet& a);
  Jet operator-() const;

 private:
  std::shared_ptr<const JetLayout> layout_;
  std::vector<double> coeffs_;
};

// f o a for a univariate function with known derivatives d_k = f^(k)(a.value()).
Jet compose_univariate(std::span<const double> derivatives, const Jet& a);
Jet apply(ElementaryFn f, const Jet& a);
Jet reciprocal(const Jet& a);
// a^(num/den). Integer exponents allow any nonzero base (and zero base for
// nonnegative exponents); odd denominators allow negative bases.
Jet pow_rational(const Jet& a, long num, long den);
double pow_rational(double x, long num, long den);

// Composition outer(inner_0, ..., inner_{m-1}) where outer is a jet expanded
// at `center` in m variables and inner jets share one layout. The outer Taylor
// polynomial is evaluated exactly on (inner - center), so this also re-expands
// a polynomial at a shifted point.
Jet compose(const Jet& outer, std::span<const double> center, std::span<const Jet> inner);

// Plain evaluation of the Taylor polynomial at x.
double evaluate_polynomial(const Jet& jet, std::span<const double> center, std::span<const double> x);

}  // namespace fman
