#include "fman/jet.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>

#include "fman/error.hpp"

namespace fman {

namespace {

std::uint64_t encode(std::span<const int> alpha, int base) {
  std::uint64_t key = 0;
  for (int a : alpha) key = key * static_cast<std::uint64_t>(base) + static_cast<std::uint64_t>(a);
  return key;
}

// Multi-indices of exactly degree d in dim variables, lex descending.
void append_degree(int dim, int d, std::vector<int>& scratch, int pos, std::vector<std::vector<int>>& out) {
  if (pos == dim - 1) {
    scratch[pos] = d;
    out.push_back(scratch);
    return;
  }
  for (int a = d; a >= 0; --a) {
    scratch[pos] = a;
    append_degree(dim, d - a, scratch, pos + 1, out);
  }
}

struct LayoutRegistry {
  std::mutex mutex;
  std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> layouts;
};

LayoutRegistry& registry() {
  static LayoutRegistry r;
  return r;
}

}  // namespace

JetLayout::JetLayout(int dim, int order) : dim_(dim), order_(order) {
  if (dim < 1 || dim > 16) throw std::invalid_argument("jet dimension out of range");
  if (order < 0 || order > 40) throw std::invalid_argument("jet order out of range");

  std::vector<std::vector<int>> all;
  std::vector<int> scratch(dim, 0);
  for (int d = 0; d <= order; ++d) {
    degree_start_.push_back(all.size());
    append_degree(dim, d, scratch, 0, all);
  }
  degree_start_.push_back(all.size());

  const std::size_t n = all.size();
  indices_.resize(n * dim);
  degree_.resize(n);
  factorial_.resize(n);
  std::unordered_map<std::uint64_t, std::size_t> lookup;
  lookup.reserve(n * 2);
  for (std::size_t r = 0; r < n; ++r) {
    int deg = 0;
    double fact = 1.0;
    for (int i = 0; i < dim; ++i) {
      indices_[r * dim + i] = static_cast<std::uint8_t>(all[r][i]);
      deg += all[r][i];
      for (int k = 2; k <= all[r][i]; ++k) fact *= k;
    }
    degree_[r] = deg;
    factorial_[r] = fact;
    lookup.emplace(encode(all[r], order + 1), r);
  }

  raise_.assign(n * dim, -1);
  lower_.assign(n * dim, -1);
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<int> alpha = all[r];
    for (int i = 0; i < dim; ++i) {
      if (degree_[r] < order) {
        ++alpha[i];
        raise_[r * dim + i] = static_cast<std::ptrdiff_t>(lookup.at(encode(alpha, order + 1)));
        --alpha[i];
      }
      if (alpha[i] > 0) {
        --alpha[i];
        lower_[r * dim + i] = static_cast<std::ptrdiff_t>(lookup.at(encode(alpha, order + 1)));
        ++alpha[i];
      }
    }
  }

  // Product table: every (a, b) with deg a + deg b <= order.
  std::vector<int> sum(dim);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < degree_start_[order - degree_[a] + 1]; ++b) {
      for (int i = 0; i < dim; ++i) sum[i] = all[a][i] + all[b][i];
      products_.push_back({static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b),
                           static_cast<std::uint32_t>(lookup.at(encode(sum, order + 1)))});
    }
  }
}

std::shared_ptr<const JetLayout> JetLayout::get(int dim, int order) {
  auto& reg = registry();
  std::lock_guard<std::mutex> lock(reg.mutex);
  auto key = std::make_pair(dim, order);
  auto it = reg.layouts.find(key);
  if (it != reg.layouts.end()) return it->second;
  std::shared_ptr<const JetLayout> layout(new JetLayout(dim, order));
  reg.layouts.emplace(key, layout);
  return layout;
}

std::size_t JetLayout::count_upto(int d) const {
  if (d < 0) return 0;
  if (d > order_) d = order_;
  return degree_start_[d + 1];
}

std::ptrdiff_t JetLayout::rank_of(std::span<const int> alpha) const {
  if (static_cast<int>(alpha.size()) != dim_) throw std::invalid_argument("multi-index dimension mismatch");
  // Walk from the constant monomial by raising; cheap for the small dims used.
  std::size_t r = 0;
  for (int i = 0; i < dim_; ++i) {
    if (alpha[i] < 0) throw std::invalid_argument("negative multi-index entry");
    for (int k = 0; k < alpha[i]; ++k) {
      auto next = raise(r, i);
      if (next < 0) return -1;
      r = static_cast<std::size_t>(next);
    }
  }
  return static_cast<std::ptrdiff_t>(r);
}

Jet::Jet(std::shared_ptr<const JetLayout> layout, std::vector<double> coeffs)
    : layout_(std::move(layout)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != layout_->size()) throw std::invalid_argument("jet coefficient count mismatch");
}

Jet Jet::constant(double value, int dim, int order) {
  auto layout = JetLayout::get(dim, order);
  std::vector<double> c(layout->size(), 0.0);
  c[0] = value;
  return Jet(std::move(layout), std::move(c));
}

Jet Jet::variable(int i, std::span<const double> x0, int order) {
  const int dim = static_cast<int>(x0.size());
  if (i < 0 || i >= dim) throw std::out_of_range("jet variable index " + std::to_string(i) + " out of range");
  Jet j = constant(x0[i], dim, order);
  if (order >= 1) j.coeffs_[static_cast<std::size_t>(j.layout_->raise(0, i))] = 1.0;
  return j;
}

double Jet::coeff(std::span<const int> alpha) const {
  auto r = layout_->rank_of(alpha);
  if (r < 0) throw std::out_of_range("multi-index exceeds jet order");
  return coeffs_[static_cast<std::size_t>(r)];
}

double Jet::partial(std::span<const int> alpha) const {
  auto r = layout_->rank_of(alpha);
  if (r < 0) throw std::out_of_range("multi-index exceeds jet order");
  return coeffs_[static_cast<std::size_t>(r)] * layout_->factorial(static_cast<std::size_t>(r));
}

double Jet::d(int var) const {
  auto r = layout_->raise(0, var);
  if (r < 0) throw std::out_of_range("first derivative needs order >= 1");
  return coeffs_[static_cast<std::size_t>(r)];
}

double Jet::dd(int a, int b) const {
  auto ra = layout_->raise(0, a);
  if (ra < 0) throw std::out_of_range("second derivative needs order >= 2");
  auto rab = layout_->raise(static_cast<std::size_t>(ra), b);
  if (rab < 0) throw std::out_of_range("second derivative needs order >= 2");
  return coeffs_[static_cast<std::size_t>(rab)] * layout_->factorial(static_cast<std::size_t>(rab));
}

Jet Jet::derivative(int var) const {
  if (order() < 1) throw std::out_of_range("cannot differentiate an order-0 jet");
  if (var < 0 || var >= dim()) throw std::out_of_range("derivative variable out of range");
  auto layout = JetLayout::get(dim(), order() - 1);
  std::vector<double> c(layout->size());
  for (std::size_t r = 0; r < layout->size(); ++r) {
    auto up = layout_->raise(r, var);
    const double a = layout_->index(static_cast<std::size_t>(up))[var];
    c[r] = coeffs_[static_cast<std::size_t>(up)] * a;
  }
  return Jet(std::move(layout), std::move(c));
}

Jet Jet::truncated(int new_order) const {
  if (new_order >= order()) return *this;
  auto layout = JetLayout::get(dim(), new_order);
  std::vector<double> c(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(layout->size()));
  return Jet(std::move(layout), std::move(c));
}

Jet Jet::embedded(int new_dim, std::span<const int> var_map) const {
  if (static_cast<int>(var_map.size()) != dim()) throw std::invalid_argument("embedding map size mismatch");
  auto layout = JetLayout::get(new_dim, order());
  std::vector<double> c(layout->size(), 0.0);
  std::vector<int> alpha(new_dim);
  for (std::size_t r = 0; r < coeffs_.size(); ++r) {
    std::fill(alpha.begin(), alpha.end(), 0);
    auto idx = layout_->index(r);
    for (int i = 0; i < dim(); ++i) alpha[var_map[i]] += idx[i];
    c[static_cast<std::size_t>(layout->rank_of(alpha))] = coeffs_[r];
  }
  return Jet(std::move(layout), std::move(c));
}

namespace {

void require_same_dim(const Jet& a, const Jet& b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("empty jet in arithmetic");
  if (a.dim() != b.dim()) throw std::invalid_argument("jet dimension mismatch");
}

}  // namespace

Jet& Jet::operator+=(const Jet& other) {
  require_same_dim(*this, other);
  if (other.order() < order()) *this = truncated(other.order());
  for (std::size_t r = 0; r < coeffs_.size(); ++r) coeffs_[r] += other.coeffs_[r];
  return *this;
}

Jet& Jet::operator-=(const Jet& other) {
  require_same_dim(*this, other);
  if (other.order() < order()) *this = truncated(other.order());
  for (std::size_t r = 0; r < coeffs_.size(); ++r) coeffs_[r] -= other.coeffs_[r];
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  require_same_dim(a, b);
  const Jet& lo = a.order() <= b.order() ? a : b;
  const auto& layout = lo.layout_;
  std::vector<double> c(layout->size(), 0.0);
  const double* x = a.coeffs_.data();
  const double* y = b.coeffs_.data();
  for (const auto& t : layout->product_terms()) c[t.out] += x[t.lhs] * y[t.rhs];
  return Jet(layout, std::move(c));
}

Jet& Jet::operator*=(const Jet& other) { return *this = *this * other; }

Jet& Jet::operator/=(const Jet& other) { return *this = *this * reciprocal(other); }

Jet& Jet::operator+=(double s) {
  coeffs_[0] += s;
  return *this;
}

Jet& Jet::operator-=(double s) {
  coeffs_[0] -= s;
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  return *this;
}

Jet& Jet::operator/=(double s) {
  if (s == 0.0) throw DomainError("division by zero");
  for (auto& c : coeffs_) c /= s;
  return *this;
}

Jet operator/(double s, const Jet& a) { return reciprocal(a) * s; }

Jet Jet::operator-() const {
  Jet r = *this;
  for (auto& c : r.coeffs_) c = -c;
  return r;
}

Jet compose_univariate(std::span<const double> derivatives, const Jet& a) {
  const int order = a.order();
  if (static_cast<int>(derivatives.size()) < order + 1) throw std::invalid_argument("not enough derivatives");
  Jet h = a;
  h.coeffs()[0] = 0.0;
  // Horner in h: sum_k d_k/k! h^k
  double inv_fact = 1.0;
  std::vector<double> scaled(order + 1);
  for (int k = 0; k <= order; ++k) {
    if (k > 0) inv_fact /= k;
    scaled[k] = derivatives[k] * inv_fact;
  }
  Jet r = Jet::constant(scaled[order], a.dim(), order);
  for (int k = order - 1; k >= 0; --k) {
    r = r * h;
    r += scaled[k];
  }
  return r;
}

Jet apply(ElementaryFn f, const Jet& a) {
  const int order = a.order();
  const double x = a.value();
  std::vector<double> d(order + 1);
  switch (f) {
    case ElementaryFn::exp: {
      const double e = std::exp(x);
      std::fill(d.begin(), d.end(), e);
      break;
    }
    case ElementaryFn::ln: {
      if (!(x > 0.0)) throw DomainError("ln of non-positive value " + std::to_string(x));
      d[0] = std::log(x);
      double fact = 1.0;  // (k-1)!
      for (int k = 1; k <= order; ++k) {
        if (k > 1) fact *= (k - 1);
        d[k] = ((k % 2 == 1) ? 1.0 : -1.0) * fact / std::pow(x, k);
      }
      break;
    }
    case ElementaryFn::sqrt:
      if (!(x > 0.0)) throw DomainError("sqrt of non-positive value " + std::to_string(x));
      return pow_rational(a, 1, 2);
    case ElementaryFn::sin:
      for (int k = 0; k <= order; ++k) d[k] = std::sin(x + k * std::numbers::pi / 2);
      break;
    case ElementaryFn::cos:
      for (int k = 0; k <= order; ++k) d[k] = std::cos(x + k * std::numbers::pi / 2);
      break;
  }
  return compose_univariate(d, a);
}

Jet reciprocal(const Jet& a) {
  const double x = a.value();
  if (x == 0.0) throw DomainError("division by a jet with zero value");
  std::vector<double> d(a.order() + 1);
  double p = 1.0 / x;
  double fact = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    if (k > 0) fact *= k;
    d[k] = ((k % 2 == 0) ? 1.0 : -1.0) * fact * p;
    p /= x;
  }
  return compose_univariate(d, a);
}

double pow_rational(double x, long num, long den) {
  if (den <= 0) throw std::invalid_argument("rational exponent needs positive denominator");
  if (den == 1) {
    if (x == 0.0 && num < 0) throw DomainError("zero raised to a negative power");
    double r = 1.0;
    double b = num < 0 ? 1.0 / x : x;
    for (long k = 0; k < std::labs(num); ++k) r *= b;
    return r;
  }
  const double e = static_cast<double>(num) / static_cast<double>(den);
  if (x > 0.0) return std::pow(x, e);
  if (x == 0.0) {
    if (num > 0) return 0.0;
    throw DomainError("zero raised to a non-positive fractional power");
  }
  if (den % 2 == 0) throw DomainError("even root of negative value " + std::to_string(x));
  const double mag = std::pow(-x, e);
  return (num % 2 == 0) ? mag : -mag;
}

Jet pow_rational(const Jet& a, long num, long den) {
  if (den == 1 && num >= 0) {
    Jet r = Jet::constant(1.0, a.dim(), a.order());
    Jet b = a;
    long e = num;
    while (e > 0) {
      if (e & 1) r = r * b;
      e >>= 1;
      if (e) b = b * b;
    }
    return r;
  }
  if (den == 1) return reciprocal(pow_rational(a, -num, 1));
  const double x = a.value();
  if (x == 0.0) throw DomainError("fractional power of a jet with zero value");
  // d_k = r (r-1) ... (r-k+1) x^(r-k), r = num/den, x^(r-k) = x^((num - k den)/den)
  std::vector<double> d(a.order() + 1);
  const double r = static_cast<double>(num) / static_cast<double>(den);
  double falling = 1.0;
  for (int k = 0; k <= a.order(); ++k) {
    d[k] = falling * pow_rational(x, num - k * den, den);
    falling *= (r - k);
  }
  return compose_univariate(d, a);
}

Jet compose(const Jet& outer, std::span<const double> center, std::span<const Jet> inner) {
  const int m = outer.dim();
  if (static_cast<int>(inner.size()) != m || static_cast<int>(center.size()) != m)
    throw std::invalid_argument("composition arity mismatch");
  const Jet& ref = inner[0];
  for (const auto& j : inner)
    if (j.dim() != ref.dim()) throw std::invalid_argument("inner jets must share a dimension");
  int out_order = ref.order();
  for (const auto& j : inner) out_order = std::min(out_order, j.order());

  std::vector<Jet> h;
  h.reserve(m);
  for (int i = 0; i < m; ++i) {
    Jet t = inner[i].truncated(out_order);
    t -= center[i];
    h.push_back(std::move(t));
  }
  const auto& layout = outer.layout();
  // monomial[r] = prod h_i^alpha_i built from a lower monomial
  bool centered = true;
  for (const auto& t : h) centered = centered && t.value() == 0.0;
  // With centered inner jets every monomial above the output order vanishes.
  const std::size_t count = centered ? layout.count_upto(out_order) : layout.size();
  std::vector<Jet> monomial(count);
  monomial[0] = Jet::constant(1.0, ref.dim(), out_order);
  Jet result = monomial[0] * outer.coeffs()[0];
  for (std::size_t r = 1; r < count; ++r) {
    auto idx = layout.index(r);
    int var = 0;
    while (idx[var] == 0) ++var;
    monomial[r] = monomial[static_cast<std::size_t>(layout.lower(r, var))] * h[var];
    const double c = outer.coeffs()[r];
    if (c != 0.0) {
      auto mc = monomial[r].coeffs();
      auto rc = result.coeffs();
      for (std::size_t k = 0; k < rc.size(); ++k) rc[k] += c * mc[k];
    }
  }
  return result;
}

double evaluate_polynomial(const Jet& jet, std::span<const double> center, std::span<const double> x) {
  const auto& layout = jet.layout();
  const int m = jet.dim();
  if (static_cast<int>(x.size()) != m || static_cast<int>(center.size()) != m)
    throw std::invalid_argument("polynomial evaluation arity mismatch");
  std::vector<double> monomial(layout.size());
  monomial[0] = 1.0;
  double sum = jet.coeffs()[0];
  for (std::size_t r = 1; r < layout.size(); ++r) {
    auto idx = layout.index(r);
    int var = 0;
    while (idx[var] == 0) ++var;
    monomial[r] = monomial[static_cast<std::size_t>(layout.lower(r, var))] * (x[var] - center[var]);
    sum += jet.coeffs()[r] * monomial[r];
  }
  return sum;
}

}  // namespace fman
