#include "fman/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fman/error.hpp"

namespace fman {

namespace {

int sat_add(int a, int b) {
  if (a == INT_MAX || b == INT_MAX) return INT_MAX;
  return a + b;
}

bool is_zero(const Jet& j) {
  for (double v : j.coeffs())
    if (v != 0.0) return false;
  return true;
}

}  // namespace

Laurent::Laurent(Jet c, int power, int cap) : lead_(power), top_(cap), exact_(true), cap_(cap) {
  c_.push_back(std::move(c));
}

Jet Laurent::zero() const {
  const Jet& ref = !c_.empty() ? c_.front() : log_;
  if (ref.empty()) throw std::logic_error("Laurent series without reference jet");
  return Jet::constant(0.0, ref.dim(), ref.order());
}

Jet Laurent::coeff(int k) const {
  if (k < lead_ || k >= lead_ + static_cast<int>(c_.size())) return zero();
  return c_[static_cast<std::size_t>(k - lead_)];
}

void Laurent::normalize() {
  std::size_t drop = 0;
  while (drop + 1 < c_.size() && is_zero(c_[drop])) ++drop;
  if (drop > 0) {
    c_.erase(c_.begin(), c_.begin() + static_cast<std::ptrdiff_t>(drop));
    lead_ += static_cast<int>(drop);
  }
  while (c_.size() > 1 && is_zero(c_.back())) c_.pop_back();
  if (exact_) top_ = cap_;
}

bool Laurent::is_power_zero_monomial() const {
  return exact_ && !has_log() && c_.size() == 1 && lead_ == 0;
}

Laurent& Laurent::operator+=(const Laurent& o) {
  Laurent r;
  r.cap_ = std::min(cap_, o.cap_);
  r.exact_ = exact_ && o.exact_;
  r.top_ = std::min({exact_ ? r.cap_ : top_, o.exact_ ? r.cap_ : o.top_, r.cap_});
  r.lead_ = std::min(lead_, o.lead_);
  const int hi = std::min(r.top_, std::max(lead_ + static_cast<int>(c_.size()), o.lead_ + static_cast<int>(o.c_.size())) - 1);
  const Jet z = c_.empty() ? o.zero() : zero();
  for (int k = r.lead_; k <= hi; ++k) {
    Jet s = z;
    if (k >= lead_ && k < lead_ + static_cast<int>(c_.size())) s += c_[k - lead_];
    if (k >= o.lead_ && k < o.lead_ + static_cast<int>(o.c_.size())) s += o.c_[k - o.lead_];
    r.c_.push_back(std::move(s));
  }
  if (r.c_.empty()) r.c_.push_back(z), r.lead_ = std::min(r.lead_, r.top_);
  if (has_log() || o.has_log()) {
    r.log_ = has_log() ? log_ : Jet::constant(0.0, z.dim(), z.order());
    if (o.has_log()) r.log_ += o.log_;
    if (is_zero(r.log_)) r.log_ = Jet();
  }
  r.normalize();
  *this = std::move(r);
  return *this;
}

Laurent Laurent::operator-() const {
  Laurent r = *this;
  for (auto& c : r.c_) c = -c;
  if (has_log()) r.log_ = -log_;
  return r;
}

Laurent& Laurent::operator-=(const Laurent& o) { return *this += -o; }

Laurent operator*(const Laurent& a, const Laurent& b) {
  if (a.has_log() || b.has_log()) {
    if (a.has_log() && b.has_log()) throw DomainError("product of two logarithmic terms at p = infinity");
    const Laurent& lg = a.has_log() ? a : b;
    const Laurent& other = a.has_log() ? b : a;
    if (!other.is_power_zero_monomial())
      throw DomainError("logarithmic term at p = infinity may only enter additively");
    Laurent plain = lg;
    plain.log_ = Jet();
    Laurent r = plain * other;
    r.log_ = lg.log_ * other.c_.front();
    return r;
  }
  Laurent r;
  r.cap_ = std::min(a.cap_, b.cap_);
  r.lead_ = a.lead_ + b.lead_;
  const int ta = a.exact_ ? INT_MAX : sat_add(a.top_, b.lead_);
  const int tb = b.exact_ ? INT_MAX : sat_add(b.top_, a.lead_);
  const int sa = static_cast<int>(a.c_.size()), sb = static_cast<int>(b.c_.size());
  const int last = (a.lead_ + sa - 1) + (b.lead_ + sb - 1);
  r.exact_ = a.exact_ && b.exact_ && last <= r.cap_;
  r.top_ = std::min({ta, tb, r.cap_});
  const int hi = std::min(r.top_, last);
  const Jet z = a.zero();
  for (int k = r.lead_; k <= hi; ++k) {
    Jet s = z;
    for (int i = 0; i < sa; ++i) {
      const int j = k - r.lead_ - i;
      if (j >= 0 && j < sb) s += a.c_[i] * b.c_[j];
    }
    r.c_.push_back(std::move(s));
  }
  if (r.c_.empty()) r.c_.push_back(z), r.lead_ = std::min(r.lead_, r.top_);
  r.normalize();
  return r;
}

Laurent Laurent::reciprocal() const {
  if (has_log()) throw DomainError("reciprocal of a logarithmic term at p = infinity");
  const Jet& c0 = c_.front();
  if (c0.value() == 0.0) throw DomainError("reciprocal of a series with vanishing leading coefficient");
  const int L = lead_;
  Laurent r;
  r.cap_ = cap_;
  r.lead_ = -L;
  const bool monomial = exact_ && c_.size() == 1;
  r.exact_ = monomial;
  const int rel = exact_ ? INT_MAX : top_ - L;  // known relative terms
  r.top_ = std::min(r.cap_, rel == INT_MAX ? INT_MAX : rel - L);
  const int count = monomial ? 1 : r.top_ + L + 1;
  const Jet inv0 = ::fman::reciprocal(c0);
  for (int k = 0; k < count; ++k) {
    if (k == 0) {
      r.c_.push_back(inv0);
      continue;
    }
    Jet s = zero();
    for (int j = 1; j <= k && j < static_cast<int>(c_.size()); ++j) s += c_[j] * r.c_[k - j];
    r.c_.push_back(-(inv0 * s));
  }
  if (r.c_.empty()) r.c_.push_back(zero());
  r.normalize();
  return r;
}

Laurent operator/(const Laurent& a, const Laurent& b) { return a * b.reciprocal(); }

void Laurent::split(Jet& c0, Laurent& s) const {
  c0 = c_.front();
  if (c0.value() == 0.0) throw DomainError("series with vanishing leading coefficient");
  const Jet inv0 = ::fman::reciprocal(c0);
  s = Laurent();
  s.cap_ = cap_;
  s.lead_ = 1;
  s.exact_ = exact_;
  s.top_ = exact_ ? cap_ : std::min(cap_, top_ - lead_);
  for (std::size_t j = 1; j < c_.size() && static_cast<int>(j) <= s.top_; ++j) s.c_.push_back(c_[j] * inv0);
  if (s.c_.empty()) s.c_.push_back(zero());
  s.normalize();
}

namespace {

// sum_k d[k] s^k by Horner; d holds constant jets.
Laurent power_series(const std::vector<Jet>& d, const Laurent& s, int cap) {
  Laurent acc(d.back(), 0, cap);
  for (int k = static_cast<int>(d.size()) - 2; k >= 0; --k) acc = acc * s + Laurent(d[k], 0, cap);
  return acc;
}

bool all_zero(const Laurent& s) {
  for (int k = s.lead(); k <= s.lead() + 64 && k <= s.cap(); ++k)
    if (!is_zero(s.coeff(k))) return false;
  return true;
}

}  // namespace

Laurent Laurent::ln() const {
  if (has_log()) throw DomainError("logarithm of a logarithmic term at p = infinity");
  Jet c0;
  Laurent s;
  split(c0, s);
  if (c0.value() <= 0.0) throw DomainError("logarithm of a series with non-positive leading coefficient");
  const int terms = s.exact() && all_zero(s) ? 0 : std::min(s.top(), cap_);
  std::vector<Jet> d;
  d.push_back(apply(ElementaryFn::ln, c0));
  for (int k = 1; k <= terms; ++k)
    d.push_back(Jet::constant((k % 2 == 1 ? 1.0 : -1.0) / k, c0.dim(), c0.order()));
  Laurent r = terms == 0 ? Laurent(d[0], 0, cap_) : power_series(d, s, cap_);
  if (lead_ != 0) r.log_ = Jet::constant(static_cast<double>(lead_), c0.dim(), c0.order());
  return r;
}

Laurent Laurent::pow(long num, long den) const {
  if (has_log()) throw DomainError("power of a logarithmic term at p = infinity");
  if ((static_cast<long>(lead_) * num) % den != 0) throw DomainError("fractional power of w at p = infinity");
  const int shift = static_cast<int>(static_cast<long>(lead_) * num / den);
  Jet c0;
  Laurent s;
  split(c0, s);
  const double e = static_cast<double>(num) / static_cast<double>(den);
  const bool mono = s.exact() && all_zero(s);
  const int terms = mono ? 0 : std::min(s.top(), cap_);
  std::vector<Jet> d;
  double binom = 1.0;
  for (int k = 0; k <= terms; ++k) {
    d.push_back(Jet::constant(binom, c0.dim(), c0.order()));
    binom *= (e - k) / (k + 1);
  }
  Laurent r = terms == 0 ? Laurent(d[0], 0, cap_) : power_series(d, s, cap_);
  return r * Laurent(pow_rational(c0, num, den), shift, cap_);
}

Laurent Laurent::apply_regular(UnaryOp op) const {
  if (has_log()) throw DomainError("elementary function of a logarithmic term at p = infinity");
  for (int k = lead_; k < 0; ++k)
    if (!is_zero(coeff(k))) throw DomainError("elementary function of a series with a pole at p = infinity");
  const Jet a0 = coeff(0);
  Laurent t = *this - Laurent(a0, 0, cap_);
  const bool mono = t.exact() && all_zero(t);
  const int terms = mono ? 0 : std::min(t.top(), cap_);
  std::vector<Jet> d;
  const Jet e = op == UnaryOp::exp ? apply(ElementaryFn::exp, a0) : Jet();
  const Jet sn = op != UnaryOp::exp ? apply(ElementaryFn::sin, a0) : Jet();
  const Jet cs = op != UnaryOp::exp ? apply(ElementaryFn::cos, a0) : Jet();
  double fact = 1.0;
  for (int k = 0; k <= terms; ++k) {
    if (k > 0) fact *= k;
    Jet der;
    if (op == UnaryOp::exp) der = e;
    else {
      const int phase = (k + (op == UnaryOp::cos ? 1 : 0)) % 4;
      der = phase == 0 ? sn : phase == 1 ? cs : phase == 2 ? -sn : -cs;
    }
    d.push_back(der / fact);
  }
  if (terms == 0) return Laurent(d[0], 0, cap_);
  Laurent s = t;
  return power_series(d, s, cap_);
}

Laurent apply_unary(UnaryOp op, const Laurent& x) {
  switch (op) {
    case UnaryOp::neg: return -x;
    case UnaryOp::ln: return x.ln();
    case UnaryOp::sqrt: return x.pow(1, 2);
    default: return x.apply_regular(op);
  }
}

Laurent apply_power(const Laurent& x, Rational e) { return x.pow(e.num, e.den); }

}  // namespace fman
