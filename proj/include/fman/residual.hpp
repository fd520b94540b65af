#pragma once

#include <algorithm>
#include <cmath>

namespace fman {

// Pass iff |residual| <= abs + rel * scale.
struct Tolerance {
  double abs = 1e-9;
  double rel = 1e-9;

  double bound(double scale) const { return abs + rel * scale; }
};

// Running sum of the summands of one identity component. `scale` is the
// largest summand magnitude; nested quantities pass their own magnitude.
class TermSum {
 public:
  TermSum& operator+=(double t) { return add(t, std::abs(t)); }
  TermSum& operator-=(double t) { return add(-t, std::abs(t)); }
  TermSum& add(double t, double magnitude) {
    sum_ += t;
    scale_ = std::max(scale_, magnitude);
    return *this;
  }

  double value() const { return sum_; }
  double scale() const { return scale_; }

 private:
  double sum_ = 0.0;
  double scale_ = 0.0;
};

// Worst component of an identity: max |sum| and max summand magnitude.
struct Residual {
  double value = 0.0;
  double scale = 0.0;

  void absorb(const TermSum& s) {
    value = std::max(value, std::abs(s.value()));
    scale = std::max(scale, s.scale());
  }
  void absorb(double v, double s) {
    value = std::max(value, std::abs(v));
    scale = std::max(scale, s);
  }
  void absorb(const Residual& r) {
    value = std::max(value, r.value);
    scale = std::max(scale, r.scale);
  }
  bool within(const Tolerance& tol) const { return value <= tol.bound(scale); }
};

}  // namespace fman
