#include "fman/tensor.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "fman/error.hpp"

namespace fman {

JetTensor zero_jets(int n, int rank, int dim, int order) {
  return JetTensor(n, rank, Jet::constant(0.0, dim, order));
}

Values values_of(const JetTensor& t) {
  Values v(t.dim(), t.rank());
  for (std::size_t k = 0; k < t.size(); ++k) v.flat(k) = t.flat(k).value();
  return v;
}

Values gradients_of(const JetTensor& t) {
  Values v(t.dim(), t.rank() + 1);
  const int n = t.dim();
  for (std::size_t k = 0; k < t.size(); ++k)
    for (int m = 0; m < n; ++m) v.flat(k * n + m) = t.flat(k).d(m);
  return v;
}

Values hessians_of(const JetTensor& t) {
  Values v(t.dim(), t.rank() + 2);
  const int n = t.dim();
  for (std::size_t k = 0; k < t.size(); ++k)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) v.flat((k * n + a) * n + b) = t.flat(k).dd(a, b);
  return v;
}

JetTensor inverse(const JetTensor& m) {
  const int n = m.dim();
  if (m.rank() != 2) throw std::invalid_argument("inverse needs a matrix");
  const Jet& ref = m.flat(0);
  JetTensor a = m;
  JetTensor inv = zero_jets(n, 2, ref.dim(), ref.order());
  for (int i = 0; i < n; ++i) inv(i, i) += 1.0;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col).value()) > std::abs(a(piv, col).value())) piv = r;
    if (a(piv, col).value() == 0.0) throw DomainError("singular matrix");
    if (piv != col) {
      for (int c = 0; c < n; ++c) {
        std::swap(a(piv, c), a(col, c));
        std::swap(inv(piv, c), inv(col, c));
      }
    }
    const Jet pinv = reciprocal(a(col, col));
    for (int c = 0; c < n; ++c) {
      a(col, c) = a(col, c) * pinv;
      inv(col, c) = inv(col, c) * pinv;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const Jet f = a(r, col);
      for (int c = 0; c < n; ++c) {
        a(r, c) -= f * a(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

Values inverse(const Values& m) {
  const int n = m.dim();
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = m(i, j);
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw DomainError("singular matrix");
  Eigen::MatrixXd b = lu.inverse();
  Values out(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = b(i, j);
  return out;
}

}  // namespace fman
