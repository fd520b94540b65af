#include "fman/algebra.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fman/error.hpp"

namespace fman {

std::vector<double> product(const Values& c, std::span<const double> x, std::span<const double> y) {
  const int n = c.dim();
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out[i] += c(i, j, k) * x[j] * y[k];
  return out;
}

FieldJets product(const JetTensor& c, const FieldJets& x, const FieldJets& y) {
  const int n = c.dim();
  FieldJets out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) {
    Jet s = c(i, 0, 0) * x[0] * y[0];
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (j || k) s += c(i, j, k) * x[j] * y[k];
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<double> bracket(const FieldJets& x, const FieldJets& y) {
  const int n = static_cast<int>(x.size());
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int m = 0; m < n; ++m) out[i] += x[m].value() * y[i].d(m) - y[m].value() * x[i].d(m);
  return out;
}

Residual commutativity_residual(const Values& c) {
  Residual r;
  const int n = c.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        TermSum s;
        s += c(i, j, k);
        s -= c(i, k, j);
        r.absorb(s);
      }
  return r;
}

Residual associativity_residual(const Values& c) {
  Residual r;
  const int n = c.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          TermSum s;
          for (int m = 0; m < n; ++m) {
            s += c(m, j, k) * c(i, m, l);
            s -= c(m, k, l) * c(i, j, m);
          }
          r.absorb(s);
        }
  return r;
}

Values hertling_manin_tensor(const Values& c, const Values& dc, Values* scale) {
  const int n = c.dim();
  Values out(n, 5);
  if (scale) *scale = Values(n, 5);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          for (int m = 0; m < n; ++m) {
            TermSum t;
            for (int s = 0; s < n; ++s) {
              t += dc(k, j, l, s) * c(s, i, m);
              t += dc(s, i, m, j) * c(k, s, l);
              t -= dc(k, i, m, s) * c(s, j, l);
              t -= dc(s, j, l, i) * c(k, s, m);
              t += dc(s, i, m, l) * c(k, s, j);
              t -= dc(s, j, l, m) * c(k, i, s);
            }
            out(k, i, j, l, m) = t.value();
            if (scale) (*scale)(k, i, j, l, m) = t.scale();
          }
  return out;
}

Residual hertling_manin_residual(const Values& c, const Values& dc) {
  Values scale;
  Values hm = hertling_manin_tensor(c, dc, &scale);
  Residual r;
  for (std::size_t q = 0; q < hm.size(); ++q) r.absorb(hm.flat(q), scale.flat(q));
  return r;
}

namespace {

std::vector<double> values(const FieldJets& x) {
  std::vector<double> v;
  v.reserve(x.size());
  for (const auto& j : x) v.push_back(j.value());
  return v;
}

void accumulate(std::vector<double>& acc, const std::vector<double>& v, double sign) {
  for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += sign * v[i];
}

}  // namespace

std::vector<double> hertling_manin_fields(const JetTensor& c, const FieldJets& x, const FieldJets& y,
                                          const FieldJets& z, const FieldJets& w) {
  const Values cv = values_of(c);
  auto circ = [&](const std::vector<double>& a, const FieldJets& b) { return product(cv, a, values(b)); };
  const FieldJets xy = product(c, x, y);
  const FieldJets zw = product(c, z, w);
  std::vector<double> acc(x.size(), 0.0);
  accumulate(acc, bracket(xy, zw), 1.0);
  accumulate(acc, circ(bracket(xy, z), w), -1.0);
  accumulate(acc, circ(bracket(xy, w), z), -1.0);
  accumulate(acc, circ(bracket(y, zw), x), -1.0);
  accumulate(acc, circ(circ(bracket(y, z), w), x), 1.0);
  accumulate(acc, circ(circ(bracket(y, w), z), x), 1.0);
  accumulate(acc, circ(bracket(x, zw), y), -1.0);
  accumulate(acc, circ(circ(bracket(x, z), w), y), 1.0);
  accumulate(acc, circ(circ(bracket(x, w), z), y), 1.0);
  return acc;
}

Residual polarization_residual(const JetTensor& c, const FieldJets& x, const FieldJets& y, const FieldJets& w) {
  const int n = c.dim();
  const std::vector<double> direct = hertling_manin_fields(c, x, y, x, w);
  Values scale;
  const Values hm = hertling_manin_tensor(values_of(c), gradients_of(c), &scale);
  const std::vector<double> xv = values(x), yv = values(y), wv = values(w);
  // The nine-term form at (X, Y, Z, W) is hm(k, i, j, l, m) X^i Z^j W^l Y^m.
  Residual r;
  for (int k = 0; k < n; ++k) {
    double contracted = 0.0;
    double mag = std::abs(direct[k]);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l)
          for (int m = 0; m < n; ++m) {
            const double f = xv[i] * xv[j] * wv[l] * yv[m];
            contracted += hm(k, i, j, l, m) * f;
            mag = std::max(mag, scale(k, i, j, l, m) * std::abs(f));
          }
    r.absorb(direct[k] - contracted, mag);
  }
  return r;
}

Values structure_operator(const Values& c, std::span<const double> z) {
  const int n = c.dim();
  Values v(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) v(i, j) += c(i, j, k) * z[k];
  return v;
}

Values structure_operator_gradient(const Values& c, const Values& dc, const VectorAtPoint& z) {
  const int n = c.dim();
  Values dv(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += dc(i, j, k, m) * z.v(k) + c(i, j, k) * z.dv(k, m);
        dv(i, j, m) = s;
      }
  return dv;
}

Values nijenhuis_tensor(const Values& v, const Values& dv, Values* scale) {
  const int n = v.dim();
  Values out(n, 3);
  if (scale) *scale = Values(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        TermSum s;
        for (int m = 0; m < n; ++m) {
          s += v(m, j) * dv(i, k, m);
          s -= v(m, k) * dv(i, j, m);
          s -= v(i, m) * dv(m, k, j);
          s += v(i, m) * dv(m, j, k);
        }
        out(i, j, k) = s.value();
        if (scale) (*scale)(i, j, k) = s.scale();
      }
  return out;
}

Values haantjes_tensor(const Values& v, const Values& dv, Values* scale) {
  const int n = v.dim();
  Values ns;
  const Values nt = nijenhuis_tensor(v, dv, &ns);
  Values out(n, 3);
  if (scale) *scale = Values(n, 3);
  // H(e_j, e_k) = N(Ve_j, Ve_k) - V N(e_j, Ve_k) - V N(Ve_j, e_k) + V^2 N(e_j, e_k)
  Values v2(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m) v2(i, j) += v(i, m) * v(m, j);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        TermSum s;
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            const double f = v(a, j) * v(b, k);
            s.add(nt(i, a, b) * f, ns(i, a, b) * std::abs(f));
            const double g1 = v(i, a) * v(b, k);
            s.add(-nt(a, j, b) * g1, ns(a, j, b) * std::abs(g1));
            const double g2 = v(i, a) * v(b, j);
            s.add(-nt(a, b, k) * g2, ns(a, b, k) * std::abs(g2));
          }
        for (int a = 0; a < n; ++a) s.add(v2(i, a) * nt(a, j, k), std::abs(v2(i, a)) * ns(a, j, k));
        out(i, j, k) = s.value();
        if (scale) (*scale)(i, j, k) = s.scale();
      }
  return out;
}

namespace {

std::vector<double> contract_pair(const Values& t, std::span<const double> x, std::span<const double> y) {
  const int n = t.dim();
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) out[i] += t(i, j, k) * x[j] * y[k];
  return out;
}

}  // namespace

std::vector<double> nijenhuis(const Values& v, const Values& dv, std::span<const double> x, std::span<const double> y) {
  return contract_pair(nijenhuis_tensor(v, dv), x, y);
}

std::vector<double> haantjes(const Values& v, const Values& dv, std::span<const double> x, std::span<const double> y) {
  return contract_pair(haantjes_tensor(v, dv), x, y);
}

Residual haantjes_residual(const Values& v, const Values& dv) {
  Values scale;
  const Values h = haantjes_tensor(v, dv, &scale);
  Residual r;
  for (std::size_t q = 0; q < h.size(); ++q) r.absorb(h.flat(q), scale.flat(q));
  return r;
}

DiagonalCheck diagonal_structure_check(const Values& c, const Values& dc) {
  const int n = c.dim();
  DiagonalCheck out;
  out.f.resize(n);
  for (int i = 0; i < n; ++i) out.f[i] = c(i, i, i);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (!(i == j && j == k)) out.pattern.absorb(c(i, j, k), 0.0);
  out.dependence_tested = std::all_of(out.f.begin(), out.f.end(), [](double f) { return f != 0.0; });
  if (out.dependence_tested)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (j != i) out.dependence.absorb(dc(i, i, i, j), 0.0);
  return out;
}

std::vector<double> unity_from_diagonal(std::span<const double> f) {
  std::vector<double> e(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == 0.0) throw DomainError("unity undefined: f_" + std::to_string(i + 1) + " vanishes");
    e[i] = 1.0 / f[i];
  }
  return e;
}

FieldJets unity_jets(const JetTensor& c) {
  const int n = c.dim();
  const Jet& ref = c.flat(0);
  JetTensor a = zero_jets(n, 2, ref.dim(), ref.order());
  FieldJets b(n, Jet::constant(0.0, ref.dim(), ref.order()));
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(k, l) += c(i, j, k) * c(i, j, l);
    for (int i = 0; i < n; ++i) b[k] += c(i, i, k);
  }
  const JetTensor ainv = inverse(a);
  FieldJets e(n, Jet::constant(0.0, ref.dim(), ref.order()));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) e[k] += ainv(k, l) * b[l];
  return e;
}

Residual unity_residual(const Values& c, std::span<const double> e) {
  const int n = c.dim();
  Residual r;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      TermSum s;
      for (int k = 0; k < n; ++k) s += c(i, j, k) * e[k];
      s -= (i == j) ? 1.0 : 0.0;
      r.absorb(s);
    }
  return r;
}

namespace {

Eigen::VectorXcd eigenvalues(const Values& v) {
  const int n = v.dim();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = v(i, j);
  Eigen::EigenSolver<Eigen::MatrixXd> es(m, false);
  return es.eigenvalues();
}

}  // namespace

std::vector<double> real_eigenvalues(const Values& v) {
  const Eigen::VectorXcd ev = eigenvalues(v);
  std::vector<double> out;
  double norm = 0.0;
  for (int i = 0; i < ev.size(); ++i) norm = std::max(norm, std::abs(ev[i]));
  for (int i = 0; i < ev.size(); ++i)
    if (std::abs(ev[i].imag()) <= 1e-12 * std::max(1.0, norm)) out.push_back(ev[i].real());
  std::sort(out.begin(), out.end());
  return out;
}

double min_eigen_gap(const Values& v) {
  const std::vector<double> ev = real_eigenvalues(v);
  if (static_cast<int>(ev.size()) != v.dim()) return 0.0;
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < ev.size(); ++i) gap = std::min(gap, ev[i] - ev[i - 1]);
  return gap;
}

}  // namespace fman
