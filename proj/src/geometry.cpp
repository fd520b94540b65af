#include "fman/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "fman/error.hpp"

namespace fman {

PointData point_data(const LocalFrame& frame) {
  PointData pd;
  pd.n = frame.c.dim();
  pd.point = frame.point;
  pd.c = values_of(frame.c);
  pd.dc = gradients_of(frame.c);
  pd.gamma = values_of(frame.connection);
  pd.dgamma = gradients_of(frame.connection);
  pd.riemann = riemann(pd.gamma, pd.dgamma, &pd.riemann_scale);
  if (frame.metric) {
    pd.g = values_of(*frame.metric);
    pd.dg = gradients_of(*frame.metric);
    pd.ginv = inverse(*pd.g);
  }
  return pd;
}

VectorAtPoint vector_at(std::span<const Jet> components) {
  const int n = static_cast<int>(components.size());
  VectorAtPoint x{Values(n, 1), Values(n, 2)};
  for (int i = 0; i < n; ++i) {
    x.v(i) = components[i].value();
    for (int m = 0; m < n; ++m) x.dv(i, m) = components[i].d(m);
  }
  return x;
}

VectorAtPoint constant_vector(std::span<const double> v) {
  const int n = static_cast<int>(v.size());
  VectorAtPoint x{Values(n, 1), Values(n, 2)};
  for (int i = 0; i < n; ++i) x.v(i) = v[i];
  return x;
}

JetTensor christoffel_from_metric(const JetTensor& g) {
  const int n = g.dim();
  const Jet& ref = g.flat(0);
  if (ref.order() < 1) throw std::invalid_argument("metric jets need order >= 1");
  JetTensor ginv = inverse(g);
  JetTensor dg = zero_jets(n, 3, ref.dim(), ref.order() - 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m) dg(i, j, m) = g(i, j).derivative(m);
  JetTensor gamma = zero_jets(n, 3, ref.dim(), ref.order() - 1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Jet s = Jet::constant(0.0, ref.dim(), ref.order() - 1);
        for (int l = 0; l < n; ++l) s += ginv(i, l) * (dg(l, k, j) + dg(l, j, k) - dg(j, k, l));
        gamma(i, j, k) = s * 0.5;
      }
  return gamma;
}

Values christoffel(const Values& g, const Values& dg) {
  const int n = g.dim();
  Values ginv = inverse(g);
  Values gamma(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += ginv(i, l) * (dg(l, k, j) + dg(l, j, k) - dg(j, k, l));
        gamma(i, j, k) = 0.5 * s;
      }
  return gamma;
}

Values riemann(const Values& gamma, const Values& dgamma, Values* scale) {
  const int n = gamma.dim();
  Values r(n, 4);
  if (scale) *scale = Values(n, 4);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m)
        for (int j = 0; j < n; ++j) {
          TermSum s;
          s += dgamma(i, j, l, m);
          s -= dgamma(i, m, l, j);
          for (int k = 0; k < n; ++k) {
            s += gamma(i, m, k) * gamma(k, j, l);
            s -= gamma(i, j, k) * gamma(k, m, l);
          }
          r(i, l, m, j) = s.value();
          if (scale) (*scale)(i, l, m, j) = s.scale();
        }
  return r;
}

Values deformed_curvature(const PointData& pd, double z, Values* scale) {
  Values g = pd.gamma;
  Values dg = pd.dgamma;
  for (std::size_t k = 0; k < g.size(); ++k) g.flat(k) += z * pd.c.flat(k);
  for (std::size_t k = 0; k < dg.size(); ++k) dg.flat(k) += z * pd.dc.flat(k);
  return riemann(g, dg, scale);
}

Values covariant_derivative(const Values& t, const Values& dt, const Values& gamma, int upper, int lower) {
  const int n = gamma.dim();
  const int rank = upper + lower;
  const bool supported = (upper == 1 && lower == 2) || (upper == 1 && lower == 1) || (upper == 1 && lower == 0) ||
                         (upper == 0 && lower == 2);
  if (!supported) throw std::invalid_argument("unsupported tensor valence for covariant derivative");
  if (t.rank() != rank || dt.rank() != rank + 1) throw std::invalid_argument("tensor rank mismatch");

  Values out(n, rank + 1);
  std::vector<int> idx(rank + 1);
  std::vector<std::size_t> stride(rank, 1);
  for (int a = rank - 2; a >= 0; --a) stride[a] = stride[a + 1] * static_cast<std::size_t>(n);
  for (std::size_t k = 0; k < out.size(); ++k) {
    out.unflatten(k, idx.data());
    const int m = idx[rank];
    std::size_t base = 0;
    for (int a = 0; a < rank; ++a) base += static_cast<std::size_t>(idx[a]) * stride[a];
    double s = dt.flat(k);
    for (int a = 0; a < rank; ++a) {
      const std::size_t without = base - static_cast<std::size_t>(idx[a]) * stride[a];
      for (int b = 0; b < n; ++b) {
        const double tb = t.flat(without + static_cast<std::size_t>(b) * stride[a]);
        if (a < upper)
          s += gamma(idx[a], m, b) * tb;
        else
          s -= gamma(b, m, idx[a]) * tb;
      }
    }
    out.flat(k) = s;
  }
  return out;
}

Values lie_derivative_c(const VectorAtPoint& x, const Values& c, const Values& dc, Values* scale) {
  const int n = c.dim();
  Values out(n, 3);
  if (scale) *scale = Values(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        TermSum s;
        for (int m = 0; m < n; ++m) {
          s += x.v(m) * dc(i, j, k, m);
          s -= c(m, j, k) * x.dv(i, m);
          s += c(i, m, k) * x.dv(m, j);
          s += c(i, j, m) * x.dv(m, k);
        }
        out(i, j, k) = s.value();
        if (scale) (*scale)(i, j, k) = s.scale();
      }
  return out;
}

Values lie_bracket(const VectorAtPoint& x, const VectorAtPoint& y) {
  const int n = x.v.dim();
  Values out(n, 1);
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int m = 0; m < n; ++m) s += x.v(m) * y.dv(i, m) - y.v(m) * x.dv(i, m);
    out(i) = s;
  }
  return out;
}

Values torsion(const Values& gamma) {
  const int n = gamma.dim();
  Values t(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) t(i, j, k) = gamma(i, j, k) - gamma(i, k, j);
  return t;
}

Residual torsion_residual(const Values& gamma) {
  Residual r;
  const int n = gamma.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        TermSum s;
        s += gamma(i, j, k);
        s -= gamma(i, k, j);
        r.absorb(s);
      }
  return r;
}

Residual curvature_antisymmetry_residual(const PointData& pd) {
  Residual r;
  const int n = pd.n;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i)
          r.absorb(pd.riemann(k, l, m, i) + pd.riemann(k, l, i, m),
                   std::max(pd.riemann_scale(k, l, m, i), pd.riemann_scale(k, l, i, m)));
  return r;
}

Residual flatness_residual(const PointData& pd) {
  Residual r;
  for (std::size_t k = 0; k < pd.riemann.size(); ++k) r.absorb(pd.riemann.flat(k), pd.riemann_scale.flat(k));
  return r;
}

Residual deformed_curvature_spread(const PointData& pd, std::span<const double> zs) {
  Residual r;
  Values s0;
  Values r0 = deformed_curvature(pd, 0.0, &s0);
  for (double z : zs) {
    Values sz;
    Values rz = deformed_curvature(pd, z, &sz);
    for (std::size_t k = 0; k < rz.size(); ++k) r.absorb(rz.flat(k) - r0.flat(k), std::max(s0.flat(k), sz.flat(k)));
  }
  return r;
}

Residual metricity_residual(const PointData& pd) {
  if (!pd.g) throw std::invalid_argument("metricity needs a metric");
  Values ng = covariant_derivative(*pd.g, *pd.dg, pd.gamma, 0, 2);
  Residual r;
  const int n = pd.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m) {
        double scale = std::abs((*pd.dg)(i, j, m));
        for (int b = 0; b < n; ++b)
          scale = std::max({scale, std::abs(pd.gamma(b, m, i) * (*pd.g)(b, j)),
                            std::abs(pd.gamma(b, m, j) * (*pd.g)(i, b))});
        r.absorb(ng(i, j, m), scale);
      }
  return r;
}

Residual symmetric_nabla_c_residual(const PointData& pd) {
  Values nc = covariant_derivative(pd.c, pd.dc, pd.gamma, 1, 2);  // nc(i,j,k,l) = nabla_l c^i_{jk}
  Residual r;
  const int n = pd.n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double scale = std::max(std::abs(pd.dc(i, j, k, l)), std::abs(pd.dc(i, l, k, j)));
          for (int b = 0; b < n; ++b)
            scale = std::max({scale, std::abs(pd.gamma(i, l, b) * pd.c(b, j, k)),
                              std::abs(pd.gamma(b, l, j) * pd.c(i, b, k)), std::abs(pd.gamma(b, l, k) * pd.c(i, j, b)),
                              std::abs(pd.gamma(i, j, b) * pd.c(b, l, k)), std::abs(pd.gamma(b, j, l) * pd.c(i, b, k))});
          r.absorb(nc(i, j, k, l) - nc(i, l, k, j), scale);
        }
  return r;
}

}  // namespace fman
