#include "fman/flows.hpp"

#include <algorithm>
#include <cmath>

namespace fman {

std::vector<double> flow_rhs(const Values& vx, std::span<const double> ux) {
  const int n = vx.dim();
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i] += vx(i, j) * ux[j];
  return out;
}

Values commutation_form(const Values& c, const Values& dc, const VectorAtPoint& x, const VectorAtPoint& y,
                        Values* scale) {
  const int n = c.dim();
  Values sx, sy;
  const Values lx = lie_derivative_c(x, c, dc, &sx);
  const Values ly = lie_derivative_c(y, c, dc, &sy);
  const Values xy = lie_bracket(x, y);
  Values q(n, 2);
  if (scale) *scale = Values(n, 2);
  for (int i = 0; i < n; ++i)
    for (int p = 0; p < n; ++p) {
      TermSum s;
      for (int k = 0; k < n; ++k) {
        s.add(lx(i, p, k) * y.v(k), sx(i, p, k) * std::abs(y.v(k)));
        s.add(-ly(i, p, k) * x.v(k), sy(i, p, k) * std::abs(x.v(k)));
        s += c(i, p, k) * xy(k);
      }
      q(i, p) = s.value();
      if (scale) (*scale)(i, p) = s.scale();
    }
  return q;
}

Residual sufficient_condition_residual(const Values& c, const Values& dc, const VectorAtPoint& x,
                                       const VectorAtPoint& y) {
  Values scale;
  const Values q = commutation_form(c, dc, x, y, &scale);
  Residual r;
  for (std::size_t k = 0; k < q.size(); ++k) r.absorb(q.flat(k), scale.flat(k));
  return r;
}

namespace {

// (Lie_X V)^i_j = X^m d_m V^i_j - V^m_j d_m X^i + V^i_m d_j X^m
Values lie_of_operator(const VectorAtPoint& x, const Values& v, const Values& dv) {
  const int n = v.dim();
  Values out(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int m = 0; m < n; ++m) s += x.v(m) * dv(i, j, m) - v(m, j) * x.dv(i, m) + v(i, m) * x.dv(m, j);
      out(i, j) = s;
    }
  return out;
}

std::vector<double> values_of_vector(const Values& v) { return v.data(); }

}  // namespace

Values sufficient_operator_form(const Values& c, const Values& dc, const VectorAtPoint& x, const VectorAtPoint& y) {
  const int n = c.dim();
  const Values vx = structure_operator(c, values_of_vector(x.v));
  const Values vy = structure_operator(c, values_of_vector(y.v));
  const Values dvx = structure_operator_gradient(c, dc, x);
  const Values dvy = structure_operator_gradient(c, dc, y);
  const Values a = lie_of_operator(x, vy, dvy);
  const Values b = lie_of_operator(y, vx, dvx);
  const Values vxy = structure_operator(c, values_of_vector(lie_bracket(x, y)));
  Values out(n, 2);
  for (std::size_t k = 0; k < out.size(); ++k) out.flat(k) = a.flat(k) - b.flat(k) - vxy.flat(k);
  return out;
}

Residual sufficient_forms_agreement(const Values& c, const Values& dc, const VectorAtPoint& x, const VectorAtPoint& y) {
  Values scale;
  const Values q = commutation_form(c, dc, x, y, &scale);
  const Values o = sufficient_operator_form(c, dc, x, y);
  Residual r;
  for (std::size_t k = 0; k < q.size(); ++k) r.absorb(q.flat(k) - o.flat(k), scale.flat(k));
  return r;
}

Residual iff_commutativity_residual(const Values& c, const Values& dc, const VectorAtPoint& x,
                                    const VectorAtPoint& y) {
  const int n = c.dim();
  Values qs;
  const Values q = commutation_form(c, dc, x, y, &qs);
  Residual r;
  for (int rr = 0; rr < n; ++rr)
    for (int j = 0; j < n; ++j)
      for (int s = j; s < n; ++s) {
        TermSum t;
        for (int i = 0; i < n; ++i) {
          t.add(c(rr, i, s) * q(i, j), std::abs(c(rr, i, s)) * qs(i, j));
          t.add(c(rr, i, j) * q(i, s), std::abs(c(rr, i, j)) * qs(i, s));
        }
        r.absorb(t);
      }
  return r;
}

Residual iff_commutativity_residual(const Values& c, const Values& dc, const VectorAtPoint& x,
                                    const VectorAtPoint& y, std::span<const double> z, std::span<const double> w) {
  const int n = c.dim();
  Values qs;
  const Values q = commutation_form(c, dc, x, y, &qs);
  Residual r;
  for (int rr = 0; rr < n; ++rr) {
    TermSum t;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int s = 0; s < n; ++s) {
          const double a = c(rr, i, s) * w[s] * z[j];
          const double b = c(rr, i, j) * z[j] * w[s];
          t.add(a * q(i, j), std::abs(a) * qs(i, j));
          t.add(b * q(i, s), std::abs(b) * qs(i, s));
        }
    r.absorb(t);
  }
  return r;
}

Residual operator_commutator_residual(const Values& vx, const Values& vy) {
  const int n = vx.dim();
  Residual r;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      TermSum t;
      for (int m = 0; m < n; ++m) {
        t += vx(i, m) * vy(m, j);
        t -= vy(i, m) * vx(m, j);
      }
      r.absorb(t);
    }
  return r;
}

std::vector<double> oracle_flow_commutator(const Values& c, const Values& dc, const VectorAtPoint& x,
                                           const VectorAtPoint& y, const JetState& s, double* scale) {
  const int n = c.dim();
  const Values vx = structure_operator(c, values_of_vector(x.v));
  const Values vy = structure_operator(c, values_of_vector(y.v));
  const Values dvx = structure_operator_gradient(c, dc, x);
  const Values dvy = structure_operator_gradient(c, dc, y);
  const std::vector<double> ut = flow_rhs(vx, s.ux);
  const std::vector<double> utau = flow_rhs(vy, s.ux);

  // d_x(V u_x) = (d_m V) u_x^m u_x + V u_xx
  auto dx_flow = [&](const Values& v, const Values& dv, std::vector<double>& mag) {
    std::vector<double> out(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        out[i] += v(i, k) * s.uxx[k];
        mag[i] = std::max(mag[i], std::abs(v(i, k) * s.uxx[k]));
        for (int m = 0; m < n; ++m) {
          const double t = dv(i, k, m) * s.ux[m] * s.ux[k];
          out[i] += t;
          mag[i] = std::max(mag[i], std::abs(t));
        }
      }
    return out;
  };
  std::vector<double> mx(n, 0.0), my(n, 0.0);
  const std::vector<double> dutau = dx_flow(vy, dvy, my);
  const std::vector<double> dut = dx_flow(vx, dvx, mx);

  std::vector<double> out(n, 0.0);
  double sc = 0.0;
  for (int i = 0; i < n; ++i) {
    TermSum t;
    for (int j = 0; j < n; ++j) {
      for (int m = 0; m < n; ++m) {
        t += dvx(i, j, m) * utau[m] * s.ux[j];
        t -= dvy(i, j, m) * ut[m] * s.ux[j];
      }
      t.add(vx(i, j) * dutau[j], std::abs(vx(i, j)) * std::max(my[j], std::abs(dutau[j])));
      t.add(-vy(i, j) * dut[j], std::abs(vy(i, j)) * std::max(mx[j], std::abs(dut[j])));
    }
    out[i] = t.value();
    sc = std::max(sc, t.scale());
  }
  if (scale) *scale = sc;
  return out;
}

Residual oracle_residual(const Values& c, const Values& dc, const VectorAtPoint& x, const VectorAtPoint& y,
                         const JetState& s) {
  double scale = 0.0;
  const std::vector<double> v = oracle_flow_commutator(c, dc, x, y, s, &scale);
  Residual r;
  for (double e : v) r.absorb(e, scale);
  return r;
}

Residual bracket_identity_residual(const JetTensor& c, const FieldJets& x, const FieldJets& y, const FieldJets& z) {
  const int n = c.dim();
  const Values cv = values_of(c);
  auto vals = [](const FieldJets& f) {
    std::vector<double> v;
    for (const auto& j : f) v.push_back(j.value());
    return v;
  };
  const std::vector<double> xv = vals(x), yv = vals(y), zv = vals(z);
  const FieldJets zx = product(c, z, x);
  const FieldJets zy = product(c, z, y);
  const std::vector<double> t1 = bracket(zx, y);
  const std::vector<double> t2 = bracket(x, zy);
  const std::vector<double> t3 = product(cv, bracket(x, z), yv);
  const std::vector<double> t4 = product(cv, bracket(x, y), zv);
  const std::vector<double> t5 = product(cv, xv, bracket(z, y));

  const VectorAtPoint xa = vector_at(x), ya = vector_at(y);
  const Values dc = gradients_of(c);
  Values sx, sy;
  const Values lx = lie_derivative_c(xa, cv, dc, &sx);
  const Values ly = lie_derivative_c(ya, cv, dc, &sy);
  Residual r;
  for (int i = 0; i < n; ++i) {
    TermSum lhs;
    lhs += t1[i];
    lhs += t2[i];
    lhs -= t3[i];
    lhs -= t4[i];
    lhs -= t5[i];
    TermSum rhs;
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        rhs.add(lx(i, j, k) * yv[j] * zv[k], sx(i, j, k) * std::abs(yv[j] * zv[k]));
        rhs.add(-ly(i, j, k) * xv[j] * zv[k], sy(i, j, k) * std::abs(xv[j] * zv[k]));
      }
    rhs += t4[i];
    r.absorb(lhs.value() - rhs.value(), std::max(lhs.scale(), rhs.scale()));
  }
  return r;
}

}  // namespace fman
