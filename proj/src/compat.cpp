#include "fman/compat.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fman/error.hpp"

namespace fman {

namespace {

bool distinct(int a, int b, int c) { return a != b && b != c && a != c; }

}  // namespace

Residual admissible_residual(const PointData& pd, const VectorAtPoint& x) {
  const int n = pd.n;
  // nabla_k X^m stored as nx(m, k), with its own summand scale
  Values nx(n, 2), ns(n, 2);
  for (int m = 0; m < n; ++m)
    for (int k = 0; k < n; ++k) {
      TermSum s;
      s += x.dv(m, k);
      for (int l = 0; l < n; ++l) s += pd.gamma(m, k, l) * x.v(l);
      nx(m, k) = s.value();
      ns(m, k) = s.scale();
    }
  Residual r;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        TermSum s;
        for (int m = 0; m < n; ++m) {
          s.add(pd.c(i, j, m) * nx(m, k), std::abs(pd.c(i, j, m)) * ns(m, k));
          s.add(-pd.c(i, k, m) * nx(m, j), std::abs(pd.c(i, k, m)) * ns(m, j));
        }
        r.absorb(s);
      }
  return r;
}

Residual curvature_obstruction_residual(const PointData& pd) {
  const int n = pd.n;
  const Values& rm = pd.riemann;
  const Values& c = pd.c;
  Residual r;
  for (int nn = 0; nn < n; ++nn)
    for (int p = 0; p < n; ++p)
      for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i)
          for (int l = 0; l < n; ++l) {
            TermSum s;
            for (int k = 0; k < n; ++k) {
              s.add(rm(k, l, m, i) * c(nn, p, k), pd.riemann_scale(k, l, m, i) * std::abs(c(nn, p, k)));
              s.add(rm(k, l, i, p) * c(nn, m, k), pd.riemann_scale(k, l, i, p) * std::abs(c(nn, m, k)));
              s.add(rm(k, l, p, m) * c(nn, i, k), pd.riemann_scale(k, l, p, m) * std::abs(c(nn, i, k)));
            }
            r.absorb(s);
          }
  return r;
}

Residual vectorwise_obstruction_residual(const PointData& pd, std::span<const double> x) {
  const int n = pd.n;
  const Values& rm = pd.riemann;
  const Values& c = pd.c;
  Residual r;
  // Y = e_a, W = e_b, Z = e_d
  for (int nn = 0; nn < n; ++nn)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int d = 0; d < n; ++d) {
          TermSum s;
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              const double xl = x[l];
              s.add(c(nn, d, k) * rm(k, l, b, a) * xl, std::abs(c(nn, d, k) * xl) * pd.riemann_scale(k, l, b, a));
              s.add(c(nn, b, k) * rm(k, l, a, d) * xl, std::abs(c(nn, b, k) * xl) * pd.riemann_scale(k, l, a, d));
              s.add(c(nn, a, k) * rm(k, l, d, b) * xl, std::abs(c(nn, a, k) * xl) * pd.riemann_scale(k, l, d, b));
            }
          r.absorb(s);
        }
  return r;
}

Residual bianchi_form_residual(const PointData& pd) {
  const int n = pd.n;
  const Values& rm = pd.riemann;
  const Values& c = pd.c;
  Residual r;
  for (int k = 0; k < n; ++k)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int cc = 0; cc < n; ++cc)
          for (int d = 0; d < n; ++d) {
            TermSum s;
            for (int l = 0; l < n; ++l) {
              s.add(rm(k, l, b, cc) * c(l, a, d), pd.riemann_scale(k, l, b, cc) * std::abs(c(l, a, d)));
              s.add(rm(k, l, a, b) * c(l, cc, d), pd.riemann_scale(k, l, a, b) * std::abs(c(l, cc, d)));
              s.add(rm(k, l, cc, a) * c(l, b, d), pd.riemann_scale(k, l, cc, a) * std::abs(c(l, b, d)));
            }
            r.absorb(s);
          }
  return r;
}

CurvatureComponents canonical_curvature_components(const PointData& pd) {
  const int n = pd.n;
  CurvatureComponents out;
  for (int nn = 0; nn < n; ++nn)
    for (int m = 0; m < n; ++m)
      for (int i = 0; i < n; ++i) {
        if (!distinct(nn, m, i)) continue;
        out.trace_like.absorb(pd.riemann(nn, nn, m, i), pd.riemann_scale(nn, nn, m, i));
        out.repeated.absorb(pd.riemann(nn, m, m, i), pd.riemann_scale(nn, m, m, i));
      }
  return out;
}

CanonicalIdentities canonical_connection_identities(const Values& gamma) {
  const int n = gamma.dim();
  CanonicalIdentities out;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (k == i) continue;
      TermSum s;
      s += gamma(i, k, k);
      s += gamma(i, k, i);
      out.repeated.absorb(s);
      for (int l = 0; l < n; ++l)
        if (l != i && l != k) out.distinct.absorb(gamma(i, k, l), std::abs(gamma(i, k, l)));
    }
  return out;
}

Values tsarev_coefficients(const Values& gamma) {
  const int n = gamma.dim();
  Values t(n, 2);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      if (i != k) t(i, k) = gamma(i, k, i);
  return t;
}

TsarevCompatibility tsarev_compatibility_residual(const PointData& pd) {
  const int n = pd.n;
  const Values& g = pd.gamma;
  const Values& dg = pd.dgamma;
  TsarevCompatibility out;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int m = 0; m < n; ++m) {
        if (!distinct(k, i, m)) continue;
        TermSum a;
        a += dg(k, m, k, i);
        a -= dg(k, i, k, m);
        out.first.absorb(a);
        TermSum b;
        b += dg(k, k, m, i);
        b -= g(k, k, m) * g(m, i, m);
        b += g(k, i, k) * g(k, k, m);
        b -= g(k, i, k) * g(i, i, m);
        out.second.absorb(b);
      }
  return out;
}

Residual tsarev_system_residual(const PointData& pd, const VectorAtPoint& v) {
  const int n = pd.n;
  Residual r;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      if (i == k) continue;
      TermSum s;
      s += v.dv(i, k);
      s -= pd.gamma(i, k, i) * v.v(k);
      s += pd.gamma(i, k, i) * v.v(i);
      r.absorb(s);
    }
  return r;
}

SeriesField tsarev_solve(const JetTensor& gamma, std::span<const double> base,
                         const std::vector<std::vector<double>>& boundary, int order, SolveReport* report) {
  const int n = static_cast<int>(base.size());
  if (static_cast<int>(boundary.size()) != n) throw std::invalid_argument("one boundary polynomial per coordinate");
  const auto layout = JetLayout::get(n, order);
  SeriesProblem pb;
  pb.base.assign(base.begin(), base.end());
  pb.order = order;
  for (int i = 0; i < n; ++i) pb.initial.push_back(boundary[i].empty() ? 0.0 : boundary[i][0]);
  pb.rhs = [&](const FieldJets& v) {
    const int ord = gamma.flat(0).order();
    JetTensor g = zero_jets(n, 2, n, ord);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        if (i != k) g(i, k) = gamma(i, k, i) * (v[k] - v[i]);
    return g;
  };
  pb.has_equation = [](int i, int k) { return i != k; };
  pb.boundary = [&](int i, std::size_t rank) {
    const auto alpha = layout->index(rank);
    const std::size_t d = alpha[i];
    return d < boundary[i].size() ? boundary[i][d] : 0.0;
  };
  SeriesField f;
  f.label = "v";
  f.base = pb.base;
  f.comp = solve_series(pb, report);
  return f;
}

double min_velocity_gap(std::span<const double> v) {
  double gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < v.size(); ++i)
    for (std::size_t j = i + 1; j < v.size(); ++j) gap = std::min(gap, std::abs(v[i] - v[j]));
  return gap;
}

Residual semi_hamiltonian_residual(const FieldJets& v, double min_gap) {
  const int n = static_cast<int>(v.size());
  std::vector<double> vals;
  for (const auto& j : v) vals.push_back(j.value());
  if (min_velocity_gap(vals) < min_gap) throw DomainError("coinciding characteristic velocities");
  // q(i, j) = d_j v^i / (v^j - v^i) as order-1 jets
  std::vector<Jet> q(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) q[i * n + j] = v[i].derivative(j) / (v[j] - v[i]).truncated(v[i].order() - 1);
  Residual r;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        if (!distinct(i, j, k)) continue;
        TermSum s;
        s += q[i * n + j].d(k);
        s -= q[i * n + k].d(j);
        r.absorb(s);
      }
  return r;
}

InvarianceResidual invariance_residual(const Values& g, const Values& c) {
  const int n = c.dim();
  InvarianceResidual out;
  const Values gi = inverse(g);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < n; ++l)
      for (int p = 0; p < n; ++p) {
        TermSum a, b;
        for (int q = 0; q < n; ++q) {
          a += g(i, q) * c(q, l, p);
          a -= g(l, q) * c(q, i, p);
          b += gi(i, q) * c(l, q, p);
          b -= gi(l, q) * c(i, q, p);
        }
        out.covariant.absorb(a);
        out.contravariant.absorb(b);
      }
  return out;
}

EgorovCheck egorov_check(const Values& g, const Values& dg) {
  const int n = g.dim();
  EgorovCheck out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      out.off_diagonal.absorb(g(i, j), std::abs(g(i, j)));
      TermSum s;
      s += dg(i, i, j);
      s -= dg(j, j, i);
      out.closure.absorb(s);
    }
  return out;
}

namespace {

// h^{lq} = sum eps X^l X^q
Values expansion_pairing(int n, std::span<const ExpansionTerm> family) {
  Values h(n, 2);
  for (const auto& t : family)
    for (int l = 0; l < n; ++l)
      for (int q = 0; q < n; ++q) h(l, q) += t.sign * t.x[l] * t.x[q];
  return h;
}

}  // namespace

Values quadratic_expansion(const Values& c, std::span<const ExpansionTerm> family) {
  const int n = c.dim();
  const Values h = expansion_pairing(n, family);
  Values e(n, 4);  // e(s, k, m, i)
  for (int s = 0; s < n; ++s)
    for (int k = 0; k < n; ++k)
      for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i) {
          double acc = 0.0;
          for (int l = 0; l < n; ++l)
            for (int q = 0; q < n; ++q) acc += (c(s, m, l) * c(k, i, q) - c(s, i, l) * c(k, m, q)) * h(l, q);
          e(s, k, m, i) = acc;
        }
  return e;
}

Residual quadratic_expansion_cyclic(const Values& c, std::span<const ExpansionTerm> family) {
  const int n = c.dim();
  const Values h = expansion_pairing(n, family);
  Residual r;
  for (int s = 0; s < n; ++s)
    for (int nn = 0; nn < n; ++nn)
      for (int p = 0; p < n; ++p)
        for (int m = 0; m < n; ++m)
          for (int i = 0; i < n; ++i) {
            TermSum t;
            for (int k = 0; k < n; ++k)
              for (int l = 0; l < n; ++l)
                for (int q = 0; q < n; ++q) {
                  const double w = h(l, q);
                  t += (c(s, m, l) * c(k, i, q) - c(s, i, l) * c(k, m, q)) * w * c(nn, p, k);
                  t += (c(s, i, l) * c(k, p, q) - c(s, p, l) * c(k, i, q)) * w * c(nn, m, k);
                  t += (c(s, p, l) * c(k, m, q) - c(s, m, l) * c(k, p, q)) * w * c(nn, i, k);
                }
            r.absorb(t);
          }
  return r;
}

QuadraticExpansionCheck quadratic_expansion_check(const PointData& pd, std::span<const ExpansionTerm> family) {
  if (!pd.ginv) throw DomainError("quadratic expansion check needs a metric");
  const int n = pd.n;
  const Values& gi = *pd.ginv;
  const Values e = quadratic_expansion(pd.c, family);
  QuadraticExpansionCheck out;
  for (int s = 0; s < n; ++s)
    for (int k = 0; k < n; ++k)
      for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i) {
          TermSum a, b;
          for (int l = 0; l < n; ++l) {
            a.add(gi(s, l) * pd.riemann(k, l, m, i), std::abs(gi(s, l)) * pd.riemann_scale(k, l, m, i));
            b.add(gi(k, l) * pd.riemann(s, l, m, i), std::abs(gi(k, l)) * pd.riemann_scale(s, l, m, i));
          }
          a -= e(s, k, m, i);
          b -= e(s, k, m, i);
          out.pairing_first.absorb(a);
          out.pairing_second.absorb(b);
        }
  out.cyclic = quadratic_expansion_cyclic(pd.c, family);
  return out;
}

}  // namespace fman
