#include "fman/benney.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "fman/error.hpp"
#include "fman/laurent.hpp"

namespace fman {

namespace {

using NodePtr = std::shared_ptr<const ExprNode>;

NodePtr make_var(int slot, std::string name) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::variable;
  n->var = slot;
  n->name = std::move(name);
  return n;
}

NodePtr make_const(double v) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::constant;
  n->value = v;
  return n;
}

NodePtr make_bin(char op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::binary;
  n->op2 = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

NodePtr make_unary(UnaryOp op, NodePtr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::unary;
  n->op1 = op;
  n->lhs = std::move(a);
  return n;
}

NodePtr make_pow(NodePtr a, long num, long den) {
  auto n = std::make_shared<ExprNode>();
  n->kind = ExprNode::Kind::power;
  n->exponent = Rational{num, den};
  n->lhs = std::move(a);
  return n;
}

double plain(const FieldExpr& e, std::span<const double> u) { return eval(e, u); }

Jet jet_in_u(const FieldExpr& e, std::span<const double> u0, int order) { return eval_jet(e, u0, order); }

std::vector<double> with_p(std::span<const double> u, double p) {
  std::vector<double> x(u.begin(), u.end());
  x.push_back(p);
  return x;
}

}  // namespace

LaxFamily LaxFamily::rational(std::vector<std::string> coords, std::vector<LaxTerm> poles) {
  LaxFamily f;
  f.kind_ = LaxKind::rational;
  const int n = static_cast<int>(coords.size());
  NodePtr sum = make_var(n, "p");
  for (const auto& t : poles)
    sum = make_bin('+', sum, make_bin('/', t.weight.root_ptr(), make_bin('-', make_var(n, "p"), t.position.root_ptr())));
  f.lambda_ = FieldExpr(sum, coords, true);
  f.coords_ = std::move(coords);
  f.terms_ = std::move(poles);
  return f;
}

LaxFamily LaxFamily::logarithmic(std::vector<std::string> coords, std::vector<LaxTerm> branches) {
  double total = 0.0;
  for (const auto& t : branches) {
    if (!t.weight.is_constant()) throw SpecError("/lax/branches", "weights must be constants");
    total += eval(t.weight, std::vector<double>(coords.size(), 0.0));
  }
  if (std::abs(total) > 1e-12) throw SpecError("/lax/branches", "weights must sum to zero");
  LaxFamily f;
  f.kind_ = LaxKind::logarithmic;
  const int n = static_cast<int>(coords.size());
  NodePtr sum = make_var(n, "p");
  for (const auto& t : branches) {
    // eps/2 * ln((p - b)^2)
    NodePtr sq = make_pow(make_bin('-', make_var(n, "p"), t.position.root_ptr()), 2, 1);
    NodePtr term = make_bin('*', make_bin('/', t.weight.root_ptr(), make_const(2.0)), make_unary(UnaryOp::ln, sq));
    sum = make_bin('+', sum, term);
  }
  f.lambda_ = FieldExpr(sum, coords, true);
  f.coords_ = std::move(coords);
  f.terms_ = std::move(branches);
  return f;
}

LaxFamily LaxFamily::custom(FieldExpr lambda, std::vector<std::pair<double, double>> brackets) {
  LaxFamily f;
  f.kind_ = LaxKind::custom;
  f.coords_ = lambda.chart();
  f.lambda_ = std::move(lambda);
  f.brackets_ = std::move(brackets);
  return f;
}

std::vector<double> LaxFamily::singularities(std::span<const double> u) const {
  std::vector<double> s;
  for (const auto& t : terms_) s.push_back(plain(t.position, u));
  std::sort(s.begin(), s.end());
  return s;
}

MomentSeries laurent_moments(const LaxFamily& family, std::span<const double> u0, int count, int order) {
  const int n = family.dim();
  const int cap = count + 12;
  std::vector<Laurent> vars;
  for (int i = 0; i < n; ++i) vars.emplace_back(Jet::variable(i, u0, order), 0, cap);
  const Jet one = Jet::constant(1.0, n, order);
  vars.emplace_back(one, -1, cap);  // p = 1/w
  const auto lift = [&](double c) { return Laurent(one * c, 0, cap); };
  Laurent s = evaluate<Laurent>(family.lambda().root(), std::span<const Laurent>(vars), lift);
  s -= Laurent(one, -1, cap);
  if (!s.exact() && s.top() < count) throw ConstructionError("expansion at p = infinity lost precision");
  MomentSeries out;
  auto note = [&](double v, std::string name) {
    if (std::abs(v) > out.violation) {
      out.violation = std::abs(v);
      out.offending = std::move(name);
    }
  };
  if (s.has_log()) note(s.log_coeff().value(), "coefficient of ln p");
  for (int k = s.lead(); k <= 0; ++k) note(s.coeff(k).value(), "coefficient of p^" + std::to_string(-k));
  for (int k = 0; k < count; ++k) out.a.push_back(s.coeff(k + 1));
  return out;
}

MomentSeries moments(const LaxFamily& family, std::span<const double> u0, int count, int order) {
  if (family.kind() == LaxKind::custom) return laurent_moments(family, u0, count, order);
  const int n = family.dim();
  MomentSeries out;
  for (int k = 0; k < count; ++k) out.a.push_back(Jet::constant(0.0, n, order));
  for (const auto& t : family.terms()) {
    const Jet a = jet_in_u(t.weight, u0, order);
    const Jet b = jet_in_u(t.position, u0, order);
    Jet bk = Jet::constant(1.0, n, order);  // b^k
    for (int k = 0; k < count; ++k) {
      if (family.kind() == LaxKind::rational) {
        // a/(p - b) = sum_k a b^k / p^(k+1)
        out.a[k] += a * bk;
      } else {
        // eps ln(p - b) = eps ln p - sum_k eps b^(k+1)/((k+1) p^(k+1))
        out.a[k] -= a * bk * b / static_cast<double>(k + 1);
      }
      bk = bk * b;
    }
  }
  return out;
}

Jet lambda_jet(const LaxFamily& family, std::span<const double> u0, double p0, int order) {
  return eval_jet(family.lambda(), with_p(u0, p0), order);
}

std::vector<double> lambda_p_derivatives(const LaxFamily& family, std::span<const double> u0, double p0, int order) {
  const std::vector<double> x0{p0};
  std::vector<Jet> vars;
  for (double u : u0) vars.push_back(Jet::constant(u, 1, order));
  vars.push_back(Jet::variable(0, x0, order));
  const Jet j = eval_jet(family.lambda(), std::span<const Jet>(vars));
  std::vector<double> d;
  double fact = 1.0;
  for (int k = 0; k <= order; ++k) {
    if (k > 0) fact *= k;
    d.push_back(j.coeffs()[static_cast<std::size_t>(k)] * fact);
  }
  return d;
}

namespace {

struct Probe {
  bool ok = false;
  double value = 0.0;
};

Probe lambda_p_at(const LaxFamily& family, std::span<const double> u0, double p) {
  try {
    const auto d = lambda_p_derivatives(family, u0, p, 1);
    if (!std::isfinite(d[1])) return {};
    return {true, d[1]};
  } catch (const DomainError&) {
    return {};
  }
}

double polish(const LaxFamily& family, std::span<const double> u0, double lo, double hi, double flo) {
  for (int it = 0; it < 200 && hi - lo > 1e-15 * (1.0 + std::abs(lo) + std::abs(hi)); ++it) {
    const double mid = 0.5 * (lo + hi);
    const Probe pm = lambda_p_at(family, u0, mid);
    if (!pm.ok) break;
    if ((pm.value < 0) == (flo < 0)) {
      lo = mid;
      flo = pm.value;
    } else {
      hi = mid;
    }
  }
  double v = 0.5 * (lo + hi);
  for (int it = 0; it < 4; ++it) {
    const auto d = lambda_p_derivatives(family, u0, v, 2);
    if (d[2] == 0.0) break;
    const double next = v - d[1] / d[2];
    if (!(next >= lo - 1e-12 && next <= hi + 1e-12)) break;
    v = next;
  }
  return v;
}

}  // namespace

std::vector<double> critical_points(const LaxFamily& family, std::span<const double> u0) {
  const int n = family.dim();
  struct Interval {
    double a, b;
    int kind;  // 0 finite, 1 ray to +inf, 2 ray to -inf, 3 whole line
  };
  std::vector<Interval> intervals;
  if (!family.brackets().empty()) {
    for (const auto& [a, b] : family.brackets()) intervals.push_back({a, b, 0});
  } else {
    const auto s = family.singularities(u0);
    if (s.empty()) {
      intervals.push_back({0.0, 0.0, 3});
    } else {
      intervals.push_back({s.front(), 0.0, 2});
      for (std::size_t k = 0; k + 1 < s.size(); ++k)
        if (s[k + 1] > s[k]) intervals.push_back({s[k], s[k + 1], 0});
      intervals.push_back({s.back(), 0.0, 1});
    }
  }
  constexpr int samples = 512;
  std::vector<double> roots;
  for (const auto& iv : intervals) {
    auto at = [&](double t) {
      switch (iv.kind) {
        case 0: return iv.a + (iv.b - iv.a) * t;
        case 1: return iv.a + t / (1.0 - t);
        case 2: return iv.a - (1.0 - t) / t;
        default: return std::tan(M_PI * (t - 0.5));
      }
    };
    double prev_p = 0.0;
    Probe prev;
    for (int k = 1; k < samples; ++k) {
      const double p = at(static_cast<double>(k) / samples);
      const Probe cur = lambda_p_at(family, u0, p);
      if (cur.ok && prev.ok && ((cur.value < 0) != (prev.value < 0) || cur.value == 0.0)) {
        const double lo = std::min(prev_p, p), hi = std::max(prev_p, p);
        const double flo = prev_p < p ? prev.value : cur.value;
        roots.push_back(cur.value == 0.0 ? p : polish(family, u0, lo, hi, flo));
      }
      prev = cur;
      prev_p = p;
    }
  }
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }),
              roots.end());
  if (static_cast<int>(roots.size()) != n)
    throw ConstructionError("found " + std::to_string(roots.size()) + " real critical points of lambda, expected " +
                            std::to_string(n));
  for (int i = 0; i + 1 < n; ++i)
    if (roots[i + 1] - roots[i] < 1e-8) throw ConstructionError("coinciding critical points");
  for (double v : roots) {
    const auto d = lambda_p_derivatives(family, u0, v, 2);
    const double tol = 1e-10 * (1.0 + std::abs(d[2]) * (1.0 + std::abs(v)));
    if (std::abs(d[1]) > tol) throw ConstructionError("critical point did not converge");
    if (std::abs(d[2]) < 1e-10) throw ConstructionError("critical point is not simple");
  }
  return roots;
}

namespace {

// Variables of an n-chart expanded at x0 as jets of dimension n.
std::vector<Jet> chart_vars(std::span<const double> x0, int order) {
  std::vector<Jet> v;
  for (std::size_t i = 0; i < x0.size(); ++i) v.push_back(Jet::variable(static_cast<int>(i), x0, order));
  return v;
}

// Jet of lambda's (u, p) expansion `outer` at (u0, v0) composed with u(z), p(z).
Jet compose_up(const Jet& outer, std::span<const double> u0, double v0, std::span<const Jet> u, const Jet& p) {
  std::vector<Jet> inner(u.begin(), u.end());
  inner.push_back(p);
  return compose(outer, with_p(u0, v0), inner);
}

// Phi_i as a jet of r(z).
Jet twist_map(const Twist& twist, int i, const Jet& r) {
  const int order = r.order();
  const FieldExpr& phi = twist.phi[static_cast<std::size_t>(i)];
  const std::vector<double> x0{r.value()};
  const Jet f = eval_jet(phi, x0, std::max(order - 1, 0));
  std::vector<double> d{twist_chart(twist, i, r.value())};
  double fact = 1.0;
  for (int k = 1; k <= order; ++k) {
    if (k > 1) fact *= (k - 1);
    d.push_back(f.coeffs()[static_cast<std::size_t>(k - 1)] * fact);
  }
  return compose_univariate(d, r);
}

Jet twist_weight(const Twist& twist, int i, const Jet& r) {
  if (!twist.active()) return Jet::constant(1.0, r.dim(), r.order());
  const std::vector<Jet> arg{r};
  return eval_jet(twist.phi[static_cast<std::size_t>(i)], std::span<const Jet>(arg));
}

}  // namespace

double twist_chart(const Twist& twist, int i, double r) {
  const auto k = static_cast<std::size_t>(i);
  if (twist.anchor.size() != twist.phi.size()) throw std::logic_error("twisted chart without an anchor");
  const double a = twist.anchor[k];
  if (r == a) return a;
  const auto phi = [&](double s) { return eval(twist.phi[k], std::vector<double>{s}); };
  double err = 0.0;
  const double integral =
      boost::math::quadrature::gauss_kronrod<double, 21>::integrate(phi, a, r, 15, 1e-14, &err);
  if (!std::isfinite(integral)) throw DomainError("twist function not integrable on [" + std::to_string(a) + ", " +
                                                  std::to_string(r) + "]");
  return a + integral;
}

Twist anchor_twist(const LaxFamily& family, std::span<const double> u_ref, Twist twist) {
  twist.anchor = reduce(family, u_ref, 0).r0;
  return twist;
}

ReductionPoint reduce(const LaxFamily& family, std::span<const double> u0, int order, const Twist& twist) {
  const int n = family.dim();
  if (twist.active() && static_cast<int>(twist.phi.size()) != n)
    throw SpecError("/lax/twist", "one twist function per Riemann invariant");
  const int K = order + 3;
  ReductionPoint red;
  red.u0.assign(u0.begin(), u0.end());
  red.v0 = critical_points(family, u0);

  std::vector<Jet> lam;
  for (int i = 0; i < n; ++i) {
    lam.push_back(lambda_jet(family, u0, red.v0[i], K));
    red.lambda_pp.push_back(lam[i].derivative(n).d(n));
  }

  // Velocities v(u) from lambda_p(u, v(u)) = 0 by chord iteration.
  const std::vector<Jet> uvar = chart_vars(u0, K - 1);
  for (int i = 0; i < n; ++i) {
    const Jet lp = lam[i].derivative(n);
    Jet v = Jet::constant(red.v0[i], n, K - 1);
    for (int it = 0; it <= K; ++it) v -= compose_up(lp, u0, red.v0[i], uvar, v) / red.lambda_pp[i];
    red.v_u.push_back(v);
    red.r_u.push_back(compose_up(lam[i], u0, red.v0[i], uvar, v));
    red.r0.push_back(red.r_u.back().value());
  }
  red.jacobian = Values(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) red.jacobian(i, j) = red.r_u[i].d(j);

  // Target chart y = Phi(r(u)) and its inverse u(y).
  std::vector<Jet> y_u;
  for (int i = 0; i < n; ++i)
    y_u.push_back(twist.active() ? twist_map(twist, i, red.r_u[i]) : red.r_u[i]);
  for (int i = 0; i < n; ++i) red.y0.push_back(y_u[i].value());
  Values jy(n, 2);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) jy(i, j) = y_u[i].d(j);
  const Values jinv = inverse(jy);
  const std::vector<Jet> yvar = chart_vars(red.y0, K - 1);
  std::vector<Jet> u(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    u[j] = Jet::constant(u0[j], n, K - 1);
    for (int a = 0; a < n; ++a) u[j] += jinv(j, a) * (yvar[a] - red.y0[a]);
  }
  for (int it = 0; it <= K; ++it) {
    std::vector<Jet> defect;
    for (int a = 0; a < n; ++a) defect.push_back(compose(y_u[a], u0, u) - yvar[a]);
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a) u[j] -= jinv(j, a) * defect[a];
  }
  red.u_y = u;
  for (int i = 0; i < n; ++i) red.v_y.push_back(compose(red.v_u[i], u0, u));

  // Residue tensors in the target chart.
  const int og = order + 1;
  red.g = zero_jets(n, 2, n, og);
  red.c_lower = zero_jets(n, 3, n, og);
  std::vector<Jet> du;  // du^j/dy^a stored at j*n + a
  for (int j = 0; j < n; ++j)
    for (int a = 0; a < n; ++a) du.push_back(u[j].derivative(a));
  for (int i = 0; i < n; ++i) {
    std::vector<Jet> dl;  // d lambda / dy^a at p = v^i(y)
    for (int a = 0; a < n; ++a) {
      Jet s = Jet::constant(0.0, n, og);
      for (int j = 0; j < n; ++j) s += compose_up(lam[i].derivative(j), u0, red.v0[i], u, red.v_y[i]) * du[j * n + a];
      dl.push_back(s.truncated(og));
    }
    const Jet lpp = compose_up(lam[i].derivative(n).derivative(n), u0, red.v0[i], u, red.v_y[i]).truncated(og);
    const Jet r_y = compose(red.r_u[i], u0, u);
    const Jet w = twist_weight(twist, i, r_y).truncated(og);
    const Jet wg = w / lpp;
    const Jet wc = w * w / lpp;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        red.g(a, b) += wg * dl[a] * dl[b];
        for (int c = 0; c < n; ++c) red.c_lower(a, b, c) += wc * dl[a] * dl[b] * dl[c];
      }
  }
  const JetTensor ginv = inverse(red.g);
  red.c = zero_jets(n, 3, n, order);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        Jet s = Jet::constant(0.0, n, order);
        for (int d = 0; d < n; ++d) s += ginv(a, d) * red.c_lower(d, b, c);
        red.c(a, b, c) = s.truncated(order);
      }
  return red;
}

std::pair<Values, Values> residue_tensors_u(const LaxFamily& family, std::span<const double> u0, const Twist& twist) {
  const int n = family.dim();
  const auto v0 = critical_points(family, u0);
  Values g(n, 2), c(n, 3);
  for (int i = 0; i < n; ++i) {
    const Jet lam = lambda_jet(family, u0, v0[i], 2);
    const double lpp = lam.dd(n, n);
    double w = 1.0;
    if (twist.active()) w = eval(twist.phi[i], std::vector<double>{lam.value()});
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        g(a, b) += w * lam.d(a) * lam.d(b) / lpp;
        for (int e = 0; e < n; ++e) c(a, b, e) += w * w * lam.d(a) * lam.d(b) * lam.d(e) / lpp;
      }
  }
  return {g, c};
}

FieldJets moments_in_chart(const LaxFamily& family, const ReductionPoint& red, int count) {
  const int order = red.u_y.front().order();
  const MomentSeries m = moments(family, red.u0, count, order);
  FieldJets out;
  for (const auto& a : m.a) out.push_back(compose(a, red.u0, red.u_y));
  return out;
}

double loewner_probe(const LaxFamily& family, const ReductionPoint& red) {
  double hi = *std::max_element(red.v0.begin(), red.v0.end());
  for (double s : family.singularities(red.u0)) hi = std::max(hi, s);
  return hi + 0.731;
}

Residual loewner_residual(const LaxFamily& family, const ReductionPoint& red, double p0) {
  const int n = family.dim();
  const Jet lam = lambda_jet(family, red.u0, p0, 1);
  const FieldJets a = moments_in_chart(family, red, 1);
  const double lp = lam.d(n);
  Residual r;
  for (int i = 0; i < n; ++i) {
    if (std::abs(p0 - red.v0[i]) < 1e-12) throw DomainError("probe point at a critical point");
    TermSum s;
    for (int j = 0; j < n; ++j) s += lam.d(j) * red.u_y[j].d(i);
    s -= a[0].d(i) / (p0 - red.v0[i]) * lp;
    r.absorb(s);
  }
  return r;
}

GibbonsTsarev gibbons_tsarev_residual(const LaxFamily& family, const ReductionPoint& red) {
  const int n = family.dim();
  const FieldJets a = moments_in_chart(family, red, 1);
  GibbonsTsarev out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const double dv = red.v0[i] - red.v0[j];
      if (std::abs(dv) < 1e-8) throw DomainError("coinciding characteristic velocities");
      TermSum s;
      s += red.v_y[j].d(i);
      s -= a[0].d(i) / dv;
      out.velocities.absorb(s);
      TermSum t;
      t += a[0].dd(i, j);
      t -= 2.0 * a[0].d(i) * a[0].d(j) / (dv * dv);
      out.potential.absorb(t);
    }
  return out;
}

Residual lambda_pp_identity_residual(const LaxFamily& family, const ReductionPoint& red) {
  const FieldJets a = moments_in_chart(family, red, 1);
  Residual r;
  for (int i = 0; i < family.dim(); ++i) {
    if (a[0].d(i) == 0.0) throw DomainError("vanishing derivative of the first moment");
    TermSum s;
    s += red.lambda_pp[i] * a[0].d(i);
    s -= 1.0;
    r.absorb(s);
  }
  return r;
}

Residual moment_chain_residual(const LaxFamily& family, const ReductionPoint& red, int m) {
  const FieldJets a = moments_in_chart(family, red, m + 2);
  Residual r;
  for (int k = 0; k <= m; ++k)
    for (int i = 0; i < family.dim(); ++i) {
      TermSum s;
      s += a[k].d(i) * red.v0[i];
      s -= a[k + 1].d(i);
      if (k > 0) s -= k * a[k - 1].value() * a[0].d(i);
      r.absorb(s);
    }
  return r;
}

Residual residue_diagonal_residual(const LaxFamily& family, const ReductionPoint& red) {
  const int n = family.dim();
  const FieldJets a = moments_in_chart(family, red, 1);
  Residual r;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      TermSum s;
      s += red.g(i, j).value();
      if (i == j) s -= a[0].d(i);
      r.absorb(s);
    }
  return r;
}

Residual chart_coherence_residual(const LaxFamily& family, const ReductionPoint& red, const Twist& twist) {
  const int n = family.dim();
  const auto [gu, cu] = residue_tensors_u(family, red.u0, twist);
  // dy/du is the inverse of du/dy
  Values duy(n, 2);
  for (int j = 0; j < n; ++j)
    for (int a = 0; a < n; ++a) duy(j, a) = red.u_y[j].d(a);
  const Values j = inverse(duy);  // j(a, k) = dy^a/du^k
  Residual r;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      TermSum s;
      s += gu(k, l);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) s -= j(a, k) * j(b, l) * red.g(a, b).value();
      r.absorb(s);
      for (int m = 0; m < n; ++m) {
        TermSum t;
        t += cu(k, l, m);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) t -= j(a, k) * j(b, l) * j(c, m) * red.c_lower(a, b, c).value();
        r.absorb(t);
      }
    }
  return r;
}

}  // namespace fman
