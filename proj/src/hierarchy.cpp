#include "fman/hierarchy.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "fman/error.hpp"

namespace fman {

namespace {

JetTensor linear_rhs(const SeriesContext& ctx, const FieldJets& x, const FieldJets* prev) {
  const int n = static_cast<int>(ctx.base.size());
  const Jet& ref = ctx.gamma.flat(0);
  JetTensor g = zero_jets(n, 2, n, ref.order());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet& s = g(i, j);
      for (int k = 0; k < n; ++k) {
        s -= ctx.gamma(i, j, k) * x[k];
        if (prev) s += ctx.c(i, k, j) * (*prev)[k];
      }
    }
  return g;
}

SeriesField solve_level(const SeriesContext& ctx, const FieldJets* prev, std::span<const double> const_term,
                        std::string label, SolveReport* report) {
  SeriesProblem pb;
  pb.base = ctx.base;
  pb.order = ctx.order;
  pb.initial.assign(const_term.begin(), const_term.end());
  pb.rhs = [&](const FieldJets& x) { return linear_rhs(ctx, x, prev); };
  SeriesField f;
  f.label = std::move(label);
  f.base = ctx.base;
  f.comp = solve_series(pb, report);
  return f;
}

}  // namespace

SeriesField flat_field(const SeriesContext& ctx, int p, SolveReport* report) {
  std::vector<double> e(ctx.base.size(), 0.0);
  e[p] = 1.0;
  return solve_level(ctx, nullptr, e, "X(" + std::to_string(p + 1) + ",0)", report);
}

std::vector<SeriesField> flat_basis(const SeriesContext& ctx, SolveReport* report) {
  std::vector<SeriesField> out;
  for (std::size_t p = 0; p < ctx.base.size(); ++p) out.push_back(flat_field(ctx, static_cast<int>(p), report));
  return out;
}

SeriesField raise_level(const SeriesContext& ctx, const SeriesField& prev, std::span<const double> const_term,
                        SolveReport* report) {
  std::string label = prev.label;
  const auto comma = label.find(',');
  if (comma != std::string::npos && label.back() == ')') {
    const int alpha = std::stoi(label.substr(comma + 1, label.size() - comma - 2));
    label = label.substr(0, comma + 1) + std::to_string(alpha + 1) + ")";
  }
  return solve_level(ctx, &prev.comp, const_term, label, report);
}

CompatibilityBrackets compatibility_residual(const PointData& pd) {
  const int n = pd.n;
  const Values& g = pd.gamma;
  const Values& dg = pd.dgamma;
  const Values& c = pd.c;
  const Values& dc = pd.dc;
  CompatibilityBrackets out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int m = 0; m < n; ++m)
        for (int l = 0; l < n; ++l) {
          TermSum a, b, e;
          a += dg(i, j, l, m);
          a -= dg(i, m, l, j);
          b += dc(i, j, l, m);
          b -= dc(i, m, l, j);
          for (int k = 0; k < n; ++k) {
            a -= g(i, j, k) * g(k, m, l);
            a += g(i, m, k) * g(k, j, l);
            b -= g(i, k, j) * c(k, m, l);
            b -= g(k, l, m) * c(i, j, k);
            b += g(i, k, m) * c(k, j, l);
            b += g(k, l, j) * c(i, m, k);
            e += c(i, j, k) * c(k, m, l);
            e -= c(i, m, k) * c(k, j, l);
          }
          out.curvature.absorb(a);
          out.mixed.absorb(b);
          out.associativity.absorb(e);
        }
  return out;
}

Hierarchy build_hierarchy(const SeriesContext& ctx, int p_max, int alpha_max, double consistency_tol) {
  const int n = static_cast<int>(ctx.base.size());
  if (p_max < 1 || p_max > n) throw std::invalid_argument("p_max out of range");
  if (alpha_max < 0) throw std::invalid_argument("alpha_max must be nonnegative");
  Hierarchy h;
  h.radius = std::numeric_limits<double>::infinity();
  const std::vector<double> zero(n, 0.0);
  for (int p = 0; p < p_max; ++p) {
    std::vector<SeriesField> chain;
    SolveReport rep;
    chain.push_back(flat_field(ctx, p, &rep));
    for (int a = 1; a <= alpha_max; ++a) chain.push_back(raise_level(ctx, chain.back(), zero, &rep));
    const double threshold = consistency_tol * std::max(1.0, rep.scale);
    if (rep.consistency > threshold) {
      const int degree = rep.first_degree_over(threshold);
      std::ostringstream msg;
      msg.precision(3);
      msg << "series coefficient system inconsistent at degree " << degree << " (spread "
          << rep.spread_by_degree[degree] << ", scale " << rep.scale << "; largest spread " << rep.consistency
          << " at degree " << rep.worst_degree << ")";
      throw ConstructionError(msg.str());
    }
    h.report.merge(rep);
    for (const auto& f : chain) h.radius = std::min(h.radius, polydisc_radius(f));
    h.fields.push_back(std::move(chain));
  }
  return h;
}

Residual recursion_residual(const PointData& pd, const VectorAtPoint& x, const VectorAtPoint* prev) {
  const int n = pd.n;
  Residual r;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      TermSum s;
      s += x.dv(i, j);
      for (int k = 0; k < n; ++k) {
        s += pd.gamma(i, j, k) * x.v(k);
        if (prev) s -= pd.c(i, k, j) * prev->v(k);
      }
      r.absorb(s);
    }
  return r;
}

Residual deformed_parallel_residual(const PointData& pd, std::span<const VectorAtPoint> levels, double z) {
  const int n = pd.n;
  const int top = static_cast<int>(levels.size()) - 1;
  Residual r;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      TermSum s;
      double w = 1.0;  // (-z)^a
      for (int a = 0; a <= top; ++a) {
        const VectorAtPoint& x = levels[a];
        s += w * x.dv(i, j);
        for (int k = 0; k < n; ++k) {
          s += w * pd.gamma(i, j, k) * x.v(k);
          s += w * z * pd.c(i, j, k) * x.v(k);
        }
        w *= -z;
      }
      // w is now (-z)^(top+1)
      for (int k = 0; k < n; ++k) s += w * pd.c(i, j, k) * levels[top].v(k);
      r.absorb(s);
    }
  return r;
}

}  // namespace fman
