#include "fman/series.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fman/error.hpp"

namespace fman {

VectorAtPoint evaluate(const SeriesField& f, std::span<const double> x) { return vector_at(reexpand(f, x, 1)); }

FieldJets reexpand(const SeriesField& f, std::span<const double> x, int order) {
  const int n = f.dim();
  std::vector<Jet> vars;
  vars.reserve(n);
  for (int i = 0; i < n; ++i) vars.push_back(Jet::variable(i, x, order));
  FieldJets out;
  out.reserve(n);
  for (const auto& c : f.comp) out.push_back(compose(c, f.base, vars));
  return out;
}

double tail_norm(const SeriesField& f) {
  double worst = 0.0;
  for (const auto& c : f.comp) {
    const auto& layout = c.layout();
    double s = 0.0;
    for (std::size_t r = layout.count_upto(c.order() - 1); r < layout.size(); ++r) s += std::abs(c.coeffs()[r]);
    worst = std::max(worst, s);
  }
  return worst;
}

double polydisc_radius(const SeriesField& f, double bound) {
  const double t = tail_norm(f);
  if (t == 0.0) return std::numeric_limits<double>::infinity();
  return std::pow(bound / t, 1.0 / f.order());
}

void SolveReport::merge(const SolveReport& o) {
  if (o.consistency > consistency) {
    consistency = o.consistency;
    worst_degree = o.worst_degree;
  }
  scale = std::max(scale, o.scale);
  for (std::size_t d = 0; d < o.spread_by_degree.size(); ++d) note(static_cast<int>(d), o.spread_by_degree[d]);
}

void SolveReport::note(int degree, double spread) {
  const auto d = static_cast<std::size_t>(degree);
  if (spread_by_degree.size() <= d) spread_by_degree.resize(d + 1, 0.0);
  spread_by_degree[d] = std::max(spread_by_degree[d], spread);
}

int SolveReport::first_degree_over(double threshold) const {
  for (std::size_t d = 0; d < spread_by_degree.size(); ++d)
    if (spread_by_degree[d] > threshold) return static_cast<int>(d);
  return -1;
}

FieldJets solve_series(const SeriesProblem& pb, SolveReport* report) {
  const int n = static_cast<int>(pb.base.size());
  const int order = pb.order;
  if (order < 1) throw std::invalid_argument("series order must be at least 1");
  FieldJets x;
  x.reserve(n);
  for (int i = 0; i < n; ++i) x.push_back(Jet::constant(pb.initial[i], n, order));
  const auto layout = JetLayout::get(n, order);
  SolveReport rep;

  for (int d = 0; d < order; ++d) {
    const JetTensor g = pb.rhs(x);  // g(i, j) = d_j X^i, order >= d
    for (int i = 0; i < n; ++i) {
      for (std::size_t r = layout->count_upto(d); r < layout->count_upto(d + 1); ++r) {
        auto alpha = layout->index(r);
        double first = 0.0;
        double lo = 0.0, hi = 0.0, mag = 0.0;
        bool any = false;
        for (int j = 0; j < n; ++j) {
          if (alpha[j] == 0 || !pb.has_equation(i, j)) continue;
          const auto below = static_cast<std::size_t>(layout->lower(r, j));
          const double cand = g(i, j).coeffs()[below] / alpha[j];
          if (!any) {
            first = lo = hi = cand;
            any = true;
          } else {
            lo = std::min(lo, cand);
            hi = std::max(hi, cand);
          }
          mag = std::max(mag, std::abs(cand));
        }
        double value = first;
        if (!any) {
          if (!pb.boundary) throw ConstructionError("series coefficient not determined by any equation");
          value = pb.boundary(i, r);
        }
        x[i].coeffs()[r] = value;
        rep.note(d + 1, hi - lo);
        if (hi - lo > rep.consistency) {
          rep.consistency = hi - lo;
          rep.worst_degree = d + 1;
        }
        rep.scale = std::max(rep.scale, mag);
      }
    }
  }
  if (report) report->merge(rep);
  return x;
}

}  // namespace fman
