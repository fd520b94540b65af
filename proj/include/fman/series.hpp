#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "fman/algebra.hpp"
#include "fman/geometry.hpp"

namespace fman {

// Vector field as truncated power series around a base point. Component jets
// have order K and are read as polynomials in (x - base).
struct SeriesField {
  std::string label;
  std::vector<double> base;
  FieldJets comp;

  int order() const { return comp.front().order(); }
  int dim() const { return static_cast<int>(comp.size()); }
};

// Value and first derivatives of the polynomials at x.
VectorAtPoint evaluate(const SeriesField& f, std::span<const double> x);
// Polynomials re-expanded at x as jets of the given order.
FieldJets reexpand(const SeriesField& f, std::span<const double> x, int order);

// Largest over components of the sum of |coefficients| of top degree.
double tail_norm(const SeriesField& f);
// Radius where tail_norm * radius^K stays below `bound`; infinite when the
// top-degree part vanishes.
double polydisc_radius(const SeriesField& f, double bound = 1e-10);

struct SolveReport {
  double consistency = 0.0;  // largest disagreement between equations for one coefficient
  double scale = 0.0;
  int worst_degree = -1;
  std::vector<double> spread_by_degree;  // indexed by coefficient degree
  void merge(const SolveReport& o);
  void note(int degree, double spread);
  // Lowest degree whose spread exceeds threshold, or -1.
  int first_degree_over(double threshold) const;
};

// rhs(x, i, j) returns the jet of d_j X^i as a function of the current
// iterate x (only its coefficients of degree <= d are read at step d).
// has_equation(i, j) selects the available equations; boundary(i, alpha_rank)
// supplies the coefficients no equation reaches.
struct SeriesProblem {
  std::vector<double> base;
  int order = 8;
  std::vector<double> initial;
  std::function<JetTensor(const FieldJets&)> rhs;  // rhs(i, j)
  std::function<bool(int, int)> has_equation = [](int, int) { return true; };
  std::function<double(int, std::size_t)> boundary;
};

FieldJets solve_series(const SeriesProblem& problem, SolveReport* report);

}  // namespace fman
