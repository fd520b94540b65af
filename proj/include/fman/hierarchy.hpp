#pragma once

#include <span>
#include <vector>

#include "fman/geometry.hpp"
#include "fman/series.hpp"

namespace fman {

// Jets of c and Gamma at the series base point, order K-1.
struct SeriesContext {
  std::vector<double> base;
  int order = 8;  // K
  JetTensor c;
  JetTensor gamma;
};

// Solution of nabla X = 0 with X(base) = e_p.
SeriesField flat_field(const SeriesContext& ctx, int p, SolveReport* report = nullptr);
std::vector<SeriesField> flat_basis(const SeriesContext& ctx, SolveReport* report = nullptr);

// Solution of d_j X^i = -Gamma^i_{jk} X^k + c^i_{kj} Xprev^k with X(base) = const_term.
SeriesField raise_level(const SeriesContext& ctx, const SeriesField& prev, std::span<const double> const_term,
                        SolveReport* report = nullptr);

struct CompatibilityBrackets {
  Residual curvature;      // d_m G^i_{jl} - d_j G^i_{ml} - G^i_{jk} G^k_{ml} + G^i_{mk} G^k_{jl}
  Residual mixed;          // d_m c^i_{jl} - d_j c^i_{ml} - G^i_{kj} c^k_{ml} - G^k_{lm} c^i_{jk} + G^i_{km} c^k_{jl} + G^k_{lj} c^i_{mk}
  Residual associativity;  // c^i_{jk} c^k_{ml} - c^i_{mk} c^k_{jl}
};
CompatibilityBrackets compatibility_residual(const PointData& pd);

struct Hierarchy {
  // fields[p][alpha], p from 0
  std::vector<std::vector<SeriesField>> fields;
  SolveReport report;
  double radius = 0.0;  // verification polydisc
};

// Consistency beyond `consistency_tol` (relative to the coefficient scale)
// raises ConstructionError naming the obstruction degree.
Hierarchy build_hierarchy(const SeriesContext& ctx, int p_max, int alpha_max, double consistency_tol = 1e-10);

// d_j X^i + Gamma^i_{jk} X^k - c^i_{kj} Xprev^k (prev may be null for flat fields).
Residual recursion_residual(const PointData& pd, const VectorAtPoint& x, const VectorAtPoint* prev);

// With X(z) = sum_a (-z)^a X_a over the given levels, the deformed connection
// Gamma + z c satisfies nabla~ X(z) = -(-z)^(A+1) c X_A; returns the residual of
// that identity.
Residual deformed_parallel_residual(const PointData& pd, std::span<const VectorAtPoint> levels, double z);

}  // namespace fman
