#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fman/residual.hpp"
#include "fman/tensor.hpp"

namespace fman {

// Jets of the structure tensors at one point of one chart.
struct LocalFrame {
  std::vector<double> point;
  JetTensor c;                      // c^i_{jk}
  std::optional<JetTensor> metric;  // g_{ij}
  JetTensor connection;             // Gamma^i_{jk}; nabla_j X^i = d_j X^i + Gamma^i_{jk} X^k
};

// Numeric values and derivatives at the point of a LocalFrame. Derivative
// indices are appended last: dc(i,j,k,m) = d_m c^i_{jk}.
struct PointData {
  int n = 0;
  std::vector<double> point;
  Values c, dc;
  Values gamma, dgamma;
  Values riemann;        // R(i,l,m,j) = R^i_{lmj}
  Values riemann_scale;  // largest summand of each component
  std::optional<Values> g, dg, ginv;
};

PointData point_data(const LocalFrame& frame);

// Value and gradient of a vector field; dv(i,m) = d_m X^i.
struct VectorAtPoint {
  Values v;
  Values dv;
};

VectorAtPoint vector_at(std::span<const Jet> components);
VectorAtPoint constant_vector(std::span<const double> v);

// Levi-Civita connection at jet level (one order lower than g).
JetTensor christoffel_from_metric(const JetTensor& g);
// Pointwise Levi-Civita symbols from g and its gradient dg(i,j,m).
Values christoffel(const Values& g, const Values& dg);

// R^i_{lmj} = d_m G^i_{jl} - d_j G^i_{ml} + G^i_{mk} G^k_{jl} - G^i_{jk} G^k_{ml}
Values riemann(const Values& gamma, const Values& dgamma, Values* scale = nullptr);

// Curvature of Gamma + z c.
Values deformed_curvature(const PointData& pd, double z, Values* scale = nullptr);

// nabla of a tensor with `upper` contravariant indices first then `lower`
// covariant ones; t has rank upper+lower, dt the derivative index last.
// Supported valences: (1,2), (1,1), (1,0), (0,2). Result has the derivative
// index last.
Values covariant_derivative(const Values& t, const Values& dt, const Values& gamma, int upper, int lower);

// (Lie_X c)^i_{jk} = X^m d_m c^i_{jk} - c^m_{jk} d_m X^i + c^i_{mk} d_j X^m + c^i_{jm} d_k X^m
Values lie_derivative_c(const VectorAtPoint& x, const Values& c, const Values& dc, Values* scale = nullptr);

// Lie bracket [X, Y]^i = X^m d_m Y^i - Y^m d_m X^i (value only).
Values lie_bracket(const VectorAtPoint& x, const VectorAtPoint& y);

// T^i_{jk} = Gamma^i_{jk} - Gamma^i_{kj}
Values torsion(const Values& gamma);

Residual torsion_residual(const Values& gamma);
// R^k_{lmi} + R^k_{lim}
Residual curvature_antisymmetry_residual(const PointData& pd);
Residual flatness_residual(const PointData& pd);
// max |R(z) - R(0)| over the given z values.
Residual deformed_curvature_spread(const PointData& pd, std::span<const double> zs);
// nabla_m g_{ij}
Residual metricity_residual(const PointData& pd);
// nabla_l c^i_{jk} - nabla_j c^i_{lk}
Residual symmetric_nabla_c_residual(const PointData& pd);

}  // namespace fman
