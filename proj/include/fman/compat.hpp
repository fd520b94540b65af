#pragma once

#include <span>
#include <vector>

#include "fman/algebra.hpp"
#include "fman/geometry.hpp"
#include "fman/series.hpp"

namespace fman {

// c^i_{jm} nabla_k X^m - c^i_{km} nabla_j X^m
Residual admissible_residual(const PointData& pd, const VectorAtPoint& x);

// R^k_{lmi} c^n_{pk} + R^k_{lip} c^n_{mk} + R^k_{lpm} c^n_{ik}
Residual curvature_obstruction_residual(const PointData& pd);
// Z o R(W,Y)(X) + W o R(Y,Z)(X) + Y o R(Z,W)(X) over basis triples.
Residual vectorwise_obstruction_residual(const PointData& pd, std::span<const double> x);
// R(Y,Z)(X o W) + R(X,Y)(Z o W) + R(Z,X)(Y o W) over basis quadruples.
Residual bianchi_form_residual(const PointData& pd);
// R^n_{nmi} and R^n_{mmi} for pairwise distinct n, m, i.
struct CurvatureComponents {
  Residual trace_like;  // R^n_{nmi}
  Residual repeated;    // R^n_{mmi}
};
CurvatureComponents canonical_curvature_components(const PointData& pd);

struct CanonicalIdentities {
  Residual repeated;  // Gamma^i_{kk} + Gamma^i_{ki}, i != k
  Residual distinct;  // Gamma^i_{kl}, i, k, l pairwise distinct
};
CanonicalIdentities canonical_connection_identities(const Values& gamma);

// coeff(i, k) = Gamma^i_{ki} for i != k, zero on the diagonal.
Values tsarev_coefficients(const Values& gamma);

struct TsarevCompatibility {
  Residual first;   // d_i G^k_{mk} - d_m G^k_{ik}
  Residual second;  // d_i G^k_{km} - G^k_{km} G^m_{im} + G^k_{ik} G^k_{km} - G^k_{ik} G^i_{im}
};
TsarevCompatibility tsarev_compatibility_residual(const PointData& pd);

// d_k v^i - Gamma^i_{ki} (v^k - v^i), i != k
Residual tsarev_system_residual(const PointData& pd, const VectorAtPoint& v);

// Velocities around `base` from boundary polynomials: boundary[i][d] is the
// coefficient of (r^i - base^i)^d on the i-th coordinate line. gamma holds
// jets at base of order >= K-1.
SeriesField tsarev_solve(const JetTensor& gamma, std::span<const double> base,
                         const std::vector<std::vector<double>>& boundary, int order, SolveReport* report = nullptr);

// d_k(d_j v^i/(v^j - v^i)) - d_j(d_k v^i/(v^k - v^i)) over distinct triples.
// v needs jets of order >= 2. DomainError when two velocities are closer than
// min_gap.
Residual semi_hamiltonian_residual(const FieldJets& v, double min_gap = 1e-6);
double min_velocity_gap(std::span<const double> v);

struct InvarianceResidual {
  Residual covariant;      // g_{iq} c^q_{lp} - g_{lq} c^q_{ip}
  Residual contravariant;  // g^{iq} c^l_{qp} - g^{lq} c^i_{qp}
};
InvarianceResidual invariance_residual(const Values& g, const Values& c);

struct EgorovCheck {
  Residual off_diagonal;
  Residual closure;  // d_j g_ii - d_i g_jj
};
EgorovCheck egorov_check(const Values& g, const Values& dg);

struct ExpansionTerm {
  double sign = 1.0;
  std::vector<double> x;
};

struct QuadraticExpansionCheck {
  Residual pairing_first;   // g^{sl} R^k_{lmi} against the expansion
  Residual pairing_second;  // g^{kl} R^s_{lmi} against the expansion
  Residual cyclic;          // obstruction sum applied to the expansion
};
// Expansion E^{sk}_{mi} = (c^s_{ml} c^k_{iq} - c^s_{il} c^k_{mq}) sum eps X^l X^q.
Values quadratic_expansion(const Values& c, std::span<const ExpansionTerm> family);
Residual quadratic_expansion_cyclic(const Values& c, std::span<const ExpansionTerm> family);
// Needs pd.ginv.
QuadraticExpansionCheck quadratic_expansion_check(const PointData& pd, std::span<const ExpansionTerm> family);

}  // namespace fman
