#pragma once

#include <span>
#include <vector>

#include "fman/geometry.hpp"
#include "fman/residual.hpp"
#include "fman/tensor.hpp"

namespace fman {

// Vector field given by component jets sharing one layout.
using FieldJets = std::vector<Jet>;

// (X o Y)^i = c^i_{jk} X^j Y^k
std::vector<double> product(const Values& c, std::span<const double> x, std::span<const double> y);
FieldJets product(const JetTensor& c, const FieldJets& x, const FieldJets& y);
// [X, Y] at the expansion point.
std::vector<double> bracket(const FieldJets& x, const FieldJets& y);

// c^i_{jk} - c^i_{kj}
Residual commutativity_residual(const Values& c);
// c^m_{jk} c^i_{ml} - c^m_{kl} c^i_{jm}
Residual associativity_residual(const Values& c);

// Six-term Hertling-Manin expression, indexed hm(k, i, j, l, m):
// (d_s c^k_{jl}) c^s_{im} + (d_j c^s_{im}) c^k_{sl} - (d_s c^k_{im}) c^s_{jl}
//   - (d_i c^s_{jl}) c^k_{sm} + (d_l c^s_{im}) c^k_{sj} - (d_m c^s_{jl}) c^k_{is}
// This is the nine-term vector form at (X, Y, Z, W) = (e_i, e_m, e_j, e_l).
Values hertling_manin_tensor(const Values& c, const Values& dc, Values* scale = nullptr);
Residual hertling_manin_residual(const Values& c, const Values& dc);

// Nine-term vector form of the Hertling-Manin condition for fields X, Y, Z, W.
std::vector<double> hertling_manin_fields(const JetTensor& c, const FieldJets& x, const FieldJets& y,
                                          const FieldJets& z, const FieldJets& w);
// The vector form evaluated at X = Z against the six-term tensor contracted
// with the same fields.
Residual polarization_residual(const JetTensor& c, const FieldJets& x, const FieldJets& y, const FieldJets& w);

// (V_Z)^i_j = c^i_{jk} Z^k and its gradient dV(i,j,m).
Values structure_operator(const Values& c, std::span<const double> z);
Values structure_operator_gradient(const Values& c, const Values& dc, const VectorAtPoint& z);

// Nijenhuis tensor N(i,j,k) = N_V(e_j, e_k)^i of a (1,1) field with gradient dV(i,j,m).
Values nijenhuis_tensor(const Values& v, const Values& dv, Values* scale = nullptr);
// Haantjes tensor H(i,j,k) = H_V(e_j, e_k)^i.
Values haantjes_tensor(const Values& v, const Values& dv, Values* scale = nullptr);
std::vector<double> nijenhuis(const Values& v, const Values& dv, std::span<const double> x, std::span<const double> y);
std::vector<double> haantjes(const Values& v, const Values& dv, std::span<const double> x, std::span<const double> y);
Residual haantjes_residual(const Values& v, const Values& dv);

struct DiagonalCheck {
  std::vector<double> f;   // c^i_{ii}
  Residual pattern;        // off-pattern components
  Residual dependence;     // d_j f_i, j != i
  bool dependence_tested = false;  // false when some f_i vanishes
};

// c^i_{jk} = f_i delta^i_j delta^i_k with f_i depending on r^i only.
DiagonalCheck diagonal_structure_check(const Values& c, const Values& dc);

// e^i = 1/f_i; DomainError when some f_i vanishes.
std::vector<double> unity_from_diagonal(std::span<const double> f);

// Unity as jets, from the normal equations of c^i_{jk} e^k = delta^i_j.
FieldJets unity_jets(const JetTensor& c);
// c^i_{jk} e^k - delta^i_j
Residual unity_residual(const Values& c, std::span<const double> e);

// Smallest pairwise distance between eigenvalues of V; 0 if any is complex.
double min_eigen_gap(const Values& v);
std::vector<double> real_eigenvalues(const Values& v);

}  // namespace fman
