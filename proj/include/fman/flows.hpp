#pragma once

#include <span>
#include <vector>

#include "fman/algebra.hpp"
#include "fman/geometry.hpp"
#include "fman/residual.hpp"

namespace fman {

// Second-order jet of a field u(x) at one x.
struct JetState {
  std::vector<double> u;
  std::vector<double> ux;
  std::vector<double> uxx;
};

// u_t = V_X u_x
std::vector<double> flow_rhs(const Values& vx, std::span<const double> ux);

// Q^i_p = (Lie_X c)^i_{pq} Y^q - (Lie_Y c)^i_{pq} X^q + c^i_{pq} [X,Y]^q
Values commutation_form(const Values& c, const Values& dc, const VectorAtPoint& x, const VectorAtPoint& y,
                        Values* scale = nullptr);
Residual sufficient_condition_residual(const Values& c, const Values& dc, const VectorAtPoint& x,
                                       const VectorAtPoint& y);
// Lie_X V_Y - Lie_Y V_X - V_[X,Y] as a (1,1) array.
Values sufficient_operator_form(const Values& c, const Values& dc, const VectorAtPoint& x, const VectorAtPoint& y);
// Difference between the two forms of the sufficient condition.
Residual sufficient_forms_agreement(const Values& c, const Values& dc, const VectorAtPoint& x, const VectorAtPoint& y);

// c^r_{is} Q^i_j + c^r_{ij} Q^i_s over all basis pairs (e_j, e_s).
Residual iff_commutativity_residual(const Values& c, const Values& dc, const VectorAtPoint& x,
                                    const VectorAtPoint& y);
// The same identity for test vectors Z, W; Z = W gives the single-vector form.
Residual iff_commutativity_residual(const Values& c, const Values& dc, const VectorAtPoint& x,
                                    const VectorAtPoint& y, std::span<const double> z, std::span<const double> w);

// V_X V_Y - V_Y V_X
Residual operator_commutator_residual(const Values& vx, const Values& vy);

// d_tau(V_X u_x) - d_t(V_Y u_x) expanded on the jet (u, u_x, u_xx) by the chain
// rule, with u_t = V_X u_x and u_tau = V_Y u_x. Point data must be taken at s.u.
std::vector<double> oracle_flow_commutator(const Values& c, const Values& dc, const VectorAtPoint& x,
                                           const VectorAtPoint& y, const JetState& s, double* scale = nullptr);
Residual oracle_residual(const Values& c, const Values& dc, const VectorAtPoint& x, const VectorAtPoint& y,
                         const JetState& s);

// [Z o X, Y] + [X, Z o Y] - [X, Z] o Y - [X, Y] o Z - X o [Z, Y] against
// (Lie_X c)(Y, Z) - (Lie_Y c)(X, Z) + [X, Y] o Z, for jet fields.
Residual bracket_identity_residual(const JetTensor& c, const FieldJets& x, const FieldJets& y, const FieldJets& z);

}  // namespace fman
