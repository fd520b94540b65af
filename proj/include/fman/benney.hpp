#pragma once

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fman/algebra.hpp"
#include "fman/expr.hpp"
#include "fman/geometry.hpp"
#include "fman/residual.hpp"

namespace fman {

enum class LaxKind { rational, logarithmic, custom };

// One pole a/(p - b) or one branch eps * ln|p - b|.
struct LaxTerm {
  FieldExpr weight;
  FieldExpr position;
};

// lambda(p, u) with lambda - p = O(1/p) at infinity.
class LaxFamily {
 public:
  static LaxFamily rational(std::vector<std::string> coords, std::vector<LaxTerm> poles);
  // Weights must be constants summing to zero.
  static LaxFamily logarithmic(std::vector<std::string> coords, std::vector<LaxTerm> branches);
  // `lambda` is parsed with p allowed; brackets are search intervals for the
  // critical points (empty: scan the whole real line).
  static LaxFamily custom(FieldExpr lambda, std::vector<std::pair<double, double>> brackets = {});

  LaxKind kind() const { return kind_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const { return coords_; }
  const FieldExpr& lambda() const { return lambda_; }
  const std::vector<LaxTerm>& terms() const { return terms_; }
  const std::vector<std::pair<double, double>>& brackets() const { return brackets_; }

  // Positions of poles or branch points at u.
  std::vector<double> singularities(std::span<const double> u) const;

 private:
  LaxKind kind_ = LaxKind::custom;
  std::vector<std::string> coords_;
  FieldExpr lambda_;
  std::vector<LaxTerm> terms_;
  std::vector<std::pair<double, double>> brackets_;
};

struct MomentSeries {
  std::vector<Jet> a;           // A^0 .. A^M as jets in u
  double violation = 0.0;       // largest |coefficient| of p^k, k >= 0, or of ln p
  std::string offending;        // that coefficient's name, empty when none
};

// Laurent coefficients of lambda - p at p = infinity as jets in u of the
// given order. Rational and logarithmic kinds use the closed forms; custom
// families expand in w = 1/p.
MomentSeries moments(const LaxFamily& family, std::span<const double> u0, int count, int order);
// Expansion in w for any family (the closed forms are cross-checked against it).
MomentSeries laurent_moments(const LaxFamily& family, std::span<const double> u0, int count, int order);

// Jet of lambda in (u, p) at (u0, p0).
Jet lambda_jet(const LaxFamily& family, std::span<const double> u0, double p0, int order);
// d^k lambda / dp^k at (u0, p0) for k = 0..order.
std::vector<double> lambda_p_derivatives(const LaxFamily& family, std::span<const double> u0, double p0, int order);

// Simple real zeros of lambda_p, ascending. ConstructionError unless exactly
// `expected` roots are found (expected = dim) or two are closer than 1e-8.
std::vector<double> critical_points(const LaxFamily& family, std::span<const double> u0);

// phi_i(r) for the weighted residue pairing; empty means phi = 1. The
// twisted chart is y_i = Phi_i(r^i) with Phi_i' = phi_i and
// Phi_i(anchor_i) = anchor_i, the same for every point.
struct Twist {
  std::vector<FieldExpr> phi;  // each over the single coordinate "r"
  std::vector<double> anchor;  // Riemann invariants at a reference point
  bool active() const { return !phi.empty(); }
};

// Everything at one point u0 of the reduction. The target chart is the
// Riemann-invariant chart r, or y = Phi(r) when twisted (the twist must be
// anchored). Jets in the target chart have order `order`.
struct ReductionPoint {
  std::vector<double> u0, v0, r0, y0;
  std::vector<double> lambda_pp;  // lambda_pp(v^i) at u0
  Values jacobian;                // dr^i/du^j
  FieldJets v_u, r_u;             // jets in u
  FieldJets u_y;                  // u as jets in the target chart
  FieldJets v_y;                  // velocities in the target chart
  JetTensor g;                    // residue metric in the target chart, order + 1
  JetTensor c_lower;              // residue cubic form, order + 1
  JetTensor c;                    // c^a_{bc} = g^{ad} c_{dbc}, order
};

ReductionPoint reduce(const LaxFamily& family, std::span<const double> u0, int order, const Twist& twist = {});

// Sets twist.anchor to the Riemann invariants at u_ref.
Twist anchor_twist(const LaxFamily& family, std::span<const double> u_ref, Twist twist);
// Phi_i(r) by quadrature from the anchor.
double twist_chart(const Twist& twist, int i, double r);

// Residue metric and cubic form directly in the u chart (values).
std::pair<Values, Values> residue_tensors_u(const LaxFamily& family, std::span<const double> u0,
                                           const Twist& twist = {});

// Pointwise checks on an untwisted reduction (target chart r).
Residual loewner_residual(const LaxFamily& family, const ReductionPoint& red, double p0);
struct GibbonsTsarev {
  Residual velocities;  // d_i v^j - d_i A0/(v^i - v^j)
  Residual potential;   // d_ij A0 - 2 d_i A0 d_j A0/(v^i - v^j)^2
};
GibbonsTsarev gibbons_tsarev_residual(const LaxFamily& family, const ReductionPoint& red);
// lambda_pp(v^i) d_i A0 - 1
Residual lambda_pp_identity_residual(const LaxFamily& family, const ReductionPoint& red);
// d_i A^k v^i - d_i A^{k+1} - k A^{k-1} d_i A^0 for k <= m
Residual moment_chain_residual(const LaxFamily& family, const ReductionPoint& red, int m);
// g_ij - delta_ij d_i A0 (weighted by phi_i when twisted)
Residual residue_diagonal_residual(const LaxFamily& family, const ReductionPoint& red);
// Residue tensors in u pulled to the target chart against the direct ones.
Residual chart_coherence_residual(const LaxFamily& family, const ReductionPoint& red, const Twist& twist = {});

// Moments of the reduction as jets in the target chart.
FieldJets moments_in_chart(const LaxFamily& family, const ReductionPoint& red, int count);

// A p0 away from singularities and critical points (used by the Loewner check).
double loewner_probe(const LaxFamily& family, const ReductionPoint& red);

}  // namespace fman
