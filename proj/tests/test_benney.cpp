#include <cmath>

#include <doctest.h>

#include "fman/benney.hpp"
#include "fman/compat.hpp"
#include "support.hpp"

using namespace fman;
using namespace fman::test;

namespace {

void check_close(const std::vector<double>& got, const nlohmann::json& want, double tol) {
  REQUIRE(got.size() == want.size());
  for (std::size_t k = 0; k < got.size(); ++k) CHECK(std::abs(got[k] - want[k].get<double>()) <= tol);
}

Twist log3_twist(const ManifoldSpec& spec) {
  Twist t;
  for (const char* phi : {"exp(r)", "1 + r^2", "2 + sin(r)"}) t.phi.push_back(parse(phi, {"r"}));
  return anchor_twist(*spec.lax, spec.box.center(), t);
}

}  // namespace

TEST_CASE("zakharov-2 reproduces the closed forms") {
  const ManifoldSpec spec = fixture("zakharov-2");
  for (const auto& u : points(spec, 16)) {
    const double s = std::sqrt(u[0]);
    const ReductionPoint red = reduce(*spec.lax, u, 1);
    CHECK(std::abs(red.v0[0] - (u[1] - s)) <= 1e-9);
    CHECK(std::abs(red.v0[1] - (u[1] + s)) <= 1e-9);
    CHECK(std::abs(red.r0[0] - (u[1] - 2 * s)) <= 1e-9);
    CHECK(std::abs(red.r0[1] - (u[1] + 2 * s)) <= 1e-9);
    const double w = (red.r0[1] - red.r0[0]) / 8;
    CHECK(std::abs(red.g(0, 0).value() + w) <= 1e-9);
    CHECK(std::abs(red.g(1, 1).value() - w) <= 1e-9);
    CHECK(std::abs(red.g(0, 1).value()) <= 1e-9);
    CHECK(lambda_pp_identity_residual(*spec.lax, red).value <= 1e-9);
    CHECK(std::abs(red.lambda_pp[1] - 2 / s) <= 1e-9);
  }
}

TEST_CASE("two-pole values against the independent oracle") {
  const auto& o = oracle()["two_pole"];
  const ManifoldSpec spec = fixture("zakharov-2");
  const std::vector<double> u = o["u"];
  const ReductionPoint red = reduce(*spec.lax, u, 1);
  check_close(critical_points(*spec.lax, u), o["critical_points"], 1e-12);
  check_close(red.r0, o["riemann_invariants"], 1e-12);
  check_close(red.y0, o["chart_point"], 1e-12);
  check_close(red.lambda_pp, o["lambda_pp"], 1e-11);
  check_close({red.g(0, 0).value(), red.g(1, 1).value()}, o["metric_diagonal"], 1e-12);
  const MomentSeries m = moments(*spec.lax, u, 4, 0);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(m.a[k].value() - o["moments"][k].get<double>()) <= 1e-14);
  const PointData pd = frame_data(spec, u);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) CHECK(std::abs(pd.gamma(i, j, k) - o["christoffel"][i][j][k].get<double>()) <= 1e-10);
}

TEST_CASE("log-3 values against the independent oracle") {
  const auto& o = oracle()["log3"];
  const ManifoldSpec spec = fixture("log-3");
  const std::vector<double> u = o["u"];
  const ReductionPoint red = reduce(*spec.lax, u, 1);
  check_close(red.v0, o["critical_points"], 1e-12);
  check_close(red.r0, o["riemann_invariants"], 1e-12);
  check_close(red.lambda_pp, o["lambda_pp"], 1e-10);
  const MomentSeries m = moments(*spec.lax, u, 4, 0);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(m.a[k].value() - o["moments"][k].get<double>()) <= 1e-14);
  CHECK(m.violation == 0.0);
}

TEST_CASE("closed-form moments agree with the Laurent expansion") {
  for (const char* name : {"zakharov-2", "log-3"}) {
    CAPTURE(name);
    const ManifoldSpec spec = fixture(name);
    for (const auto& u : points(spec, 4)) {
      const MomentSeries a = moments(*spec.lax, u, 5, 2), b = laurent_moments(*spec.lax, u, 5, 2);
      REQUIRE(a.a.size() == b.a.size());
      for (std::size_t k = 0; k < a.a.size(); ++k)
        for (std::size_t r = 0; r < a.a[k].coeffs().size(); ++r)
          CHECK(std::abs(a.a[k].coeffs()[r] - b.a[k].coeffs()[r]) <= 1e-12 * std::max(1.0, std::abs(a.a[k].coeffs()[r])));
    }
  }
}

TEST_CASE("custom families expand at infinity") {
  const std::vector<std::string> coords{"u1", "u2"};
  const LaxFamily f = LaxFamily::custom(parse("p + u1/(p - u2)", coords, true));
  const std::vector<double> u{0.3, 0.2};
  const MomentSeries m = moments(f, u, 4, 1);
  const auto& o = oracle()["two_pole"]["moments"];
  for (int k = 0; k < 4; ++k) CHECK(std::abs(m.a[k].value() - o[k].get<double>()) <= 1e-14);
  CHECK(m.a[1].d(1) == doctest::Approx(0.3));
  CHECK(m.violation == 0.0);

  const LaxFamily bad = LaxFamily::custom(parse("p + u1*p^2/(p - u2)", coords, true));
  const MomentSeries mb = laurent_moments(bad, u, 3, 0);
  CHECK(mb.violation > 0.1);
  CHECK_FALSE(mb.offending.empty());
}

TEST_CASE("Loewner, Gibbons-Tsarev and moment-chain identities") {
  for (const char* name : {"zakharov-2", "log-3"}) {
    CAPTURE(name);
    const ManifoldSpec spec = fixture(name);
    for (const auto& u : points(spec, 8)) {
      const ReductionPoint red = reduce(*spec.lax, u, 2);
      CHECK(loewner_residual(*spec.lax, red, loewner_probe(*spec.lax, red)).value <= 1e-8);
      const GibbonsTsarev gt = gibbons_tsarev_residual(*spec.lax, red);
      CHECK(gt.velocities.value <= 1e-8);
      CHECK(gt.potential.value <= 1e-8);
      CHECK(moment_chain_residual(*spec.lax, red, 3).value <= 1e-8);
      CHECK(lambda_pp_identity_residual(*spec.lax, red).value <= 1e-9);
      CHECK(residue_diagonal_residual(*spec.lax, red).value <= 1e-9);
      CHECK(chart_coherence_residual(*spec.lax, red).within(Tolerance{1e-9, 1e-9}));
    }
  }
}

TEST_CASE("the logarithmic residue metric is flat") {
  const ManifoldSpec spec = fixture("log-3");
  for (const auto& u : points(spec, 8)) CHECK(flatness_residual(frame_data(spec, u)).value <= 1e-10);
}

TEST_CASE("the twisted pairing on log-3 is curved but keeps the semi-Hamiltonian condition") {
  const ManifoldSpec spec = fixture("log-3");
  const Twist twist = log3_twist(spec);
  for (int i = 0; i < 3; ++i) CHECK(twist_chart(twist, i, twist.anchor[i]) == twist.anchor[i]);
  CHECK(twist_chart(twist, 1, twist.anchor[1] + 0.5) ==
        doctest::Approx(twist.anchor[1] + 0.5 + (std::pow(twist.anchor[1] + 0.5, 3) - std::pow(twist.anchor[1], 3)) / 3));

  const ReductionStructure s(*spec.lax, spec.box, twist);
  double rmax = 0.0;
  for (const auto& u : points(spec, 8)) {
    const PointData pd = point_data_at(s, u, 2);
    rmax = std::max(rmax, flatness_residual(pd).value);
    CHECK(curvature_obstruction_residual(pd).within(Tolerance{1e-9, 1e-9}));
    const TsarevCompatibility t = tsarev_compatibility_residual(pd);
    CHECK(t.first.within(Tolerance{1e-9, 1e-9}));
    CHECK(t.second.within(Tolerance{1e-9, 1e-9}));
    const ReductionPoint red = reduce(*spec.lax, u, 1, twist);
    CHECK(residue_diagonal_residual(*spec.lax, red).value <= 1e-9);
    CHECK(chart_coherence_residual(*spec.lax, red, twist).within(Tolerance{1e-9, 1e-9}));
  }
  CHECK(rmax > 1e-4);
}

TEST_CASE("twisted charts need an anchor") {
  Twist t;
  t.phi.push_back(parse("exp(r)", {"r"}));
  CHECK_THROWS_AS(twist_chart(t, 0, 0.5), std::logic_error);
}

TEST_CASE("a box without real critical points is reported") {
  const ManifoldSpec spec = fixture("zakharov-2");
  const std::vector<double> u{-0.2, 0.0};
  CHECK_THROWS_AS(critical_points(*spec.lax, u), ConstructionError);
}

TEST_CASE("lambda derivatives in p") {
  const ManifoldSpec spec = fixture("zakharov-2");
  const std::vector<double> u{0.3, 0.2};
  const std::vector<double> d = lambda_p_derivatives(*spec.lax, u, 1.2, 3);
  CHECK(d[0] == doctest::Approx(1.2 + 0.3 / 1.0));
  CHECK(d[1] == doctest::Approx(1 - 0.3));
  CHECK(d[2] == doctest::Approx(0.6));
  CHECK(d[3] == doctest::Approx(-1.8));
}
