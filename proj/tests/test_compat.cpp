#include <cmath>

#include <doctest.h>

#include "fman/benney.hpp"
#include "fman/compat.hpp"
#include "scenarios.hpp"
#include "support.hpp"

using namespace fman;
using namespace fman::test;

namespace {

const Tolerance kDefault{1e-9, 1e-9};

struct LadderVerdicts {
  bool shc = true, shprop = true, bianchi = true;
};

LadderVerdicts ladder(const ManifoldSpec& spec, int count) {
  LadderVerdicts v;
  for (const auto& x : points(spec, count)) {
    const PointData pd = frame_data(spec, x);
    v.shc = v.shc && curvature_obstruction_residual(pd).within(kDefault);
    const TsarevCompatibility t = tsarev_compatibility_residual(pd);
    v.shprop = v.shprop && t.first.within(kDefault) && t.second.within(kDefault);
    v.bianchi = v.bianchi && bianchi_form_residual(pd).within(kDefault);
  }
  return v;
}

}  // namespace

TEST_CASE("Egorov metrics of random potentials fail all three formulations together") {
  Rng rng(2024);
  for (int k = 0; k < 20; ++k) {
    const ManifoldSpec spec = egorov_counter_fixture(rng, k);
    CAPTURE(spec.name);
    for (const auto& x : points(spec, 3)) {
      const PointData pd = frame_data(spec, x);
      const EgorovCheck e = egorov_check(*pd.g, *pd.dg);
      CHECK(e.off_diagonal.value == 0.0);
      CHECK(e.closure.within(kDefault));
      CHECK(invariance_residual(*pd.g, pd.c).covariant.within(kDefault));
    }
    const LadderVerdicts v = ladder(spec, 6);
    CHECK_FALSE(v.shc);
    CHECK(v.shc == v.shprop);
    CHECK(v.shc == v.bianchi);
  }
}

TEST_CASE("the ladder passes on the reductions and on flat canonical metrics") {
  for (const char* name : {"zakharov-2", "log-3", "canonical-trivial"}) {
    CAPTURE(name);
    const LadderVerdicts v = ladder(fixture(name), 8);
    CHECK(v.shc);
    CHECK(v.shprop);
    CHECK(v.bianchi);
  }
}

TEST_CASE("canonical connection identities and curvature components on log-3") {
  const ManifoldSpec spec = fixture("log-3");
  for (const auto& u : points(spec, 6)) {
    const PointData pd = frame_data(spec, u);
    const CanonicalIdentities ci = canonical_connection_identities(pd.gamma);
    CHECK(ci.repeated.within(kDefault));
    CHECK(ci.distinct.within(kDefault));
    const CurvatureComponents cc = canonical_curvature_components(pd);
    CHECK(cc.trace_like.within(kDefault));
    CHECK(cc.repeated.within(kDefault));
    const EgorovCheck e = egorov_check(*pd.g, *pd.dg);
    CHECK(e.off_diagonal.within(kDefault));
    CHECK(e.closure.within(kDefault));
  }
}

TEST_CASE("Tsarev solutions from random boundary data on zakharov-2") {
  const ManifoldSpec spec = fixture("zakharov-2");
  const auto structure = spec.structure();
  const std::vector<double> center = spec.box.center();
  const int K = 8;
  const LocalFrame f = structure->frame(center, K - 1);
  Rng rng(31);
  std::vector<SeriesField> sols;
  double radius = 0.1;
  for (int draw = 0; draw < 3; ++draw) {
    SolveReport rep;
    sols.push_back(tsarev_solve(f.connection, f.point, random_boundary(rng, 2, K), K, &rep));
    CHECK(rep.consistency <= 1e-8 * std::max(1.0, rep.scale));
    radius = std::min(radius, polydisc_radius(sols.back()));
  }
  REQUIRE(radius > 0.0);
  int tested = 0;
  for (int k = 0; k < 24; ++k) {
    const std::vector<double> u{center[0] + rng.uniform(-0.02, 0.02), center[1] + rng.uniform(-0.05, 0.05)};
    const std::vector<double> r = structure->chart_point(u);
    if (std::abs(r[0] - f.point[0]) > radius || std::abs(r[1] - f.point[1]) > radius) continue;
    ++tested;
    const PointData pd = frame_data(spec, u);
    std::vector<VectorAtPoint> vs;
    for (const auto& s : sols) {
      vs.push_back(evaluate(s, r));
      CHECK(tsarev_system_residual(pd, vs.back()).within(Tolerance{1e-8, 1e-8}));
      CHECK(admissible_residual(pd, vs.back()).within(Tolerance{1e-8, 1e-8}));
      CHECK(semi_hamiltonian_residual(reexpand(s, r, 2)).within(Tolerance{1e-7, 1e-7}));
    }
    for (std::size_t a = 0; a < vs.size(); ++a)
      for (std::size_t b = a + 1; b < vs.size(); ++b)
        CHECK(sufficient_condition_residual(pd.c, pd.dc, vs[a], vs[b]).within(Tolerance{1e-8, 1e-8}));
  }
  CHECK(tested >= 5);
}

TEST_CASE("Tsarev solve recovers the reduction's own velocities on zakharov-2") {
  const ManifoldSpec spec = fixture("zakharov-2");
  const auto structure = spec.structure();
  const std::vector<double> center = spec.box.center();
  const int K = 10;
  const ReductionPoint red = reduce(*spec.lax, center, K);
  const LocalFrame f = structure->frame(center, K - 1);
  std::vector<std::vector<double>> boundary(2);
  for (int i = 0; i < 2; ++i)
    for (int d = 0; d <= K; ++d) {
      std::vector<int> alpha(2, 0);
      alpha[i] = d;
      boundary[i].push_back(red.v_y[i].coeff(alpha));
    }
  const SeriesField sol = tsarev_solve(f.connection, f.point, boundary, K);
  const double radius = polydisc_radius(sol);
  Rng rng(5);
  int tested = 0;
  for (int k = 0; k < 24; ++k) {
    const std::vector<double> u{center[0] + rng.uniform(-0.02, 0.02), center[1] + rng.uniform(-0.05, 0.05)};
    const ReductionPoint at = reduce(*spec.lax, u, 0);
    if (std::abs(at.r0[0] - f.point[0]) > radius || std::abs(at.r0[1] - f.point[1]) > radius) continue;
    ++tested;
    const VectorAtPoint v = evaluate(sol, at.r0);
    for (int i = 0; i < 2; ++i) CHECK(std::abs(v.v(i) - at.v0[i]) <= 1e-7);
  }
  CHECK(tested >= 5);
}

TEST_CASE("semi-Hamiltonian velocities need distinct values") {
  FieldJets v;
  const std::vector<double> x{0, 0};
  v.push_back(Jet::variable(0, x, 2));
  v.push_back(Jet::variable(0, x, 2));
  CHECK_THROWS_AS(semi_hamiltonian_residual(v), DomainError);
}
