#include <doctest.h>

#include "fman/flows.hpp"
#include "support.hpp"

using namespace fman;
using namespace fman::test;

namespace {

const Tolerance kVerdict{1e-12, 1e-8};

struct Verdicts {
  bool iff = true;
  bool oracle = true;
  bool sufficient = true;
};

Verdicts verdicts(const ManifoldSpec& spec, const std::vector<std::string>& x, const std::vector<std::string>& y,
                  std::uint64_t seed) {
  Verdicts v;
  Rng rng(seed);
  for (const auto& u : points(spec, 6, seed)) {
    const PointData pd = frame_data(spec, u, 1);
    const VectorAtPoint xa = vector_at(field_jets(spec, x, u)), ya = vector_at(field_jets(spec, y, u));
    v.iff = v.iff && iff_commutativity_residual(pd.c, pd.dc, xa, ya).within(kVerdict);
    v.sufficient = v.sufficient && sufficient_condition_residual(pd.c, pd.dc, xa, ya).within(kVerdict);
    for (int s = 0; s < 3; ++s) v.oracle = v.oracle && oracle_residual(pd.c, pd.dc, xa, ya, random_jet_state(u, rng)).within(kVerdict);
  }
  return v;
}

}  // namespace

TEST_CASE("the unity flow is translation") {
  const ManifoldSpec spec = fixture("canonical-trivial");
  const PointData pd = frame_data(spec, std::vector<double>{1, 2, 3});
  const std::vector<double> ux{0.3, -1.2, 4.0};
  const std::vector<double> e{1, 1, 1};
  CHECK(flow_rhs(structure_operator(pd.c, e), ux) == ux);
  const std::vector<double> x{2, 3, 5};
  const std::vector<double> rhs = flow_rhs(structure_operator(pd.c, x), ux);
  CHECK(rhs[0] == doctest::Approx(0.6));
  CHECK(rhs[1] == doctest::Approx(-3.6));
  CHECK(rhs[2] == doctest::Approx(20.0));
}

TEST_CASE("property: bracket identity and agreement of the two sufficient forms") {
  Rng rng(21);
  for (const char* name : {"dkdv-frobenius", "broken-hm", "polar", "qexp-hyperbolic"}) {
    CAPTURE(name);
    const ManifoldSpec spec = fixture(name);
    for (const auto& u : points(spec, 6)) {
      const LocalFrame f = spec.structure()->frame(u, 2);
      const PointData pd = point_data(f);
      const PolyField fx(u, rng), fy(u, rng), fz(u, rng);
      const FieldJets xj = fx.jets(u, 2), yj = fy.jets(u, 2), zj = fz.jets(u, 2);
      CHECK(bracket_identity_residual(f.c, xj, yj, zj).within(Tolerance{1e-12, 1e-10}));
      CHECK(sufficient_forms_agreement(pd.c, pd.dc, vector_at(xj), vector_at(yj)).within(Tolerance{1e-12, 1e-10}));
    }
  }
}

TEST_CASE("dkdv-frobenius: hierarchy flows commute, random pairs do not, verdicts agree") {
  const ManifoldSpec spec = fixture("dkdv-frobenius");
  const std::vector<std::string> unity{"1", "0"}, x11{"u1", "u2"}, x21{"u2^2/2", "u1"}, x12{"u1^2/2 + u2^3/3", "u1*u2"};
  const std::vector<std::string> rand1{"u1^2 - u2", "3*u1*u2"}, rand2{"sin(u2)", "u1 + u2^2"};

  for (const auto& [x, y] : {std::pair{unity, x11}, std::pair{x11, x21}, std::pair{x21, x12}, std::pair{unity, rand1}}) {
    const Verdicts v = verdicts(spec, x, y, 5);
    CHECK(v.iff);
    CHECK(v.oracle);
  }
  const Verdicts r = verdicts(spec, rand1, rand2, 6);
  CHECK_FALSE(r.oracle);
  CHECK(r.iff == r.oracle);
  CHECK_FALSE(r.sufficient);
}

TEST_CASE("property: iff criterion equals the brute-force verdict on random polynomial pairs") {
  const ManifoldSpec spec = fixture("dkdv-frobenius");
  Rng rng(33);
  int agree = 0;
  const int pairs = 30;
  for (int k = 0; k < pairs; ++k) {
    const PolyField fx(spec.box.center(), rng), fy(spec.box.center(), rng);
    bool iff = true, oracle = true, sufficient = true;
    Rng srng(100 + k);
    for (const auto& u : points(spec, 4, k)) {
      const PointData pd = frame_data(spec, u, 1);
      const VectorAtPoint xa = (k % 3 == 0) ? constant_vector(std::vector<double>{1, 0}) : fx.at(u);
      const VectorAtPoint ya = fy.at(u);
      iff = iff && iff_commutativity_residual(pd.c, pd.dc, xa, ya).within(kVerdict);
      sufficient = sufficient && sufficient_condition_residual(pd.c, pd.dc, xa, ya).within(kVerdict);
      for (int s = 0; s < 3; ++s) oracle = oracle && oracle_residual(pd.c, pd.dc, xa, ya, random_jet_state(u, srng)).within(kVerdict);
    }
    agree += iff == oracle;
    CHECK_FALSE((sufficient && !iff));
  }
  CHECK(agree == pairs);
}

TEST_CASE("operators of two fields commute on an associative commutative algebra") {
  const ManifoldSpec spec = fixture("broken-hm");
  const PointData pd = frame_data(spec, std::vector<double>{0.3, 1.15, 0.0});
  const std::vector<double> x{1, -2, 0.5}, y{0.3, 0.1, -4};
  CHECK(operator_commutator_residual(structure_operator(pd.c, x), structure_operator(pd.c, y)).within(Tolerance{1e-14, 1e-12}));
}
