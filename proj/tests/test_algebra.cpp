#include <cmath>

#include <doctest.h>

#include "fman/algebra.hpp"
#include "fman/benney.hpp"
#include "support.hpp"

using namespace fman;
using namespace fman::test;

namespace {

const Tolerance kHaantjes{1e-12, 1e-9};

Values reduction_c(const ManifoldSpec& spec, std::span<const double> u, Values* dc) {
  const ReductionPoint red = reduce(*spec.lax, u, 1);
  *dc = gradients_of(red.c);
  return values_of(red.c);
}

}  // namespace

TEST_CASE("canonical-trivial: componentwise product with unity (1, 1, 1)") {
  const ManifoldSpec spec = fixture("canonical-trivial");
  const PointData pd = frame_data(spec, std::vector<double>{1, 2, 3});
  const std::vector<double> x{1, 2, 3}, y{-1, 0.5, 4};
  CHECK(product(pd.c, x, y) == std::vector<double>{-1, 1, 12});
  const std::vector<double> e{1, 1, 1};
  CHECK(unity_residual(pd.c, e).value == 0.0);
  const DiagonalCheck d = diagonal_structure_check(pd.c, pd.dc);
  CHECK(unity_from_diagonal(d.f) == e);
}

TEST_CASE("dkdv-frobenius is an F-manifold with constant unity") {
  const ManifoldSpec spec = fixture("dkdv-frobenius");
  for (const auto& x : points(spec, 16)) {
    const PointData pd = frame_data(spec, x);
    CHECK(commutativity_residual(pd.c).value == 0.0);
    CHECK(associativity_residual(pd.c).within(kHaantjes));
    CHECK(hertling_manin_residual(pd.c, pd.dc).within(kHaantjes));
    const std::vector<double> e{1, 0};
    CHECK(unity_residual(pd.c, e).value == 0.0);
    const Values lie = lie_derivative_c(constant_vector(e), pd.c, pd.dc);
    for (std::size_t q = 0; q < lie.size(); ++q) CHECK(lie.flat(q) == 0.0);
  }
}

TEST_CASE("unity jets solve the normal equations") {
  const ManifoldSpec spec = fixture("broken-hm");
  const LocalFrame f = spec.structure()->frame(std::vector<double>{0.3, 1.15, 0.0}, 2);
  const FieldJets e = unity_jets(f.c);
  std::vector<double> ev;
  for (const Jet& j : e) ev.push_back(j.value());
  CHECK(unity_residual(values_of(f.c), ev).within(Tolerance{1e-12, 1e-12}));
}

TEST_CASE("broken-hm: associative, but Hertling-Manin and Haantjes fail at the witness") {
  const auto& o = oracle()["broken_hm"];
  const ManifoldSpec spec = fixture("broken-hm");
  const std::vector<double> w = o["witness"];
  REQUIRE(spec.witness);
  CHECK(*spec.witness == w);
  const PointData pd = frame_data(spec, w);
  CHECK(associativity_residual(pd.c).value <= 1e-15);
  const double hm = hertling_manin_residual(pd.c, pd.dc).value;
  CHECK(hm == doctest::Approx(o["hertling_manin_max"].get<double>()).epsilon(1e-12));
  CHECK(hm > 1e-3);

  const std::vector<double> z = o["haantjes_z"];
  const Values v = structure_operator(pd.c, z);
  const Values dv = structure_operator_gradient(pd.c, pd.dc, constant_vector(z));
  const Values h = haantjes_tensor(v, dv);
  double hmax = 0.0;
  for (std::size_t q = 0; q < h.size(); ++q) hmax = std::max(hmax, std::abs(h.flat(q)));
  CHECK(hmax == doctest::Approx(o["haantjes_max"].get<double>()).epsilon(1e-12));
  CHECK(haantjes_residual(v, dv).value == doctest::Approx(hmax));
}

TEST_CASE("property: Haantjes vanishes for random Z on F-manifolds with distinct eigenvalues") {
  Rng rng(17);
  for (const char* name : {"dkdv-frobenius", "zakharov-2", "log-3"}) {
    CAPTURE(name);
    const ManifoldSpec spec = fixture(name);
    for (int k = 0; k < 5; ++k) {
      const PolyField z(spec.box.center(), rng);
      for (const auto& u : points(spec, 6, 200 + k)) {
        // The reduction frame lives in the Riemann-invariant chart; the
        // expression fixture in its own chart.
        const PointData pd = frame_data(spec, u);
        const VectorAtPoint zv = z.at(pd.point);
        std::vector<double> z0(zv.v.data().begin(), zv.v.data().end());
        const Values v = structure_operator(pd.c, z0);
        const Values dv = structure_operator_gradient(pd.c, pd.dc, zv);
        CHECK(haantjes_residual(v, dv).within(kHaantjes));
        if (spec.lax) {
          Values dc;
          const Values c = reduction_c(spec, u, &dc);
          CHECK(haantjes_residual(structure_operator(c, z0), structure_operator_gradient(c, dc, zv)).within(kHaantjes));
        }
      }
    }
  }
}

TEST_CASE("Haantjes vanishes in dimension two even without Hertling-Manin") {
  Rng rng(2);
  for (int k = 0; k < 20; ++k) {
    Values v(2, 2), dv(2, 3);
    for (auto& a : v.data()) a = rng.uniform(-1, 1);
    for (auto& a : dv.data()) a = rng.uniform(-1, 1);
    CHECK(haantjes_residual(v, dv).within(kHaantjes));
  }
}

TEST_CASE("property: the six-term form agrees with the vector form") {
  Rng rng(9);
  for (const char* name : {"dkdv-frobenius", "broken-hm", "polar"}) {
    CAPTURE(name);
    const ManifoldSpec spec = fixture(name);
    for (const auto& u : points(spec, 4)) {
      const LocalFrame f = spec.structure()->frame(u, 2);
      const PolyField x(u, rng), y(u, rng), w(u, rng);
      CHECK(polarization_residual(f.c, x.jets(u, 2), y.jets(u, 2), w.jets(u, 2)).within(Tolerance{1e-12, 1e-10}));
    }
  }
}

TEST_CASE("reductions are diagonal with unit entries in Riemann invariants") {
  for (const char* name : {"zakharov-2", "log-3"}) {
    CAPTURE(name);
    const ManifoldSpec spec = fixture(name);
    for (const auto& u : points(spec, 8)) {
      Values dc;
      const Values c = reduction_c(spec, u, &dc);
      const DiagonalCheck d = diagonal_structure_check(c, dc);
      for (double fi : d.f) CHECK(std::abs(fi - 1) <= 1e-9);
      CHECK(d.pattern.value <= 1e-9);
      CHECK(d.dependence_tested);
      CHECK(d.dependence.value <= 1e-9);
    }
  }
}

TEST_CASE("eigenvalue gaps") {
  Values v(2, 2);
  v(0, 0) = 1;
  v(1, 1) = 3;
  CHECK(min_eigen_gap(v) == doctest::Approx(2));
  v(0, 1) = -1;
  v(1, 0) = 1;
  v(1, 1) = 1;
  CHECK(min_eigen_gap(v) == 0.0);
}

TEST_CASE("Nijenhuis tensor of a constant operator vanishes, and is antisymmetric in general") {
  Rng rng(4);
  Values v(3, 2), dv(3, 3), zero(3, 3);
  for (auto& a : v.data()) a = rng.uniform(-1, 1);
  for (auto& a : dv.data()) a = rng.uniform(-1, 1);
  const Values n0 = nijenhuis_tensor(v, zero);
  for (double a : n0.data()) CHECK(a == 0.0);
  const Values n = nijenhuis_tensor(v, dv);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) CHECK(n(i, j, k) == doctest::Approx(-n(i, k, j)));
}
