#include <cmath>

#include <doctest.h>

#include "fman/hierarchy.hpp"
#include "fman/suite.hpp"
#include "support.hpp"

using namespace fman;
using namespace fman::test;

namespace {

SeriesContext context(const ManifoldSpec& spec, std::vector<double> base, int order) {
  const LocalFrame f = spec.structure()->frame(base, order - 1);
  return {f.point, order, f.c, f.connection};
}

double coeff(const Jet& j, std::initializer_list<int> alpha) {
  const std::vector<int> a(alpha);
  return j.coeff(a);
}

// Number of nonzero coefficients.
int support_size(const Jet& j) {
  int k = 0;
  for (double v : j.coeffs()) k += v != 0.0;
  return k;
}

}  // namespace

TEST_CASE("dkdv-frobenius hierarchy at the origin has the closed-form fields") {
  const ManifoldSpec spec = fixture("dkdv-frobenius");
  const Hierarchy h = build_hierarchy(context(spec, {0, 0}, 8), 2, 2);
  REQUIRE(h.fields.size() == 2);
  REQUIRE(h.fields[0].size() == 3);

  const SeriesField& x10 = h.fields[0][0];
  CHECK(coeff(x10.comp[0], {0, 0}) == 1.0);
  CHECK(support_size(x10.comp[0]) == 1);
  CHECK(support_size(x10.comp[1]) == 0);

  const SeriesField& x11 = h.fields[0][1];
  CHECK(x11.label == "X(1,1)");
  CHECK(coeff(x11.comp[0], {1, 0}) == 1.0);
  CHECK(coeff(x11.comp[1], {0, 1}) == 1.0);
  CHECK(support_size(x11.comp[0]) == 1);
  CHECK(support_size(x11.comp[1]) == 1);

  const SeriesField& x21 = h.fields[1][1];
  CHECK(coeff(x21.comp[0], {0, 2}) == 0.5);
  CHECK(coeff(x21.comp[1], {1, 0}) == 1.0);
  CHECK(support_size(x21.comp[0]) + support_size(x21.comp[1]) == 2);

  const SeriesField& x12 = h.fields[0][2];
  CHECK(coeff(x12.comp[0], {2, 0}) == 0.5);
  CHECK(coeff(x12.comp[0], {0, 3}) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(coeff(x12.comp[1], {1, 1}) == 1.0);
  CHECK(support_size(x12.comp[0]) + support_size(x12.comp[1]) == 3);

  CHECK(std::isinf(h.radius));
  CHECK(h.report.consistency == 0.0);
}

TEST_CASE("alpha_max 0 gives the flat basis only") {
  const ManifoldSpec spec = fixture("dkdv-frobenius");
  const Hierarchy h = build_hierarchy(context(spec, {0, 0}, 8), 2, 0);
  REQUIRE(h.fields.size() == 2);
  for (const auto& chain : h.fields) CHECK(chain.size() == 1);
}

TEST_CASE("property: recursion and deformed flatness hold inside the polydisc") {
  for (const char* name : {"dkdv-frobenius", "polar"}) {
    CAPTURE(name);
    const ManifoldSpec spec = fixture(name);
    const std::vector<double> base = spec.box.center();
    const Hierarchy h = build_hierarchy(context(spec, base, 12), spec.dim(), 2);
    const double rad = std::min(h.radius, 0.25);
    Rng rng(8);
    for (int k = 0; k < 8; ++k) {
      std::vector<double> x = base;
      for (double& xi : x) xi += rng.uniform(-rad, rad);
      const PointData pd = frame_data(spec, x);
      for (const auto& chain : h.fields) {
        std::vector<VectorAtPoint> levels;
        for (const auto& f : chain) levels.push_back(evaluate(f, x));
        CHECK(recursion_residual(pd, levels[0], nullptr).within(Tolerance{1e-8, 1e-8}));
        for (std::size_t a = 1; a < levels.size(); ++a)
          CHECK(recursion_residual(pd, levels[a], &levels[a - 1]).within(Tolerance{1e-8, 1e-8}));
        for (double z : {0.0, 1.0, -2.0}) CHECK(deformed_parallel_residual(pd, levels, z).within(Tolerance{1e-9, 1e-9}));
      }
    }
  }
}

TEST_CASE("polar flat fields are the constant Cartesian fields") {
  const ManifoldSpec spec = fixture("polar");
  const double r0 = 1.5, t0 = 0.5;
  const Hierarchy h = build_hierarchy(context(spec, {r0, t0}, 16), 2, 0);
  Rng rng(12);
  for (int k = 0; k < 20; ++k) {
    const double r = r0 + rng.uniform(-0.3, 0.3), t = t0 + rng.uniform(-0.3, 0.3);
    const std::vector<double> x{r, t};
    const VectorAtPoint a = evaluate(h.fields[0][0], x), b = evaluate(h.fields[1][0], x);
    CHECK(a.v(0) == doctest::Approx(std::cos(t - t0)).epsilon(1e-10));
    CHECK(a.v(1) == doctest::Approx(-std::sin(t - t0) / r).epsilon(1e-10));
    CHECK(b.v(0) == doctest::Approx(r0 * std::sin(t - t0)).epsilon(1e-10));
    CHECK(b.v(1) == doctest::Approx(r0 * std::cos(t - t0) / r).epsilon(1e-10));
  }
}

TEST_CASE("an incompatible structure is refused with the obstruction degree") {
  ManifoldSpec spec = fixture("dkdv-frobenius");
  auto j = nlohmann::json::parse(fixture_text("dkdv-frobenius"));
  j["structure"][1]["expr"] = "u1";
  spec = spec_from(j);
  try {
    build_hierarchy(context(spec, {0.3, 1.0}, 8), 2, 2);
    FAIL("expected a construction error");
  } catch (const ConstructionError& e) {
    // d_1 d_2 of the first component of X(1,2) disagrees from the cubic coefficients on.
    CHECK(std::string(e.what()).find("inconsistent at degree 3") != std::string::npos);
  }
}

TEST_CASE("curved connections have no flat basis") {
  const ManifoldSpec spec = fixture("qexp-hyperbolic");
  CHECK_THROWS_AS(build_hierarchy(context(spec, {0, 0}, 8), 2, 0), ConstructionError);
}

TEST_CASE("compatibility brackets vanish on flat structures") {
  for (const char* name : {"dkdv-frobenius", "polar", "canonical-trivial"}) {
    CAPTURE(name);
    const ManifoldSpec spec = fixture(name);
    for (const auto& x : points(spec, 8)) {
      const CompatibilityBrackets b = compatibility_residual(frame_data(spec, x));
      CHECK(b.curvature.within(Tolerance{1e-10, 1e-10}));
      CHECK(b.mixed.within(Tolerance{1e-10, 1e-10}));
      CHECK(b.associativity.within(Tolerance{1e-10, 1e-10}));
    }
  }
}

TEST_CASE("spec_hierarchy uses the spec's series base") {
  const ManifoldSpec spec = fixture("dkdv-frobenius");
  RunOptions opt;
  const Hierarchy h = spec_hierarchy(spec, opt);
  CHECK(h.fields.front().front().base == std::vector<double>{0, 0});
  CHECK(h.fields.size() * h.fields.front().size() == 6);
}
