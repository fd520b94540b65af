#include <cmath>

#include <doctest.h>

#include "fman/geometry.hpp"
#include "support.hpp"

using namespace fman;
using namespace fman::test;

namespace {

ManifoldSpec sphere() {
  return spec_from({{"format", "fman-spec/1"},
                    {"name", "sphere"},
                    {"dimension", 2},
                    {"coordinates", {"th", "ph"}},
                    {"box", {{0.5, 1.0}, {0.0, 1.0}}},
                    {"structure", {{{"i", 1}, {"j", 1}, {"k", 1}, {"expr", "1"}}, {{"i", 2}, {"j", 2}, {"k", 2}, {"expr", "1"}}}},
                    {"metric", {{{"i", 1}, {"j", 1}, {"expr", "1"}}, {{"i", 2}, {"j", 2}, {"expr", "sin(th)^2"}}}},
                    {"connection", "levi-civita"}});
}

// Random positive-definite metric with polynomial entries.
ManifoldSpec random_metric(Rng& rng) {
  auto term = [&] { return std::to_string(std::round(rng.uniform(-1, 1) * 8) / 16); };
  const std::string g11 = "2 + " + term() + "*x*y + " + term() + "*y^2";
  const std::string g12 = term() + "*x + " + term() + "*y^2";
  const std::string g22 = "3 + " + term() + "*x^2 + " + term() + "*sin(y)";
  return spec_from({{"format", "fman-spec/1"},
                    {"name", "random-metric"},
                    {"dimension", 2},
                    {"coordinates", {"x", "y"}},
                    {"box", {{-0.5, 0.5}, {-0.5, 0.5}}},
                    {"structure", {{{"i", 1}, {"j", 1}, {"k", 1}, {"expr", "1"}}, {{"i", 2}, {"j", 2}, {"k", 2}, {"expr", "1"}}}},
                    {"metric",
                     {{{"i", 1}, {"j", 1}, {"expr", g11}},
                      {{"i", 1}, {"j", 2}, {"expr", g12}},
                      {{"i", 2}, {"j", 2}, {"expr", g22}}}},
                    {"connection", "levi-civita"}});
}

const Tolerance kTight{1e-12, 1e-10};

}  // namespace

TEST_CASE("sphere curvature matches the independent value") {
  const auto& o = oracle()["sphere"];
  const std::vector<double> x = o["point"];
  const PointData pd = frame_data(sphere(), x);
  CHECK(pd.riemann(0, 1, 0, 1) == doctest::Approx(o["r_1212"].get<double>()).epsilon(1e-12));
  CHECK(pd.riemann(0, 1, 1, 0) == doctest::Approx(-o["r_1212"].get<double>()).epsilon(1e-12));
  CHECK(pd.gamma(0, 1, 1) == doctest::Approx(-std::sin(0.7) * std::cos(0.7)));
  CHECK(pd.gamma(1, 0, 1) == doctest::Approx(std::cos(0.7) / std::sin(0.7)));
  CHECK(flatness_residual(pd).value > 0.1);
}

TEST_CASE("the Euclidean metric in polar coordinates is flat") {
  const ManifoldSpec spec = fixture("polar");
  for (const auto& x : points(spec, 16)) {
    const PointData pd = frame_data(spec, x);
    CHECK(flatness_residual(pd).within(kTight));
    CHECK(torsion_residual(pd.gamma).within(kTight));
    CHECK(metricity_residual(pd).within(kTight));
    CHECK(pd.gamma(0, 1, 1) == doctest::Approx(-x[0]));
    CHECK(pd.gamma(1, 0, 1) == doctest::Approx(1 / x[0]));
  }
}

TEST_CASE("property: Levi-Civita of random metrics is torsion-free, metric, with antisymmetric curvature") {
  Rng rng(3);
  for (int k = 0; k < 10; ++k) {
    const ManifoldSpec spec = random_metric(rng);
    for (const auto& x : points(spec, 4, 100 + k)) {
      const PointData pd = frame_data(spec, x);
      CHECK(torsion_residual(pd.gamma).within(kTight));
      CHECK(metricity_residual(pd).within(kTight));
      CHECK(curvature_antisymmetry_residual(pd).within(kTight));
      const Values pointwise = christoffel(*pd.g, *pd.dg);
      for (std::size_t q = 0; q < pointwise.size(); ++q) CHECK(pointwise.flat(q) == doctest::Approx(pd.gamma.flat(q)));
    }
  }
}

TEST_CASE("property: deformed curvature does not depend on z for compatible structures") {
  const double zs[] = {0.0, 1.7, 2.3, -2.0};
  for (const char* name : {"dkdv-frobenius", "polar", "zakharov-2", "log-3"}) {
    CAPTURE(name);
    const ManifoldSpec spec = fixture(name);
    for (const auto& x : points(spec, 6)) {
      const PointData pd = frame_data(spec, x);
      CHECK(deformed_curvature_spread(pd, zs).within(Tolerance{1e-9, 1e-9}));
    }
  }
}

TEST_CASE("deformed curvature moves when the connection is not compatible") {
  const PointData pd = frame_data(sphere(), std::vector<double>{0.7, 0.3});
  const double zs[] = {0.0, 1.0};
  CHECK_FALSE(deformed_curvature_spread(pd, zs).within(Tolerance{1e-6, 1e-6}));
}

TEST_CASE("covariant derivative of the metric vanishes as a (0,2) tensor") {
  const ManifoldSpec spec = fixture("polar");
  const PointData pd = frame_data(spec, std::vector<double>{1.3, 0.4});
  const Values ng = covariant_derivative(*pd.g, *pd.dg, pd.gamma, 0, 2);
  for (std::size_t q = 0; q < ng.size(); ++q) CHECK(std::abs(ng.flat(q)) < 1e-12);
}
