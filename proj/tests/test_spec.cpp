#include <doctest.h>

#include "support.hpp"

using namespace fman;
using namespace fman::test;

namespace {

nlohmann::json base_json() { return nlohmann::json::parse(fixture_text("dkdv-frobenius")); }

std::string error_path(const nlohmann::json& j) {
  try {
    spec_from(j);
  } catch (const SpecError& e) {
    return e.path();
  }
  return "<no error>";
}

}  // namespace

TEST_CASE("dkdv-frobenius parses with symmetric structure constants") {
  const ManifoldSpec spec = fixture("dkdv-frobenius");
  CHECK(spec.dim() == 2);
  CHECK(spec.chart == ChartKind::flat);
  CHECK(spec.connection == ConnectionKind::zero);
  REQUIRE(spec.c);
  int nonzero = 0;
  for (const auto& e : spec.c->data()) nonzero += !e.is_zero_constant();
  CHECK(nonzero == 4);  // c^1_11, c^1_22, c^2_12 = c^2_21
  CHECK((*spec.c)(1, 1, 0).to_string() == (*spec.c)(1, 0, 1).to_string());
  REQUIRE(spec.series_base);
  CHECK(*spec.series_base == std::vector<double>{0, 0});
  CHECK(spec.fields.size() == 2);
  CHECK(spec.seed == 42);
  CHECK(spec.samples == 32);
}

TEST_CASE("every shipped fixture parses") {
  for (const auto& [name, text] : kFixtures) {
    CAPTURE(name);
    CHECK_NOTHROW(parse_spec(std::string(text)));
  }
}

TEST_CASE("schema violations name the offending field") {
  auto j = base_json();
  j["structure"][0]["i"] = 0;
  CHECK(error_path(j) == "/structure/0/i");

  j = base_json();
  j["structure"][2]["expr"] = "u3 + 1";
  CHECK(error_path(j) == "/structure/2/expr");

  j = base_json();
  j["colour"] = "blue";
  CHECK(error_path(j) == "/colour");

  j = base_json();
  j["format"] = "fman-spec/2";
  CHECK(error_path(j) == "/format");

  j = base_json();
  j["structure"].push_back(j["structure"][0]);
  CHECK(error_path(j) == "/structure/4");

  j = base_json();
  j["box"][1] = {2.0, 1.0};
  CHECK(error_path(j) == "/box/1");

  j = base_json();
  j["dimension"] = 3;
  CHECK(error_path(j) == "/dimension");

  j = base_json();
  j.erase("structure");
  CHECK(error_path(j) == "/structure");

  j = base_json();
  j["connection"] = "levi-civita";
  j.erase("metric");
  CHECK(error_path(j) == "/connection");

  j = nlohmann::json::parse(fixture_text("log-3"));
  j["lax"]["twist"] = {"exp(r)"};
  CHECK(error_path(j) == "/lax/twist");
}

TEST_CASE("unknown identifiers in expressions are spec errors") {
  auto j = base_json();
  j["metric"][0]["expr"] = "u1 + q";
  try {
    spec_from(j);
    FAIL("expected a spec error");
  } catch (const SpecError& e) {
    CHECK(e.path() == "/metric/0/expr");
    CHECK(std::string(e.what()).find("unknown identifier 'q'") != std::string::npos);
  }
}

TEST_CASE("malformed JSON is a spec error") {
  CHECK_THROWS_AS(parse_spec("{\"format\": "), SpecError);
  CHECK_THROWS_AS(parse_spec("[1, 2]"), SpecError);
}

TEST_CASE("a mirrored entry that disagrees is averaged with a warning") {
  auto j = nlohmann::json::parse(fixture_text("broken-hm"));
  j["structure"].push_back({{"i", 2}, {"j", 2}, {"k", 1}, {"expr", "3"}});
  const ManifoldSpec spec = spec_from(j);
  CHECK_FALSE(spec.warnings.empty());
  CHECK(eval((*spec.c)(1, 0, 1), std::vector<double>{0.3, 1, 0}) == doctest::Approx(2));
  CHECK(eval((*spec.c)(1, 1, 0), std::vector<double>{0.3, 1, 0}) == doctest::Approx(2));
}

TEST_CASE("twists are anchored at the box center when parsed") {
  auto j = nlohmann::json::parse(fixture_text("log-3"));
  j["lax"]["twist"] = {"exp(r)", "1 + r^2", "2 + sin(r)"};
  const ManifoldSpec spec = spec_from(j);
  REQUIRE(spec.twist.active());
  CHECK(spec.twist.anchor.size() == 3);
}

TEST_CASE("numbers are accepted as expressions and parameters resolve") {
  auto j = nlohmann::json::parse(fixture_text("broken-hm"));
  j["structure"][0]["expr"] = 1;
  const ManifoldSpec spec = spec_from(j);
  CHECK(spec.params.at("eps") == 0.5);
  CHECK(eval((*spec.c)(0, 0, 0), std::vector<double>{0, 0, 0}) == 1.0);
}
