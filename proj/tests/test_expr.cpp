#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include <doctest.h>

#include "fman/expr.hpp"
#include "fman/sampling.hpp"

using namespace fman;

namespace {

const std::vector<std::string> kChart{"u1", "u2"};

double at(const std::string& src, double a, double b) { return eval(parse(src, kChart), std::vector<double>{a, b}); }

// Random smooth expression over u1, u2 that is defined everywhere.
std::string random_expr(Rng& rng, int depth) {
  const int pick = static_cast<int>(rng.uniform() * (depth > 0 ? 9 : 3));
  auto sub = [&] { return random_expr(rng, depth - 1); };
  switch (pick) {
    case 0: return "u1";
    case 1: return "u2";
    case 2: return std::to_string(std::round(rng.uniform(-3, 3) * 4) / 4);
    case 3: return "(" + sub() + " + " + sub() + ")";
    case 4: return "(" + sub() + ") * (" + sub() + ")";
    case 5: return "(" + sub() + ") / (2 + cos(" + sub() + "))";
    case 6: return "exp((" + sub() + ")/4)";
    case 7: return "sqrt(1 + (" + sub() + ")^2)";
    default: return "ln(3 + sin(" + sub() + "))";
  }
}

}  // namespace

TEST_CASE("precedence and associativity") {
  CHECK(at("u1*u2 + u2^4/24", 0.3, 1.2) == doctest::Approx(0.36 + std::pow(1.2, 4) / 24));
  CHECK(at("-u1^2", 3, 0) == doctest::Approx(-9));
  CHECK(at("2^3^2", 0, 0) == doctest::Approx(512));
  CHECK(at("8 - 3 - 2", 0, 0) == doctest::Approx(3));
  CHECK(at("12 / 3 / 2", 0, 0) == doctest::Approx(2));
  CHECK(at("u1 ^ (1/2)", 4, 0) == doctest::Approx(2));
  CHECK(at("  u1\t*\n u2 ", 2, 5) == doctest::Approx(10));
}

TEST_CASE("the Lax variable is accepted only where allowed") {
  const FieldExpr e = parse("p + u1/(p - u2)", kChart, true);
  CHECK(e.uses_p());
  CHECK(e.arity() == 3);
  CHECK(eval(e, std::vector<double>{0.3, 0.2, 1.0}) == doctest::Approx(1.0 + 0.3 / 0.8));
  CHECK_THROWS_AS(parse("p + u1", kChart), UnknownIdentifier);
}

TEST_CASE("unknown identifiers and syntax errors carry locations") {
  try {
    parse("u1 + u3", kChart);
    FAIL("expected an error");
  } catch (const UnknownIdentifier& e) {
    CHECK(e.name() == "u3");
    CHECK(e.line() == 1);
    CHECK(e.column() == 6);
  }
  try {
    parse("u1 +\n  * u2", kChart);
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
  CHECK_THROWS_AS(parse("", kChart), ParseError);
  CHECK_THROWS_AS(parse("u1^u2", kChart), ParseError);
  CHECK_THROWS_AS(parse("foo(u1)", kChart), UnknownIdentifier);
}

TEST_CASE("parameters are named constants") {
  const Parameters params{{"eps", 0.5}};
  CHECK(eval(parse("eps*u1", kChart, false, params), std::vector<double>{4, 0}) == doctest::Approx(2));
}

TEST_CASE("eval_jet examples") {
  const std::vector<double> x0{0.3, 1.2};
  const Jet a = eval_jet(parse("u2", kChart), x0, 1);
  CHECK(a.value() == doctest::Approx(1.2));
  CHECK(a.d(1) == doctest::Approx(1.0));
  const Jet b = eval_jet(parse("u1*u2", kChart), x0, 1);
  CHECK(b.value() == doctest::Approx(0.36));
  CHECK(b.d(0) == doctest::Approx(1.2));
  CHECK(b.d(1) == doctest::Approx(0.3));
}

TEST_CASE("domain errors name the failing subexpression") {
  try {
    eval_jet(parse("1 + ln(u1)", kChart), std::vector<double>{-1, 0}, 2);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(e.subexpression() == "ln(u1)");
    CHECK(e.point() == std::vector<double>{-1, 0});
  }
}

TEST_CASE("property: print then parse reproduces the tree") {
  Rng rng(11);
  for (int k = 0; k < 50; ++k) {
    const FieldExpr e = parse(random_expr(rng, 4), kChart);
    const FieldExpr again = parse(e.to_string(), kChart);
    CHECK(same_tree(e.root(), again.root()));
  }
}

TEST_CASE("property: jets agree with central differences") {
  Rng rng(5);
  for (int k = 0; k < 50; ++k) {
    const FieldExpr e = parse(random_expr(rng, 4), kChart);
    const std::vector<double> x{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const Jet j = eval_jet(e, x, 2);
    const double h = 1e-4;
    for (int v = 0; v < 2; ++v) {
      std::vector<double> xp = x, xm = x;
      xp[v] += h;
      xm[v] -= h;
      const double fd = (eval(e, xp) - eval(e, xm)) / (2 * h);
      CHECK(std::abs(fd - j.d(v)) <= 1e-6 * std::max(1.0, std::abs(j.d(v))));
    }
  }
}

TEST_CASE("evaluation is bit-identical across calls") {
  const FieldExpr e = parse("exp(u1) * sin(u2) / (2 + cos(u1*u2))", kChart);
  const std::vector<double> x{0.37, -0.81};
  const Jet a = eval_jet(e, x, 4), b = eval_jet(e, x, 4);
  for (std::size_t r = 0; r < a.coeffs().size(); ++r) CHECK(a.coeffs()[r] == b.coeffs()[r]);
}
