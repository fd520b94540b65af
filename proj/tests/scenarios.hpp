#pragma once

#include <array>
#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

namespace fman::test {

struct Monomial {
  double coef;
  std::array<int, 3> pow;
};

// Coefficients are multiples of 1/64, so the decimal text is exact.
inline double dyadic(double x) { return std::round(x * 64) / 64; }

inline std::string monomial_text(double coef, const std::array<int, 3>& pow) {
  std::ostringstream os;
  os.precision(17);
  os << coef;
  std::string s = os.str();
  for (int i = 0; i < 3; ++i)
    if (pow[i] > 0) s += "*r" + std::to_string(i + 1) + "^" + std::to_string(pow[i]);
  return s;
}

// Canonical idempotent product with the Egorov metric g_ii = d_i F of a random
// cubic potential F whose linear part keeps the metric away from zero.
inline ManifoldSpec egorov_counter_fixture(Rng& rng, int index) {
  std::vector<Monomial> f;
  for (int i = 0; i < 3; ++i) {
    std::array<int, 3> p{0, 0, 0};
    p[i] = 1;
    f.push_back({dyadic((i == 1 ? -1.0 : 1.0) * rng.uniform(2, 3)), p});
  }
  for (int t = 0; t < 5; ++t) {
    std::array<int, 3> p{0, 0, 0};
    for (int k = 0; k < 3; ++k) ++p[static_cast<int>(rng.uniform() * 3)];
    f.push_back({dyadic(rng.uniform(-0.5, 0.5)), p});
  }
  nlohmann::json metric = nlohmann::json::array(), structure = nlohmann::json::array();
  for (int i = 0; i < 3; ++i) {
    std::string gi;
    for (const auto& m : f) {
      if (m.pow[i] == 0) continue;
      auto p = m.pow;
      --p[i];
      gi += (gi.empty() ? "" : " + ") + monomial_text(m.coef * m.pow[i], p);
    }
    metric.push_back({{"i", i + 1}, {"j", i + 1}, {"expr", gi}});
    structure.push_back({{"i", i + 1}, {"j", i + 1}, {"k", i + 1}, {"expr", "1"}});
  }
  return spec_from({{"format", "fman-spec/1"},
                    {"name", "egorov-" + std::to_string(index)},
                    {"dimension", 3},
                    {"coordinates", {"r1", "r2", "r3"}},
                    {"box", {{0.2, 0.4}, {0.2, 0.4}, {0.2, 0.4}}},
                    {"chart", "canonical"},
                    {"structure", structure},
                    {"metric", metric},
                    {"connection", "levi-civita"}});
}

// Boundary polynomials for a Tsarev solve: distinct velocities at the base,
// random higher coefficients.
inline std::vector<std::vector<double>> random_boundary(Rng& rng, int n, int order) {
  std::vector<std::vector<double>> b(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    b[i].push_back(static_cast<double>(i) + rng.uniform(-0.2, 0.2));
    for (int d = 1; d <= order; ++d) b[i].push_back(rng.uniform(-1, 1) / std::tgamma(d + 1.0));
  }
  return b;
}

}  // namespace fman::test
