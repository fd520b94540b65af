#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include <json.hpp>

#include "fman/sampling.hpp"
#include "fman/spec.hpp"
#include "fman/structure.hpp"
#include "fman_fixtures.hpp"

namespace fman::test {

inline std::string fixture_text(std::string_view name) {
  for (const auto& [stem, text] : kFixtures)
    if (stem == name) return std::string(text);
  throw std::runtime_error("no fixture " + std::string(name));
}

inline ManifoldSpec fixture(std::string_view name) { return parse_spec(fixture_text(name)); }

inline ManifoldSpec spec_from(const nlohmann::json& j) { return parse_spec(j.dump()); }

inline const nlohmann::json& oracle() {
  static const nlohmann::json j = [] {
    std::ifstream in(FMAN_ORACLE_PATH);
    return nlohmann::json::parse(in);
  }();
  return j;
}

inline PointData frame_data(const ManifoldSpec& spec, std::span<const double> sample, int order = 2) {
  return point_data_at(*spec.structure(), sample, order);
}

// Vector field given by component expressions over the spec's chart, as jets at x.
inline FieldJets field_jets(const ManifoldSpec& spec, const std::vector<std::string>& comps, std::span<const double> x,
                            int order = 2) {
  FieldJets out;
  for (const auto& c : comps) out.push_back(eval_jet(parse(c, spec.coords), x, order));
  return out;
}

inline std::vector<std::vector<double>> points(const ManifoldSpec& spec, int count, std::uint64_t seed = 42) {
  return sample_points(spec.box, count, seed);
}

}  // namespace fman::test
