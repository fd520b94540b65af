#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "fman/algebra.hpp"
#include "fman/flows.hpp"
#include "fman/structure.hpp"

namespace fman {

inline constexpr const char* kPrngName = "mt19937_64";

// mt19937_64 with doubles from the top 53 bits: (x >> 11) * 2^-53.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

// Seed for an independent stream keyed by (seed, tag, index); stable across
// platforms and thread schedules.
std::uint64_t derive_seed(std::uint64_t seed, std::string_view tag, std::uint64_t index);

// Uniform points in the box, drawn serially from one stream.
std::vector<std::vector<double>> sample_points(const Box& box, int count, std::uint64_t seed);

// Polynomial vector field of degree <= 2 in (x - center), coefficients in
// [-1, 1] (quadratic coefficients halved).
class PolyField {
 public:
  PolyField() = default;
  PolyField(std::vector<double> center, Rng& rng, int max_degree = 2);
  // Constant field.
  static PolyField constant(std::vector<double> value, std::vector<double> center);

  int dim() const { return static_cast<int>(center_.size()); }
  FieldJets jets(std::span<const double> x, int order) const;
  VectorAtPoint at(std::span<const double> x) const;

 private:
  std::vector<double> center_;
  std::vector<double> a_;  // a[i]
  std::vector<double> b_;  // b[i*n + j]
  std::vector<double> q_;  // q[(i*n + j)*n + k], symmetric in j, k
};

JetState random_jet_state(std::span<const double> u, Rng& rng);

}  // namespace fman
