#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fman/benney.hpp"
#include "fman/expr.hpp"
#include "fman/residual.hpp"
#include "fman/structure.hpp"

namespace fman {

inline constexpr const char* kSpecFormat = "fman-spec/1";

struct NamedField {
  std::string name;
  std::vector<FieldExpr> components;
};

struct ExpansionField {
  double sign = 1.0;
  std::vector<FieldExpr> components;
};

struct ManifoldSpec {
  std::string name;
  std::vector<std::string> coords;
  Box box;
  Parameters params;
  ChartKind chart = ChartKind::generic;
  std::optional<Tensor<FieldExpr>> c;
  std::optional<Tensor<FieldExpr>> metric;
  ConnectionKind connection = ConnectionKind::none;
  std::optional<Tensor<FieldExpr>> gamma;
  std::optional<LaxFamily> lax;
  Twist twist;
  std::vector<NamedField> fields;
  std::vector<ExpansionField> expansion;
  std::optional<std::vector<double>> series_base;
  std::optional<std::vector<double>> witness;
  Tolerance tol;
  std::uint64_t seed = 42;
  int samples = 32;
  std::vector<std::string> warnings;

  int dim() const { return static_cast<int>(coords.size()); }
  // Expression structure when components are given, otherwise the residue
  // structure of the Lax family.
  std::shared_ptr<const Structure> structure() const;
};

// SpecError (with a field path) on schema violations and on expression errors.
ManifoldSpec parse_spec(const std::string& text);
ManifoldSpec load_spec(const std::string& path);

const char* chart_name(ChartKind k);

}  // namespace fman
