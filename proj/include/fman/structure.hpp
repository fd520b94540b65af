#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fman/benney.hpp"
#include "fman/expr.hpp"
#include "fman/geometry.hpp"

namespace fman {

enum class ChartKind { generic, flat, canonical };
enum class ConnectionKind { none, zero, levi_civita, given };

struct Box {
  std::vector<double> lo, hi;
  int dim() const { return static_cast<int>(lo.size()); }
  bool contains(std::span<const double> x) const;
  std::vector<double> center() const;
};

// A product, optional metric and optional connection on one chart. Points
// are drawn from the sampling box; frame() returns jets at the corresponding
// chart point (for reductions the sampling box lives in the u chart and the
// frame in the Riemann-invariant chart).
class Structure {
 public:
  virtual ~Structure() = default;

  virtual int dim() const = 0;
  virtual const std::vector<std::string>& coords() const = 0;
  virtual const Box& box() const = 0;
  virtual ChartKind chart() const = 0;
  virtual bool has_metric() const = 0;
  virtual ConnectionKind connection() const = 0;
  // c of order `order`, metric of order + 1, connection of order `order`.
  virtual LocalFrame frame(std::span<const double> sample, int order) const = 0;
  // Chart point of a sample.
  virtual std::vector<double> chart_point(std::span<const double> sample) const;
};

// Components given by expressions over the chart.
class ExprStructure final : public Structure {
 public:
  ExprStructure(std::vector<std::string> coords, Box box, ChartKind chart, Tensor<FieldExpr> c,
                std::optional<Tensor<FieldExpr>> metric, ConnectionKind connection,
                std::optional<Tensor<FieldExpr>> gamma);

  int dim() const override { return static_cast<int>(coords_.size()); }
  const std::vector<std::string>& coords() const override { return coords_; }
  const Box& box() const override { return box_; }
  ChartKind chart() const override { return chart_; }
  bool has_metric() const override { return metric_.has_value(); }
  ConnectionKind connection() const override { return connection_; }
  LocalFrame frame(std::span<const double> sample, int order) const override;

  const Tensor<FieldExpr>& c() const { return c_; }

 private:
  std::vector<std::string> coords_;
  Box box_;
  ChartKind chart_;
  Tensor<FieldExpr> c_;
  std::optional<Tensor<FieldExpr>> metric_;
  ConnectionKind connection_;
  std::optional<Tensor<FieldExpr>> gamma_;
};

// Residue structure of a Lax family: canonical product, residue metric and
// its Levi-Civita connection in the (possibly twisted) Riemann-invariant chart.
class ReductionStructure final : public Structure {
 public:
  ReductionStructure(LaxFamily family, Box box, Twist twist = {});

  int dim() const override { return family_.dim(); }
  const std::vector<std::string>& coords() const override { return coords_; }
  const Box& box() const override { return box_; }
  ChartKind chart() const override { return ChartKind::canonical; }
  bool has_metric() const override { return true; }
  ConnectionKind connection() const override { return ConnectionKind::levi_civita; }
  LocalFrame frame(std::span<const double> sample, int order) const override;
  std::vector<double> chart_point(std::span<const double> sample) const override;

  const LaxFamily& family() const { return family_; }
  const Twist& twist() const { return twist_; }

 private:
  LaxFamily family_;
  Box box_;
  Twist twist_;
  std::vector<std::string> coords_;  // r1..rn
};

// Frame with the connection resolved; LocalFrame.connection is a zero tensor
// when the structure has none.
PointData point_data_at(const Structure& s, std::span<const double> sample, int order);

}  // namespace fman
