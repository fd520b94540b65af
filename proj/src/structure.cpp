#include "fman/structure.hpp"

#include <stdexcept>

namespace fman {

bool Box::contains(std::span<const double> x) const {
  for (std::size_t i = 0; i < lo.size(); ++i)
    if (x[i] < lo[i] || x[i] > hi[i]) return false;
  return true;
}

std::vector<double> Box::center() const {
  std::vector<double> c;
  for (std::size_t i = 0; i < lo.size(); ++i) c.push_back(0.5 * (lo[i] + hi[i]));
  return c;
}

std::vector<double> Structure::chart_point(std::span<const double> sample) const {
  return {sample.begin(), sample.end()};
}

namespace {

JetTensor eval_tensor(const Tensor<FieldExpr>& t, std::span<const double> x, int order) {
  const int n = t.dim();
  JetTensor out(n, t.rank());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const FieldExpr& e = t.flat(k);
    out.flat(k) = e.is_zero_constant() ? Jet::constant(0.0, n, order) : eval_jet(e, x, order);
  }
  return out;
}

}  // namespace

ExprStructure::ExprStructure(std::vector<std::string> coords, Box box, ChartKind chart, Tensor<FieldExpr> c,
                             std::optional<Tensor<FieldExpr>> metric, ConnectionKind connection,
                             std::optional<Tensor<FieldExpr>> gamma)
    : coords_(std::move(coords)),
      box_(std::move(box)),
      chart_(chart),
      c_(std::move(c)),
      metric_(std::move(metric)),
      connection_(connection),
      gamma_(std::move(gamma)) {
  if (connection_ == ConnectionKind::levi_civita && !metric_)
    throw std::invalid_argument("Levi-Civita connection needs a metric");
  if (connection_ == ConnectionKind::given && !gamma_) throw std::invalid_argument("connection components missing");
}

LocalFrame ExprStructure::frame(std::span<const double> sample, int order) const {
  const int n = dim();
  LocalFrame f;
  f.point.assign(sample.begin(), sample.end());
  f.c = eval_tensor(c_, sample, order);
  if (metric_) f.metric = eval_tensor(*metric_, sample, order + 1);
  switch (connection_) {
    case ConnectionKind::levi_civita:
      f.connection = christoffel_from_metric(*f.metric);
      break;
    case ConnectionKind::given:
      f.connection = eval_tensor(*gamma_, sample, order);
      break;
    default:
      f.connection = zero_jets(n, 3, n, order);
  }
  return f;
}

ReductionStructure::ReductionStructure(LaxFamily family, Box box, Twist twist)
    : family_(std::move(family)), box_(std::move(box)), twist_(std::move(twist)) {
  for (int i = 0; i < family_.dim(); ++i) coords_.push_back("r" + std::to_string(i + 1));
}

LocalFrame ReductionStructure::frame(std::span<const double> sample, int order) const {
  const ReductionPoint red = reduce(family_, sample, order, twist_);
  LocalFrame f;
  f.point = red.y0;
  // The product is the canonical one in this chart; red.c carries rounding
  // that the high-order series solves would amplify.
  const int n = dim();
  f.c = zero_jets(n, 3, n, order);
  for (int i = 0; i < n; ++i) f.c(i, i, i) += 1.0;
  f.metric = red.g;
  f.connection = christoffel_from_metric(red.g);
  return f;
}

std::vector<double> ReductionStructure::chart_point(std::span<const double> sample) const {
  return reduce(family_, sample, 0, twist_).y0;
}

PointData point_data_at(const Structure& s, std::span<const double> sample, int order) {
  return point_data(s.frame(sample, order));
}

}  // namespace fman
