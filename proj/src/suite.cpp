#include "fman/suite.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "fman/algebra.hpp"
#include "fman/compat.hpp"
#include "fman/error.hpp"
#include "fman/flows.hpp"
#include "fman/hierarchy.hpp"
#include "fman/sampling.hpp"
#include "fman/series.hpp"

namespace fman {

const CheckResult* Report::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

const InfoItem* Report::find_info(const std::string& name) const {
  for (const auto& i : info)
    if (i.name == name) return &i;
  return nullptr;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"algebra", "flows", "flat", "compat", "riemannian", "benney", "all"};
  return names;
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Aggregate { check, info_max, info_min, info_sum };

struct CheckDef {
  std::string name;
  Tolerance tol;
  Aggregate agg = Aggregate::check;
};

struct PointOutcome {
  enum Status : char { missing, ok, skipped, error };
  Status status = missing;
  double value = 0.0;
  double scale = 0.0;
  std::string message;
  std::optional<std::vector<double>> at;  // overrides the stage's point
};

class Recorder {
 public:
  explicit Recorder(const std::vector<CheckDef>& defs) : defs_(defs), out_(defs.size()) {}

  void put(const std::string& name, double value, double scale) {
    PointOutcome& o = out_[index(name)];
    if (o.status == PointOutcome::error) return;
    if (o.status == PointOutcome::ok) {
      o.value = std::max(o.value, value);
      o.scale = std::max(o.scale, scale);
      return;
    }
    o = {PointOutcome::ok, value, scale, {}, {}};
  }
  void put(const std::string& name, const Residual& r) { put(name, r.value, r.scale); }
  void put_at(const std::string& name, double value, std::vector<double> at) {
    put(name, value, 0.0);
    PointOutcome& o = out_[index(name)];
    if (o.status == PointOutcome::ok && !o.at) o.at = std::move(at);
  }
  void skip(const std::string& name, const std::string& why) {
    PointOutcome& o = out_[index(name)];
    if (o.status == PointOutcome::missing) o = {PointOutcome::skipped, 0.0, 0.0, why, {}};
  }
  void error(const std::string& name, const std::string& why) {
    PointOutcome& o = out_[index(name)];
    if (o.status != PointOutcome::error) o = {PointOutcome::error, 0.0, 0.0, why, {}};
  }
  // Errors every listed check that has no outcome yet.
  void error_open(const std::vector<std::string>& names, const std::string& why) {
    for (const auto& n : names)
      if (out_[index(n)].status == PointOutcome::missing) error(n, why);
  }
  void error_open_all(const std::string& why) {
    for (auto& o : out_)
      if (o.status == PointOutcome::missing) o = {PointOutcome::error, 0.0, 0.0, why, {}};
  }
  std::vector<PointOutcome> take() { return std::move(out_); }

 private:
  std::size_t index(const std::string& name) const {
    for (std::size_t k = 0; k < defs_.size(); ++k)
      if (defs_[k].name == name) return k;
    throw std::logic_error("unregistered check " + name);
  }

  const std::vector<CheckDef>& defs_;
  std::vector<PointOutcome> out_;
};

struct PointCtx {
  std::size_t index;
  std::span<const double> sample;
  const LocalFrame& frame;
  const PointData& pd;
};

struct Group {
  std::string tag;
  std::vector<CheckDef> checks;
  std::function<void(const PointCtx&, Rng&, Recorder&)> fn;
};

struct Stage {
  std::string tag;
  std::vector<CheckDef> checks;
  std::size_t count = 0;
  std::vector<std::vector<double>> points;  // witness per index, may be empty
  std::function<void(std::size_t, Recorder&)> eval;
};

std::vector<std::string> names_of(const std::vector<CheckDef>& defs) {
  std::vector<std::string> out;
  for (const auto& d : defs) out.push_back(d.name);
  return out;
}

std::vector<std::vector<PointOutcome>> run_stage(const Stage& stage, bool parallel) {
  std::vector<std::vector<PointOutcome>> res(stage.count);
  auto body = [&](std::size_t i) {
    Recorder rec(stage.checks);
    try {
      stage.eval(i, rec);
    } catch (const std::exception& e) {
      rec.error_open_all(e.what());
    } catch (...) {
      rec.error_open_all("unknown failure");
    }
    res[i] = rec.take();
  };
  const auto count = static_cast<long>(stage.count);
  if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
  } else {
    for (long i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
  }
  return res;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

CheckResult aggregate_check(const CheckDef& def, const std::vector<const PointOutcome*>& outs,
                            const std::vector<std::vector<double>>& points) {
  CheckResult r;
  r.name = def.name;
  r.tol = def.tol;
  std::vector<double> values;
  bool within = true;
  double worst_ratio = -1.0;
  std::size_t worst = 0;
  std::optional<std::size_t> error_at;
  std::string first_error, first_skip;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    const PointOutcome& o = *outs[i];
    switch (o.status) {
      case PointOutcome::ok: {
        ++r.evaluated;
        values.push_back(o.value);
        r.residual_max = std::max(r.residual_max, o.value);
        const double bound = def.tol.bound(o.scale);
        const bool pass = std::isfinite(o.value) && o.value <= bound;
        within = within && pass;
        const double ratio = !std::isfinite(o.value) ? kInf : bound > 0 ? o.value / bound : (o.value > 0 ? kInf : 0.0);
        if (ratio > worst_ratio) {
          worst_ratio = ratio;
          worst = i;
          r.scale = o.scale;
        }
        break;
      }
      case PointOutcome::error:
        ++r.errors;
        if (!error_at) {
          error_at = i;
          first_error = o.message;
        }
        break;
      default:
        ++r.skipped;
        if (first_skip.empty()) first_skip = o.message.empty() ? "not applicable at this point" : o.message;
    }
  }
  r.residual_median = median(values);
  const int attempted = r.evaluated + r.errors;
  const bool too_many_errors = r.errors * 10 > attempted;
  if (r.evaluated == 0 && r.errors == 0) {
    r.status = CheckStatus::skipped;
    r.message = first_skip;
    return r;
  }
  r.status = (within && !too_many_errors) ? CheckStatus::pass : CheckStatus::fail;
  if (!first_error.empty()) r.message = first_error;
  if (too_many_errors && r.message.empty()) r.message = "more than 10% of points failed to evaluate";
  auto point_of = [&](std::size_t i) -> std::optional<std::vector<double>> {
    if (outs[i]->at) return outs[i]->at;
    if (i < points.size()) return points[i];
    return std::nullopt;
  };
  if (!within)
    r.witness = point_of(worst);
  else if (r.status == CheckStatus::fail && error_at)
    r.witness = point_of(*error_at);
  return r;
}

InfoItem aggregate_info(const CheckDef& def, const std::vector<const PointOutcome*>& outs,
                        const std::vector<std::vector<double>>& points) {
  InfoItem it;
  it.name = def.name;
  bool any = false;
  std::size_t best = 0;
  double acc = def.agg == Aggregate::info_min ? kInf : def.agg == Aggregate::info_sum ? 0.0 : -kInf;
  for (std::size_t i = 0; i < outs.size(); ++i) {
    const PointOutcome& o = *outs[i];
    if (o.status != PointOutcome::ok) continue;
    any = true;
    if (def.agg == Aggregate::info_sum) {
      acc += o.value;
    } else if ((def.agg == Aggregate::info_max && o.value > acc) || (def.agg == Aggregate::info_min && o.value < acc)) {
      acc = o.value;
      best = i;
    }
  }
  if (!any) {
    it.text = "no point evaluated";
    return it;
  }
  it.value = acc;
  if (def.agg != Aggregate::info_sum && !points.empty()) it.point = points[best];
  return it;
}

CheckResult global_result(const std::string& name, const Tolerance& tol, double value, double scale,
                          std::optional<std::vector<double>> point = {}) {
  CheckResult r;
  r.name = name;
  r.tol = tol;
  r.residual_max = r.residual_median = value;
  r.scale = scale;
  r.evaluated = 1;
  r.status = std::isfinite(value) && value <= tol.bound(scale) ? CheckStatus::pass : CheckStatus::fail;
  if (r.status == CheckStatus::fail) r.witness = std::move(point);
  return r;
}

CheckResult global_error(const std::string& name, const Tolerance& tol, const std::string& why,
                         std::optional<std::vector<double>> point = {}) {
  CheckResult r;
  r.name = name;
  r.tol = tol;
  r.errors = 1;
  r.status = CheckStatus::fail;
  r.message = why;
  r.witness = std::move(point);
  return r;
}

CheckResult global_skip(const std::string& name, const Tolerance& tol, const std::string& why) {
  CheckResult r;
  r.name = name;
  r.tol = tol;
  r.skipped = 1;
  r.status = CheckStatus::skipped;
  r.message = why;
  return r;
}

Residual difference(std::span<const double> a, std::span<const double> b) {
  Residual r;
  for (std::size_t i = 0; i < a.size(); ++i) r.absorb(a[i] - b[i], std::max(std::abs(a[i]), std::abs(b[i])));
  return r;
}

const std::vector<double> kDeformedFlat{0.0, 1.0, -2.0};
const std::vector<double> kDeformedSpread{0.0, 1.0, -2.0, 3.5};
constexpr Tolerance kSeriesTol{1e-8, 1e-8};
constexpr Tolerance kSemiHamiltonianTol{1e-7, 1e-7};
constexpr Tolerance kCountTol{0.0, 0.0};
constexpr Tolerance kExpansionTol{1e-10, 1e-10};
constexpr Tolerance kVerdictTol{1e-12, 1e-8};
constexpr int kHaantjesFields = 5;
constexpr int kFlowPairs = 50;
constexpr int kOraclePoints = 16;
constexpr int kOracleStates = 16;
constexpr int kTsarevDraws = 3;
constexpr int kMomentChain = 3;

class SuiteRun {
 public:
  SuiteRun(const ManifoldSpec& spec, const RunOptions& opt)
      : spec_(spec), opt_(opt), structure_(spec.structure()), n_(spec.dim()) {
    samples_ = sample_points(spec.box, opt.samples, opt.seed);
    base_ = spec.series_base ? *spec.series_base : spec.box.center();
    try {
      chart_base_ = structure_->chart_point(base_);
    } catch (const std::exception& e) {
      chart_base_ = base_;
      warnings_.push_back(std::string("chart point of the series base unavailable: ") + e.what());
    }
  }

  void add_algebra();
  void add_flows();
  void add_flat();
  void add_compat();
  void add_riemannian();
  void add_benney();
  Report finish(Report report);

 private:
  bool canonical() const { return structure_->chart() == ChartKind::canonical; }
  std::vector<std::vector<double>> polydisc_points(const Structure& st, std::span<const double> chart_base,
                                                   double radius) const;
  void add_box_group(Group g) { box_groups_.push_back(std::move(g)); }
  Stage box_stage() const;
  void add_tsarev_solutions();

  const ManifoldSpec& spec_;
  RunOptions opt_;
  std::shared_ptr<const Structure> structure_;
  int n_;
  std::vector<std::vector<double>> samples_;
  std::vector<double> base_, chart_base_;
  std::vector<Group> box_groups_;
  std::vector<Stage> stages_;
  std::vector<CheckResult> globals_;
  std::vector<InfoItem> info_;
  std::vector<std::string> warnings_;
  std::map<std::string, std::vector<std::vector<double>>> stages_points_;
};

// Points x = base + t (sample - base) with t halved until the chart point
// lies within half the radius of the series base.
std::vector<std::vector<double>> SuiteRun::polydisc_points(const Structure& st, std::span<const double> chart_base,
                                                           double radius) const {
  std::vector<std::vector<double>> out;
  for (const auto& s : samples_) {
    double t = 1.0;
    for (int attempt = 0; attempt < 60; ++attempt, t *= 0.5) {
      std::vector<double> x(s.size());
      for (std::size_t i = 0; i < s.size(); ++i) x[i] = base_[i] + t * (s[i] - base_[i]);
      if (!std::isfinite(radius)) {
        out.push_back(std::move(x));
        break;
      }
      std::vector<double> y;
      try {
        y = st.chart_point(x);
      } catch (const std::exception&) {
        continue;
      }
      double dist = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) dist = std::max(dist, std::abs(y[i] - chart_base[i]));
      if (dist <= 0.5 * radius) {
        out.push_back(std::move(x));
        break;
      }
    }
  }
  return out;
}

Stage SuiteRun::box_stage() const {
  Stage st;
  st.tag = "box";
  for (const auto& g : box_groups_) st.checks.insert(st.checks.end(), g.checks.begin(), g.checks.end());
  st.count = samples_.size();
  st.points = samples_;
  st.eval = [this](std::size_t i, Recorder& rec) {
    const auto& x = samples_[i];
    const LocalFrame frame = structure_->frame(x, opt_.frame_order);
    const PointData pd = point_data(frame);
    const PointCtx ctx{i, x, frame, pd};
    for (const auto& g : box_groups_) {
      Rng rng(derive_seed(opt_.seed, g.tag, i));
      try {
        g.fn(ctx, rng, rec);
      } catch (const std::exception& e) {
        rec.error_open(names_of(g.checks), e.what());
      }
    }
  };
  return st;
}

void SuiteRun::add_algebra() {
  const Tolerance t = opt_.tol;
  auto zs = std::make_shared<std::vector<PolyField>>();
  Rng zr(derive_seed(opt_.seed, "algebra.haantjes.fields", 0));
  for (int k = 0; k < kHaantjesFields; ++k) zs->emplace_back(chart_base_, zr);

  add_box_group({"algebra",
                 {{"algebra.associativity", t},
                  {"algebra.commutativity", t},
                  {"algebra.haantjes", t},
                  {"algebra.hertling_manin", t},
                  {"algebra.polarization", t},
                  {"algebra.unity", t},
                  {"algebra.unity_invariance", t},
                  {"algebra.eigen_gap", t, Aggregate::info_min}},
                 [this, zs](const PointCtx& p, Rng& rng, Recorder& rec) {
                   const PointData& pd = p.pd;
                   const auto& y = p.frame.point;
                   rec.put("algebra.commutativity", commutativity_residual(pd.c));
                   rec.put("algebra.associativity", associativity_residual(pd.c));
                   rec.put("algebra.hertling_manin", hertling_manin_residual(pd.c, pd.dc));
                   for (std::size_t k = 0; k < zs->size(); ++k) {
                     const VectorAtPoint z = (*zs)[k].at(y);
                     const Values v = structure_operator(pd.c, z.v.data());
                     const Values dv = structure_operator_gradient(pd.c, pd.dc, z);
                     rec.put("algebra.haantjes", haantjes_residual(v, dv));
                     if (k == 0) rec.put("algebra.eigen_gap", min_eigen_gap(v), 0.0);
                   }
                   const int ord = opt_.frame_order;
                   const PolyField fx(chart_base_, rng), fy(chart_base_, rng), fw(chart_base_, rng);
                   rec.put("algebra.polarization",
                           polarization_residual(p.frame.c, fx.jets(y, ord), fy.jets(y, ord), fw.jets(y, ord)));
                   FieldJets e;
                   try {
                     e = unity_jets(p.frame.c);
                   } catch (const DomainError&) {
                     rec.skip("algebra.unity", "no unity at this point");
                     rec.skip("algebra.unity_invariance", "no unity at this point");
                     return;
                   }
                   const VectorAtPoint ev = vector_at(e);
                   const Residual u = unity_residual(pd.c, ev.v.data());
                   if (!u.within(opt_.tol)) {
                     rec.skip("algebra.unity", "no unity at this point");
                     rec.skip("algebra.unity_invariance", "no unity at this point");
                     return;
                   }
                   rec.put("algebra.unity", u);
                   Values scale;
                   const Values lie = lie_derivative_c(ev, pd.c, pd.dc, &scale);
                   Residual r;
                   for (std::size_t k = 0; k < lie.size(); ++k) r.absorb(lie.flat(k), scale.flat(k));
                   rec.put("algebra.unity_invariance", r);
                 }});

  if (canonical())
    add_box_group({"algebra.diagonal",
                   {{"algebra.diagonal_dependence", t}, {"algebra.diagonal_pattern", t}},
                   [](const PointCtx& p, Rng&, Recorder& rec) {
                     const DiagonalCheck d = diagonal_structure_check(p.pd.c, p.pd.dc);
                     rec.put("algebra.diagonal_pattern", d.pattern);
                     if (d.dependence_tested)
                       rec.put("algebra.diagonal_dependence", d.dependence);
                     else
                       rec.skip("algebra.diagonal_dependence", "some diagonal entry vanishes");
                   }});
}

void SuiteRun::add_flows() {
  const Tolerance t = opt_.tol;
  add_box_group({"flows",
                 {{"flows.bracket_identity", t}, {"flows.operator_commutation", t}, {"flows.sufficient_forms", t}},
                 [this](const PointCtx& p, Rng& rng, Recorder& rec) {
                   const auto& y = p.frame.point;
                   const int ord = opt_.frame_order;
                   const PolyField fx(chart_base_, rng), fy(chart_base_, rng), fz(chart_base_, rng);
                   const FieldJets xj = fx.jets(y, ord), yj = fy.jets(y, ord), zj = fz.jets(y, ord);
                   const VectorAtPoint xa = vector_at(xj), ya = vector_at(yj);
                   rec.put("flows.sufficient_forms", sufficient_forms_agreement(p.pd.c, p.pd.dc, xa, ya));
                   rec.put("flows.bracket_identity", bracket_identity_residual(p.frame.c, xj, yj, zj));
                   rec.put("flows.operator_commutation",
                           operator_commutator_residual(structure_operator(p.pd.c, xa.v.data()),
                                                        structure_operator(p.pd.c, ya.v.data())));
                 }});

  // Verdict comparison over field pairs at a fixed set of points.
  struct OraclePoint {
    std::vector<double> sample;
    LocalFrame frame;
    PointData pd;
    std::optional<VectorAtPoint> unity;
  };
  auto pts = std::make_shared<std::vector<OraclePoint>>();
  const std::size_t np = std::min<std::size_t>(kOraclePoints, samples_.size());
  for (std::size_t k = 0; k < np; ++k) {
    try {
      OraclePoint op;
      op.sample = samples_[k];
      op.frame = structure_->frame(samples_[k], 1);
      op.pd = point_data(op.frame);
      try {
        const FieldJets e = unity_jets(op.frame.c);
        const VectorAtPoint ev = vector_at(e);
        if (unity_residual(op.pd.c, ev.v.data()).within(opt_.tol)) op.unity = ev;
      } catch (const DomainError&) {
      }
      pts->push_back(std::move(op));
    } catch (const std::exception& e) {
      warnings_.push_back("flows: oracle point " + std::to_string(k) + " dropped: " + e.what());
    }
  }
  const bool has_unity =
      !pts->empty() && std::all_of(pts->begin(), pts->end(), [](const OraclePoint& o) { return o.unity.has_value(); });

  Stage st;
  st.tag = "flows.pairs";
  st.checks = {{"flows.iff_vs_oracle", kCountTol},
               {"flows.sufficient_implies_iff", kCountTol},
               {"flows.commuting_pairs", kCountTol, Aggregate::info_sum}};
  st.count = pts->empty() ? 0 : kFlowPairs;
  st.eval = [this, pts, has_unity](std::size_t idx, Recorder& rec) {
    Rng rng(derive_seed(opt_.seed, "flows.pairs", idx));
    const PolyField fy(chart_base_, rng);
    const PolyField fx_random(chart_base_, rng);
    const int kind = static_cast<int>(idx % 10);
    bool iff = true, oracle = true, sufficient = true;
    std::size_t iff_at = 0, oracle_at = 0;
    for (std::size_t k = 0; k < pts->size(); ++k) {
      const OraclePoint& op = (*pts)[k];
      const auto& y = op.frame.point;
      const VectorAtPoint ya = fy.at(y);
      const VectorAtPoint xa = kind == 0 ? ya : (kind == 1 && has_unity) ? *op.unity : fx_random.at(y);
      if (iff && !iff_commutativity_residual(op.pd.c, op.pd.dc, xa, ya).within(kVerdictTol)) {
        iff = false;
        iff_at = k;
      }
      sufficient = sufficient && sufficient_condition_residual(op.pd.c, op.pd.dc, xa, ya).within(kVerdictTol);
      Rng srng(derive_seed(opt_.seed, "flows.states", idx * 1000 + k));
      for (int s = 0; s < kOracleStates; ++s) {
        const JetState js = random_jet_state(y, srng);
        if (oracle && !oracle_residual(op.pd.c, op.pd.dc, xa, ya, js).within(kVerdictTol)) {
          oracle = false;
          oracle_at = k;
        }
      }
    }
    rec.put_at("flows.iff_vs_oracle", iff == oracle ? 0.0 : 1.0, (*pts)[iff ? oracle_at : iff_at].sample);
    rec.put_at("flows.sufficient_implies_iff", sufficient && !iff ? 1.0 : 0.0, (*pts)[iff_at].sample);
    rec.put("flows.commuting_pairs", oracle ? 1.0 : 0.0, 0.0);
  };
  stages_.push_back(std::move(st));
}

void SuiteRun::add_flat() {
  const Tolerance t = opt_.tol;
  add_box_group({"flat",
                 {{"flat.compatibility_brackets", t},
                  {"flat.curvature", t},
                  {"flat.deformed_flatness", t},
                  {"flat.scc", t},
                  {"flat.torsion", t}},
                 [](const PointCtx& p, Rng&, Recorder& rec) {
                   const PointData& pd = p.pd;
                   rec.put("flat.torsion", torsion_residual(pd.gamma));
                   rec.put("flat.curvature", flatness_residual(pd));
                   rec.put("flat.scc", symmetric_nabla_c_residual(pd));
                   for (double z : kDeformedFlat) {
                     Values scale;
                     const Values rz = deformed_curvature(pd, z, &scale);
                     Residual r;
                     for (std::size_t k = 0; k < rz.size(); ++k) r.absorb(rz.flat(k), scale.flat(k));
                     rec.put("flat.deformed_flatness", r);
                   }
                   const CompatibilityBrackets b = compatibility_residual(pd);
                   Residual r = b.curvature;
                   r.absorb(b.mixed);
                   r.absorb(b.associativity);
                   rec.put("flat.compatibility_brackets", r);
                 }});

  const std::vector<std::string> hier_checks{"flat.hierarchy_admissible", "flat.hierarchy_commuting",
                                             "flat.hierarchy_deformed", "flat.hierarchy_recursion"};
  auto hier = std::make_shared<Hierarchy>();
  try {
    *hier = spec_hierarchy(spec_, opt_);
    globals_.push_back(global_result("flat.hierarchy_consistency", {0.0, 1e-10}, hier->report.consistency,
                                     std::max(1.0, hier->report.scale)));
    info_.push_back({"flat.hierarchy_radius", std::isfinite(hier->radius) ? hier->radius : -1.0, base_,
                     std::isfinite(hier->radius) ? "" : "polynomial fields, no truncation"});
  } catch (const std::exception& e) {
    globals_.push_back(global_error("flat.hierarchy_consistency", {0.0, 1e-10}, e.what(), base_));
    for (const auto& c : hier_checks) globals_.push_back(global_skip(c, kSeriesTol, "hierarchy not built"));
    return;
  }

  Stage st;
  st.tag = "flat.hierarchy";
  for (const auto& c : hier_checks) st.checks.push_back({c, kSeriesTol});
  st.points = polydisc_points(*structure_, chart_base_, hier->radius);
  st.count = st.points.size();
  st.eval = [this, hier](std::size_t i, Recorder& rec) {
    const auto& pts = stages_points_.at("flat.hierarchy");
    const LocalFrame frame = structure_->frame(pts[i], opt_.frame_order);
    const PointData pd = point_data(frame);
    std::vector<VectorAtPoint> all;
    for (const auto& chain : hier->fields) {
      std::vector<VectorAtPoint> levels;
      for (const auto& f : chain) levels.push_back(evaluate(f, frame.point));
      for (std::size_t a = 0; a < levels.size(); ++a) {
        rec.put("flat.hierarchy_recursion", recursion_residual(pd, levels[a], a ? &levels[a - 1] : nullptr));
        rec.put("flat.hierarchy_admissible", admissible_residual(pd, levels[a]));
      }
      for (double z : kDeformedFlat) rec.put("flat.hierarchy_deformed", deformed_parallel_residual(pd, levels, z));
      all.insert(all.end(), levels.begin(), levels.end());
    }
    for (std::size_t a = 0; a < all.size(); ++a)
      for (std::size_t b = a + 1; b < all.size(); ++b)
        rec.put("flat.hierarchy_commuting", sufficient_condition_residual(pd.c, pd.dc, all[a], all[b]));
  };
  stages_points_["flat.hierarchy"] = st.points;
  stages_.push_back(std::move(st));
}

void SuiteRun::add_compat() {
  const Tolerance t = opt_.tol;
  add_box_group({"compat",
                 {{"compat.bianchi", t},
                  {"compat.curvature_antisymmetry", t},
                  {"compat.deformed_spread", t},
                  {"compat.scc", t},
                  {"compat.shc", t},
                  {"compat.shc_vectorwise", t},
                  {"compat.torsion", t},
                  {"compat.curvature_max", t, Aggregate::info_max}},
                 [this](const PointCtx& p, Rng& rng, Recorder& rec) {
                   const PointData& pd = p.pd;
                   rec.put("compat.torsion", torsion_residual(pd.gamma));
                   rec.put("compat.scc", symmetric_nabla_c_residual(pd));
                   rec.put("compat.shc", curvature_obstruction_residual(pd));
                   std::vector<double> x;
                   for (int i = 0; i < n_; ++i) x.push_back(rng.uniform(-1.0, 1.0));
                   rec.put("compat.shc_vectorwise", vectorwise_obstruction_residual(pd, x));
                   rec.put("compat.bianchi", bianchi_form_residual(pd));
                   rec.put("compat.deformed_spread", deformed_curvature_spread(pd, kDeformedSpread));
                   rec.put("compat.curvature_antisymmetry", curvature_antisymmetry_residual(pd));
                   rec.put("compat.curvature_max", flatness_residual(pd).value, 0.0);
                 }});
  if (!canonical()) return;

  add_box_group({"compat.canonical",
                 {{"compat.canonical_connection_distinct", t},
                  {"compat.canonical_connection_repeated", t},
                  {"compat.curvature_repeated", t},
                  {"compat.curvature_trace_like", t},
                  {"compat.equivalence", kCountTol},
                  {"compat.tsarev_compatibility_first", t},
                  {"compat.tsarev_compatibility_second", t}},
                 [this](const PointCtx& p, Rng&, Recorder& rec) {
                   const PointData& pd = p.pd;
                   const CanonicalIdentities ci = canonical_connection_identities(pd.gamma);
                   rec.put("compat.canonical_connection_repeated", ci.repeated);
                   rec.put("compat.canonical_connection_distinct", ci.distinct);
                   const TsarevCompatibility tc = tsarev_compatibility_residual(pd);
                   rec.put("compat.tsarev_compatibility_first", tc.first);
                   rec.put("compat.tsarev_compatibility_second", tc.second);
                   const CurvatureComponents cc = canonical_curvature_components(pd);
                   rec.put("compat.curvature_trace_like", cc.trace_like);
                   rec.put("compat.curvature_repeated", cc.repeated);
                   const bool shc = curvature_obstruction_residual(pd).within(opt_.tol);
                   const bool bianchi = bianchi_form_residual(pd).within(opt_.tol);
                   const bool comps = cc.trace_like.within(opt_.tol) && cc.repeated.within(opt_.tol);
                   rec.put("compat.equivalence", (shc == bianchi && bianchi == comps) ? 0.0 : 1.0, 0.0);
                 }});
  add_tsarev_solutions();
}

void SuiteRun::add_tsarev_solutions() {
  const std::vector<std::string> names{"compat.tsarev_admissible", "compat.tsarev_commuting",
                                       "compat.tsarev_semi_hamiltonian", "compat.tsarev_system"};
  auto sols = std::make_shared<std::vector<SeriesField>>();
  double radius = kInf;
  const int K = opt_.series_order;
  try {
    const LocalFrame f = structure_->frame(base_, K - 1);
    Rng rng(derive_seed(opt_.seed, "compat.tsarev.boundary", 0));
    SolveReport rep;
    for (int draw = 0; draw < kTsarevDraws; ++draw) {
      std::vector<std::vector<double>> boundary(static_cast<std::size_t>(n_));
      for (int i = 0; i < n_; ++i) {
        boundary[i].push_back(static_cast<double>(i) + rng.uniform(-0.25, 0.25));
        double fact = 1.0;
        for (int d = 1; d <= K; ++d) {
          fact *= d;
          boundary[i].push_back(rng.uniform(-1.0, 1.0) / fact);
        }
      }
      sols->push_back(tsarev_solve(f.connection, f.point, boundary, K, &rep));
      radius = std::min(radius, polydisc_radius(sols->back()));
    }
    globals_.push_back(
        global_result("compat.tsarev_consistency", kSeriesTol, rep.consistency, std::max(1.0, rep.scale)));
    info_.push_back({"compat.tsarev_radius", radius, base_, ""});
  } catch (const std::exception& e) {
    globals_.push_back(global_error("compat.tsarev_consistency", kSeriesTol, e.what(), base_));
    for (const auto& c : names) globals_.push_back(global_skip(c, kSeriesTol, "no Tsarev solutions"));
    return;
  }

  Stage st;
  st.tag = "compat.tsarev";
  st.checks = {{"compat.tsarev_admissible", kSeriesTol},
               {"compat.tsarev_commuting", kSeriesTol},
               {"compat.tsarev_semi_hamiltonian", kSemiHamiltonianTol},
               {"compat.tsarev_system", kSeriesTol}};
  st.points = polydisc_points(*structure_, chart_base_, radius);
  st.count = st.points.size();
  stages_points_["compat.tsarev"] = st.points;
  st.eval = [this, sols](std::size_t i, Recorder& rec) {
    const auto& pts = stages_points_.at("compat.tsarev");
    const LocalFrame frame = structure_->frame(pts[i], opt_.frame_order);
    const PointData pd = point_data(frame);
    std::vector<VectorAtPoint> vs;
    for (const auto& s : *sols) {
      const VectorAtPoint v = evaluate(s, frame.point);
      rec.put("compat.tsarev_system", tsarev_system_residual(pd, v));
      rec.put("compat.tsarev_admissible", admissible_residual(pd, v));
      rec.put("compat.tsarev_semi_hamiltonian", semi_hamiltonian_residual(reexpand(s, frame.point, 2)));
      vs.push_back(v);
    }
    for (std::size_t a = 0; a < vs.size(); ++a)
      for (std::size_t b = a + 1; b < vs.size(); ++b)
        rec.put("compat.tsarev_commuting", sufficient_condition_residual(pd.c, pd.dc, vs[a], vs[b]));
  };
  stages_.push_back(std::move(st));
}

void SuiteRun::add_riemannian() {
  const Tolerance t = opt_.tol;
  std::vector<CheckDef> defs{{"riemannian.invariance_contravariant", t},
                             {"riemannian.invariance_covariant", t},
                             {"riemannian.metricity", t},
                             {"riemannian.qexp_cyclic", kExpansionTol}};
  if (canonical()) {
    defs.push_back({"riemannian.egorov_closure", t});
    defs.push_back({"riemannian.egorov_off_diagonal", t});
  }
  const bool pairing = !spec_.expansion.empty() && spec_.c.has_value();
  if (!spec_.expansion.empty() && !pairing)
    warnings_.push_back("riemannian: expansion fields need an expression structure; pairing not checked");
  if (pairing) {
    defs.push_back({"riemannian.qexp_pairing", t});
    defs.push_back({"riemannian.qexp_pairing_second", t, Aggregate::info_max});
  }
  const bool has_connection = structure_->connection() != ConnectionKind::none;
  add_box_group({"riemannian", defs, [this, has_connection, pairing](const PointCtx& p, Rng& rng, Recorder& rec) {
                   const PointData& pd = p.pd;
                   if (has_connection)
                     rec.put("riemannian.metricity", metricity_residual(pd));
                   else
                     rec.skip("riemannian.metricity", "no connection");
                   const InvarianceResidual inv = invariance_residual(*pd.g, pd.c);
                   rec.put("riemannian.invariance_covariant", inv.covariant);
                   rec.put("riemannian.invariance_contravariant", inv.contravariant);
                   if (canonical()) {
                     const EgorovCheck eg = egorov_check(*pd.g, *pd.dg);
                     rec.put("riemannian.egorov_off_diagonal", eg.off_diagonal);
                     rec.put("riemannian.egorov_closure", eg.closure);
                   }
                   std::vector<ExpansionTerm> family;
                   const int terms = 1 + static_cast<int>(rng.uniform() * 3.0);
                   for (int k = 0; k < terms; ++k) {
                     ExpansionTerm e;
                     e.sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
                     for (int i = 0; i < n_; ++i) e.x.push_back(rng.uniform(-1.0, 1.0));
                     family.push_back(std::move(e));
                   }
                   rec.put("riemannian.qexp_cyclic", quadratic_expansion_cyclic(pd.c, family));
                   if (pairing) {
                     std::vector<ExpansionTerm> given;
                     for (const auto& f : spec_.expansion) {
                       ExpansionTerm e;
                       e.sign = f.sign;
                       for (const auto& comp : f.components) e.x.push_back(eval(comp, p.frame.point));
                       given.push_back(std::move(e));
                     }
                     const QuadraticExpansionCheck q = quadratic_expansion_check(pd, given);
                     rec.put("riemannian.qexp_pairing", q.pairing_first);
                     rec.put("riemannian.qexp_pairing_second", q.pairing_second.value, 0.0);
                   }
                 }});
}

void SuiteRun::add_benney() {
  const Tolerance t = opt_.tol;
  const LaxFamily& family = *spec_.lax;
  const Twist twist = spec_.twist;
  auto red_structure = std::make_shared<ReductionStructure>(family, spec_.box, twist);
  add_box_group(
      {"benney",
       {{"benney.asymptotics", t},
        {"benney.canonical", t},
        {"benney.chart_coherence", t},
        {"benney.critical_points", t},
        {"benney.gibbons_tsarev_potential", t},
        {"benney.gibbons_tsarev_velocities", t},
        {"benney.lambda_pp", t},
        {"benney.loewner", t},
        {"benney.moment_chain", t},
        {"benney.residue_diagonal", t},
        {"benney.curvature_max", t, Aggregate::info_max}},
       [this, &family, twist, red_structure](const PointCtx& p, Rng&, Recorder& rec) {
         const auto& u = p.sample;
         const ReductionPoint red = reduce(family, u, opt_.frame_order);
         Residual cp;
         for (double v : red.v0) {
           const auto d = lambda_p_derivatives(family, u, v, 2);
           cp.absorb(d[1], std::abs(d[2]) * std::max(1.0, std::abs(v)));
         }
         rec.put("benney.critical_points", cp);
         rec.put("benney.loewner", loewner_residual(family, red, loewner_probe(family, red)));
         const GibbonsTsarev gt = gibbons_tsarev_residual(family, red);
         rec.put("benney.gibbons_tsarev_velocities", gt.velocities);
         rec.put("benney.gibbons_tsarev_potential", gt.potential);
         rec.put("benney.lambda_pp", lambda_pp_identity_residual(family, red));
         rec.put("benney.moment_chain", moment_chain_residual(family, red, kMomentChain));

         const ReductionPoint tred = twist.active() ? reduce(family, u, opt_.frame_order, twist) : red;
         rec.put("benney.residue_diagonal", residue_diagonal_residual(family, tred));
         rec.put("benney.chart_coherence", chart_coherence_residual(family, tred, twist));
         const Values c = values_of(tred.c);
         const Values dc = gradients_of(tred.c);
         const DiagonalCheck dg = diagonal_structure_check(c, dc);
         Residual canon = dg.pattern;
         for (double f : dg.f) canon.absorb(f - 1.0, 1.0);
         rec.put("benney.canonical", canon);

         const MomentSeries closed = moments(family, u, kMomentChain + 2, 0);
         const MomentSeries series = laurent_moments(family, u, kMomentChain + 2, 0);
         Residual asym;
         for (std::size_t k = 0; k < closed.a.size(); ++k)
           asym.absorb(closed.a[k].value() - series.a[k].value(),
                       std::max(std::abs(closed.a[k].value()), std::abs(series.a[k].value())));
         asym.absorb(std::max(closed.violation, series.violation), 0.0);
         rec.put("benney.asymptotics", asym);

         const PointData rpd = spec_.c ? point_data(red_structure->frame(u, 1)) : p.pd;
         rec.put("benney.curvature_max", flatness_residual(rpd).value, 0.0);
       }});

  // Tsarev solve seeded with the reduction's own velocities on the coordinate lines.
  const int K = opt_.series_order;
  auto sol = std::make_shared<SeriesField>();
  double radius = kInf;
  try {
    const ReductionPoint red = reduce(family, base_, K, twist);
    const LocalFrame f = red_structure->frame(base_, K - 1);
    std::vector<std::vector<double>> boundary(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i)
      for (int d = 0; d <= K; ++d) {
        std::vector<int> alpha(static_cast<std::size_t>(n_), 0);
        alpha[static_cast<std::size_t>(i)] = d;
        boundary[i].push_back(red.v_y[i].coeff(alpha));
      }
    SolveReport rep;
    *sol = tsarev_solve(f.connection, f.point, boundary, K, &rep);
    radius = polydisc_radius(*sol);
    info_.push_back({"benney.tsarev_radius", radius, base_, ""});
  } catch (const std::exception& e) {
    globals_.push_back(global_error("benney.tsarev_recovery", kSemiHamiltonianTol, e.what(), base_));
    return;
  }
  Stage st;
  st.tag = "benney.tsarev";
  st.checks = {{"benney.tsarev_recovery", kSemiHamiltonianTol}};
  st.points = polydisc_points(*red_structure, red_structure->chart_point(base_), radius);
  st.count = st.points.size();
  stages_points_["benney.tsarev"] = st.points;
  st.eval = [this, &family, twist, sol](std::size_t i, Recorder& rec) {
    const auto& u = stages_points_.at("benney.tsarev")[i];
    const ReductionPoint red = reduce(family, u, 0, twist);
    const VectorAtPoint v = evaluate(*sol, red.y0);
    rec.put("benney.tsarev_recovery", difference(v.v.data(), red.v0));
  };
  stages_.push_back(std::move(st));
}

Report SuiteRun::finish(Report report) {
  std::vector<Stage> all = stages_;
  if (!box_groups_.empty()) all.push_back(box_stage());
  for (const auto& st : all) {
    const auto res = run_stage(st, opt_.parallel);
    for (std::size_t c = 0; c < st.checks.size(); ++c) {
      std::vector<const PointOutcome*> outs;
      for (const auto& row : res) outs.push_back(&row[c]);
      const CheckDef& def = st.checks[c];
      if (def.agg == Aggregate::check)
        report.checks.push_back(aggregate_check(def, outs, st.points));
      else
        report.info.push_back(aggregate_info(def, outs, st.points));
    }
  }
  report.checks.insert(report.checks.end(), globals_.begin(), globals_.end());
  report.info.insert(report.info.end(), info_.begin(), info_.end());
  std::sort(report.checks.begin(), report.checks.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  std::sort(report.info.begin(), report.info.end(), [](const auto& a, const auto& b) { return a.name < b.name; });
  report.warnings.insert(report.warnings.end(), warnings_.begin(), warnings_.end());
  report.passed = std::none_of(report.checks.begin(), report.checks.end(),
                               [](const CheckResult& c) { return c.status == CheckStatus::fail; });
  return report;
}

}  // namespace

Hierarchy spec_hierarchy(const ManifoldSpec& spec, const RunOptions& options) {
  const auto structure = spec.structure();
  if (structure->connection() == ConnectionKind::none) throw InapplicableSuite("the hierarchy needs a connection");
  const std::vector<double> base = spec.series_base ? *spec.series_base : spec.box.center();
  const int K = options.series_order;
  const LocalFrame f = structure->frame(base, K - 1);
  SeriesContext ctx{f.point, K, f.c, f.connection};
  const int p_max = options.hierarchy_p_max > 0 ? options.hierarchy_p_max : spec.dim();
  return build_hierarchy(ctx, p_max, options.hierarchy_alpha_max);
}

Report run_suite(const ManifoldSpec& spec, const RunOptions& options) {
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), options.suite) == names.end())
    throw SpecError("--suite", "unknown suite '" + options.suite + "'");
  if (options.samples < 1) throw SpecError("--samples", "must be positive");
  if (options.series_order < 2) throw SpecError("--order", "must be at least 2");

  auto structure = spec.structure();
  const bool has_connection = structure->connection() != ConnectionKind::none;
  const std::map<std::string, std::pair<bool, const char*>> applicable{
      {"algebra", {true, ""}},
      {"flows", {true, ""}},
      {"flat", {has_connection, "needs a connection or metric"}},
      {"compat", {has_connection, "needs a connection or metric"}},
      {"riemannian", {structure->has_metric(), "needs a metric"}},
      {"benney", {spec.lax.has_value(), "needs a lax section"}}};

  Report report;
  report.spec_name = spec.name;
  report.suite = options.suite;
  report.options = options;
  report.warnings = spec.warnings;
  std::vector<std::string> run;
  if (options.suite == "all") {
    for (const auto& s : names) {
      if (s == "all") continue;
      const bool excluded = std::find(options.exclude.begin(), options.exclude.end(), s) != options.exclude.end();
      if (applicable.at(s).first && !excluded)
        run.push_back(s);
      else
        report.suites_skipped.push_back(s);
    }
  } else {
    const auto& [ok, why] = applicable.at(options.suite);
    if (!ok) throw InapplicableSuite("suite '" + options.suite + "' is not applicable: " + why);
    run.push_back(options.suite);
  }

  SuiteRun sr(spec, options);
  for (const auto& s : run) {
    if (s == "algebra") sr.add_algebra();
    if (s == "flows") sr.add_flows();
    if (s == "flat") sr.add_flat();
    if (s == "compat") sr.add_compat();
    if (s == "riemannian") sr.add_riemannian();
    if (s == "benney") sr.add_benney();
  }
  report.suites_run = run;
  return sr.finish(std::move(report));
}

}  // namespace fman
