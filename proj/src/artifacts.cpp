#include <cmath>

#include <json.hpp>

#include "fman/benney.hpp"
#include "fman/sampling.hpp"
#include "fman/suite.hpp"

namespace fman {

using ojson = nlohmann::ordered_json;

namespace {

ojson number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson series_json(const SeriesField& f) {
  ojson comps = ojson::array();
  for (const Jet& c : f.comp) {
    ojson terms = ojson::array();
    const JetLayout& layout = c.layout();
    for (std::size_t r = 0; r < layout.size(); ++r) {
      const double v = c.coeffs()[r];
      if (v == 0.0) continue;
      std::vector<int> alpha(layout.index(r).begin(), layout.index(r).end());
      terms.push_back({{"monomial", alpha}, {"coefficient", v}});
    }
    comps.push_back(std::move(terms));
  }
  return comps;
}

}  // namespace

std::string hierarchy_json(const ManifoldSpec& spec, const Hierarchy& h, const Report& flat_report) {
  ojson j;
  j["format"] = "fman-hierarchy/1";
  j["spec"] = spec.name;
  const std::vector<double>& base = h.fields.front().front().base;
  j["base"] = base;
  j["order"] = h.fields.front().front().order();
  j["monomials"] = "coefficients of prod (x_i - base_i)^monomial_i";
  j["radius"] = number(h.radius);
  j["consistency"] = {{"spread", h.report.consistency}, {"scale", h.report.scale}};
  ojson fields = ojson::array();
  for (std::size_t p = 0; p < h.fields.size(); ++p)
    for (std::size_t a = 0; a < h.fields[p].size(); ++a) {
      const SeriesField& f = h.fields[p][a];
      fields.push_back({{"label", f.label}, {"p", p + 1}, {"alpha", a}, {"components", series_json(f)}});
    }
  j["fields"] = std::move(fields);
  j["report"] = ojson::parse(report_json(flat_report));
  return j.dump(2) + "\n";
}

std::string benney_json(const ManifoldSpec& spec, const std::string& spec_text, const Report& report) {
  ojson j;
  j["format"] = "fman-benney/1";
  ojson input = ojson::parse(spec_text);
  if (spec.twist.active()) {
    ojson tw = ojson::array();
    for (const auto& phi : spec.twist.phi) tw.push_back(phi.to_string());
    input["lax"]["twist"] = std::move(tw);
  }
  j["spec"] = std::move(input);

  const int n = spec.dim();
  ojson chart;
  ojson coords = ojson::array(), structure = ojson::array();
  for (int i = 1; i <= n; ++i) {
    coords.push_back((spec.twist.active() ? "y" : "r") + std::to_string(i));
    structure.push_back({{"i", i}, {"j", i}, {"k", i}, {"expr", "1"}});
  }
  chart["coordinates"] = std::move(coords);
  chart["chart"] = "canonical";
  chart["structure"] = std::move(structure);
  chart["metric"] = spec.twist.active() ? "g_ii = phi_i(r^i) d_i A0 (residue pairing)" : "g_ii = d_i A0 (residue pairing)";
  chart["connection"] = "levi-civita";
  ojson points = ojson::array();
  for (const auto& u : sample_points(spec.box, report.options.samples, report.options.seed)) {
    ojson pt;
    pt["u"] = u;
    try {
      const ReductionPoint red = reduce(*spec.lax, u, 0, spec.twist);
      pt["critical_points"] = red.v0;
      pt["riemann_invariants"] = red.r0;
      pt["chart_point"] = red.y0;
      ojson g = ojson::array();
      for (int i = 0; i < n; ++i) g.push_back(number(red.g(i, i).value()));
      pt["metric_diagonal"] = std::move(g);
    } catch (const std::exception& e) {
      pt["error"] = e.what();
    }
    points.push_back(std::move(pt));
  }
  chart["points"] = std::move(points);
  j["chart"] = std::move(chart);
  j["report"] = ojson::parse(report_json(report));
  return j.dump(2) + "\n";
}

}  // namespace fman
