#include <cmath>
#include <sstream>

#include <json.hpp>

#include "fman/sampling.hpp"
#include "fman/suite.hpp"

namespace fman {

using ojson = nlohmann::ordered_json;

namespace {

ojson number(double v) { return std::isfinite(v) ? ojson(v) : ojson(nullptr); }

ojson point_json(const std::vector<double>& p) {
  ojson a = ojson::array();
  for (double v : p) a.push_back(number(v));
  return a;
}

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    default: return "skipped";
  }
}

}  // namespace

std::string report_json(const Report& r) {
  ojson j;
  j["format"] = kReportFormat;
  j["spec"] = r.spec_name;
  j["suite"] = r.suite;
  j["suites_run"] = r.suites_run;
  j["suites_skipped"] = r.suites_skipped;
  j["environment"] = {{"seed", r.options.seed},
                      {"samples", r.options.samples},
                      {"prng", kPrngName},
                      {"uniform", "(x >> 11) * 2^-53"},
                      {"orders", {{"frame", r.options.frame_order}, {"series", r.options.series_order}}},
                      {"tolerances", {{"abs", r.options.tol.abs}, {"rel", r.options.tol.rel}}}};
  ojson checks = ojson::array();
  for (const auto& c : r.checks) {
    ojson o;
    o["name"] = c.name;
    o["status"] = status_name(c.status);
    o["passed"] = c.status != CheckStatus::fail;
    o["residual_max"] = number(c.residual_max);
    o["residual_median"] = number(c.residual_median);
    o["scale"] = number(c.scale);
    o["tolerance"] = {{"abs", c.tol.abs}, {"rel", c.tol.rel}};
    o["evaluated"] = c.evaluated;
    o["skipped"] = c.skipped;
    o["errors"] = c.errors;
    o["witness"] = c.witness ? point_json(*c.witness) : ojson(nullptr);
    if (!c.message.empty()) o["message"] = c.message;
    checks.push_back(std::move(o));
  }
  j["checks"] = std::move(checks);
  ojson info = ojson::array();
  for (const auto& i : r.info) {
    ojson o;
    o["name"] = i.name;
    o["value"] = number(i.value);
    o["point"] = i.point ? point_json(*i.point) : ojson(nullptr);
    if (!i.text.empty()) o["text"] = i.text;
    info.push_back(std::move(o));
  }
  j["info"] = std::move(info);
  j["warnings"] = r.warnings;
  j["passed"] = r.passed;
  return j.dump(2) + "\n";
}

std::string report_text(const Report& r) {
  std::ostringstream os;
  os.precision(3);
  os << "spec " << r.spec_name << ", suite " << r.suite << ", seed " << r.options.seed << ", " << r.options.samples
     << " samples\n";
  for (const auto& c : r.checks) {
    os << "  " << (c.status == CheckStatus::pass ? "PASS" : c.status == CheckStatus::fail ? "FAIL" : "SKIP") << "  "
       << c.name << "  max " << c.residual_max << "  scale " << c.scale << "  (" << c.evaluated << " evaluated";
    if (c.errors) os << ", " << c.errors << " errors";
    if (c.skipped) os << ", " << c.skipped << " skipped";
    os << ")";
    if (c.witness) {
      os << "  at (";
      for (std::size_t k = 0; k < c.witness->size(); ++k) os << (k ? ", " : "") << (*c.witness)[k];
      os << ")";
    }
    if (!c.message.empty()) os << "  " << c.message;
    os << "\n";
  }
  for (const auto& i : r.info) os << "  info  " << i.name << " = " << i.value << (i.text.empty() ? "" : "  " + i.text) << "\n";
  for (const auto& w : r.warnings) os << "  warning: " << w << "\n";
  if (!r.suites_skipped.empty()) {
    os << "  suites not run:";
    for (const auto& s : r.suites_skipped) os << " " << s;
    os << "\n";
  }
  os << (r.passed ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace fman
