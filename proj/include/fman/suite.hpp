#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fman/error.hpp"
#include "fman/hierarchy.hpp"
#include "fman/residual.hpp"
#include "fman/spec.hpp"

namespace fman {

inline constexpr const char* kReportFormat = "fman-report/1";

// The requested suite needs data the spec does not provide.
class InapplicableSuite : public Error {
 public:
  using Error::Error;
};

struct RunOptions {
  std::string suite = "all";
  std::uint64_t seed = 42;
  int samples = 32;
  Tolerance tol;
  int series_order = 8;  // K
  int frame_order = 2;
  int hierarchy_alpha_max = 2;
  int hierarchy_p_max = 0;  // 0: all flat fields
  bool parallel = true;
  std::vector<std::string> exclude;  // left out of "all"
};

enum class CheckStatus { pass, fail, skipped };

struct CheckResult {
  std::string name;
  Tolerance tol;
  double residual_max = 0.0;
  double residual_median = 0.0;
  double scale = 0.0;  // at the worst point
  int evaluated = 0;
  int skipped = 0;
  int errors = 0;
  CheckStatus status = CheckStatus::skipped;
  std::optional<std::vector<double>> witness;
  std::string message;  // first error or skip reason
};

struct InfoItem {
  std::string name;
  double value = 0.0;
  std::optional<std::vector<double>> point;
  std::string text;
};

struct Report {
  std::string spec_name;
  std::string suite;
  std::vector<std::string> suites_run;
  std::vector<std::string> suites_skipped;
  RunOptions options;
  std::vector<CheckResult> checks;  // sorted by name
  std::vector<InfoItem> info;       // sorted by name
  std::vector<std::string> warnings;
  bool passed = true;

  const CheckResult* find(const std::string& name) const;
  const InfoItem* find_info(const std::string& name) const;
};

// Names accepted by run_suite.
const std::vector<std::string>& suite_names();

// Throws SpecError for an unknown suite and InapplicableSuite when the named
// suite needs data the spec lacks.
Report run_suite(const ManifoldSpec& spec, const RunOptions& options);

std::string report_json(const Report& report);
std::string report_text(const Report& report);

// Principal hierarchy at the spec's series base (default: box center).
Hierarchy spec_hierarchy(const ManifoldSpec& spec, const RunOptions& options);

// Series coefficient table plus the flat-suite report.
std::string hierarchy_json(const ManifoldSpec& spec, const Hierarchy& h, const Report& flat_report);
// Assembled Riemann-invariant chart data at the sample points plus the report.
std::string benney_json(const ManifoldSpec& spec, const std::string& spec_text, const Report& report);

}  // namespace fman
