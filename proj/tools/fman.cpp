// fman: run check suites, build hierarchies and Benney reductions from spec files.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "fman/benney.hpp"
#include "fman/error.hpp"
#include "fman/spec.hpp"
#include "fman/suite.hpp"
#include "fman_fixtures.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;

struct Common {
  std::string spec;
  std::string out;
  bool json = false;
  bool serial = false;
  std::optional<std::uint64_t> seed;
  std::optional<int> samples;
  std::optional<double> tol_abs, tol_rel;
  int order = 8;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--spec", c.spec, "spec file (fman-spec/1), or fixture:NAME")->required();
  cmd->add_option("--seed", c.seed, "sampling seed (default: the spec's, else 42)");
  cmd->add_option("--samples", c.samples, "sample points (default: the spec's, else 32)")->check(CLI::PositiveNumber);
  cmd->add_option("--tol-abs", c.tol_abs, "absolute tolerance")->check(CLI::NonNegativeNumber);
  cmd->add_option("--tol-rel", c.tol_rel, "relative tolerance")->check(CLI::NonNegativeNumber);
  cmd->add_option("--order", c.order, "series truncation order K")->check(CLI::Range(2, 24));
  cmd->add_option("--out", c.out, "write the JSON artifact here");
  cmd->add_flag("--json", c.json, "print JSON instead of the text summary");
  cmd->add_flag("--serial", c.serial, "evaluate sample points serially");
}

std::string read_spec_text(const std::string& where) {
  constexpr std::string_view prefix = "fixture:";
  if (where.rfind(prefix, 0) == 0) {
    const std::string name = where.substr(prefix.size());
    for (const auto& [fname, text] : fman::kFixtures)
      if (fname == name) return std::string(text);
    throw fman::SpecError("", "no shipped fixture named '" + name + "'");
  }
  std::ifstream in(where);
  if (!in) throw fman::SpecError("", "cannot open " + where);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fman::RunOptions options_for(const fman::ManifoldSpec& spec, const Common& c, const std::string& suite) {
  fman::RunOptions o;
  o.suite = suite;
  o.seed = c.seed.value_or(spec.seed);
  o.samples = c.samples.value_or(spec.samples);
  o.tol = spec.tol;
  if (c.tol_abs) o.tol.abs = *c.tol_abs;
  if (c.tol_rel) o.tol.rel = *c.tol_rel;
  o.series_order = c.order;
  o.parallel = !c.serial;
  return o;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw fman::SpecError("--out", "cannot write " + path);
  out << text;
}

void emit(const Common& c, const fman::Report& report, const std::string& artifact) {
  if (!c.out.empty()) write_file(c.out, artifact);
  std::cout << (c.json ? artifact : fman::report_text(report));
}

int cmd_check(const Common& c, const std::string& suite) {
  const std::string text = read_spec_text(c.spec);
  const fman::ManifoldSpec spec = fman::parse_spec(text);
  const fman::Report report = fman::run_suite(spec, options_for(spec, c, suite));
  emit(c, report, fman::report_json(report));
  return report.passed ? kExitPass : kExitFail;
}

int cmd_hierarchy(const Common& c, int p_max, int alpha_max) {
  const fman::ManifoldSpec spec = fman::parse_spec(read_spec_text(c.spec));
  fman::RunOptions opt = options_for(spec, c, "flat");
  opt.hierarchy_alpha_max = alpha_max;
  opt.hierarchy_p_max = p_max;
  if (p_max > spec.dim()) throw fman::SpecError("--p-max", "exceeds the dimension");
  const fman::Report report = fman::run_suite(spec, opt);
  if (!report.passed) {
    std::cerr << "refusing to build the hierarchy: the flat suite fails";
    for (const auto& ch : report.checks)
      if (ch.status == fman::CheckStatus::fail) std::cerr << " [" << ch.name << "]";
    std::cerr << ".\nThe structure is not a flat F-manifold; run `fman check --suite compat` for the non-flat "
                 "compatibility conditions.\n";
    if (c.json) std::cout << fman::report_json(report);
    return kExitFail;
  }
  const fman::Hierarchy h = fman::spec_hierarchy(spec, opt);
  emit(c, report, fman::hierarchy_json(spec, h, report));
  return kExitPass;
}

int cmd_benney(const Common& c, const std::string& twist) {
  const std::string text = read_spec_text(c.spec);
  fman::ManifoldSpec spec = fman::parse_spec(text);
  if (!spec.lax) throw fman::InapplicableSuite("the benney command needs a lax section");
  if (!twist.empty()) {
    spec.twist.phi.clear();
    std::stringstream ss(twist);
    std::string part;
    int k = 0;
    while (std::getline(ss, part, ';')) {
      try {
        spec.twist.phi.push_back(fman::parse(part, {"r"}, false, spec.params));
      } catch (const fman::ParseError& e) {
        throw fman::SpecError("--twist/" + std::to_string(k), e.what());
      }
      ++k;
    }
    if (static_cast<int>(spec.twist.phi.size()) != spec.dim())
      throw fman::SpecError("--twist", "expected one function of r per coordinate, separated by ';'");
    try {
      spec.twist = fman::anchor_twist(*spec.lax, spec.box.center(), std::move(spec.twist));
    } catch (const fman::Error& e) {
      throw fman::SpecError("--twist", std::string("cannot anchor the twisted chart at the box center: ") + e.what());
    }
  }
  fman::RunOptions opt = options_for(spec, c, "all");
  opt.exclude = {"flat"};
  const fman::Report report = fman::run_suite(spec, opt);
  emit(c, report, fman::benney_json(spec, text, report));
  return report.passed ? kExitPass : kExitFail;
}

int cmd_fixtures(const std::string& dir) {
  for (const auto& [name, text] : fman::kFixtures) {
    const fman::ManifoldSpec spec = fman::parse_spec(std::string(text));
    std::cout << name << "  n=" << spec.dim() << (spec.lax ? "  lax" : "") << "  chart " << fman::chart_name(spec.chart)
              << "\n";
    if (!dir.empty()) write_file((std::filesystem::path(dir) / (std::string(name) + ".json")).string(), std::string(text));
  }
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checks for F-manifolds, hydrodynamic flows and Benney reductions"};
  app.require_subcommand(1);

  Common check_opts, hier_opts, benney_opts;
  std::string suite = "all";
  auto* check = app.add_subcommand("check", "run a check suite on a spec");
  add_common(check, check_opts);
  check->add_option("--suite", suite, "algebra, flows, flat, compat, riemannian, benney or all")
      ->check(CLI::IsMember(fman::suite_names()));

  int p_max = 0, alpha_max = 2;
  auto* hier = app.add_subcommand("hierarchy", "build the principal hierarchy of a flat structure");
  add_common(hier, hier_opts);
  hier->add_option("--p-max", p_max, "number of flat fields (default: all)")->check(CLI::NonNegativeNumber);
  hier->add_option("--alpha-max", alpha_max, "highest recursion level")->check(CLI::NonNegativeNumber);

  std::string twist;
  auto* benney = app.add_subcommand("benney", "assemble the reduction's canonical chart and run every suite except flat");
  add_common(benney, benney_opts);
  benney->add_option("--twist", twist, "phi_i(r) for the weighted pairing, separated by ';'");

  std::string fixture_dir;
  auto* fixtures = app.add_subcommand("fixtures", "list the shipped fixtures");
  fixtures->add_option("--write", fixture_dir, "also write them into this directory")->check(CLI::ExistingDirectory);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInput;
  }

  try {
    if (*check) return cmd_check(check_opts, suite);
    if (*hier) return cmd_hierarchy(hier_opts, p_max, alpha_max);
    if (*benney) return cmd_benney(benney_opts, twist);
    if (*fixtures) return cmd_fixtures(fixture_dir);
  } catch (const fman::SpecError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const fman::InapplicableSuite& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const fman::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitInput;
}
