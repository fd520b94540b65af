// Serial vs OpenMP-parallel evaluation of the check suites.
//   fman_bench [--samples N] [--repeats R] [fixture...]

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>
#include <vector>

#include <omp.h>

#include "fman/spec.hpp"
#include "fman/suite.hpp"
#include "fman_fixtures.hpp"

namespace {

double seconds(const fman::ManifoldSpec& spec, fman::RunOptions opt, int repeats, std::string* json) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const fman::Report rep = fman::run_suite(spec, opt);
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    best = std::min(best, dt.count());
    if (r == 0) *json = fman::report_json(rep);
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  int samples = 32, repeats = 3;
  std::vector<std::string> names;
  for (int k = 1; k < argc; ++k) {
    if (std::strcmp(argv[k], "--samples") == 0 && k + 1 < argc) samples = std::atoi(argv[++k]);
    else if (std::strcmp(argv[k], "--repeats") == 0 && k + 1 < argc) repeats = std::atoi(argv[++k]);
    else names.emplace_back(argv[k]);
  }
  if (names.empty())
    for (const auto& [name, text] : fman::kFixtures) names.emplace_back(name);

  std::printf("threads %d, %d samples, best of %d\n", omp_get_max_threads(), samples, repeats);
  std::printf("%-20s %10s %10s %8s  %s\n", "fixture", "serial s", "parallel s", "speedup", "reports");
  int status = 0;
  for (const auto& name : names) {
    std::string text;
    for (const auto& [fname, ftext] : fman::kFixtures)
      if (fname == name) text = ftext;
    if (text.empty()) {
      std::fprintf(stderr, "no fixture %s\n", name.c_str());
      return 2;
    }
    const fman::ManifoldSpec spec = fman::parse_spec(text);
    fman::RunOptions opt;
    opt.samples = samples;
    opt.parallel = false;
    std::string serial_json, parallel_json;
    const double ts = seconds(spec, opt, repeats, &serial_json);
    opt.parallel = true;
    const double tp = seconds(spec, opt, repeats, &parallel_json);
    const bool same = serial_json == parallel_json;
    if (!same) status = 1;
    std::printf("%-20s %10.4f %10.4f %8.2f  %s\n", name.c_str(), ts, tp, ts / tp, same ? "identical" : "DIFFER");
  }
  return status;
}
