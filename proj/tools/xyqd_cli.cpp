// Command-line front end: point | sweep | scan | fit.
//
// Exit codes: 0 success, 2 usage error, 3 I/O error, 4 numeric failure.

#include <omp.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "xyqd/runner.hpp"
#include "xyqd/version.hpp"

namespace {

using xyqd::RunConfig;

// Raw flag values; applied on top of the config file only when given.
struct Flags {
  std::string config_file;
  std::vector<double> theta;
  double gamma = 0.0;
  double h = 0.0;
  std::vector<double> h_range;
  std::vector<std::string> sizes;
  double coupling = 1.0;
  int starts = 0;
  std::uint64_t seed = 0;
  int max_evals = 0;
  double tolerance = 0.0;
  std::string out;
  std::vector<std::string> formats;
  bool force = false;
  bool wrap_pair = false;
  bool pair_only = false;
  int threads = 0;
  std::vector<std::string> inputs;
  std::string estimator;
};

// Accepts "3", "3,4,5" and "3..10".
std::vector<int> expand_sizes(const std::vector<std::string>& tokens) {
  std::vector<int> out;
  for (const auto& t : tokens) {
    const auto dots = t.find("..");
    try {
      if (dots == std::string::npos) {
        out.push_back(std::stoi(t));
      } else {
        const int a = std::stoi(t.substr(0, dots));
        const int b = std::stoi(t.substr(dots + 2));
        if (b < a) throw xyqd::UsageError("sizes: empty range '" + t + "'");
        for (int s = a; s <= b; ++s) out.push_back(s);
      }
    } catch (const std::logic_error&) {
      throw xyqd::UsageError("sizes: cannot parse '" + t + "'");
    }
  }
  return out;
}

void add_common(CLI::App* sub, Flags& f, bool physics) {
  sub->add_option("--config", f.config_file, "JSON run configuration; flags override its values");
  if (physics) {
    sub->add_option("--theta-deg", f.theta, "Anisotropy angle(s) in degrees, gamma = sin(theta)")->delimiter(',');
    sub->add_option("--gamma", f.gamma, "Raw anisotropy gamma in [0, 1]");
    sub->add_option("--sizes", f.sizes, "Chain sizes, e.g. 3,4,5 or 3..10")->delimiter(',');
    sub->add_option("--coupling", f.coupling, "Exchange coupling J");
    sub->add_option("--starts", f.starts, "Optimizer starts per discord evaluation");
    sub->add_option("--seed", f.seed, "Seed for the random optimizer starts");
    sub->add_option("--max-evals", f.max_evals, "Objective evaluations per start");
    sub->add_option("--tolerance", f.tolerance, "Simplex diameter tolerance");
    sub->add_flag("--wrap-pair", f.wrap_pair, "Include the periodic pair (L, 1) in the pair sum");
    sub->add_flag("--pair-only", f.pair_only, "Skip the total discord (pair sum only)");
    sub->add_option("--threads", f.threads, "Worker threads (default: OpenMP default)");
  }
  sub->add_option("--out", f.out, "Output root directory");
  sub->add_option("--format", f.formats, "Output formats: csv,json")->delimiter(',');
  sub->add_flag("--force", f.force, "Recompute even if a cached result exists");
}

RunConfig build_config(CLI::App* sub, const Flags& f, xyqd::Mode mode) {
  RunConfig c;
  if (!f.config_file.empty()) {
    std::ifstream in(f.config_file);
    if (!in) throw xyqd::IoError("cannot read config file " + f.config_file);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw xyqd::UsageError(std::string("config: ") + e.what());
    }
    // An envelope echo is accepted as-is.
    c = xyqd::config_from_json(j.contains("config") ? j.at("config") : j);
  }
  c.mode = mode;
  auto given = [&](const char* name) { return sub->get_option_no_throw(name) && sub->count(name) > 0; };
  if (given("--theta-deg")) c.theta_degrees = f.theta;
  if (given("--gamma")) c.gamma = f.gamma;
  if (given("--h")) c.h = f.h;
  if (given("--h-range")) {
    if (f.h_range.size() != 3) throw xyqd::UsageError("h_range: expects MIN MAX STEP");
    c.h_range = xyqd::FieldRange{f.h_range[0], f.h_range[1], f.h_range[2]};
  }
  if (given("--sizes")) c.sizes = expand_sizes(f.sizes);
  if (given("--coupling")) c.coupling = f.coupling;
  if (given("--starts")) c.optimizer.starts = f.starts;
  if (given("--seed")) c.optimizer.seed = f.seed;
  if (given("--max-evals")) c.optimizer.max_evals = f.max_evals;
  if (given("--tolerance")) c.optimizer.simplex_tolerance = f.tolerance;
  if (given("--out")) c.output_dir = f.out;
  if (given("--format")) c.formats = f.formats;
  if (f.force) c.force = true;
  if (f.wrap_pair) c.wrap_pair = true;
  if (f.pair_only) c.pair_only = true;
  if (given("--estimator")) c.estimator = f.estimator;
  if (mode == xyqd::Mode::fit && !f.inputs.empty()) c.inputs = f.inputs;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Global quantum discord of the periodic XY chain"};
  app.set_version_flag("--version", xyqd::kToolVersion);
  // -h would clash with the field option --h.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  Flags f;
  auto* point = app.add_subcommand("point", "Correlations at a single field value");
  add_common(point, f, true);
  point->add_option("--h", f.h, "Transverse field");

  auto* sweep = app.add_subcommand("sweep", "Field sweep per (anisotropy, size)");
  add_common(sweep, f, true);
  sweep->add_option("--h-range", f.h_range, "MIN MAX STEP")->expected(3);
  sweep->add_option("--h", f.h, "Rejected: sweeps take --h-range");

  auto* scan = app.add_subcommand("scan", "Fixed field, loop over anisotropies and sizes");
  add_common(scan, f, true);
  scan->add_option("--h", f.h, "Transverse field");

  auto* fit = app.add_subcommand("fit", "Finite-size scaling fit of discord maxima");
  add_common(fit, f, false);
  fit->add_option("--estimator", f.estimator, "Quantity whose maximum estimates h_c(L): total or pair");
  fit->add_option("inputs", f.inputs, "Sweep series files (.json or sweep_*_L*.csv)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    const xyqd::Mode mode = xyqd::mode_from_string(sub->get_name());
    if (mode == xyqd::Mode::sweep && sub->count("--h") > 0)
      throw xyqd::UsageError("h: sweep takes --h-range, not --h");
    RunConfig config = build_config(sub, f, mode);
    if (f.threads > 0) omp_set_num_threads(f.threads);

    const auto outcome = xyqd::run(config);
    std::cout << (outcome.skipped ? "cached: " : "wrote: ") << outcome.directory.string() << "\n";
    for (const auto& p : outcome.files) std::cout << "  " << p.filename().string() << "\n";
    if (mode == xyqd::Mode::fit) {
      const auto& pl = outcome.envelope.payload;
      std::cout << "h_c(L) = " << pl.at("a") << " * exp(-L / " << pl.at("b") << ") + " << pl.at("c")
                << "   rms " << pl.at("rms_residual") << "\n";
    }
    return 0;
  } catch (const xyqd::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const xyqd::IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
}
