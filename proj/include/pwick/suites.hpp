#pragma once

#include <string>
#include <vector>

#include "pwick/common.hpp"

namespace pwick::suites {

struct CheckResult {
  std::string name;
  std::string statement;  // the inequality or identity being verified
  double value = 0.0;     // measured figure (residual, ratio, min eigenvalue...)
  double threshold = 0.0;
  bool pass = false;
};

struct SuiteResult {
  std::string suite;
  std::vector<CheckResult> checks;
  std::string details_json;  // optional structured payload (e.g. Gram reports)
  bool pass() const {
    for (const auto& c : checks) {
      if (!c.pass) return false;
    }
    return true;
  }
};

// Tunable knobs; defaults are the reference settings used by the acceptance
// runner.  The CLI overrides them from the JSON config.
struct RunConfig {
  std::uint64_t seed = 20260809;
  int jobs = 1;
  std::string out_dir = "reports";
  std::vector<std::string> suites;  // empty selection = no-op

  struct Symbols {
    int samples = 10000;
    std::vector<double> velocities{0.0, 0.1, -0.1, 0.3, -0.3, 0.6, -0.6, 0.9, -0.9};
    std::vector<int> dims{2, 3};
    double range = 10.0;
  } symbols;

  struct Kernels {
    int grid_n = 64;
    std::vector<double> velocities{0.0, 0.3, 0.6};
    double t_min = 0.25, t_max = 2.21875, x_max = 3.0;
    double duality_rel_tol = 1e-6;
  } kernels;

  struct Rp {
    int members = 20;
    int gram_seeds = 5;
    std::vector<double> velocities{0.0, 0.6, -0.6};
    int modes = 6;
    double length = kTwoPi;
    double gram_tol = 1e-10;
    double isometry_rel_tol = 1e-6;
  } rp;

  struct Periodize {
    double beta = 2.0;
    int n_winding = 64;
    int matsubara_max = 10000;
    std::vector<double> velocities{0.0, 0.6, -0.6};
    std::vector<double> torus_lengths{4.0, 8.0, 16.0, 32.0};
    double triple_tol = 1e-8;
  } periodize;

  struct Thermal {
    double beta = 2.0;
    int modes = 16;
    double length = kTwoPi;
    std::vector<double> velocities{0.0, 0.6};
    double kms_tol = 1e-10;
    double modular_tol = 1e-12;
    double commutator_tol = 1e-12;
  } thermal;

  struct Gaussian {
    int modes = 3;
    int field_samples = 1000;
    double moment_tol = 1e-12;
    double dual_tol = 1e-10;
  } gaussian;

  struct Fock {
    double ell = kTwoPi;
    double mass = 1.0;
    int mode_cutoff = 3;
    int max_particles = 6;
    double lambda = 0.1;
    std::vector<double> velocities{0.0, 0.3, -0.3, 0.6, -0.6};
    double beta = 1.0;
    std::size_t dimension_cap = 30000;
    bool refine = true;
    double spectrum_tol = 1e-8;
    double fk_tol = 1e-8;
  } fock;
};

SuiteResult run_symbols_suite(const RunConfig& cfg);
SuiteResult run_kernels_suite(const RunConfig& cfg, const std::string& dump_dir = "");
SuiteResult run_rp_suite(const RunConfig& cfg);
SuiteResult run_periodize_suite(const RunConfig& cfg, const std::string& dump_dir = "");
SuiteResult run_thermal_suite(const RunConfig& cfg);
SuiteResult run_gaussian_suite(const RunConfig& cfg);
SuiteResult run_fock_suite(const RunConfig& cfg, const std::string& dump_dir = "");
SuiteResult run_fk_suite(const RunConfig& cfg);

// Parses the JSON config (strict keys), runs the selected suites, writes one
// JSON report per suite plus a summary; returns the process exit status
// (0 = all green, 1 = assertion failures, 2 = config error, 3 = I/O error).
int run_from_config(const std::string& config_json_text, const std::string& out_override,
                    const std::vector<std::string>& suite_override, long seed_override,
                    int jobs_override);

std::string describe_available_suites();

}  // namespace pwick::suites
