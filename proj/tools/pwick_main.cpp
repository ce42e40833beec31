#include <CLI11.hpp>
#include <fstream>
#include <sstream>

#include "pwick/suites.hpp"

int main(int argc, char** argv) {
  CLI::App app{"pwick: boosted complex free-field covariance verification suites"};

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> suites;
  long seed = -1;
  int jobs = 0;

  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--suite", suites,
                 "suite to run (repeatable): " + pwick::suites::describe_available_suites());
  app.add_option("--out", out_dir, "output directory for reports and dumps");
  app.add_option("--seed", seed, "RNG seed override");
  app.add_option("--jobs", jobs, "worker count for intra-suite parallelism");

  CLI11_PARSE(app, argc, argv);

  std::string config_text;
  if (!config_path.empty()) {
    std::ifstream is(config_path);
    if (!is.good()) {
      std::fprintf(stderr, "config error: cannot open %s\n", config_path.c_str());
      return 2;
    }
    std::ostringstream ss;
    ss << is.rdbuf();
    config_text = ss.str();
  }
  return pwick::suites::run_from_config(config_text, out_dir, suites, seed, jobs);
}
