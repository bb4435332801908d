#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sewkit/sewkit.h"

namespace {

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  std::stringstream ss(sewkit_experiment_names());
  for (std::string item; std::getline(ss, item, ',');) out.push_back(item);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical experiments for stochastic sewing", "sewkit"};
  std::string experiment, config_path, out_dir;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  app.add_option("experiment", experiment, "Experiment to run")
      ->required()
      ->check(CLI::IsMember(experiment_names()));
  app.add_option("--config", config_path, "JSON configuration file")->required()->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "Override the configuration's seed");
  app.add_option("--out", out_dir, "Output directory (default results/<experiment>; SEWKIT_OUT wins)");
  app.add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
  app.set_version_flag("--version", std::string(sewkit_version()));
  CLI11_PARSE(app, argc, argv);

  if (const char* env = std::getenv("SEWKIT_OUT"); env && *env) out_dir = env;
  if (out_dir.empty()) out_dir = "results/" + experiment;

  std::ifstream in(config_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << config_path << "\n";
    return SEWKIT_IO;
  }
  std::stringstream text;
  text << in.rdbuf();

  std::uint64_t seed_value = seed.value_or(0);
  std::size_t len = 0;
  int rc = sewkit_run_experiment(experiment.c_str(), text.str().c_str(), seed ? &seed_value : nullptr,
                                 out_dir.c_str(), workers, nullptr, 0, &len);
  if (rc != SEWKIT_OK) {
    std::cerr << "error (" << sewkit_status_name(rc) << "): " << sewkit_last_error() << "\n";
    return rc;
  }

  std::ifstream summary_file(out_dir + "/summary.json");
  nlohmann::json summary = nlohmann::json::parse(summary_file, nullptr, false);
  if (summary.is_discarded()) {
    std::cerr << "error: could not read back " << out_dir << "/summary.json\n";
    return SEWKIT_IO;
  }
  for (const auto& c : summary["criteria"])
    std::cout << (c["pass"].get<bool>() ? "PASS" : "FAIL") << "  [" << c["id"].get<int>() << "] "
              << c["name"].get<std::string>() << "\n";
  for (const auto& n : summary["notes"]) std::cout << "note: " << n.get<std::string>() << "\n";
  std::cout << "wrote " << out_dir << "\n";
  return 0;
}
