#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sewkit/svg.hpp"

namespace sewkit::exp {

using json = nlohmann::json;

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  std::string render() const;
};

// Fixed, round-trippable formatting so outputs are byte-stable.
std::string num(double v);
std::string num(std::size_t v);
std::string num(int v);
json jnum(double v);
// Number or the string "inf".
double real(const json& j);

struct Criterion {
  int id = 0;
  std::string name;
  bool pass = false;
  json detail;
};

struct Output {
  json resolved;
  CsvTable results;
  json metrics = json::object();
  std::vector<Criterion> criteria;
  std::vector<std::string> notes;
  std::vector<std::pair<std::string, PlotSpec>> plots;
  std::vector<std::pair<std::string, std::string>> files;  // extra text artifacts

  json summary(const std::string& experiment) const;
};

struct RunOptions {
  std::uint64_t seed = 42;
  unsigned workers = 1;
};

// Merges `user` into `defaults`; unknown keys and type mismatches raise
// Error(config). Keys whose default is null accept any value.
json resolve_config(const json& defaults, const json& user, const std::string& where = "");

using ExperimentFn = Output (*)(const json& config, const RunOptions& options);

struct ExperimentEntry {
  const char* name;
  json (*defaults)();
  ExperimentFn run;
};

const std::vector<ExperimentEntry>& registry();
const ExperimentEntry& find_experiment(const std::string& name);

// Resolves the configuration (the "seed" key is filled from options when
// given) and runs the experiment.
Output run_experiment(const std::string& name, const json& user_config, const std::uint64_t* seed_override,
                      unsigned workers);
void write_outputs(const Output& out, const std::string& experiment, const std::string& dir);

json sew_study_defaults();
Output run_sew_study(const json& cfg, const RunOptions& opt);
json fbm_check_defaults();
Output run_fbm_check(const json& cfg, const RunOptions& opt);
json functional_rate_defaults();
Output run_functional_rate(const json& cfg, const RunOptions& opt);
json regularity_probe_defaults();
Output run_regularity_probe(const json& cfg, const RunOptions& opt);
json occupation_defaults();
Output run_occupation(const json& cfg, const RunOptions& opt);
json mtype_defaults();
Output run_mtype(const json& cfg, const RunOptions& opt);
json kolmogorov_defaults();
Output run_kolmogorov(const json& cfg, const RunOptions& opt);
json besov_bench_defaults();
Output run_besov_bench(const json& cfg, const RunOptions& opt);

}  // namespace sewkit::exp
