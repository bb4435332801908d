#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "experiments/experiments.hpp"
#include "sewkit/error.hpp"

namespace sewkit::exp {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(std::size_t v) { return std::to_string(v); }
std::string num(int v) { return std::to_string(v); }

json jnum(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double real(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    fail(ErrorCode::config, "config: expected a number or \"inf\", got \"" + s + "\"");
  }
  if (!j.is_number()) fail(ErrorCode::config, "config: expected a number");
  return j.get<double>();
}

std::string CsvTable::render() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  }
  return os.str();
}

json Output::summary(const std::string& experiment) const {
  json crit = json::array();
  bool all = true;
  for (const auto& c : criteria) {
    crit.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    all = all && c.pass;
  }
  return {{"experiment", experiment},
          {"seed", resolved.value("seed", std::uint64_t{0})},
          {"metrics", metrics},
          {"criteria", crit},
          {"all_pass", all},
          {"notes", notes}};
}

json resolve_config(const json& defaults, const json& user, const std::string& where) {
  if (defaults.is_null()) return user;
  if (!user.is_object() && defaults.is_object())
    fail(ErrorCode::config, "config" + where + ": expected an object");
  json out = defaults;
  for (auto it = user.begin(); it != user.end(); ++it) {
    const std::string path = where + "." + it.key();
    if (!defaults.contains(it.key())) fail(ErrorCode::config, "config" + path + ": unknown key");
    const json& d = defaults[it.key()];
    const json& u = it.value();
    if (d.is_object()) {
      out[it.key()] = resolve_config(d, u, path);
    } else if (d.is_null()) {
      out[it.key()] = u;
    } else {
      const bool ok = (d.is_number() && (u.is_number() || (u.is_string() && u.get<std::string>() == "inf"))) ||
                      (d.is_string() && (u.is_string() || (d.get<std::string>() == "inf" && u.is_number()))) ||
                      (d.is_boolean() && u.is_boolean()) || (d.is_array() && u.is_array());
      if (!ok) fail(ErrorCode::config, "config" + path + ": expected " + std::string(d.type_name()));
      if (d.is_number_unsigned() && !(u.is_number_unsigned() || (u.is_number_integer() && u.get<std::int64_t>() >= 0)))
        fail(ErrorCode::config, "config" + path + ": expected a nonnegative integer");
      out[it.key()] = u;
    }
  }
  return out;
}

const std::vector<ExperimentEntry>& registry() {
  static const std::vector<ExperimentEntry> entries = {
      {"sew-study", sew_study_defaults, run_sew_study},
      {"fbm-check", fbm_check_defaults, run_fbm_check},
      {"functional-rate", functional_rate_defaults, run_functional_rate},
      {"regularity-probe", regularity_probe_defaults, run_regularity_probe},
      {"occupation", occupation_defaults, run_occupation},
      {"mtype", mtype_defaults, run_mtype},
      {"kolmogorov", kolmogorov_defaults, run_kolmogorov},
      {"besov-bench", besov_bench_defaults, run_besov_bench},
  };
  return entries;
}

const ExperimentEntry& find_experiment(const std::string& name) {
  for (const auto& e : registry())
    if (name == e.name) return e;
  std::string known;
  for (const auto& e : registry()) known += std::string(known.empty() ? "" : ", ") + e.name;
  fail(ErrorCode::config, "unknown experiment '" + name + "' (known: " + known + ")");
}

Output run_experiment(const std::string& name, const json& user_config, const std::uint64_t* seed_override,
                      unsigned workers) {
  const ExperimentEntry& entry = find_experiment(name);
  json user = user_config.is_null() ? json::object() : user_config;
  if (!user.is_object()) fail(ErrorCode::config, "config: top level must be an object");
  if (user.contains("experiment")) {
    if (!user["experiment"].is_string() || user["experiment"].get<std::string>() != name)
      fail(ErrorCode::config, "config: 'experiment' does not match the requested experiment");
    user.erase("experiment");
  }
  json defaults = entry.defaults();
  defaults["seed"] = std::uint64_t{42};
  json cfg;
  try {
    cfg = resolve_config(defaults, user);
  } catch (const json::exception& e) {
    fail(ErrorCode::config, std::string("config: ") + e.what());
  }
  if (seed_override) cfg["seed"] = *seed_override;
  RunOptions opt;
  opt.seed = cfg["seed"].get<std::uint64_t>();
  opt.workers = workers == 0 ? 1 : workers;
  Output out;
  try {
    out = entry.run(cfg, opt);
  } catch (const json::exception& e) {
    fail(ErrorCode::config, std::string("config: ") + e.what());
  }
  json resolved = cfg;
  resolved["experiment"] = name;
  out.resolved = resolved;
  return out;
}

namespace {

void write_text(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  require(static_cast<bool>(os), ErrorCode::io, "cannot open " + p.string() + " for writing");
  os << text;
  require(static_cast<bool>(os), ErrorCode::io, "write failed: " + p.string());
}

}  // namespace

void write_outputs(const Output& out, const std::string& experiment, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  require(!ec, ErrorCode::io, "cannot create output directory " + dir + ": " + ec.message());
  const std::filesystem::path base(dir);
  write_text(base / "resolved-config.json", out.resolved.dump(2) + "\n");
  write_text(base / "results.csv", out.results.render());
  write_text(base / "summary.json", out.summary(experiment).dump(2) + "\n");
  for (const auto& [name, plot] : out.plots) write_svg((base / name).string(), plot);
  for (const auto& [name, text] : out.files) write_text(base / name, text);
}

}  // namespace sewkit::exp
