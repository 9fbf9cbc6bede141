#include <cstdio>
#include <fstream>
#include "json.hpp"
#include <sstream>

#include "fqm/errors.hpp"
#include "fqm/montecarlo.hpp"

namespace fqm::mc {

using nlohmann::ordered_json;

namespace {

ordered_json config_json(const ExperimentConfig& c) {
  ordered_json j;
  j["preset"] = c.preset;
  j["q"] = c.q;
  j["n"] = c.n;
  j["trials"] = c.trials;
  j["seed"] = c.seed;
  j["params"] = ordered_json::object();
  for (const auto& [k, v] : c.params) j["params"][k] = v;
  j["budget"] = {{"subspaces", c.budget.subspaces},
                 {"kernel_sweep", c.budget.kernel_sweep},
                 {"subsets", c.budget.subsets},
                 {"partition_max_m", c.budget.partition_max_m},
                 {"minor_max_m", c.budget.minor_max_m},
                 {"flat_work", c.budget.flat_work}};
  j["flags"] = ordered_json::object();
  for (const auto& [k, v] : c.flags) j["flags"][k] = v;
  return j;
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string o = "\"";
  for (char ch : s) {
    if (ch == '"') o += '"';
    o += ch;
  }
  return o + "\"";
}

}  // namespace

std::string to_json(const ExperimentResult& r) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["seed"] = r.config.seed;
  j["config"] = config_json(r.config);
  ordered_json agg;
  agg["trials"] = r.aggregate.trials;
  agg["stats"] = ordered_json::object();
  for (const auto& [name, h] : r.aggregate.stats) {
    ordered_json s;
    s["counts"] = ordered_json::object();
    for (const auto& [k, c] : h.counts) s["counts"][std::to_string(k)] = c;
    s["missing"] = h.missing;
    s["total"] = h.total();
    s["mean"] = h.mean();
    s["variance"] = h.variance();
    agg["stats"][name] = s;
  }
  j["aggregate"] = agg;
  ordered_json cmp;
  cmp["predictors"] = ordered_json::object();
  for (const auto& [k, v] : r.report.predictors) cmp["predictors"][k] = v;
  cmp["checks"] = ordered_json::array();
  for (const auto& c : r.report.checks) {
    ordered_json x = {{"name", c.name},         {"kind", c.kind},
                      {"predicted", c.predicted}, {"empirical", c.empirical},
                      {"statistic", c.statistic}, {"tolerance", c.tolerance},
                      {"verdict", c.verdict}};
    if (c.kind == "range") {
      x["lo"] = c.lo;
      x["hi"] = c.hi;
    }
    cmp["checks"].push_back(x);
  }
  cmp["insufficient"] = r.report.insufficient;
  cmp["all_pass"] = r.report.all_pass();
  j["comparison"] = cmp;
  if (r.config.timing) j["runtime"] = {{"seconds", r.report.runtime_seconds}};
  return j.dump(2) + "\n";
}

std::string to_csv(const ExperimentResult& r) {
  std::ostringstream o;
  auto row = [&](const std::string& rec, const std::string& name, const std::string& key,
                 const std::string& value) {
    o << rec << ',' << field(name) << ',' << field(key) << ',' << field(value) << '\n';
  };
  o << "record,name,key,value\n";
  const auto& c = r.config;
  row("config", "schema_version", "", std::to_string(kSchemaVersion));
  row("config", "seed", "", std::to_string(c.seed));
  row("config", "preset", "", c.preset);
  row("config", "q", "", std::to_string(c.q));
  row("config", "n", "", std::to_string(c.n));
  row("config", "trials", "", std::to_string(c.trials));
  for (const auto& [k, v] : c.params) row("param", k, "", num(v));
  for (const auto& [k, v] : c.flags) row("flag", k, "", v);
  for (const auto& [name, h] : r.aggregate.stats) {
    for (const auto& [k, cnt] : h.counts) row("count", name, std::to_string(k), std::to_string(cnt));
    row("missing", name, "", std::to_string(h.missing));
    row("mean", name, "", num(h.mean()));
    row("variance", name, "", num(h.variance()));
  }
  for (const auto& [k, v] : r.report.predictors) row("predictor", k, "", num(v));
  for (const auto& ch : r.report.checks) {
    row("check", ch.name, "kind", ch.kind);
    row("check", ch.name, "predicted", num(ch.predicted));
    row("check", ch.name, "empirical", num(ch.empirical));
    row("check", ch.name, "statistic", num(ch.statistic));
    row("check", ch.name, "tolerance", num(ch.tolerance));
    if (ch.kind == "range") {
      row("check", ch.name, "lo", num(ch.lo));
      row("check", ch.name, "hi", num(ch.hi));
    }
    row("check", ch.name, "verdict", ch.verdict);
  }
  row("summary", "insufficient", "", r.report.insufficient ? "true" : "false");
  if (c.timing) row("runtime", "seconds", "", num(r.report.runtime_seconds));
  return o.str();
}

void emit(const ExperimentResult& r, const std::string& format, const std::string& path) {
  std::string body;
  if (format == "json") body = to_json(r);
  else if (format == "csv") body = to_csv(r);
  else throw ConfigError("unknown format: " + format);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << body;
  f.close();
  if (!f) throw IoError("write failed: " + path);
}

}  // namespace fqm::mc
