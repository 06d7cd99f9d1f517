#include "mpk/report.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "mpk/io.hpp"

namespace mpk {

using nlohmann::json;

ReportBundle::ReportBundle(std::string out_dir, std::string config_echo, std::string convention)
    : dir_(std::move(out_dir)),
      config_echo_(std::move(config_echo)),
      convention_(std::move(convention)) {
  std::filesystem::create_directories(dir_);
}

void ReportBundle::recordArtifact(const std::string& name) {
  std::string bytes = readFile(path(name));
  artifacts_.push_back({name, fnv1a64Hex(bytes), bytes.size()});
}

void ReportBundle::recordTiming(const std::string& name, double seconds) {
  timings_.emplace_back(name, seconds);
}

void ReportBundle::recordCheck(const std::string& name, bool ok, double value,
                               double threshold) {
  checks_.push_back({name, ok, value, threshold});
}

int ReportBundle::failedChecks() const {
  int n = 0;
  for (const auto& c : checks_)
    if (!c.ok) ++n;
  return n;
}

void ReportBundle::writeManifest() const {
  json j;
  j["version"] = "1.0";
  j["convention"] = convention_;
  j["config"] = config_echo_;
  json arts = json::array();
  for (const auto& a : artifacts_)
    arts.push_back({{"path", a.name}, {"bytes", a.bytes}, {"fnv1a64", a.hash}});
  j["artifacts"] = arts;
  json tims = json::object();
  for (const auto& t : timings_) tims[t.first] = t.second;
  j["timings"] = tims;
  json chks = json::array();
  for (const auto& c : checks_)
    chks.push_back(
        {{"name", c.name}, {"pass", c.ok}, {"value", c.value}, {"threshold", c.threshold}});
  j["checks"] = chks;
  std::ofstream(dir_ + "/manifest.json", std::ios::binary) << j.dump(2) << "\n";
}

std::string decayReportJson(const DecayReport& rep) {
  json j;
  j["n_fit"] = rep.n_fit;
  j["fit_residual"] = rep.fit_residual;
  j["l1_mass"] = rep.l1_mass;
  j["graph_mass"] = {{"r1", rep.graph_mass[0]},
                     {"r2", rep.graph_mass[1]},
                     {"r4", rep.graph_mass[2]},
                     {"r8", rep.graph_mass[3]}};
  j["window"] = rep.window_tag;
  j["s"] = rep.s;
  j["convention_flag"] = rep.convention_flag;
  return j.dump(2) + "\n";
}

}  // namespace mpk
