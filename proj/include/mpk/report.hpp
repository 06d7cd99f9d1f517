#ifndef MPK_REPORT_HPP
#define MPK_REPORT_HPP

#include <string>
#include <vector>

#include "mpk/fio.hpp"

namespace mpk {

// Collects emitted files and writes a manifest with content hashes.
class ReportBundle {
 public:
  ReportBundle(std::string out_dir, std::string config_echo, std::string convention);

  const std::string& dir() const { return dir_; }
  std::string path(const std::string& name) const { return dir_ + "/" + name; }

  void recordArtifact(const std::string& name);
  void recordTiming(const std::string& name, double seconds);
  void recordCheck(const std::string& name, bool ok, double value, double threshold);

  int failedChecks() const;
  void writeManifest() const;

 private:
  std::string dir_, config_echo_, convention_;
  struct Artifact {
    std::string name, hash;
    size_t bytes;
  };
  struct Check {
    std::string name;
    bool ok;
    double value, threshold;
  };
  std::vector<Artifact> artifacts_;
  std::vector<std::pair<std::string, double>> timings_;
  std::vector<Check> checks_;
};

std::string decayReportJson(const DecayReport& rep);

}  // namespace mpk

#endif
