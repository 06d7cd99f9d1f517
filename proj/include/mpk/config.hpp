#ifndef MPK_CONFIG_HPP
#define MPK_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mpk/symplectic.hpp"
#include "mpk/types.hpp"

namespace mpk {

// Flat INI-like text: [section] headers, key = value lines, '#' comments.
// Matrices are whitespace-separated row-major entries.
class ExperimentConfig {
 public:
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig fromFile(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get(const std::string& section, const std::string& key,
                  const std::string& dflt = "") const;
  double getDouble(const std::string& section, const std::string& key, double dflt) const;
  long getInt(const std::string& section, const std::string& key, long dflt) const;
  std::vector<double> getList(const std::string& section, const std::string& key) const;
  RMat getMatrix(const std::string& section, const std::string& key, int rows, int cols) const;
  void set(const std::string& section, const std::string& key, const std::string& value);

  // Typed views used by the runner.
  int gridDim() const;
  int gridSamples() const;
  double gridExtent() const;  // defaults to sqrt(N)
  int strideX() const;
  int strideEta() const;
  unsigned seed() const;
  FlowConvention convention() const;

  QuadraticHamiltonian hamiltonian() const;
  std::string symbolPresetName() const;
  std::map<std::string, std::string> symbolParams() const;

  const std::string& text() const { return text_; }

 private:
  std::map<std::string, std::map<std::string, std::string>> sections_;
  std::string text_;
};

}  // namespace mpk

#endif
