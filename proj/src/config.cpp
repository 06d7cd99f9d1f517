#include "mpk/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mpk {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  ExperimentConfig cfg;
  cfg.text_ = text;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) + ": unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty())
        throw ConfigError("line " + std::to_string(lineno) + ": empty section name");
      continue;
    }
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (section.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": key outside any section");
    cfg.sections_[section][key] = value;
  }
  return cfg;
}

ExperimentConfig ExperimentConfig::fromFile(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse(ss.str());
}

bool ExperimentConfig::has(const std::string& section, const std::string& key) const {
  auto s = sections_.find(section);
  return s != sections_.end() && s->second.count(key) > 0;
}

std::string ExperimentConfig::get(const std::string& section, const std::string& key,
                                  const std::string& dflt) const {
  auto s = sections_.find(section);
  if (s == sections_.end()) return dflt;
  auto k = s->second.find(key);
  return k == s->second.end() ? dflt : k->second;
}

double ExperimentConfig::getDouble(const std::string& section, const std::string& key,
                                   double dflt) const {
  std::string v = get(section, key);
  if (v.empty()) return dflt;
  try {
    return std::stod(v);
  } catch (...) {
    throw ConfigError("field [" + section + "] " + key + ": not a number: " + v);
  }
}

long ExperimentConfig::getInt(const std::string& section, const std::string& key,
                              long dflt) const {
  std::string v = get(section, key);
  if (v.empty()) return dflt;
  try {
    size_t pos = 0;
    long r = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return r;
  } catch (...) {
    throw ConfigError("field [" + section + "] " + key + ": not an integer: " + v);
  }
}

std::vector<double> ExperimentConfig::getList(const std::string& section,
                                              const std::string& key) const {
  std::vector<double> out;
  std::string v = get(section, key);
  std::replace(v.begin(), v.end(), ',', ' ');
  std::istringstream ss(v);
  double x;
  while (ss >> x) out.push_back(x);
  return out;
}

RMat ExperimentConfig::getMatrix(const std::string& section, const std::string& key, int rows,
                                 int cols) const {
  std::vector<double> vals = getList(section, key);
  if (static_cast<int>(vals.size()) != rows * cols)
    throw ConfigError("field [" + section + "] " + key + ": expected " +
                      std::to_string(rows * cols) + " entries, got " +
                      std::to_string(vals.size()));
  RMat m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = vals[r * cols + c];
  return m;
}

void ExperimentConfig::set(const std::string& section, const std::string& key,
                           const std::string& value) {
  sections_[section][key] = value;
  text_ += "\n# override: [" + section + "] " + key + " = " + value;
}

int ExperimentConfig::gridDim() const { return static_cast<int>(getInt("grid", "d", 1)); }
int ExperimentConfig::gridSamples() const { return static_cast<int>(getInt("grid", "N", 64)); }
double ExperimentConfig::gridExtent() const {
  return getDouble("grid", "L", std::sqrt(static_cast<double>(gridSamples())));
}
int ExperimentConfig::strideX() const { return static_cast<int>(getInt("grid", "stride_x", 2)); }
int ExperimentConfig::strideEta() const {
  return static_cast<int>(getInt("grid", "stride_eta", 2));
}
unsigned ExperimentConfig::seed() const {
  return static_cast<unsigned>(getInt("run", "seed", 1));
}

FlowConvention ExperimentConfig::convention() const {
  std::string c = get("run", "convention", "twopi");
  if (c == "twopi") return FlowConvention::TwoPi;
  if (c == "paper") return FlowConvention::Paper;
  throw ConfigError("unknown convention flag: " + c);
}

QuadraticHamiltonian ExperimentConfig::hamiltonian() const {
  const int d = gridDim();
  if (has("hamiltonian", "preset"))
    return QuadraticHamiltonian::preset(get("hamiltonian", "preset"), d);
  QuadraticHamiltonian q;
  q.A = has("hamiltonian", "A") ? getMatrix("hamiltonian", "A", d, d) : RMat::Zero(d, d);
  q.B = has("hamiltonian", "B") ? getMatrix("hamiltonian", "B", d, d) : RMat::Zero(d, d);
  q.C = has("hamiltonian", "C") ? getMatrix("hamiltonian", "C", d, d) : RMat::Zero(d, d);
  return q;
}

std::string ExperimentConfig::symbolPresetName() const {
  return get("symbol", "preset", "gaussian_bump");
}

std::map<std::string, std::string> ExperimentConfig::symbolParams() const {
  std::map<std::string, std::string> out;
  auto s = sections_.find("symbol");
  if (s == sections_.end()) return out;
  for (auto& kv : s->second)
    if (kv.first != "preset") out[kv.first] = kv.second;
  return out;
}

}  // namespace mpk
