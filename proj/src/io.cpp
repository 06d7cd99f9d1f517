#include "mpk/io.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace mpk {

namespace {

void appendDouble(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

void writeStateCsv(const std::string& path, const PhaseSpaceGrid& g, const Vec& f) {
  std::string out;
  out += (g.dim() == 1) ? "j0,re,im\n" : "j0,j1,re,im\n";
  for (long i = 0; i < f.size(); ++i) {
    auto j = g.unflattenSpatial(i);
    out += std::to_string(j[0]);
    if (g.dim() == 2) {
      out += ',';
      out += std::to_string(j[1]);
    }
    out += ',';
    appendDouble(out, f[i].real());
    out += ',';
    appendDouble(out, f[i].imag());
    out += '\n';
  }
  std::ofstream(path, std::ios::binary) << out;
}

void writePhaseSpaceCsv(const std::string& path, const PhaseSpaceArray& F) {
  const PhaseSpaceGrid& g = *F.grid;
  std::string out;
  out += (g.dim() == 1) ? "jx0,je0,re,im\n" : "jx0,jx1,je0,je1,re,im\n";
  for (long l = 0; l < F.data.size(); ++l) {
    LatticePoint z = g.unflattenLattice(l);
    out += std::to_string(z.jx[0]);
    if (g.dim() == 2) {
      out += ',';
      out += std::to_string(z.jx[1]);
    }
    out += ',';
    out += std::to_string(z.je[0]);
    if (g.dim() == 2) {
      out += ',';
      out += std::to_string(z.je[1]);
    }
    out += ',';
    appendDouble(out, F.data[l].real());
    out += ',';
    appendDouble(out, F.data[l].imag());
    out += '\n';
  }
  std::ofstream(path, std::ios::binary) << out;
}

void writeBinary(const std::string& path, const PhaseSpaceGrid& g, const Vec& values) {
  std::ofstream f(path, std::ios::binary);
  char header[32] = {0};
  std::memcpy(header, "MPKT", 4);
  uint32_t version = 1, d = g.dim(), n = g.samples();
  double L = g.extent();
  std::memcpy(header + 4, &version, 4);
  std::memcpy(header + 8, &d, 4);
  std::memcpy(header + 12, &n, 4);
  std::memcpy(header + 16, &L, 8);
  f.write(header, 32);
  for (long i = 0; i < values.size(); ++i) {
    double re = values[i].real(), im = values[i].imag();
    f.write(reinterpret_cast<const char*>(&re), 8);
    f.write(reinterpret_cast<const char*>(&im), 8);
  }
}

Vec readBinary(const std::string& path, int* d_out, int* n_out, double* extent_out) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open " + path);
  char header[32];
  f.read(header, 32);
  if (f.gcount() != 32 || std::memcmp(header, "MPKT", 4) != 0)
    throw ConfigError("bad binary header in " + path);
  uint32_t d, n;
  double L;
  std::memcpy(&d, header + 8, 4);
  std::memcpy(&n, header + 12, 4);
  std::memcpy(&L, header + 16, 8);
  if (d_out) *d_out = static_cast<int>(d);
  if (n_out) *n_out = static_cast<int>(n);
  if (extent_out) *extent_out = L;
  std::vector<double> raw;
  double v;
  while (f.read(reinterpret_cast<char*>(&v), 8)) raw.push_back(v);
  Vec out(raw.size() / 2);
  for (long i = 0; i < out.size(); ++i) out[i] = cplx(raw[2 * i], raw[2 * i + 1]);
  return out;
}

void writePgm(const std::string& path, const Mat& K) {
  std::ofstream f(path, std::ios::binary);
  f << "P5\n" << K.cols() << " " << K.rows() << "\n255\n";
  std::string body;
  body.reserve(static_cast<size_t>(K.rows()) * K.cols());
  for (long r = 0; r < K.rows(); ++r)
    for (long c = 0; c < K.cols(); ++c) {
      double v = std::abs(K(r, c));
      double db = v > 0 ? std::log10(v) : -12.0;
      db = std::min(0.0, std::max(-12.0, db));
      body += static_cast<char>(std::lround(255.0 * (db + 12.0) / 12.0));
    }
  f << body;
}

void writeGaborCsv(const std::string& path, const GaborMatrix& K) {
  std::string out = "w,z,abs,arg\n";
  for (long w = 0; w < K.k.rows(); ++w)
    for (long z = 0; z < K.k.cols(); ++z) {
      out += std::to_string(w);
      out += ',';
      out += std::to_string(z);
      out += ',';
      appendDouble(out, std::abs(K.k(w, z)));
      out += ',';
      appendDouble(out, std::arg(K.k(w, z)));
      out += '\n';
    }
  std::ofstream(path, std::ios::binary) << out;
}

std::string fnv1a64Hex(const std::string& bytes) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string readFile(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace mpk
