#ifndef MPK_IO_HPP
#define MPK_IO_HPP

#include <string>

#include "mpk/fio.hpp"
#include "mpk/grid.hpp"

namespace mpk {

// CSV: one row per grid point, columns index..., re, im.
void writeStateCsv(const std::string& path, const PhaseSpaceGrid& g, const Vec& f);
void writePhaseSpaceCsv(const std::string& path, const PhaseSpaceArray& F);

// Raw little-endian float64 pairs with a 32-byte header:
// magic "MPKT", version u32, d u32, N u32, L f64, 8 reserved bytes.
void writeBinary(const std::string& path, const PhaseSpaceGrid& g, const Vec& values);
Vec readBinary(const std::string& path, int* d_out = nullptr, int* n_out = nullptr,
               double* extent_out = nullptr);

// 8-bit P5 heatmap of log10|K| clipped to [-12, 0].
void writePgm(const std::string& path, const Mat& K);

// CSV of (w-index, z-index, |K|, arg K).
void writeGaborCsv(const std::string& path, const GaborMatrix& K);

std::string fnv1a64Hex(const std::string& bytes);
std::string readFile(const std::string& path);

}  // namespace mpk

#endif
