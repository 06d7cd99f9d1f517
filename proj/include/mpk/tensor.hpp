#ifndef MPK_TENSOR_HPP
#define MPK_TENSOR_HPP

#include <vector>

#include "mpk/types.hpp"

namespace mpk {

// Contract one axis of a flattened row-major multi-array with a dense table:
// out[..., r, ...] = sum_c table(r, c) in[..., c, ...]. The axis length may change.
inline Vec applyAxis(const Vec& in, const std::vector<int>& dims, int axis, const Mat& table) {
  const int old_n = dims[axis];
  const int new_n = static_cast<int>(table.rows());
  long outer = 1, inner = 1;
  for (int a = 0; a < axis; ++a) outer *= dims[a];
  for (size_t a = axis + 1; a < dims.size(); ++a) inner *= dims[a];
  Vec out(outer * new_n * inner);
  for (long o = 0; o < outer; ++o) {
    for (long i = 0; i < inner; ++i) {
      for (int r = 0; r < new_n; ++r) {
        cplx acc = 0.0;
        const cplx* src = in.data() + o * old_n * inner + i;
        for (int c = 0; c < old_n; ++c) acc += table(r, c) * src[static_cast<long>(c) * inner];
        out[o * new_n * inner + static_cast<long>(r) * inner + i] = acc;
      }
    }
  }
  return out;
}

}  // namespace mpk

#endif
