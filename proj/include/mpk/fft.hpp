#ifndef MPK_FFT_HPP
#define MPK_FFT_HPP

#include "mpk/types.hpp"

namespace mpk {
namespace fft {

// In-place unnormalized 1d DFT, sign = -1 forward (e^{-2pi i jk/n}).
void transform(cplx* data, int n, int sign);

// Row-major n0 x n1 array, both axes transformed.
void transform2(cplx* data, int n0, int n1, int sign);

}  // namespace fft
}  // namespace mpk

#endif
