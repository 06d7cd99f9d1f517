#include "mpk/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <mutex>

namespace mpk {
namespace fft {

namespace {

struct PlanEntry {
  fftw_plan plan = nullptr;
  fftw_complex* buf = nullptr;
};

std::mutex g_mutex;
std::map<std::pair<int, int>, PlanEntry> g_plans;

PlanEntry& plan_for(int n, int sign) {
  auto key = std::make_pair(n, sign);
  auto it = g_plans.find(key);
  if (it != g_plans.end()) return it->second;
  PlanEntry e;
  e.buf = fftw_alloc_complex(n);
  e.plan = fftw_plan_dft_1d(n, e.buf, e.buf,
                            sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD,
                            FFTW_ESTIMATE);
  return g_plans.emplace(key, e).first->second;
}

}  // namespace

void transform(cplx* data, int n, int sign) {
  std::lock_guard<std::mutex> lock(g_mutex);
  PlanEntry& e = plan_for(n, sign);
  std::memcpy(e.buf, data, sizeof(cplx) * n);
  fftw_execute(e.plan);
  std::memcpy(data, e.buf, sizeof(cplx) * n);
}

void transform2(cplx* data, int n0, int n1, int sign) {
  for (int r = 0; r < n0; ++r) transform(data + static_cast<long>(r) * n1, n1, sign);
  std::vector<cplx> col(n0);
  for (int c = 0; c < n1; ++c) {
    for (int r = 0; r < n0; ++r) col[r] = data[static_cast<long>(r) * n1 + c];
    transform(col.data(), n0, sign);
    for (int r = 0; r < n0; ++r) data[static_cast<long>(r) * n1 + c] = col[r];
  }
}

}  // namespace fft
}  // namespace mpk
