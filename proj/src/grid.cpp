#include "mpk/grid.hpp"

#include <cmath>

#include "mpk/fft.hpp"

namespace mpk {

namespace {

bool isPowerOfTwo(int n) { return n > 0 && (n & (n - 1)) == 0; }


// Hermite function with weight e^{-pi x^2}: phi_0 = 2^{1/4} e^{-pi x^2},
// phi_{k+1} = x sqrt(4 pi/(k+1)) phi_k - sqrt(k/(k+1)) phi_{k-1}.
double hermiteFn(int order, double x) {
  double h0 = std::pow(2.0, 0.25) * std::exp(-kPi * x * x);
  if (order == 0) return h0;
  double h1 = x * std::sqrt(4.0 * kPi) * h0;
  if (order == 1) return h1;
  for (int k = 1; k < order; ++k) {
    double h2 = x * std::sqrt(4.0 * kPi / (k + 1)) * h1 - std::sqrt(double(k) / (k + 1)) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

double periodizedHermite(int order, double x, double L) {
  double v = 0.0;
  for (int i = -3; i <= 3; ++i) v += hermiteFn(order, x + i * L);
  return v;
}

}  // namespace

double periodizedGaussian(double x, double period) {
  double v = 0.0;
  for (int i = -3; i <= 3; ++i) {
    double u = x + i * period;
    v += std::exp(-kPi * u * u);
  }
  return v;
}

PhaseSpaceGrid::PhaseSpaceGrid(int d, int n, double extent, int stride_x, int stride_eta)
    : d_(d), n_(n), extent_(extent), sx_(stride_x), se_(stride_eta) {
  if (d != 1 && d != 2) throw ConfigError("grid dimension must be 1 or 2");
  if (!isPowerOfTwo(n)) throw ConfigError("grid samples must be a power of two");
  if (extent <= 0.0) throw ConfigError("grid extent must be positive");
  if (stride_x < 1 || n % stride_x != 0) throw ConfigError("spatial stride must divide N");
  if (stride_eta < 1 || n % stride_eta != 0) throw ConfigError("frequency stride must divide N");
  dx_ = extent_ / n_;
  deta_ = 1.0 / extent_;
  // Gabor frame safety margin: physical redundancy 1/(a b) with a = sx dx, b = se deta.
  double ab = (sx_ * dx_) * (se_ * deta_);
  if (1.0 / ab < 2.0) throw ConfigError("lattice redundancy below 2");
}

long PhaseSpaceGrid::gridSize() const {
  long s = 1;
  for (int a = 0; a < d_; ++a) s *= n_;
  return s;
}

long PhaseSpaceGrid::latticeSize() const {
  long s = 1;
  for (int a = 0; a < d_; ++a) s *= static_cast<long>(latX()) * latEta();
  return s;
}

double PhaseSpaceGrid::cellArea() const {
  double c = 1.0;
  for (int a = 0; a < d_; ++a) c *= (sx_ * dx_) * (se_ * deta_);
  return c;
}

std::array<int, 2> PhaseSpaceGrid::unflattenSpatial(long i) const {
  if (d_ == 1) return {static_cast<int>(i), 0};
  return {static_cast<int>(i / n_), static_cast<int>(i % n_)};
}

long PhaseSpaceGrid::flattenSpatial(const std::array<int, 2>& j) const {
  if (d_ == 1) return j[0];
  return static_cast<long>(j[0]) * n_ + j[1];
}

long PhaseSpaceGrid::flattenLattice(const LatticePoint& z) const {
  if (d_ == 1) return static_cast<long>(z.jx[0]) * latEta() + z.je[0];
  long lx = latX(), le = latEta();
  return ((static_cast<long>(z.jx[0]) * lx + z.jx[1]) * le + z.je[0]) * le + z.je[1];
}

LatticePoint PhaseSpaceGrid::unflattenLattice(long l) const {
  LatticePoint z;
  if (d_ == 1) {
    z.jx[0] = static_cast<int>(l / latEta());
    z.je[0] = static_cast<int>(l % latEta());
    return z;
  }
  long le = latEta(), lx = latX();
  z.je[1] = static_cast<int>(l % le);
  l /= le;
  z.je[0] = static_cast<int>(l % le);
  l /= le;
  z.jx[1] = static_cast<int>(l % lx);
  z.jx[0] = static_cast<int>(l / lx);
  return z;
}

std::array<double, 4> PhaseSpaceGrid::coords(const LatticePoint& z) const {
  std::array<double, 4> c{0, 0, 0, 0};
  for (int a = 0; a < d_; ++a) {
    c[a] = xCoord(z.jx[a] * sx_);
    c[d_ + a] = etaCoord(z.je[a] * se_);
  }
  return c;
}

double PhaseSpaceGrid::latticeNormSq(const LatticePoint& z) const {
  auto c = coords(z);
  double s = 0.0;
  for (int a = 0; a < 2 * d_; ++a) s += c[a] * c[a];
  return s;
}

bool PhaseSpaceGrid::onLattice(const LatticePoint& z) const {
  for (int a = 0; a < d_; ++a) {
    if (z.jx[a] < 0 || z.jx[a] >= latX()) return false;
    if (z.je[a] < 0 || z.je[a] >= latEta()) return false;
  }
  return true;
}

void centeredDft(const PhaseSpaceGrid& g, Vec& data, int sign) {
  // e^{-2pi i (j-n/2)(k-n/2)/n} = (-1)^j (-1)^k e^{-i pi n/2} e^{-2pi i jk/n}
  const int n = g.samples();
  const cplx corner = std::exp(cplx(0, -sign * kPi * n / 2.0));
  auto applyParity = [n, &g](Vec& v) {
    if (g.dim() == 1) {
      for (int j = 1; j < n; j += 2) v[j] = -v[j];
    } else {
      for (int j0 = 0; j0 < n; ++j0)
        for (int j1 = 0; j1 < n; ++j1)
          if ((j0 + j1) & 1) v[static_cast<long>(j0) * n + j1] = -v[static_cast<long>(j0) * n + j1];
    }
  };
  applyParity(data);
  if (g.dim() == 1)
    fft::transform(data.data(), n, sign);
  else
    fft::transform2(data.data(), n, n, sign);
  applyParity(data);
  double cd = (g.dim() == 1) ? 1.0 : 2.0;
  data *= std::pow(corner, cd);
}

double norm2(const PhaseSpaceGrid& g, const Vec& f) {
  return std::sqrt(f.squaredNorm() * std::pow(g.dx(), g.dim()));
}

cplx innerProduct(const PhaseSpaceGrid& g, const Vec& f, const Vec& h) {
  // <f,h> = sum f conj(h) dx^d; Eigen's dot conjugates its first argument.
  return h.dot(f) * std::pow(g.dx(), g.dim());
}

Vec gaussianWindow(const PhaseSpaceGrid& g) {
  Vec w(g.gridSize());
  for (long i = 0; i < w.size(); ++i) {
    auto j = g.unflattenSpatial(i);
    double v = periodizedGaussian(g.xCoord(j[0]), g.extent());
    if (g.dim() == 2) v *= periodizedGaussian(g.xCoord(j[1]), g.extent());
    w[i] = v;
  }
  w /= norm2(g, w);
  return w;
}

Vec hermiteWindow(const PhaseSpaceGrid& g, int order) {
  if (order < 0 || order > 6) throw ConfigError("hermite window order must be in 0..6");
  Vec w(g.gridSize());
  for (long i = 0; i < w.size(); ++i) {
    auto j = g.unflattenSpatial(i);
    double v = periodizedHermite(order, g.xCoord(j[0]), g.extent());
    if (g.dim() == 2) v *= periodizedHermite(order, g.xCoord(j[1]), g.extent());
    w[i] = v;
  }
  w /= norm2(g, w);
  return w;
}

Vec tfShift(const PhaseSpaceGrid& g, const LatticePoint& z, const Vec& f) {
  if (!g.onLattice(z)) throw ConfigError("tf_shift point off lattice");
  const int n = g.samples();
  // lattice indices carry centered coordinates: translation by
  // x = xCoord(jx * sx), i.e. jx * sx - n/2 samples
  Vec out(f.size());
  for (long i = 0; i < f.size(); ++i) {
    auto j = g.unflattenSpatial(i);
    std::array<int, 2> src = j;
    double phase = 0.0;
    for (int a = 0; a < g.dim(); ++a) {
      src[a] = ((j[a] - (z.jx[a] * g.strideX() - n / 2)) % n + n) % n;
      phase += g.etaCoord(z.je[a] * g.strideEta()) * g.xCoord(j[a]);
    }
    out[i] = std::exp(cplx(0, kTwoPi * phase)) * f[g.flattenSpatial(src)];
  }
  return out;
}

PhaseSpaceArray stft(const PhaseSpaceGrid& g, const Vec& window, const Vec& f) {
  if (norm2(g, window) <= 0.0) throw ConfigError("stft window must be nonzero");
  const int n = g.samples();
  const int lx = g.latX(), le = g.latEta();
  const double measure = std::pow(g.dx(), g.dim());
  PhaseSpaceArray out;
  out.grid = &g;
  out.data.resize(g.latticeSize());

  // V_g f(x, eta) = sum_t f(t) conj(g(t-x)) e^{-2 pi i eta . t} dx^d:
  // per spatial lattice position, one centered DFT of f .* conj(shifted g).
  const long nsx = (g.dim() == 1) ? lx : static_cast<long>(lx) * lx;
  Vec h(g.gridSize());
  for (long px = 0; px < nsx; ++px) {
    std::array<int, 2> jx{0, 0};
    if (g.dim() == 1)
      jx[0] = static_cast<int>(px);
    else {
      jx[0] = static_cast<int>(px / lx);
      jx[1] = static_cast<int>(px % lx);
    }
    for (long i = 0; i < h.size(); ++i) {
      auto j = g.unflattenSpatial(i);
      std::array<int, 2> src = j;
      for (int a = 0; a < g.dim(); ++a)
        src[a] = ((j[a] - (jx[a] * g.strideX() - n / 2)) % n + n) % n;
      h[i] = f[i] * std::conj(window[g.flattenSpatial(src)]);
    }
    centeredDft(g, h, -1);
    // read frequency sublattice
    if (g.dim() == 1) {
      for (int ke = 0; ke < le; ++ke) {
        LatticePoint z;
        z.jx[0] = jx[0];
        z.je[0] = ke;
        out.data[g.flattenLattice(z)] = h[static_cast<long>(ke) * g.strideEta()] * measure;
      }
    } else {
      for (int k0 = 0; k0 < le; ++k0)
        for (int k1 = 0; k1 < le; ++k1) {
          LatticePoint z;
          z.jx = jx;
          z.je = {k0, k1};
          long idx = static_cast<long>(k0) * g.strideEta() * n + k1 * g.strideEta();
          out.data[g.flattenLattice(z)] = h[idx] * measure;
        }
    }
  }
  return out;
}

Vec stftAdjoint(const PhaseSpaceGrid& g, const Vec& window, const PhaseSpaceArray& F) {
  if (F.data.size() != g.latticeSize()) throw ConfigError("stft_adjoint shape mismatch");
  const int n = g.samples();
  const int lx = g.latX(), le = g.latEta();
  const double cell = g.cellArea();
  Vec out = Vec::Zero(g.gridSize());

  const long nsx = (g.dim() == 1) ? lx : static_cast<long>(lx) * lx;
  for (long px = 0; px < nsx; ++px) {
    std::array<int, 2> jx{0, 0};
    if (g.dim() == 1)
      jx[0] = static_cast<int>(px);
    else {
      jx[0] = static_cast<int>(px / lx);
      jx[1] = static_cast<int>(px % lx);
    }
    // A(t) = sum_eta F(x, eta) e^{2 pi i eta . t}: zero-pad onto full grid, inverse DFT
    Vec padded = Vec::Zero(g.gridSize());
    if (g.dim() == 1) {
      for (int ke = 0; ke < le; ++ke) {
        LatticePoint z;
        z.jx[0] = jx[0];
        z.je[0] = ke;
        padded[static_cast<long>(ke) * g.strideEta()] = F.data[g.flattenLattice(z)];
      }
    } else {
      for (int k0 = 0; k0 < le; ++k0)
        for (int k1 = 0; k1 < le; ++k1) {
          LatticePoint z;
          z.jx = jx;
          z.je = {k0, k1};
          padded[static_cast<long>(k0) * g.strideEta() * n + k1 * g.strideEta()] =
              F.data[g.flattenLattice(z)];
        }
    }
    centeredDft(g, padded, +1);
    for (long i = 0; i < out.size(); ++i) {
      auto j = g.unflattenSpatial(i);
      std::array<int, 2> src = j;
      for (int a = 0; a < g.dim(); ++a)
        src[a] = ((j[a] - (jx[a] * g.strideX() - n / 2)) % n + n) % n;
      out[i] += padded[i] * window[g.flattenSpatial(src)] * cell;
    }
  }
  return out;
}

Mat frameOperator(const PhaseSpaceGrid& g, const Vec& window) {
  const long ng = g.gridSize();
  const int n = g.samples();
  Mat S = Mat::Zero(ng, ng);
  // S[t,t'] = cell dx^d sum_x g(t-x) conj(g(t'-x)) * D(t-t'), with
  // D(t-t') = sum_{eta in lattice} e^{2 pi i eta (t-t')} factorizing per axis;
  // the dx^d carries the discrete inner product inside V_g.
  const int le = g.latEta();
  std::vector<cplx> dir(n);  // one-axis frequency-lattice Dirichlet at offset r
  for (int r = 0; r < n; ++r) {
    cplx s = 0.0;
    for (int ke = 0; ke < le; ++ke)
      s += std::exp(cplx(0, kTwoPi * g.etaCoord(ke * g.strideEta()) * (r * g.dx())));
    dir[r] = s;
  }
  const int lx = g.latX();
  const long nsx = (g.dim() == 1) ? lx : static_cast<long>(lx) * lx;
  const double cell = g.cellArea() * std::pow(g.dx(), g.dim());
  for (long t = 0; t < ng; ++t) {
    auto jt = g.unflattenSpatial(t);
    for (long u = 0; u < ng; ++u) {
      auto ju = g.unflattenSpatial(u);
      cplx d = 1.0;
      for (int a = 0; a < g.dim(); ++a) d *= dir[(jt[a] - ju[a] + n) % n];
      cplx acc = 0.0;
      for (long px = 0; px < nsx; ++px) {
        std::array<int, 2> jx{0, 0};
        if (g.dim() == 1)
          jx[0] = static_cast<int>(px);
        else {
          jx[0] = static_cast<int>(px / lx);
          jx[1] = static_cast<int>(px % lx);
        }
        std::array<int, 2> st = jt, su = ju;
        for (int a = 0; a < g.dim(); ++a) {
          st[a] = ((jt[a] - (jx[a] * g.strideX() - n / 2)) % n + n) % n;
          su[a] = ((ju[a] - (jx[a] * g.strideX() - n / 2)) % n + n) % n;
        }
        acc += window[g.flattenSpatial(st)] * std::conj(window[g.flattenSpatial(su)]);
      }
      S(t, u) = acc * d * cell;
    }
  }
  return S;
}

Vec dualWindow(const PhaseSpaceGrid& g, const Vec& window) {
  Mat S = frameOperator(g, window);
  return S.ldlt().solve(window);
}

double modulationNorm(const PhaseSpaceGrid& g, const Vec& window, const Vec& f,
                      double p, const WeightSpec& w) {
  if (p < 1.0) throw ConfigError("modulation norm needs p >= 1");
  PhaseSpaceArray V = stft(g, window, f);
  const double cell = g.cellArea();
  if (std::isinf(p)) {
    double best = 0.0;
    for (long l = 0; l < V.data.size(); ++l) {
      LatticePoint z = g.unflattenLattice(l);
      best = std::max(best, std::abs(V.data[l]) * w(g.latticeNormSq(z)));
    }
    return best;
  }
  double acc = 0.0;
  for (long l = 0; l < V.data.size(); ++l) {
    LatticePoint z = g.unflattenLattice(l);
    acc += std::pow(std::abs(V.data[l]) * w(g.latticeNormSq(z)), p) * cell;
  }
  return std::pow(acc, 1.0 / p);
}

}  // namespace mpk
