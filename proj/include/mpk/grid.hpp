#ifndef MPK_GRID_HPP
#define MPK_GRID_HPP

#include <array>
#include <vector>

#include "mpk/types.hpp"

namespace mpk {

// Weight v_s(z) = (1 + |z|^2)^{s/2}, submultiplicative for s >= 0.
struct WeightSpec {
  double s = 0.0;
  double operator()(double norm_sq) const { return std::pow(1.0 + norm_sq, 0.5 * s); }
};

struct LatticePoint {
  std::array<int, 2> jx{0, 0};  // spatial lattice index per axis
  std::array<int, 2> je{0, 0};  // frequency lattice index per axis
};

// Periodized discretization of R^d (d = 1 or 2) and its phase space.
// Spatial grid: x_j = (j - n/2) dx, j = 0..n-1, per axis, with n dx = L and
// dx deta n = 1. The Gabor lattice subsamples by integer strides.
class PhaseSpaceGrid {
 public:
  PhaseSpaceGrid(int d, int n, double extent, int stride_x, int stride_eta);

  int dim() const { return d_; }
  int samples() const { return n_; }
  double extent() const { return extent_; }
  double dx() const { return dx_; }
  double deta() const { return deta_; }
  int strideX() const { return sx_; }
  int strideEta() const { return se_; }
  int latX() const { return n_ / sx_; }    // lattice points per spatial axis
  int latEta() const { return n_ / se_; }  // lattice points per frequency axis

  long gridSize() const;     // n^d
  long latticeSize() const;  // (latX * latEta)^d
  double cellArea() const;   // lattice cell measure (sx dx * se deta)^d

  double xCoord(int j) const { return (j - n_ / 2) * dx_; }
  double etaCoord(int k) const { return (k - n_ / 2) * deta_; }
  // Doubled spatial grid (midpoints): xh_v = (v - n) dx/2, v = 0..2n-1.
  double halfCoord(int v) const { return (v - n_) * 0.5 * dx_; }

  // Flattened spatial index <-> per-axis indices (x-major).
  std::array<int, 2> unflattenSpatial(long i) const;
  long flattenSpatial(const std::array<int, 2>& j) const;

  long flattenLattice(const LatticePoint& z) const;
  LatticePoint unflattenLattice(long l) const;

  // Continuous coordinates of a lattice point, spatial part then frequency part.
  std::array<double, 4> coords(const LatticePoint& z) const;
  double latticeNormSq(const LatticePoint& z) const;

  bool onLattice(const LatticePoint& z) const;

 private:
  int d_, n_;
  double extent_, dx_, deta_;
  int sx_, se_;
};

// Complex values over the Gabor lattice.
struct PhaseSpaceArray {
  const PhaseSpaceGrid* grid = nullptr;
  Vec data;

  cplx& at(const LatticePoint& z) { return data[grid->flattenLattice(z)]; }
  cplx at(const LatticePoint& z) const { return data[grid->flattenLattice(z)]; }
};

// Centered d-dimensional DFT on the spatial grid:
//   sign -1:  out[k] = sum_j in[j] e^{-2 pi i x_j . eta_k}
//   sign +1:  out[j] = sum_k in[k] e^{+2 pi i x_j . eta_k}
// No measure factors; callers supply dx^d / deta^d.
void centeredDft(const PhaseSpaceGrid& g, Vec& data, int sign);

double norm2(const PhaseSpaceGrid& g, const Vec& f);  // discrete L2 norm
cplx innerProduct(const PhaseSpaceGrid& g, const Vec& f, const Vec& h);  // <f,h> = sum f conj(h) dx^d

// One axis of sum_{|i|<=3} exp(-pi (x + i*period)^2).
double periodizedGaussian(double x, double period);

Vec gaussianWindow(const PhaseSpaceGrid& g);
Vec hermiteWindow(const PhaseSpaceGrid& g, int order);

// pi(z) f = e^{2 pi i eta . t} f(t - x), circular.
Vec tfShift(const PhaseSpaceGrid& g, const LatticePoint& z, const Vec& f);

// V_g f(z) = <f, pi(z) g> over the Gabor lattice.
PhaseSpaceArray stft(const PhaseSpaceGrid& g, const Vec& window, const Vec& f);

// V_g^* F = sum_z F(z) pi(z) g * cell.
Vec stftAdjoint(const PhaseSpaceGrid& g, const Vec& window, const PhaseSpaceArray& F);

// Gabor frame operator S = V_g^* V_g (dense, n^d x n^d) and canonical dual window.
Mat frameOperator(const PhaseSpaceGrid& g, const Vec& window);
Vec dualWindow(const PhaseSpaceGrid& g, const Vec& window);

double modulationNorm(const PhaseSpaceGrid& g, const Vec& window, const Vec& f,
                      double p, const WeightSpec& w);

}  // namespace mpk

#endif
