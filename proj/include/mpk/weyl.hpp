#ifndef MPK_WEYL_HPP
#define MPK_WEYL_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "mpk/grid.hpp"
#include "mpk/symplectic.hpp"
#include "mpk/types.hpp"

namespace mpk {

// sigma(x, eta) sampled on the phase-space grid with doubled spatial
// resolution: x on the half-step grid xh_v = (v - n) dx/2 (2n points per
// axis), eta on the regular frequency grid (n points per axis). Layout is
// row-major with spatial axes first.
struct SymbolGrid {
  const PhaseSpaceGrid* grid = nullptr;
  Vec data;
  // Optional closed-form evaluator (x..., eta...); exact pullbacks use it.
  std::function<cplx(const std::array<double, 4>&)> eval;

  long size() const { return data.size(); }
};

enum class Provenance { Weyl, KohnNirenberg, Fio1, Fio2, Metaplectic, Composite, Oracle };

struct OperatorMatrix {
  Mat m;
  Provenance provenance = Provenance::Composite;
};

// Envelope H(u) over the lattice difference torus dominating a Gabor matrix.
struct ControllingProfile {
  const PhaseSpaceGrid* grid = nullptr;
  RVec h;               // indexed like a lattice point (centered differences)
  double s = 0.0;       // weight exponent
  double l1_weighted = 0.0;

  double at(int du_x, int du_e) const;  // centered difference indices (d = 1)
};

long symbolSize(const PhaseSpaceGrid& g);
std::vector<int> symbolDims(const PhaseSpaceGrid& g);  // {2n,..,n,..}

SymbolGrid sampleSymbol(const PhaseSpaceGrid& g,
                        const std::function<cplx(const std::array<double, 4>&)>& fn);
SymbolGrid constantSymbol(const PhaseSpaceGrid& g, cplx value);

// Named presets: "gaussian_bump center=<x,eta> width=<w> amp=<a>",
// "cosine_potential amp=", "nonsmooth_bump center= width= amp=".
SymbolGrid symbolPreset(const PhaseSpaceGrid& g, const std::string& name,
                        const std::map<std::string, std::string>& params);

// sigma . M (composition with a linear phase-space map), resampled.
SymbolGrid pullbackSymbol(const SymbolGrid& sigma, const RMat& M);

// Weyl quantization: midpoints on the doubled grid, spatial differences
// torus-wrapped to their centered representative.
OperatorMatrix weylQuantize(const PhaseSpaceGrid& g, const SymbolGrid& sigma);

// Exact left inverse of weylQuantize on spatially half-band-limited symbols.
SymbolGrid weylSymbolOfOperator(const PhaseSpaceGrid& g, const Mat& T);

OperatorMatrix knQuantize(const PhaseSpaceGrid& g, const SymbolGrid& sigma);

// The Weyl -> Kohn-Nirenberg symbol map: DFT, chirp e^{i pi eta1.eta2},
// inverse DFT, on centered frequency representatives.
SymbolGrid weylToKn(const SymbolGrid& sigma);

SymbolGrid shearSymbolU1(const SymbolGrid& sigma, const RMat& A);     // sigma(x, eta + A x)
SymbolGrid stretchSymbolU2(const SymbolGrid& sigma, const RMat& B);   // sigma(x, B^T eta)

// sigma~ with sigma^w T_I(Phi, 1) = T_I(Phi, sigma~).
SymbolGrid conjugateSymbolThroughPhase(const SymbolGrid& sigma, const QuadraticPhase& phi);

// Wigner distribution W(g,g) on the symbol grid.
SymbolGrid wignerDistribution(const PhaseSpaceGrid& g, const Vec& window);

// Symbol-domain STFT support: positions subsample the symbol grid (stride 2
// on spatial axes, 1 on frequency axes); frequencies subsample the dual grid
// so that j(lattice differences) land on frequency points exactly.
struct SymbolStft {
  const PhaseSpaceGrid* grid = nullptr;
  // max over positions of |V| at each frequency point; d = 1 only.
  RMat max_abs;  // (2n/se) x (n/sx), frequency indexed (p_l, q_l) centered
  double freq_cell = 0.0;

  double maxAt(int p, int q) const;  // centered integer frequencies (p in dx-dual units)
};

SymbolStft symbolStftMax(const SymbolGrid& sigma, const SymbolGrid& window);

double sjostrandNorm(const SymbolGrid& sigma, const WeightSpec& w);

ControllingProfile controllingFunction(const SymbolGrid& sigma, const Vec& window,
                                       const WeightSpec& w);

// Gaussian analysis window on the symbol grid (product of periodized
// Gaussians per symbol axis), discretely normalized.
SymbolGrid symbolGaussianWindow(const PhaseSpaceGrid& g);

}  // namespace mpk

#endif
