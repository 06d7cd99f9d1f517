#ifndef MPK_FIO_HPP
#define MPK_FIO_HPP

#include <array>
#include <string>

#include "mpk/weyl.hpp"

namespace mpk {

// K[w,z] = <T pi(z) g, pi(w) g> over lattice pairs; rows w, columns z.
struct GaborMatrix {
  const PhaseSpaceGrid* grid = nullptr;
  Mat k;
  std::string window_tag;
};

struct DecayReport {
  double n_fit = 0.0;
  double fit_residual = 0.0;
  double l1_mass = 0.0;
  std::array<double, 4> graph_mass{0, 0, 0, 0};  // radii 1, 2, 4, 8 cells
  double rounding_radius = 0.0;
  double s = 0.0;
  std::string window_tag;
  std::string convention_flag;
};

struct FactorizationResult {
  SymbolGrid sigma1, sigma2;
  double reconstruction_residual = 0.0;  // max|sigma1^w mu(A) - T| / max|T|
  double sigma2_vs_pullback = 0.0;       // max|sigma2 - sigma1 . A| / max|sigma1|
  double sigma1_norm = -1.0;             // Sjostrand norms (d = 1)
  double sigma2_norm = -1.0;
};

struct InversionResult {
  OperatorMatrix inverse;
  DecayReport decay;
  double condition_number = 0.0;
  double type2_residual = -1.0;  // set when det A != 0
};

Mat dftForward(const PhaseSpaceGrid& g);  // E[k,n] = e^{-2 pi i eta_k . x_n}

OperatorMatrix type1Fio(const PhaseSpaceGrid& g, const QuadraticPhase& phi,
                        const SymbolGrid& sigma);
OperatorMatrix type2Fio(const PhaseSpaceGrid& g, const QuadraticPhase& phi,
                        const SymbolGrid& tau);

Mat atomOperator(const PhaseSpaceGrid& g, const GeneratorAtom& atom);
OperatorMatrix metaplectic(const PhaseSpaceGrid& g, const SymplecticMatrix& S);
OperatorMatrix metaplecticFromWord(const PhaseSpaceGrid& g, const GeneratorWord& word);

GaborMatrix gaborMatrix(const PhaseSpaceGrid& g, const Mat& T, const Vec& window,
                        const std::string& window_tag = "gaussian");

DecayReport decayProfile(const GaborMatrix& K, const SymplecticMatrix& S,
                         const WeightSpec& w);

// Weighted least squares flow estimate; returns the 2d x 2d matrix and its
// symplectic residual.
std::pair<RMat, double> recoverFlow(const GaborMatrix& K);

FactorizationResult factorize(const PhaseSpaceGrid& g, const Mat& T,
                              const SymplecticMatrix& S, const WeightSpec& w);

InversionResult invertFio(const PhaseSpaceGrid& g, const Mat& T,
                          const SymplecticMatrix& S, const WeightSpec& w);

// Max entry difference after aligning B's global phase to A at A's peak.
double alignedMaxDiff(const Mat& A, const Mat& B);

}  // namespace mpk

#endif
