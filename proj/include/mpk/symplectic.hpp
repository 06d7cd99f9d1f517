#ifndef MPK_SYMPLECTIC_HPP
#define MPK_SYMPLECTIC_HPP

#include <vector>

#include "mpk/types.hpp"

namespace mpk {

// Standard symplectic form on R^{2d}: J = [[0,-I],[I,0]].
RMat symplecticJ(int d);
double symplecticResidual(const RMat& M);  // ||M^T J M - J||_F
RMat projectSymplectic(RMat M);            // Newton correction toward Sp(d,R)

// 2d x 2d real matrix with certified symplectic residual and blocks
// [[A,B],[C,D]].
class SymplecticMatrix {
 public:
  explicit SymplecticMatrix(const RMat& M);

  int dim() const { return d_; }
  const RMat& matrix() const { return m_; }
  double residual() const { return residual_; }

  RMat blockA() const { return m_.topLeftCorner(d_, d_); }
  RMat blockB() const { return m_.topRightCorner(d_, d_); }
  RMat blockC() const { return m_.bottomLeftCorner(d_, d_); }
  RMat blockD() const { return m_.bottomRightCorner(d_, d_); }

  SymplecticMatrix inverse() const;

 private:
  int d_;
  RMat m_;
  double residual_;
};

SymplecticMatrix validateSymplectic(const RMat& M);

// a(x,xi) = 1/2 x A x + xi B x + 1/2 xi C xi, A and C symmetric.
struct QuadraticHamiltonian {
  RMat A, B, C;

  int dim() const { return static_cast<int>(A.rows()); }
  double eval(const RVec& x, const RVec& xi) const;
  static QuadraticHamiltonian preset(const std::string& name, int d);
};

// Hamiltonian matrix [[B, C],[-A, -B^T]] in sp(d,R).
RMat hamiltonianMatrix(const QuadraticHamiltonian& q);

// Scaling of the classical flow relative to the written Hamiltonian system.
// Both retained; TwoPi is the value resolved by the propagator experiment.
enum class FlowConvention { Paper, TwoPi };

// A_t generating e^{itH}: exp(-t A / (2 pi)) under TwoPi, exp(-t A) under Paper.
// The sign makes mu(A_t) the Gabor concentration of the e^{itH} oracle.
SymplecticMatrix flow(const QuadraticHamiltonian& q, double t,
                      FlowConvention conv = FlowConvention::TwoPi);

// Phi(x,eta) = 1/2 x Q1 x + eta Q2 x - 1/2 eta Q3 eta with Q1 = C A^{-1},
// Q2 = A^{-1}, Q3 = A^{-1} B.
struct QuadraticPhase {
  RMat Q1, Q2, Q3;

  int dim() const { return static_cast<int>(Q1.rows()); }
  double eval(const RVec& x, const RVec& eta) const;
};

inline constexpr double kDetSingular = 1e-6;

QuadraticPhase phaseFunction(const SymplecticMatrix& A);

struct GeneratorAtom {
  enum Kind { Fourier, Chirp, Dilate } kind;
  int fourier_sign = +1;  // +1: J, -1: -J
  RMat param;             // Chirp: symmetric C; Dilate: invertible M

  RMat matrix(int d) const;
};

struct GeneratorWord {
  std::vector<GeneratorAtom> atoms;  // product atoms[0] * ... * atoms.back()
  double reconstruction_residual = 0.0;
  bool phase_unresolved = true;

  RMat product(int d) const;
};

GeneratorWord generatorFactorization(const SymplecticMatrix& A);

// exp(J * S) for random symmetric S scaled by `scale`; deterministic in seed.
RMat randomSymplectic(int d, unsigned seed, double scale);

}  // namespace mpk

#endif
