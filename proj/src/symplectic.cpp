#include "mpk/symplectic.hpp"

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

namespace mpk {

RMat symplecticJ(int d) {
  RMat J = RMat::Zero(2 * d, 2 * d);
  J.topRightCorner(d, d) = -RMat::Identity(d, d);
  J.bottomLeftCorner(d, d) = RMat::Identity(d, d);
  return J;
}

double symplecticResidual(const RMat& M) {
  const int d = static_cast<int>(M.rows()) / 2;
  RMat J = symplecticJ(d);
  return (M.transpose() * J * M - J).norm();
}

RMat projectSymplectic(RMat M) {
  const int d = static_cast<int>(M.rows()) / 2;
  RMat J = symplecticJ(d);
  for (int it = 0; it < 4 && symplecticResidual(M) > 1e-12; ++it) {
    RMat E = M.transpose() * J * M - J;
    M = M * (RMat::Identity(2 * d, 2 * d) + 0.5 * J * E);
  }
  return M;
}

SymplecticMatrix::SymplecticMatrix(const RMat& M) : m_(M) {
  if (M.rows() != M.cols() || M.rows() % 2 != 0 || M.rows() == 0)
    throw ConfigError("symplectic matrix must be 2d x 2d");
  d_ = static_cast<int>(M.rows()) / 2;
  residual_ = symplecticResidual(m_);
  if (residual_ > 1e-6) throw ConfigError("matrix is not symplectic (residual > 1e-6)");
  if (residual_ > 1e-10) {
    m_ = projectSymplectic(m_);
    residual_ = symplecticResidual(m_);
  }
  double det = m_.determinant();
  if (std::abs(det - 1.0) > 1e-6) throw ConfigError("symplectic matrix must have det 1");
}

SymplecticMatrix SymplecticMatrix::inverse() const {
  // A^{-1} = J^{-1} A^T J = -J A^T J
  RMat J = symplecticJ(d_);
  return SymplecticMatrix(-J * m_.transpose() * J);
}

SymplecticMatrix validateSymplectic(const RMat& M) { return SymplecticMatrix(M); }

double QuadraticHamiltonian::eval(const RVec& x, const RVec& xi) const {
  return 0.5 * x.dot(A * x) + xi.dot(B * x) + 0.5 * xi.dot(C * xi);
}

QuadraticHamiltonian QuadraticHamiltonian::preset(const std::string& name, int d) {
  QuadraticHamiltonian q;
  q.A = RMat::Zero(d, d);
  q.B = RMat::Zero(d, d);
  q.C = RMat::Zero(d, d);
  if (name == "free") {
    q.C = RMat::Identity(d, d);
  } else if (name == "harmonic") {
    q.A = RMat::Identity(d, d);
    q.C = RMat::Identity(d, d);
  } else if (name == "shear") {
    q.A = RMat::Identity(d, d);
  } else {
    throw ConfigError("unknown hamiltonian preset: " + name);
  }
  return q;
}

RMat hamiltonianMatrix(const QuadraticHamiltonian& q) {
  const int d = q.dim();
  if ((q.A - q.A.transpose()).norm() > 1e-12 || (q.C - q.C.transpose()).norm() > 1e-12)
    throw ConfigError("hamiltonian blocks A, C must be symmetric");
  RMat M(2 * d, 2 * d);
  M.topLeftCorner(d, d) = q.B;
  M.topRightCorner(d, d) = q.C;
  M.bottomLeftCorner(d, d) = -q.A;
  M.bottomRightCorner(d, d) = -q.B.transpose();
  return M;
}

SymplecticMatrix flow(const QuadraticHamiltonian& q, double t, FlowConvention conv) {
  if (!std::isfinite(t)) throw ConfigError("flow time must be finite");
  RMat gen = hamiltonianMatrix(q);
  double scale = (conv == FlowConvention::TwoPi) ? -t / kTwoPi : -t;
  RMat M = (scale * gen).exp();
  return SymplecticMatrix(projectSymplectic(M));
}

double QuadraticPhase::eval(const RVec& x, const RVec& eta) const {
  return 0.5 * x.dot(Q1 * x) + eta.dot(Q2 * x) - 0.5 * eta.dot(Q3 * eta);
}

QuadraticPhase phaseFunction(const SymplecticMatrix& S) {
  RMat A = S.blockA();
  if (std::abs(A.determinant()) < kDetSingular)
    throw SingularBlock("phase function undefined: |det A| below threshold");
  RMat Ainv = A.inverse();
  QuadraticPhase phi;
  phi.Q1 = S.blockC() * Ainv;
  phi.Q2 = Ainv;
  phi.Q3 = Ainv * S.blockB();
  // symplecticity forces symmetry of Q1, Q3; clean up roundoff
  phi.Q1 = 0.5 * (phi.Q1 + phi.Q1.transpose()).eval();
  phi.Q3 = 0.5 * (phi.Q3 + phi.Q3.transpose()).eval();
  return phi;
}

RMat GeneratorAtom::matrix(int d) const {
  RMat M = RMat::Identity(2 * d, 2 * d);
  switch (kind) {
    case Fourier:
      return fourier_sign > 0 ? symplecticJ(d) : RMat(-symplecticJ(d));
    case Chirp:
      M.bottomLeftCorner(d, d) = param;
      return M;
    case Dilate:
      M.topLeftCorner(d, d) = param;
      M.bottomRightCorner(d, d) = param.inverse().transpose();
      return M;
  }
  return M;
}

RMat GeneratorWord::product(int d) const {
  RMat M = RMat::Identity(2 * d, 2 * d);
  for (const auto& a : atoms) M = M * a.matrix(d);
  return M;
}

namespace {

void appendEtaShear(std::vector<GeneratorAtom>& atoms, const RMat& Q) {
  // [[I,Q],[0,I]] = J * [[I,0],[-Q,I]] * (-J)
  if (Q.norm() < 1e-13) return;
  atoms.push_back({GeneratorAtom::Fourier, +1, RMat()});
  atoms.push_back({GeneratorAtom::Chirp, 0, RMat(-Q)});
  atoms.push_back({GeneratorAtom::Fourier, -1, RMat()});
}

std::vector<GeneratorAtom> factorDetA(const SymplecticMatrix& S) {
  // [[A,B],[C,D]] = chirp(C A^{-1}) dilate(A) etashear(A^{-1} B)
  std::vector<GeneratorAtom> atoms;
  RMat A = S.blockA();
  RMat Ainv = A.inverse();
  RMat Q1 = 0.5 * (S.blockC() * Ainv + (S.blockC() * Ainv).transpose().eval());
  RMat Q3 = 0.5 * (Ainv * S.blockB() + (Ainv * S.blockB()).transpose().eval());
  if (Q1.norm() > 1e-13) atoms.push_back({GeneratorAtom::Chirp, 0, Q1});
  if ((A - RMat::Identity(A.rows(), A.cols())).norm() > 1e-13)
    atoms.push_back({GeneratorAtom::Dilate, 0, A});
  appendEtaShear(atoms, Q3);
  return atoms;
}

std::vector<GeneratorAtom> factorDetB(const SymplecticMatrix& S) {
  // [[A,B],[C,D]] = chirp(D B^{-1}) dilate(B) fourier(-J) chirp(B^{-1} A)
  std::vector<GeneratorAtom> atoms;
  RMat B = S.blockB();
  RMat Binv = B.inverse();
  RMat P = 0.5 * (S.blockD() * Binv + (S.blockD() * Binv).transpose().eval());
  RMat Sc = 0.5 * (Binv * S.blockA() + (Binv * S.blockA()).transpose().eval());
  if (P.norm() > 1e-13) atoms.push_back({GeneratorAtom::Chirp, 0, P});
  atoms.push_back({GeneratorAtom::Dilate, 0, B});
  atoms.push_back({GeneratorAtom::Fourier, -1, RMat()});
  if (Sc.norm() > 1e-13) atoms.push_back({GeneratorAtom::Chirp, 0, Sc});
  return atoms;
}

}  // namespace

GeneratorWord generatorFactorization(const SymplecticMatrix& S) {
  const int d = S.dim();
  GeneratorWord word;
  RMat M = S.matrix();
  if ((M - RMat::Identity(2 * d, 2 * d)).norm() < 1e-13) {
    word.phase_unresolved = false;
    return word;
  }
  if (std::abs(S.blockA().determinant()) >= kDetSingular) {
    word.atoms = factorDetA(S);
  } else if (std::abs(S.blockB().determinant()) >= kDetSingular) {
    word.atoms = factorDetB(S);
  } else {
    // both blocks singular (d >= 2): premultiply by J and recurse once;
    // J^{-1} = -J is a single Fourier atom.
    SymplecticMatrix JS(symplecticJ(d) * M);
    std::vector<GeneratorAtom> tail;
    if (std::abs(JS.blockA().determinant()) >= kDetSingular) {
      tail = factorDetA(JS);
    } else if (std::abs(JS.blockB().determinant()) >= kDetSingular) {
      tail = factorDetB(JS);
    } else {
      // last resort: eta-shear premultiplication A + SC invertible
      std::mt19937_64 rng(12345);
      std::normal_distribution<double> nd;
      for (double t : {0.5, 1.0, 2.0, 4.0}) {
        RMat Ssym(d, d);
        for (int i = 0; i < d; ++i)
          for (int j = 0; j <= i; ++j) Ssym(i, j) = Ssym(j, i) = t * nd(rng);
        RMat cand = S.blockA() + Ssym * S.blockC();
        if (std::abs(cand.determinant()) >= kDetSingular) {
          RMat shear = RMat::Identity(2 * d, 2 * d);
          shear.topRightCorner(d, d) = Ssym;
          SymplecticMatrix S2(shear * M);
          GeneratorWord w;
          appendEtaShear(w.atoms, RMat(-Ssym));
          auto rest = factorDetA(S2);
          w.atoms.insert(w.atoms.end(), rest.begin(), rest.end());
          w.reconstruction_residual = (w.product(d) - M).norm();
          return w;
        }
      }
      throw ConfigError("generator factorization failed");
    }
    word.atoms.push_back({GeneratorAtom::Fourier, -1, RMat()});
    word.atoms.insert(word.atoms.end(), tail.begin(), tail.end());
  }
  word.reconstruction_residual = (word.product(d) - M).norm();
  return word;
}

RMat randomSymplectic(int d, unsigned seed, double scale) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  RMat Ssym(2 * d, 2 * d);
  for (int i = 0; i < 2 * d; ++i)
    for (int j = 0; j <= i; ++j) Ssym(i, j) = Ssym(j, i) = scale * nd(rng);
  RMat gen = symplecticJ(d) * Ssym;
  return projectSymplectic(gen.exp());
}

}  // namespace mpk
