#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mpk/grid.hpp"
#include "oracles.hpp"

using namespace mpk;

TEST_CASE("grid construction and invariants") {
  PhaseSpaceGrid g(1, 8, std::sqrt(8.0), 1, 1);
  CHECK(g.dx() == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-14));
  CHECK(g.deta() == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-14));
  CHECK(g.samples() * g.dx() == doctest::Approx(g.extent()).epsilon(1e-14));
  CHECK(g.dx() * g.deta() * g.samples() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g.latX() == 8);
  CHECK(g.latEta() == 8);

  PhaseSpaceGrid g2(1, 128, std::sqrt(128.0), 2, 2);
  CHECK(g2.latX() == 64);
  CHECK(g2.latEta() == 64);
  // physical redundancy 1/(a b) = N / (sx * se)
  CHECK(1.0 / ((g2.strideX() * g2.dx()) * (g2.strideEta() * g2.deta())) ==
        doctest::Approx(32.0));

  CHECK_THROWS_AS(PhaseSpaceGrid(1, 7, 1.0, 1, 1), ConfigError);
  CHECK_THROWS_AS(PhaseSpaceGrid(1, 8, 1.0, 3, 1), ConfigError);
  CHECK_THROWS_AS(PhaseSpaceGrid(3, 8, 1.0, 1, 1), ConfigError);
  // stride so coarse the redundancy margin fails
  CHECK_THROWS_AS(PhaseSpaceGrid(1, 8, std::sqrt(8.0), 4, 4), ConfigError);
}

TEST_CASE("lattice flatten round trip") {
  PhaseSpaceGrid g(1, 16, 4.0, 2, 2);
  for (long l = 0; l < g.latticeSize(); ++l) {
    CHECK(g.flattenLattice(g.unflattenLattice(l)) == l);
  }
  PhaseSpaceGrid g2(2, 8, std::sqrt(8.0), 2, 2);
  for (long l = 0; l < g2.latticeSize(); ++l) {
    CHECK(g2.flattenLattice(g2.unflattenLattice(l)) == l);
  }
}

TEST_CASE("gaussian window basics") {
  PhaseSpaceGrid g(1, 64, 8.0, 2, 2);
  Vec w = gaussianWindow(g);
  const int n = g.samples();
  // even symmetry
  double sym = 0.0;
  for (int j = 1; j < n; ++j) sym = std::max(sym, std::abs(w[j] - w[(n - j) % n]));
  CHECK(sym < 1e-12);
  CHECK(norm2(g, w) == doctest::Approx(1.0).epsilon(1e-12));
  // maximum at x = 0 (index n/2)
  long imax = 0;
  w.cwiseAbs().maxCoeff(&imax);
  CHECK(imax == n / 2);
}

TEST_CASE("hermite windows") {
  PhaseSpaceGrid g(1, 64, 8.0, 2, 2);
  Vec h0 = hermiteWindow(g, 0);
  Vec gauss = gaussianWindow(g);
  CHECK((h0 - gauss).cwiseAbs().maxCoeff() < 1e-12);
  Vec h1 = hermiteWindow(g, 1);
  CHECK(std::abs(h1[g.samples() / 2]) < 1e-12);
  const int n = g.samples();
  double odd = 0.0;
  for (int j = 1; j < n; ++j) odd = std::max(odd, std::abs(h1[j] + h1[(n - j) % n]));
  CHECK(odd < 1e-12);
  CHECK(norm2(g, h1) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(norm2(g, hermiteWindow(g, 4)) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(hermiteWindow(g, 7), ConfigError);
}

TEST_CASE("tf shift identity, unitarity, composition phase") {
  PhaseSpaceGrid g(1, 8, std::sqrt(8.0), 1, 1);
  Vec f = oracles::randomState(g, 7);

  // the lattice point with coordinates (0, 0) sits at the center indices
  LatticePoint zero;
  zero.jx[0] = g.latX() / 2;
  zero.je[0] = g.latEta() / 2;
  CHECK((tfShift(g, zero, f) - f).cwiseAbs().maxCoeff() < 1e-14);

  for (unsigned s = 0; s < 4; ++s) {
    LatticePoint z;
    z.jx[0] = static_cast<int>((s * 3 + 1) % g.latX());
    z.je[0] = static_cast<int>((s * 5 + 2) % g.latEta());
    Vec sf = tfShift(g, z, f);
    CHECK(norm2(g, sf) == doctest::Approx(norm2(g, f)).epsilon(1e-12));
  }

  // pi(z1) pi(z2) = e^{-2 pi i x1 eta2} pi(z1 + z2), indices mod lattice
  for (unsigned s = 0; s < 6; ++s) {
    std::mt19937_64 rng(100 + s);
    std::uniform_int_distribution<int> ud(0, g.latX() - 1);
    LatticePoint z1, z2, z12;
    z1.jx[0] = ud(rng);
    z1.je[0] = ud(rng);
    z2.jx[0] = ud(rng);
    z2.je[0] = ud(rng);
    // coordinate addition in centered index convention
    z12.jx[0] = (z1.jx[0] + z2.jx[0] - g.latX() / 2 + g.latX()) % g.latX();
    z12.je[0] = (z1.je[0] + z2.je[0] - g.latEta() / 2 + g.latEta()) % g.latEta();
    Vec lhs = tfShift(g, z1, tfShift(g, z2, f));
    double x1 = g.xCoord(z1.jx[0] * g.strideX());
    double eta2 = g.etaCoord(z2.je[0] * g.strideEta());
    cplx phase = std::exp(cplx(0, -kTwoPi * x1 * eta2));
    Vec rhs = phase * tfShift(g, z12, f);
    // the composed frequency may wrap; wrapping is exact on the grid
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12 * f.cwiseAbs().maxCoeff());
    CHECK(std::abs(std::abs(phase) - 1.0) < 1e-14);
  }

  LatticePoint off;
  off.jx[0] = g.latX();
  off.je[0] = 0;
  CHECK_THROWS_AS(tfShift(g, off, f), ConfigError);
}

TEST_CASE("stft matches brute force and self inner product") {
  PhaseSpaceGrid g(1, 16, 4.0, 2, 2);
  Vec w = gaussianWindow(g);
  Vec f = oracles::randomState(g, 3);
  PhaseSpaceArray V = stft(g, w, f);
  for (long l = 0; l < g.latticeSize(); ++l) {
    LatticePoint z = g.unflattenLattice(l);
    cplx ref = oracles::stftPoint(g, w, f, z);
    CHECK(std::abs(V.data[l] - ref) < 1e-11);
  }

  // f = g: value at z = 0 is ||g||^2 = 1
  PhaseSpaceArray Vg = stft(g, w, w);
  LatticePoint zc;
  zc.jx[0] = g.latX() / 2;
  zc.je[0] = g.latEta() / 2;
  CHECK(std::abs(Vg.at(zc) - cplx(1.0)) < 1e-12);

  CHECK_THROWS_AS(stft(g, Vec::Zero(g.gridSize()), f), ConfigError);
}

TEST_CASE("stft peak at the shift of the window") {
  PhaseSpaceGrid g(1, 32, std::sqrt(32.0), 2, 2);
  Vec w = gaussianWindow(g);
  LatticePoint z0;
  z0.jx[0] = 11;
  z0.je[0] = 5;
  Vec f = tfShift(g, z0, w);
  PhaseSpaceArray V = stft(g, w, f);
  long lmax = 0;
  V.data.cwiseAbs().maxCoeff(&lmax);
  LatticePoint zm = g.unflattenLattice(lmax);
  CHECK(zm.jx[0] == z0.jx[0]);
  CHECK(zm.je[0] == z0.je[0]);
}

TEST_CASE("moyal / parseval on the lattice") {
  PhaseSpaceGrid g(1, 32, std::sqrt(32.0), 2, 2);
  Vec w = gaussianWindow(g);
  Vec f = oracles::randomSmoothState(g, 11);
  PhaseSpaceArray V = stft(g, w, f);
  double sum = V.data.squaredNorm() * g.cellArea();
  double ref = std::pow(norm2(g, f), 2);  // ||g|| = 1
  CHECK(sum == doctest::Approx(ref).epsilon(1e-3));
}

TEST_CASE("stft adjoint: zero, linearity, adjointness") {
  PhaseSpaceGrid g(1, 16, 4.0, 2, 2);
  Vec w = gaussianWindow(g);
  PhaseSpaceArray Z;
  Z.grid = &g;
  Z.data = Vec::Zero(g.latticeSize());
  CHECK(stftAdjoint(g, w, Z).cwiseAbs().maxCoeff() == 0.0);

  PhaseSpaceArray F1 = Z, F2 = Z;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (long l = 0; l < g.latticeSize(); ++l) {
    F1.data[l] = cplx(nd(rng), nd(rng));
    F2.data[l] = cplx(nd(rng), nd(rng));
  }
  PhaseSpaceArray F12 = Z;
  F12.data = F1.data + F2.data;
  Vec lin = stftAdjoint(g, w, F12) - stftAdjoint(g, w, F1) - stftAdjoint(g, w, F2);
  CHECK(lin.cwiseAbs().maxCoeff() < 1e-12);

  // <stft f, F>_lattice = <f, adjoint F>_grid
  Vec f = oracles::randomState(g, 9);
  PhaseSpaceArray Vf = stft(g, w, f);
  cplx lhs = 0;
  for (long l = 0; l < g.latticeSize(); ++l) lhs += Vf.data[l] * std::conj(F1.data[l]);
  lhs *= g.cellArea();
  cplx rhs = innerProduct(g, f, stftAdjoint(g, w, F1));
  CHECK(std::abs(lhs - rhs) < 1e-10);
}

TEST_CASE("dual window frame inversion") {
  PhaseSpaceGrid g(1, 32, std::sqrt(32.0), 2, 2);
  Vec w = gaussianWindow(g);
  Vec dual = dualWindow(g, w);
  Vec f = oracles::randomState(g, 21);
  Vec rec = stftAdjoint(g, dual, stft(g, w, f));
  CHECK((rec - f).cwiseAbs().maxCoeff() < 1e-8);
  // also with the roles of analysis/synthesis swapped
  Vec rec2 = stftAdjoint(g, w, stft(g, dual, f));
  CHECK((rec2 - f).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("modulation norms") {
  PhaseSpaceGrid g(1, 32, std::sqrt(32.0), 2, 2);
  Vec w = gaussianWindow(g);
  WeightSpec w0{0.0}, w2{2.0};

  CHECK(modulationNorm(g, w, Vec::Zero(g.gridSize()), 1.0, w2) == 0.0);

  Vec f = oracles::randomSmoothState(g, 2);
  double m2 = modulationNorm(g, w, f, 2.0, w0);
  CHECK(m2 == doctest::Approx(norm2(g, f)).epsilon(1e-3));

  cplx c(1.7, -0.4);
  double h1 = modulationNorm(g, w, Vec(c * f), 1.0, w2);
  CHECK(h1 == doctest::Approx(std::abs(c) * modulationNorm(g, w, f, 1.0, w2)).epsilon(1e-12));
  double hi = modulationNorm(g, w, Vec(c * f), std::numeric_limits<double>::infinity(), w2);
  CHECK(hi == doctest::Approx(std::abs(c) *
                              modulationNorm(g, w, f, std::numeric_limits<double>::infinity(), w2))
                  .epsilon(1e-12));

  CHECK_THROWS_AS(modulationNorm(g, w, f, 0.5, w0), ConfigError);
}

TEST_CASE("weight equivalence bound for matrices with both norms >= 1") {
  PhaseSpaceGrid g(1, 32, std::sqrt(32.0), 2, 2);
  for (unsigned seed : {1u, 2u, 3u, 4u}) {
    RMat M = randomSymplectic(1, seed, 0.4);
    WeightSpec ws{2.0};
    double up = 0.0, down = 0.0;
    for (long l = 0; l < g.latticeSize(); ++l) {
      LatticePoint z = g.unflattenLattice(l);
      auto c = g.coords(z);
      Eigen::Vector2d zc(c[0], c[1]);
      Eigen::Vector2d mz = M * zc;
      double r = ws(mz.squaredNorm()) / ws(zc.squaredNorm());
      up = std::max(up, r);
      down = std::max(down, 1.0 / r);
    }
    Eigen::JacobiSVD<RMat> svd(M);
    double condPow = std::pow(svd.singularValues()(0) / svd.singularValues()(1), ws.s);
    CHECK(up * down <= condPow * 1.05);
  }
}

TEST_CASE("window norm equivalence is stable under refinement") {
  WeightSpec ws{1.0};
  double lo64 = 1e300, hi64 = 0, lo128 = 1e300, hi128 = 0;
  for (int pass = 0; pass < 2; ++pass) {
    int n = pass == 0 ? 64 : 128;
    PhaseSpaceGrid g(1, n, std::sqrt(double(n)), 2, 2);
    Vec wg = gaussianWindow(g);
    Vec wh = hermiteWindow(g, 4);
    for (unsigned s = 0; s < 20; ++s) {
      Vec f = oracles::randomSmoothState(g, 40 + s);
      double a = modulationNorm(g, wg, f, 1.0, ws);
      double b = modulationNorm(g, wh, f, 1.0, ws);
      double r = a / b;
      if (pass == 0) {
        lo64 = std::min(lo64, r);
        hi64 = std::max(hi64, r);
      } else {
        lo128 = std::min(lo128, r);
        hi128 = std::max(hi128, r);
      }
    }
  }
  CHECK(hi64 / lo64 < 10.0);  // genuinely equivalent norms
  CHECK(std::abs(hi128 / hi64 - 1.0) < 0.1);
  CHECK(std::abs(lo128 / lo64 - 1.0) < 0.1);
}

TEST_CASE("d = 2 grid: shift unitarity and stft self peak") {
  PhaseSpaceGrid g(2, 8, std::sqrt(8.0), 2, 2);
  Vec w = gaussianWindow(g);
  CHECK(norm2(g, w) == doctest::Approx(1.0).epsilon(1e-12));
  LatticePoint z;
  z.jx = {1, 3};
  z.je = {2, 1};
  Vec f = tfShift(g, z, w);
  CHECK(norm2(g, f) == doctest::Approx(1.0).epsilon(1e-12));
  PhaseSpaceArray V = stft(g, w, f);
  long lmax = 0;
  V.data.cwiseAbs().maxCoeff(&lmax);
  LatticePoint zm = g.unflattenLattice(lmax);
  CHECK(zm.jx[0] == z.jx[0]);
  CHECK(zm.jx[1] == z.jx[1]);
  CHECK(zm.je[0] == z.je[0]);
  CHECK(zm.je[1] == z.je[1]);
}
