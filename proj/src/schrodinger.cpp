#include "mpk/schrodinger.hpp"

#include <chrono>

#include <Eigen/Eigenvalues>

namespace mpk {

namespace {

double hermitianDefect(const Mat& H) { return (H - H.adjoint()).cwiseAbs().maxCoeff(); }

Mat hermitianPropagator(const Mat& vecs, const RVec& vals, double t) {
  Vec phases(vals.size());
  for (long i = 0; i < vals.size(); ++i) phases[i] = std::exp(cplx(0, t * vals[i]));
  return vecs * phases.asDiagonal() * vecs.adjoint();
}

}  // namespace

const char* conventionName(FlowConvention conv) {
  return conv == FlowConvention::TwoPi ? "twopi" : "paper";
}

SymbolGrid hamiltonianSymbol(const PhaseSpaceGrid& g, const QuadraticHamiltonian& q) {
  const int d = g.dim();
  if (q.dim() != d) throw ConfigError("hamiltonian dimension mismatch");
  return sampleSymbol(g, [&q, d](const std::array<double, 4>& u) {
    RVec x(d), e(d);
    for (int a = 0; a < d; ++a) {
      x[a] = u[a];
      e[a] = u[d + a];
    }
    return cplx(q.eval(x, e));
  });
}

OperatorMatrix denseHamiltonian(const PhaseSpaceGrid& g, const QuadraticHamiltonian& q,
                                const SymbolGrid& sigma) {
  OperatorMatrix H = weylQuantize(g, hamiltonianSymbol(g, q));
  if (sigma.data.size() > 0) {
    if (sigma.data.size() != symbolSize(g)) throw ConfigError("perturbation shape mismatch");
    H.m += weylQuantize(g, sigma).m;
  }
  H.provenance = Provenance::Composite;
  return H;
}

PropagatorResult oraclePropagator(const Mat& H, double t) {
  auto t0 = std::chrono::steady_clock::now();
  if (hermitianDefect(H) > 1e-6) throw ConfigError("oracle propagator needs a Hermitian H");
  Mat Hs = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(Hs);
  PropagatorResult out;
  out.u.m = hermitianPropagator(es.eigenvectors(), es.eigenvalues(), t);
  out.u.provenance = Provenance::Oracle;
  out.method = "oracle";
  out.unitarity_defect =
      (out.u.m.adjoint() * out.u.m - Mat::Identity(H.rows(), H.cols())).norm();
  out.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

QuadraticGenerator::QuadraticGenerator(const PhaseSpaceGrid& g, const QuadraticHamiltonian& q) {
  h_ = weylQuantize(g, hamiltonianSymbol(g, q)).m;
  h_ = 0.5 * (h_ + h_.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> es(h_);
  vecs_ = es.eigenvectors();
  vals_ = es.eigenvalues();
}

Mat QuadraticGenerator::propagator(double t) const {
  return hermitianPropagator(vecs_, vals_, t);
}

PropagatorResult strangPropagator(const PhaseSpaceGrid& g, const QuadraticHamiltonian& q,
                                  const SymbolGrid& sigma, double t, int n_steps) {
  if (n_steps < 1) throw ConfigError("strang propagator needs n_steps >= 1");
  auto t0 = std::chrono::steady_clock::now();
  const double dt = t / n_steps;
  QuadraticGenerator gen(g, q);
  Mat half = gen.propagator(0.5 * dt);
  Mat pert;
  {
    Mat Sw = weylQuantize(g, sigma).m;
    if (hermitianDefect(Sw) > 1e-6) throw ConfigError("strang: perturbation must be Hermitian");
    Sw = 0.5 * (Sw + Sw.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(Sw);
    pert = hermitianPropagator(es.eigenvectors(), es.eigenvalues(), dt);
  }
  Mat step = half * pert * half;
  Mat U = Mat::Identity(g.gridSize(), g.gridSize());
  for (int i = 0; i < n_steps; ++i) U = step * U;
  PropagatorResult out;
  out.u.m = U;
  out.u.provenance = Provenance::Composite;
  out.method = "strang";
  out.unitarity_defect = (U.adjoint() * U - Mat::Identity(U.rows(), U.cols())).norm();
  out.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

OperatorMatrix conjugatedPerturbation(const PhaseSpaceGrid& g, const QuadraticHamiltonian& q,
                                      double s_time, const SymbolGrid& sigma,
                                      FlowConvention conv, double* gap_out) {
  QuadraticGenerator gen(g, q);
  Mat Sw = weylQuantize(g, sigma).m;
  Mat conj_op = gen.propagator(-s_time) * Sw * gen.propagator(s_time);
  if (gap_out) {
    // under the intertwining pi(Az) = c mu(A) pi(z) mu(A)^{-1}, the Egorov
    // identity reads mu(A_s)^{-1} sigma^w mu(A_s) = (sigma . A_s)^w
    SymplecticMatrix As = flow(q, s_time, conv);
    SymbolGrid pulled = pullbackSymbol(sigma, As.matrix());
    Mat viaSymbol = weylQuantize(g, pulled).m;
    *gap_out = (conj_op - viaSymbol).cwiseAbs().maxCoeff();
  }
  OperatorMatrix out;
  out.m = conj_op;
  out.provenance = Provenance::Composite;
  return out;
}

DysonResult dysonCorrection(const PhaseSpaceGrid& g, const QuadraticHamiltonian& q,
                            const SymbolGrid& sigma, double t, const DysonConfig& cfg) {
  if (cfg.n_terms < 0 || cfg.nodes < 1) throw ConfigError("invalid Dyson configuration");
  const long ng = g.gridSize();
  DysonResult out;
  out.correction.m = Mat::Identity(ng, ng);
  out.correction.provenance = Provenance::Composite;
  if (cfg.n_terms == 0 || sigma.data.cwiseAbs().maxCoeff() == 0.0) return out;

  QuadraticGenerator gen(g, q);
  Mat Sw = weylQuantize(g, sigma).m;

  const bool midpoint = (cfg.rule == DysonConfig::Midpoint);
  const int nn = cfg.nodes;
  const double h = t / nn;
  const int npts = midpoint ? nn : nn + 1;
  std::vector<Mat> B(npts);
  for (int i = 0; i < npts; ++i) {
    double s = midpoint ? (i + 0.5) * h : i * h;
    Mat U = gen.propagator(s);
    B[i] = gen.propagator(-s) * Sw * U;
  }

  std::vector<Mat> Gprev(npts, Mat::Identity(ng, ng)), Gcur(npts, Mat());
  // C' = i B(t) C for U = e^{itH}, so the n-th term carries (+i)^n.
  cplx unit(0, 1);
  cplx coeff = 1.0;
  for (int k = 1; k <= cfg.n_terms; ++k) {
    coeff *= unit;
    if (midpoint) {
      Mat run = Mat::Zero(ng, ng);
      for (int i = 0; i < nn; ++i) {
        Mat F = B[i] * Gprev[i];
        Gcur[i] = run + 0.5 * h * F;
        run += h * F;
      }
      out.correction.m += coeff * run;
      out.term_norms.push_back(run.operatorNorm());
      if (cfg.tolerance > 0 && out.term_norms.back() < cfg.tolerance) break;
    } else {
      Gcur[0] = Mat::Zero(ng, ng);
      Mat Fprev = B[0] * Gprev[0];
      for (int i = 1; i <= nn; ++i) {
        Mat F = B[i] * Gprev[i];
        Gcur[i] = Gcur[i - 1] + 0.5 * h * (Fprev + F);
        Fprev = F;
      }
      out.correction.m += coeff * Gcur[nn];
      out.term_norms.push_back(Gcur[nn].operatorNorm());
      if (cfg.tolerance > 0 && out.term_norms.back() < cfg.tolerance) break;
    }
    std::swap(Gprev, Gcur);
  }
  return out;
}

double mOfT(const PhaseSpaceGrid& g, const QuadraticHamiltonian& q, double t,
            const WeightSpec& w, FlowConvention conv, int r_samples, int quad_per_axis) {
  const int d = g.dim();
  const int D = 2 * d;
  double best = 0.0;
  for (int i = 0; i <= r_samples; ++i) {
    double r = t * i / double(r_samples);
    RMat A = flow(q, r, conv).matrix();
    Eigen::JacobiSVD<RMat> svd(A);
    double opnorm = svd.singularValues()(0);
    // closed form for the Wigner-width Gaussian pair Phi, Phi o A:
    // ||V||_{L1(v_s)} = det(G)^{-1/2} int e^{-(pi/2) z (I+G)^{-1} z} v_s(z) dz
    RMat G = A.transpose() * A;
    RMat IG = RMat::Identity(D, D) + G;
    RMat IGinv = IG.inverse();
    double pref = 1.0 / std::sqrt(G.determinant());
    Eigen::SelfAdjointEigenSolver<RMat> es(IG);
    double R = 6.0 * std::sqrt(2.0 * es.eigenvalues().maxCoeff() / kPi);
    double step = 2.0 * R / quad_per_axis;
    double acc = 0.0;
    if (d == 1) {
      for (int a = 0; a < quad_per_axis; ++a) {
        double z0 = -R + (a + 0.5) * step;
        for (int b = 0; b < quad_per_axis; ++b) {
          double z1 = -R + (b + 0.5) * step;
          Eigen::Vector2d zeta(z0, z1);
          acc += std::exp(-0.5 * kPi * zeta.dot(IGinv * zeta)) * w(zeta.squaredNorm());
        }
      }
      acc *= step * step;
    } else {
      int qpa = std::min(quad_per_axis, 24);
      double st = 2.0 * R / qpa;
      Eigen::VectorXd zeta(4);
      for (int a0 = 0; a0 < qpa; ++a0)
        for (int a1 = 0; a1 < qpa; ++a1)
          for (int a2 = 0; a2 < qpa; ++a2)
            for (int a3 = 0; a3 < qpa; ++a3) {
              zeta << -R + (a0 + 0.5) * st, -R + (a1 + 0.5) * st, -R + (a2 + 0.5) * st,
                  -R + (a3 + 0.5) * st;
              acc += std::exp(-0.5 * kPi * zeta.dot(IGinv * zeta)) * w(zeta.squaredNorm());
            }
      acc *= std::pow(st, 4);
    }
    best = std::max(best, std::pow(opnorm, w.s) * pref * acc);
  }
  return best;
}

double dysonTailBound(double t, double m_est, double norm_est, int n_terms) {
  if (t < 0 || m_est < 0 || norm_est < 0) throw ConfigError("tail bound needs nonnegative inputs");
  const double r = t * m_est * norm_est;
  double term = 1.0;
  for (int n = 1; n <= n_terms; ++n) term *= r / n;
  double tail = 0.0;
  for (int n = n_terms + 1; n < n_terms + 400; ++n) {
    term *= r / n;
    tail += term;
    if (term < tail * 1e-18 + 1e-300) break;
  }
  return tail;
}

namespace {

BtExtraction analyzeBt(const PhaseSpaceGrid& g, const Mat& B, const Vec& window,
                       const WeightSpec& w) {
  BtExtraction out;
  out.bt = weylSymbolOfOperator(g, B);
  GaborMatrix K = gaborMatrix(g, B, window);
  SymplecticMatrix id(RMat::Identity(2 * g.dim(), 2 * g.dim()));
  out.decay = decayProfile(K, id, w);
  if (g.dim() == 1) out.bt_norm = sjostrandNorm(out.bt, w);
  return out;
}

}  // namespace

BtExtraction extractBt(const PhaseSpaceGrid& g, const QuadraticHamiltonian& q, double t,
                       const Mat& U, const Vec& window, const WeightSpec& w) {
  QuadraticGenerator gen(g, q);
  Mat B = gen.propagator(-t) * U;
  return analyzeBt(g, B, window, w);
}

BtExtraction extractBt(const PhaseSpaceGrid& g, const Mat& U, const SymplecticMatrix& At,
                       const Vec& window, const WeightSpec& w) {
  Mat mu = metaplectic(g, At).m;
  Mat B = mu.partialPivLu().solve(U);
  return analyzeBt(g, B, window, w);
}

NormSeries trackModulationNorms(const PhaseSpaceGrid& g, const QuadraticHamiltonian& q,
                                const SymbolGrid& sigma, const Vec& u0,
                                const std::vector<double>& times,
                                const std::vector<std::pair<double, double>>& ps_pairs) {
  for (size_t i = 1; i < times.size(); ++i)
    if (times[i] <= times[i - 1]) throw ConfigError("norm tracking needs increasing times");
  Mat H = denseHamiltonian(g, q, sigma).m;
  Mat Hs = 0.5 * (H + H.adjoint());
  Eigen::SelfAdjointEigenSolver<Mat> es(Hs);
  Vec win = gaussianWindow(g);

  NormSeries out;
  out.times = times;
  for (auto& ps : ps_pairs) {
    NormSeries::Entry e;
    e.p = ps.first;
    e.s = ps.second;
    WeightSpec w{ps.second};
    double first = -1.0;
    for (double t : times) {
      Vec phases(es.eigenvalues().size());
      for (long i = 0; i < phases.size(); ++i)
        phases[i] = std::exp(cplx(0, t * es.eigenvalues()[i]));
      Vec ut = es.eigenvectors() * (phases.asDiagonal() * (es.eigenvectors().adjoint() * u0));
      double nv = modulationNorm(g, win, ut, e.p, w);
      if (first < 0) first = nv;
      e.norms.push_back(nv);
      e.ratios.push_back(first > 0 ? nv / first : 0.0);
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

double volterraResidual(const PhaseSpaceGrid& g, const QuadraticHamiltonian& q,
                        const SymbolGrid& sigma, double t, int nodes) {
  Mat H = denseHamiltonian(g, q, sigma).m;
  PropagatorResult S = oraclePropagator(H, t);
  QuadraticGenerator gen(g, q);
  Mat Sw = weylQuantize(g, sigma).m;
  const double h = t / nodes;
  Mat integral = Mat::Zero(g.gridSize(), g.gridSize());
  for (int i = 0; i <= nodes; ++i) {
    double s = i * h;
    double wgt = (i == 0 || i == nodes) ? 0.5 : 1.0;
    Mat Ss = oraclePropagator(H, s).u.m;
    // i dS/dt = -H S and S = T + int T(t-s) (i B) S(s) ds under u_t = iHu;
    // the B factor carries the i from the Volterra kernel.
    integral += wgt * h * (gen.propagator(t - s) * (cplx(0, 1) * Sw) * Ss);
  }
  Mat resid = S.u.m - gen.propagator(t) - integral;
  return resid.operatorNorm();
}

}  // namespace mpk
