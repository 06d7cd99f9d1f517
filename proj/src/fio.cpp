#include "mpk/fio.hpp"

#include <Eigen/SVD>

namespace mpk {

namespace {

int centeredRep(int r, int n) {
  r %= n;
  if (r < 0) r += n;
  return r >= n / 2 ? r - n : r;
}

RVec spatialCoords(const PhaseSpaceGrid& g, long flat) {
  auto j = g.unflattenSpatial(flat);
  RVec x(g.dim());
  for (int a = 0; a < g.dim(); ++a) x[a] = g.xCoord(j[a]);
  return x;
}

RVec freqCoords(const PhaseSpaceGrid& g, long flat) {
  // flat index over the full frequency grid, x-major
  const int n = g.samples();
  RVec e(g.dim());
  if (g.dim() == 1) {
    e[0] = g.etaCoord(static_cast<int>(flat));
  } else {
    e[0] = g.etaCoord(static_cast<int>(flat / n));
    e[1] = g.etaCoord(static_cast<int>(flat % n));
  }
  return e;
}

long symbolRegularIndex(const PhaseSpaceGrid& g, long m_flat, long k_flat) {
  const int n = g.samples();
  auto mj = g.unflattenSpatial(m_flat);
  if (g.dim() == 1) return static_cast<long>(2 * mj[0]) * n + k_flat;
  int k0 = static_cast<int>(k_flat / n), k1 = static_cast<int>(k_flat % n);
  return ((static_cast<long>(2 * mj[0]) * 2 * n + 2 * mj[1]) * n + k0) * n + k1;
}

}  // namespace

Mat dftForward(const PhaseSpaceGrid& g) {
  const long ng = g.gridSize();
  Mat E(ng, ng);
  for (long k = 0; k < ng; ++k) {
    RVec eta = freqCoords(g, k);
    for (long m = 0; m < ng; ++m) {
      RVec x = spatialCoords(g, m);
      E(k, m) = std::exp(cplx(0, -kTwoPi * eta.dot(x)));
    }
  }
  return E;
}

OperatorMatrix type1Fio(const PhaseSpaceGrid& g, const QuadraticPhase& phi,
                        const SymbolGrid& sigma) {
  if (sigma.data.size() != symbolSize(g)) throw ConfigError("type1_fio shape mismatch");
  const long ng = g.gridSize();
  const double measure = std::pow(g.dx() * g.deta(), g.dim());
  Mat A(ng, ng);
  for (long m = 0; m < ng; ++m) {
    RVec x = spatialCoords(g, m);
    for (long k = 0; k < ng; ++k) {
      RVec eta = freqCoords(g, k);
      A(m, k) = std::exp(cplx(0, kTwoPi * phi.eval(x, eta))) *
                sigma.data[symbolRegularIndex(g, m, k)];
    }
  }
  OperatorMatrix T;
  T.provenance = Provenance::Fio1;
  T.m = A * dftForward(g) * measure;
  return T;
}

OperatorMatrix type2Fio(const PhaseSpaceGrid& g, const QuadraticPhase& phi,
                        const SymbolGrid& tau) {
  if (tau.data.size() != symbolSize(g)) throw ConfigError("type2_fio shape mismatch");
  const long ng = g.gridSize();
  const double measure = std::pow(g.dx() * g.deta(), g.dim());
  Mat B(ng, ng);
  for (long k = 0; k < ng; ++k) {
    RVec eta = freqCoords(g, k);
    for (long n = 0; n < ng; ++n) {
      RVec y = spatialCoords(g, n);
      B(k, n) = std::exp(cplx(0, -kTwoPi * phi.eval(y, eta))) *
                tau.data[symbolRegularIndex(g, n, k)];
    }
  }
  OperatorMatrix T;
  T.provenance = Provenance::Fio2;
  T.m = dftForward(g).adjoint().eval() * B;
  // adjoint of E has e^{+2 pi i x_m eta_k}; measure matches type I adjoint
  T.m *= measure;
  return T;
}

Mat atomOperator(const PhaseSpaceGrid& g, const GeneratorAtom& atom) {
  const long ng = g.gridSize();
  const int n = g.samples();
  const double unit = std::pow(g.dx() * g.deta(), 0.5 * g.dim());
  switch (atom.kind) {
    case GeneratorAtom::Fourier: {
      Mat F = dftForward(g) * unit;  // unitary forward DFT = mu(-J)
      return atom.fourier_sign < 0 ? F : Mat(F.adjoint());
    }
    case GeneratorAtom::Chirp: {
      Mat T = Mat::Zero(ng, ng);
      for (long m = 0; m < ng; ++m) {
        RVec x = spatialCoords(g, m);
        T(m, m) = std::exp(cplx(0, kPi * x.dot(atom.param * x)));
      }
      return T;
    }
    case GeneratorAtom::Dilate: {
      RMat Minv = atom.param.inverse();
      double scale = 1.0 / std::sqrt(std::abs(atom.param.determinant()));
      Mat T(ng, ng);
      for (long m = 0; m < ng; ++m) {
        RVec xm = Minv * spatialCoords(g, m);
        for (long nn = 0; nn < ng; ++nn) {
          RVec xn = spatialCoords(g, nn);
          cplx prod = 1.0;
          for (int a = 0; a < g.dim(); ++a) {
            double u = xm[a] - xn[a];
            cplx dir = 0.0;
            for (int k = 0; k < n; ++k)
              dir += std::exp(cplx(0, kTwoPi * g.etaCoord(k) * u));
            prod *= dir * g.dx() * g.deta();
          }
          T(m, nn) = scale * prod;
        }
      }
      return T;
    }
  }
  return Mat::Identity(ng, ng);
}

OperatorMatrix metaplecticFromWord(const PhaseSpaceGrid& g, const GeneratorWord& word) {
  OperatorMatrix T;
  T.provenance = Provenance::Metaplectic;
  T.m = Mat::Identity(g.gridSize(), g.gridSize());
  for (const auto& atom : word.atoms) T.m = T.m * atomOperator(g, atom);
  return T;
}

OperatorMatrix metaplectic(const PhaseSpaceGrid& g, const SymplecticMatrix& S) {
  if (std::abs(S.blockA().determinant()) >= kDetSingular) {
    QuadraticPhase phi = phaseFunction(S);
    SymbolGrid one = constantSymbol(g, 1.0);
    OperatorMatrix T = type1Fio(g, phi, one);
    T.m *= 1.0 / std::sqrt(std::abs(S.blockA().determinant()));
    T.provenance = Provenance::Metaplectic;
    return T;
  }
  return metaplecticFromWord(g, generatorFactorization(S));
}

GaborMatrix gaborMatrix(const PhaseSpaceGrid& g, const Mat& T, const Vec& window,
                        const std::string& window_tag) {
  const long nl = g.latticeSize();
  GaborMatrix K;
  K.grid = &g;
  K.window_tag = window_tag;
  K.k.resize(nl, nl);
  for (long zf = 0; zf < nl; ++zf) {
    Vec shifted = tfShift(g, g.unflattenLattice(zf), window);
    Vec y = T * shifted;
    PhaseSpaceArray col = stft(g, window, y);
    K.k.col(zf) = col.data;
  }
  return K;
}

namespace {

// Per-axis nearest-lattice rounding of a continuous phase-space point.
struct RoundedLattice {
  LatticePoint idx;
  double offset_sq = 0.0;  // continuous rounding offset
};

RoundedLattice roundToLattice(const PhaseSpaceGrid& g, const RVec& zc) {
  RoundedLattice r;
  const int d = g.dim();
  for (int a = 0; a < d; ++a) {
    double step = g.strideX() * g.dx();
    double pos = zc[a] / step + g.latX() / 2.0;
    long ri = std::lround(pos);
    double off = (pos - ri) * step;
    r.offset_sq += off * off;
    r.idx.jx[a] = static_cast<int>(((ri % g.latX()) + g.latX()) % g.latX());
  }
  for (int a = 0; a < d; ++a) {
    double step = g.strideEta() * g.deta();
    double pos = zc[d + a] / step + g.latEta() / 2.0;
    long ri = std::lround(pos);
    double off = (pos - ri) * step;
    r.offset_sq += off * off;
    r.idx.je[a] = static_cast<int>(((ri % g.latEta()) + g.latEta()) % g.latEta());
  }
  return r;
}

}  // namespace

DecayReport decayProfile(const GaborMatrix& K, const SymplecticMatrix& S,
                         const WeightSpec& w) {
  const PhaseSpaceGrid& g = *K.grid;
  const int d = g.dim();
  const long nl = g.latticeSize();
  const int lx = g.latX(), le = g.latEta();

  // bins over centered lattice differences, laid out like lattice points
  std::vector<double> h_est(nl, 0.0), mass(nl, 0.0);
  DecayReport rep;
  rep.s = w.s;
  rep.window_tag = K.window_tag;

  // graph-mass fractions use the continuous distance |w - Az| in cell units
  // and track captured energy |K|^2; the envelope bins round Az to cells
  std::array<double, 4> gm_energy{0, 0, 0, 0};
  const std::array<int, 4> radii_cells{1, 2, 4, 8};
  double total_mass = 0.0;
  for (long zf = 0; zf < nl; ++zf) {
    LatticePoint z = g.unflattenLattice(zf);
    auto zc4 = g.coords(z);
    RVec zc(2 * d);
    for (int a = 0; a < 2 * d; ++a) zc[a] = zc4[a];
    RVec az = S.matrix() * zc;
    RoundedLattice r = roundToLattice(g, az);
    rep.rounding_radius = std::max(rep.rounding_radius, std::sqrt(r.offset_sq));
    for (long wf = 0; wf < nl; ++wf) {
      LatticePoint wp = g.unflattenLattice(wf);
      LatticePoint du;
      double dist_cells_sq = 0.0;
      for (int a = 0; a < d; ++a) {
        du.jx[a] = ((wp.jx[a] - r.idx.jx[a]) % lx + lx) % lx;
        du.je[a] = ((wp.je[a] - r.idx.je[a]) % le + le) % le;
        double step_x = g.strideX() * g.dx();
        double step_e = g.strideEta() * g.deta();
        double wx = g.xCoord(wp.jx[a] * g.strideX());
        double we = g.etaCoord(wp.je[a] * g.strideEta());
        double ox = wx - az[a], oe = we - az[d + a];
        // torus-minimal representatives
        double Lx = lx * step_x, Le = le * step_e;
        ox -= Lx * std::round(ox / Lx);
        oe -= Le * std::round(oe / Le);
        dist_cells_sq += (ox / step_x) * (ox / step_x) + (oe / step_e) * (oe / step_e);
      }
      long bin = g.flattenLattice(du);
      double v = std::abs(K.k(wf, zf));
      if (v > h_est[bin]) h_est[bin] = v;
      double v2 = v * v;
      double dist = std::sqrt(dist_cells_sq);
      for (int i = 0; i < 4; ++i)
        if (dist <= radii_cells[i] + 1e-12) gm_energy[i] += v2;
      total_mass += v2;
    }
  }

  // weighted l1 mass of the envelope and the decay fit
  const double cell = g.cellArea();
  double l1 = 0.0;
  std::vector<std::pair<double, double>> fit_pts;  // (log <u>, log h)
  double hmax = 0.0;
  for (long b = 0; b < nl; ++b) hmax = std::max(hmax, h_est[b]);
  const int rmax_cells = std::min(lx, le) / 4;
  for (long b = 0; b < nl; ++b) {
    LatticePoint du = g.unflattenLattice(b);
    double cells_sq = 0.0, cont_sq = 0.0;
    for (int a = 0; a < d; ++a) {
      int cx = centeredRep(du.jx[a], lx);
      int ce = centeredRep(du.je[a], le);
      cells_sq += double(cx) * cx + double(ce) * ce;
      double ux = cx * g.strideX() * g.dx();
      double ue = ce * g.strideEta() * g.deta();
      cont_sq += ux * ux + ue * ue;
    }
    l1 += h_est[b] * w(cont_sq) * cell;
    double rcells = std::sqrt(cells_sq);
    if (rcells >= 2.0 && rcells <= rmax_cells && h_est[b] > hmax * 1e-14)
      fit_pts.emplace_back(0.5 * std::log(1.0 + cont_sq), std::log(h_est[b]));
  }
  rep.l1_mass = l1;
  for (int i = 0; i < 4; ++i)
    rep.graph_mass[i] = total_mass > 0 ? gm_energy[i] / total_mass : 0.0;
  (void)mass;

  // least-squares slope of log h vs log <u>
  if (fit_pts.size() >= 4) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto& p : fit_pts) {
      sx += p.first;
      sy += p.second;
      sxx += p.first * p.first;
      sxy += p.first * p.second;
    }
    double nn = static_cast<double>(fit_pts.size());
    double slope = (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
    double icept = (sy - slope * sx) / nn;
    double rss = 0.0;
    for (auto& p : fit_pts) {
      double e = p.second - (slope * p.first + icept);
      rss += e * e;
    }
    rep.n_fit = -slope;
    rep.fit_residual = std::sqrt(rss / nn);
  }
  return rep;
}

std::pair<RMat, double> recoverFlow(const GaborMatrix& K) {
  const PhaseSpaceGrid& g = *K.grid;
  const int d = g.dim();
  const long nl = g.latticeSize();
  const int lx = g.latX(), le = g.latEta();
  RMat acc1 = RMat::Zero(2 * d, 2 * d), acc0 = RMat::Zero(2 * d, 2 * d);
  double total = 0.0;
  // columns restricted to a central window so images stay within half the
  // torus for the admissible matrices
  const double zmax = g.extent() / 8.0;
  for (long zf = 0; zf < nl; ++zf) {
    LatticePoint z = g.unflattenLattice(zf);
    auto zc4 = g.coords(z);
    RVec zc(2 * d);
    bool inside = true;
    for (int a = 0; a < 2 * d; ++a) {
      zc[a] = zc4[a];
      if (std::abs(zc[a]) > zmax) inside = false;
    }
    if (!inside) continue;
    // peak of the column fixes the unwrapping representative
    long peak = 0;
    double best = -1.0;
    for (long wf = 0; wf < nl; ++wf) {
      double v = std::abs(K.k(wf, zf));
      if (v > best) {
        best = v;
        peak = wf;
      }
    }
    LatticePoint wpk = g.unflattenLattice(peak);
    // only the blob around the peak enters the moments; far-field entries of
    // approximately realized operators otherwise bias the centroid
    const int r_loc = std::min(lx, le) / 4;
    for (long wf = 0; wf < nl; ++wf) {
      double v2 = std::norm(K.k(wf, zf));
      if (v2 == 0.0) continue;
      LatticePoint wp = g.unflattenLattice(wf);
      RVec wc(2 * d);
      bool local = true;
      for (int a = 0; a < d; ++a) {
        int dx_idx = centeredRep(wp.jx[a] - wpk.jx[a], lx);
        int de_idx = centeredRep(wp.je[a] - wpk.je[a], le);
        if (std::abs(dx_idx) > r_loc || std::abs(de_idx) > r_loc) local = false;
        int ux = wpk.jx[a] + dx_idx;
        int ue = wpk.je[a] + de_idx;
        wc[a] = (ux * g.strideX() - g.samples() / 2) * g.dx();
        wc[d + a] = (ue * g.strideEta() - g.samples() / 2) * g.deta();
      }
      if (!local) continue;
      acc1 += v2 * wc * zc.transpose();
      acc0 += v2 * zc * zc.transpose();
      total += v2;
    }
  }
  if (total <= 0.0) throw IllConditioned("recover_flow: empty Gabor matrix");
  Eigen::FullPivLU<RMat> lu(acc0);
  if (!lu.isInvertible()) throw IllConditioned("recover_flow: singular moment matrix");
  RMat M = acc1 * lu.inverse();
  return {M, symplecticResidual(M)};
}

FactorizationResult factorize(const PhaseSpaceGrid& g, const Mat& T,
                              const SymplecticMatrix& S, const WeightSpec& w) {
  Mat mu = metaplectic(g, S).m;
  // truncated pseudo-inverse: the discrete type-I operator can be nearly
  // rank-deficient in boundary modes when the A block genuinely dilates
  Eigen::BDCSVD<Mat> svd(mu, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  double tol = sv(0) * 1e-10;
  Vec inv_sv(sv.size());
  for (long i = 0; i < sv.size(); ++i) inv_sv[i] = sv(i) > tol ? 1.0 / sv(i) : 0.0;
  Mat muInv = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().adjoint();
  FactorizationResult out;
  out.sigma1 = weylSymbolOfOperator(g, Mat(T * muInv));
  out.sigma2 = weylSymbolOfOperator(g, Mat(muInv * T));
  Mat recon = weylQuantize(g, out.sigma1).m * mu;
  double tmax = T.cwiseAbs().maxCoeff();
  out.reconstruction_residual = (recon - T).cwiseAbs().maxCoeff() / (tmax > 0 ? tmax : 1.0);
  SymbolGrid pb = pullbackSymbol(out.sigma1, S.matrix());
  double smax = out.sigma1.data.cwiseAbs().maxCoeff();
  out.sigma2_vs_pullback =
      (out.sigma2.data - pb.data).cwiseAbs().maxCoeff() / (smax > 0 ? smax : 1.0);
  if (g.dim() == 1) {
    out.sigma1_norm = sjostrandNorm(out.sigma1, w);
    out.sigma2_norm = sjostrandNorm(out.sigma2, w);
  }
  return out;
}

InversionResult invertFio(const PhaseSpaceGrid& g, const Mat& T,
                          const SymplecticMatrix& S, const WeightSpec& w) {
  Eigen::BDCSVD<Mat> svd(T);
  double smax = svd.singularValues()(0);
  double smin = svd.singularValues()(svd.singularValues().size() - 1);
  InversionResult out;
  out.condition_number = smin > 0 ? smax / smin : std::numeric_limits<double>::infinity();
  if (out.condition_number > 1e8) throw IllConditioned("invert_fio: condition number > 1e8");
  out.inverse.m = T.partialPivLu().inverse();
  out.inverse.provenance = Provenance::Composite;

  Vec win = gaussianWindow(g);
  GaborMatrix K = gaborMatrix(g, out.inverse.m, win);
  out.decay = decayProfile(K, S.inverse(), w);

  if (std::abs(S.blockA().determinant()) >= kDetSingular && g.dim() == 1) {
    QuadraticPhase phi = phaseFunction(S);
    const int n = g.samples();
    // exact per-column solve: tau(x_n, eta_k) = e^{2 pi i Phi} sum_m Tinv[m,n] e^{-2 pi i x_m eta_k}
    Mat tau_reg(n, n);  // rows x_n, cols eta_k
    for (int nn = 0; nn < n; ++nn) {
      for (int k = 0; k < n; ++k) {
        cplx acc = 0.0;
        for (int m = 0; m < n; ++m)
          acc += out.inverse.m(m, nn) *
                 std::exp(cplx(0, -kTwoPi * g.xCoord(m) * g.etaCoord(k)));
        RVec x(1), e(1);
        x[0] = g.xCoord(nn);
        e[0] = g.etaCoord(k);
        tau_reg(nn, k) = acc * std::exp(cplx(0, kTwoPi * phi.eval(x, e)));
      }
    }
    // band-limit the regular samples (drop top-quarter frequencies per axis)
    Mat coef = tau_reg;
    Mat F(n, n), Fi(n, n);
    for (int q = 0; q < n; ++q)
      for (int j = 0; j < n; ++j) {
        cplx ph = std::exp(cplx(0, -kTwoPi * q * j / double(n)));
        F(q, j) = ph / double(n);
        Fi(j, q) = std::conj(ph);
      }
    coef = F * coef * F.transpose();
    for (int qx = 0; qx < n; ++qx)
      for (int qe = 0; qe < n; ++qe) {
        if (std::abs(centeredRep(qx, n)) > n / 4 || std::abs(centeredRep(qe, n)) > n / 4)
          coef(qx, qe) = 0.0;
      }
    Mat tau_s = Fi * coef * Fi.transpose();
    // interpolate onto the doubled grid (zero-padded spectrum in x)
    SymbolGrid tau;
    tau.grid = &g;
    tau.data.resize(symbolSize(g));
    Mat cx = F * tau_s;  // frequency content along x per eta column
    for (int v = 0; v < 2 * n; ++v)
      for (int k = 0; k < n; ++k) {
        cplx acc = 0.0;
        for (int q = 0; q < n; ++q) {
          int qc = centeredRep(q, n);
          acc += cx(q, k) * std::exp(cplx(0, kTwoPi * qc * (g.halfCoord(v) + g.extent() / 2) /
                                               g.extent()));
        }
        tau.data[static_cast<long>(v) * n + k] = acc;
      }
    Mat t2 = type2Fio(g, phi, tau).m;
    double imax = out.inverse.m.cwiseAbs().maxCoeff();
    out.type2_residual = (t2 - out.inverse.m).cwiseAbs().maxCoeff() / (imax > 0 ? imax : 1.0);
  }
  return out;
}

double alignedMaxDiff(const Mat& A, const Mat& B) {
  Eigen::Index i = 0, j = 0;
  A.cwiseAbs().maxCoeff(&i, &j);
  cplx a = A(i, j), b = B(i, j);
  cplx c = (std::abs(b) > 0) ? cplx(a / b) : cplx(1.0);
  if (std::abs(c) > 0) c /= std::abs(c);
  return (A - c * B).cwiseAbs().maxCoeff();
}

}  // namespace mpk
