#include "mpk/weyl.hpp"

#include <map>

#include "mpk/fft.hpp"
#include "mpk/tensor.hpp"

namespace mpk {

namespace {

int centeredRep(int r, int n) {
  r %= n;
  if (r < 0) r += n;
  return r >= n / 2 ? r - n : r;
}

// Flatten a symbol multi-index: spatial axes (length 2n) then frequency axes
// (length n), row-major.
long symFlatten(const PhaseSpaceGrid& g, const std::array<int, 2>& v,
                const std::array<int, 2>& k) {
  const int n = g.samples();
  if (g.dim() == 1) return static_cast<long>(v[0]) * n + k[0];
  return ((static_cast<long>(v[0]) * 2 * n + v[1]) * n + k[0]) * n + k[1];
}

// Table e^{2 pi i a (k - n/2)/n}, rows a in [0,n), cols k in [0,n).
Mat diagPhaseTable(int n, int sign) {
  Mat t(n, n);
  for (int a = 0; a < n; ++a)
    for (int k = 0; k < n; ++k)
      t(a, k) = std::exp(cplx(0, sign * kTwoPi * a * (k - n / 2) / double(n)));
  return t;
}

struct EdgeRep {
  double weight;
  int v;  // doubled-grid midpoint index
};

}  // namespace

double ControllingProfile::at(int du_x, int du_e) const {
  const int lx = grid->latX(), le = grid->latEta();
  int ix = ((du_x % lx) + lx) % lx;
  int ie = ((du_e % le) + le) % le;
  return h[static_cast<long>(ix) * le + ie];
}

long symbolSize(const PhaseSpaceGrid& g) {
  long s = 1;
  for (int a = 0; a < g.dim(); ++a) s *= 2L * g.samples();
  for (int a = 0; a < g.dim(); ++a) s *= g.samples();
  return s;
}

std::vector<int> symbolDims(const PhaseSpaceGrid& g) {
  std::vector<int> dims;
  for (int a = 0; a < g.dim(); ++a) dims.push_back(2 * g.samples());
  for (int a = 0; a < g.dim(); ++a) dims.push_back(g.samples());
  return dims;
}

SymbolGrid sampleSymbol(const PhaseSpaceGrid& g,
                        const std::function<cplx(const std::array<double, 4>&)>& fn) {
  SymbolGrid s;
  s.grid = &g;
  s.eval = fn;
  s.data.resize(symbolSize(g));
  const int n = g.samples();
  if (g.dim() == 1) {
    for (int v = 0; v < 2 * n; ++v)
      for (int k = 0; k < n; ++k)
        s.data[static_cast<long>(v) * n + k] = fn({g.halfCoord(v), g.etaCoord(k), 0, 0});
  } else {
    for (int v0 = 0; v0 < 2 * n; ++v0)
      for (int v1 = 0; v1 < 2 * n; ++v1)
        for (int k0 = 0; k0 < n; ++k0)
          for (int k1 = 0; k1 < n; ++k1)
            s.data[symFlatten(g, {v0, v1}, {k0, k1})] =
                fn({g.halfCoord(v0), g.halfCoord(v1), g.etaCoord(k0), g.etaCoord(k1)});
  }
  return s;
}

SymbolGrid constantSymbol(const PhaseSpaceGrid& g, cplx value) {
  return sampleSymbol(g, [value](const std::array<double, 4>&) { return value; });
}

SymbolGrid symbolPreset(const PhaseSpaceGrid& g, const std::string& name,
                        const std::map<std::string, std::string>& params) {
  auto get = [&params](const std::string& key, double dflt) {
    auto it = params.find(key);
    return it == params.end() ? dflt : std::stod(it->second);
  };
  const double L = g.extent();
  const double etaPeriod = g.samples() * g.deta();
  const int d = g.dim();
  if (name == "one" || name == "constant") {
    return constantSymbol(g, get("amp", 1.0));
  }
  if (name == "gaussian_bump") {
    double cx = get("center_x", 0.0), ce = get("center_eta", 0.0);
    double wdt = get("width", 1.0), amp = get("amp", 1.0);
    return sampleSymbol(g, [=](const std::array<double, 4>& u) {
      double val = 0.0;
      // periodize over both torus directions
      for (int ix = -2; ix <= 2; ++ix)
        for (int ie = -2; ie <= 2; ++ie) {
          double acc = 0.0;
          for (int a = 0; a < d; ++a) {
            double xx = u[a] - cx + ix * L;
            double ee = u[d + a] - ce + ie * etaPeriod;
            acc += xx * xx + ee * ee;
          }
          val += std::exp(-kPi * acc / (wdt * wdt));
        }
      return cplx(amp * val);
    });
  }
  if (name == "cosine_potential") {
    double amp = get("amp", 1.0);
    return sampleSymbol(g, [=](const std::array<double, 4>& u) {
      double v = 1.0;
      for (int a = 0; a < d; ++a) v *= std::cos(kTwoPi * u[a] / L);
      return cplx(amp * v);
    });
  }
  if (name == "nonsmooth_bump") {
    double cx = get("center_x", 0.0), wdt = get("width", 1.0), amp = get("amp", 1.0);
    return sampleSymbol(g, [=](const std::array<double, 4>& u) {
      double v = 1.0;
      for (int a = 0; a < d; ++a) {
        double bump = 0.0;
        for (int ix = -3; ix <= 3; ++ix) {
          double xx = u[a] - cx + ix * L;
          bump += std::exp(-kPi * xx * xx / (wdt * wdt));
        }
        v *= bump * (1.0 - std::abs(std::sin(kTwoPi * u[a] / L)));
      }
      return cplx(amp * v);
    });
  }
  throw ConfigError("unknown symbol preset: " + name);
}

SymbolGrid pullbackSymbol(const SymbolGrid& sigma, const RMat& M) {
  const PhaseSpaceGrid& g = *sigma.grid;
  const int d = g.dim();
  if (sigma.eval) {
    auto base = sigma.eval;
    auto fn = [base, M, d](const std::array<double, 4>& u) {
      Eigen::VectorXd z(2 * d);
      for (int a = 0; a < 2 * d; ++a) z[a] = u[a];
      Eigen::VectorXd w = M * z;
      std::array<double, 4> out{0, 0, 0, 0};
      for (int a = 0; a < 2 * d; ++a) out[a] = w[a];
      return base(out);
    };
    return sampleSymbol(g, fn);
  }
  if (d != 1) throw ConfigError("sampled-symbol pullback implemented for d = 1");
  // trigonometric evaluation at mapped points
  const int n = g.samples();
  // coefficients c(p,q): centered DFT over both symbol axes
  std::vector<int> dims = symbolDims(g);
  Mat fx(2 * n, 2 * n), fe(n, n);
  for (int p = 0; p < 2 * n; ++p)
    for (int v = 0; v < 2 * n; ++v)
      fx(p, v) = std::exp(cplx(0, -kTwoPi * (v - n) * (p - n) / double(2 * n))) / double(2 * n);
  for (int q = 0; q < n; ++q)
    for (int k = 0; k < n; ++k)
      fe(q, k) = std::exp(cplx(0, -kTwoPi * (k - n / 2) * (q - n / 2) / double(n))) / double(n);
  Vec coef = applyAxis(applyAxis(sigma.data, dims, 0, fx), dims, 1, fe);

  SymbolGrid out;
  out.grid = &g;
  out.data.resize(symbolSize(g));
  Vec ph_x(2 * n), ph_e(n);
  for (int v = 0; v < 2 * n; ++v) {
    for (int k = 0; k < n; ++k) {
      Eigen::Vector2d z(g.halfCoord(v), g.etaCoord(k));
      Eigen::Vector2d w = M * z;
      for (int p = 0; p < 2 * n; ++p)
        ph_x[p] = std::exp(cplx(0, kTwoPi * w[0] * (p - n) * g.deta()));
      for (int q = 0; q < n; ++q)
        ph_e[q] = std::exp(cplx(0, kTwoPi * w[1] * (q - n / 2) * g.dx()));
      cplx acc = 0.0;
      for (int p = 0; p < 2 * n; ++p) {
        cplx inner = 0.0;
        const cplx* row = coef.data() + static_cast<long>(p) * n;
        for (int q = 0; q < n; ++q) inner += row[q] * ph_e[q];
        acc += ph_x[p] * inner;
      }
      out.data[static_cast<long>(v) * n + k] = acc;
    }
  }
  return out;
}

namespace {

// Per-axis midpoint representatives for the pair (m_a, n_a).
std::vector<EdgeRep> axisReps(int m, int n_idx, int n) {
  int a = centeredRep(m - n_idx, n);
  if (a == -n / 2) {
    return {{0.5, ((2 * n_idx - n / 2) % (2 * n) + 2 * n) % (2 * n)},
            {0.5, ((2 * n_idx + n / 2) % (2 * n) + 2 * n) % (2 * n)}};
  }
  return {{1.0, ((2 * n_idx + a) % (2 * n) + 2 * n) % (2 * n)}};
}

}  // namespace

OperatorMatrix weylQuantize(const PhaseSpaceGrid& g, const SymbolGrid& sigma) {
  if (sigma.data.size() != symbolSize(g)) throw ConfigError("weyl_quantize shape mismatch");
  const int n = g.samples();
  const int d = g.dim();
  const long ng = g.gridSize();
  const double measure = std::pow(g.dx() * g.deta(), d);

  // G[v, a] = sum_k sigma[v,k] e^{2 pi i a(k - n/2)/n} per frequency axis
  std::vector<int> dims = symbolDims(g);
  Mat table = diagPhaseTable(n, +1);
  Vec G = sigma.data;
  for (int a = 0; a < d; ++a) G = applyAxis(G, dims, d + a, table);

  OperatorMatrix T;
  T.provenance = Provenance::Weyl;
  T.m.resize(ng, ng);
  for (long mi = 0; mi < ng; ++mi) {
    auto mj = g.unflattenSpatial(mi);
    for (long ni = 0; ni < ng; ++ni) {
      auto nj = g.unflattenSpatial(ni);
      std::array<std::vector<EdgeRep>, 2> reps;
      std::array<int, 2> aidx{0, 0};
      for (int a = 0; a < d; ++a) {
        reps[a] = axisReps(mj[a], nj[a], n);
        aidx[a] = ((mj[a] - nj[a]) % n + n) % n;
      }
      cplx acc = 0.0;
      if (d == 1) {
        for (const auto& r : reps[0]) acc += r.weight * G[static_cast<long>(r.v) * n + aidx[0]];
      } else {
        for (const auto& r0 : reps[0])
          for (const auto& r1 : reps[1])
            acc += r0.weight * r1.weight *
                   G[symFlatten(g, {r0.v, r1.v}, {aidx[0], aidx[1]})];
      }
      T.m(mi, ni) = acc * measure;
    }
  }
  return T;
}

SymbolGrid weylSymbolOfOperator(const PhaseSpaceGrid& g, const Mat& T) {
  const int n = g.samples();
  const int d = g.dim();
  const long ng = g.gridSize();
  if (T.rows() != ng || T.cols() != ng) throw ConfigError("weyl symbol: operator shape mismatch");

  // D[a, nn] = T[(nn + a) % n, nn], multi-axis; a raw in [0, n)
  long na = 1;
  for (int a = 0; a < d; ++a) na *= n;
  Vec D(na * ng);
  for (long ai = 0; ai < na; ++ai) {
    std::array<int, 2> av{0, 0};
    if (d == 1)
      av[0] = static_cast<int>(ai);
    else {
      av[0] = static_cast<int>(ai / n);
      av[1] = static_cast<int>(ai % n);
    }
    for (long ni = 0; ni < ng; ++ni) {
      auto nj = g.unflattenSpatial(ni);
      std::array<int, 2> mj = nj;
      for (int a = 0; a < d; ++a) mj[a] = (nj[a] + av[a]) % n;
      D[ai * ng + ni] = T(g.flattenSpatial(mj), ni);
    }
  }

  // DFT over the nn axes: C[a, q] = (1/n^d) sum_nn D[a,nn] e^{-2 pi i q.nn/n}
  std::vector<int> ddims;
  for (int a = 0; a < 2 * d; ++a) ddims.push_back(n);
  Mat fwd(n, n);
  for (int q = 0; q < n; ++q)
    for (int j = 0; j < n; ++j)
      fwd(q, j) = std::exp(cplx(0, -kTwoPi * q * j / double(n))) / double(n);
  Vec C = D;
  for (int a = 0; a < d; ++a) C = applyAxis(C, ddims, d + a, fwd);

  // c(p, a) = C[a, p mod n] * prod_axis e^{-i pi p a_c/n} (-1)^p, zero on edge
  // diagonals; then synthesize on the doubled grid.
  Vec coef = Vec::Zero(C.size());  // indexed [p-axes..., a-axes...] both length n
  for (long ai = 0; ai < na; ++ai) {
    std::array<int, 2> av{0, 0};
    if (d == 1)
      av[0] = static_cast<int>(ai);
    else {
      av[0] = static_cast<int>(ai / n);
      av[1] = static_cast<int>(ai % n);
    }
    bool edge = false;
    std::array<int, 2> ac{0, 0};
    for (int a = 0; a < d; ++a) {
      ac[a] = centeredRep(av[a], n);
      if (ac[a] == -n / 2) edge = true;
    }
    if (edge) continue;
    for (long pi = 0; pi < na; ++pi) {
      std::array<int, 2> pv{0, 0};
      if (d == 1)
        pv[0] = static_cast<int>(pi);
      else {
        pv[0] = static_cast<int>(pi / n);
        pv[1] = static_cast<int>(pi % n);
      }
      cplx phase = 1.0;
      for (int a = 0; a < d; ++a) {
        int p = centeredRep(pv[a], n);
        phase *= std::exp(cplx(0, -kPi * p * ac[a] / double(n)));
        if (p & 1) phase = -phase;
      }
      // C is indexed [a..., q...]; coef [p..., a...]
      coef[pi * na + ai] = C[ai * na + pi] * phase;
    }
  }

  // synthesis: sigma[v,k] = sum_{p,a} coef e^{2 pi i p (v-n)/(2n)} e^{-2 pi i a_c (k-n/2)/n}
  std::vector<int> cdims;
  for (int a = 0; a < 2 * d; ++a) cdims.push_back(n);
  Mat synth_v(2 * n, n), synth_k(n, n);
  for (int v = 0; v < 2 * n; ++v)
    for (int pv = 0; pv < n; ++pv) {
      int p = centeredRep(pv, n);
      synth_v(v, pv) = std::exp(cplx(0, kTwoPi * p * (v - n) / double(2 * n)));
    }
  for (int k = 0; k < n; ++k)
    for (int av = 0; av < n; ++av) {
      int ac = centeredRep(av, n);
      synth_k(k, av) = std::exp(cplx(0, -kTwoPi * ac * (k - n / 2) / double(n)));
    }
  Vec out = coef;
  std::vector<int> cur = cdims;
  for (int a = 0; a < d; ++a) {
    out = applyAxis(out, cur, a, synth_v);
    cur[a] = 2 * n;
  }
  for (int a = 0; a < d; ++a) {
    out = applyAxis(out, cur, d + a, synth_k);
  }
  SymbolGrid s;
  s.grid = &g;
  s.data = out;
  return s;
}

OperatorMatrix knQuantize(const PhaseSpaceGrid& g, const SymbolGrid& sigma) {
  if (sigma.data.size() != symbolSize(g)) throw ConfigError("kn_quantize shape mismatch");
  const int n = g.samples();
  const int d = g.dim();
  const long ng = g.gridSize();
  const double measure = std::pow(g.dx() * g.deta(), d);

  // restrict to regular spatial samples v = 2m
  std::vector<int> rdims;
  for (int a = 0; a < d; ++a) rdims.push_back(n);
  for (int a = 0; a < d; ++a) rdims.push_back(n);
  Vec reg(ng * static_cast<long>(std::pow(n, d)));
  for (long mi = 0; mi < ng; ++mi) {
    auto mj = g.unflattenSpatial(mi);
    for (long ki = 0; ki < static_cast<long>(std::pow(n, d)); ++ki) {
      std::array<int, 2> kv{0, 0};
      if (d == 1)
        kv[0] = static_cast<int>(ki);
      else {
        kv[0] = static_cast<int>(ki / n);
        kv[1] = static_cast<int>(ki % n);
      }
      reg[mi * static_cast<long>(std::pow(n, d)) + ki] =
          sigma.data[symFlatten(g, {2 * mj[0], 2 * mj[1]}, kv)];
    }
  }
  Mat table = diagPhaseTable(n, +1);
  Vec W = reg;
  for (int a = 0; a < d; ++a) W = applyAxis(W, rdims, d + a, table);

  OperatorMatrix T;
  T.provenance = Provenance::KohnNirenberg;
  T.m.resize(ng, ng);
  for (long mi = 0; mi < ng; ++mi) {
    auto mj = g.unflattenSpatial(mi);
    for (long ni = 0; ni < ng; ++ni) {
      auto nj = g.unflattenSpatial(ni);
      long aidx = 0;
      for (int a = 0; a < d; ++a) aidx = aidx * n + ((mj[a] - nj[a]) % n + n) % n;
      T.m(mi, ni) = W[mi * static_cast<long>(std::pow(n, d)) + aidx] * measure;
    }
  }
  return T;
}

SymbolGrid weylToKn(const SymbolGrid& sigma) {
  const PhaseSpaceGrid& g = *sigma.grid;
  const int n = g.samples();
  const int d = g.dim();
  std::vector<int> dims = symbolDims(g);

  // forward DFT per axis (frequency index stored raw, centered meaning)
  Mat fx(2 * n, 2 * n), fe(n, n), bx(2 * n, 2 * n), be(n, n);
  for (int p = 0; p < 2 * n; ++p)
    for (int v = 0; v < 2 * n; ++v) {
      cplx w = std::exp(cplx(0, -kTwoPi * p * v / double(2 * n)));
      fx(p, v) = w / double(2 * n);
      bx(v, p) = std::conj(w);
    }
  for (int q = 0; q < n; ++q)
    for (int k = 0; k < n; ++k) {
      cplx w = std::exp(cplx(0, -kTwoPi * q * k / double(n)));
      fe(q, k) = w / double(n);
      be(k, q) = std::conj(w);
    }
  Vec c = sigma.data;
  for (int a = 0; a < d; ++a) c = applyAxis(c, dims, a, fx);
  for (int a = 0; a < d; ++a) c = applyAxis(c, dims, d + a, fe);

  // chirp e^{pi i eta1.eta2} on centered representatives:
  // x-frequency xi_a = p_a deta (p centered over 2n), eta-frequency
  // upsilon_a = q_a dx (q centered over n); e^{pi i sum p q / n}.
  long total = c.size();
  for (long i = 0; i < total; ++i) {
    long rem = i;
    std::array<int, 2> qv{0, 0}, pv{0, 0};
    for (int a = d - 1; a >= 0; --a) {
      qv[a] = static_cast<int>(rem % n);
      rem /= n;
    }
    for (int a = d - 1; a >= 0; --a) {
      pv[a] = static_cast<int>(rem % (2 * n));
      rem /= 2 * n;
    }
    double arg = 0.0;
    for (int a = 0; a < d; ++a)
      arg += centeredRep(pv[a], 2 * n) * static_cast<double>(centeredRep(qv[a], n));
    c[i] *= std::exp(cplx(0, kPi * arg / double(n)));
  }

  for (int a = 0; a < d; ++a) c = applyAxis(c, dims, a, bx);
  for (int a = 0; a < d; ++a) c = applyAxis(c, dims, d + a, be);
  SymbolGrid out;
  out.grid = &g;
  out.data = c;
  return out;
}

SymbolGrid shearSymbolU1(const SymbolGrid& sigma, const RMat& A) {
  const PhaseSpaceGrid& g = *sigma.grid;
  const int n = g.samples();
  const int d = g.dim();
  std::vector<int> dims = symbolDims(g);

  Mat fe(n, n), be(n, n);
  for (int q = 0; q < n; ++q)
    for (int k = 0; k < n; ++k) {
      // coefficients against e^{2 pi i (q dx) eta_k}
      cplx w = std::exp(cplx(0, -kTwoPi * (q - n / 2) * (k - n / 2) / double(n)));
      fe(q, k) = w / double(n);
      be(k, q) = std::conj(w);
    }
  Vec c = sigma.data;
  for (int a = 0; a < d; ++a) c = applyAxis(c, dims, d + a, fe);

  // shift eta by A x(v): multiply coefficient q by e^{2 pi i (q dx).(A x)}
  long nfreq = 1;
  for (int a = 0; a < d; ++a) nfreq *= n;
  long nx = 1;
  for (int a = 0; a < d; ++a) nx *= 2 * n;
  for (long vi = 0; vi < nx; ++vi) {
    std::array<int, 2> vv{0, 0};
    if (d == 1)
      vv[0] = static_cast<int>(vi);
    else {
      vv[0] = static_cast<int>(vi / (2 * n));
      vv[1] = static_cast<int>(vi % (2 * n));
    }
    Eigen::VectorXd x(d);
    for (int a = 0; a < d; ++a) x[a] = g.halfCoord(vv[a]);
    Eigen::VectorXd s = A * x;
    for (long qi = 0; qi < nfreq; ++qi) {
      std::array<int, 2> qv{0, 0};
      if (d == 1)
        qv[0] = static_cast<int>(qi);
      else {
        qv[0] = static_cast<int>(qi / n);
        qv[1] = static_cast<int>(qi % n);
      }
      double arg = 0.0;
      for (int a = 0; a < d; ++a) arg += (qv[a] - n / 2) * g.dx() * s[a];
      c[vi * nfreq + qi] *= std::exp(cplx(0, kTwoPi * arg));
    }
  }
  for (int a = 0; a < d; ++a) c = applyAxis(c, dims, d + a, be);
  SymbolGrid out;
  out.grid = &g;
  out.data = c;
  return out;
}

SymbolGrid stretchSymbolU2(const SymbolGrid& sigma, const RMat& B) {
  const PhaseSpaceGrid& g = *sigma.grid;
  if (std::abs(B.determinant()) < 1e-8) throw ConfigError("stretch map must be invertible");
  const int n = g.samples();
  const int d = g.dim();
  std::vector<int> dims = symbolDims(g);

  Mat fe(n, n);
  for (int q = 0; q < n; ++q)
    for (int k = 0; k < n; ++k)
      fe(q, k) = std::exp(cplx(0, -kTwoPi * (q - n / 2) * (k - n / 2) / double(n))) / double(n);
  Vec c = sigma.data;
  for (int a = 0; a < d; ++a) c = applyAxis(c, dims, d + a, fe);

  if (d == 1) {
    // evaluate at eta' = B^T eta_k
    Mat ev(n, n);
    double bt = B(0, 0);
    for (int k = 0; k < n; ++k)
      for (int q = 0; q < n; ++q)
        ev(k, q) = std::exp(cplx(0, kTwoPi * (q - n / 2) * g.dx() * bt * g.etaCoord(k)));
    c = applyAxis(c, dims, 1, ev);
  } else {
    // joint table over both frequency axes
    RMat Bt = B.transpose();
    long nf = static_cast<long>(n) * n;
    Mat ev(nf, nf);
    for (long ki = 0; ki < nf; ++ki) {
      int k0 = static_cast<int>(ki / n), k1 = static_cast<int>(ki % n);
      Eigen::Vector2d ep = Bt * Eigen::Vector2d(g.etaCoord(k0), g.etaCoord(k1));
      for (long qi = 0; qi < nf; ++qi) {
        int q0 = static_cast<int>(qi / n), q1 = static_cast<int>(qi % n);
        double arg = (q0 - n / 2) * g.dx() * ep[0] + (q1 - n / 2) * g.dx() * ep[1];
        ev(ki, qi) = std::exp(cplx(0, kTwoPi * arg));
      }
    }
    std::vector<int> cdims{2 * n, 2 * n, static_cast<int>(nf)};
    c = applyAxis(c, cdims, 2, ev);
  }
  SymbolGrid out;
  out.grid = &g;
  out.data = c;
  return out;
}

SymbolGrid conjugateSymbolThroughPhase(const SymbolGrid& sigma, const QuadraticPhase& phi) {
  RMat A = 0.5 * (phi.Q1 + phi.Q1.transpose());
  SymbolGrid s1 = shearSymbolU1(sigma, A);
  SymbolGrid s2 = weylToKn(s1);
  return stretchSymbolU2(s2, phi.Q2);
}

SymbolGrid wignerDistribution(const PhaseSpaceGrid& g, const Vec& window) {
  Mat T = window * window.adjoint() * std::pow(g.dx(), g.dim());
  return weylSymbolOfOperator(g, T);
}

namespace {

// One axis of sum_i exp(-2 pi (x + i*period)^2); the Wigner width, so that
// the symbol window matches W(g,g) of the state-space Gaussian and the
// controlling-function identity holds with matched windows.
double periodizedTightGaussian(double x, double period) {
  double v = 0.0;
  for (int i = -3; i <= 3; ++i) {
    double u = x + i * period;
    v += std::exp(-2.0 * kPi * u * u);
  }
  return v;
}

}  // namespace

SymbolGrid symbolGaussianWindow(const PhaseSpaceGrid& g) {
  const double L = g.extent();
  const double etaPeriod = g.samples() * g.deta();
  const int d = g.dim();
  SymbolGrid s = sampleSymbol(g, [&](const std::array<double, 4>& u) {
    double v = 1.0;
    for (int a = 0; a < d; ++a)
      v *= periodizedTightGaussian(u[a], L) * periodizedTightGaussian(u[d + a], etaPeriod);
    return cplx(v);
  });
  double cell = std::pow(0.5 * g.dx() * g.deta(), g.dim());
  s.data /= std::sqrt(s.data.squaredNorm() * cell);
  s.eval = nullptr;  // normalized samples no longer match the closed form
  return s;
}

double SymbolStft::maxAt(int p, int q) const {
  // raw DFT index for centered frequency c is c + (axis length)/2
  const PhaseSpaceGrid& g = *grid;
  const int n = g.samples();
  const int se = g.strideEta(), sx = g.strideX();
  int pr = (((p + n) % (2 * n)) + 2 * n) % (2 * n);
  int qr = (((q + n / 2) % n) + n) % n;
  if (pr % se != 0 || qr % sx != 0) throw ConfigError("frequency off the symbol lattice");
  return max_abs(pr / se, qr / sx);
}

SymbolStft symbolStftMax(const SymbolGrid& sigma, const SymbolGrid& window) {
  const PhaseSpaceGrid& g = *sigma.grid;
  if (g.dim() != 1) throw ConfigError("symbol STFT implemented for d = 1");
  const int n = g.samples();
  const int se = g.strideEta(), sx = g.strideX();
  const double cell = 0.5 * g.dx() * g.deta();

  SymbolStft out;
  out.grid = &g;
  out.max_abs = RMat::Zero(2 * n / se, n / sx);
  out.freq_cell = (se * g.deta()) * (sx * g.dx());

  // centered 2-axis DFT via parity tricks; x-axis corner is 1 (n even),
  // eta-axis corner e^{-i pi n/2}
  const cplx etaCorner = std::exp(cplx(0, -kPi * n / 2.0));
  Mat buf(2 * n, n);
  for (int ox = 0; ox < 2 * n; ox += 2) {
    for (int oe = 0; oe < n; ++oe) {
      for (int v = 0; v < 2 * n; ++v) {
        int vs = (v - ox + 2 * n) % (2 * n);
        for (int k = 0; k < n; ++k) {
          int ks = (k - oe + n) % n;
          double par = ((v + k) & 1) ? -1.0 : 1.0;
          buf(v, k) = sigma.data[static_cast<long>(v) * n + k] *
                      std::conj(window.data[static_cast<long>(vs) * n + ks]) * par;
        }
      }
      for (int v = 0; v < 2 * n; ++v) {
        Vec row = buf.row(v).transpose();
        fft::transform(row.data(), n, -1);
        buf.row(v) = row.transpose();
      }
      for (int k = 0; k < n; ++k) {
        Vec col = buf.col(k);
        fft::transform(col.data(), 2 * n, -1);
        buf.col(k) = col;
      }
      for (int pl = 0; pl < 2 * n / se; ++pl)
        for (int ql = 0; ql < n / sx; ++ql) {
          int p = pl * se, q = ql * sx;
          double par = ((p + q) & 1) ? -1.0 : 1.0;
          double val = std::abs(buf(p, q) * par * etaCorner * cell);
          double& slot = out.max_abs(pl, ql);
          if (val > slot) slot = val;
        }
    }
  }
  return out;
}

double sjostrandNorm(const SymbolGrid& sigma, const WeightSpec& w) {
  const PhaseSpaceGrid& g = *sigma.grid;
  if (sigma.data.squaredNorm() == 0.0) return 0.0;
  SymbolGrid win = symbolGaussianWindow(g);
  SymbolStft S = symbolStftMax(sigma, win);
  const int n = g.samples();
  double acc = 0.0;
  for (int pl = 0; pl < S.max_abs.rows(); ++pl)
    for (int ql = 0; ql < S.max_abs.cols(); ++ql) {
      double z1 = (pl * g.strideEta() - n) * g.deta();
      double z2 = (ql * g.strideX() - n / 2) * g.dx();
      acc += S.max_abs(pl, ql) * w(z1 * z1 + z2 * z2) * S.freq_cell;
    }
  return acc;
}

ControllingProfile controllingFunction(const SymbolGrid& sigma, const Vec& window,
                                       const WeightSpec& w) {
  const PhaseSpaceGrid& g = *sigma.grid;
  if (g.dim() != 1) throw ConfigError("controlling function implemented for d = 1");
  if (norm2(g, window) <= 0) throw ConfigError("controlling function needs a nonzero window");
  SymbolGrid wig = wignerDistribution(g, window);
  SymbolStft S = symbolStftMax(sigma, wig);

  ControllingProfile prof;
  prof.grid = &g;
  prof.s = w.s;
  const int lx = g.latX(), le = g.latEta();
  prof.h = RVec::Zero(static_cast<long>(lx) * le);
  const double cell = g.cellArea();
  double l1 = 0.0;
  for (int ix = 0; ix < lx; ++ix) {
    int du_x = centeredRep(ix, lx);
    for (int ie = 0; ie < le; ++ie) {
      int du_e = centeredRep(ie, le);
      // j(u) = (u2, -u1): frequency point p = du_e * se (dx-dual axis1 units
      // deta), q = -du_x * sx
      double val = S.maxAt(du_e * g.strideEta(), -du_x * g.strideX());
      prof.h[static_cast<long>(ix) * le + ie] = val;
      double u1 = du_x * g.strideX() * g.dx(), u2 = du_e * g.strideEta() * g.deta();
      l1 += val * w(u1 * u1 + u2 * u2) * cell;
    }
  }
  prof.l1_weighted = l1;
  return prof;
}

}  // namespace mpk
