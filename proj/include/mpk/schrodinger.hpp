#ifndef MPK_SCHRODINGER_HPP
#define MPK_SCHRODINGER_HPP

#include "mpk/fio.hpp"

namespace mpk {

struct DysonConfig {
  int n_terms = 6;
  enum Rule { Midpoint, Trapezoid } rule = Trapezoid;
  int nodes = 16;          // top-level subintervals
  double tolerance = 0.0;  // adaptive stop when a term norm drops below (0 = off)
  double m_cache = -1.0;   // cached M(t) estimate
};

struct PropagatorResult {
  OperatorMatrix u;
  std::string method;
  double unitarity_defect = 0.0;
  double error_vs_oracle = -1.0;
  double elapsed_seconds = 0.0;
  std::string convention_flag;
};

struct NormSeries {
  std::vector<double> times;
  struct Entry {
    double p, s;
    std::vector<double> norms, ratios;
  };
  std::vector<Entry> entries;
};

struct DysonResult {
  OperatorMatrix correction;       // C(t)
  std::vector<double> term_norms;  // ||C_n(t)||_op for n = 1..
};

struct BtExtraction {
  SymbolGrid bt;
  DecayReport decay;
  double bt_norm = -1.0;  // Sjostrand norm (d = 1)
};

const char* conventionName(FlowConvention conv);

// a(x,eta) sampled exactly on the doubled grid.
SymbolGrid hamiltonianSymbol(const PhaseSpaceGrid& g, const QuadraticHamiltonian& q);

// H = a^w + sigma^w.
OperatorMatrix denseHamiltonian(const PhaseSpaceGrid& g, const QuadraticHamiltonian& q,
                                const SymbolGrid& sigma);

// U(t) = exp(i t H) by unitary diagonalization.
PropagatorResult oraclePropagator(const Mat& H, double t);

// Spectral realization of the free evolution e^{it a^w}; this is mu(A_t)
// with its phase resolved, and the workhorse behind the splitting and Dyson
// machinery.
class QuadraticGenerator {
 public:
  QuadraticGenerator(const PhaseSpaceGrid& g, const QuadraticHamiltonian& q);
  Mat propagator(double t) const;
  const Mat& hamiltonian() const { return h_; }

 private:
  Mat h_, vecs_;
  RVec vals_;
};

PropagatorResult strangPropagator(const PhaseSpaceGrid& g, const QuadraticHamiltonian& q,
                                  const SymbolGrid& sigma, double t, int n_steps);

// B(s) = mu(A_{-s}) sigma^w mu(A_s), cross-validated against the symbol
// pullback (sigma . A_s^{-1})^w; gap_out receives the max-entry gap.
OperatorMatrix conjugatedPerturbation(const PhaseSpaceGrid& g, const QuadraticHamiltonian& q,
                                      double s_time, const SymbolGrid& sigma,
                                      FlowConvention conv, double* gap_out = nullptr);

DysonResult dysonCorrection(const PhaseSpaceGrid& g, const QuadraticHamiltonian& q,
                            const SymbolGrid& sigma, double t, const DysonConfig& cfg);

// M(t) = sup_{0<=r<=t} ||A_r||^s ||V_{Phi o A_r} Phi||_{L1(v_s)} with Phi the
// 2d-dimensional Gaussian; closed-form Gaussian STFT modulus, lattice
// quadrature in the frequency variable.
double mOfT(const PhaseSpaceGrid& g, const QuadraticHamiltonian& q, double t,
            const WeightSpec& w, FlowConvention conv = FlowConvention::TwoPi,
            int r_samples = 16, int quad_per_axis = 128);

// Exact tail sum_{n>N} (t M sigma)^n / n!.
double dysonTailBound(double t, double m_est, double norm_est, int n_terms);

// b_t with e^{itH} = mu(A_t) b_t^w; spectral (phase-coherent) realization.
BtExtraction extractBt(const PhaseSpaceGrid& g, const QuadraticHamiltonian& q, double t,
                       const Mat& U, const Vec& window, const WeightSpec& w);
// Metaplectic-path variant: B_t = mu(A_t)^{-1} U with the constructed mu.
BtExtraction extractBt(const PhaseSpaceGrid& g, const Mat& U, const SymplecticMatrix& At,
                       const Vec& window, const WeightSpec& w);

NormSeries trackModulationNorms(const PhaseSpaceGrid& g, const QuadraticHamiltonian& q,
                                const SymbolGrid& sigma, const Vec& u0,
                                const std::vector<double>& times,
                                const std::vector<std::pair<double, double>>& ps_pairs);

// Operator-norm residual of S(t) - T(t) - int_0^t T(t-s) B S(s) ds on a
// trapezoid ladder; a quadrature-order consistency diagnostic.
double volterraResidual(const PhaseSpaceGrid& g, const QuadraticHamiltonian& q,
                        const SymbolGrid& sigma, double t, int nodes);

}  // namespace mpk

#endif
