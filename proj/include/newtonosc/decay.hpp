// Empirical side of the decay estimate: log-corrected power-law regression, sharpness
// witnesses from dual vertices, the dyadic summation oracle, and Fourier-decay sweeps.
#pragma once

#include "newtonosc/exponent.hpp"
#include "newtonosc/oscint.hpp"
#include "newtonosc/phase.hpp"
#include "newtonosc/polytope.hpp"

#include <string>
#include <vector>

namespace newtonosc {

struct DecaySample {
  double lambda = 0.0;
  double magnitude = 0.0;
  bool clean = true;
};

/// log|Lambda| = -(1/nu) log(lambda) + m log log(2 + lambda) + constant.
struct LinearFit {
  double inv_nu = 0.0;
  double m = 0.0;
  double constant = 0.0;
  double residual = 0.0;  // 2-norm of the residual vector in log units
};

struct DecayFit {
  std::vector<DecaySample> samples;
  LinearFit free_fit;
  LinearFit pinned_fit;  // m fixed to m_pred
  Rational nu_pred;
  int m_pred = 0;
  double tolerance = 0.05;
  double deviation = 0.0;  // |pinned 1/nu - 1/nu_pred|
  bool pass = false;
};

/// Uses samples with lambda >= 2 that are clean; needs >= 8 of them spanning >= 4 octaves.
/// Throws PreconditionError otherwise or when the regression is rank deficient.
DecayFit fit_decay_samples(std::vector<DecaySample> samples, const Rational& nu_pred, int m_pred, double tol = 0.05);

DecayFit fit_decay(const std::vector<OscResult>& sweep, const ExponentReport& predicted, double tol = 0.05);

/// f = 1 in every slot with the orthant-restricted bump of radius 1.
std::vector<OscResult> varchenko_sweep(const PhasePolynomial& p, const std::vector<double>& lambdas,
                                       const QuadratureOptions& options = {});

struct SharpnessRow {
  double lambda = 0.0;
  double magnitude = 0.0;
  double l1_norm = 0.0;  // (2 delta)^d lambda^{-<1,w>}
  double ratio = 0.0;    // magnitude / l1_norm
  double phase_bound = 0.0;
  double chain = 0.0;    // (magnitude / (2 delta)^d) / (log^m(2+lambda) lambda^{-1/nu - <1/p, w>})
};

struct SharpnessWitness {
  RationalVector w;
  double delta = 0.0;
  int delta_halvings = 0;
  Rational envelope_exponent;  // <1, w>
  std::vector<SharpnessRow> rows;
  bool dual_inequality = false;  // <nu/p', w> >= 1, exact
  bool ratios_in_band = false;   // every ratio in [0.9, 1.1] (so also >= 1/2)
  bool chain_monotone = false;   // chain values non-increasing up to 10%
  bool pass = false;
};

/// Box family |x_j| <= delta lambda^{-w_j} under a symmetric plateau cutoff. delta starts at
/// `delta0` and is halved (at most 64 times) until sum |c_alpha| delta^{|alpha|} lambda^{1-<alpha,w>}
/// <= 1e-10 at every lambda. Throws GeometryError if w is not in the dual polyhedron.
SharpnessWitness sharpness_test(const PhasePolynomial& p, const NewtonPolyhedron& n, const ExponentQuery& q,
                                const RationalVector& w, const std::vector<double>& lambdas, double delta0 = 0.25,
                                const QuadratureOptions& options = {});

enum class SummationStatus { ok, refused };

struct SummationRow {
  double lambda = 0.0;
  int jmax = 0;
  double sum = 0.0;       // truncated sum plus tail bound
  double tail = 0.0;
  double ratio = 0.0;     // sum / (lambda^{-1/nu} ln^{d-l} lambda)
  double stability = 0.0; // relative change when jmax grows by 8
};

struct SummationResult {
  SummationStatus status = SummationStatus::refused;
  Rational nu;
  int ell = 0;
  int log_power = 0;  // d - ell
  std::vector<SummationRow> rows;
  double spread = 0.0;  // max ratio / min ratio
  double factor = 10.0;
  bool stable = false;
  bool pass = false;
};

/// sum over j in [0, jmax]^d of 2^{-<z,j>} min(1, lambda^{-1/2} 2^{min_alpha <alpha,j>/2}).
double lemma_sum(const NewtonPolyhedron& n, const std::vector<double>& z, double lambda, int jmax);

/// Geometric bound for the terms with some j_k > jmax.
double lemma_tail_bound(const std::vector<double>& z, int jmax);

/// Refuses (status refused) when the ray through z meets N at nu <= 2.
SummationResult summation_oracle(const NewtonPolyhedron& n, const RationalVector& z, const std::vector<double>& lambdas,
                                 double factor = 10.0, int margin = -1);

struct FourierDecayResult {
  std::vector<double> direction;  // in R^{d+1}
  std::vector<OscResult> results;
  DecayFit fit;  // lambda is the Euclidean norm of xi
  Rational newton_distance;
  bool pass = false;  // pinned 1/nu_fit >= 1/d_phi - tolerance
};

/// int e^{i xi.(x, phi(x))} chi(x) dx along xi = t * direction, t in scales.
FourierDecayResult fourier_decay_sweep(const PhasePolynomial& p, const CutoffSpec& chi,
                                       const std::vector<double>& direction, const std::vector<double>& scales,
                                       const QuadratureOptions& options = {}, double tol = 0.05);

}  // namespace newtonosc
