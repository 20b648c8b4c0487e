// Mixed-Hessian nondegeneracy of face polynomials, the V-norm over dyadic boxes,
// numerical sweeps of the lower/upper box lemmas, the exact log2 rescaling solver
// and the n-domination classifier.
#pragma once

#include "newtonosc/dyadic.hpp"
#include "newtonosc/face.hpp"
#include "newtonosc/phase.hpp"
#include "newtonosc/polytope.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace newtonosc {

enum class Verdict { nondegenerate, degenerate, inconclusive };
std::string to_string(Verdict v);

struct NondegeneracyOptions {
  double eta = 1e-3;        // smallest |x_k| searched after normalizing max |x_k| = 1
  int grid = 64;            // cells per log-coordinate axis
  int max_depth = 6;        // subdivision levels for uncertified cells
  double zero_tol = 1e-9;   // degenerate when the relative residual at the refined witness is <= zero_tol
  bool all_orthants = false;  // default: positive orthant only
  std::uint64_t seed = 1;   // random restarts of the local minimizer
  int restarts = 8;
};

struct FaceCheck {
  Face face;
  PhasePolynomial face_polynomial;
  Verdict verdict = Verdict::inconclusive;
  double margin = 0.0;                // min over grid centers of max_{i<j} |d_i d_j phi_F|
  std::vector<double> witness;        // point of smallest refined value; with all coordinates nonzero
  double witness_value = 0.0;         // max_{i<j} |d_i d_j phi_F(witness)|
  double witness_relative = 0.0;      // same, each pair divided by the sum of its term magnitudes
  std::size_t cells_certified = 0;
  std::size_t cells_uncertified = 0;
};

struct NondegeneracyReport {
  std::vector<FaceCheck> faces;
  Verdict verdict = Verdict::inconclusive;
  NondegeneracyOptions options;
};

/// Checks every compact face of n; requires p reduced with polyhedron n.
NondegeneracyReport check_condition_v(const PhasePolynomial& p, const NewtonPolyhedron& n,
                                      const NondegeneracyOptions& options = {});

/// max_{i<j} |d_i d_j q(x)| for the face polynomial q.
double mixed_hessian_max(const PhasePolynomial& q, std::span<const double> x);

struct VNormResult {
  double value = 0.0;
  std::vector<double> argmin;
};

/// Grid (with local zoom refinement) approximation of inf_{x in Q_eps} max_{i<j} |x_i x_j d_i d_j p(x)|.
VNormResult v_norm(const PhasePolynomial& p, const DyadicBox& box, int grid);

/// All boxes with jmin <= j_k <= jmax for every k.
std::vector<DyadicBox> box_family(std::size_t d, int jmin, int jmax);

/// j-exponent lower bound for max eps <= eps0.
int jmin_for_scale(double eps0);

/// max_{alpha in V} eps^alpha.
double max_vertex_power(const NewtonPolyhedron& n, const DyadicBox& box);

struct BoxRatio {
  DyadicBox box;
  double ratio = 0.0;
  std::vector<double> point;
};

struct KeyLemmaResult {
  double k_hat = 0.0;
  bool pass = false;
  std::vector<BoxRatio> table;  // every box, in box order
  std::vector<BoxRatio> worst;  // smallest ratios first, at most 10
};

KeyLemmaResult verify_key_lemma(const PhasePolynomial& p, const NewtonPolyhedron& n,
                                const std::vector<DyadicBox>& boxes, int grid, double k_min = 1e-3);

struct UpperLemmaResult {
  double k_prime_hat = 0.0;
  bool finite = false;
  std::vector<BoxRatio> table;  // per box, max over a and grid
  std::vector<BoxRatio> worst;  // largest ratios first, at most 10
};

UpperLemmaResult verify_upper_lemma(const PhasePolynomial& p, const NewtonPolyhedron& n,
                                    const std::vector<DyadicBox>& boxes, int grid);

struct SubBoxAssignment {
  std::vector<int> index;       // l in [0, 2^N)^d
  std::size_t i = 0, j = 0;      // chosen pair, 0-based, i < j
  double inf_value = 0.0;       // inf over the doubled sub-box sample of |x_i x_j d_i d_j p|
};

struct SubdecomposeResult {
  bool found = false;
  int n = 0;
  double threshold = 0.0;       // (K/2) max eps^alpha
  std::vector<SubBoxAssignment> assignment;
};

/// Smallest N <= n_max such that each of the 2^{dN} sub-boxes admits one pair whose mixed
/// term stays above (K/2) max eps^alpha on the doubled sub-box (clipped to Q_eps).
SubdecomposeResult subdecompose(const PhasePolynomial& p, const NewtonPolyhedron& n, const DyadicBox& box,
                                double k, int n_max = 6, int samples = 9);

struct RescaleResult {
  std::vector<std::size_t> basis;  // columns of the invertible n x n block
  RationalVector log2_y;           // u with y_i = 2^{u_i}; zero off the basis
  std::vector<double> y;
  Rational rho;                    // infinity norm of the inverse block
  Rational log2_b;                 // rho * log2 K
  bool exact_identities = false;   // <alpha^k, u> = log2 eps^{alpha^k - beta} for every k
  bool within_bounds = false;      // |u_i| <= -log2 b for every i
};

/// Solves y^{alpha^k} = eps^{alpha^k - beta} in log2 coordinates with eps = 2^{-j} and K = 2^{log2_k}.
/// Throws PreconditionError when the alphas are dependent or the K-sandwich fails.
RescaleResult dominating_rescale(const std::vector<MultiIndex>& alphas, const MultiIndex& beta,
                                 const std::vector<int>& j, const Rational& log2_k);

/// log2 y^alpha - log2 eps^{alpha - beta} for an arbitrary alpha; zero on the affine hull of the alphas.
Rational rescale_defect(const RescaleResult& r, std::span<const Rational> alpha, std::span<const Rational> beta,
                        const std::vector<int>& j);

struct DominationResult {
  int n = 0;
  Face face;
};

/// Default thresholds log2 K_n = -(n + 3), n = 0..d-1.
std::vector<Rational> default_domination_thresholds(std::size_t d);

std::optional<DominationResult> classify_domination(const NewtonPolyhedron& n, const std::vector<int>& j,
                                                    const std::vector<Rational>& log2_thresholds);

}  // namespace newtonosc
