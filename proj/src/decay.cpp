#include "newtonosc/decay.hpp"

#include "newtonosc/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace newtonosc {

namespace {

LinearFit least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(a);
  qr.setThreshold(1e-12);
  if (qr.rank() < a.cols()) throw PreconditionError("decay regression matrix is rank deficient");
  const Eigen::VectorXd beta = qr.solve(y);
  LinearFit f;
  f.residual = (a * beta - y).norm();
  f.inv_nu = beta(0);
  if (a.cols() == 3) {
    f.m = beta(1);
    f.constant = beta(2);
  } else {
    f.constant = beta(1);
  }
  return f;
}

double log_log(double lambda) { return std::log(std::log(2.0 + lambda)); }

}  // namespace

DecayFit fit_decay_samples(std::vector<DecaySample> samples, const Rational& nu_pred, int m_pred, double tol) {
  DecayFit fit;
  fit.samples = samples;
  fit.nu_pred = nu_pred;
  fit.m_pred = m_pred;
  fit.tolerance = tol;
  std::vector<DecaySample> use;
  for (const auto& s : samples) {
    if (s.clean && s.lambda >= 2.0 && std::isfinite(s.magnitude) && s.magnitude > 0.0) use.push_back(s);
  }
  if (use.size() < 8) throw PreconditionError("decay fit needs at least 8 clean samples");
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& s : use) {
    lo = std::min(lo, s.lambda);
    hi = std::max(hi, s.lambda);
  }
  if (std::log2(hi / lo) < 4.0 - 1e-12) throw PreconditionError("decay fit samples must span at least 4 octaves");

  const Eigen::Index n = static_cast<Eigen::Index>(use.size());
  Eigen::MatrixXd a_free(n, 3), a_pin(n, 2);
  Eigen::VectorXd y(n), y_pin(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double l = use[static_cast<std::size_t>(i)].lambda;
    const double v = std::log(use[static_cast<std::size_t>(i)].magnitude);
    a_free(i, 0) = -std::log(l);
    a_free(i, 1) = log_log(l);
    a_free(i, 2) = 1.0;
    a_pin(i, 0) = -std::log(l);
    a_pin(i, 1) = 1.0;
    y(i) = v;
    y_pin(i) = v - m_pred * log_log(l);
  }
  fit.free_fit = least_squares(a_free, y);
  fit.pinned_fit = least_squares(a_pin, y_pin);
  fit.pinned_fit.m = m_pred;
  fit.deviation = std::abs(fit.pinned_fit.inv_nu - 1.0 / to_double(nu_pred));
  fit.pass = fit.deviation <= tol;
  return fit;
}

DecayFit fit_decay(const std::vector<OscResult>& sweep, const ExponentReport& predicted, double tol) {
  std::vector<DecaySample> samples;
  for (const auto& r : sweep) samples.push_back(DecaySample{r.lambda, std::abs(r.value), !r.low_confidence});
  return fit_decay_samples(std::move(samples), predicted.nu, predicted.m, tol);
}

std::vector<OscResult> varchenko_sweep(const PhasePolynomial& p, const std::vector<double>& lambdas,
                                       const QuadratureOptions& options) {
  const TestFunctionSpec f(p.dimension(), TestFunction::constant(1.0));
  CutoffSpec chi;
  chi.orthant = true;
  return lambda_sweep(p, f, chi, lambdas, options);
}

SharpnessWitness sharpness_test(const PhasePolynomial& p, const NewtonPolyhedron& n, const ExponentQuery& q,
                                const RationalVector& w, const std::vector<double>& lambdas, double delta0,
                                const QuadratureOptions& options) {
  const std::size_t d = n.dimension();
  if (w.size() != d) throw std::invalid_argument("dual point dimension mismatch");
  for (const auto& x : w) {
    if (x < 0) throw GeometryError("dual point must be nonnegative");
  }
  for (const auto& v : n.vertices()) {
    if (dot(v, w) < 1) throw GeometryError("point is not in the dual polyhedron");
  }
  if (!(delta0 > 0.0 && delta0 <= 0.25)) throw std::invalid_argument("delta0 must lie in (0, 1/4]");
  SharpnessWitness sw;
  sw.w = w;
  sw.envelope_exponent = 0;
  for (const auto& x : w) sw.envelope_exponent += x;

  // log of sum |c| delta^{|alpha|} lambda^{1 - <alpha, w>}, computed term-wise in logs.
  auto log_phase_bound = [&](double delta, double lambda) {
    double mx = -std::numeric_limits<double>::infinity();
    std::vector<double> logs;
    for (const auto& [alpha, c] : p.terms()) {
      const double aw = to_double(dot(alpha.to_rational(), w));
      const double l = std::log(std::abs(to_double(c))) + alpha.total_degree() * std::log(delta) +
                       (1.0 - aw) * std::log(lambda);
      logs.push_back(l);
      mx = std::max(mx, l);
    }
    double s = 0.0;
    for (double l : logs) s += std::exp(l - mx);
    return mx + std::log(s);
  };
  const double limit = std::log(1e-10);
  double delta = delta0;
  int halvings = 0;
  for (;;) {
    bool ok = true;
    for (double l : lambdas) ok = ok && log_phase_bound(delta, l) <= limit;
    if (ok) break;
    if (++halvings > 64) throw GeometryError("phase bound not reached after 64 halvings of delta");
    delta *= 0.5;
  }
  sw.delta = delta;
  sw.delta_halvings = halvings;

  const ExponentReport ex = sharp_exponent(n, q);
  RationalVector wit = ex.witness;
  sw.dual_inequality = dot(wit, w) >= 1;
  Rational inv_p_w = 0;
  for (std::size_t k = 0; k < d; ++k) inv_p_w += q.p[k].inverse() * w[k];

  CutoffSpec chi;
  chi.profile = CutoffProfile::plateau;
  chi.radius = 1.0;
  chi.plateau = 0.5;
  chi.orthant = false;
  sw.ratios_in_band = true;
  for (double l : lambdas) {
    TestFunctionSpec f;
    double l1 = 1.0;
    for (std::size_t k = 0; k < d; ++k) {
      const double half = delta * std::pow(l, -to_double(w[k]));
      f.push_back(TestFunction::indicator(-half, half));
      l1 *= 2.0 * half;
    }
    const OscResult r = evaluate_lambda(p, f, chi, l, options);
    SharpnessRow row;
    row.lambda = l;
    row.magnitude = std::abs(r.value);
    row.l1_norm = l1;
    row.ratio = row.magnitude / l1;
    row.phase_bound = std::exp(log_phase_bound(delta, l));
    const double scaled = row.magnitude / std::pow(2.0 * delta, static_cast<double>(d));
    row.chain = scaled / (std::pow(std::log(2.0 + l), ex.m) *
                          std::pow(l, -1.0 / to_double(ex.nu) - to_double(inv_p_w)));
    sw.ratios_in_band = sw.ratios_in_band && row.ratio >= 0.9 && row.ratio <= 1.1 && row.ratio >= 0.5;
    sw.rows.push_back(row);
  }
  sw.chain_monotone = true;
  for (std::size_t i = 1; i < sw.rows.size(); ++i) {
    sw.chain_monotone = sw.chain_monotone && sw.rows[i].chain <= 1.1 * sw.rows[i - 1].chain;
  }
  sw.pass = sw.dual_inequality && sw.ratios_in_band && sw.chain_monotone && !sw.rows.empty();
  return sw;
}

double lemma_sum(const NewtonPolyhedron& n, const std::vector<double>& z, double lambda, int jmax) {
  const std::size_t d = n.dimension();
  std::vector<std::vector<double>> verts;
  for (const auto& v : n.vertices()) {
    std::vector<double> dv;
    for (const auto& x : v) dv.push_back(to_double(x));
    verts.push_back(std::move(dv));
  }
  const double log2_lambda = std::log2(lambda);
  std::vector<int> j(d, 0);
  double s = 0.0;
  for (;;) {
    double zj = 0.0;
    for (std::size_t k = 0; k < d; ++k) zj += z[k] * j[k];
    double amin = std::numeric_limits<double>::infinity();
    for (const auto& v : verts) {
      double aj = 0.0;
      for (std::size_t k = 0; k < d; ++k) aj += v[k] * j[k];
      amin = std::min(amin, aj);
    }
    const double second = -0.5 * log2_lambda + 0.5 * amin;
    s += std::exp2(-zj + std::min(0.0, second));
    std::size_t k = 0;
    while (k < d && ++j[k] > jmax) j[k++] = 0;
    if (k == d) break;
  }
  return s;
}

double lemma_tail_bound(const std::vector<double>& z, int jmax) {
  double full = 1.0, partial = 1.0;
  for (double zk : z) {
    const double r = std::exp2(-zk);
    full *= 1.0 / (1.0 - r);
    partial *= (1.0 - std::pow(r, jmax + 1)) / (1.0 - r);
  }
  return full - partial;
}

SummationResult summation_oracle(const NewtonPolyhedron& n, const RationalVector& z, const std::vector<double>& lambdas,
                                 double factor, int margin) {
  const std::size_t d = n.dimension();
  if (z.size() != d) throw std::invalid_argument("summation weight dimension mismatch");
  for (const auto& x : z) {
    if (x <= 0) throw std::invalid_argument("summation weights must be strictly positive");
  }
  for (double l : lambdas) {
    if (l < 2.0) throw std::invalid_argument("summation oracle needs lambda >= 2");
  }
  SummationResult r;
  r.factor = factor;
  const auto nu = n.ray_scaling(z);
  if (!nu) throw GeometryError("ray through z misses the polyhedron");
  r.nu = *nu;
  RationalVector gamma(d);
  for (std::size_t k = 0; k < d; ++k) gamma[k] = r.nu * z[k];
  r.ell = n.lowest_face_containing(gamma).dim + 1;
  r.log_power = static_cast<int>(d) - r.ell;
  if (r.nu <= 2) {
    r.status = SummationStatus::refused;
    return r;
  }
  r.status = SummationStatus::ok;
  std::vector<double> zd;
  for (const auto& x : z) zd.push_back(to_double(x));
  const double zmin = *std::min_element(zd.begin(), zd.end());
  const int extra = margin >= 0 ? margin : static_cast<int>(std::ceil(40.0 / zmin));
  const double inv_nu = 1.0 / to_double(r.nu);
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0;
  r.stable = true;
  for (double l : lambdas) {
    SummationRow row;
    row.lambda = l;
    row.jmax = static_cast<int>(std::ceil(std::log2(l) / zmin)) + extra;
    row.tail = lemma_tail_bound(zd, row.jmax);
    row.sum = lemma_sum(n, zd, l, row.jmax) + row.tail;
    const double wider = lemma_sum(n, zd, l, row.jmax + 8) + lemma_tail_bound(zd, row.jmax + 8);
    row.stability = std::abs(wider - row.sum) / row.sum;
    row.ratio = row.sum / (std::pow(l, -inv_nu) * std::pow(std::log(l), r.log_power));
    rmin = std::min(rmin, row.ratio);
    rmax = std::max(rmax, row.ratio);
    r.stable = r.stable && row.stability < 1e-9;
    r.rows.push_back(row);
  }
  r.spread = r.rows.empty() ? 0.0 : rmax / rmin;
  r.pass = !r.rows.empty() && r.spread <= factor && r.stable;
  return r;
}

FourierDecayResult fourier_decay_sweep(const PhasePolynomial& p, const CutoffSpec& chi,
                                       const std::vector<double>& direction, const std::vector<double>& scales,
                                       const QuadratureOptions& options, double tol) {
  const std::size_t d = p.dimension();
  if (direction.size() != d + 1) throw std::invalid_argument("Fourier direction must have d + 1 components");
  const PhasePolynomial reduced = reduce_phase(p);
  const NewtonPolyhedron n = build_polyhedron(reduced);
  const ExponentReport v = varchenko_exponent(n);
  FourierDecayResult out;
  out.direction = direction;
  out.newton_distance = v.nu;
  std::vector<DecaySample> samples;
  for (double t : scales) {
    TestFunctionSpec f;
    double norm2 = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      f.push_back(TestFunction::exponential(t * direction[k]));
      norm2 += (t * direction[k]) * (t * direction[k]);
    }
    norm2 += (t * direction[d]) * (t * direction[d]);
    OscResult r = evaluate_lambda(p, f, chi, t * direction[d], options);
    samples.push_back(DecaySample{std::sqrt(norm2), std::abs(r.value), !r.low_confidence});
    out.results.push_back(std::move(r));
  }
  out.fit = fit_decay_samples(std::move(samples), v.nu, v.m, tol);
  out.pass = out.fit.pinned_fit.inv_nu >= 1.0 / to_double(v.nu) - tol;
  return out;
}

}  // namespace newtonosc
