#include "newtonosc/oscint.hpp"

#include "newtonosc/kernels.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace newtonosc {

// ---- test functions ----

TestFunction TestFunction::constant(double c) {
  TestFunction f;
  f.kind_ = Kind::constant;
  f.c_ = c;
  return f;
}

TestFunction TestFunction::indicator(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("indicator needs a < b");
  TestFunction f;
  f.kind_ = Kind::indicator;
  f.a_ = a;
  f.b_ = b;
  return f;
}

TestFunction TestFunction::exponential(double xi) {
  TestFunction f;
  f.kind_ = Kind::exponential;
  f.xi_ = xi;
  return f;
}

TestFunction TestFunction::table(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() < 2 || xs.size() != ys.size()) throw std::invalid_argument("table needs >= 2 matching samples");
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i - 1] < xs[i])) throw std::invalid_argument("table abscissae must increase strictly");
  }
  TestFunction f;
  f.kind_ = Kind::table;
  f.xs_ = std::move(xs);
  f.ys_ = std::move(ys);
  return f;
}

double TestFunction::real_factor(double x) const {
  switch (kind_) {
    case Kind::constant: return c_;
    case Kind::indicator: return (x >= a_ && x <= b_) ? 1.0 : 0.0;
    case Kind::exponential: return 1.0;
    case Kind::table: {
      if (x < xs_.front() || x > xs_.back()) return 0.0;
      auto it = std::upper_bound(xs_.begin(), xs_.end(), x);
      if (it == xs_.end()) return ys_.back();
      const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
      const double t = (x - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
      return ys_[i - 1] + t * (ys_[i] - ys_[i - 1]);
    }
  }
  return 0.0;
}

std::complex<double> TestFunction::operator()(double x) const {
  if (kind_ == Kind::exponential) return std::polar(1.0, xi_ * x);
  return real_factor(x);
}

std::vector<double> TestFunction::breakpoints() const {
  if (kind_ == Kind::indicator) return {a_, b_};
  if (kind_ == Kind::table) return xs_;
  return {};
}

double TestFunction::sup(double lo, double hi) const {
  if (hi < lo) return 0.0;
  switch (kind_) {
    case Kind::constant: return std::abs(c_);
    case Kind::indicator: return (std::max(a_, lo) <= std::min(b_, hi)) ? 1.0 : 0.0;
    case Kind::exponential: return 1.0;
    case Kind::table: {
      double s = std::max(std::abs(real_factor(lo)), std::abs(real_factor(hi)));
      for (std::size_t i = 0; i < xs_.size(); ++i) {
        if (xs_[i] >= lo && xs_[i] <= hi) s = std::max(s, std::abs(ys_[i]));
      }
      return s;
    }
  }
  return 0.0;
}

double TestFunction::norm(const LebesgueExponent& p, double lo, double hi) const {
  if (!(hi > lo)) return 0.0;
  if (p.is_infinite()) return sup(lo, hi);
  const double inv_p = to_double(p.inverse());
  switch (kind_) {
    case Kind::constant: return std::abs(c_) * std::pow(hi - lo, inv_p);
    case Kind::indicator: {
      const double overlap = std::max(0.0, std::min(b_, hi) - std::max(a_, lo));
      return std::pow(overlap, inv_p);
    }
    case Kind::exponential: return std::pow(hi - lo, inv_p);
    case Kind::table: {
      // Composite Simpson on each linear piece of |f|^p.
      const double pv = to_double(p.value());
      std::vector<double> cuts{lo, hi};
      for (double x : xs_) {
        if (x > lo && x < hi) cuts.push_back(x);
      }
      std::sort(cuts.begin(), cuts.end());
      double acc = 0.0;
      for (std::size_t i = 1; i < cuts.size(); ++i) {
        const int m = 32;
        const double h = (cuts[i] - cuts[i - 1]) / m;
        for (int s = 0; s <= m; ++s) {
          const double w = (s == 0 || s == m) ? 1.0 : (s % 2 ? 4.0 : 2.0);
          acc += w * h / 3.0 * std::pow(std::abs(real_factor(cuts[i - 1] + s * h)), pv);
        }
      }
      return std::pow(acc, 1.0 / pv);
    }
  }
  return 0.0;
}

std::string TestFunction::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::constant: os << "const:" << c_; break;
    case Kind::indicator: os << "box:" << a_ << ":" << b_; break;
    case Kind::exponential: os << "exp:" << xi_; break;
    case Kind::table: os << "table:" << xs_.size() << " samples"; break;
  }
  return os.str();
}

// ---- cutoff ----

namespace {

double smooth_h(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

// 0 for s <= 0, 1 for s >= 1, C-infinity in between.
double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = smooth_h(s), b = smooth_h(1.0 - s);
  return a / (a + b);
}

}  // namespace

double CutoffSpec::factor(double x) const {
  if (orthant && x < 0.0) return 0.0;
  const double u = std::abs(x) / radius;
  if (u >= 1.0) return 0.0;
  if (profile == CutoffProfile::bump) return std::exp(1.0 - 1.0 / (1.0 - u * u));
  if (u <= plateau) return 1.0;
  return 1.0 - smooth_step((u - plateau) / (1.0 - plateau));
}

std::string CutoffSpec::describe() const {
  std::ostringstream os;
  os.precision(17);
  os << (profile == CutoffProfile::bump ? "bump" : "plateau") << " r=" << radius;
  if (profile == CutoffProfile::plateau) os << " a=" << plateau;
  if (orthant) os << " orthant";
  return os.str();
}

// ---- quadrature ----

namespace {

using boost::math::quadrature::gauss;

struct GaussRule {
  std::array<double, 20> x;
  std::array<double, 20> w;
};

const GaussRule& gauss20() {
  static const GaussRule rule = [] {
    GaussRule r{};
    const auto& a = gauss<double, 20>::abscissa();
    const auto& w = gauss<double, 20>::weights();
    std::size_t i = 0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      r.x[i] = -a[k];
      r.w[i++] = w[k];
      r.x[i] = a[k];
      r.w[i++] = w[k];
    }
    return r;
  }();
  return rule;
}

// Batched cutoff factor along one axis, using the vector exp kernel.
void cutoff_batch(const CutoffSpec& chi, const double* t, std::size_t n, double* out, std::vector<double>& scratch) {
  scratch.resize(2 * n);
  double* arg = scratch.data();
  double* arg2 = scratch.data() + n;
  const auto& k = kernels::active();
  constexpr double kOff = -1000.0;  // exp(kOff) == 0 in the kernel
  if (chi.profile == CutoffProfile::bump) {
    for (std::size_t i = 0; i < n; ++i) {
      const double u = std::abs(t[i]) / chi.radius;
      const bool outside = u >= 1.0 || (chi.orthant && t[i] < 0.0);
      arg[i] = outside ? kOff : 1.0 - 1.0 / (1.0 - u * u);
    }
    k.exp(arg, n, out);
    return;
  }
  // plateau: 1 - h(s) / (h(s) + h(1 - s)) = h(1 - s) / (h(s) + h(1 - s))
  for (std::size_t i = 0; i < n; ++i) {
    const double u = std::abs(t[i]) / chi.radius;
    const double s = (u - chi.plateau) / (1.0 - chi.plateau);
    arg[i] = s > 0.0 && s < 1.0 ? -1.0 / s : kOff;
    arg2[i] = s > 0.0 && s < 1.0 ? -1.0 / (1.0 - s) : kOff;
  }
  k.exp(arg, n, arg);
  k.exp(arg2, n, arg2);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = std::abs(t[i]) / chi.radius;
    double v;
    if (chi.orthant && t[i] < 0.0) {
      v = 0.0;
    } else if (u <= chi.plateau) {
      v = 1.0;
    } else if (u >= 1.0) {
      v = 0.0;
    } else {
      v = arg2[i] / (arg[i] + arg2[i]);
    }
    out[i] = v;
  }
}

struct Accum {
  std::complex<double> total;
  std::map<BoxKey, std::complex<double>> bins;

  void add(const Accum& o, std::complex<double> scale) {
    total += scale * o.total;
    for (const auto& [k, v] : o.bins) bins[k] += scale * v;
  }
};

struct InnerTerm {
  double coef;             // lambda * c_alpha
  std::vector<int> outer;  // exponents on axes 0..d-2
  int power;               // exponent on the innermost axis
};

class Integrator {
 public:
  Integrator(const PhasePolynomial& p, double lambda, const TestFunctionSpec& f, const CutoffSpec& chi,
             const QuadratureOptions& opt, double phase_step, double cap, double rel_tol, bool boxes)
      : d_(p.dimension()), f_(f), chi_(chi), opt_(opt), step_(phase_step), cap_(cap), rel_tol_(rel_tol),
        boxes_(boxes) {
    int deg = 1;
    for (const auto& [alpha, c] : p.terms()) {
      InnerTerm t{lambda * to_double(c), std::vector<int>(alpha.entries().begin(), alpha.entries().end() - 1),
                  alpha[d_ - 1]};
      deg = std::max(deg, t.power);
      terms_.push_back(std::move(t));
    }
    coeffs_.assign(static_cast<std::size_t>(deg) + 1, 0.0);
    lo_ = chi.orthant ? 0.0 : -chi.radius;
    hi_ = chi.radius;
    // Below |x_k| ~ r 2^{-shells} every term's phase varies by < 2^{-6} rad across the panel.
    const int shells = 6 + static_cast<int>(std::ceil(std::log2(1.0 + std::abs(lambda))));
    std::vector<double> e{lo_, hi_, 0.0};
    for (int m = 0; m <= shells; ++m) {
      e.push_back(chi.radius * std::ldexp(1.0, -m));
      e.push_back(-chi.radius * std::ldexp(1.0, -m));
    }
    if (chi.inner_radius() > 0.0) {
      e.push_back(chi.inner_radius());
      e.push_back(-chi.inner_radius());
    }
    shell_edges_ = e;
    inner_edges_ = {lo_, hi_, 0.0};
    if (chi.inner_radius() > 0.0) {
      inner_edges_.push_back(chi.inner_radius());
      inner_edges_.push_back(-chi.inner_radius());
    }
    for (double b : f_[d_ - 1].breakpoints()) inner_edges_.push_back(b);
    inner_edges_ = clip_sorted(inner_edges_);
  }

  Accum run() {
    std::vector<double> x(d_, 0.0);
    return axis(0, x);
  }

  std::size_t nodes() const { return nodes_; }
  bool low_confidence() const { return low_confidence_; }

 private:
  std::vector<double> clip_sorted(std::vector<double> e) const {
    std::vector<double> out;
    for (double v : e) {
      if (v >= lo_ && v <= hi_) out.push_back(v);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  Accum axis(std::size_t k, std::vector<double>& x) {
    std::vector<double> edges = shell_edges_;
    for (double b : f_[k].breakpoints()) edges.push_back(b);
    edges = clip_sorted(std::move(edges));
    std::vector<Accum> first;
    std::complex<double> e0 = 0.0;
    double l1 = 0.0;
    for (std::size_t i = 1; i < edges.size(); ++i) {
      first.push_back(panel(k, x, edges[i - 1], edges[i]));
      e0 += first.back().total;
      l1 += std::abs(first.back().total);
    }
    const double scale = std::abs(e0) > 0.0 ? std::abs(e0) : l1;
    const double abs_tol = rel_tol_ * scale;
    Accum out;
    for (std::size_t i = 1; i < edges.size(); ++i) {
      out.add(adapt(k, x, edges[i - 1], edges[i], first[i - 1], abs_tol, 0), 1.0);
    }
    return out;
  }

  Accum adapt(std::size_t k, std::vector<double>& x, double a, double b, const Accum& whole, double abs_tol, int depth) {
    const double mid = 0.5 * (a + b);
    Accum left = panel(k, x, a, mid);
    Accum right = panel(k, x, mid, b);
    const double diff = std::abs(left.total + right.total - whole.total);
    const double allowed = abs_tol * (b - a) / (hi_ - lo_);
    if (diff <= allowed || abs_tol == 0.0) {
      left.add(right, 1.0);
      return left;
    }
    if (depth >= opt_.max_depth || static_cast<double>(nodes_) > opt_.node_budget) {
      low_confidence_ = true;
      left.add(right, 1.0);
      return left;
    }
    Accum out = adapt(k, x, a, mid, left, abs_tol, depth + 1);
    out.add(adapt(k, x, mid, b, right, abs_tol, depth + 1), 1.0);
    return out;
  }

  Accum panel(std::size_t k, std::vector<double>& x, double a, double b) {
    const GaussRule& g = gauss20();
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    Accum out;
    for (std::size_t i = 0; i < 20; ++i) {
      const double xk = mid + half * g.x[i];
      const std::complex<double> weight = half * g.w[i] * chi_.factor(xk) * f_[k](xk);
      if (weight == 0.0) continue;
      x[k] = xk;
      Accum child;
      if (k + 2 < d_) {
        child = axis(k + 1, x);
      } else {
        child.total = inner(x);
        if (boxes_) child.bins[BoxKey{}] = child.total;
      }
      if (!boxes_) {
        out.total += weight * child.total;
        continue;
      }
      const double s = std::log2(chi_.radius / std::abs(xk));
      const int m0 = static_cast<int>(std::floor(s));
      for (int m = std::max(0, m0); m <= m0 + 1; ++m) {
        const double psi = smooth_step(s - m + 1) - smooth_step(s - m);
        if (psi == 0.0) continue;
        const int entry = xk > 0.0 ? m : -m - 1;
        out.total += weight * psi * child.total;
        for (const auto& [key, v] : child.bins) {
          BoxKey full{entry};
          full.insert(full.end(), key.begin(), key.end());
          out.bins[full] += weight * psi * v;
        }
      }
    }
    return out;
  }

  // Sum of k |a_k| T^{k-1}: bound on |P'(t)| for |t| <= T.
  double slope_bound(double t) const {
    double s = 0.0, tp = 1.0;
    for (std::size_t k = 1; k < coeffs_.size(); ++k) {
      s += static_cast<double>(k) * std::abs(coeffs_[k]) * tp;
      tp *= t;
    }
    return s;
  }

  std::complex<double> inner(const std::vector<double>& x) {
    std::fill(coeffs_.begin(), coeffs_.end(), 0.0);
    for (const auto& t : terms_) {
      double v = t.coef;
      for (std::size_t k = 0; k + 1 < d_; ++k) {
        for (int e = 0; e < t.outer[k]; ++e) v *= x[k];
      }
      coeffs_[static_cast<std::size_t>(t.power)] += v;
    }
    const TestFunction& last = f_[d_ - 1];
    if (last.kind() == TestFunction::Kind::exponential) coeffs_[1] += last.frequency();

    const GaussRule& g = gauss20();
    nodes_buf_.clear();
    amps_buf_.clear();
    for (std::size_t i = 1; i < inner_edges_.size(); ++i) {
      const double u = inner_edges_[i - 1], v = inner_edges_[i];
      const bool up = u >= 0.0;
      double t = up ? u : v;
      const double end = up ? v : u;
      double h = cap_;
      while (up ? t < end : t > end) {
        const double remaining = std::abs(end - t);
        h = std::min({cap_, remaining, 2.0 * h});
        while (h * slope_bound(std::abs(t) + h) > step_ && h > 1e-300) h *= 0.5;
        const double a = up ? t : t - h;
        const double mid = a + 0.5 * h, half = 0.5 * h;
        for (std::size_t n = 0; n < 20; ++n) {
          nodes_buf_.push_back(mid + half * g.x[n]);
          amps_buf_.push_back(half * g.w[n]);
        }
        t = (h == remaining) ? end : (up ? t + h : t - h);
      }
    }
    const std::size_t n = nodes_buf_.size();
    chi_buf_.resize(n);
    cutoff_batch(chi_, nodes_buf_.data(), n, chi_buf_.data(), scratch_);
    for (std::size_t i = 0; i < n; ++i) amps_buf_[i] *= chi_buf_[i] * last.real_factor(nodes_buf_[i]);
    nodes_ += n;
    return kernels::active().oscillatory_sum(nodes_buf_.data(), amps_buf_.data(), n, coeffs_.data(), coeffs_.size());
  }

  std::size_t d_;
  const TestFunctionSpec& f_;
  const CutoffSpec& chi_;
  const QuadratureOptions& opt_;
  double step_, cap_, rel_tol_;
  bool boxes_;
  double lo_ = 0.0, hi_ = 0.0;
  std::vector<InnerTerm> terms_;
  std::vector<double> coeffs_;
  std::vector<double> shell_edges_, inner_edges_;
  std::vector<double> nodes_buf_, amps_buf_, chi_buf_, scratch_;
  std::size_t nodes_ = 0;
  bool low_confidence_ = false;
};

}  // namespace

OscResult evaluate_lambda(const PhasePolynomial& p, const TestFunctionSpec& f, const CutoffSpec& chi, double lambda,
                          const QuadratureOptions& options) {
  const std::size_t d = p.dimension();
  if (d < 2 || d > 3) throw std::invalid_argument("direct quadrature supports dimension 2 or 3");
  if (f.size() != d) throw std::invalid_argument("one test function per coordinate is required");
  if (!(chi.radius > 0.0) || chi.plateau < 0.0 || chi.plateau >= 1.0) throw std::invalid_argument("invalid cutoff");
  if (!std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite");
  const double cap = chi.radius / options.width_divisor;
  Integrator coarse(p, lambda, f, chi, options, options.phase_step, cap, options.rel_tol, false);
  const Accum a0 = coarse.run();
  Integrator fine(p, lambda, f, chi, options, 0.5 * options.phase_step, 0.5 * cap, 0.1 * options.rel_tol,
                  options.boxes);
  Accum a1 = fine.run();
  OscResult r;
  r.lambda = lambda;
  r.value = a1.total;
  // The level difference alone can vanish by coincidence; never report less than the fine level's target.
  r.error = std::max(std::abs(a1.total - a0.total), 0.1 * options.rel_tol * std::abs(a1.total));
  r.low_confidence = coarse.low_confidence() || fine.low_confidence();
  r.nodes = coarse.nodes() + fine.nodes();
  if (options.boxes) r.boxes = std::move(a1.bins);
  return r;
}

std::vector<OscResult> lambda_sweep(const PhasePolynomial& p, const TestFunctionSpec& f, const CutoffSpec& chi,
                                    const std::vector<double>& lambdas, const QuadratureOptions& options) {
  for (std::size_t i = 1; i < lambdas.size(); ++i) {
    if (!(lambdas[i] > lambdas[i - 1])) throw std::invalid_argument("lambda grid must be strictly increasing");
  }
  std::vector<OscResult> out;
  for (double l : lambdas) out.push_back(evaluate_lambda(p, f, chi, l, options));
  return out;
}

std::vector<double> geometric_grid(double lo, double hi, int n) {
  if (n <= 0) return {};
  if (!(lo > 0.0) || !(hi >= lo)) throw std::invalid_argument("geometric grid needs 0 < lo <= hi");
  if (n == 1) return {lo};
  std::vector<double> g;
  const double a = std::log2(lo), b = std::log2(hi);
  for (int i = 0; i < n; ++i) g.push_back(std::exp2(a + (b - a) * i / (n - 1)));
  g.front() = lo;
  g.back() = hi;
  return g;
}

namespace {

double max_log2_vertex_power(const NewtonPolyhedron& n, const DyadicBox& box) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : n.vertices()) best = std::max(best, to_double(box.log2_power(v)));
  return best;
}

// log2 of min(|lambda eps^alpha|^{-1/2}, 1) eps^{1/p'} over the vertices.
double log2_box_factor(const NewtonPolyhedron& n, const DyadicBox& box, const std::vector<double>& z, double lambda) {
  double l = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) l -= z[k] * box.exponents()[k];
  if (lambda != 0.0) {
    const double decay = std::log2(std::abs(lambda)) + max_log2_vertex_power(n, box);
    if (decay > 0.0) l -= 0.5 * decay;
  }
  return l;
}

std::vector<double> inverse_conjugates(const ExponentQuery& q) {
  std::vector<double> z;
  for (const auto& e : q.p) z.push_back(to_double(e.inverse_conjugate()));
  return z;
}

}  // namespace

double single_box_bound(const NewtonPolyhedron& n, const DyadicBox& box, const ExponentQuery& q,
                        std::span<const double> norms, double lambda, double c) {
  const std::size_t d = n.dimension();
  if (box.dimension() != d || q.p.size() != d || norms.size() != d) {
    throw std::invalid_argument("single_box_bound: dimension mismatch");
  }
  double prod = c * std::exp2(log2_box_factor(n, box, inverse_conjugates(q), lambda));
  for (double v : norms) prod *= v;
  return prod;
}

double certificate(const NewtonPolyhedron& n, const ExponentQuery& q, const TestFunctionSpec& f, const CutoffSpec& chi,
                   double lambda, const CertificateOptions& options) {
  const std::size_t d = n.dimension();
  if (q.p.size() != d || f.size() != d) throw std::invalid_argument("certificate: dimension mismatch");
  if (chi.radius > 1.0) throw std::invalid_argument("certificate boxes need a cutoff radius <= 1");
  const std::vector<double> z = inverse_conjugates(q);
  const double zmin = *std::min_element(z.begin(), z.end());
  const int jmax =
      static_cast<int>(std::ceil(std::log2(std::max(std::abs(lambda), 2.0)) / zmin)) + options.margin;
  const std::size_t patterns = chi.orthant ? 1 : (std::size_t{1} << d);

  double total = 0.0;
  std::vector<int> j(d, 0);
  std::vector<double> norms(d);
  for (;;) {
    const DyadicBox box(j);
    const double factor = std::exp2(log2_box_factor(n, box, z, lambda));
    for (std::size_t s = 0; s < patterns; ++s) {
      double prod = factor;
      for (std::size_t k = 0; k < d; ++k) {
        const bool neg = (s >> k) & 1;
        const double lo = neg ? -box.upper(k) : box.lower(k);
        const double hi = neg ? -box.lower(k) : box.upper(k);
        prod *= f[k].norm(q.p[k], lo, hi);
      }
      total += prod;
    }
    std::size_t k = 0;
    while (k < d && ++j[k] > jmax) j[k++] = 0;
    if (k == d) break;
  }
  // Each box term is at most prod_k sup|f_k| 7^{1/p_k} eps_k; sum that over boxes with some j_k > jmax.
  double sup_prod = 1.0;
  for (std::size_t k = 0; k < d; ++k) {
    sup_prod *= f[k].sup(-chi.radius, chi.radius) * std::pow(7.0, to_double(q.p[k].inverse()));
  }
  const double full = 2.0;
  const double partial = 2.0 - std::ldexp(1.0, -jmax);
  const double tail = sup_prod * static_cast<double>(patterns) * (std::pow(full, d) - std::pow(partial, d));
  return options.c * (total + tail);
}

}  // namespace newtonosc
