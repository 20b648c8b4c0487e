#include "newtonosc/nondegen.hpp"

#include "newtonosc/errors.hpp"
#include "newtonosc/kernels.hpp"
#include "newtonosc/linalg.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace newtonosc {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::nondegenerate: return "nondegenerate";
    case Verdict::degenerate: return "degenerate";
    case Verdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

constexpr std::size_t kCellBudget = 2'000'000;

void evaluate_batch(const NumericPolynomial& q, const std::vector<double>& soa, std::size_t n, std::vector<double>& out) {
  out.assign(n, 0.0);
  if (q.terms() == 0 || n == 0) return;
  kernels::active().evaluate_sparse(q.coefficients.data(), q.exponents.data(), q.terms(), q.dimension, soa.data(), n,
                                    out.data());
}

// Same exponents as q, coefficients scaled termwise by factor(alpha); zero factors dropped.
template <class F>
NumericPolynomial scaled_copy(const NumericPolynomial& q, F&& factor, bool absolute) {
  NumericPolynomial out;
  out.dimension = q.dimension;
  for (std::size_t t = 0; t < q.terms(); ++t) {
    const int* e = &q.exponents[t * q.dimension];
    const double f = factor(e);
    if (f == 0.0) continue;
    const double c = q.coefficients[t] * f;
    out.coefficients.push_back(absolute ? std::abs(c) : c);
    out.exponents.insert(out.exponents.end(), e, e + q.dimension);
  }
  return out;
}

NumericPolynomial shifted(const NumericPolynomial& q, std::size_t i, std::size_t j) {
  NumericPolynomial out = q;
  for (std::size_t t = 0; t < q.terms(); ++t) {
    out.exponents[t * q.dimension + i] += 1;
    out.exponents[t * q.dimension + j] += 1;
  }
  return out;
}

struct PairPolys {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<NumericPolynomial> h;     // d_i d_j q per pair
  std::vector<NumericPolynomial> mass;  // same terms with absolute coefficients
};

PairPolys mixed_partials(const PhasePolynomial& q) {
  PairPolys out;
  const std::size_t d = q.dimension();
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) {
      out.pairs.emplace_back(i, j);
      out.h.push_back(to_numeric(second_partial(q, i, j)));
      out.mass.push_back(scaled_copy(out.h.back(), [](const int*) { return 1.0; }, true));
    }
  }
  return out;
}

// A chart fixes x_k = sign_k and sets x_l = sign_l * exp(s_l) for the other coordinates.
struct Chart {
  std::size_t fixed = 0;
  std::vector<double> sign;
  std::vector<std::size_t> free;  // the other coordinates in order
};

std::vector<Chart> charts(std::size_t d, bool all_orthants) {
  std::vector<Chart> out;
  const std::size_t patterns = all_orthants ? (std::size_t{1} << d) : 1;
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t m = 0; m < patterns; ++m) {
      Chart c;
      c.fixed = k;
      for (std::size_t l = 0; l < d; ++l) {
        c.sign.push_back(((m >> l) & 1) ? -1.0 : 1.0);
        if (l != k) c.free.push_back(l);
      }
      out.push_back(std::move(c));
    }
  }
  return out;
}

std::vector<double> chart_point(const Chart& c, std::span<const double> s) {
  std::vector<double> x(c.sign.size());
  x[c.fixed] = c.sign[c.fixed];
  for (std::size_t m = 0; m < c.free.size(); ++m) x[c.free[m]] = c.sign[c.free[m]] * std::exp(s[m]);
  return x;
}

struct Candidate {
  double value;
  std::size_t chart;
  std::vector<double> s;
};

double max_abs(const std::vector<NumericPolynomial>& h, std::span<const double> x) {
  double g = 0.0;
  for (const auto& q : h) g = std::max(g, std::abs(q.evaluate(x)));
  return g;
}

// max over pairs of |d_i d_j q| / sum_terms |c x^beta|: zero exactly at common zeros, one on
// pairs that are single monomials, and invariant under the face scaling.
double relative_max(const PairPolys& pp, std::span<const double> x) {
  double g = 0.0;
  for (std::size_t q = 0; q < pp.h.size(); ++q) {
    const double m = pp.mass[q].evaluate(x);
    if (m > 0.0) g = std::max(g, std::abs(pp.h[q].evaluate(x)) / m);
  }
  return g;
}

// Projected Levenberg-Marquardt on r(s) = (d_i d_j q(x(s)))_{i<j} over the box [lo, 0]^{d-1}.
Candidate refine(const PairPolys& pp, const std::vector<std::vector<NumericPolynomial>>& jac, const Chart& chart,
                 std::size_t chart_id, std::vector<double> s, double lo) {
  const std::size_t m = pp.h.size();
  const std::size_t nfree = s.size();
  auto residual = [&](const std::vector<double>& sv, Eigen::VectorXd& r, Eigen::MatrixXd* jm) {
    const auto x = chart_point(chart, sv);
    r.resize(static_cast<Eigen::Index>(m));
    for (std::size_t p = 0; p < m; ++p) r(static_cast<Eigen::Index>(p)) = pp.h[p].evaluate(x);
    if (jm) {
      jm->resize(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(nfree));
      for (std::size_t p = 0; p < m; ++p) {
        for (std::size_t l = 0; l < nfree; ++l) {
          (*jm)(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(l)) = jac[p][l].evaluate(x);
        }
      }
    }
  };
  auto clamp = [&](std::vector<double>& sv) {
    for (auto& v : sv) v = std::clamp(v, lo, 0.0);
  };
  clamp(s);
  Eigen::VectorXd r;
  Eigen::MatrixXd jm;
  residual(s, r, &jm);
  double cost = r.squaredNorm();
  double mu = 1e-3;
  for (int iter = 0; iter < 200 && cost > 0.0; ++iter) {
    const Eigen::MatrixXd jtj = jm.transpose() * jm;
    const Eigen::VectorXd g = jm.transpose() * r;
    Eigen::MatrixXd a = jtj;
    for (Eigen::Index l = 0; l < a.rows(); ++l) a(l, l) += mu * (jtj(l, l) + 1e-12);
    const Eigen::VectorXd step = a.ldlt().solve(-g);
    std::vector<double> trial(s);
    for (std::size_t l = 0; l < nfree; ++l) trial[l] += step(static_cast<Eigen::Index>(l));
    clamp(trial);
    Eigen::VectorXd rt;
    residual(trial, rt, nullptr);
    const double ct = rt.squaredNorm();
    if (ct < cost) {
      const double gain = cost - ct;
      s = std::move(trial);
      cost = ct;
      residual(s, r, &jm);
      mu = std::max(mu / 3.0, 1e-15);
      if (gain <= 1e-32 * std::max(cost, 1e-300) && cost < 1e-40) break;
    } else {
      mu *= 4.0;
      if (mu > 1e12) break;
    }
  }
  return Candidate{r.cwiseAbs().maxCoeff(), chart_id, std::move(s)};
}

FaceCheck check_face(const PhasePolynomial& p, const Face& face, const NondegeneracyOptions& opt) {
  FaceCheck fc{face, restrict_to_face(p, face), Verdict::inconclusive, 0.0, {}, 0.0, 0.0, 0, 0};
  const std::size_t d = p.dimension();
  const PairPolys pp = mixed_partials(fc.face_polynomial);
  const auto chart_list = charts(d, opt.all_orthants);
  const double lo = std::log(opt.eta);
  const std::size_t nfree = d - 1;
  const int g = std::max(1, opt.grid);

  // Derivative of each mixed partial along free log-coordinate l: coefficients scaled by alpha_l.
  std::vector<std::vector<std::vector<NumericPolynomial>>> jac_by_chart;
  std::vector<std::vector<std::vector<NumericPolynomial>>> bound_by_chart;
  for (const auto& c : chart_list) {
    std::vector<std::vector<NumericPolynomial>> jac(pp.h.size()), bound(pp.h.size());
    for (std::size_t q = 0; q < pp.h.size(); ++q) {
      for (auto l : c.free) {
        auto by_l = [l](const int* e) { return static_cast<double>(e[l]); };
        NumericPolynomial signed_poly = scaled_copy(pp.h[q], by_l, false);
        // Evaluated at |x| this bounds |d_{s_l} d_i d_j q| on any point with smaller |x|.
        bound[q].push_back(scaled_copy(pp.h[q], by_l, true));
        jac[q].push_back(std::move(signed_poly));
      }
    }
    jac_by_chart.push_back(std::move(jac));
    bound_by_chart.push_back(std::move(bound));
  }

  std::vector<Candidate> best;
  auto offer = [&](double value, std::size_t chart, std::vector<double> s) {
    constexpr std::size_t keep = 8;
    best.push_back(Candidate{value, chart, std::move(s)});
    std::sort(best.begin(), best.end(), [](const Candidate& a, const Candidate& b) { return a.value < b.value; });
    if (best.size() > keep) best.pop_back();
  };

  fc.margin = std::numeric_limits<double>::infinity();
  std::size_t budget_used = 0;
  for (std::size_t ci = 0; ci < chart_list.size(); ++ci) {
    const Chart& chart = chart_list[ci];
    struct Cell {
      std::vector<double> lower;
      int level;
    };
    std::vector<Cell> cells;
    {
      std::vector<int> idx(nfree, 0);
      const double w = -lo / g;
      for (;;) {
        Cell c{std::vector<double>(nfree), 0};
        for (std::size_t l = 0; l < nfree; ++l) c.lower[l] = lo + idx[l] * w;
        cells.push_back(std::move(c));
        std::size_t l = 0;
        while (l < nfree && ++idx[l] == g) idx[l++] = 0;
        if (l == nfree) break;
      }
    }
    for (int level = 0; !cells.empty(); ++level) {
      const double width = -lo / g / std::ldexp(1.0, level);
      const double half = 0.5 * width;
      const std::size_t n = cells.size();
      budget_used += n;
      std::vector<double> centers(d * n), corners(d * n);
      for (std::size_t i = 0; i < n; ++i) {
        centers[chart.fixed * n + i] = chart.sign[chart.fixed];
        corners[chart.fixed * n + i] = 1.0;
        for (std::size_t m = 0; m < nfree; ++m) {
          const std::size_t l = chart.free[m];
          centers[l * n + i] = chart.sign[l] * std::exp(cells[i].lower[m] + half);
          corners[l * n + i] = std::exp(cells[i].lower[m] + width);
        }
      }
      std::vector<double> gmax(n, 0.0), rel(n, 0.0), cert(n, -std::numeric_limits<double>::infinity());
      std::vector<double> hv, bv, mv;
      for (std::size_t q = 0; q < pp.h.size(); ++q) {
        evaluate_batch(pp.h[q], centers, n, hv);
        evaluate_batch(pp.mass[q], centers, n, mv);
        for (std::size_t i = 0; i < n; ++i) {
          if (mv[i] > 0.0) rel[i] = std::max(rel[i], std::abs(hv[i]) / mv[i]);
        }
        std::vector<double> var(n, 0.0);
        for (std::size_t m = 0; m < nfree; ++m) {
          evaluate_batch(bound_by_chart[ci][q][m], corners, n, bv);
          for (std::size_t i = 0; i < n; ++i) var[i] += half * bv[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
          gmax[i] = std::max(gmax[i], std::abs(hv[i]));
          cert[i] = std::max(cert[i], std::abs(hv[i]) - var[i]);
        }
      }
      std::vector<Cell> next;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> sc(nfree);
        for (std::size_t m = 0; m < nfree; ++m) sc[m] = cells[i].lower[m] + half;
        if (level == 0) fc.margin = std::min(fc.margin, gmax[i]);
        if (best.size() < 8 || rel[i] < best.back().value) offer(rel[i], ci, sc);
        if (cert[i] > 0.0) {
          ++fc.cells_certified;
        } else if (level < opt.max_depth && budget_used + next.size() < kCellBudget) {
          const std::size_t kids = std::size_t{1} << nfree;
          for (std::size_t k = 0; k < kids; ++k) {
            Cell child{cells[i].lower, level + 1};
            for (std::size_t m = 0; m < nfree; ++m) {
              if ((k >> m) & 1) child.lower[m] += half;
            }
            next.push_back(std::move(child));
          }
        } else {
          ++fc.cells_uncertified;
        }
      }
      cells = std::move(next);
    }
  }

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> unif(lo, 0.0);
  std::uniform_int_distribution<std::size_t> pick(0, chart_list.size() - 1);
  std::vector<Candidate> starts = best;
  for (int r = 0; r < opt.restarts; ++r) {
    Candidate c{0.0, pick(rng), std::vector<double>(nfree)};
    for (auto& v : c.s) v = unif(rng);
    starts.push_back(std::move(c));
  }
  Candidate winner{std::numeric_limits<double>::infinity(), 0, {}};
  for (const auto& st : starts) {
    Candidate c = refine(pp, jac_by_chart[st.chart], chart_list[st.chart], st.chart, st.s, lo);
    c.value = relative_max(pp, chart_point(chart_list[c.chart], c.s));
    if (c.value < winner.value) winner = std::move(c);
  }
  fc.witness = chart_point(chart_list[winner.chart], winner.s);
  fc.witness_value = max_abs(pp.h, fc.witness);
  fc.witness_relative = winner.value;
  if (fc.witness_relative <= opt.zero_tol) {
    fc.verdict = Verdict::degenerate;
  } else if (fc.cells_uncertified == 0) {
    fc.verdict = Verdict::nondegenerate;
  } else {
    fc.verdict = Verdict::inconclusive;
  }
  return fc;
}

// Grid of g points per axis (corners included) over prod [lo_k, hi_k], SoA layout.
std::vector<double> grid_points(const std::vector<double>& lo, const std::vector<double>& hi, int g, std::size_t& n) {
  const std::size_t d = lo.size();
  n = 1;
  for (std::size_t k = 0; k < d; ++k) n *= static_cast<std::size_t>(g);
  std::vector<double> soa(d * n);
  std::vector<int> idx(d, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) {
      const double t = g == 1 ? 0.5 : static_cast<double>(idx[k]) / (g - 1);
      soa[k * n + i] = idx[k] == g - 1 ? hi[k] : lo[k] + t * (hi[k] - lo[k]);
    }
    std::size_t k = 0;
    while (k < d && ++idx[k] == g) idx[k++] = 0;
  }
  return soa;
}

std::vector<NumericPolynomial> scaled_mixed_terms(const PhasePolynomial& p) {
  std::vector<NumericPolynomial> out;
  const PairPolys pp = mixed_partials(p);
  for (std::size_t q = 0; q < pp.pairs.size(); ++q) out.push_back(shifted(pp.h[q], pp.pairs[q].first, pp.pairs[q].second));
  return out;
}

}  // namespace

double mixed_hessian_max(const PhasePolynomial& q, std::span<const double> x) {
  return max_abs(mixed_partials(q).h, x);
}

NondegeneracyReport check_condition_v(const PhasePolynomial& p, const NewtonPolyhedron& n,
                                      const NondegeneracyOptions& options) {
  if (!p.reduced()) throw std::invalid_argument("condition check requires a reduced phase");
  if (!(options.eta > 0.0 && options.eta < 1.0) || options.grid < 1 || options.zero_tol <= 0.0) {
    throw std::invalid_argument("invalid nondegeneracy options");
  }
  NondegeneracyReport report;
  report.options = options;
  bool any_degenerate = false, any_inconclusive = false;
  for (const auto& face : n.compact_faces()) {
    report.faces.push_back(check_face(p, face, options));
    any_degenerate = any_degenerate || report.faces.back().verdict == Verdict::degenerate;
    any_inconclusive = any_inconclusive || report.faces.back().verdict == Verdict::inconclusive;
  }
  report.verdict = any_degenerate ? Verdict::degenerate
                   : any_inconclusive ? Verdict::inconclusive
                                      : Verdict::nondegenerate;
  return report;
}

VNormResult v_norm(const PhasePolynomial& p, const DyadicBox& box, int grid) {
  if (grid < 2) throw std::invalid_argument("v_norm needs at least 2 grid points per axis");
  const std::size_t d = p.dimension();
  if (box.dimension() != d) throw std::invalid_argument("v_norm: box dimension mismatch");
  const auto terms = scaled_mixed_terms(p);
  std::vector<double> lo(d), hi(d);
  for (std::size_t k = 0; k < d; ++k) {
    lo[k] = box.lower(k);
    hi[k] = box.upper(k);
  }
  const std::vector<double> box_lo = lo, box_hi = hi;
  VNormResult best{std::numeric_limits<double>::infinity(), {}};
  for (int round = 0; round < 4; ++round) {
    std::size_t n = 0;
    const auto pts = grid_points(lo, hi, grid, n);
    std::vector<double> f(n, 0.0), v;
    for (const auto& t : terms) {
      evaluate_batch(t, pts, n, v);
      for (std::size_t i = 0; i < n; ++i) f[i] = std::max(f[i], std::abs(v[i]));
    }
    const std::size_t arg = static_cast<std::size_t>(std::min_element(f.begin(), f.end()) - f.begin());
    if (f[arg] < best.value) {
      best.value = f[arg];
      best.argmin.resize(d);
      for (std::size_t k = 0; k < d; ++k) best.argmin[k] = pts[k * n + arg];
    }
    for (std::size_t k = 0; k < d; ++k) {
      const double step = (hi[k] - lo[k]) / (grid - 1);
      const double c = best.argmin[k];
      lo[k] = std::max(box_lo[k], c - step);
      hi[k] = std::min(box_hi[k], c + step);
    }
  }
  return best;
}

std::vector<DyadicBox> box_family(std::size_t d, int jmin, int jmax) {
  if (jmin < 0 || jmax < jmin) throw std::invalid_argument("box family needs 0 <= jmin <= jmax");
  std::vector<DyadicBox> out;
  std::vector<int> j(d, jmin);
  for (;;) {
    out.emplace_back(j);
    std::size_t k = d;
    while (k > 0 && j[k - 1] == jmax) j[--k] = jmin;
    if (k == 0) break;
    ++j[k - 1];
  }
  return out;
}

int jmin_for_scale(double eps0) {
  if (!(eps0 > 0.0) || eps0 > 1.0) throw std::invalid_argument("eps0 must lie in (0, 1]");
  return static_cast<int>(std::ceil(-std::log2(eps0) - 1e-12));
}

double max_vertex_power(const NewtonPolyhedron& n, const DyadicBox& box) {
  double best = 0.0;
  for (const auto& v : n.vertices()) {
    best = std::max(best, std::ldexp(1.0, static_cast<int>(box.log2_power(v).get_num().get_si())));
  }
  return best;
}

KeyLemmaResult verify_key_lemma(const PhasePolynomial& p, const NewtonPolyhedron& n,
                                const std::vector<DyadicBox>& boxes, int grid, double k_min) {
  KeyLemmaResult r;
  r.k_hat = std::numeric_limits<double>::infinity();
  for (const auto& b : boxes) {
    const VNormResult v = v_norm(p, b, grid);
    const double ratio = v.value / max_vertex_power(n, b);
    r.table.push_back(BoxRatio{b, ratio, v.argmin});
    r.k_hat = std::min(r.k_hat, ratio);
  }
  r.worst = r.table;
  std::stable_sort(r.worst.begin(), r.worst.end(), [](const BoxRatio& a, const BoxRatio& b) { return a.ratio < b.ratio; });
  if (r.worst.size() > 10) r.worst.resize(10);
  r.pass = !boxes.empty() && r.k_hat >= k_min;
  return r;
}

UpperLemmaResult verify_upper_lemma(const PhasePolynomial& p, const NewtonPolyhedron& n,
                                    const std::vector<DyadicBox>& boxes, int grid) {
  const std::size_t d = p.dimension();
  const NumericPolynomial base = to_numeric(p);
  std::vector<NumericPolynomial> ops;
  std::vector<int> a(d, 0);
  for (;;) {
    // x^a d^a x^alpha = (alpha)_a x^alpha with the falling factorial (alpha)_a.
    ops.push_back(scaled_copy(
        base,
        [&](const int* e) {
          double f = 1.0;
          for (std::size_t k = 0; k < d; ++k) {
            for (int t = 0; t < a[k]; ++t) f *= e[k] - t;
          }
          return f;
        },
        false));
    std::size_t k = 0;
    while (k < d && ++a[k] == 4) a[k++] = 0;
    if (k == d) break;
  }
  UpperLemmaResult r;
  r.finite = true;
  for (const auto& b : boxes) {
    std::vector<double> lo(d), hi(d);
    for (std::size_t k = 0; k < d; ++k) {
      lo[k] = b.lower(k);
      hi[k] = b.upper(k);
    }
    std::size_t np = 0;
    const auto pts = grid_points(lo, hi, grid, np);
    double worst = 0.0;
    std::size_t arg = 0;
    std::vector<double> v;
    for (const auto& op : ops) {
      evaluate_batch(op, pts, np, v);
      for (std::size_t i = 0; i < np; ++i) {
        if (std::abs(v[i]) > worst) {
          worst = std::abs(v[i]);
          arg = i;
        }
      }
    }
    std::vector<double> point(d);
    for (std::size_t k = 0; k < d; ++k) point[k] = pts[k * np + arg];
    const double ratio = worst / max_vertex_power(n, b);
    r.finite = r.finite && std::isfinite(ratio);
    r.table.push_back(BoxRatio{b, ratio, std::move(point)});
    r.k_prime_hat = std::max(r.k_prime_hat, ratio);
  }
  r.worst = r.table;
  std::stable_sort(r.worst.begin(), r.worst.end(), [](const BoxRatio& x, const BoxRatio& y) { return x.ratio > y.ratio; });
  if (r.worst.size() > 10) r.worst.resize(10);
  return r;
}

SubdecomposeResult subdecompose(const PhasePolynomial& p, const NewtonPolyhedron& n, const DyadicBox& box, double k,
                                int n_max, int samples) {
  const std::size_t d = p.dimension();
  const auto terms = scaled_mixed_terms(p);
  const PairPolys pp = mixed_partials(p);
  SubdecomposeResult r;
  r.threshold = 0.5 * k * max_vertex_power(n, box);
  for (int level = 0; level <= n_max; ++level) {
    const int per_axis = 1 << level;
    std::vector<int> l(d, 0);
    std::vector<SubBoxAssignment> assignment;
    bool ok = true;
    for (;;) {
      std::vector<double> lo(d), hi(d);
      for (std::size_t c = 0; c < d; ++c) {
        const double w = (box.upper(c) - box.lower(c)) / per_axis;
        const double centre = box.lower(c) + (l[c] + 0.5) * w;
        lo[c] = std::max(box.lower(c), centre - w);
        hi[c] = std::min(box.upper(c), centre + w);
      }
      std::size_t np = 0;
      const auto pts = grid_points(lo, hi, samples, np);
      SubBoxAssignment best{l, 0, 0, -1.0};
      std::vector<double> v;
      for (std::size_t q = 0; q < terms.size(); ++q) {
        evaluate_batch(terms[q], pts, np, v);
        double inf = std::numeric_limits<double>::infinity();
        for (double x : v) inf = std::min(inf, std::abs(x));
        if (inf > best.inf_value) best = SubBoxAssignment{l, pp.pairs[q].first, pp.pairs[q].second, inf};
      }
      if (best.inf_value < r.threshold) {
        ok = false;
        break;
      }
      assignment.push_back(std::move(best));
      std::size_t c = 0;
      while (c < d && ++l[c] == per_axis) l[c++] = 0;
      if (c == d) break;
    }
    if (ok) {
      r.found = true;
      r.n = level;
      r.assignment = std::move(assignment);
      return r;
    }
  }
  return r;
}

RescaleResult dominating_rescale(const std::vector<MultiIndex>& alphas, const MultiIndex& beta,
                                 const std::vector<int>& j, const Rational& log2_k) {
  const std::size_t nrows = alphas.size();
  const std::size_t d = j.size();
  if (nrows == 0 || nrows > d) throw PreconditionError("rescaling needs 1 <= n <= d exponent vectors");
  if (beta.size() != d) throw PreconditionError("rescaling: beta dimension mismatch");
  if (log2_k > 0) throw PreconditionError("rescaling needs K <= 1");
  RationalMatrix a;
  for (const auto& al : alphas) {
    if (al.size() != d) throw PreconditionError("rescaling: exponent dimension mismatch");
    a.push_back(al.to_rational());
  }
  const RationalVector jr = to_rational_vector(j);
  const RationalVector br = beta.to_rational();
  RationalVector v(nrows);
  for (std::size_t k = 0; k < nrows; ++k) {
    RationalVector diff(d);
    for (std::size_t c = 0; c < d; ++c) diff[c] = a[k][c] - br[c];
    v[k] = -dot(diff, jr);
    if (v[k] > 0 || v[k] < log2_k) throw PreconditionError("K-sandwich K eps^beta <= eps^alpha <= eps^beta fails");
  }
  const RowEchelon e = row_reduce(a, d);
  if (e.pivots.size() != nrows) throw PreconditionError("exponent vectors are linearly dependent");
  RescaleResult r;
  r.basis = e.pivots;
  RationalMatrix block(nrows, RationalVector(nrows));
  for (std::size_t k = 0; k < nrows; ++k) {
    for (std::size_t c = 0; c < nrows; ++c) block[k][c] = a[k][r.basis[c]];
  }
  const auto inv = inverse(block);
  if (!inv) throw PreconditionError("selected block is singular");
  r.rho = 0;
  for (const auto& row : *inv) {
    Rational s = 0;
    for (const auto& x : row) s += abs(x);
    r.rho = std::max(r.rho, s);
  }
  r.log2_b = r.rho * log2_k;
  r.log2_y.assign(d, Rational(0));
  for (std::size_t c = 0; c < nrows; ++c) {
    Rational s = 0;
    for (std::size_t k = 0; k < nrows; ++k) s += (*inv)[c][k] * v[k];
    r.log2_y[r.basis[c]] = s;
  }
  r.exact_identities = true;
  for (std::size_t k = 0; k < nrows; ++k) r.exact_identities = r.exact_identities && dot(a[k], r.log2_y) == v[k];
  r.within_bounds = true;
  for (const auto& u : r.log2_y) r.within_bounds = r.within_bounds && abs(u) <= -r.log2_b;
  for (const auto& u : r.log2_y) r.y.push_back(std::exp2(to_double(u)));
  return r;
}

Rational rescale_defect(const RescaleResult& r, std::span<const Rational> alpha, std::span<const Rational> beta,
                        const std::vector<int>& j) {
  Rational s = dot(alpha, r.log2_y);
  for (std::size_t c = 0; c < j.size(); ++c) s += (alpha[c] - beta[c]) * j[c];
  return s;
}

std::vector<Rational> default_domination_thresholds(std::size_t d) {
  std::vector<Rational> t;
  for (std::size_t n = 0; n < d; ++n) t.emplace_back(-static_cast<long>(n) - 3);
  return t;
}

std::optional<DominationResult> classify_domination(const NewtonPolyhedron& n, const std::vector<int>& j,
                                                    const std::vector<Rational>& log2_thresholds) {
  const std::size_t d = n.dimension();
  if (j.size() != d) throw std::invalid_argument("classify_domination: dimension mismatch");
  if (log2_thresholds.size() < d) throw std::invalid_argument("classify_domination needs one threshold per face dimension");
  for (const auto& t : log2_thresholds) {
    if (t >= 0) throw std::invalid_argument("domination thresholds must lie in (0, 1)");
  }
  const DyadicBox box(j);
  std::vector<Rational> e;
  for (const auto& v : n.vertices()) e.push_back(box.log2_power(v));
  const Rational top = *std::max_element(e.begin(), e.end());
  std::vector<std::size_t> dominant;
  for (std::size_t v = 0; v < e.size(); ++v) {
    if (e[v] == top) dominant.push_back(v);
  }
  for (const auto& f : n.faces()) {
    if (!f.compact() || f.vertex_ids != dominant) continue;
    const Rational& t = log2_thresholds[static_cast<std::size_t>(f.dim)];
    for (std::size_t v = 0; v < e.size(); ++v) {
      if (e[v] != top && e[v] - top > t) return std::nullopt;
    }
    return DominationResult{f.dim, f};
  }
  return std::nullopt;
}

}  // namespace newtonosc
