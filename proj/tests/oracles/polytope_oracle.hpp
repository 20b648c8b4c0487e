// Brute-force geometry of conv(S) + R^d_>= for small integer supports, independent of the
// hull code: vertices by domination filter plus LP certification, facets by exhaustive
// search over every primitive integer normal in a box large enough to contain them all,
// compact faces by closure over vertex subsets.
#pragma once

#include "newtonosc/lp.hpp"
#include "newtonosc/rational.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using Point = std::vector<long>;

struct Facet {
  std::vector<long> normal;
  long offset = 0;
  auto operator<=>(const Facet&) const = default;
};

struct Geometry {
  std::vector<Point> vertices;                   // sorted
  std::vector<Facet> facets;                     // sorted
  std::set<std::vector<Point>> compact_faces;    // vertex sets
};

inline long dotl(const std::vector<long>& a, const Point& b) {
  long s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Rank of an integer matrix by fraction-free elimination.
inline std::size_t integer_rank(std::vector<std::vector<__int128>> rows, std::size_t cols) {
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[r], rows[piv]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][c] == 0) continue;
      const __int128 a = rows[r][c], b = rows[i][c];
      __int128 g = 0;
      for (std::size_t k = 0; k < cols; ++k) {
        rows[i][k] = rows[i][k] * a - rows[r][k] * b;
        const __int128 v = rows[i][k] < 0 ? -rows[i][k] : rows[i][k];
        g = std::gcd(static_cast<long long>(g), static_cast<long long>(v));
      }
      if (g > 1) {
        for (auto& x : rows[i]) x /= g;
      }
    }
    ++r;
  }
  return r;
}

inline bool dominates(const Point& a, const Point& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
  }
  return true;
}

/// v in conv(others) + R^d_>= iff  sum l_u u + s = v, sum l_u = 1, l, s >= 0 is feasible.
inline bool in_hull_of_others(const Point& v, const std::vector<Point>& others) {
  const std::size_t d = v.size();
  const std::size_t n = others.size() + d;
  newtonosc::RationalMatrix a(d + 1, newtonosc::RationalVector(n, 0));
  newtonosc::RationalVector b(d + 1, 0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t u = 0; u < others.size(); ++u) a[i][u] = others[u][i];
    a[i][others.size() + i] = 1;
    b[i] = v[i];
  }
  for (std::size_t u = 0; u < others.size(); ++u) a[d][u] = 1;
  b[d] = 1;
  return newtonosc::find_feasible_point(a, b).has_value();
}

inline std::vector<Point> vertices_of(std::vector<Point> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::vector<Point> minimal;
  for (const auto& p : pts) {
    bool dominated = false;
    for (const auto& q : pts) dominated = dominated || (q != p && dominates(p, q));
    if (!dominated) minimal.push_back(p);
  }
  std::vector<Point> out;
  for (const auto& v : minimal) {
    std::vector<Point> others;
    for (const auto& u : minimal) {
      if (u != v) others.push_back(u);
    }
    if (others.empty() || !in_hull_of_others(v, others)) out.push_back(v);
  }
  return out;
}

/// Tight vertex set and recession directions of the face cut out by w.
inline std::size_t face_rank(const std::vector<Point>& tight, const std::vector<long>& w) {
  const std::size_t d = w.size();
  std::vector<std::vector<__int128>> rows;
  for (std::size_t t = 1; t < tight.size(); ++t) {
    std::vector<__int128> r(d);
    for (std::size_t i = 0; i < d; ++i) r[i] = tight[t][i] - tight[0][i];
    rows.push_back(r);
  }
  for (std::size_t k = 0; k < d; ++k) {
    if (w[k] == 0) {
      std::vector<__int128> r(d, 0);
      r[k] = 1;
      rows.push_back(r);
    }
  }
  return integer_rank(rows, d);
}

inline long gcd_all(const std::vector<long>& w) {
  long g = 0;
  for (long x : w) g = std::gcd(g, x);
  return g;
}

/// Every facet normal has entries bounded by the largest 2x2 minor of coordinate differences
/// (or a single difference when the facet contains a recession direction).
inline long normal_bound(std::size_t d, long max_exponent) {
  return d == 2 ? max_exponent : 2 * max_exponent * max_exponent;
}

inline std::vector<Facet> facets_of(const std::vector<Point>& verts, long bound) {
  const std::size_t d = verts.front().size();
  std::vector<Facet> out;
  std::vector<long> w(d, 0);
  std::vector<Point> tight;
  while (true) {
    std::size_t k = 0;
    while (k < d && w[k] == bound) w[k++] = 0;
    if (k == d) break;
    ++w[k];
    if (gcd_all(w) != 1) continue;
    long b = dotl(w, verts.front());
    for (const auto& v : verts) b = std::min(b, dotl(w, v));
    tight.clear();
    for (const auto& v : verts) {
      if (dotl(w, v) == b) tight.push_back(v);
    }
    std::size_t zeros = 0;
    for (long x : w) zeros += x == 0 ? 1 : 0;
    if (tight.size() + zeros < d) continue;
    if (face_rank(tight, w) == d - 1) out.push_back(Facet{w, b});
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline std::set<std::vector<Point>> compact_faces_of(const std::vector<Point>& verts, const std::vector<Facet>& facets) {
  const std::size_t n = verts.size(), d = verts.front().size();
  std::set<std::vector<Point>> out;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<bool> in_face(n, true);
    std::vector<bool> recession(d, true);
    bool any = false;
    for (const auto& f : facets) {
      bool contains_subset = true;
      for (std::size_t v = 0; v < n; ++v) {
        if ((mask >> v & 1) && dotl(f.normal, verts[v]) != f.offset) contains_subset = false;
      }
      if (!contains_subset) continue;
      any = true;
      for (std::size_t v = 0; v < n; ++v) {
        if (dotl(f.normal, verts[v]) != f.offset) in_face[v] = false;
      }
      for (std::size_t k = 0; k < d; ++k) {
        if (f.normal[k] != 0) recession[k] = false;
      }
    }
    if (!any) continue;
    bool closed = true;
    for (std::size_t v = 0; v < n; ++v) closed = closed && (in_face[v] == static_cast<bool>(mask >> v & 1));
    if (!closed || std::count(recession.begin(), recession.end(), true) != 0) continue;
    std::vector<Point> face;
    for (std::size_t v = 0; v < n; ++v) {
      if (mask >> v & 1) face.push_back(verts[v]);
    }
    out.insert(face);
  }
  return out;
}

inline Geometry brute_force(const std::vector<Point>& support, long max_exponent) {
  Geometry g;
  g.vertices = vertices_of(support);
  g.facets = facets_of(g.vertices, normal_bound(support.front().size(), max_exponent));
  g.compact_faces = compact_faces_of(g.vertices, g.facets);
  return g;
}

/// Random reduced support: every point has at least two positive coordinates.
inline std::vector<Point> random_reduced_support(std::mt19937_64& rng, std::size_t d, long max_exponent,
                                                 std::size_t max_points) {
  std::uniform_int_distribution<std::size_t> count(1, max_points);
  std::uniform_int_distribution<long> e(0, max_exponent);
  std::vector<Point> pts;
  const std::size_t n = count(rng);
  while (pts.size() < n) {
    Point p(d);
    for (auto& x : p) x = e(rng);
    if (std::count_if(p.begin(), p.end(), [](long x) { return x > 0; }) >= 2) pts.push_back(p);
  }
  return pts;
}

inline bool member(const Geometry& g, const newtonosc::RationalVector& x) {
  for (const auto& v : x) {
    if (v < 0) return false;
  }
  for (const auto& f : g.facets) {
    newtonosc::Rational s = 0;
    for (std::size_t i = 0; i < x.size(); ++i) s += f.normal[i] * x[i];
    if (s < f.offset) return false;
  }
  return true;
}

/// Simplest rational in the closed interval [lo, hi], 0 <= lo <= hi.
inline newtonosc::Rational simplest_in(const newtonosc::Rational& lo, const newtonosc::Rational& hi) {
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), lo.get_num_mpz_t(), lo.get_den_mpz_t());
  if (newtonosc::Rational(fl) == lo) return lo;
  if (newtonosc::Rational(fl + 1) <= hi) return newtonosc::Rational(fl + 1);
  const newtonosc::Rational inner = simplest_in(1 / (hi - fl), 1 / (lo - fl));
  return newtonosc::Rational(fl) + 1 / inner;
}

struct ExponentOracle {
  newtonosc::Rational nu;
  int m = 0;
  std::vector<Point> face_vertices;
};

/// nu = min{t : t z in N} by exact bisection and recovery of the simplest rational; the lowest
/// face is cut out by the oracle facets tight at nu z.
inline ExponentOracle exponent_by_bisection(const Geometry& g, const newtonosc::RationalVector& z) {
  const std::size_t d = z.size();
  auto scaled = [&](const newtonosc::Rational& t) {
    newtonosc::RationalVector x(d);
    for (std::size_t i = 0; i < d; ++i) x[i] = t * z[i];
    return x;
  };
  newtonosc::Rational lo = 0, hi = 1;
  while (!member(g, scaled(hi))) hi *= 2;
  for (int it = 0; it < 160; ++it) {
    const newtonosc::Rational mid = (lo + hi) / 2;
    (member(g, scaled(mid)) ? hi : lo) = mid;
  }
  ExponentOracle out;
  out.nu = simplest_in(lo, hi);
  const newtonosc::RationalVector gamma = scaled(out.nu);
  std::vector<std::vector<__int128>> normals;
  std::vector<bool> keep(g.vertices.size(), true);
  for (const auto& f : g.facets) {
    newtonosc::Rational s = 0;
    for (std::size_t i = 0; i < d; ++i) s += f.normal[i] * gamma[i];
    if (s != f.offset) continue;
    normals.emplace_back(f.normal.begin(), f.normal.end());
    for (std::size_t v = 0; v < g.vertices.size(); ++v) {
      if (dotl(f.normal, g.vertices[v]) != f.offset) keep[v] = false;
    }
  }
  const int dim = static_cast<int>(d) - static_cast<int>(integer_rank(normals, d));
  out.m = static_cast<int>(d) - dim - 1;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    if (keep[v]) out.face_vertices.push_back(g.vertices[v]);
  }
  return out;
}

}  // namespace oracle
