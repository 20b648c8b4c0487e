#include "newtonosc/polytope.hpp"

#include "newtonosc/errors.hpp"
#include "newtonosc/linalg.hpp"
#include "newtonosc/lp.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace newtonosc {

namespace {

// a in b + R^d_>=
bool dominates(const RationalVector& b, const RationalVector& a) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] < b[k]) return false;
  }
  return true;
}

std::vector<RationalVector> remove_dominated(std::vector<RationalVector> points) {
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<RationalVector> kept;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
      dominated = j != i && dominates(points[j], points[i]);
    }
    if (!dominated) kept.push_back(points[i]);
  }
  return kept;
}

// Calls f on every k-subset of [0, n) in lexicographic order.
template <class F>
void for_each_subset(std::size_t n, std::size_t k, F&& f) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    f(idx);
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Scales (w, b) so that w is a primitive integer vector; w must be nonzero.
Facet normalize(RationalVector w, Rational b) {
  std::size_t lead = 0;
  while (w[lead] == 0) ++lead;
  const Rational before = w[lead];
  RationalVector prim = primitive_integer_vector(w);
  const Rational scale = prim[lead] / before;
  return Facet{std::move(prim), b * scale};
}

std::vector<Facet> enumerate_facets(std::size_t d, const std::vector<RationalVector>& points) {
  std::set<std::pair<RationalVector, Rational>> seen;
  std::vector<Facet> facets;
  for (std::size_t k = 1; k <= std::min(d, points.size()); ++k) {
    for_each_subset(points.size(), k, [&](const std::vector<std::size_t>& pts) {
      for_each_subset(d, d - k, [&](const std::vector<std::size_t>& dirs) {
        RationalMatrix rows;
        for (auto i : pts) {
          RationalVector r(points[i]);
          r.push_back(Rational(-1));
          rows.push_back(std::move(r));
        }
        for (auto r_idx : dirs) {
          RationalVector r(d + 1, Rational(0));
          r[r_idx] = 1;
          rows.push_back(std::move(r));
        }
        auto null = nullspace(rows, d + 1);
        if (null.size() != 1) return;
        RationalVector w(null[0].begin(), null[0].begin() + static_cast<std::ptrdiff_t>(d));
        Rational b = null[0][d];
        bool has_pos = false, has_neg = false;
        for (const auto& x : w) {
          has_pos = has_pos || x > 0;
          has_neg = has_neg || x < 0;
        }
        if (has_pos && has_neg) return;
        if (!has_pos && !has_neg) return;
        if (has_neg) {
          for (auto& x : w) x = -x;
          b = -b;
        }
        for (const auto& v : points) {
          if (dot(w, v) < b) return;
        }
        Facet f = normalize(std::move(w), std::move(b));
        if (seen.emplace(f.normal, f.offset).second) facets.push_back(std::move(f));
      });
    });
  }
  std::sort(facets.begin(), facets.end(), [](const Facet& a, const Facet& b) {
    return std::tie(a.normal, a.offset) < std::tie(b.normal, b.offset);
  });
  return facets;
}

}  // namespace

OrthantPolyhedron OrthantPolyhedron::from_generators(std::size_t d, std::vector<RationalVector> points) {
  if (points.empty()) throw std::invalid_argument("polyhedron needs at least one generator");
  for (const auto& p : points) {
    if (p.size() != d) throw std::invalid_argument("generator dimension mismatch");
  }
  OrthantPolyhedron poly;
  poly.dimension_ = d;
  auto candidates = remove_dominated(std::move(points));
  poly.facets_ = enumerate_facets(d, candidates);
  for (const auto& v : candidates) {
    RationalMatrix tight;
    for (const auto& f : poly.facets_) {
      if (dot(f.normal, v) == f.offset) tight.push_back(f.normal);
    }
    if (rank(tight, d) == d) poly.vertices_.push_back(v);
  }
  poly.build_faces();
  return poly;
}

OrthantPolyhedron OrthantPolyhedron::from_inequalities(std::size_t d, const std::vector<Facet>& inequalities) {
  std::vector<Facet> all = inequalities;
  for (const auto& f : all) {
    if (f.normal.size() != d) throw std::invalid_argument("inequality dimension mismatch");
    for (const auto& x : f.normal) {
      if (x < 0) throw std::invalid_argument("inequality normals must be nonnegative");
    }
  }
  for (std::size_t i = 0; i < d; ++i) {
    RationalVector e(d, Rational(0));
    e[i] = 1;
    all.push_back(Facet{std::move(e), Rational(0)});
  }
  std::set<RationalVector> found;
  for_each_subset(all.size(), d, [&](const std::vector<std::size_t>& rows) {
    RationalMatrix a;
    RationalVector b;
    for (auto r : rows) {
      a.push_back(all[r].normal);
      b.push_back(all[r].offset);
    }
    auto x = solve_square(a, b);
    if (!x) return;
    for (const auto& f : all) {
      if (dot(f.normal, *x) < f.offset) return;
    }
    found.insert(*x);
  });
  if (found.empty()) throw GeometryError("inequality system has no vertex");
  return from_generators(d, std::vector<RationalVector>(found.begin(), found.end()));
}

void OrthantPolyhedron::build_faces() {
  const std::size_t d = dimension_;
  using Key = std::pair<std::vector<std::size_t>, std::vector<std::size_t>>;
  std::vector<Key> facet_keys;
  for (const auto& f : facets_) {
    Key key;
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
      if (dot(f.normal, vertices_[v]) == f.offset) key.first.push_back(v);
    }
    for (std::size_t i = 0; i < d; ++i) {
      if (f.normal[i] == 0) key.second.push_back(i);
    }
    facet_keys.push_back(std::move(key));
  }

  std::set<Key> seen(facet_keys.begin(), facet_keys.end());
  std::vector<Key> queue(seen.begin(), seen.end());
  for (std::size_t q = 0; q < queue.size(); ++q) {
    for (const auto& fk : facet_keys) {
      Key meet;
      std::set_intersection(queue[q].first.begin(), queue[q].first.end(), fk.first.begin(), fk.first.end(),
                            std::back_inserter(meet.first));
      if (meet.first.empty()) continue;
      std::set_intersection(queue[q].second.begin(), queue[q].second.end(), fk.second.begin(),
                            fk.second.end(), std::back_inserter(meet.second));
      if (seen.insert(meet).second) queue.push_back(std::move(meet));
    }
  }

  faces_.clear();
  for (const auto& key : seen) {
    Face face;
    face.vertex_ids = key.first;
    face.zero_directions = key.second;
    for (auto v : key.first) face.vertices.push_back(vertices_[v]);
    RationalMatrix span;
    for (std::size_t i = 1; i < face.vertices.size(); ++i) {
      RationalVector diff(d);
      for (std::size_t k = 0; k < d; ++k) diff[k] = face.vertices[i][k] - face.vertices[0][k];
      span.push_back(std::move(diff));
    }
    for (auto z : key.second) {
      RationalVector e(d, Rational(0));
      e[z] = 1;
      span.push_back(std::move(e));
    }
    face.dim = static_cast<int>(rank(span, d));
    face.normal.assign(d, Rational(0));
    for (std::size_t k = 0; k < facets_.size(); ++k) {
      const bool contains_face = std::includes(facet_keys[k].first.begin(), facet_keys[k].first.end(),
                                               key.first.begin(), key.first.end()) &&
                                 std::includes(facet_keys[k].second.begin(), facet_keys[k].second.end(),
                                               key.second.begin(), key.second.end());
      if (!contains_face) continue;
      for (std::size_t i = 0; i < d; ++i) face.normal[i] += facets_[k].normal[i];
    }
    face.offset = dot(face.normal, face.vertices.front());
    faces_.push_back(std::move(face));
  }
  std::sort(faces_.begin(), faces_.end(), [](const Face& a, const Face& b) {
    return std::tie(a.dim, a.vertex_ids, a.zero_directions) < std::tie(b.dim, b.vertex_ids, b.zero_directions);
  });
  for (std::size_t i = 0; i < faces_.size(); ++i) faces_[i].id = i;
}

std::vector<Face> OrthantPolyhedron::compact_faces() const {
  std::vector<Face> out;
  for (const auto& f : faces_) {
    if (f.compact()) out.push_back(f);
  }
  return out;
}

bool OrthantPolyhedron::contains(std::span<const Rational> q) const {
  if (q.size() != dimension_) throw std::invalid_argument("contains: dimension mismatch");
  for (const auto& f : facets_) {
    if (dot(f.normal, q) < f.offset) return false;
  }
  return true;
}

bool OrthantPolyhedron::is_interior(std::span<const Rational> q) const {
  if (q.size() != dimension_) throw std::invalid_argument("is_interior: dimension mismatch");
  for (const auto& f : facets_) {
    if (dot(f.normal, q) <= f.offset) return false;
  }
  return true;
}

const Face& OrthantPolyhedron::lowest_face_containing(std::span<const Rational> q) const {
  const std::size_t d = dimension_;
  if (q.size() != d) throw std::invalid_argument("lowest_face_containing: dimension mismatch");
  std::vector<std::size_t> verts(vertices_.size());
  for (std::size_t v = 0; v < verts.size(); ++v) verts[v] = v;
  std::vector<bool> zero(d, true);
  bool any_tight = false;
  for (const auto& f : facets_) {
    const Rational level = dot(f.normal, q);
    if (level < f.offset) throw GeometryError("point lies outside the polyhedron");
    if (level != f.offset) continue;
    any_tight = true;
    std::vector<std::size_t> keep;
    for (auto v : verts) {
      if (dot(f.normal, vertices_[v]) == f.offset) keep.push_back(v);
    }
    verts = std::move(keep);
    for (std::size_t i = 0; i < d; ++i) zero[i] = zero[i] && f.normal[i] == 0;
  }
  if (!any_tight) throw GeometryError("point lies in the interior of the polyhedron");
  std::vector<std::size_t> zdirs;
  for (std::size_t i = 0; i < d; ++i) {
    if (zero[i]) zdirs.push_back(i);
  }
  const Face* match = nullptr;
  for (const auto& f : faces_) {
    if (f.vertex_ids == verts && f.zero_directions == zdirs) {
      if (match) throw std::logic_error("face lattice holds a duplicate face");
      match = &f;
    }
  }
  if (!match) throw std::logic_error("face lattice is not closed under intersection");
  return *match;
}

std::optional<Rational> OrthantPolyhedron::ray_scaling(std::span<const Rational> u) const {
  const std::size_t d = dimension_;
  if (u.size() != d) throw std::invalid_argument("ray_scaling: dimension mismatch");
  const std::size_t n = vertices_.size();
  // variables: t, lambda_1..lambda_n, mu_1..mu_d
  const std::size_t cols = 1 + n + d;
  LinearProgram lp;
  for (std::size_t i = 0; i < d; ++i) {
    RationalVector row(cols, Rational(0));
    row[0] = u[i];
    for (std::size_t v = 0; v < n; ++v) row[1 + v] = -vertices_[v][i];
    row[1 + n + i] = -1;
    lp.a.push_back(std::move(row));
    lp.b.push_back(Rational(0));
  }
  RationalVector convex(cols, Rational(0));
  for (std::size_t v = 0; v < n; ++v) convex[1 + v] = 1;
  lp.a.push_back(std::move(convex));
  lp.b.push_back(Rational(1));
  lp.c.assign(cols, Rational(0));
  lp.c[0] = 1;
  const LpResult r = solve_lp(lp);
  if (r.status != LpStatus::optimal) return std::nullopt;
  return r.objective;
}

NewtonPolyhedron build_polyhedron(const PhasePolynomial& p) {
  if (!p.reduced()) throw std::invalid_argument("Newton polyhedron requires a reduced phase");
  return polyhedron_from_support(p.dimension(), p.support());
}

NewtonPolyhedron polyhedron_from_support(std::size_t d, const std::vector<MultiIndex>& support) {
  std::vector<RationalVector> pts;
  for (const auto& a : support) pts.push_back(a.to_rational());
  return OrthantPolyhedron::from_generators(d, std::move(pts));
}

Rational newton_distance(const NewtonPolyhedron& n) {
  const RationalVector ones(n.dimension(), Rational(1));
  auto t = n.ray_scaling(ones);
  if (!t) throw GeometryError("diagonal does not meet the polyhedron");
  return *t;
}

DualPolyhedron dual_polyhedron(const NewtonPolyhedron& n) {
  std::vector<Facet> ineqs;
  for (const auto& v : n.vertices()) ineqs.push_back(Facet{v, Rational(1)});
  return OrthantPolyhedron::from_inequalities(n.dimension(), ineqs);
}

}  // namespace newtonosc
