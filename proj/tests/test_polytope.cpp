#include "doctest.h"

#include "oracles/polytope_oracle.hpp"

#include "newtonosc/errors.hpp"
#include "newtonosc/phase.hpp"
#include "newtonosc/polytope.hpp"

#include <random>

using namespace newtonosc;

namespace {

std::vector<MultiIndex> to_support(const std::vector<oracle::Point>& pts) {
  std::vector<MultiIndex> s;
  for (const auto& p : pts) s.emplace_back(std::vector<int>(p.begin(), p.end()));
  return s;
}

std::vector<oracle::Point> to_points(const std::vector<RationalVector>& vs) {
  std::vector<oracle::Point> out;
  for (const auto& v : vs) {
    oracle::Point p;
    for (const auto& x : v) p.push_back(x.get_num().get_si());
    out.push_back(p);
  }
  return out;
}

std::vector<oracle::Facet> to_facets(const std::vector<Facet>& fs) {
  std::vector<oracle::Facet> out;
  for (const auto& f : fs) {
    oracle::Facet g;
    for (const auto& x : f.normal) g.normal.push_back(x.get_num().get_si());
    g.offset = f.offset.get_num().get_si();
    out.push_back(g);
  }
  std::sort(out.begin(), out.end());
  return out;
}

RationalVector rv(std::vector<int> v) { return to_rational_vector(v); }

}  // namespace

TEST_CASE("single monomial") {
  const auto n = build_polyhedron(parse_phase("x1*x2", 2));
  CHECK(n.vertices() == std::vector<RationalVector>{rv({1, 1})});
  REQUIRE(n.facets().size() == 2);
  CHECK(n.facets()[0] == Facet{rv({0, 1}), 1});
  CHECK(n.facets()[1] == Facet{rv({1, 0}), 1});
  CHECK(n.compact_faces().size() == 1);
  CHECK(newton_distance(n) == 1);
}

TEST_CASE("two-vertex polyhedron") {
  const auto n = build_polyhedron(parse_phase("x1^2*x2^2 + x1^5*x2", 2));
  CHECK(n.vertices() == std::vector<RationalVector>{rv({2, 2}), rv({5, 1})});
  CHECK(n.facets().size() == 3);
  CHECK(std::find(n.facets().begin(), n.facets().end(), Facet{rv({1, 3}), 8}) != n.facets().end());
  const auto cf = n.compact_faces();
  REQUIRE(cf.size() == 3);
  CHECK(cf.back().dim == 1);
  CHECK(newton_distance(n) == 2);
  const auto& f = n.lowest_face_containing(rv({2, 2}));
  CHECK(f.dim == 0);
  CHECK(n.lowest_face_containing(rv({2, 7})).dim == 1);
  CHECK_FALSE(n.lowest_face_containing(rv({2, 7})).compact());
  CHECK(n.lowest_face_containing(RationalVector{Rational(7, 2), Rational(3, 2)}).vertices.size() == 2);
  CHECK_THROWS_AS(n.lowest_face_containing(rv({1, 1})), GeometryError);
  CHECK_THROWS_AS(n.lowest_face_containing(rv({6, 6})), GeometryError);
}

TEST_CASE("dominated and interior points are not vertices") {
  const auto n = polyhedron_from_support(2, {MultiIndex({2, 2}), MultiIndex({3, 3}), MultiIndex({4, 1}),
                                             MultiIndex({1, 4}), MultiIndex({3, 2})});
  CHECK(n.vertices() == std::vector<RationalVector>{rv({1, 4}), rv({2, 2}), rv({4, 1})});
  const auto m = polyhedron_from_support(2, {MultiIndex({1, 3}), MultiIndex({2, 2}), MultiIndex({3, 1})});
  CHECK(m.vertices() == std::vector<RationalVector>{rv({1, 3}), rv({3, 1})});
}

TEST_CASE("membership and ray scaling") {
  const auto n = polyhedron_from_support(3, {MultiIndex({1, 1, 0}), MultiIndex({0, 1, 1}), MultiIndex({1, 0, 1})});
  CHECK(n.contains(rv({1, 1, 0})));
  CHECK(n.contains(RationalVector{Rational(2, 3), Rational(2, 3), Rational(2, 3)}));
  CHECK_FALSE(n.contains(RationalVector{Rational(1, 2), Rational(1, 2), Rational(1, 2)}));
  CHECK(newton_distance(n) == Rational(2, 3));
  const auto t = n.ray_scaling(rv({1, 0, 0}));
  CHECK_FALSE(t.has_value());
  CHECK(n.is_interior(rv({2, 2, 2})));
}

TEST_CASE("hull matches the brute-force oracle on random supports") {
  std::mt19937_64 rng(2024);
  for (int it = 0; it < 30; ++it) {
    const std::size_t d = 2 + it % 2;
    const auto pts = oracle::random_reduced_support(rng, d, 6, 6);
    const auto g = oracle::brute_force(pts, 6);
    const auto n = polyhedron_from_support(d, to_support(pts));
    CHECK(to_points(n.vertices()) == g.vertices);
    CHECK(to_facets(n.facets()) == g.facets);
    std::set<std::vector<oracle::Point>> faces;
    for (const auto& f : n.compact_faces()) faces.insert(to_points(f.vertices));
    CHECK(faces == g.compact_faces);
  }
}

TEST_CASE("face lattice invariants") {
  std::mt19937_64 rng(99);
  for (int it = 0; it < 20; ++it) {
    const std::size_t d = 2 + it % 2;
    const auto pts = oracle::random_reduced_support(rng, d, 7, 6);
    const auto n = polyhedron_from_support(d, to_support(pts));
    for (const auto& f : n.faces()) {
      CHECK(f.dim >= 0);
      CHECK(f.dim <= static_cast<int>(d) - 1);
      for (const auto& v : n.vertices()) {
        const Rational s = dot(f.normal, v);
        CHECK(s >= f.offset);
        const bool on = std::find(f.vertices.begin(), f.vertices.end(), v) != f.vertices.end();
        CHECK((s == f.offset) == on);
      }
      for (std::size_t z : f.zero_directions) CHECK(f.normal[z] == 0);
      if (f.compact()) {
        for (const auto& x : f.normal) CHECK(x > 0);
      }
    }
    for (const auto& v : n.vertices()) CHECK(n.lowest_face_containing(v).dim == 0);
  }
}

TEST_CASE("dual polyhedron and double dual") {
  const auto n = build_polyhedron(parse_phase("x1*x2", 2));
  const auto dual = dual_polyhedron(n);
  CHECK(dual.vertices() == std::vector<RationalVector>{rv({0, 1}), rv({1, 0})});
  CHECK(dual_polyhedron(dual).vertices() == n.vertices());

  std::mt19937_64 rng(17);
  for (int it = 0; it < 20; ++it) {
    const std::size_t d = 2 + it % 2;
    const auto pts = oracle::random_reduced_support(rng, d, 7, 6);
    const auto m = polyhedron_from_support(d, to_support(pts));
    const auto dm = dual_polyhedron(m);
    for (const auto& w : dm.vertices()) {
      for (const auto& a : m.vertices()) CHECK(dot(a, w) >= 1);
    }
    const auto dd = dual_polyhedron(dm);
    CHECK(dd.vertices() == m.vertices());
    CHECK(dd.facets() == m.facets());
  }
}

TEST_CASE("from_inequalities round trip") {
  const auto n = build_polyhedron(parse_phase("x1^2*x2^2 + x1^5*x2 + x1*x2^6", 2));
  const auto m = OrthantPolyhedron::from_inequalities(2, n.facets());
  CHECK(m.vertices() == n.vertices());
  CHECK(m.facets() == n.facets());
}
