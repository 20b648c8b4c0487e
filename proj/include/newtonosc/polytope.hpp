// Exact geometry of polyhedra of the form P = conv(V) + R^d_>= (Newton polyhedra and
// their duals): V- and H-representations, face lattice, membership, ray scaling.
#pragma once

#include "newtonosc/face.hpp"
#include "newtonosc/phase.hpp"
#include "newtonosc/rational.hpp"

#include <optional>
#include <span>
#include <vector>

namespace newtonosc {

/// Inequality <normal, x> >= offset with a primitive integer normal >= 0.
struct Facet {
  RationalVector normal;
  Rational offset;

  bool operator==(const Facet&) const = default;
};

class OrthantPolyhedron {
 public:
  /// P = conv(points) + R^d_>=. Points need not be irredundant. Throws on empty input.
  static OrthantPolyhedron from_generators(std::size_t d, std::vector<RationalVector> points);

  /// P = {x >= 0 : <n_k, x> >= b_k}; every n_k must be >= 0. Throws GeometryError if empty.
  static OrthantPolyhedron from_inequalities(std::size_t d, const std::vector<Facet>& inequalities);

  std::size_t dimension() const { return dimension_; }
  /// Lexicographically sorted.
  const std::vector<RationalVector>& vertices() const { return vertices_; }
  /// Sorted by (normal, offset).
  const std::vector<Facet>& facets() const { return facets_; }
  /// Every nonempty proper face, ordered by (dim, vertex_ids, zero_directions); id = position.
  const std::vector<Face>& faces() const { return faces_; }
  std::vector<Face> compact_faces() const;

  bool contains(std::span<const Rational> q) const;
  /// True iff q satisfies every facet inequality strictly.
  bool is_interior(std::span<const Rational> q) const;
  /// Intersection of the facets tight at q. Throws GeometryError if q is outside or interior.
  const Face& lowest_face_containing(std::span<const Rational> q) const;
  /// min{t >= 0 : t u in P} by exact LP over the V-representation; nullopt if the ray misses P.
  std::optional<Rational> ray_scaling(std::span<const Rational> u) const;

 private:
  OrthantPolyhedron() = default;
  void build_faces();

  std::size_t dimension_ = 0;
  std::vector<RationalVector> vertices_;
  std::vector<Facet> facets_;
  std::vector<Face> faces_;
};

using NewtonPolyhedron = OrthantPolyhedron;
using DualPolyhedron = OrthantPolyhedron;

/// Newton polyhedron of a reduced phase. Throws std::invalid_argument if p is not reduced.
NewtonPolyhedron build_polyhedron(const PhasePolynomial& p);

NewtonPolyhedron polyhedron_from_support(std::size_t d, const std::vector<MultiIndex>& support);

/// Least t with (t, ..., t) in N.
Rational newton_distance(const NewtonPolyhedron& n);

/// {w >= 0 : <alpha, w> >= 1 for all alpha in N}.
DualPolyhedron dual_polyhedron(const NewtonPolyhedron& n);

}  // namespace newtonosc
