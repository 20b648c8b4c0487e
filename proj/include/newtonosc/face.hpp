#pragma once

#include "newtonosc/rational.hpp"

#include <cstddef>
#include <vector>

namespace newtonosc {

/// A face of an orthant polyhedron P = conv(V) + R^d_>=:
///   F = conv(vertices) + cone{e_i : i in zero_directions} = argmin_{x in P} <normal, x>.
/// `normal` is the sum of the normals of all facets containing F, so normal_i = 0
/// exactly for i in zero_directions. F is compact iff zero_directions is empty.
struct Face {
  std::size_t id = 0;
  std::vector<std::size_t> vertex_ids;      // ascending indices into the polyhedron's vertex list
  std::vector<RationalVector> vertices;     // coordinates, same order as vertex_ids
  std::vector<std::size_t> zero_directions; // ascending
  int dim = 0;
  RationalVector normal;
  Rational offset;  // <normal, v> for every vertex v

  bool compact() const { return zero_directions.empty(); }
};

}  // namespace newtonosc
