#include "newtonosc/exponent.hpp"

#include "newtonosc/errors.hpp"

#include <stdexcept>

namespace newtonosc {

LebesgueExponent LebesgueExponent::finite(Rational p) {
  if (p < 2) throw std::invalid_argument("Lebesgue exponent must be at least 2");
  LebesgueExponent e;
  e.infinite_ = false;
  e.p_ = std::move(p);
  return e;
}

const Rational& LebesgueExponent::value() const {
  if (infinite_) throw std::logic_error("infinite exponent has no rational value");
  return p_;
}

Rational LebesgueExponent::inverse_conjugate() const { return 1 - inverse(); }

Rational LebesgueExponent::inverse() const { return infinite_ ? Rational(0) : Rational(1 / p_); }

std::string LebesgueExponent::to_string() const { return infinite_ ? "inf" : newtonosc::to_string(p_); }

ExponentQuery ExponentQuery::all_infinite(std::size_t d) {
  return ExponentQuery{std::vector<LebesgueExponent>(d, LebesgueExponent::infinity())};
}

ExponentQuery ExponentQuery::parse(std::string_view text, std::size_t d) {
  std::vector<LebesgueExponent> items;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    std::string item(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item == "inf" || item == "infinity") {
      items.push_back(LebesgueExponent::infinity());
    } else {
      items.push_back(LebesgueExponent::finite(parse_rational(item)));
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (items.size() == 1 && d > 1) items.assign(d, items.front());
  if (items.size() != d) {
    throw std::invalid_argument("expected " + std::to_string(d) + " Lebesgue exponents, got " +
                                std::to_string(items.size()));
  }
  return ExponentQuery{std::move(items)};
}

RationalVector ExponentQuery::inverse_conjugates() const {
  RationalVector u;
  for (const auto& e : p) u.push_back(e.inverse_conjugate());
  return u;
}

bool ExponentQuery::all_infinite() const {
  for (const auto& e : p) {
    if (!e.is_infinite()) return false;
  }
  return true;
}

ExponentReport sharp_exponent(const NewtonPolyhedron& n, const ExponentQuery& q) {
  const std::size_t d = n.dimension();
  if (q.p.size() != d) throw std::invalid_argument("exponent query dimension mismatch");
  const RationalVector u = q.inverse_conjugates();
  auto nu = n.ray_scaling(u);
  if (!nu) throw GeometryError("ray through 1/p' misses the polyhedron");
  ExponentReport r;
  r.nu = *nu;
  r.witness.resize(d);
  for (std::size_t k = 0; k < d; ++k) r.witness[k] = r.nu * u[k];
  r.face = n.lowest_face_containing(r.witness);
  const int ell = r.face.dim + 1;
  r.m = static_cast<int>(d) - ell;
  r.witness_in_facet_interior = r.face.dim == static_cast<int>(d) - 1;
  r.nu_at_most_two = r.nu <= 2;
  r.m_is_upper_bound = !q.all_infinite();
  return r;
}

ExponentReport varchenko_exponent(const NewtonPolyhedron& n) {
  return sharp_exponent(n, ExponentQuery::all_infinite(n.dimension()));
}

}  // namespace newtonosc
