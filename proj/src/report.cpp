#include "newtonosc/report.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace newtonosc {

namespace {

Json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

Json doubles(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

Json complex_json(std::complex<double> z) { return Json{{"re", number(z.real())}, {"im", number(z.imag())}}; }

std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

Json box_ratios(const std::vector<BoxRatio>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) {
    a.push_back(Json{{"j", r.box.exponents()}, {"ratio", number(r.ratio)}, {"point", doubles(r.point)}});
  }
  return a;
}

}  // namespace

Json rational_json(const Rational& q) {
  if (is_integer(q) && q.get_num().fits_slong_p()) return q.get_num().get_si();
  return to_string(q);
}

Json rational_vector_json(const RationalVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(rational_json(x));
  return a;
}

std::string facet_text(const Facet& f) {
  std::string s;
  for (std::size_t k = 0; k < f.normal.size(); ++k) {
    if (f.normal[k] == 0) continue;
    if (!s.empty()) s += " + ";
    if (f.normal[k] != 1) s += to_string(f.normal[k]) + "*";
    s += "x" + std::to_string(k + 1);
  }
  return s + " >= " + to_string(f.offset);
}

Json face_json(const Face& f) {
  std::vector<std::size_t> zero;
  for (auto z : f.zero_directions) zero.push_back(z + 1);
  return Json{{"id", f.id},
              {"dim", f.dim},
              {"compact", f.compact()},
              {"vertex_ids", f.vertex_ids},
              {"vertices", [&] {
                 Json a = Json::array();
                 for (const auto& v : f.vertices) a.push_back(rational_vector_json(v));
                 return a;
               }()},
              {"recession_axes", zero},
              {"normal", rational_vector_json(f.normal)},
              {"offset", rational_json(f.offset)}};
}

Json polyhedron_json(const OrthantPolyhedron& n) {
  Json verts = Json::array();
  for (const auto& v : n.vertices()) verts.push_back(rational_vector_json(v));
  Json facets = Json::array();
  for (const auto& f : n.facets()) {
    facets.push_back(Json{{"normal", rational_vector_json(f.normal)}, {"offset", rational_json(f.offset)},
                          {"text", facet_text(f)}});
  }
  Json compact = Json::array();
  std::size_t ncompact = 0;
  for (const auto& f : n.faces()) {
    if (!f.compact()) continue;
    compact.push_back(face_json(f));
    ++ncompact;
  }
  return Json{{"dimension", n.dimension()},
              {"vertices", verts},
              {"facets", facets},
              {"compact_faces", compact},
              {"counts", Json{{"vertices", n.vertices().size()},
                              {"facets", n.facets().size()},
                              {"faces", n.faces().size()},
                              {"compact_faces", ncompact}}}};
}

Json exponent_json(const ExponentReport& r, const ExponentQuery& q) {
  Json p = Json::array();
  for (const auto& e : q.p) p.push_back(e.to_string());
  Json flags = Json::array();
  if (r.nu_at_most_two) flags.push_back("nu<=2 boundary");
  if (r.m_is_upper_bound) flags.push_back("m upper bound");
  if (!r.face.compact()) flags.push_back("non-compact face");
  if (r.witness_in_facet_interior) flags.push_back("witness interior to a facet");
  return Json{{"p", p},
              {"nu", to_double(r.nu)},
              {"nu_exact", to_string(r.nu)},
              {"m", r.m},
              {"witness", rational_vector_json(r.witness)},
              {"face", face_json(r.face)},
              {"flags", flags}};
}

Json nondegeneracy_json(const NondegeneracyReport& r) {
  Json faces = Json::array();
  for (const auto& f : r.faces) {
    faces.push_back(Json{{"face_id", f.face.id},
                         {"dim", f.face.dim},
                         {"face_polynomial", to_string(f.face_polynomial)},
                         {"verdict", to_string(f.verdict)},
                         {"margin", number(f.margin)},
                         {"witness", doubles(f.witness)},
                         {"witness_value", number(f.witness_value)},
                         {"witness_relative", number(f.witness_relative)},
                         {"cells_certified", f.cells_certified},
                         {"cells_uncertified", f.cells_uncertified}});
  }
  return Json{{"verdict", to_string(r.verdict)},
              {"eta", r.options.eta},
              {"grid", r.options.grid},
              {"max_depth", r.options.max_depth},
              {"zero_tol", r.options.zero_tol},
              {"orthants", r.options.all_orthants ? "all" : "positive"},
              {"faces", faces}};
}

Json key_lemma_json(const KeyLemmaResult& r) {
  return Json{{"k_hat", number(r.k_hat)}, {"pass", r.pass}, {"boxes", r.table.size()}, {"worst", box_ratios(r.worst)}};
}

Json upper_lemma_json(const UpperLemmaResult& r) {
  return Json{{"k_prime_hat", number(r.k_prime_hat)},
              {"finite", r.finite},
              {"boxes", r.table.size()},
              {"worst", box_ratios(r.worst)}};
}

Json subdecompose_json(const SubdecomposeResult& r) {
  Json a = Json::array();
  for (const auto& s : r.assignment) {
    a.push_back(Json{{"l", s.index}, {"pair", {s.i + 1, s.j + 1}}, {"inf", number(s.inf_value)}});
  }
  return Json{{"found", r.found}, {"N", r.n}, {"threshold", number(r.threshold)}, {"assignment", a}};
}

Json osc_result_json(const OscResult& r) {
  Json j{{"lambda", number(r.lambda)},
         {"value", complex_json(r.value)},
         {"abs", number(std::abs(r.value))},
         {"error", number(r.error)},
         {"low_confidence", r.low_confidence}};
  if (r.certificate) j["certificate"] = number(*r.certificate);
  if (!r.boxes.empty()) {
    Json b = Json::array();
    for (const auto& [k, v] : r.boxes) b.push_back(Json{{"key", k}, {"value", complex_json(v)}});
    j["boxes"] = b;
  }
  return j;
}

Json decay_fit_json(const DecayFit& f) {
  auto fit = [](const LinearFit& l) {
    return Json{{"inv_nu", number(l.inv_nu)}, {"m", number(l.m)}, {"constant", number(l.constant)},
                {"residual", number(l.residual)}};
  };
  Json samples = Json::array();
  for (const auto& s : f.samples) {
    samples.push_back(Json{{"lambda", number(s.lambda)}, {"abs", number(s.magnitude)}, {"clean", s.clean}});
  }
  return Json{{"nu_pred", to_string(f.nu_pred)},
              {"m_pred", f.m_pred},
              {"free", fit(f.free_fit)},
              {"pinned", fit(f.pinned_fit)},
              {"deviation", number(f.deviation)},
              {"tolerance", f.tolerance},
              {"pass", f.pass},
              {"samples", samples}};
}

Json sharpness_json(const SharpnessWitness& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows) {
    rows.push_back(Json{{"lambda", number(r.lambda)},
                        {"abs", number(r.magnitude)},
                        {"l1_norm", number(r.l1_norm)},
                        {"ratio", number(r.ratio)},
                        {"phase_bound", number(r.phase_bound)},
                        {"chain", number(r.chain)}});
  }
  return Json{{"w", rational_vector_json(s.w)},
              {"delta", number(s.delta)},
              {"delta_halvings", s.delta_halvings},
              {"envelope_exponent", rational_json(s.envelope_exponent)},
              {"dual_inequality", s.dual_inequality},
              {"ratios_in_band", s.ratios_in_band},
              {"chain_monotone", s.chain_monotone},
              {"pass", s.pass},
              {"rows", rows}};
}

Json summation_json(const SummationResult& s) {
  Json rows = Json::array();
  for (const auto& r : s.rows) {
    rows.push_back(Json{{"lambda", number(r.lambda)},
                        {"jmax", r.jmax},
                        {"sum", number(r.sum)},
                        {"tail", number(r.tail)},
                        {"ratio", number(r.ratio)},
                        {"stability", number(r.stability)}});
  }
  return Json{{"status", s.status == SummationStatus::ok ? "ok" : "refused"},
              {"nu", to_string(s.nu)},
              {"ell", s.ell},
              {"log_power", s.log_power},
              {"spread", number(s.spread)},
              {"factor", s.factor},
              {"stable", s.stable},
              {"pass", s.pass},
              {"rows", rows}};
}

void write_sweep_csv(std::ostream& os, const std::vector<OscResult>& sweep, const std::vector<double>& envelope) {
  os << "lambda,re,im,abs,err,envelope,certificate\n";
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const auto& r = sweep[i];
    os << csv_number(r.lambda) << ',' << csv_number(r.value.real()) << ',' << csv_number(r.value.imag()) << ','
       << csv_number(std::abs(r.value)) << ',' << csv_number(r.error) << ',';
    if (i < envelope.size()) os << csv_number(envelope[i]);
    os << ',';
    if (r.certificate) os << csv_number(*r.certificate);
    os << '\n';
  }
}

void write_box_csv(std::ostream& os, const std::vector<BoxRatio>& table) {
  if (table.empty()) return;
  for (std::size_t k = 0; k < table.front().box.dimension(); ++k) os << 'j' << k + 1 << ',';
  os << "ratio\n";
  for (const auto& r : table) {
    for (int j : r.box.exponents()) os << j << ',';
    os << csv_number(r.ratio) << '\n';
  }
}

}  // namespace newtonosc
