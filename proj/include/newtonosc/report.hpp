// JSON and CSV serialization of module results. Output is deterministic: ordered keys,
// canonical geometry ordering, no timings.
#pragma once

#include "newtonosc/decay.hpp"
#include "newtonosc/exponent.hpp"
#include "newtonosc/nondegen.hpp"
#include "newtonosc/oscint.hpp"
#include "newtonosc/polytope.hpp"

#include "json.hpp"

#include <ostream>
#include <string>
#include <vector>

namespace newtonosc {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "newtonosc.report/1";

/// Integers become JSON numbers, other rationals strings "a/b".
Json rational_json(const Rational& q);
Json rational_vector_json(const RationalVector& v);

/// "2*x1 + x2 >= 5"
std::string facet_text(const Facet& f);

Json face_json(const Face& f);
Json polyhedron_json(const OrthantPolyhedron& n);
Json exponent_json(const ExponentReport& r, const ExponentQuery& q);
Json nondegeneracy_json(const NondegeneracyReport& r);
Json key_lemma_json(const KeyLemmaResult& r);
Json upper_lemma_json(const UpperLemmaResult& r);
Json subdecompose_json(const SubdecomposeResult& r);
Json osc_result_json(const OscResult& r);
Json decay_fit_json(const DecayFit& f);
Json sharpness_json(const SharpnessWitness& s);
Json summation_json(const SummationResult& s);

/// Columns: lambda,re,im,abs,err,envelope,certificate (empty cell when a value is absent).
void write_sweep_csv(std::ostream& os, const std::vector<OscResult>& sweep, const std::vector<double>& envelope);

/// Columns: j1,...,jd,ratio
void write_box_csv(std::ostream& os, const std::vector<BoxRatio>& table);

}  // namespace newtonosc
