#include "cli.hpp"

#include "newtonosc/decay.hpp"
#include "newtonosc/errors.hpp"
#include "newtonosc/exponent.hpp"
#include "newtonosc/nondegen.hpp"
#include "newtonosc/oscint.hpp"
#include "newtonosc/phase.hpp"
#include "newtonosc/polytope.hpp"
#include "newtonosc/report.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <regex>
#include <sstream>

namespace newtonosc::cli {

namespace {

constexpr const char* kPhaseGrammar =
    "phase grammar: terms joined by '+'/'-'; term = [rational][*] factor ('*' factor)*;\n"
    "  factor = xK or xK^E (1 <= K <= d, E >= 1); rational = a or a/b. Example: \"x1^2*x2^2 + 3/2*x1^5*x2\"\n"
    "test functions: one | const:c | box:a:b | exp:xi | table:x=y;x=y;...  (comma per coordinate)\n"
    "lambda grid: geom:lo:hi:n or a comma list (b^e allowed)\n";

struct RunConfig {
  std::string phase;
  std::string config;
  std::size_t dim = 0;
  std::string p = "inf";
  std::string lambda = "geom:2^6:2^20:15";
  std::string f = "one";
  std::string cutoff = "bump";
  double radius = 1.0;
  double plateau = 0.5;
  bool orthant = false;
  double eps0 = 1.0;
  int jmax = 10;
  int grid = 64;
  int vgrid = 32;
  int max_depth = 6;
  double eta = 1e-3;
  bool all_orthants = false;
  double k_min = 1e-3;
  double zero_tol = 1e-9;
  double rel_tol = 1e-7;
  double phase_step = 10.0;
  double fit_tol = 0.05;
  double certificate_c = kCalibratedCertificateConstant;
  int sharpness_cap = 8;
  double summation_factor = 10.0;
  std::string z;
  std::string out;
  std::string csv;
  std::uint64_t seed = 1;
  bool boxes = false;
  bool certify = false;
};

double parse_number(const std::string& text) {
  const auto caret = text.find('^');
  if (caret != std::string::npos) return std::pow(parse_number(text.substr(0, caret)), parse_number(text.substr(caret + 1)));
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw std::invalid_argument("malformed number '" + text + "'");
  }
  if (used != text.size()) throw std::invalid_argument("malformed number '" + text + "'");
  return v;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    std::string item(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    parts.push_back(item);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

TestFunction parse_one_function(const std::string& item) {
  const auto parts = split(item, ':');
  if (item == "one") return TestFunction::constant(1.0);
  if (parts[0] == "const" && parts.size() == 2) return TestFunction::constant(parse_number(parts[1]));
  if (parts[0] == "box" && parts.size() == 3) return TestFunction::indicator(parse_number(parts[1]), parse_number(parts[2]));
  if (parts[0] == "exp" && parts.size() == 2) return TestFunction::exponential(parse_number(parts[1]));
  if (parts[0] == "table" && parts.size() == 2) {
    std::vector<double> xs, ys;
    for (const auto& pair : split(parts[1], ';')) {
      const auto xy = split(pair, '=');
      if (xy.size() != 2) throw std::invalid_argument("table samples are written x=y");
      xs.push_back(parse_number(xy[0]));
      ys.push_back(parse_number(xy[1]));
    }
    return TestFunction::table(std::move(xs), std::move(ys));
  }
  throw std::invalid_argument("unknown test function '" + item + "'");
}

CutoffSpec make_cutoff(const RunConfig& c) {
  CutoffSpec chi;
  if (c.cutoff == "bump") {
    chi.profile = CutoffProfile::bump;
  } else if (c.cutoff == "plateau") {
    chi.profile = CutoffProfile::plateau;
  } else {
    throw std::invalid_argument("cutoff must be bump or plateau");
  }
  chi.radius = c.radius;
  chi.plateau = c.plateau;
  chi.orthant = c.orthant;
  return chi;
}

QuadratureOptions make_quadrature(const RunConfig& c) {
  QuadratureOptions q;
  q.rel_tol = c.rel_tol;
  q.phase_step = c.phase_step;
  q.boxes = c.boxes;
  if (!(q.rel_tol > 0.0) || !(q.phase_step > 0.0)) throw std::invalid_argument("tolerances must be positive");
  return q;
}

NondegeneracyOptions make_nondegeneracy(const RunConfig& c) {
  NondegeneracyOptions o;
  o.eta = c.eta;
  o.grid = c.grid;
  o.max_depth = c.max_depth;
  o.zero_tol = c.zero_tol;
  o.all_orthants = c.all_orthants;
  o.seed = c.seed;
  return o;
}

std::size_t dimension_of(const RunConfig& c) { return c.dim ? c.dim : infer_dimension(c.phase); }

Json base_report(const std::string& command, Json config) {
  return Json{{"schema", kSchemaVersion}, {"command", command}, {"config", std::move(config)}};
}

Json phase_config(const RunConfig& c, std::size_t d) { return Json{{"phase", c.phase}, {"dimension", d}}; }

void emit(const RunConfig& c, const Json& j, std::ostream& out) {
  const std::string text = j.dump(2) + "\n";
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + c.out);
  f << text;
}

void emit_csv(const RunConfig& c, const std::vector<OscResult>& sweep, const std::vector<double>& envelope) {
  if (c.csv.empty()) return;
  std::ofstream f(c.csv, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + c.csv);
  write_sweep_csv(f, sweep, envelope);
}

Json verdict(const std::string& name, const std::string& status, const std::string& detail) {
  return Json{{"name", name}, {"status", status}, {"detail", detail}};
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

int cmd_polyhedron(const RunConfig& c, std::ostream& out) {
  const std::size_t d = dimension_of(c);
  const PhasePolynomial p = reduce_phase(parse_phase(c.phase, d));
  const NewtonPolyhedron n = build_polyhedron(p);
  Json j = base_report("polyhedron", phase_config(c, d));
  j["reduced_phase"] = to_string(p);
  j["polyhedron"] = polyhedron_json(n);
  j["newton_distance"] = rational_json(newton_distance(n));
  emit(c, j, out);
  return 0;
}

int cmd_exponent(const RunConfig& c, std::ostream& out) {
  const std::size_t d = dimension_of(c);
  const PhasePolynomial p = reduce_phase(parse_phase(c.phase, d));
  const NewtonPolyhedron n = build_polyhedron(p);
  const ExponentQuery q = ExponentQuery::parse(c.p, d);
  Json cfg = phase_config(c, d);
  cfg["p"] = c.p;
  Json j = base_report("exponent", cfg);
  j["exponent"] = exponent_json(sharp_exponent(n, q), q);
  emit(c, j, out);
  return 0;
}

int cmd_check(const RunConfig& c, std::ostream& out) {
  const std::size_t d = dimension_of(c);
  const PhasePolynomial p = reduce_phase(parse_phase(c.phase, d));
  const NewtonPolyhedron n = build_polyhedron(p);
  const NondegeneracyReport nd = check_condition_v(p, n, make_nondegeneracy(c));
  const auto boxes = box_family(d, jmin_for_scale(c.eps0), c.jmax);
  const KeyLemmaResult kl = verify_key_lemma(p, n, boxes, c.vgrid, c.k_min);
  const UpperLemmaResult ul = verify_upper_lemma(p, n, boxes, c.vgrid);
  Json cfg = phase_config(c, d);
  cfg.update(Json{{"eps0", c.eps0}, {"jmax", c.jmax}, {"grid", c.grid}, {"vgrid", c.vgrid}, {"eta", c.eta},
                  {"max_depth", c.max_depth}, {"zero_tol", c.zero_tol}, {"all_orthants", c.all_orthants},
                  {"k_min", c.k_min}, {"seed", c.seed}});
  Json j = base_report("check", cfg);
  j["nondegeneracy"] = nondegeneracy_json(nd);
  j["key_lemma"] = key_lemma_json(kl);
  j["upper_lemma"] = upper_lemma_json(ul);
  const bool pass = nd.verdict == Verdict::nondegenerate && kl.pass && ul.finite;
  j["pass"] = pass;
  emit(c, j, out);
  if (!c.csv.empty()) {
    std::ofstream f(c.csv, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + c.csv);
    write_box_csv(f, kl.table);
  }
  return pass ? 0 : 1;
}

int cmd_integrate(const RunConfig& c, std::ostream& out) {
  const std::size_t d = dimension_of(c);
  const PhasePolynomial p = parse_phase(c.phase, d);
  const TestFunctionSpec f = parse_test_functions(c.f, d);
  const CutoffSpec chi = make_cutoff(c);
  const std::vector<double> lambdas = parse_lambda_grid(c.lambda);
  std::vector<OscResult> sweep = lambda_sweep(p, f, chi, lambdas, make_quadrature(c));
  if (c.certify) {
    const NewtonPolyhedron n = build_polyhedron(reduce_phase(p));
    const ExponentQuery q = ExponentQuery::parse(c.p, d);
    for (auto& r : sweep) r.certificate = certificate(n, q, f, chi, r.lambda, CertificateOptions{c.certificate_c});
  }
  Json cfg = phase_config(c, d);
  Json fs = Json::array();
  for (const auto& fn : f) fs.push_back(fn.describe());
  cfg.update(Json{{"f", fs}, {"cutoff", chi.describe()}, {"lambda", c.lambda}, {"rel_tol", c.rel_tol},
                  {"phase_step", c.phase_step}, {"boxes", c.boxes}, {"certify", c.certify}});
  if (c.certify) cfg.update(Json{{"p", c.p}, {"certificate_c", c.certificate_c}});
  Json j = base_report("integrate", cfg);
  Json results = Json::array();
  std::size_t low = 0;
  bool certified = true;
  for (const auto& r : sweep) {
    results.push_back(osc_result_json(r));
    low += r.low_confidence ? 1 : 0;
    if (r.certificate) certified = certified && std::abs(r.value) <= *r.certificate;
  }
  j["results"] = results;
  j["summary"] = Json{{"points", sweep.size()}, {"low_confidence", low}};
  if (c.certify) j["summary"]["certificate_dominates"] = certified;
  emit(c, j, out);
  emit_csv(c, sweep, {});
  return certified ? 0 : 1;
}

int cmd_dual(const RunConfig& c, std::ostream& out) {
  const std::size_t d = dimension_of(c);
  const PhasePolynomial p = reduce_phase(parse_phase(c.phase, d));
  const NewtonPolyhedron n = build_polyhedron(p);
  const DualPolyhedron dual = dual_polyhedron(n);
  const bool equal = dual_polyhedron(dual).vertices() == n.vertices();
  Json j = base_report("dual", phase_config(c, d));
  j["polyhedron"] = polyhedron_json(n);
  j["dual"] = polyhedron_json(dual);
  j["double_dual_equal"] = equal;
  emit(c, j, out);
  return equal ? 0 : 1;
}

RationalVector weights_for(const RunConfig& c, std::size_t d) {
  if (c.z.empty()) return ExponentQuery::parse(c.p, d).inverse_conjugates();
  RationalVector z;
  for (const auto& s : split(c.z, ',')) z.push_back(parse_rational(s));
  if (z.size() == 1) z.assign(d, z.front());
  if (z.size() != d) throw std::invalid_argument("--z needs one weight per coordinate");
  return z;
}

int cmd_sum_oracle(const RunConfig& c, std::ostream& out) {
  const std::size_t d = dimension_of(c);
  const PhasePolynomial p = reduce_phase(parse_phase(c.phase, d));
  const NewtonPolyhedron n = build_polyhedron(p);
  const RationalVector z = weights_for(c, d);
  const SummationResult s = summation_oracle(n, z, parse_lambda_grid(c.lambda), c.summation_factor);
  Json cfg = phase_config(c, d);
  cfg.update(Json{{"z", rational_vector_json(z)}, {"lambda", c.lambda}, {"factor", c.summation_factor}});
  Json j = base_report("sum-oracle", cfg);
  j["summation"] = summation_json(s);
  emit(c, j, out);
  return s.pass ? 0 : 1;
}

int cmd_verify(const RunConfig& c, std::ostream& out) {
  const std::size_t d = dimension_of(c);
  const PhasePolynomial full = parse_phase(c.phase, d);
  const PhasePolynomial p = reduce_phase(full);
  const NewtonPolyhedron n = build_polyhedron(p);
  const ExponentQuery q = ExponentQuery::parse(c.p, d);
  const ExponentReport ex = sharp_exponent(n, q);
  const ExponentReport var = varchenko_exponent(n);
  const std::vector<double> lambdas = parse_lambda_grid(c.lambda);
  const QuadratureOptions qopt = make_quadrature(c);

  Json cfg = phase_config(c, d);
  cfg.update(Json{{"p", c.p},           {"lambda", c.lambda},       {"eps0", c.eps0},
                  {"jmax", c.jmax},     {"grid", c.grid},           {"vgrid", c.vgrid},
                  {"eta", c.eta},       {"max_depth", c.max_depth}, {"zero_tol", c.zero_tol},
                  {"all_orthants", c.all_orthants}, {"k_min", c.k_min}, {"rel_tol", c.rel_tol},
                  {"phase_step", c.phase_step}, {"fit_tol", c.fit_tol}, {"certificate_c", c.certificate_c},
                  {"sharpness_cap", c.sharpness_cap}, {"summation_factor", c.summation_factor},
                  {"seed", c.seed}});
  Json j = base_report("verify", cfg);
  Json verdicts = Json::array();

  j["polyhedron"] = polyhedron_json(n);
  j["exponent"] = exponent_json(ex, q);
  j["exponent"]["varchenko"] = exponent_json(var, ExponentQuery::all_infinite(d));

  const NondegeneracyReport nd = check_condition_v(p, n, make_nondegeneracy(c));
  const auto boxes = box_family(d, jmin_for_scale(c.eps0), c.jmax);
  const KeyLemmaResult kl = verify_key_lemma(p, n, boxes, c.vgrid, c.k_min);
  const UpperLemmaResult ul = verify_upper_lemma(p, n, boxes, c.vgrid);
  j["nondegeneracy"] = nondegeneracy_json(nd);
  j["nondegeneracy"]["key_lemma"] = key_lemma_json(kl);
  j["nondegeneracy"]["upper_lemma"] = upper_lemma_json(ul);
  verdicts.push_back(verdict("nondegeneracy",
                             nd.verdict == Verdict::nondegenerate ? "PASS"
                             : nd.verdict == Verdict::degenerate  ? "FAIL"
                                                                  : "INCONCLUSIVE",
                             to_string(nd.verdict)));
  verdicts.push_back(verdict("key_lemma", kl.pass ? "PASS" : "FAIL", "K_hat=" + fmt(kl.k_hat)));
  verdicts.push_back(verdict("upper_lemma", ul.finite ? "PASS" : "FAIL", "K'_hat=" + fmt(ul.k_prime_hat)));

  std::vector<OscResult> sweep = varchenko_sweep(full, lambdas, qopt);
  const TestFunctionSpec ones(d, TestFunction::constant(1.0));
  CutoffSpec chi_plus;
  chi_plus.orthant = true;
  bool dominated = true;
  for (auto& r : sweep) {
    r.certificate = certificate(n, ExponentQuery::all_infinite(d), ones, chi_plus, r.lambda,
                                CertificateOptions{c.certificate_c});
    dominated = dominated && std::abs(r.value) <= *r.certificate;
  }
  Json sweep_json = Json::array();
  for (const auto& r : sweep) sweep_json.push_back(osc_result_json(r));
  j["sweep"] = sweep_json;

  std::vector<double> envelope;
  if (!sweep.empty()) {
    const double l0 = sweep.front().lambda, a0 = std::abs(sweep.front().value);
    for (const auto& r : sweep) {
      envelope.push_back(a0 * std::pow(r.lambda / l0, -1.0 / to_double(var.nu)) *
                         std::pow(std::log(2.0 + r.lambda) / std::log(2.0 + l0), var.m));
    }
  }
  try {
    const DecayFit fit = fit_decay(sweep, var, c.fit_tol);
    j["decay_fit"] = decay_fit_json(fit);
    verdicts.push_back(verdict("decay_fit", fit.pass ? "PASS" : "FAIL", "|1/nu_fit - 1/nu| = " + fmt(fit.deviation)));
  } catch (const PreconditionError& e) {
    j["decay_fit"] = Json{{"error", e.what()}};
    verdicts.push_back(verdict("decay_fit", "FAIL", e.what()));
  }
  verdicts.push_back(verdict("certificate", dominated ? "PASS" : "FAIL", "C=" + fmt(c.certificate_c)));

  const DualPolyhedron dual = dual_polyhedron(n);
  Json sharp = Json::array();
  bool sharp_pass = true;
  const std::size_t count = std::min(dual.vertices().size(), static_cast<std::size_t>(std::max(0, c.sharpness_cap)));
  for (std::size_t i = 0; i < count; ++i) {
    const SharpnessWitness s = sharpness_test(p, n, q, dual.vertices()[i], lambdas, 0.25, qopt);
    sharp.push_back(sharpness_json(s));
    sharp_pass = sharp_pass && s.pass;
  }
  j["sharpness"] = sharp;
  verdicts.push_back(verdict("sharpness", sharp_pass ? "PASS" : "FAIL",
                             std::to_string(count) + " of " + std::to_string(dual.vertices().size()) + " dual vertices"));

  std::vector<double> sum_lambdas;
  for (double l : lambdas) {
    if (l >= 2.0) sum_lambdas.push_back(l);
  }
  const SummationResult s = summation_oracle(n, q.inverse_conjugates(), sum_lambdas, c.summation_factor);
  j["summation"] = summation_json(s);
  verdicts.push_back(verdict("summation",
                             s.status == SummationStatus::refused ? "SKIP"
                             : s.pass                             ? "PASS"
                                                                  : "FAIL",
                             s.status == SummationStatus::refused ? "nu <= 2" : "spread=" + fmt(s.spread)));
  j["verdicts"] = verdicts;
  bool ok = true;
  for (const auto& v : verdicts) ok = ok && (v["status"] == "PASS" || v["status"] == "SKIP");
  j["pass"] = ok;
  emit(c, j, out);
  emit_csv(c, sweep, envelope);
  return ok ? 0 : 1;
}

void add_phase(CLI::App* sub, RunConfig& c) {
  sub->add_option("--phase", c.phase, "Polynomial phase, e.g. \"x1^2*x2^2 + x1^5*x2\"")->required();
  sub->add_option("--dim", c.dim, "Ambient dimension (default: largest variable index, at least 2)");
  sub->add_option("--out", c.out, "Write the JSON report here instead of stdout");
  sub->add_option("--config", c.config, "Read key = value options from a file (flags take precedence)")
      ->check(CLI::ExistingFile);
}

void add_nondegeneracy(CLI::App* sub, RunConfig& c) {
  sub->add_option("--eps0", c.eps0, "Largest box scale");
  sub->add_option("--jmax", c.jmax, "Largest dyadic exponent of the box family");
  sub->add_option("--grid", c.grid, "Cells per log-axis in the nondegeneracy search");
  sub->add_option("--vgrid", c.vgrid, "Grid points per axis for V-norm and upper-bound sweeps");
  sub->add_option("--eta", c.eta, "Smallest |x_k| searched");
  sub->add_option("--max-depth", c.max_depth, "Subdivision levels for certification");
  sub->add_option("--zero-tol", c.zero_tol, "Degeneracy tolerance");
  sub->add_flag("--all-orthants", c.all_orthants, "Search every orthant, not only the positive one");
  sub->add_option("--kmin", c.k_min, "Lower-bound threshold for the key-lemma sweep");
  sub->add_option("--seed", c.seed, "Seed for random restarts");
}

void add_quadrature(CLI::App* sub, RunConfig& c) {
  sub->add_option("--lambda,--sweep", c.lambda, "Lambda grid: geom:lo:hi:n or a comma list");
  sub->add_option("--rel-tol", c.rel_tol, "Relative tolerance of outer panels");
  sub->add_option("--phase-step", c.phase_step, "Radians of phase per inner panel");
  sub->add_option("--csv", c.csv, "Write the sweep as CSV");
}

}  // namespace

TestFunctionSpec parse_test_functions(std::string_view text, std::size_t d) {
  TestFunctionSpec f;
  for (const auto& item : split(text, ',')) f.push_back(parse_one_function(item));
  if (f.size() == 1 && d > 1) f.assign(d, f.front());
  if (f.size() != d) throw std::invalid_argument("expected " + std::to_string(d) + " test functions");
  return f;
}

std::vector<double> parse_lambda_grid(std::string_view text) {
  if (text.rfind("geom:", 0) == 0) {
    const auto parts = split(text.substr(5), ':');
    if (parts.size() != 3) throw std::invalid_argument("geometric grid is geom:lo:hi:n");
    const double n = parse_number(parts[2]);
    if (n < 1 || n != std::floor(n)) throw std::invalid_argument("grid size must be a positive integer");
    return geometric_grid(parse_number(parts[0]), parse_number(parts[1]), static_cast<int>(n));
  }
  std::vector<double> out;
  if (text.empty()) return out;
  for (const auto& s : split(text, ',')) out.push_back(parse_number(s));
  return out;
}

namespace {

bool is_boolean_flag(const std::string& key) { return key == "orthant" || key == "boxes" || key == "certify"; }

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

// Splices "key = value" lines of the --config file in front of the command-line flags; keys given on
// the command line win. Blank lines, '#' comments and [section] headers are skipped.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::string path;
  std::size_t at = args.size();
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      at = i;
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      at = i;
    }
  }
  std::ifstream in(path);
  if (path.empty() || !in) return args;
  const auto given = [&](const std::string& key) {
    return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == "--" + key || a.rfind("--" + key + "=", 0) == 0;
    });
  };
  std::vector<std::string> injected;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';' || line[0] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw CLI::ConversionError("config line without '=': " + line);
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    }
    if (key.empty() || key == "config" || given(key)) continue;
    if (is_boolean_flag(key)) {
      if (value == "true" || value == "1") injected.push_back("--" + key);
      continue;
    }
    injected.push_back("--" + key);
    injected.push_back(value);
  }
  std::vector<std::string> out(args.begin(), args.begin() + static_cast<std::ptrdiff_t>(at));
  out.insert(out.end(), injected.begin(), injected.end());
  out.insert(out.end(), args.begin() + static_cast<std::ptrdiff_t>(at), args.end());
  return out;
}

}  // namespace

std::size_t infer_dimension(std::string_view phase) {
  std::size_t d = 2;
  const std::string s(phase);
  const std::regex var("x([0-9]+)");
  for (auto it = std::sregex_iterator(s.begin(), s.end(), var); it != std::sregex_iterator(); ++it) {
    d = std::max<std::size_t>(d, std::stoul((*it)[1].str()));
  }
  return d;
}

int run_subcommand(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Decay exponents of multilinear oscillatory forms from Newton polyhedra", "newtonosc"};
  app.require_subcommand(1);

  auto* poly = app.add_subcommand("polyhedron", "Vertices, facets and compact faces of the Newton polyhedron");
  add_phase(poly, c);

  auto* expo = app.add_subcommand("exponent", "Sharp exponent (nu, m) for Lebesgue exponents p");
  add_phase(expo, c);
  expo->add_option("--p", c.p, "Comma list of exponents in [2, inf], or inf");

  auto* check = app.add_subcommand("check", "Nondegeneracy of face polynomials and box-lemma sweeps");
  add_phase(check, c);
  add_nondegeneracy(check, c);
  check->add_option("--csv", c.csv, "Write per-box V-norm ratios as CSV");

  auto* integ = app.add_subcommand("integrate", "Evaluate the oscillatory form over a lambda grid");
  add_phase(integ, c);
  add_quadrature(integ, c);
  integ->add_option("--f", c.f, "Test functions");
  integ->add_option("--cutoff", c.cutoff, "bump or plateau");
  integ->add_option("--radius", c.radius, "Cutoff radius");
  integ->add_option("--plateau", c.plateau, "Plateau fraction of the radius");
  integ->add_flag("--orthant", c.orthant, "Restrict the cutoff to the first orthant");
  integ->add_flag("--boxes", c.boxes, "Report per-box contributions");
  integ->add_flag("--certify", c.certify, "Attach the summed single-box bound");
  integ->add_option("--p", c.p, "Lebesgue exponents for the certificate");
  integ->add_option("--C", c.certificate_c, "Certificate constant");

  auto* ver = app.add_subcommand("verify", "Full pipeline: geometry, exponent, nondegeneracy, decay, sharpness");
  add_phase(ver, c);
  add_nondegeneracy(ver, c);
  add_quadrature(ver, c);
  ver->add_option("--p", c.p, "Comma list of exponents in [2, inf], or inf");
  ver->add_option("--fit-tol", c.fit_tol, "Tolerance on 1/nu");
  ver->add_option("--C", c.certificate_c, "Certificate constant");
  ver->add_option("--sharpness-cap", c.sharpness_cap, "Dual vertices tested for sharpness");
  ver->add_option("--factor", c.summation_factor, "Allowed max/min spread of the summation ratio");

  auto* dual = app.add_subcommand("dual", "Dual polyhedron and the double-dual check");
  add_phase(dual, c);

  auto* sum = app.add_subcommand("sum-oracle", "Brute-force dyadic summation against its predicted rate");
  add_phase(sum, c);
  sum->add_option("--z", c.z, "Positive weights (default 1/p')");
  sum->add_option("--p", c.p, "Lebesgue exponents used when --z is absent");
  sum->add_option("--lambda", c.lambda, "Lambda grid")->default_str("geom:2^4:2^24:11");
  sum->add_option("--factor", c.summation_factor, "Allowed max/min spread");

  try {
    const auto expanded = expand_config(args);
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    if (std::find(args.begin(), args.end(), "sum-oracle") != args.end()) c.lambda = "geom:2^4:2^24:11";
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    for (auto* s : app.get_subcommands()) out << s->help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << kPhaseGrammar;
    return 2;
  }

  try {
    if (poly->parsed()) return cmd_polyhedron(c, out);
    if (expo->parsed()) return cmd_exponent(c, out);
    if (check->parsed()) return cmd_check(c, out);
    if (integ->parsed()) return cmd_integrate(c, out);
    if (ver->parsed()) return cmd_verify(c, out);
    if (dual->parsed()) return cmd_dual(c, out);
    if (sum->parsed()) return cmd_sum_oracle(c, out);
  } catch (const ParseError& e) {
    err << "usage error: " << e.what() << "\n" << kPhaseGrammar;
    return 2;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n" << kPhaseGrammar;
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace newtonosc::cli
