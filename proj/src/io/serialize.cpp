#include "logistat/io/serialize.hpp"

#include <fstream>
#include <sstream>

#include "logistat/errors.hpp"

namespace logistat::io {

namespace {

const std::string& need_string(const Json& j, const char* what) {
  if (!j.is_string()) fail(ErrorKind::InvalidInput, std::string(what) + " must be an exact string");
  return j.get_ref<const std::string&>();
}

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::InvalidInput, std::string("missing field '") + key + "'");
  return j.at(key);
}

void check_schema(const Json& j, const char* schema) {
  if (j.contains("schema") && j.at("schema") != schema)
    fail(ErrorKind::InvalidInput, std::string("expected schema ") + schema);
  if (j.contains("version") && j.at("version") != kSchemaVersion)
    fail(ErrorKind::InvalidInput, "unsupported schema version");
}

Json header(const char* schema) {
  Json j;
  j["schema"] = schema;
  j["version"] = kSchemaVersion;
  return j;
}

template <class T, class F>
Json array_of(const std::vector<T>& xs, F f) {
  Json a = Json::array();
  for (const auto& x : xs) a.push_back(f(x));
  return a;
}

Json intervals(const std::vector<DyadicInterval>& xs) {
  return array_of(xs, [](const DyadicInterval& x) { return to_json(x); });
}

}  // namespace

DyadicRational parse_dyadic(const std::string& s) {
  Rational q = parse_rational(s);
  const mpz_class& d = q.get_den();
  if (mpz_popcount(d.get_mpz_t()) != 1) fail(ErrorKind::InvalidInput, "'" + s + "' is not a dyadic rational");
  return DyadicRational(q.get_num(), mpz_sizeinbase(d.get_mpz_t(), 2) - 1);
}

Json to_json(const DyadicRational& x) { return x.to_decimal(); }
Json to_json(const Rational& q) { return to_string(q); }
Json to_json(const DyadicInterval& x) { return Json{{"lo", to_json(x.lo)}, {"hi", to_json(x.hi)}}; }

DyadicRational dyadic_from_json(const Json& j) { return parse_dyadic(need_string(j, "dyadic")); }
Rational rational_from_json(const Json& j) { return parse_rational(need_string(j, "rational")); }
DyadicInterval interval_from_json(const Json& j) {
  if (j.is_string()) return DyadicInterval::point(dyadic_from_json(j));
  DyadicInterval x{dyadic_from_json(field(j, "lo")), dyadic_from_json(field(j, "hi"))};
  return x;
}

Json to_json(const DiscreteMeasure& mu) {
  Json j = header("logistat.measure");
  j["denominator"] = std::to_string(mu.denominator());
  Json atoms = Json::array();
  for (std::size_t i = 0; i < mu.size(); ++i)
    atoms.push_back(Json{{"x", to_json(mu.atoms()[i].x)}, {"w", to_json(mu.weight(i))}});
  j["atoms"] = std::move(atoms);
  Json meta = Json::object();
  for (const auto& [k, v] : mu.meta) meta[k] = v;
  j["meta"] = std::move(meta);
  return j;
}

DiscreteMeasure measure_from_json(const Json& j) {
  check_schema(j, "logistat.measure");
  const Json& atoms = field(j, "atoms");
  if (!atoms.is_array() || atoms.empty()) fail(ErrorKind::InvalidInput, "measure needs a non-empty atom list");
  std::vector<std::pair<DyadicRational, Rational>> xs;
  for (const auto& a : atoms) xs.emplace_back(dyadic_from_json(field(a, "x")), rational_from_json(field(a, "w")));
  DiscreteMeasure mu = DiscreteMeasure::from_weights(xs);
  if (j.contains("meta"))
    for (const auto& [k, v] : j.at("meta").items()) mu.meta[k] = v.is_string() ? v.get<std::string>() : v.dump();
  return mu;
}

std::string measure_csv(const DiscreteMeasure& mu) {
  std::string out = "x,w\n";
  for (std::size_t i = 0; i < mu.size(); ++i) out += mu.atoms()[i].x.to_decimal() + "," + to_string(mu.weight(i)) + "\n";
  return out;
}

Json to_json(const TestFunction& tau) {
  Json j = header("logistat.tau");
  j["scheme"] = kTauScheme;
  Json bps = Json::array();
  for (const auto& [x, y] : tau.breakpoints()) bps.push_back(Json::array({to_json(x), to_json(y)}));
  j["breakpoints"] = std::move(bps);
  return j;
}

TestFunction tau_from_json(const Json& j) {
  check_schema(j, "logistat.tau");
  std::vector<TestFunction::Breakpoint> bps;
  for (const auto& b : field(j, "breakpoints")) {
    if (!b.is_array() || b.size() != 2) fail(ErrorKind::InvalidInput, "breakpoint must be a pair");
    bps.emplace_back(rational_from_json(b[0]), rational_from_json(b[1]));
  }
  return TestFunction(std::move(bps));
}

Json to_json(const PeriodicOrbit& orb) {
  Json j = header("logistat.orbit");
  j["n"] = orb.n;
  j["word"] = orb.word.str();
  j["g_points"] = intervals(orb.g_points);
  j["f_points"] = intervals(orb.f_points);
  return j;
}

Json to_json(const Stage& st) {
  Json j = header("logistat.stage");
  j["a"] = to_json(st.a);
  j["beta_prime"] = to_json(st.beta_prime);
  j["beta"] = to_json(st.beta);
  j["l"] = to_json(st.l);
  j["r"] = to_json(st.r);
  j["bits"] = st.bits;
  return j;
}

Json to_json(const TipCertificate& c) {
  Json j = header("logistat.tip");
  j["c"] = to_json(c.c);
  j["g1"] = to_json(c.g1);
  j["g2"] = to_json(c.g2);
  j["g3"] = to_json(c.g3);
  j["residual"] = to_json(c.residual);
  j["separated"] = c.separated;
  j["fold"] = c.fold;
  return j;
}

Json to_json(const SinkCertificate& c) {
  Json j = header("logistat.sink");
  j["a"] = to_json(c.a);
  j["sample_parameter"] = to_json(c.sample_parameter);
  j["period"] = c.period();
  j["orbit"] = intervals(c.orbit);
  j["multiplier"] = to_json(c.multiplier);
  j["sink_measure"] = to_json(c.sink_measure);
  j["basin_tolerance"] = to_json(c.basin_tolerance);
  j["basin_converged"] = c.converged;
  Json basin = Json::array();
  for (const auto& s : c.basin) {
    Json w = Json::array();
    for (const auto& [n, d] : s.w1) w.push_back(Json{{"n", n}, {"w1", to_json(d)}});
    basin.push_back(Json{{"x", to_json(s.x)}, {"converged", s.converged}, {"monotone", s.monotone}, {"w1", std::move(w)}});
  }
  j["basin"] = std::move(basin);
  return j;
}

Json to_json(const TargetProfile& p) {
  Json j = header("logistat.profile");
  Json e = Json::array();
  for (const auto& x : p.entries) e.push_back(Json{{"orbit", x.orbit}, {"weight", to_json(x.weight)}, {"slack", x.slack}});
  j["entries"] = std::move(e);
  j["tolerance"] = to_json(p.tolerance);
  j["w1_tolerance"] = to_json(p.w1_tolerance);
  return j;
}

TargetProfile profile_from_json(const Json& j) {
  check_schema(j, "logistat.profile");
  TargetProfile p;
  for (const auto& e : field(j, "entries"))
    p.entries.push_back({field(e, "orbit").get<std::size_t>(), rational_from_json(field(e, "weight")),
                         e.value("slack", false)});
  p.tolerance = rational_from_json(field(j, "tolerance"));
  if (j.contains("w1_tolerance")) p.w1_tolerance = rational_from_json(j.at("w1_tolerance"));
  p.validate();
  return p;
}

Json to_json(const TuneOptions& o) {
  Json j;
  j["bits"] = o.bits;
  j["radius"] = to_json(o.radius);
  j["stage_bits"] = o.stage_bits;
  j["max_corrections"] = o.max_corrections;
  j["candidates"] = o.candidates;
  j["entry_letters"] = o.entry_letters;
  j["avoid"] = intervals(o.avoid);
  j["outside_check"] = o.outside_check;
  return j;
}

Json to_json(const TunedParameter& t) {
  Json j = header("logistat.tuned");
  j["a_star"] = to_json(t.a_star);
  j["stage_length"] = t.stage_length;
  Json s = Json::array();
  for (const auto& d : t.schedule) s.push_back(Json{{"orbit", d.orbit}, {"length", d.length}});
  j["schedule"] = std::move(s);
  j["residual"] = to_json(t.residual);
  Json m = Json::array();
  for (const auto& x : t.masses)
    m.push_back(Json{{"orbit", x.orbit}, {"target", to_json(x.target)}, {"achieved", to_json(x.achieved)}, {"slack", x.slack}});
  j["masses"] = std::move(m);
  j["radius"] = to_json(t.radius);
  j["kneading"] = t.kneading;
  j["entry_length"] = t.entry_length;
  j["reference"] = to_json(t.reference);
  j["closure_residual"] = to_json(t.closure_residual);
  j["multiplier"] = to_json(t.multiplier);
  j["corrections"] = t.corrections;
  j["achieved"] = to_json(t.achieved);
  return j;
}

TunedParameter tuned_from_json(const Json& j) {
  check_schema(j, "logistat.tuned");
  TunedParameter t;
  t.a_star = interval_from_json(field(j, "a_star"));
  t.stage_length = field(j, "stage_length").get<std::size_t>();
  for (const auto& d : field(j, "schedule"))
    t.schedule.push_back({field(d, "orbit").get<std::size_t>(), field(d, "length").get<std::size_t>()});
  t.residual = rational_from_json(field(j, "residual"));
  for (const auto& x : field(j, "masses"))
    t.masses.push_back({field(x, "orbit").get<std::size_t>(), rational_from_json(field(x, "target")),
                        rational_from_json(field(x, "achieved")), x.value("slack", false)});
  t.radius = rational_from_json(field(j, "radius"));
  t.kneading = field(j, "kneading").get<std::string>();
  t.entry_length = field(j, "entry_length").get<std::size_t>();
  t.reference = dyadic_from_json(field(j, "reference"));
  t.closure_residual = interval_from_json(field(j, "closure_residual"));
  t.multiplier = interval_from_json(field(j, "multiplier"));
  t.corrections = field(j, "corrections").get<unsigned>();
  t.achieved = measure_from_json(field(j, "achieved"));
  return t;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidInput, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return Json::parse(ss.str());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, path + ": " + e.what());
  }
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::InvalidInput, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorKind::InvalidInput, "write failed for " + path);
}

std::string dump(const Json& j) { return j.dump(1) + "\n"; }

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string s(16, '0');
  for (int i = 15; i >= 0; --i, v >>= 4) s[static_cast<std::size_t>(i)] = digits[v & 15];
  return s;
}

}  // namespace logistat::io
