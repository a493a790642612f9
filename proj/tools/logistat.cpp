// logistat: command-line front end. Every artifact is JSON (or CSV where a table makes sense)
// with the resolved run configuration echoed in; wall-clock data goes to a sidecar file only.

#include <chrono>
#include <ctime>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "logistat/dynamics/periodic.hpp"
#include "logistat/dynamics/stage.hpp"
#include "logistat/errors.hpp"
#include "logistat/game/game.hpp"
#include "logistat/io/cache.hpp"
#include "logistat/io/serialize.hpp"
#include "logistat/measures/empirical.hpp"
#include "logistat/measures/separating.hpp"
#include "logistat/measures/w1.hpp"
#include "logistat/numerics/enclosure.hpp"
#include "logistat/sink/sink.hpp"

using namespace logistat;
using io::Json;

namespace {

struct Global {
  std::uint64_t bits = 64;
  std::uint64_t seed = 0;
  std::string cache_dir;
  std::string out;
  std::string format = "json";
};

// named sub-stream of the run seed
std::uint64_t stream(const Global& g, const std::string& name) { return splitmix64(g.seed ^ io::fnv1a64(name)); }

DyadicInterval number(const std::string& s, std::uint64_t bits) {
  const Rational q = parse_rational(s);
  return DyadicInterval::around(q, bits);
}

DyadicRational dyadic(const std::string& s, std::uint64_t bits) {
  return DyadicRational::floor_at(parse_rational(s), bits);
}

DyadicInterval window(const std::string& s, std::uint64_t bits) {
  const auto comma = s.find(',');
  if (comma == std::string::npos) fail(ErrorKind::InvalidInput, "window must be lo,hi");
  const DyadicInterval lo = number(s.substr(0, comma), bits), hi = number(s.substr(comma + 1), bits);
  if (!(lo.lo < hi.hi)) fail(ErrorKind::InvalidInput, "window must have lo < hi");
  return {lo.lo, hi.hi};
}

DyadicInterval default_bracket() {
  const DyadicInterval c = find_tip_c(40);
  return {c.hi, DyadicRational(4)};
}

// "1:1/2,3:1/2" with an optional ":slack" suffix per entry
TargetProfile parse_profile(const std::string& s, const std::string& tol, const std::string& w1_tol) {
  TargetProfile p;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::vector<std::string> parts;
    std::stringstream is(item);
    std::string part;
    while (std::getline(is, part, ':')) parts.push_back(part);
    if (parts.size() < 2 || parts.size() > 3 || (parts.size() == 3 && parts[2] != "slack"))
      fail(ErrorKind::InvalidInput, "profile entry '" + item + "' must be orbit:weight[:slack]");
    std::size_t orbit = 0;
    try {
      orbit = std::stoul(parts[0]);
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidInput, "bad orbit index '" + parts[0] + "'");
    }
    p.entries.push_back({orbit, parse_rational(parts[1]), parts.size() == 3});
  }
  p.tolerance = parse_rational(tol);
  if (!w1_tol.empty()) p.w1_tolerance = parse_rational(w1_tol);
  p.validate();
  return p;
}

// "birkhoff:bits=48,seeds=8" -> {"name": "birkhoff", "bits": 48, ...}
Json parse_opponent(const std::string& s, std::uint64_t default_seed) {
  const auto colon = s.find(':');
  Json j{{"name", s.substr(0, colon)}};
  if (colon != std::string::npos) {
    std::stringstream ss(s.substr(colon + 1));
    std::string kv;
    while (std::getline(ss, kv, ',')) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) fail(ErrorKind::InvalidInput, "opponent option '" + kv + "' must be key=value");
      const std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
      if (key == "q") {
        j[key] = io::to_json(parse_rational(val));
      } else {
        try {
          j[key] = std::stoull(val);
        } catch (const std::exception&) {
          fail(ErrorKind::InvalidInput, "opponent option '" + key + "' must be an integer");
        }
      }
    }
  }
  if (j["name"] != "constant" && !j.contains("seed")) j["seed"] = default_seed;
  return j;
}

class Run {
 public:
  explicit Run(const Global& g) : g_(g) {}

  Json config(const std::string& command, Json params) const {
    Json c;
    c["command"] = command;
    c["bits"] = g_.bits;
    c["seed"] = g_.seed;
    c["format"] = g_.format;
    c["params"] = std::move(params);
    return c;
  }

  void emit_json(const std::string& kind, const Json& config, Json result) const {
    Json j;
    j["schema"] = "logistat." + kind;
    j["version"] = io::kSchemaVersion;
    j["config"] = config;
    j["result"] = std::move(result);
    write(io::dump(j));
  }

  void emit(const std::string& kind, const Json& config, Json result, const std::string& csv) const {
    if (g_.format == "csv") {
      if (csv.empty()) fail(ErrorKind::InvalidInput, "csv output is not available for " + kind);
      write(csv);
    } else {
      emit_json(kind, config, std::move(result));
    }
  }

  void write(const std::string& text) const {
    if (g_.out.empty()) {
      std::cout << text;
      return;
    }
    io::write_text_file(g_.out, text);
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    Json meta{{"artifact", g_.out}, {"timestamp", stamp}, {"cache_dir", g_.cache_dir}};
    io::write_text_file(g_.out + ".meta.json", io::dump(meta));
  }

 private:
  const Global& g_;
};

std::string orbit_csv(const std::vector<DyadicInterval>& xs) {
  std::string s = "k,lo,hi,width\n";
  for (std::size_t k = 1; k < xs.size(); ++k)
    s += std::to_string(k) + "," + xs[k].lo.to_decimal() + "," + xs[k].hi.to_decimal() + "," +
         xs[k].width().to_decimal() + "\n";
  return s;
}

const Json& unwrap(const Json& j) { return j.contains("result") && j.contains("config") ? j.at("result") : j; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"logistat: certified experiments with the logistic family"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_option("--bits", g.bits, "working precision in bits")->envname("LOGISTAT_BITS");
  app.add_option("--seed", g.seed, "run seed; every random stream derives from it")->envname("LOGISTAT_SEED");
  app.add_option("--cache-dir", g.cache_dir, "tuned-parameter cache")->envname("LOGISTAT_CACHE_DIR");
  app.add_option("--out", g.out, "output file (stdout when absent)")->envname("LOGISTAT_OUT");
  app.add_option("--format", g.format, "json or csv")
      ->envname("LOGISTAT_FORMAT")
      ->check(CLI::IsMember({"json", "csv"}));
  Run run(g);
  int status = 0;

  // orbit
  std::string a_s = "4", x_s = "0.5";
  std::uint64_t n = 10;
  auto* orbit = app.add_subcommand("orbit", "certified iterates x_1..x_n");
  orbit->add_option("--a", a_s, "parameter")->required();
  orbit->add_option("--x0", x_s, "starting point")->required();
  orbit->add_option("--n", n, "number of iterates")->required();
  orbit->callback([&] {
    const auto xs = orbit_enclosures(number(a_s, g.bits + 64), number(x_s, g.bits + 64), n, g.bits + 64);
    Json rows = Json::array();
    for (std::size_t k = 1; k < xs.size(); ++k)
      rows.push_back(Json{{"k", k}, {"x", io::to_json(xs[k])}, {"width", io::to_json(xs[k].width())}});
    run.emit("orbit", run.config("orbit", {{"a", a_s}, {"x0", x_s}, {"n", n}}), Json{{"iterates", rows}},
             orbit_csv(xs));
  });

  // measure birkhoff | mc
  auto* measure = app.add_subcommand("measure", "empirical measures");
  measure->require_subcommand(1);
  std::uint64_t k = 100;
  auto* birk = measure->add_subcommand("birkhoff", "certified Birkhoff measure along one orbit");
  birk->add_option("--a", a_s)->required();
  birk->add_option("--x0", x_s)->required();
  birk->add_option("--n", n)->required();
  birk->callback([&] {
    BirkhoffOptions o;
    o.store_bits = g.bits;
    const auto mu = birkhoff_measure(RealSource(parse_rational(a_s)), RealSource(parse_rational(x_s)), n, o);
    run.emit("measure", run.config("measure birkhoff", {{"a", a_s}, {"x0", x_s}, {"n", n}}), io::to_json(mu),
             io::measure_csv(mu));
  });
  auto* mc = measure->add_subcommand("mc", "binary64 Monte Carlo ensemble");
  mc->add_option("--a", a_s)->required();
  mc->add_option("--k", k, "starting points")->required();
  mc->add_option("--n", n, "iterates per start")->required();
  mc->callback([&] {
    const DyadicRational a = dyadic(a_s, 52);
    const std::uint64_t s = stream(g, "mc");
    const auto mu = monte_carlo_measure(a, k, n, s);
    run.emit("measure",
             run.config("measure mc", {{"a", a_s}, {"a_used", io::to_json(a)}, {"k", k}, {"n", n}, {"stream_seed", s}}),
             io::to_json(mu), io::measure_csv(mu));
  });

  // w1
  std::string f1, f2;
  auto* w1c = app.add_subcommand("w1", "Wasserstein-1 distance of two measure files");
  w1c->add_option("first", f1)->required();
  w1c->add_option("second", f2)->required();
  w1c->callback([&] {
    const auto mu = io::measure_from_json(unwrap(io::read_json_file(f1)));
    const auto nu = io::measure_from_json(unwrap(io::read_json_file(f2)));
    const Rational d = w1(mu, nu);
    run.emit("w1", run.config("w1", {{"first", f1}, {"second", f2}}), Json{{"w1", io::to_json(d)}},
             "w1\n" + to_string(d) + "\n");
  });

  // periodic
  std::size_t index = 1;
  auto* periodic = app.add_subcommand("periodic", "certified periodic orbit Per_a(n) of the third-iterate stage");
  periodic->add_option("--a", a_s)->required();
  periodic->add_option("--n", index, "1-based word index")->required();
  periodic->callback([&] {
    const Stage st = solve_stage(DyadicInterval::point(dyadic(a_s, g.bits)), g.bits);
    const auto orb = solve_periodic_orbit(st, index, g.bits);
    const auto lam = orbit_measure(orb, g.bits);
    run.emit("periodic", run.config("periodic", {{"a", a_s}, {"a_used", io::to_json(st.a.lo)}, {"n", index}}),
             Json{{"orbit", io::to_json(orb)}, {"lambda", io::to_json(lam)}}, io::measure_csv(lam));
  });

  auto* stage = app.add_subcommand("stage", "third-iterate stage I = [beta', beta] with branches L and R");
  stage->add_option("--a", a_s)->required();
  stage->callback([&] {
    const Stage st = solve_stage(DyadicInterval::point(dyadic(a_s, g.bits)), g.bits);
    run.emit("stage", run.config("stage", {{"a", a_s}, {"a_used", io::to_json(st.a.lo)}}), io::to_json(st), "");
  });

  auto* tip = app.add_subcommand("tip-c", "tip parameter c with its fold certificate");
  tip->callback([&] {
    const DyadicInterval c = find_tip_c(g.bits);
    const auto cert = certify_tip(c, 2 * g.bits + 64);
    run.emit("tip", run.config("tip-c", Json::object()), io::to_json(cert), "");
  });

  // sink-find
  std::uint64_t period = 1, samples = 0;
  std::string win = "3,4";
  auto* sink = app.add_subcommand("sink-find", "superattracting parameter of a given period, with its sink");
  sink->add_option("--period", period)->required();
  sink->add_option("--window", win, "lo,hi");
  sink->add_option("--samples", samples, "basin samples");
  sink->callback([&] {
    const DyadicInterval a = find_superattracting(window(win, 64), period, g.bits);
    SinkOptions o;
    o.samples = samples;
    o.seed = stream(g, "basin");
    const auto cert = certify_sink(a, DyadicRational(mpz_class(1), 1), g.bits, o);
    run.emit("sink", run.config("sink-find", {{"period", period}, {"window", win}, {"samples", samples}, {"stream_seed", o.seed}}),
             io::to_json(cert), io::measure_csv(cert.sink_measure));
  });

  // tune
  std::string profile_s, tol_s = "1/8", w1_tol_s, bracket_s;
  std::uint64_t frozen = 0, stage_bits = 20;
  auto* tune_c = app.add_subcommand("tune", "tune a superattracting parameter to a target profile");
  tune_c->add_option("--profile", profile_s, "orbit:weight[:slack],...")->required();
  tune_c->add_option("--tol", tol_s, "mass tolerance");
  tune_c->add_option("--w1-tol", w1_tol_s, "W1 tolerance (default: --tol)");
  tune_c->add_option("--bracket", bracket_s, "lo,hi (default: (c, 4])");
  tune_c->add_option("--frozen-bits", frozen, "oracle bits that must not change");
  tune_c->add_option("--stage-bits", stage_bits, "cap of the stage length, log2 of f-steps");
  tune_c->callback([&] {
    const TargetProfile p = parse_profile(profile_s, tol_s, w1_tol_s);
    const DyadicInterval b = bracket_s.empty() ? default_bracket() : window(bracket_s, 64);
    TuneOptions o;
    o.bits = g.bits;
    o.stage_bits = stage_bits;
    std::unique_ptr<io::TuneCache> cache;
    if (!g.cache_dir.empty()) cache = std::make_unique<io::TuneCache>(g.cache_dir);
    const auto t = io::tune_cached(cache.get(), b, p, frozen, o);
    Json result{{"bracket", io::to_json(b)}, {"frozen_bits", frozen}, {"profile", io::to_json(p)},
                {"options", io::to_json(o)}, {"tuned", io::to_json(t)}};
    run.emit("tune",
             run.config("tune", {{"profile", profile_s}, {"tol", tol_s}, {"w1_tol", w1_tol_s}, {"bracket", bracket_s},
                                 {"frozen_bits", frozen}, {"stage_bits", stage_bits}}),
             result, io::measure_csv(t.achieved));
  });

  // game
  std::size_t rounds = 2, max_rounds = 3;
  std::vector<std::string> opponent_s;
  auto* game = app.add_subcommand("game", "finite diagonalization game against plug-in estimators");
  game->add_option("--rounds", rounds);
  game->add_option("--max-rounds", max_rounds);
  game->add_option("--opponent", opponent_s, "name[:key=value,...]; one per round, the last repeats")->required();
  game->add_option("--bracket", bracket_s, "lo,hi (default: (c, 4])");
  game->callback([&] {
    GameConfig cfg;
    cfg.max_rounds = max_rounds;
    cfg.bits = g.bits;
    cfg.cache_dir = g.cache_dir;
    std::vector<std::unique_ptr<Opponent>> owned;
    std::vector<const Opponent*> opps;
    for (std::size_t i = 0; i < rounds; ++i) {
      const std::string& desc = opponent_s[std::min(i, opponent_s.size() - 1)];
      owned.push_back(opponent_from_json(parse_opponent(desc, stream(g, "opponent:" + std::to_string(i + 1)))));
      opps.push_back(owned.back().get());
    }
    const DyadicInterval b = bracket_s.empty() ? default_bracket() : window(bracket_s, 64);
    const auto t = run_game(b, opps, rounds, cfg);
    std::string csv = "n,status,opponent,q,l,case,s,fooling_margin\n";
    for (const auto& r : t.rounds)
      csv += std::to_string(r.n) + "," + r.status + "," + r.opponent + "," + to_string(r.q) + "," +
             std::to_string(r.l) + "," + std::to_string(r.case_) + "," + std::to_string(r.s) + "," +
             to_string(r.fooling_margin) + "\n";
    run.emit("game",
             run.config("game", {{"rounds", rounds}, {"max_rounds", max_rounds}, {"opponents", opponent_s},
                                 {"bracket", bracket_s}}),
             to_json(t), csv);
    if (!t.complete) status = 4;
  });

  // verify
  std::string file;
  auto* verify = app.add_subcommand("verify", "re-check a game transcript or a tuned parameter");
  verify->add_option("file", file)->required();
  verify->callback([&] {
    const Json whole = io::read_json_file(file);
    const Json& j = unwrap(whole);
    Json report;
    std::string csv = "n,verdict,margin\n";
    bool ok = true;
    if (j.value("schema", "") == "logistat.game-transcript") {
      const auto verdicts = verify_transcript(transcript_from_json(j));
      Json rows = Json::array();
      for (const auto& v : verdicts) {
        rows.push_back(Json{{"n", v.n}, {"verdict", v.verdict}, {"margin", io::to_json(v.margin)}, {"failures", v.failures}});
        csv += std::to_string(v.n) + "," + v.verdict + "," + to_string(v.margin) + "\n";
        if (v.verdict == "NOT-FOOLED") ok = false;
      }
      report = Json{{"kind", "game"}, {"rounds", rows}};
    } else if (j.contains("tuned") && j.contains("profile")) {
      const auto t = io::tuned_from_json(j.at("tuned"));
      const auto p = io::profile_from_json(j.at("profile"));
      TuneOptions o;
      o.bits = j.contains("options") ? j.at("options").value("bits", g.bits) : g.bits;
      const auto failures = verify_tuned(t, p, o);
      ok = failures.empty();
      report = Json{{"kind", "tuned"}, {"failures", failures}};
      csv = "verdict\n" + std::string(ok ? "VERIFIED" : "FAILED") + "\n";
    } else {
      fail(ErrorKind::InvalidInput, "not a game transcript or a tune result");
    }
    report["verdict"] = ok ? "VERIFIED" : "FAILED";
    run.emit("verify", run.config("verify", {{"file", file}}), report, csv);
    if (!ok) status = 5;
  });

  // tau enumerate | separating
  auto* tau = app.add_subcommand("tau", "test functions");
  tau->require_subcommand(1);
  std::size_t start = 1, count = 10, target = 1;
  std::vector<std::size_t> avoid;
  auto* tenum = tau->add_subcommand("enumerate", "entries of the countable test-function family");
  tenum->add_option("--start", start, "first 1-based index");
  tenum->add_option("--count", count);
  tenum->callback([&] {
    if (start == 0) fail(ErrorKind::InvalidInput, "indices start at 1");
    Json rows = Json::array();
    std::string csv = "index,key\n";
    for (std::size_t i = start; i < start + count; ++i) {
      const TestFunction f = enumerate_tau(i);
      rows.push_back(Json{{"index", i}, {"tau", io::to_json(f)}});
      csv += std::to_string(i) + ",\"" + f.key() + "\"\n";
    }
    run.emit("tau", run.config("tau enumerate", {{"start", start}, {"count", count}}),
             Json{{"scheme", kTauScheme}, {"functions", rows}}, csv);
  });
  auto* tsep = tau->add_subcommand("separating", "bump function around Per_a(target) avoiding other orbits");
  tsep->add_option("--a", a_s)->required();
  tsep->add_option("--target", target)->required();
  tsep->add_option("--avoid", avoid, "orbit indices")->delimiter(',');
  tsep->callback([&] {
    const Stage st = solve_stage(DyadicInterval::point(dyadic(a_s, g.bits)), g.bits);
    const auto sep = separating_tau(st, target, avoid, g.bits);
    Json centers = Json::array();
    for (const auto& c : sep.centers) centers.push_back(io::to_json(c));
    run.emit("tau",
             run.config("tau separating", {{"a", a_s}, {"a_used", io::to_json(st.a.lo)}, {"target", target}, {"avoid", avoid}}),
             Json{{"scheme", kTauScheme}, {"code", sep.code.get_str()}, {"radius", io::to_json(sep.radius)},
                  {"centers", centers}, {"tau", io::to_json(sep.tau)}},
             "");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const Error& e) {
    std::cerr << "logistat: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "logistat: malformed JSON input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "logistat: " << e.what() << "\n";
    return 2;
  }
  return status;
}
