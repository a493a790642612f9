// Acceptance run: one PASS/FAIL line per criterion. Usage: acceptance [criterion numbers...]

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "logistat/dynamics/periodic.hpp"
#include "logistat/dynamics/stage.hpp"
#include "logistat/dynamics/symbolic.hpp"
#include "logistat/dynamics/words.hpp"
#include "logistat/game/game.hpp"
#include "logistat/measures/empirical.hpp"
#include "logistat/measures/w1.hpp"
#include "logistat/sink/sink.hpp"
#include "logistat/tuner/tuner.hpp"

using namespace logistat;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("FAILED: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream ss;
  ss.precision(6);
  ss << v;
  return ss.str();
}

DyadicInterval window(const char* lo, const char* hi) {
  return {DyadicRational::floor_at(parse_rational(lo), 64), DyadicRational::ceil_at(parse_rational(hi), 64)};
}

const DyadicInterval& tip_bracket() {
  static DyadicInterval b = [] {
    const DyadicInterval c = find_tip_c(40);
    return DyadicInterval{c.hi, DyadicRational(4)};
  }();
  return b;
}

// ---- 1: transport by exact min-cost flow on the complete bipartite graph ----

Rational min_cost_flow(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const std::size_t m = mu.size(), k = nu.size(), N = m + k + 2, S = m + k, T = m + k + 1;
  struct Edge {
    std::size_t to;
    Rational cap, cost;
    std::size_t rev;
  };
  std::vector<std::vector<Edge>> g(N);
  auto add = [&](std::size_t u, std::size_t v, const Rational& cap, const Rational& cost) {
    g[u].push_back({v, cap, cost, g[v].size()});
    g[v].push_back({u, 0, -cost, g[u].size() - 1});
  };
  for (std::size_t i = 0; i < m; ++i) add(S, i, mu.weight(i), 0);
  for (std::size_t j = 0; j < k; ++j) add(m + j, T, nu.weight(j), 0);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      Rational d = mu.atoms()[i].x.to_rational() - nu.atoms()[j].x.to_rational();
      add(i, m + j, 2, d < 0 ? Rational(-d) : d);
    }
  Rational total = 0;
  for (;;) {
    std::vector<bool> reached(N, false);
    std::vector<Rational> dist(N);
    std::vector<std::pair<std::size_t, std::size_t>> via(N);
    reached[S] = true;
    for (std::size_t round = 0; round < N; ++round) {
      bool changed = false;
      for (std::size_t u = 0; u < N; ++u) {
        if (!reached[u]) continue;
        for (std::size_t e = 0; e < g[u].size(); ++e) {
          const Edge& ed = g[u][e];
          if (ed.cap <= 0) continue;
          const Rational nd = dist[u] + ed.cost;
          if (!reached[ed.to] || nd < dist[ed.to]) {
            reached[ed.to] = true;
            dist[ed.to] = nd;
            via[ed.to] = {u, e};
            changed = true;
          }
        }
      }
      if (!changed) break;
    }
    if (!reached[T]) break;
    Rational push = 2;
    for (std::size_t v = T; v != S; v = via[v].first) push = std::min(push, g[via[v].first][via[v].second].cap);
    for (std::size_t v = T; v != S; v = via[v].first) {
      Edge& ed = g[via[v].first][via[v].second];
      ed.cap -= push;
      g[v][ed.rev].cap += push;
      total += push * ed.cost;
    }
  }
  total.canonicalize();
  return total;
}

DiscreteMeasure random_measure(std::mt19937_64& rng) {
  const int n = 1 + static_cast<int>(rng() % 10);
  std::vector<std::pair<DyadicRational, Rational>> atoms;
  std::vector<unsigned long> w(n);
  unsigned long tot = 0;
  for (auto& x : w) tot += (x = 1 + rng() % 97);
  for (int i = 0; i < n; ++i)
    atoms.push_back({DyadicRational(mpz_class(static_cast<unsigned long>(rng() % 4096)), 12), Rational(w[i], tot)});
  return DiscreteMeasure::from_weights(atoms);
}

Outcome transport() {
  Outcome o;
  std::mt19937_64 rng(20240601);
  std::vector<std::pair<DiscreteMeasure, DiscreteMeasure>> pairs;
  for (int t = 0; t < 1000; ++t) pairs.push_back({random_measure(rng), random_measure(rng)});
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Rational> fast;
  for (const auto& [mu, nu] : pairs) fast.push_back(w1(mu, nu));
  const double secs = seconds_since(t0);
  int agree = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) agree += fast[i] == min_cost_flow(pairs[i].first, pairs[i].second);
  o.check(agree == 1000, "exact agreement on all 1000 pairs");
  o.check(secs < 10, "w1 runtime < 10 s");
  o.note(std::to_string(agree) + "/1000 exact, w1 time " + fmt(secs) + " s");
  return o;
}

// ---- 2 ----

Outcome anchors() {
  Outcome o;
  auto timed = [&](const char* what, const std::function<void()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const double s = seconds_since(t0);
    o.check(s < 5, std::string(what) + " < 5 s");
    o.note(std::string(what) + " " + fmt(s) + " s");
  };
  timed("period 1", [&] {
    auto a = find_superattracting(window("1", "3"), 1, 40);
    o.check(a.is_point() && a.lo == DyadicRational(2), "period 1 gives exactly 2");
  });
  timed("period 2", [&] {
    auto a = find_superattracting(window("3", "4"), 2, 40);
    auto cubic = [](const Rational& x) { return Rational(x * x * x - 4 * x * x + 8); };
    o.check(a.narrower_than(40), "period 2 width <= 2^-40");
    o.check(sgn(cubic(a.lo.to_rational())) * sgn(cubic(a.hi.to_rational())) <= 0, "cubic root 1+sqrt5 enclosed");
  });
  timed("period 3", [&] {
    auto a = find_superattracting(window("3.8", "3.9"), 3, 40);
    o.check(window("3.8", "3.9").contains(a), "period 3 in (3.8, 3.9)");
    auto res = superattracting_residual(a, 3, 256);
    o.check(abs(res).hi < DyadicRational::pow2(-32), "certified residual < 2^-32");
    o.note("a3 = " + a.lo.to_decimal().substr(0, 14));
  });
  return o;
}

// ---- 3 ----

Outcome tip() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const DyadicInterval c = find_tip_c(48);
  const auto cert = certify_tip(c, 256);
  const double s = seconds_since(t0);
  o.check(window("3.85", "4").contains(c) && DyadicRational::floor_at(parse_rational("3.85"), 64) < c.lo &&
              c.hi < DyadicRational(4),
          "c in (3.85, 4)");
  o.check(cert.fold, "fold certificate");
  o.check(cert.separated, "g_c(1/2) != g_c^2(1/2)");
  o.check(abs(cert.residual).hi < DyadicRational::pow2(-32), "residual < 2^-32");
  o.check(s < 60, "< 60 s");
  o.note("c = " + c.lo.to_decimal().substr(0, 14) + ", " + fmt(s) + " s");
  return o;
}

// ---- 4 ----

std::vector<std::set<std::string>> necklaces_by_brute_force(std::size_t max_len) {
  std::vector<std::set<std::string>> out(max_len + 1);
  for (std::size_t len = 1; len <= max_len; ++len)
    for (unsigned long bits = 0; bits < (1ul << len); ++bits) {
      std::string w;
      for (std::size_t i = 0; i < len; ++i) w += (bits >> i) & 1 ? '1' : '0';
      bool primitive = true;
      for (std::size_t d = 1; d < len; ++d)
        if (len % d == 0 && w.substr(d) + w.substr(0, d) == w) primitive = false;
      if (!primitive) continue;
      std::string least = w;
      for (std::size_t r = 1; r < len; ++r) least = std::min(least, w.substr(r) + w.substr(0, r));
      out[len].insert(least);
    }
  return out;
}

Outcome horseshoe() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto brute = necklaces_by_brute_force(5);
  const std::size_t expect[] = {0, 2, 1, 2, 3, 6};
  for (std::size_t p = 1; p <= 5; ++p) o.check(brute[p].size() == expect[p], "brute-force count at period " + std::to_string(p));

  const Stage st = solve_stage(DyadicInterval::point(DyadicRational::floor_at(parse_rational("3.9"), 64)), 80);
  std::vector<std::set<std::string>> found(6);
  std::vector<PeriodicOrbit> orbits;
  for (std::size_t idx = 1;; ++idx) {
    const SymbolicWord w = word_at(idx);
    if (w.length() > 5) break;
    orbits.push_back(solve_periodic_orbit(st, idx, 64));
    // compare as rotation classes, independent of the representative convention
    std::string least = w.str();
    for (std::size_t r = 1; r < w.length(); ++r) least = std::min(least, w.rotation(r).str());
    found[w.length()].insert(least);
  }
  for (std::size_t p = 1; p <= 5; ++p) o.check(found[p] == brute[p], "solved words equal the brute-force set at period " + std::to_string(p));

  std::vector<DyadicInterval> all;
  bool itineraries = true, equivariant = true;
  for (const auto& orb : orbits) {
    const std::size_t len = orb.word.length();
    for (std::size_t j = 0; j < len; ++j) {
      if (itinerary(st, orb.g_points[j], len, 400).letters != orb.word.rotation(j).str()) itineraries = false;
      const DyadicInterval img = g_enclosure(st.a, orb.g_points[j], 400);
      if (!img.intersects(orb.g_points[(j + 1) % len]) ||
          itinerary(st, img, len, 400).letters != orb.word.rotation((j + 1) % len).str())
        equivariant = false;
    }
    for (const auto& p : orb.g_points) all.push_back(p);
  }
  std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) { return a.lo < b.lo; });
  bool disjoint = true;
  for (std::size_t i = 1; i < all.size(); ++i) disjoint = disjoint && all[i - 1].hi < all[i].lo;
  o.check(itineraries, "itineraries match the words");
  o.check(equivariant, "g shifts every point to its successor");
  o.check(disjoint, "orbit points pairwise disjoint");
  const double s = seconds_since(t0);
  o.check(s < 60, "< 60 s");
  o.note(std::to_string(orbits.size()) + " orbits, " + std::to_string(all.size()) + " points, " + fmt(s) + " s");
  return o;
}

// ---- 5 ----

Outcome basin() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const DyadicInterval a3 = find_superattracting(window("3.8", "3.9"), 3, 60);
  SinkOptions opts;
  opts.samples = 100;
  opts.seed = 5;
  opts.schedule = {10, 100, 1000, 10000};
  opts.tolerance = rational_pow2(-6);
  const auto cert = certify_sink(a3, DyadicRational(mpz_class(1), 1), 48, opts);
  const double s = seconds_since(t0);
  o.check(cert.period() == 3, "period 3 sink");
  o.check(cert.multiplier.contains(DyadicRational(0)), "multiplier encloses 0");
  o.check(cert.converged >= 95, ">= 95 of 100 converge");
  o.check(s < 120, "< 120 s");
  o.note(std::to_string(cert.converged) + "/100 converged, " + fmt(s) + " s");
  return o;
}

// ---- 6 ----

Outcome arcsine() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  const auto mu = monte_carlo_measure(DyadicRational(4), 100, 100000, 6);
  Rational mean = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) mean += mu.atoms()[i].x.to_rational() * mu.atoms()[i].count;
  mean /= mpz_class(static_cast<unsigned long>(mu.denominator()));
  const double m = mean.get_d();
  // Independent long orbit through the conjugacy x = sin^2(pi theta): f_4 doubles theta, which
  // shifts its binary digits, so theta_n is a 53-bit window sliding along a random bit stream.
  // (Iterating f_4 itself in binary64 collapses onto a short cycle.)
  std::mt19937_64 bits(61);
  std::uint64_t window = bits(), next = bits();
  int used = 0;
  double acc = 0;
  for (long i = 0; i < 10000000; ++i) {
    const double theta = static_cast<double>(window >> 11) * 0x1.0p-53;
    const double sx = std::sin(M_PI * theta);
    acc += sx * sx;
    window = (window << 1) | (next >> 63);
    next <<= 1;
    if (++used == 64) {
      next = bits();
      used = 0;
    }
  }
  const double orbit_mean = acc / 1e7;
  const double s = seconds_since(t0);
  o.check(std::fabs(m - 0.5) <= 5e-3, "ensemble mean within 5e-3 of 1/2");
  o.check(std::fabs(orbit_mean - 0.5) <= 5e-3, "long orbit agrees with the arcsine mean");
  o.check(s < 120, "< 120 s");
  o.note("ensemble " + fmt(m) + ", orbit " + fmt(orbit_mean) + ", " + fmt(s) + " s");
  return o;
}

// ---- 7, 8 ----

Outcome tuner_one() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  TargetProfile p;
  p.entries = {{1, Rational(1)}};
  p.tolerance = Rational(1, 8);
  const auto t = tune(tip_bracket(), p, 0);
  const double s = seconds_since(t0);
  const Stage st = solve_stage(DyadicInterval::point(t.a_star.mid()), 64);
  const Rational d = w1(t.achieved, lambda_measure(st, 1, 64));
  o.check(d < Rational(1, 8), "W1(sink, lambda(1)) < 2^-3");
  o.check(t.multiplier.contains(DyadicRational(0)), "superattracting closure");
  o.check(verify_tuned(t, p, {}).empty(), "certificates re-verify");
  o.check(s < 1800, "< 30 min");
  o.note("W1 " + fmt(d.get_d()) + ", stage " + std::to_string(t.stage_length) + ", " + fmt(s) + " s");
  return o;
}

Outcome tuner_two() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  TargetProfile p;
  p.entries = {{1, Rational(1, 2)}, {3, Rational(1, 2)}};
  p.tolerance = Rational(1, 8);
  const auto t = tune(tip_bracket(), p, 0);
  const double s = seconds_since(t0);
  const Stage st = solve_stage(DyadicInterval::point(t.a_star.mid()), 64);
  for (std::size_t orbit : {1, 3}) {
    const auto per = solve_periodic_orbit(st, orbit, 64);
    const Rational m = mass_near(t.achieved, per.f_points, t.radius);
    o.check(abs(m - Rational(1, 2)) < Rational(1, 8), "mass near Per(" + std::to_string(orbit) + ") within 2^-3 of 1/2");
    o.note("mass(" + std::to_string(orbit) + ") " + fmt(m.get_d()));
  }
  o.check(verify_tuned(t, p, {}).empty(), "certificates re-verify");
  o.check(s < 3600, "< 60 min");
  o.note(fmt(s) + " s");
  return o;
}

// ---- 9 ----

Outcome game() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  auto honest = birkhoff_opponent(48, 8, 100000, 9);
  const GameTranscript t = run_game(tip_bracket(), {honest.get(), honest.get()}, 2, GameConfig{});
  o.check(t.complete && t.rounds.size() == 2, "both rounds complete");
  for (const auto& r : t.rounds) {
    if (r.status != "complete") continue;
    const Rational scale = rational_pow2(-static_cast<std::int64_t>(r.n));
    const std::string tag = "round " + std::to_string(r.n) + ": ";
    o.check(r.fooling_margin > scale / 100, tag + "margin > 2^-n/100");
    o.check(r.fooling_margin >= scale / 4, tag + "margin >= 2^-n/4");
    const DyadicRational move = std::max(abs(r.a_after.hi - r.a_before.lo), abs(r.a_before.hi - r.a_after.lo));
    o.check(move.to_rational() < rational_pow2(-3 * static_cast<std::int64_t>(r.l)), tag + "move < 2^-3l");
    o.check(r.replay_q && *r.replay_q == r.q, tag + "replay reproduces q");
    o.note(tag + "q " + fmt(r.q.get_d()) + ", l " + std::to_string(r.l) + ", case " + std::to_string(r.case_) +
           ", margin " + fmt(r.fooling_margin.get_d()));
  }
  for (const auto& d : t.drift)
    o.check(d.value < rational_pow2(-3 * static_cast<std::int64_t>(d.round)), "drift < 2^-3n");
  const auto verdicts = verify_transcript(transcript_from_json(to_json(t)));
  o.check(verdicts.size() == 2, "verifier saw both rounds");
  for (const auto& v : verdicts) o.check(v.verdict == "FOOLED" && v.failures.empty(), "verifier: FOOLED");
  const double s = seconds_since(t0);
  o.check(s < 7200, "< 2 h");
  o.note(fmt(s) + " s");
  return o;
}

// ---- 10: every command twice, second time with a different thread count ----

int run_cli(const std::string& args, const std::string& env) {
  const std::string cmd = env + " " LOGISTAT_BIN " " + args + " > /dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  Outcome o;
  const fs::path dir = fs::temp_directory_path() / "logistat-acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string d0 = (dir / "d0.json").string(), d1 = (dir / "d1.json").string();
  std::ofstream(d0) << R"({"schema":"logistat.measure","version":1,"denominator":1,"atoms":[{"x":"0","w":"1"}]})";
  std::ofstream(d1) << R"({"schema":"logistat.measure","version":1,"denominator":2,"atoms":[{"x":"0.25","w":"1/2"},{"x":"1","w":"1/2"}]})";
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"w1", "w1 " + d0 + " " + d1},
      {"sink2", "sink-find --period 2 --window 3,4 --bits 40"},
      {"sink3", "sink-find --period 3 --window 3.8,3.9 --bits 48 --samples 100 --seed 5"},
      {"tip", "tip-c --bits 48"},
      {"periodic", "periodic --a 3.9 --n 9"},
      {"orbit", "orbit --a 3.5 --x0 0.5 --n 40"},
      {"mc", "measure mc --a 4 --k 100 --n 1000 --seed 6"},
      {"birkhoff", "measure birkhoff --a 3.9 --x0 0.3 --n 2000"},
      {"tau", "tau separating --a 3.9 --target 3 --avoid 1,2,4,5"},
      {"tune1", "tune --profile 1:1 --tol 1/8"},
      {"tune2", "tune --profile 1:1/2,3:1/2 --tol 1/8"},
      {"game", "game --rounds 2 --opponent birkhoff:bits=48,seeds=8,iterates=100000 --seed 9"},
  };
  int same = 0;
  for (const auto& [name, args] : commands) {
    const fs::path a = dir / (name + ".a.json"), b = dir / (name + ".b.json");
    const int ra = run_cli(args + " --out " + a.string(), "OMP_NUM_THREADS=1");
    const int rb = run_cli(args + " --out " + b.string(), "OMP_NUM_THREADS=3");
    const bool ok = ra == 0 && rb == 0 && fs::exists(a) && slurp(a) == slurp(b) && !slurp(a).empty();
    o.check(ok, name + " byte-identical");
    same += ok;
  }
  const fs::path game = dir / "game.a.json";
  o.check(run_cli("verify " + game.string() + " --out " + (dir / "verify.json").string(), "") == 0,
          "CLI verify accepts the game transcript");
  o.note(std::to_string(same) + "/" + std::to_string(commands.size()) + " commands byte-identical across reruns");
  fs::remove_all(dir);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"transport oracle equivalence", transport},
      {"closed-form parameter anchors", anchors},
      {"tip parameter", tip},
      {"horseshoe combinatorics at a = 3.9", horseshoe},
      {"sink basin at the period-3 superstable parameter", basin},
      {"a = 4 ensemble statistics", arcsine},
      {"tuner example 1", tuner_one},
      {"tuner example 2", tuner_two},
      {"two-round game against the Birkhoff sampler", game},
      {"determinism", determinism},
  };
  std::set<std::size_t> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoul(argv[i]));
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !only.count(i + 1)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note(std::string("exception: ") + e.what());
    }
    std::cout << "criterion " << (i + 1) << ": " << (o.pass ? "PASS" : "FAIL") << "  " << criteria[i].first;
    for (const auto& n : o.notes) std::cout << " | " << n;
    std::cout << std::endl;
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
