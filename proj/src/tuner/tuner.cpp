#include "logistat/tuner/tuner.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <set>

#include "logistat/dynamics/periodic.hpp"
#include "logistat/dynamics/symbolic.hpp"
#include "logistat/errors.hpp"
#include "logistat/measures/empirical.hpp"
#include "logistat/measures/w1.hpp"
#include "logistat/numerics/enclosure.hpp"
#include "logistat/sink/sink.hpp"
#include "logistat/tuner/kneading.hpp"
#include "logistat/tuner/shooting.hpp"

namespace logistat {

void TargetProfile::validate() const {
  if (entries.empty()) fail(ErrorKind::InvalidInput, "profile has no entries");
  if (tolerance <= 0) fail(ErrorKind::InvalidInput, "tolerance must be positive");
  Rational sum = 0;
  std::set<std::size_t> seen;
  for (const auto& e : entries) {
    if (e.orbit == 0) fail(ErrorKind::InvalidInput, "orbit indices are 1-based");
    if (e.weight <= 0) fail(ErrorKind::InvalidInput, "profile weights must be positive");
    if (!seen.insert(e.orbit).second) fail(ErrorKind::InvalidInput, "orbit indices must be distinct");
    sum += e.weight;
  }
  if (sum != 1) fail(ErrorKind::InvalidInput, "profile weights must sum to 1");
}

bool TargetProfile::has_slack() const {
  return std::any_of(entries.begin(), entries.end(), [](const ProfileEntry& e) { return e.slack; });
}

bool bracket_frozen(const DyadicInterval& bracket, std::uint64_t bits) {
  mpz_class lo = bracket.lo.scaled_floor(bits), hi = bracket.hi.scaled_floor(bits);
  if (lo == hi) return true;
  // a closed right end sitting exactly on the next cell boundary is allowed
  return hi == lo + 1 && bracket.hi.scaled_ceil(bits) == hi;
}

namespace {

std::size_t word_length(std::size_t orbit) { return word_at(orbit).length(); }

}  // namespace

std::string design_letters(const std::vector<Dwell>& dwells) {
  std::string out;
  for (const auto& d : dwells) {
    const std::string w = word_at(d.orbit).str();
    for (std::size_t r = 0; r < d.length; ++r)
      for (char c : w) out += c == '0' ? "LRL" : "RRL";
  }
  return out;
}

Rational time_fraction(const DwellSchedule& s, std::size_t i) {
  return Rational(static_cast<unsigned long>(3 * word_length(s.dwells[i].orbit) * s.dwells[i].length),
                  static_cast<unsigned long>(s.stage_length));
}

DwellSchedule dwell_schedule(const TargetProfile& profile, std::uint64_t stage_bits, std::size_t overhead) {
  profile.validate();
  const bool slack = profile.has_slack();
  const Rational tol = profile.tolerance;
  std::size_t kmax = 0;
  for (const auto& e : profile.entries) kmax = std::max(kmax, 3 * word_length(e.orbit));
  // overhead amortized to tol/4 (without slack); rounding of every dwell to tol/8
  Rational need = slack ? Rational(8 * kmax) / tol : Rational(4 * (overhead + kmax)) / tol;
  mpz_class S = (need.get_num() + need.get_den() - 1) / need.get_den();
  if (S < static_cast<unsigned long>(overhead + kmax)) S = static_cast<unsigned long>(overhead + kmax);
  if (stage_bits < 62 && S > (mpz_class(1) << static_cast<unsigned>(stage_bits)))
    fail(ErrorKind::ToleranceInfeasible, "stage of " + S.get_str() + " steps exceeds 2^" + std::to_string(stage_bits));
  const unsigned long stage = S.get_ui();

  DwellSchedule out;
  out.overhead = overhead;
  const Rational dwell_time = Rational(static_cast<unsigned long>(stage - std::min(stage, overhead)));
  std::size_t used = overhead;
  std::optional<std::size_t> slack_at;
  for (std::size_t i = 0; i < profile.entries.size(); ++i) {
    const auto& e = profile.entries[i];
    const std::size_t k3 = 3 * word_length(e.orbit);
    if (e.slack) {
      slack_at = i;
      out.dwells.push_back({e.orbit, 0});
      continue;
    }
    Rational want = (slack ? e.weight * Rational(stage) : e.weight * dwell_time) / Rational(k3);
    std::size_t d = std::max<std::size_t>(1, mpz_class((want.get_num() * 2 + want.get_den()) / (2 * want.get_den())).get_ui());
    out.dwells.push_back({e.orbit, d});
    used += k3 * d;
  }
  if (slack_at) {
    const std::size_t k3 = 3 * word_length(out.dwells[*slack_at].orbit);
    out.dwells[*slack_at].length = std::max<std::size_t>(1, stage > used ? (stage - used + k3 / 2) / k3 : 1);
    used += k3 * out.dwells[*slack_at].length;
  }
  out.stage_length = used;
  for (std::size_t i = 0; i < profile.entries.size(); ++i) {
    if (profile.entries[i].slack) continue;
    Rational err = abs(time_fraction(out, i) - profile.entries[i].weight);
    if (err > tol / 4) fail(ErrorKind::ToleranceInfeasible, "time fraction of orbit " +
                                                                std::to_string(profile.entries[i].orbit) +
                                                                " off by " + to_string(err));
  }
  return out;
}

namespace {

struct Entry {
  DyadicRational reference;
  std::string prefix;  // kneading letters copied from the reference
};

std::optional<Entry> entry_from(const DyadicInterval& bracket, const DyadicRational& ref, std::size_t tmax,
                                unsigned q, const std::vector<DyadicInterval>& avoid, std::size_t* score) {
  const std::uint64_t prec = 2 * tmax + 192;
  std::string kref = kneading(DyadicInterval::point(ref), tmax, prec);
  if (kref.size() < 8) return std::nullopt;
  auto lo = compare_kneading(bracket.lo, kref), hi = compare_kneading(bracket.hi, kref);
  if (lo.sign == 0 || hi.sign == 0 || lo.sign == hi.sign) return std::nullopt;
  const std::size_t tmin = std::max(lo.agree, hi.agree) + 1;

  Stage st;
  try {
    st = solve_stage(DyadicInterval::point(ref), 64);
  } catch (const Error&) {
    return std::nullopt;
  }
  LogisticStep f(DyadicInterval::point(ref), prec);
  ZoneClassifier zone(st, prec);
  std::vector<FixedInterval> xs{FixedInterval::from(DyadicRational(mpz_class(1), 1), prec)};
  for (std::size_t t = 1; t <= kref.size(); ++t) {
    xs.push_back(xs.back());
    f(xs.back());
  }
  std::size_t strays = 0;
  auto stray = [&](std::size_t t) {
    DyadicInterval x = xs[t].to_dyadic();
    for (const auto& A : avoid)
      if (A.intersects(x)) return true;
    return false;
  };
  for (std::size_t t = 1; t + 3 * q <= kref.size(); ++t) {
    const std::size_t len = t - 1 + 3 * q;
    if (len >= tmin) {
      bool ok = true;
      for (unsigned i = 0; i < q && ok; ++i) {
        Zone z = zone(xs[t + 3 * i]);
        const char* pattern = z == Zone::Left ? "LRL" : z == Zone::Right ? "RRL" : nullptr;
        ok = pattern && kref.compare(t - 1 + 3 * i, 3, pattern) == 0;
      }
      if (ok) {
        for (std::size_t s = t; s <= len; ++s) strays += stray(s);
        *score = len + 64 * strays;
        return Entry{ref, kref.substr(0, len)};
      }
    }
    strays += stray(t);
  }
  return std::nullopt;
}

Entry choose_entry(const DyadicInterval& bracket, const TuneOptions& opts) {
  const auto wb = static_cast<std::size_t>(std::max<std::int64_t>(0, neg_log2_floor(bracket.width().to_rational())));
  for (std::size_t tmax = 3 * wb + 96; tmax <= 24 * wb + 768; tmax *= 2) {
    std::optional<Entry> best;
    std::size_t best_score = 0;
    for (unsigned c = 1; c <= opts.candidates; ++c) {
      Rational pos = bracket.lo.to_rational() + bracket.width().to_rational() * Rational(c, opts.candidates + 1);
      DyadicRational ref = DyadicRational::floor_at(pos, wb + 16);
      if (!(bracket.lo < ref && ref < bracket.hi)) continue;
      std::size_t score = 0;
      auto e = entry_from(bracket, ref, tmax, opts.entry_letters, opts.avoid, &score);
      if (e && (!best || score < best_score)) {
        best = e;
        best_score = score;
      }
    }
    if (best) return *best;
  }
  fail(ErrorKind::TunerFailure, "no reference parameter in the bracket enters the stage");
}

struct Evaluation {
  TunedParameter tp;
  std::vector<std::size_t> counts;  // atoms within radius of each profile orbit
  std::vector<std::string> failures;
};

std::vector<DyadicInterval> orbit_points(const Stage& st, std::size_t n, std::uint64_t bits) {
  return solve_periodic_orbit(st, n, bits).f_points;
}

void measure(TunedParameter& tp, const TargetProfile& profile, const TuneOptions& opts,
             std::vector<std::size_t>* counts, std::vector<std::string>* failures) {
  const std::size_t P = tp.achieved.size() ? tp.stage_length + 1 : 0;
  Stage st = solve_stage(tp.a_star, opts.bits);
  std::vector<std::pair<Rational, DiscreteMeasure>> parts;
  tp.masses.clear();
  if (counts) counts->clear();
  for (const auto& e : profile.entries) {
    auto pts = orbit_points(st, e.orbit, opts.bits);
    Rational m = mass_near(tp.achieved, pts, opts.radius);
    tp.masses.push_back({e.orbit, e.weight, m, e.slack});
    if (counts) counts->push_back(mpz_class(m * Rational(static_cast<unsigned long>(P))).get_ui());
    if (!e.slack && abs(m - e.weight) >= profile.tolerance)
      failures->push_back("mass near orbit " + std::to_string(e.orbit) + " is " + to_string(m) + ", target " +
                          to_string(e.weight));
    parts.emplace_back(e.weight, lambda_measure(st, e.orbit, opts.bits));
  }
  for (std::size_t n = 1; n <= opts.outside_check; ++n) {
    if (std::any_of(profile.entries.begin(), profile.entries.end(),
                    [n](const ProfileEntry& e) { return e.orbit == n; }))
      continue;
    Rational m = mass_near(tp.achieved, orbit_points(st, n, opts.bits), opts.radius);
    if (m >= profile.tolerance)
      failures->push_back("orbit " + std::to_string(n) + " outside the profile carries " + to_string(m));
  }
  std::vector<std::pair<Rational, const DiscreteMeasure*>> mix;
  for (auto& [w, m] : parts) mix.emplace_back(w, &m);
  tp.residual = w1(tp.achieved, mixture(mix));
  if (tp.residual >= profile.w1_tol())
    failures->push_back("W1 to the target mixture is " + std::to_string(tp.residual.get_d()));
}

// Closure of the designed kneading by backward shooting: the sink is the pulled-back orbit itself.
TunedParameter close_stage(const DyadicInterval& bracket, const std::string& target, const TuneOptions& opts) {
  const std::size_t P = target.size();
  const auto wb = static_cast<std::uint64_t>(std::max<std::int64_t>(0, neg_log2_floor(bracket.width().to_rational())));
  ShootingRoot root = shoot_parameter(bracket, target, std::max(opts.bits, wb) + 48);
  TunedParameter tp;
  tp.a_star = root.a;
  tp.stage_length = P - 1;
  tp.kneading = target;
  tp.radius = opts.radius;
  tp.closure_residual = root.shot.residual;
  // 1/2 lies on the cycle
  tp.multiplier = DyadicInterval::point(DyadicRational(0));
  std::vector<DyadicRational> mids;
  mids.reserve(P);
  for (const auto& x : root.shot.orbit) mids.push_back(x.mid().floor_to(opts.bits + 2));
  tp.achieved = DiscreteMeasure::uniform(std::move(mids));
  tp.achieved.meta["kind"] = "sink";
  tp.achieved.meta["period"] = std::to_string(P);
  return tp;
}

// next dwell lengths from measured boundary losses; returns the predicted worst mass error
Rational propose(const TargetProfile& profile, const std::vector<Dwell>& dwells, const std::vector<std::size_t>& counts,
                 std::size_t P, std::size_t target_P, std::vector<Dwell>& out) {
  const std::size_t E = dwells.size();
  std::vector<long> k3(E), loss(E);
  long dwell_total = 0;
  for (std::size_t e = 0; e < E; ++e) {
    k3[e] = static_cast<long>(3 * word_length(dwells[e].orbit));
    loss[e] = k3[e] * static_cast<long>(dwells[e].length) - static_cast<long>(counts[e]);
    dwell_total += k3[e] * static_cast<long>(dwells[e].length);
  }
  const long overhead = static_cast<long>(P) - dwell_total;
  const bool slack = profile.has_slack();
  long loss_total = 0;
  for (long b : loss) loss_total += b;

  std::vector<long> base(E);
  long used = overhead;
  for (std::size_t e = 0; e < E; ++e) {
    if (profile.entries[e].slack) continue;
    Rational c = slack ? profile.entries[e].weight * Rational(static_cast<long>(target_P))
                       : profile.entries[e].weight * Rational(static_cast<long>(target_P) - overhead - loss_total);
    Rational d = (c + loss[e]) / k3[e];
    base[e] = std::max(1L, static_cast<long>(std::lround(d.get_d())));
    used += k3[e] * base[e];
  }
  for (std::size_t e = 0; e < E; ++e)
    if (profile.entries[e].slack)
      base[e] = std::max(1L, static_cast<long>(std::lround(double(static_cast<long>(target_P) - used) / k3[e])));

  auto worst = [&](const std::vector<long>& d) {
    long Pn = overhead;
    for (std::size_t e = 0; e < E; ++e) Pn += k3[e] * d[e];
    Rational w = 0;
    for (std::size_t e = 0; e < E; ++e) {
      if (profile.entries[e].slack) continue;
      Rational m(k3[e] * d[e] - loss[e], Pn);
      Rational d = abs(m - profile.entries[e].weight);
      if (d > w) w = d;
    }
    return std::make_pair(w, Pn);
  };
  std::vector<long> best = base, cur = base;
  auto [best_w, best_P] = worst(base);
  const int span = E <= 3 ? 3 : 1;
  std::vector<int> off(E, -span);
  for (;;) {
    bool valid = true;
    for (std::size_t e = 0; e < E; ++e) {
      cur[e] = base[e] + off[e];
      valid = valid && cur[e] >= 1;
    }
    if (valid) {
      auto [w, Pn] = worst(cur);
      if (w < best_w || (w == best_w && Pn < best_P)) {
        best = cur;
        best_w = w;
        best_P = Pn;
      }
    }
    std::size_t i = 0;
    while (i < E && off[i] == span) off[i++] = -span;
    if (i == E) break;
    ++off[i];
  }
  out = dwells;
  for (std::size_t e = 0; e < E; ++e) out[e].length = static_cast<std::size_t>(best[e]);
  return best_w;
}

// largest power of two not above opts.radius and a quarter of the distance from profile orbit points to
// any other checked orbit point
Rational separation_radius(const Stage& st, const TargetProfile& profile, const TuneOptions& opts) {
  std::vector<std::pair<DyadicRational, std::size_t>> pts;
  std::set<std::size_t> in_profile;
  for (const auto& e : profile.entries) in_profile.insert(e.orbit);
  std::set<std::size_t> all = in_profile;
  for (std::size_t n = 1; n <= opts.outside_check; ++n) all.insert(n);
  for (std::size_t n : all)
    for (const auto& x : orbit_points(st, n, opts.bits)) pts.emplace_back(x.mid(), n);
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  Rational gap = opts.radius * 4;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i].second == pts[i + 1].second) continue;
    if (!in_profile.count(pts[i].second) && !in_profile.count(pts[i + 1].second)) continue;
    Rational d = (pts[i + 1].first - pts[i].first).to_rational();
    if (d < gap) gap = d;
  }
  if (gap <= 0) fail(ErrorKind::SeparationImpossible, "profile orbits not separated from the checked orbits");
  Rational q = gap / 4, r = rational_pow2(-neg_log2_floor(q));
  if (r > q) r /= 2;
  return r;
}

TunedParameter tune_with_radius(const DyadicInterval& bracket, const TargetProfile& profile, const TuneOptions& opts);

}  // namespace

TunedParameter tune(const DyadicInterval& bracket, const TargetProfile& profile, std::uint64_t frozen_bits,
                    const TuneOptions& opts) {
  profile.validate();
  if (!(bracket.lo < bracket.hi)) fail(ErrorKind::InvalidInput, "bracket must have positive width");
  if (bracket.lo <= DyadicRational(3) || bracket.hi > DyadicRational(4))
    fail(ErrorKind::InvalidInput, "bracket must lie in (c, 4]");
  if (!bracket_frozen(bracket, frozen_bits))
    fail(ErrorKind::InvalidInput, "bracket straddles a dyadic cell of depth " + std::to_string(frozen_bits));

  TuneOptions o = opts;
  o.radius = separation_radius(solve_stage(DyadicInterval::point(bracket.mid()), opts.bits), profile, opts);
  return tune_with_radius(bracket, profile, o);
}

namespace {
TunedParameter tune_with_radius(const DyadicInterval& bracket, const TargetProfile& profile, const TuneOptions& opts) {
  const Entry entry = choose_entry(bracket, opts);
  DwellSchedule sched = dwell_schedule(profile, opts.stage_bits, entry.prefix.size() + 6 * profile.entries.size() + 1);
  std::vector<Dwell> dwells = sched.dwells;
  std::size_t target_P = entry.prefix.size() + design_letters(dwells).size() + 1;
  const std::size_t max_P = opts.stage_bits < 62 ? (std::size_t{1} << opts.stage_bits) : SIZE_MAX;
  std::vector<std::string> last_failures;

  for (unsigned round = 0; round <= opts.max_corrections; ++round) {
    const std::string target = entry.prefix + design_letters(dwells) + "C";
    TunedParameter tp = close_stage(bracket, target, opts);
    tp.schedule = dwells;
    tp.entry_length = entry.prefix.size();
    tp.reference = entry.reference;
    tp.corrections = round;
    std::vector<std::size_t> counts;
    std::vector<std::string> failures;
    measure(tp, profile, opts, &counts, &failures);
    if (!bracket.contains(tp.a_star)) failures.push_back("a* left the bracket");
    if (failures.empty()) return tp;
    last_failures = failures;

    const std::size_t P = target.size();
    std::vector<Dwell> next;
    bool w1_bad = tp.residual >= profile.w1_tol();
    target_P = std::max(target_P, P);
    if (w1_bad) target_P *= 2;
    Rational predicted = propose(profile, dwells, counts, P, target_P, next);
    while (predicted >= profile.tolerance / 2 && 2 * target_P <= max_P) {
      target_P *= 2;
      predicted = propose(profile, dwells, counts, P, target_P, next);
    }
    if (target_P > max_P) fail(ErrorKind::ToleranceInfeasible, "stage length exceeds 2^" + std::to_string(opts.stage_bits));
    dwells = next;
  }
  std::string msg = "tolerance not reached after " + std::to_string(opts.max_corrections) + " corrections:";
  for (const auto& f : last_failures) msg += " " + f + ";";
  fail(ErrorKind::TunerFailure, msg);
}
}  // namespace

std::vector<std::string> verify_tuned(const TunedParameter& t, const TargetProfile& profile, const TuneOptions& opts) {
  std::vector<std::string> failures;
  const std::size_t P = t.stage_length + 1;
  if (t.kneading.size() != P || t.kneading.back() != 'C') failures.push_back("kneading target malformed");
  const std::uint64_t prec = shooting_precision(t.a_star, P, opts.bits);
  Shot shot;
  if (failures.empty() && !shooting_certifies(t.a_star, t.kneading, prec, &shot) &&
      !shooting_certifies(t.a_star, t.kneading, prec + 64, &shot))
    failures.push_back("closure with the target kneading not certified in a*");
  if (!shot.orbit.empty()) {
    std::vector<DyadicRational> mids;
    for (const auto& x : shot.orbit) mids.push_back(x.mid().floor_to(opts.bits + 2));
    if (DiscreteMeasure::uniform(std::move(mids)).atoms() != t.achieved.atoms())
      failures.push_back("sink measure differs from the certified orbit");
  }
  if (!t.multiplier.contains(DyadicRational(0))) failures.push_back("multiplier enclosure misses 0");
  TunedParameter copy = t;
  TuneOptions o = opts;
  o.radius = t.radius;
  measure(copy, profile, o, nullptr, &failures);
  if (copy.residual != t.residual) failures.push_back("recorded W1 residual differs from recomputation");
  return failures;
}

LazyParameter tuned_lazy_parameter(const TunedParameter& t) {
  return LazyParameter(t.a_star, [word = t.kneading](const DyadicInterval& cur, std::uint64_t bits) {
    return shoot_parameter(cur, word, bits).a;
  });
}

}  // namespace logistat
