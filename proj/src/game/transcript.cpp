#include <algorithm>
#include <string>

#include "logistat/errors.hpp"
#include "logistat/game/game.hpp"
#include "logistat/measures/w1.hpp"

namespace logistat {

namespace {

using io::Json;

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::InvalidInput, std::string("transcript lacks '") + key + "'");
  return j.at(key);
}

Json round_json(const RoundRecord& r) {
  Json j;
  j["n"] = r.n;
  j["status"] = r.status;
  if (!r.error.empty()) j["error"] = r.error;
  j["tau_scheme"] = kTauScheme;
  j["tau_code"] = r.tau_code;
  j["tau"] = io::to_json(r.tau);
  j["tau_avoid"] = r.tau_avoid;
  j["tau_before"] = io::to_json(r.tau_before);
  j["eps"] = io::to_json(r.eps);
  j["opponent"] = r.opponent;
  j["q"] = io::to_json(r.q);
  j["queries"] = r.queries;
  j["l"] = r.l;
  j["case"] = r.case_;
  j["s"] = r.s;
  j["a_before"] = io::to_json(r.a_before);
  if (r.status != "complete") return j;
  j["bracket"] = io::to_json(r.bracket);
  j["a_after"] = io::to_json(r.a_after);
  j["target"] = io::to_json(r.target);
  j["fooling_margin"] = io::to_json(r.fooling_margin);
  if (r.replay_q) j["replay_q"] = io::to_json(*r.replay_q);
  j["tuned"] = io::to_json(r.tuned);
  return j;
}

RoundRecord round_from_json(const Json& j) {
  RoundRecord r;
  r.n = need(j, "n").get<std::size_t>();
  r.status = need(j, "status").get<std::string>();
  r.error = j.value("error", "");
  if (j.contains("tau_scheme") && j.at("tau_scheme") != kTauScheme)
    fail(ErrorKind::InvalidInput, "unknown test-function scheme");
  r.tau_code = j.value("tau_code", "");
  if (j.contains("tau")) r.tau = io::tau_from_json(j.at("tau"));
  if (j.contains("tau_avoid")) r.tau_avoid = j.at("tau_avoid").get<std::vector<std::size_t>>();
  if (j.contains("tau_before")) r.tau_before = io::rational_from_json(j.at("tau_before"));
  r.eps = io::rational_from_json(need(j, "eps"));
  r.opponent = j.value("opponent", "");
  if (j.contains("q")) r.q = io::rational_from_json(j.at("q"));
  if (j.contains("queries")) r.queries = j.at("queries").get<std::vector<std::uint64_t>>();
  r.l = j.value("l", std::uint64_t{0});
  r.case_ = j.value("case", 0);
  r.s = j.value("s", 0);
  r.a_before = io::interval_from_json(need(j, "a_before"));
  if (r.status != "complete") return r;
  r.bracket = io::interval_from_json(need(j, "bracket"));
  r.a_after = io::interval_from_json(need(j, "a_after"));
  r.target = io::profile_from_json(need(j, "target"));
  r.fooling_margin = io::rational_from_json(need(j, "fooling_margin"));
  if (j.contains("replay_q")) r.replay_q = io::rational_from_json(j.at("replay_q"));
  r.tuned = io::tuned_from_json(need(j, "tuned"));
  return r;
}

Json profile_json(const PTildeProfile& p) {
  Json d = Json::array(), m = Json::array();
  for (const auto& [n, s] : p.decided) d.push_back(Json{{"n", n}, {"s", s}});
  for (const auto& [k, w] : p.masses) m.push_back(Json{{"orbit", k}, {"mass", io::to_json(w)}});
  return Json{{"level", p.level}, {"decided", d}, {"masses", m}, {"tail", io::to_json(p.tail())}};
}

PTildeProfile profile_from(const Json& j) {
  PTildeProfile p;
  for (const auto& d : need(j, "decided")) p.decide(need(d, "n").get<std::size_t>(), need(d, "s").get<int>());
  return p;
}

Rational scale(std::size_t n) { return rational_pow2(-static_cast<std::int64_t>(n)); }

// sup |x - y| over x in a, y in b
DyadicRational move_bound(const DyadicInterval& a, const DyadicInterval& b) {
  return std::max(abs(a.hi - b.lo), abs(b.hi - a.lo));
}

}  // namespace

Json to_json(const GameTranscript& t) {
  Json j;
  j["schema"] = "logistat.game-transcript";
  j["version"] = io::kSchemaVersion;
  j["config"] = t.config.to_json();
  j["initial_bracket"] = io::to_json(t.initial_bracket);
  j["opponent_list"] = "explicit finite list of plug-in estimators, a surrogate for an enumeration of all machines";
  j["opponents"] = t.opponents;
  j["complete"] = t.complete;
  if (!t.rounds.empty()) j["initial"] = io::to_json(t.initial);
  Json rounds = Json::array();
  for (const auto& r : t.rounds) rounds.push_back(round_json(r));
  j["rounds"] = std::move(rounds);
  j["profile"] = profile_json(t.profile);
  Json drift = Json::array();
  for (const auto& d : t.drift)
    drift.push_back(Json{{"round", d.round}, {"earlier", d.earlier}, {"value", io::to_json(d.value)}});
  j["drift"] = std::move(drift);
  return j;
}

GameTranscript transcript_from_json(const Json& j) {
  if (j.value("schema", "") != "logistat.game-transcript") fail(ErrorKind::InvalidInput, "not a game transcript");
  if (j.value("version", 0) != io::kSchemaVersion) fail(ErrorKind::InvalidInput, "unsupported transcript version");
  GameTranscript t;
  try {
    const Json& c = need(j, "config");
    t.config.max_rounds = need(c, "max_rounds").get<std::size_t>();
    t.config.bits = need(c, "bits").get<std::uint64_t>();
    t.config.tau_bits = need(c, "tau_bits").get<std::uint64_t>();
    t.config.tolerance_divisor = need(c, "tolerance_divisor").get<unsigned>();
    t.config.w1_divisor = need(c, "w1_divisor").get<unsigned>();
    t.initial_bracket = io::interval_from_json(need(j, "initial_bracket"));
    for (const auto& o : need(j, "opponents")) t.opponents.push_back(o);
    t.complete = need(j, "complete").get<bool>();
    for (const auto& r : need(j, "rounds")) t.rounds.push_back(round_from_json(r));
    if (!t.rounds.empty()) t.initial = io::tuned_from_json(need(j, "initial"));
    t.profile = profile_from(need(j, "profile"));
    for (const auto& d : need(j, "drift"))
      t.drift.push_back({need(d, "round").get<std::size_t>(), need(d, "earlier").get<std::size_t>(),
                         io::rational_from_json(need(d, "value"))});
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("malformed transcript: ") + e.what());
  }
  return t;
}

std::vector<RoundVerdict> verify_transcript(const GameTranscript& t) {
  std::vector<RoundVerdict> out;
  if (t.rounds.empty()) return out;

  const GameConfig& cfg = t.config;
  TuneOptions vopts;
  vopts.bits = cfg.bits;
  PTildeProfile profile;
  const TargetProfile initial_target =
      profile.target(cfg.tail_orbit(), scale(1) / cfg.tolerance_divisor, scale(1) / cfg.w1_divisor);
  const std::vector<std::string> initial_failures = verify_tuned(t.initial, initial_target, vopts);

  const TunedParameter* prev = &t.initial;
  std::vector<const TestFunction*> taus;
  for (std::size_t i = 0; i < t.rounds.size(); ++i) {
    const RoundRecord& r = t.rounds[i];
    RoundVerdict v;
    v.n = r.n;
    auto bad = [&](const std::string& what) { v.failures.push_back(what); };
    if (r.n != i + 1) bad("round numbers out of order");
    if (r.status != "complete") {
      v.verdict = "INCOMPLETE";
      v.failures.push_back(r.error.empty() ? "round aborted" : r.error);
      out.push_back(std::move(v));
      break;
    }
    if (i == 0)
      for (const auto& f : initial_failures) bad("initial parameter: " + f);
    const std::size_t n = r.n;

    if (r.eps != scale(n) / 100) bad("eps is not 2^-n/100");
    TestFunction decoded;
    try {
      if (!decode_tau(mpz_class(r.tau_code), decoded) || !(decoded == r.tau)) bad("tau does not match its code");
    } catch (const std::exception&) {
      bad("tau code unreadable");
    }
    const int expect_case = r.q <= scale(n) / 2 ? 1 : 2;
    if (r.case_ != expect_case) bad("case does not follow q");
    if (r.s != (expect_case == 1 ? 1 : 0)) bad("s does not follow the case");
    const std::uint64_t l = r.queries.empty() ? 0 : *std::max_element(r.queries.begin(), r.queries.end());
    if (r.l != l) bad("l is not the deepest query");
    if (!(r.a_before == prev->a_star)) bad("a_before is not the previous parameter");
    if (!(r.a_after == r.tuned.a_star)) bad("a_after is not the tuned parameter");
    if (!(move_bound(r.a_before, r.a_after).to_rational() < scale(3 * l))) bad("parameter moved by 2^-3l or more");

    // every answer the opponent could have read is unchanged
    LazyParameter before = tuned_lazy_parameter(*prev), after = tuned_lazy_parameter(r.tuned);
    for (std::uint64_t m = 0; m <= l; ++m)
      if (!(before.oracle_query(m) == after.oracle_query(m))) {
        bad("oracle answer at depth " + std::to_string(m) + " changed");
        break;
      }

    const Rational pre = integrate(r.tau, prev->achieved);
    if (pre != r.tau_before) bad("recorded tau integral before retuning is wrong");
    if (!(abs(pre) < scale(n) / 200)) bad("tau already carries mass before the round");

    PTildeProfile next = profile;
    try {
      next.decide(n, r.s);
    } catch (const Error& e) {
      bad(e.what());
    }
    const TargetProfile target =
        next.target(cfg.tail_orbit(), scale(n) / cfg.tolerance_divisor, scale(n) / cfg.w1_divisor);
    if (io::to_json(target) != io::to_json(r.target)) bad("target profile does not follow s");
    for (const auto& f : verify_tuned(r.tuned, target, vopts)) bad("tuned parameter: " + f);

    try {
      if (i < t.opponents.size()) {
        auto opp = opponent_from_json(t.opponents[i]);
        OracleHandle replay(after, l);
        const Rational q = opp->answer(r.tau, r.eps, replay);
        if (q != r.q) bad("replay against the truncated oracle gives a different answer");
        if (r.replay_q && *r.replay_q != q) bad("recorded replay answer is wrong");
      } else {
        bad("no opponent description for this round");
      }
    } catch (const Error& e) {
      bad(std::string("replay failed: ") + e.what());
    }

    for (std::size_t k = 0; k < taus.size(); ++k) {
      const Rational d = abs(integrate(*taus[k], prev->achieved) - integrate(*taus[k], r.tuned.achieved));
      if (!(d < scale(3 * n))) bad("drift on round " + std::to_string(k + 1) + " test function");
      auto it = std::find_if(t.drift.begin(), t.drift.end(),
                             [&](const DriftEntry& e) { return e.round == n && e.earlier == k + 1; });
      if (it == t.drift.end() || it->value != d) bad("recorded drift for round " + std::to_string(k + 1) + " is wrong");
    }

    v.margin = abs(r.q - integrate(r.tau, r.tuned.achieved));
    if (v.margin != r.fooling_margin) bad("recorded fooling margin is wrong");
    v.verdict = v.failures.empty() && v.margin > r.eps ? "FOOLED" : "NOT-FOOLED";
    if (!(v.margin > r.eps)) v.failures.push_back("margin does not exceed eps");
    out.push_back(std::move(v));

    profile = next;
    prev = &r.tuned;
    taus.push_back(&r.tau);
  }
  return out;
}

}  // namespace logistat
