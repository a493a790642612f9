#include <algorithm>
#include <string>

#include "logistat/dynamics/stage.hpp"
#include "logistat/errors.hpp"
#include "logistat/game/game.hpp"
#include "logistat/measures/separating.hpp"
#include "logistat/measures/w1.hpp"

namespace logistat {

namespace {

Rational round_scale(std::size_t n) { return rational_pow2(-static_cast<std::int64_t>(n)); }

TuneOptions round_options(const GameConfig& c, const std::vector<DyadicInterval>& avoid) {
  TuneOptions o;
  o.bits = c.bits;
  o.avoid = avoid;
  return o;
}

// depth-m cell containing x, closed on the right (the tuner accepts that end)
DyadicInterval cell_of(const DyadicRational& answer, std::uint64_t m) {
  return {answer, answer + DyadicRational::pow2(-static_cast<std::int64_t>(m))};
}

DyadicInterval meet(const DyadicInterval& a, const DyadicInterval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

}  // namespace

io::Json GameConfig::to_json() const {
  return io::Json{{"max_rounds", max_rounds},
                  {"bits", bits},
                  {"tau_bits", tau_bits},
                  {"tolerance_divisor", tolerance_divisor},
                  {"w1_divisor", w1_divisor}};
}

GameState initial_state(const DyadicInterval& bracket, const GameConfig& config, io::TuneCache* cache) {
  if (config.max_rounds == 0) fail(ErrorKind::InvalidInput, "max_rounds must be positive");
  GameState s;
  s.initial_bracket = bracket;
  const TargetProfile target = s.profile.target(config.tail_orbit(), round_scale(1) / config.tolerance_divisor,
                                                round_scale(1) / config.w1_divisor);
  s.current = io::tune_cached(cache, bracket, target, 0, round_options(config, {}));
  return s;
}

RoundRecord play_round(GameState& state, std::size_t n, const Opponent& opponent, const GameConfig& config,
                       io::TuneCache* cache) {
  if (n != state.profile.level + 1) fail(ErrorKind::InvalidInput, "rounds must be played in order");
  if (n > config.max_rounds) fail(ErrorKind::InvalidInput, "round beyond the configured maximum");
  RoundRecord rec;
  rec.n = n;
  rec.opponent = opponent.name();
  rec.eps = round_scale(n) / 100;
  rec.a_before = state.current.a_star;
  const std::size_t target_orbit = 2 * n - 1;

  try {
    // (a) separating test function around Per(2n-1)
    for (std::size_t j = 1; j < 10 * n; ++j)
      if (j != target_orbit) rec.tau_avoid.push_back(j);
    if (config.tail_orbit() >= 10 * n) rec.tau_avoid.push_back(config.tail_orbit());
    const Stage st = solve_stage(state.current.a_star, config.tau_bits);
    SeparatingTau sep = separating_tau(st, target_orbit, rec.tau_avoid, config.tau_bits);
    rec.tau = sep.tau;
    rec.tau_code = sep.code.get_str();
    rec.tau_before = integrate(rec.tau, state.current.achieved);

    // (b) the opponent reads the current parameter
    LazyParameter a = tuned_lazy_parameter(state.current);
    OracleHandle oracle(a);
    rec.q = opponent.answer(rec.tau, rec.eps, oracle);
    rec.queries = oracle.log();
    rec.l = oracle.deepest();

    // (c) case choice
    rec.case_ = rec.q <= round_scale(n) / 2 ? 1 : 2;
    rec.s = rec.case_ == 1 ? 1 : 0;

    // (d) bracket: within 2^-(3l+1) of the current parameter and inside every frozen cell
    const std::uint64_t l = rec.l;
    const DyadicInterval before = a.refine(3 * l + 64);
    const DyadicRational r = DyadicRational::pow2(-static_cast<std::int64_t>(3 * l + 1));
    DyadicInterval b = meet({before.hi - r, before.lo + r}, state.initial_bracket);
    std::vector<std::uint64_t> depths = state.frozen;
    depths.push_back(l);
    for (std::uint64_t m : depths) b = meet(b, cell_of(a.oracle_query(m), m));
    if (!(b.lo < b.hi)) fail(ErrorKind::TunerFailure, "empty retuning bracket");
    rec.bracket = b;

    PTildeProfile next = state.profile;
    next.decide(n, rec.s);
    rec.target = next.target(config.tail_orbit(), round_scale(n) / config.tolerance_divisor,
                             round_scale(n) / config.w1_divisor);

    std::vector<DyadicInterval> supports = state.tau_supports;
    const Rational half = 2 * sep.radius;
    for (const Rational& c : sep.centers)
      supports.push_back({DyadicRational::floor_at(c - half, config.tau_bits + 8),
                          DyadicRational::ceil_at(c + half, config.tau_bits + 8)});

    rec.tuned = io::tune_cached(cache, b, rec.target, l, round_options(config, supports));
    rec.a_after = rec.tuned.a_star;

    // (e) margin against the certified sink measure
    rec.fooling_margin = abs(rec.q - integrate(rec.tau, rec.tuned.achieved));

    LazyParameter after = tuned_lazy_parameter(rec.tuned);
    OracleHandle replay(after, l);
    rec.replay_q = opponent.answer(rec.tau, rec.eps, replay);

    state.current = rec.tuned;
    state.profile = next;
    state.frozen.push_back(l);
    state.taus.push_back(rec.tau);
    state.tau_supports = std::move(supports);
  } catch (const Error& e) {
    rec.status = "incomplete";
    rec.error = e.what();
  }
  return rec;
}

GameTranscript run_game(const DyadicInterval& initial_bracket, const std::vector<const Opponent*>& opponents,
                        std::size_t rounds, const GameConfig& config) {
  if (rounds > std::min(opponents.size(), config.max_rounds))
    fail(ErrorKind::InvalidInput, "more rounds than opponents or the configured maximum");
  std::unique_ptr<io::TuneCache> cache;
  if (!config.cache_dir.empty()) cache = std::make_unique<io::TuneCache>(config.cache_dir);

  GameTranscript t;
  t.config = config;
  t.initial_bracket = initial_bracket;
  for (std::size_t i = 0; i < rounds; ++i) t.opponents.push_back(opponents[i]->config());
  if (rounds == 0) return t;

  GameState state = initial_state(initial_bracket, config, cache.get());
  t.initial = state.current;
  for (std::size_t n = 1; n <= rounds; ++n) {
    const DiscreteMeasure prev = state.current.achieved;
    RoundRecord rec = play_round(state, n, *opponents[n - 1], config, cache.get());
    const bool done = rec.status == "complete";
    if (done)
      for (std::size_t k = 0; k + 1 < state.taus.size(); ++k)
        t.drift.push_back({n, k + 1, abs(integrate(state.taus[k], prev) - integrate(state.taus[k], rec.tuned.achieved))});
    t.rounds.push_back(std::move(rec));
    if (!done) {
      t.complete = false;
      break;
    }
  }
  t.profile = state.profile;
  return t;
}

}  // namespace logistat
