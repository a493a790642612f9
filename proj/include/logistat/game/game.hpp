#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "logistat/io/cache.hpp"
#include "logistat/io/serialize.hpp"
#include "logistat/measures/test_function.hpp"
#include "logistat/numerics/lazy_parameter.hpp"
#include "logistat/tuner/tuner.hpp"

namespace logistat {

// Finite level of the pairwise profile: round n puts 2^-n on Per(2n - s_n) and nothing on its partner.
struct PTildeProfile {
  std::size_t level = 0;
  std::map<std::size_t, int> decided;        // n -> s_n
  std::map<std::size_t, Rational> masses;    // orbit index -> mass

  void decide(std::size_t n, int s);
  Rational tail() const;  // undistributed remainder
  void validate() const;
  // tuner profile: decided non-zero masses plus the tail as a slack entry on tail_orbit
  TargetProfile target(std::size_t tail_orbit, const Rational& tol, const Rational& w1_tol) const;
};

// Oracle access to the current parameter; every query is logged.
class OracleHandle {
 public:
  // depth_limit: queries beyond it throw (replay against a truncated oracle)
  explicit OracleHandle(LazyParameter& a, std::optional<std::uint64_t> depth_limit = std::nullopt)
      : a_(a), limit_(depth_limit) {}
  DyadicRational query(std::uint64_t m);
  const std::vector<std::uint64_t>& log() const { return log_; }
  std::uint64_t deepest() const;

 private:
  LazyParameter& a_;
  std::optional<std::uint64_t> limit_;
  std::vector<std::uint64_t> log_;
};

class Opponent {
 public:
  virtual ~Opponent() = default;
  virtual std::string name() const = 0;
  virtual io::Json config() const = 0;
  // deterministic in (tau, eps, oracle answers, own configuration)
  virtual Rational answer(const TestFunction& tau, const Rational& eps, OracleHandle& oracle) const = 0;
};

std::unique_ptr<Opponent> constant_opponent(const Rational& q);
// reads `bits` bits of a, averages tau along `iterates` binary64 steps from `seeds` seeded starts
std::unique_ptr<Opponent> birkhoff_opponent(std::uint64_t bits, std::uint64_t seeds, std::uint64_t iterates,
                                            std::uint64_t seed);
// doubles the bits read from 8 until consecutive estimates agree within eps/2 (at most max_bits)
std::unique_ptr<Opponent> adaptive_opponent(std::uint64_t max_bits, std::uint64_t seeds, std::uint64_t iterates,
                                            std::uint64_t seed);
// from {"name": ..., config fields}
std::unique_ptr<Opponent> opponent_from_json(const io::Json& j);

// binary64 Birkhoff average of tau over seeds x iterates, parallel over seeds; identical to the serial version
double sampled_tau_average(double a, const TestFunction& tau, std::uint64_t seeds, std::uint64_t iterates,
                           std::uint64_t seed);
double sampled_tau_average_serial(double a, const TestFunction& tau, std::uint64_t seeds, std::uint64_t iterates,
                                  std::uint64_t seed);

struct GameConfig {
  std::size_t max_rounds = 3;   // desk scale
  std::uint64_t bits = 64;
  std::uint64_t tau_bits = 64;
  unsigned tolerance_divisor = 400;  // tuner tolerance 2^-n / divisor
  unsigned w1_divisor = 16;          // W1 check 2^-n / divisor
  std::string cache_dir;             // empty: no cache

  std::size_t tail_orbit() const { return 2 * max_rounds + 1; }
  io::Json to_json() const;
};

struct DriftEntry {
  std::size_t round = 0, earlier = 0;
  Rational value;
};

struct RoundRecord {
  std::size_t n = 0;
  TestFunction tau;
  std::string tau_code;
  std::vector<std::size_t> tau_avoid;
  Rational tau_before;  // integral of tau against the sink measure before retuning
  Rational eps;
  std::string opponent;
  Rational q;
  std::vector<std::uint64_t> queries;
  std::uint64_t l = 0;
  int case_ = 0;
  int s = 0;
  DyadicInterval bracket;
  DyadicInterval a_before, a_after;
  TargetProfile target;
  TunedParameter tuned;
  Rational fooling_margin;
  std::optional<Rational> replay_q;
  std::string status = "complete";  // or "incomplete" with error
  std::string error;
};

struct GameTranscript {
  GameConfig config;
  DyadicInterval initial_bracket;
  std::vector<io::Json> opponents;
  TunedParameter initial;
  std::vector<RoundRecord> rounds;
  PTildeProfile profile;
  std::vector<DriftEntry> drift;
  bool complete = true;
};

struct GameState {
  DyadicInterval initial_bracket;
  TunedParameter current;
  PTildeProfile profile;
  std::vector<std::uint64_t> frozen;  // deepest bit read in each past round
  std::vector<TestFunction> taus;
  std::vector<DyadicInterval> tau_supports;
};

GameState initial_state(const DyadicInterval& bracket, const GameConfig& config, io::TuneCache* cache = nullptr);
RoundRecord play_round(GameState& state, std::size_t n, const Opponent& opponent, const GameConfig& config,
                       io::TuneCache* cache = nullptr);
GameTranscript run_game(const DyadicInterval& initial_bracket, const std::vector<const Opponent*>& opponents,
                        std::size_t rounds, const GameConfig& config);

io::Json to_json(const GameTranscript& t);
GameTranscript transcript_from_json(const io::Json& j);

struct RoundVerdict {
  std::size_t n = 0;
  std::string verdict;  // FOOLED, NOT-FOOLED or INCOMPLETE
  Rational margin;
  std::vector<std::string> failures;
};

// Recomputes every invariant from the raw transcript data without trusting stored margins.
std::vector<RoundVerdict> verify_transcript(const GameTranscript& t);

}  // namespace logistat
