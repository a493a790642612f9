#include <algorithm>
#include <cstdint>
#include <vector>

#include "logistat/errors.hpp"
#include "logistat/game/game.hpp"
#include "logistat/measures/empirical.hpp"

namespace logistat {

void PTildeProfile::decide(std::size_t n, int s) {
  if (n == 0 || (s != 0 && s != 1)) fail(ErrorKind::InvalidInput, "round n >= 1 and s in {0, 1}");
  if (decided.count(n)) fail(ErrorKind::InvalidInput, "round " + std::to_string(n) + " already decided");
  const Rational m = rational_pow2(-static_cast<std::int64_t>(n));
  decided[n] = s;
  masses[2 * n - static_cast<std::size_t>(s)] = m;
  masses[2 * n - static_cast<std::size_t>(1 - s)] = 0;
  level = std::max(level, n);
}

Rational PTildeProfile::tail() const {
  Rational t = 1;
  for (const auto& [orbit, m] : masses) t -= m;
  return t;
}

void PTildeProfile::validate() const {
  for (const auto& [n, s] : decided) {
    const Rational m = rational_pow2(-static_cast<std::int64_t>(n));
    auto at = [&](std::size_t k) { return masses.count(k) ? masses.at(k) : Rational(0); };
    if (at(2 * n - static_cast<std::size_t>(s)) != m || at(2 * n - static_cast<std::size_t>(1 - s)) != 0)
      fail(ErrorKind::InvalidInput, "round " + std::to_string(n) + " masses do not follow s");
    if (at(2 * n - 1) + at(2 * n) != m) fail(ErrorKind::InvalidInput, "pair sum rule fails");
  }
  if (tail() < 0) fail(ErrorKind::InvalidInput, "decided masses exceed 1");
}

TargetProfile PTildeProfile::target(std::size_t tail_orbit, const Rational& tol, const Rational& w1_tol) const {
  TargetProfile p;
  for (const auto& [orbit, m] : masses) {
    if (orbit == tail_orbit) fail(ErrorKind::InvalidInput, "tail orbit collides with a decided orbit");
    if (m > 0) p.entries.push_back({orbit, m, false});
  }
  if (tail() > 0) p.entries.push_back({tail_orbit, tail(), true});
  p.tolerance = tol;
  p.w1_tolerance = w1_tol;
  return p;
}

DyadicRational OracleHandle::query(std::uint64_t m) {
  if (limit_ && m > *limit_) fail(ErrorKind::InvalidInput, "oracle truncated at depth " + std::to_string(*limit_));
  log_.push_back(m);
  return a_.oracle_query(m);
}

std::uint64_t OracleHandle::deepest() const {
  return log_.empty() ? 0 : *std::max_element(log_.begin(), log_.end());
}

namespace {

double seed_sum(double a, const TestFunction& tau, std::uint64_t iterates, std::uint64_t seed, std::uint64_t l) {
  double x = seeded_start(seed, l).to_double(), s = 0;
  for (std::uint64_t t = 0; t < iterates; ++t) {
    x = a * x * (1 - x);
    s += tau.eval(x);
  }
  return s;
}

double combine(const std::vector<double>& parts, std::uint64_t seeds, std::uint64_t iterates) {
  double s = 0;
  for (double p : parts) s += p;
  return s / (static_cast<double>(seeds) * static_cast<double>(iterates));
}

}  // namespace

double sampled_tau_average(double a, const TestFunction& tau, std::uint64_t seeds, std::uint64_t iterates,
                           std::uint64_t seed) {
  std::vector<double> parts(seeds);
#pragma omp parallel for schedule(static)
  for (std::int64_t l = 0; l < static_cast<std::int64_t>(seeds); ++l)
    parts[static_cast<std::size_t>(l)] = seed_sum(a, tau, iterates, seed, static_cast<std::uint64_t>(l));
  return combine(parts, seeds, iterates);
}

double sampled_tau_average_serial(double a, const TestFunction& tau, std::uint64_t seeds, std::uint64_t iterates,
                                  std::uint64_t seed) {
  std::vector<double> parts(seeds);
  for (std::uint64_t l = 0; l < seeds; ++l) parts[l] = seed_sum(a, tau, iterates, seed, l);
  return combine(parts, seeds, iterates);
}

namespace {

Rational exact(double v) { return DyadicRational::from_double(v).to_rational(); }

class Constant : public Opponent {
 public:
  explicit Constant(Rational q) : q_(std::move(q)) {}
  std::string name() const override { return "constant"; }
  io::Json config() const override { return io::Json{{"name", name()}, {"q", io::to_json(q_)}}; }
  Rational answer(const TestFunction&, const Rational&, OracleHandle&) const override { return q_; }

 private:
  Rational q_;
};

class Birkhoff : public Opponent {
 public:
  Birkhoff(std::uint64_t bits, std::uint64_t seeds, std::uint64_t iterates, std::uint64_t seed)
      : bits_(bits), seeds_(seeds), iterates_(iterates), seed_(seed) {
    if (bits == 0 || bits > 52) fail(ErrorKind::InvalidInput, "sampler reads 1..52 bits (binary64 parameter)");
    if (seeds == 0 || iterates == 0) fail(ErrorKind::InvalidInput, "sampler needs seeds and iterates");
  }
  std::string name() const override { return "birkhoff"; }
  io::Json config() const override {
    return io::Json{{"name", name()}, {"bits", bits_}, {"seeds", seeds_}, {"iterates", iterates_}, {"seed", seed_}};
  }
  Rational answer(const TestFunction& tau, const Rational&, OracleHandle& oracle) const override {
    const double a = oracle.query(bits_).to_double();
    return exact(sampled_tau_average(a, tau, seeds_, iterates_, seed_));
  }

 private:
  std::uint64_t bits_, seeds_, iterates_, seed_;
};

class Adaptive : public Opponent {
 public:
  Adaptive(std::uint64_t max_bits, std::uint64_t seeds, std::uint64_t iterates, std::uint64_t seed)
      : max_bits_(max_bits), seeds_(seeds), iterates_(iterates), seed_(seed) {
    if (max_bits < 8 || max_bits > 52) fail(ErrorKind::InvalidInput, "adaptive refiner reads 8..52 bits");
    if (seeds == 0 || iterates == 0) fail(ErrorKind::InvalidInput, "sampler needs seeds and iterates");
  }
  std::string name() const override { return "adaptive"; }
  io::Json config() const override {
    return io::Json{{"name", name()}, {"max_bits", max_bits_}, {"seeds", seeds_}, {"iterates", iterates_}, {"seed", seed_}};
  }
  Rational answer(const TestFunction& tau, const Rational& eps, OracleHandle& oracle) const override {
    Rational prev = -1, q = 0;
    for (std::uint64_t p = 8;; p = std::min(2 * p, max_bits_)) {
      q = exact(sampled_tau_average(oracle.query(p).to_double(), tau, seeds_, iterates_, seed_));
      if (prev >= 0 && abs(q - prev) < eps / 2) return q;
      if (p == max_bits_) return q;
      prev = q;
    }
  }

 private:
  std::uint64_t max_bits_, seeds_, iterates_, seed_;
};

}  // namespace

std::unique_ptr<Opponent> constant_opponent(const Rational& q) { return std::make_unique<Constant>(q); }

std::unique_ptr<Opponent> birkhoff_opponent(std::uint64_t bits, std::uint64_t seeds, std::uint64_t iterates,
                                            std::uint64_t seed) {
  return std::make_unique<Birkhoff>(bits, seeds, iterates, seed);
}

std::unique_ptr<Opponent> adaptive_opponent(std::uint64_t max_bits, std::uint64_t seeds, std::uint64_t iterates,
                                            std::uint64_t seed) {
  return std::make_unique<Adaptive>(max_bits, seeds, iterates, seed);
}

std::unique_ptr<Opponent> opponent_from_json(const io::Json& j) {
  try {
    const std::string name = j.at("name").get<std::string>();
    if (name == "constant") return constant_opponent(io::rational_from_json(j.at("q")));
    if (name == "birkhoff")
      return birkhoff_opponent(j.value("bits", 48), j.value("seeds", 8), j.value("iterates", 100000), j.value("seed", 0));
    if (name == "adaptive")
      return adaptive_opponent(j.value("max_bits", 48), j.value("seeds", 8), j.value("iterates", 100000),
                               j.value("seed", 0));
    fail(ErrorKind::InvalidInput, "unknown opponent '" + name + "'");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::InvalidInput, std::string("bad opponent description: ") + e.what());
  }
}

}  // namespace logistat
