#include "doctest.h"

#include "logistat/dynamics/stage.hpp"
#include "logistat/dynamics/words.hpp"
#include "logistat/errors.hpp"
#include "logistat/measures/w1.hpp"
#include "logistat/numerics/enclosure.hpp"
#include "logistat/numerics/lazy_parameter.hpp"
#include "logistat/sink/sink.hpp"
#include "logistat/tuner/kneading.hpp"
#include "logistat/tuner/pullback.hpp"
#include "logistat/tuner/shooting.hpp"
#include "logistat/tuner/tuner.hpp"
#include "oracles.hpp"

using namespace logistat;

namespace {
DyadicInterval window(const char* lo, const char* hi) {
  return {DyadicRational::floor_at(parse_rational(lo), 64), DyadicRational::ceil_at(parse_rational(hi), 64)};
}
Rational cubic(const Rational& a) { return a * a * a - 4 * a * a + 8; }

const DyadicInterval& tip() {
  static DyadicInterval c = find_tip_c(40);
  return c;
}
}  // namespace

TEST_CASE("kneading letters") {
  CHECK(kneading(DyadicInterval::point(DyadicRational(4)), 5, 64) == "RLLLL");
  CHECK(kneading(DyadicInterval::point(DyadicRational(2)), 4, 64) == "CCCC");
  auto a = DyadicRational::floor_at(parse_rational("3.7"), 60);
  CHECK(kneading(DyadicInterval::point(a), 12, 256) == oracle::exact_kneading(a.to_rational(), 12));
  // letters stop where the enclosure cannot decide
  auto a3 = find_superattracting(window("3.8", "3.9"), 3, 60);
  CHECK(kneading(a3, 6, 256) == "RL");
}

TEST_CASE("unimodal order") {
  CHECK(cmp_unimodal("L", "R") < 0);
  CHECK(cmp_unimodal("L", "C") < 0);
  CHECK(cmp_unimodal("C", "R") < 0);
  // after an R the order flips
  CHECK(cmp_unimodal("RL", "RR") > 0);
  CHECK(cmp_unimodal("RRL", "RRR") < 0);
  CHECK(cmp_unimodal("RLL", "RLL") == 0);
  CHECK(first_difference("RLLR", "RLRR") == 2);
  // the kneading grows with the parameter
  auto k1 = oracle::exact_kneading(parse_rational("3.88"), 20), k2 = oracle::exact_kneading(parse_rational("3.95"), 20);
  CHECK(cmp_unimodal(k1, k2) < 0);
  CHECK(compare_kneading(DyadicRational::floor_at(parse_rational("3.88"), 64), k2).sign < 0);
}

TEST_CASE("backward shooting reproduces the superattracting anchors") {
  auto r2 = shoot_parameter(window("3", "4"), "RC", 48);
  CHECK(r2.a.narrower_than(47));
  CHECK(sgn(cubic(r2.a.lo.to_rational())) * sgn(cubic(r2.a.hi.to_rational())) <= 0);

  auto r3 = shoot_parameter(window("3.8", "3.9"), "RLC", 48);
  CHECK(r3.a.lo.to_double() == doctest::Approx(3.8318740552).epsilon(1e-9));
  REQUIRE(r3.shot.orbit.size() == 3);
  CHECK(r3.shot.orbit[2].contains(DyadicRational(mpz_class(1), 1)));

  // a longer word: exact forward iteration at both ends brackets the closure and follows the letters
  const std::string word = "RLLRLRRLC";
  auto r = shoot_parameter(window("3.6", "4"), word, 80);
  const Rational lo = r.a.lo.to_rational(), hi = r.a.hi.to_rational();
  CHECK(oracle::exact_kneading(lo, 8) == word.substr(0, 8));
  CHECK(oracle::exact_kneading(hi, 8) == word.substr(0, 8));
  auto residual = [](const Rational& a) -> Rational {
    Rational x(1, 2);
    for (int i = 0; i < 9; ++i) x = a * x * (1 - x);
    return x - Rational(1, 2);
  };
  CHECK(sgn(residual(lo)) * sgn(residual(hi)) < 0);
  CHECK(shooting_certifies(r.a, word, r.prec));

  CHECK_THROWS_AS(shoot_parameter(window("3.3", "3.4"), "RLC", 40), Error);
}

TEST_CASE("dwell schedules") {
  TargetProfile one;
  one.entries = {{1, Rational(1)}};
  one.tolerance = Rational(1, 8);
  auto s1 = dwell_schedule(one, 16, 16);
  REQUIRE(s1.dwells.size() == 1);
  CHECK(s1.dwells[0].orbit == 1);
  CHECK(Rational(static_cast<unsigned long>(3 * s1.dwells[0].length)) >= Rational(4) * 8 * 16);

  TargetProfile two;
  two.entries = {{1, Rational(1, 2)}, {3, Rational(1, 2)}};
  two.tolerance = Rational(1, 8);
  auto s2 = dwell_schedule(two, 16, 20);
  REQUIRE(s2.dwells.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) CHECK(abs(time_fraction(s2, i) - Rational(1, 2)) <= Rational(1, 32));
  // exact recount of the emitted schedule
  std::size_t total = s2.overhead;
  for (auto& d : s2.dwells) total += 3 * word_at(d.orbit).length() * d.length;
  CHECK(total == s2.stage_length);
  CHECK(design_letters({{1, 2}}) == "RRLRRL");
  CHECK(design_letters({{3, 1}}) == "RRLLRL");

  two.tolerance = Rational(1, 1 << 20);
  CHECK_THROWS_AS(dwell_schedule(two, 12, 20), Error);
}

TEST_CASE("pullback windows onto the fixed point of g") {
  Stage st = solve_stage(DyadicInterval::point(DyadicRational::floor_at(parse_rational("3.9"), 64)), 64);
  auto chain = pullback_windows(st, 1, 8, 48);
  REQUIRE(chain.windows.size() == 9);
  CHECK(chain.spreading);
  for (std::size_t k = 1; k < chain.windows.size(); ++k) {
    const auto& w = chain.windows[k];
    CHECK(w.interval.width() < chain.windows[k - 1].interval.width());
    CHECK(!w.outer.intersects(chain.anchor));
    // forward image lands in the predecessor
    DyadicInterval img = g_enclosure(st.a, w.interval, 256);
    CHECK(chain.windows[k - 1].outer.contains(img));
  }
  const double ratio = chain.windows[8].interval.width().to_double() / chain.windows[7].interval.width().to_double();
  CHECK(ratio == doctest::Approx(chain.contraction.mid().to_double()).epsilon(0.02));
}

TEST_CASE("tuner example 1") {
  TargetProfile p;
  p.entries = {{1, Rational(1)}};
  p.tolerance = Rational(1, 8);
  const DyadicInterval bracket{tip().hi, DyadicRational(4)};
  TuneOptions opts;
  auto t = tune(bracket, p, 0, opts);
  CHECK(bracket.contains(t.a_star));
  CHECK(t.residual < Rational(1, 8));
  CHECK(t.masses[0].achieved >= Rational(7, 8));
  CHECK(t.kneading.size() == t.stage_length + 1);
  CHECK(t.multiplier.contains(DyadicRational(0)));
  CHECK(verify_tuned(t, p, opts).empty());

  // tampering is caught
  TunedParameter bad = t;
  bad.residual += Rational(1, 1000);
  CHECK(!verify_tuned(bad, p, opts).empty());
}

TEST_CASE("tuner example 2") {
  TargetProfile p;
  p.entries = {{1, Rational(1, 2)}, {3, Rational(1, 2)}};
  p.tolerance = Rational(1, 8);
  auto t = tune({tip().hi, DyadicRational(4)}, p, 0);
  REQUIRE(t.masses.size() == 2);
  for (auto& m : t.masses) CHECK(abs(m.achieved - Rational(1, 2)) < Rational(1, 8));
  CHECK(verify_tuned(t, p, {}).empty());
}

TEST_CASE("frozen prefix survives tuning") {
  const DyadicRational before = DyadicRational::floor_at(parse_rational("3.95"), 80);
  const DyadicRational cell = before.floor_to(12);
  const DyadicInterval bracket{cell, cell + DyadicRational::pow2(-12)};
  TargetProfile p;
  p.entries = {{1, Rational(1, 2)}, {3, Rational(1, 2)}};
  p.tolerance = Rational(1, 16);
  auto t = tune(bracket, p, 12);
  LazyParameter pre = LazyParameter::exact(before);
  LazyParameter post = tuned_lazy_parameter(t);
  for (std::uint64_t m = 0; m <= 12; ++m) CHECK(pre.oracle_query(m) == post.oracle_query(m));
  CHECK_THROWS_AS(tune({cell - DyadicRational::pow2(-14), cell + DyadicRational::pow2(-14)}, p, 12), Error);
}
