#include "doctest.h"

#include <random>
#include <set>

#include "logistat/dynamics/periodic.hpp"
#include "logistat/errors.hpp"
#include "logistat/measures/empirical.hpp"
#include "logistat/measures/separating.hpp"
#include "logistat/measures/w1.hpp"
#include "oracles.hpp"

using namespace logistat;

namespace {
DyadicRational dy(long num, std::uint64_t e) { return {mpz_class(num), e}; }

DiscreteMeasure random_measure(std::mt19937_64& rng, int max_atoms) {
  int n = 1 + static_cast<int>(rng() % max_atoms);
  std::vector<std::pair<DyadicRational, Rational>> at;
  std::vector<unsigned long> w(n);
  unsigned long tot = 0;
  for (auto& x : w) tot += (x = 1 + rng() % 9);
  for (int i = 0; i < n; ++i) at.push_back({dy(static_cast<long>(rng() % 1024), 10), Rational(w[i], tot)});
  return DiscreteMeasure::from_weights(at);
}
}  // namespace

TEST_CASE("measure construction") {
  auto m = DiscreteMeasure::uniform({dy(1, 1), dy(1, 2), dy(1, 1)});
  REQUIRE(m.size() == 2);
  CHECK(m.weight(0) == Rational(1, 3));
  CHECK(m.weight(1) == Rational(2, 3));
  CHECK_THROWS_AS(DiscreteMeasure::from_counts({{dy(1, 1), 1}}, 2), Error);
  auto a = DiscreteMeasure::dirac(0), b = DiscreteMeasure::dirac(1);
  auto mix = mixture({{Rational(1, 4), &a}, {Rational(3, 4), &b}});
  CHECK(mix.weight(0) == Rational(1, 4));
}

TEST_CASE("w1 closed forms") {
  auto d0 = DiscreteMeasure::dirac(0), d1 = DiscreteMeasure::dirac(1), dh = DiscreteMeasure::dirac(dy(1, 1));
  CHECK(w1(d0, d1) == 1);
  auto half = mixture({{Rational(1, 2), &d0}, {Rational(1, 2), &d1}});
  CHECK(w1(half, dh) == Rational(1, 2));
  CHECK(w1(half, half) == 0);
  CHECK(w1(d0, half) == w1(half, d0));
}

TEST_CASE("w1 against transport oracles") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 300; ++t) {
    auto mu = random_measure(rng, 10), nu = random_measure(rng, 10);
    CHECK(w1(mu, nu) == oracle::greedy_transport(mu, nu));
  }
  for (int t = 0; t < 60; ++t) {
    auto mu = random_measure(rng, 5), nu = random_measure(rng, 5);
    CHECK(w1(mu, nu) == oracle::dual_transport(mu, nu));
  }
  // triangle inequality
  for (int t = 0; t < 100; ++t) {
    auto a = random_measure(rng, 6), b = random_measure(rng, 6), c = random_measure(rng, 6);
    CHECK(w1(a, c) <= w1(a, b) + w1(b, c));
  }
}

TEST_CASE("test functions") {
  auto t = TestFunction::trapezoid(Rational(1, 4), Rational(3, 8), Rational(5, 8), Rational(3, 4));
  CHECK(t(Rational(1, 2)) == 1);
  CHECK(t(Rational(5, 16)) == Rational(1, 2));
  CHECK(t(Rational(0)) == 0);
  CHECK(t.eval(0.3125) == doctest::Approx(0.5));
  auto s = t + Rational(-1) * t;
  CHECK(s.key() == TestFunction::constant(0).key());
  auto mu = DiscreteMeasure::uniform({dy(1, 1), dy(5, 4)});
  CHECK(integrate(t, mu) == Rational(3, 4));
  CHECK(integrate(TestFunction::constant(1), mu) == 1);
  // against a double evaluation
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    auto m = random_measure(rng, 10);
    double acc = 0;
    for (std::size_t i = 0; i < m.size(); ++i) acc += m.weight(i).get_d() * t.eval(m.atoms()[i].x.to_double());
    CHECK(integrate(t, m).get_d() == doctest::Approx(acc).epsilon(1e-12));
  }
}

TEST_CASE("tau enumeration") {
  CHECK(enumerate_tau(1).key() == TestFunction::constant(1).key());
  std::set<std::string> keys;
  for (std::size_t i = 1; i <= 2000; ++i) keys.insert(enumerate_tau(i).key());
  CHECK(keys.size() == 2000);
  for (std::size_t i = 1; i <= 50; ++i) CHECK(enumerate_tau(i) == enumerate_tau(i));
  // encoding round trip
  std::vector<TauTerm> terms{{Rational(1), Rational(1, 8), Rational(1, 4), Rational(3, 8), Rational(1, 2)},
                             {Rational(-2, 3), Rational(1, 2), Rational(5, 8), Rational(3, 4), Rational(7, 8)}};
  TestFunction f;
  REQUIRE(decode_tau(encode_tau(terms), f));
  auto expect = TestFunction::trapezoid(Rational(1, 8), Rational(1, 4), Rational(3, 8), Rational(1, 2)) +
                Rational(-2, 3) * TestFunction::trapezoid(Rational(1, 2), Rational(5, 8), Rational(3, 4), Rational(7, 8));
  CHECK(f == expect);
  for (int z = 0; z < 200; ++z) {
    auto [a, b] = cantor_unpair(mpz_class(z));
    CHECK(cantor_pair(a, b) == z);
  }
}

TEST_CASE("separating test functions") {
  Stage st = solve_stage(DyadicInterval::around(parse_rational("3.9"), 200), 80);
  auto s3 = separating_tau(st, 3, {4, 5}, 64);
  auto s3w = separating_tau(st, 3, {4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14}, 64);
  auto lam = lambda_measure(st, 3, 64);
  CHECK(integrate(s3.tau, lam) == 1);
  CHECK(integrate(s3w.tau, lam) == 1);
  CHECK(s3w.radius <= s3.radius);
  for (std::size_t j = 4; j <= 14; ++j) CHECK(integrate(s3w.tau, lambda_measure(st, j, 64)) == 0);
  TestFunction f;
  REQUIRE(decode_tau(s3.code, f));
  CHECK(f == s3.tau);
}

TEST_CASE("birkhoff measures") {
  auto two = DyadicInterval::point(2), half = DyadicInterval::point(dy(1, 1));
  auto m = birkhoff_measure(two, half, 5);
  REQUIRE(m.size() == 1);
  CHECK(m.atoms()[0].x == dy(1, 1));
  auto four = DyadicInterval::point(4);
  auto r = birkhoff_measure(four, DyadicInterval::around(Rational(2, 5), 200), 3);
  REQUIRE(r.size() == 3);
  // 0.4, 0.96, 0.1536 exactly
  Rational exact[3] = {Rational(2, 5), Rational(24, 25), Rational(1536, 10000)};
  Rational sorted[3] = {exact[2], exact[0], exact[1]};
  for (int i = 0; i < 3; ++i) {
    Rational e = r.atoms()[i].x.to_rational() - sorted[i];
    CHECK(abs(e) < rational_pow2(-60));
    CHECK(r.weight(i) == Rational(1, 3));
  }
  auto w = birkhoff_measure(4, Rational(3, 10), 2000);
  CHECK(w.size() == 2000);
}

TEST_CASE("monte carlo measures") {
  DyadicRational a4(4);
  auto p = monte_carlo_measure(a4, 16, 500, 9);
  auto s = monte_carlo_measure_serial(a4, 16, 500, 9);
  CHECK(p == s);
  auto pc = monte_carlo_measure(dy(31, 3), 3, 40, 2, OrbitArithmetic::Certified);
  auto sc = monte_carlo_measure_serial(dy(31, 3), 3, 40, 2, OrbitArithmetic::Certified);
  CHECK(pc == sc);
  // k = 1 agrees with the Birkhoff measure started one step later
  DyadicRational a(mpz_class(31), 3);
  auto mc = monte_carlo_measure(a, 1, 50, 4, OrbitArithmetic::Certified);
  DyadicRational x0 = seeded_start(4, 0);
  DyadicRational x1 = a * x0 * (DyadicRational(1) - x0);
  auto bk = birkhoff_measure(DyadicInterval::point(a), DyadicInterval::point(x1), 50);
  CHECK(w1(mc, bk) < rational_pow2(-60));
  CHECK(monte_carlo_measure(a4, 4, 100, 1) == monte_carlo_measure(a4, 4, 100, 1));
  CHECK_FALSE(monte_carlo_measure(a4, 4, 100, 1) == monte_carlo_measure(a4, 4, 100, 2));
}

TEST_CASE("omega diagnostic and mass near") {
  auto rep = omega_diagnostic(4, Rational(3, 10),
                              {10, 100, 1000, 10000}, Rational(1, 10));
  CHECK(rep.converged);
  CHECK(rep.gaps.size() == 3);
  auto m = DiscreteMeasure::uniform({dy(1, 2), dy(1, 1), dy(3, 2)});
  CHECK(mass_near(m, {DyadicInterval::point(dy(1, 1))}, Rational(1, 4)) == 1);
  CHECK(mass_near(m, {DyadicInterval::point(dy(1, 1))}, Rational(1, 8)) == Rational(1, 3));
  CHECK(mass_near(m, {DyadicInterval::point(dy(1, 1)), DyadicInterval::point(dy(5, 3))}, Rational(1, 8)) == Rational(2, 3));
}
