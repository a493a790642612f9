#include "doctest.h"

#include "logistat/errors.hpp"
#include "logistat/numerics/bisect.hpp"
#include "logistat/numerics/enclosure.hpp"
#include "logistat/numerics/lazy_parameter.hpp"

using namespace logistat;

namespace {
DyadicRational d(const char* s) {
  Rational q = parse_rational(s);
  return DyadicRational::floor_at(q, 200);
}
}  // namespace

TEST_CASE("dyadic canonical form and arithmetic") {
  DyadicRational x(mpz_class(12), 4);
  CHECK(x.num() == 3);
  CHECK(x.exp() == 2);
  CHECK(x.to_decimal() == "0.75");
  CHECK((x + DyadicRational(1)).to_decimal() == "1.75");
  CHECK((x * x).to_rational() == Rational(9, 16));
  CHECK(DyadicRational::from_double(0.1).to_rational() == Rational(3602879701896397, mpz_class("36028797018963968")));
  CHECK(DyadicRational(-3).shifted(-3).to_decimal() == "-0.375");
  CHECK(DyadicRational(mpz_class(1), 3) < DyadicRational(mpz_class(3), 4));
  CHECK(parse_rational("3.5") == Rational(7, 2));
  CHECK(parse_rational("1e-3") == Rational(1, 1000));
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK_THROWS(parse_rational("abc"));
  CHECK(neg_log2_floor(Rational(1, 8)) == 3);
  CHECK(neg_log2_floor(Rational(1, 9)) == 3);
}

TEST_CASE("exact iteration at a = 3.5 from 0.5") {
  // 7/8, 49/128, 27097/32768 by exact rational arithmetic
  Rational a(7, 2), x(1, 2);
  for (int i = 0; i < 3; ++i) x = a * x * (1 - x);
  CHECK(x == Rational(27097, 32768));
  DyadicInterval e = iterate_enclosure(DyadicInterval::point(DyadicRational(mpz_class(7), 1)),
                                       DyadicInterval::point(DyadicRational(mpz_class(1), 1)), 3, 64);
  CHECK(e.is_point());
  CHECK(e.lo.to_rational() == Rational(27097, 32768));
}

TEST_CASE("enclosures contain the true orbit and grow for wide a") {
  Rational a(39, 10), x(1, 3);
  auto A = DyadicInterval::around(a, 80);
  auto X = DyadicInterval::around(x, 80);
  auto orbit = orbit_enclosures(A, X, 12, 80);
  for (int i = 1; i <= 12; ++i) {
    x = a * x * (1 - x);
    CHECK(orbit[i].contains(x));
  }
  auto wide = iterate_enclosure(A, X, 2000, 80);
  CHECK(wide.width() > DyadicRational(mpz_class(1), 1));
  CHECK_THROWS_AS(iterate_enclosure(A, {DyadicRational(-1), DyadicRational(2)}, 1, 80), Error);
}

TEST_CASE("enclosure of an interval straddling the critical point") {
  auto e = iterate_enclosure(DyadicInterval::point(DyadicRational(4)), {d("0.25"), d("0.75")}, 1, 32);
  CHECK(e.lo == d("0.75"));
  CHECK(e.hi == DyadicRational(1));
}

TEST_CASE("bisect_monotone") {
  // x^2 >= 2 on [1, 2]
  BisectStats st;
  auto r = bisect_monotone([](const DyadicRational& x) { return x * x >= DyadicRational(2); },
                           {DyadicRational(1), DyadicRational(2)}, 30, &st);
  CHECK(r.narrower_than(30));
  CHECK(r.lo * r.lo < DyadicRational(2));
  CHECK(r.hi * r.hi >= DyadicRational(2));
  CHECK(st.evaluations <= 32);
  CHECK_THROWS_AS(bisect_monotone([](const DyadicRational&) { return true; }, {DyadicRational(0), DyadicRational(1)}, 8),
                  Error);
  // a^3 - 4a^2 + 8 changes sign at 1 + sqrt 5 in [3, 4]
  auto cubic = [](const DyadicRational& a) { return a * a * a - DyadicRational(4) * a * a + DyadicRational(8) >= DyadicRational(0); };
  auto g = bisect_monotone(cubic, {DyadicRational(3), DyadicRational(4)}, 40);
  CHECK(g.lo.to_double() == doctest::Approx(3.2360679774997896).epsilon(1e-12));
  BisectOptions opts{64, 7};
  auto bumpy = [](const DyadicRational& x) { return x >= d("0.3") && !(x >= d("0.5") && x < d("0.6")); };
  CHECK_THROWS_AS(bisect_monotone(bumpy, {DyadicRational(0), DyadicRational(1)}, 10, nullptr, opts), Error);
}

TEST_CASE("oracle answers") {
  auto p = LazyParameter::exact(d("3.5"));
  CHECK(p.oracle_query(1).to_rational() == Rational(7, 2));
  auto t = LazyParameter::rational(Rational(1, 3));
  CHECK(t.oracle_query(2).to_rational() == Rational(1, 4));
  for (std::uint64_t m = 1; m < 60; ++m) {
    auto phi = t.oracle_query(m).to_rational();
    Rational diff = phi - Rational(1, 3);
    CHECK(abs(diff) < rational_pow2(-static_cast<std::int64_t>(m - 1)));
    CHECK(t.oracle_query(m) == t.oracle_query(m));
  }
  auto f = LazyParameter::fixed({d("0.25"), d("0.375")});
  CHECK_THROWS_AS(f.refine(10), Error);
  f.freeze(1);
  CHECK(f.frozen_bits() == 1);
  CHECK_THROWS_AS(f.freeze(3), Error);
}
