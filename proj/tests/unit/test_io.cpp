#include "doctest.h"

#include <filesystem>

#include "logistat/dynamics/stage.hpp"
#include "logistat/errors.hpp"
#include "logistat/io/cache.hpp"
#include "logistat/io/serialize.hpp"

using namespace logistat;

TEST_CASE("exact number encodings") {
  const DyadicRational x(mpz_class(-13), 5);
  CHECK(io::to_json(x) == "-0.40625");
  CHECK(io::dyadic_from_json(io::to_json(x)) == x);
  CHECK(io::parse_dyadic("3") == DyadicRational(3));
  CHECK_THROWS_AS(io::parse_dyadic("0.1/3"), Error);
  const Rational q(7, 12);
  CHECK(io::rational_from_json(io::to_json(q)) == q);
  const DyadicInterval iv{DyadicRational(mpz_class(1), 3), DyadicRational(mpz_class(3), 2)};
  CHECK(io::interval_from_json(io::to_json(iv)) == iv);
  // binary floats are refused: only exact strings are accepted
  CHECK_THROWS_AS(io::dyadic_from_json(io::Json(0.5)), Error);
}

TEST_CASE("hashing") {
  CHECK(io::hex64(io::fnv1a64("")) == "cbf29ce484222325");
  CHECK(io::hex64(io::fnv1a64("a")) == "af63dc4c8601ec8c");
  CHECK(io::hex64(io::fnv1a64("foobar")) == "85944171f73967e8");
}

TEST_CASE("measure, tau and profile round trips") {
  auto mu = DiscreteMeasure::from_weights({{DyadicRational(mpz_class(1), 2), Rational(1, 3)},
                                           {DyadicRational(mpz_class(3), 2), Rational(2, 3)}});
  const auto j = io::to_json(mu);
  CHECK(j["schema"] == "logistat.measure");
  const auto back = io::measure_from_json(j);
  CHECK(back.atoms() == mu.atoms());
  CHECK(back.denominator() == mu.denominator());
  CHECK(io::measure_csv(mu) == "x,w\n0.25,1/3\n0.75,2/3\n");

  const TestFunction tau =
      TestFunction::trapezoid(Rational(1, 8), Rational(1, 4), Rational(1, 3), Rational(1, 2)) + TestFunction::constant(Rational(1, 5));
  CHECK(io::tau_from_json(io::to_json(tau)) == tau);

  TargetProfile p;
  p.entries = {{1, Rational(1, 2)}, {3, Rational(1, 2), true}};
  p.tolerance = Rational(1, 8);
  const auto pb = io::profile_from_json(io::to_json(p));
  CHECK(io::to_json(pb) == io::to_json(p));
  CHECK(pb.entries[1].slack);

  io::Json wrong = j;
  wrong["version"] = 99;
  CHECK_THROWS_AS(io::measure_from_json(wrong), Error);
}

TEST_CASE("tune cache stores, re-verifies and rejects tampering") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "logistat-cache-test";
  fs::remove_all(dir);
  io::TuneCache cache(dir.string());

  const DyadicInterval c = find_tip_c(40);
  const DyadicInterval bracket{c.hi, DyadicRational(4)};
  TargetProfile p;
  p.entries = {{1, Rational(1)}};
  p.tolerance = Rational(1, 8);
  TuneOptions opts;

  const auto first = io::tune_cached(&cache, bracket, p, 0, opts);
  CHECK(cache.misses() == 1);
  const auto second = io::tune_cached(&cache, bracket, p, 0, opts);
  CHECK(cache.hits() == 1);
  CHECK(io::dump(io::to_json(first)) == io::dump(io::to_json(second)));
  CHECK(io::dump(io::to_json(io::tuned_from_json(io::to_json(first)))) == io::dump(io::to_json(first)));

  // corrupt the stored residual: the hit fails verification and is recomputed
  const auto req = io::TuneCache::request(bracket, p, 0, opts);
  const fs::path file = dir / ("tune-" + io::TuneCache::key(req) + ".json");
  REQUIRE(fs::exists(file));
  io::Json stored = io::read_json_file(file.string());
  stored["result"]["residual"] = "1/1000";
  io::write_text_file(file.string(), io::dump(stored));
  const auto third = io::tune_cached(&cache, bracket, p, 0, opts);
  CHECK(cache.hits() == 1);
  CHECK(third.residual == first.residual);
  fs::remove_all(dir);
}
