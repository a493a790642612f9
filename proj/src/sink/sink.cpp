#include "logistat/sink/sink.hpp"

#include <algorithm>
#include <optional>

#include "logistat/errors.hpp"
#include "logistat/measures/empirical.hpp"
#include "logistat/measures/w1.hpp"
#include "logistat/numerics/enclosure.hpp"

namespace logistat {

namespace {

// sign of f_a^p(1/2) - 1/2 at a point parameter; 0 only for an exact hit
int critical_return_sign(const DyadicRational& a, std::uint64_t p, std::uint64_t bits) {
  const std::uint64_t base = bits + 64 + 2 * p;
  for (std::uint64_t prec = base; prec <= 16 * base; prec *= 2) {
    LogisticStep f(DyadicInterval::point(a), prec);
    FixedInterval x = FixedInterval::from(DyadicRational(mpz_class(1), 1), prec);
    for (std::uint64_t k = 0; k < p; ++k) f(x);
    switch (x.locate(scaled_half(prec))) {
      case FixedInterval::Side::Below: return -1;
      case FixedInterval::Side::Above: return 1;
      case FixedInterval::Side::Equal: return 0;
      case FixedInterval::Side::Straddle: break;
    }
  }
  fail(ErrorKind::RefinementExhausted, "sign of the critical return undecided at a = " + a.to_decimal());
}

// Newton on a -> f_a^p(1/2) - 1/2 from the middle of cur, in fixed point at scale 2^Q. Succeeds only if the
// iterates stay inside cur and the final +-2^-(bits+1) bracket shows the sign change.
std::optional<DyadicInterval> newton_polish(const DyadicInterval& cur, std::uint64_t p, std::uint64_t bits, int slo) {
  const std::uint64_t Q = bits + 2 * p + 96;
  auto scaled_at = [Q](const DyadicRational& v) { return v.scaled_floor(Q); };
  const mpz_class lo = scaled_at(cur.lo), hi = scaled_at(cur.hi) + 1;
  mpz_class one = 1;
  mpz_mul_2exp(one.get_mpz_t(), one.get_mpz_t(), Q);
  const mpz_class half = one / 2;
  mpz_class a = (lo + hi) / 2, x, dx, t, u, step;
  const std::uint64_t stop_bits = Q - bits - 8;
  bool converged = false;
  for (int it = 0; it < 80 && !converged; ++it) {
    x = half;
    dx = 0;
    for (std::uint64_t k = 0; k < p; ++k) {
      t = x * (one - x);  // scale 2^2Q
      // dx <- x(1-x) + a(1-2x) dx
      u = a * (one - 2 * x);
      u *= dx;
      mpz_fdiv_q_2exp(u.get_mpz_t(), u.get_mpz_t(), Q);
      dx = t + u;
      mpz_fdiv_q_2exp(dx.get_mpz_t(), dx.get_mpz_t(), Q);
      // x <- a x (1-x)
      x = a * t;
      mpz_fdiv_q_2exp(x.get_mpz_t(), x.get_mpz_t(), 2 * Q);
    }
    if (dx == 0) return std::nullopt;
    step = x - half;
    mpz_mul_2exp(step.get_mpz_t(), step.get_mpz_t(), Q);
    mpz_tdiv_q(step.get_mpz_t(), step.get_mpz_t(), dx.get_mpz_t());
    a -= step;
    if (a < lo || a > hi) return std::nullopt;
    converged = mpz_sizeinbase(step.get_mpz_t(), 2) < stop_bits || step == 0;
  }
  if (!converged) return std::nullopt;
  DyadicRational c = DyadicRational(a, Q).floor_to(bits + 1);
  DyadicRational eps = DyadicRational::pow2(-static_cast<std::int64_t>(bits + 1));
  DyadicInterval out{std::max(cur.lo, c - eps), std::min(cur.hi, c + eps)};
  int s1 = critical_return_sign(out.lo, p, bits);
  if (s1 == 0) return DyadicInterval::point(out.lo);
  int s2 = critical_return_sign(out.hi, p, bits);
  if (s2 == 0) return DyadicInterval::point(out.hi);
  if (s1 != slo || s2 != -slo) return std::nullopt;
  return out;
}

DyadicInterval iterate(LogisticStep& f, const DyadicInterval& x, std::uint64_t n) {
  FixedInterval y = FixedInterval::from(x, f.prec());
  for (std::uint64_t k = 0; k < n; ++k) f(y);
  return y.to_dyadic();
}

DyadicInterval intersect(const DyadicInterval& a, const DyadicInterval& b) {
  return {std::max(a.lo, b.lo), std::min(a.hi, b.hi)};
}

bool strictly_inside(const DyadicInterval& inner, const DyadicInterval& outer) {
  return outer.lo < inner.lo && inner.hi < outer.hi;
}

// floating iterate (enclosure collapsed to its lower end every step): detection only
struct Detection {
  DyadicRational point;
  std::uint64_t period = 0;
};

Detection closest_return(const DyadicRational& a, const DyadicRational& x0, std::uint64_t bits,
                         const SinkOptions& opts) {
  const std::uint64_t prec = bits + 64;
  const std::uint64_t P = opts.max_period;
  LogisticStep f(DyadicInterval::point(a), prec);
  FixedInterval y = FixedInterval::from(x0, prec);
  mpz_class tol = 1;
  mpz_mul_2exp(tol.get_mpz_t(), tol.get_mpz_t(), prec - bits / 2);
  std::vector<mpz_class> ring(P + 1);
  std::vector<std::uint64_t> run(P + 1, 0);
  mpz_class d;
  for (std::uint64_t t = 0; t < opts.budget; ++t) {
    f(y);
    y.hi = y.lo;
    ring[t % (P + 1)] = y.lo;
    for (std::uint64_t p = 1; p <= P && p <= t; ++p) {
      d = y.lo - ring[(t - p) % (P + 1)];
      if (abs(d) < tol) {
        if (++run[p] >= p + 16) {
          // polish: a few more cycles at the same precision
          for (std::uint64_t k = 0; k < 64 * p; ++k) {
            f(y);
            y.hi = y.lo;
          }
          return {y.to_dyadic().lo, p};
        }
      } else {
        run[p] = 0;
      }
    }
  }
  fail(ErrorKind::NoCycleFound, "no attracting cycle of period <= " + std::to_string(P) + " within " +
                                    std::to_string(opts.budget) + " iterations");
}

DyadicInterval derivative_product(const DyadicInterval& a, const std::vector<DyadicInterval>& xs,
                                  std::uint64_t prec) {
  DyadicInterval m = DyadicInterval::point(DyadicRational(1));
  for (const auto& x : xs) m = round_out(m * logistic_derivative(a, x, prec), prec);
  return m;
}

bool below_one(const DyadicInterval& m) { return abs(m).hi < DyadicRational(1); }

BasinSample one_sample(const DyadicRational& a, const DiscreteMeasure& sink, const DyadicRational& x,
                       const std::vector<std::uint64_t>& schedule, const Rational& tol) {
  BasinSample s;
  s.x = x;
  auto pts = certified_orbit(a, x, schedule.back(), {});
  for (std::uint64_t n : schedule) {
    Rational d = w1(DiscreteMeasure::uniform({pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(n)}), sink);
    if (!s.w1.empty() && d > s.w1.back().second) s.monotone = false;
    s.w1.emplace_back(n, d);
  }
  s.converged = s.w1.back().second < tol;
  return s;
}

void check_schedule(const std::vector<std::uint64_t>& schedule) {
  if (schedule.empty() || schedule.front() == 0 || !std::is_sorted(schedule.begin(), schedule.end()))
    fail(ErrorKind::InvalidInput, "basin schedule must be a nonempty increasing list of positive lengths");
}

}  // namespace

DyadicInterval find_superattracting(const DyadicInterval& window, std::uint64_t period, std::uint64_t bits) {
  if (period == 0) fail(ErrorKind::InvalidInput, "period must be positive");
  if (window.lo < DyadicRational(0) || window.hi > DyadicRational(4))
    fail(ErrorKind::InvalidInput, "window must lie in [0, 4]");
  DyadicInterval cur = window;
  int slo = critical_return_sign(cur.lo, period, bits);
  if (slo == 0) return DyadicInterval::point(cur.lo);
  int shi = critical_return_sign(cur.hi, period, bits);
  if (shi == 0) return DyadicInterval::point(cur.hi);
  if (slo == shi) fail(ErrorKind::NoSignChange, "f^p(1/2) - 1/2 has the same sign at both ends of the window");
  const DyadicRational target = DyadicRational::pow2(-static_cast<std::int64_t>(bits));
  auto halve = [&]() -> bool {
    DyadicRational m = cur.mid();
    int s = critical_return_sign(m, period, bits);
    if (s == 0) {
      cur = DyadicInterval::point(m);
      return false;
    }
    (s == slo ? cur.lo : cur.hi) = m;
    return true;
  };
  // long periods: bisection would need one full-precision orbit per bit
  if (period > 32) {
    for (int round = 0; round < 64 && cur.width() > target; ++round) {
      if (auto r = newton_polish(cur, period, bits, slo)) return *r;
      for (int i = 0; i < 4 && cur.width() > target; ++i)
        if (!halve()) return cur;
    }
  }
  while (cur.width() > target)
    if (!halve()) return cur;
  return cur;
}

DyadicInterval superattracting_residual(const DyadicInterval& a, std::uint64_t period, std::uint64_t prec) {
  LogisticStep f(a, prec);
  const DyadicInterval half = DyadicInterval::point(DyadicRational(mpz_class(1), 1));
  return iterate(f, half, period) - half;
}

std::vector<BasinSample> basin_samples(const DyadicRational& a, const DiscreteMeasure& sink, std::uint64_t samples,
                                       std::uint64_t seed, const std::vector<std::uint64_t>& schedule,
                                       const Rational& tol) {
  check_schedule(schedule);
  std::vector<BasinSample> out(samples);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(samples); ++i)
    out[i] = one_sample(a, sink, seeded_start(seed, i), schedule, tol);
  return out;
}

std::vector<BasinSample> basin_samples_serial(const DyadicRational& a, const DiscreteMeasure& sink,
                                              std::uint64_t samples, std::uint64_t seed,
                                              const std::vector<std::uint64_t>& schedule, const Rational& tol) {
  check_schedule(schedule);
  std::vector<BasinSample> out;
  for (std::uint64_t i = 0; i < samples; ++i) out.push_back(one_sample(a, sink, seeded_start(seed, i), schedule, tol));
  return out;
}

CycleCertificate certify_cycle(const DyadicInterval& a, const DyadicRational& point, std::uint64_t p,
                               std::uint64_t bits, std::uint64_t first_radius_bits) {
  if (p == 0) fail(ErrorKind::InvalidInput, "period must be positive");
  const std::uint64_t W = bits + 64 + 4 * p;
  LogisticStep f(a, W);
  std::uint64_t j0 = first_radius_bits ? first_radius_bits : std::max<std::uint64_t>(4, bits / 2 - 8);
  bool ok = false;
  DyadicInterval Y;
  for (std::uint64_t j = j0, tries = 0; j + 16 < W && tries < 48 && !ok; j += 4, ++tries) {
    DyadicRational delta = DyadicRational::pow2(-static_cast<std::int64_t>(j));
    DyadicInterval X0{point - delta, point + delta};
    std::vector<DyadicInterval> chain{X0};
    for (std::uint64_t i = 1; i < p; ++i) chain.push_back(iterate(f, chain.back(), 1));
    Y = iterate(f, chain.back(), 1);
    if (!strictly_inside(Y, X0)) continue;
    if (!below_one(derivative_product(a, chain, W))) continue;
    ok = true;
  }
  if (!ok) fail(ErrorKind::MultiplierInconclusive, "no contracting self-mapped neighbourhood of the cycle");

  const DyadicRational fine = DyadicRational::pow2(-static_cast<std::int64_t>(bits + 8));
  for (int it = 0; it < 256 && Y.width() > fine; ++it) {
    DyadicInterval Z = intersect(Y, iterate(f, Y, p));
    if (Z.width() >= Y.width()) break;
    Y = Z;
  }
  CycleCertificate c;
  c.orbit.push_back(Y);
  for (std::uint64_t i = 1; i < p; ++i) c.orbit.push_back(iterate(f, c.orbit.back(), 1));
  c.multiplier = derivative_product(a, c.orbit, W);
  if (!below_one(c.multiplier)) fail(ErrorKind::MultiplierInconclusive, "multiplier enclosure reaches 1");
  return c;
}

SinkCertificate certify_sink(const DyadicInterval& a, const DyadicRational& seed_point, std::uint64_t bits,
                             const SinkOptions& opts) {
  if (a.lo < DyadicRational(0) || a.hi > DyadicRational(4)) fail(ErrorKind::InvalidInput, "parameter outside [0, 4]");
  if (bits < 8) fail(ErrorKind::InvalidInput, "bits must be at least 8");
  SinkCertificate cert;
  cert.a = a;
  cert.sample_parameter = a.is_point() ? a.lo : a.mid().floor_to(bits + 64);
  if (!a.contains(cert.sample_parameter)) cert.sample_parameter = a.lo;

  Detection det = closest_return(cert.sample_parameter, seed_point, bits, opts);
  CycleCertificate cyc = certify_cycle(a, det.point, det.period, bits);
  cert.orbit = std::move(cyc.orbit);
  cert.multiplier = cyc.multiplier;
  const std::uint64_t p = det.period;

  std::vector<DyadicRational> mids;
  for (const auto& x : cert.orbit) mids.push_back(x.mid().floor_to(bits + 2));
  cert.sink_measure = DiscreteMeasure::uniform(std::move(mids));
  cert.sink_measure.meta["kind"] = "sink";
  cert.sink_measure.meta["period"] = std::to_string(p);

  cert.basin_tolerance = opts.tolerance;
  if (opts.samples) {
    cert.basin = opts.parallel ? basin_samples(cert.sample_parameter, cert.sink_measure, opts.samples, opts.seed,
                                               opts.schedule, opts.tolerance)
                               : basin_samples_serial(cert.sample_parameter, cert.sink_measure, opts.samples,
                                                      opts.seed, opts.schedule, opts.tolerance);
    cert.converged = static_cast<std::size_t>(
        std::count_if(cert.basin.begin(), cert.basin.end(), [](const BasinSample& s) { return s.converged; }));
  }
  return cert;
}

}  // namespace logistat
