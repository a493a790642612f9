#include "logistat/dynamics/stage.hpp"

#include <optional>

#include "logistat/errors.hpp"
#include "logistat/numerics/bisect.hpp"

namespace logistat {

void apply_g(LogisticStep& f, FixedInterval& x) {
  f(x);
  f(x);
  f(x);
}

DyadicInterval g_enclosure(const DyadicInterval& a, const DyadicInterval& x, std::uint64_t prec) {
  LogisticStep f(a, prec);
  FixedInterval y = FixedInterval::from(x, prec);
  apply_g(f, y);
  return y.to_dyadic();
}

namespace {

// -1: value certainly below t, +1 above, 0 undecided
int certain_side(const DyadicInterval& v, const DyadicInterval& t) {
  if (v.hi < t.lo) return -1;
  if (v.lo > t.hi) return 1;
  return 0;
}

DyadicInterval one_minus(const DyadicInterval& x) { return {DyadicRational(1) - x.hi, DyadicRational(1) - x.lo}; }

// Sign of g(x) - t at a grid point x, escalating precision a few times.
int g_side(const DyadicInterval& a, const DyadicRational& x, const DyadicInterval& t, std::uint64_t prec) {
  for (int attempt = 0; attempt < 4; ++attempt, prec *= 2) {
    int s = certain_side(g_enclosure(a, DyadicInterval::point(x), prec), t);
    if (s != 0) return s;
  }
  return 0;
}

}  // namespace

Stage solve_stage(const DyadicInterval& a, std::uint64_t bits) {
  const std::uint64_t prec = bits + 48;
  const DyadicRational half(mpz_class(1), 1);
  Stage st;
  st.a = a;
  st.bits = bits;
  if (a.lo <= DyadicRational(3) || a.hi > DyadicRational(4)) fail(ErrorKind::InvalidInput, "parameter outside (c, 4]");

  // smallest root of g(x) = x above 1/2: scan for the first certified sign change
  auto fx = [&](const DyadicRational& x) { return g_side(a, x, DyadicInterval::point(x), prec); };
  DyadicRational prev = half;
  std::optional<DyadicInterval> bracket;
  for (int j = 129; j < 256; ++j) {
    DyadicRational x(mpz_class(j), 8);
    int s = fx(x);
    if (s == 0) fail(ErrorKind::Undecidable, "sign of g(x) - x undecided while scanning for beta");
    if (s > 0) {
      bracket = DyadicInterval{prev, x};
      break;
    }
    prev = x;
  }
  if (!bracket) fail(ErrorKind::InvalidInput, "no fixed point of g above 1/2; parameter outside (c, 4]");
  auto above = [&](const DyadicRational& x) {
    int s = fx(x);
    if (s == 0) fail(ErrorKind::Undecidable, "parameter enclosure too wide to resolve beta");
    return s > 0;
  };
  st.beta = bisect_monotone(above, *bracket, bits + 16);
  st.beta_prime = one_minus(st.beta);

  // g(1/2) must fall below beta'
  DyadicInterval g_half = g_enclosure(a, DyadicInterval::point(half), prec);
  if (certain_side(g_half, st.beta_prime) >= 0)
    fail(ErrorKind::InvalidInput, "g(1/2) does not fall below beta'; parameter outside (c, 4]");

  // l: g(l) = beta' with g decreasing on [beta', 1/2]
  auto below_bp = [&](const DyadicRational& x) {
    int s = g_side(a, x, st.beta_prime, prec);
    if (s == 0) fail(ErrorKind::Undecidable, "parameter enclosure too wide to resolve l");
    return s < 0;
  };
  st.l = bisect_monotone(below_bp, {st.beta_prime.hi, half}, bits);
  st.r = one_minus(st.l);

  // laps: f(L) and f^2(L) avoid the critical point, so g is monotone on L and (by symmetry) on R
  LogisticStep f(a, prec);
  FixedInterval lap = FixedInterval::from(DyadicInterval{st.beta_prime.lo, st.l.hi}, prec);
  if (lap.locate(scaled_half(prec)) != FixedInterval::Side::Below)
    fail(ErrorKind::BranchLost, "left branch reaches the critical point");
  for (int k = 0; k < 2; ++k) {
    f(lap);
    if (lap.locate(scaled_half(prec)) == FixedInterval::Side::Straddle ||
        lap.locate(scaled_half(prec)) == FixedInterval::Side::Equal)
      fail(ErrorKind::BranchLost, "branch of g is not monotone on L");
  }
  return st;
}

Stage solve_stage(LazyParameter& a, std::uint64_t bits) { return solve_stage(a.refine(bits + 24), bits); }

namespace {

// sign of g^2(1/2) - g^3(1/2) at a point parameter; 0 if undecided at the given precision
int tip_sign(const DyadicRational& a, std::uint64_t prec) {
  auto orbit = orbit_enclosures(DyadicInterval::point(a), DyadicInterval::point(DyadicRational(mpz_class(1), 1)), 9,
                                prec);
  return certain_side(orbit[6], orbit[9]);
}

int tip_sign_adaptive(const DyadicRational& a, std::uint64_t prec, std::uint64_t cap) {
  for (; prec <= cap; prec *= 2)
    if (int s = tip_sign(a, prec)) return s;
  return 0;
}

}  // namespace

DyadicInterval find_tip_c(std::uint64_t bits) {
  const std::uint64_t prec = bits + 96, cap = 8 * bits + 1024;
  // 3.85 rounded up to the 2^-10 grid, then march to 4
  DyadicRational lo = DyadicRational::ceil_at(Rational(385, 100), 10);
  int s0 = tip_sign_adaptive(lo, prec, cap);
  if (s0 == 0) fail(ErrorKind::Undecidable, "tip equation undecided at the left end of the scan");
  DyadicRational step(mpz_class(1), 10);
  for (DyadicRational x = lo + step; x < DyadicRational(4); x += step) {
    int s = tip_sign_adaptive(x, prec, cap);
    if (s == 0) fail(ErrorKind::Undecidable, "tip equation undecided during the scan");
    if (s != s0) {
      auto pred = [&](const DyadicRational& a) {
        int v = tip_sign_adaptive(a, prec, cap);
        if (v == 0) fail(ErrorKind::Undecidable, "tip equation undecided near the root");
        return v != s0;
      };
      DyadicInterval c = bisect_monotone(pred, {x - step, x}, bits);
      TipCertificate cert = certify_tip(c, prec);
      if (cert.separated && cert.fold) return c;
      s0 = s;  // a root without the fold structure: keep scanning
    }
  }
  fail(ErrorKind::NotFound, "no tip parameter in (3.85, 4)");
}

TipCertificate certify_tip(const DyadicInterval& c, std::uint64_t prec) {
  TipCertificate t;
  t.c = c;
  auto orbit = orbit_enclosures(c, DyadicInterval::point(DyadicRational(mpz_class(1), 1)), 9, prec);
  t.g1 = orbit[3];
  t.g2 = orbit[6];
  t.g3 = orbit[9];
  t.residual = t.g2 - t.g3;
  t.separated = !t.g1.intersects(t.g2);
  // single turning point on I = [1 - g2, g2]: f(I) and f^2(I) avoid 1/2
  DyadicInterval I{DyadicRational(1) - t.g2.hi, t.g2.hi};
  if (I.hi <= DyadicRational(mpz_class(1), 1)) return t;
  LogisticStep f(c, prec);
  FixedInterval y = FixedInterval::from(I, prec);
  bool ok = true;
  for (int k = 0; k < 2; ++k) {
    f(y);
    auto side = y.locate(scaled_half(prec));
    ok = ok && (side == FixedInterval::Side::Below || side == FixedInterval::Side::Above);
  }
  t.fold = ok;
  return t;
}

}  // namespace logistat
