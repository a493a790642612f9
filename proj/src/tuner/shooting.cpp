#include "logistat/tuner/shooting.hpp"

#include <algorithm>
#include <optional>

#include "logistat/errors.hpp"

namespace logistat {

int Shot::sign() const {
  switch (status) {
    case Status::Undefined:
      return -1;
    case Status::Undecided:
      return 0;
    case Status::Defined:
      if (residual.lo.sign() > 0) return 1;
      if (residual.hi.sign() < 0) return -1;
      return 0;
  }
  return 0;
}

Shot shoot(const DyadicInterval& a, const std::string& word, std::uint64_t prec, bool keep_orbit) {
  const std::size_t P = word.size();
  if (P == 0 || word.back() != 'C') fail(ErrorKind::InvalidInput, "shooting word must end in C");
  if (a.lo.sign() <= 0) fail(ErrorKind::InvalidInput, "parameter must be positive");
  const auto Q = static_cast<mp_bitcnt_t>(prec);
  const mpz_class al = a.lo.scaled_floor(prec), ah = a.hi.scaled_ceil(prec);
  mpz_class one = 1;
  mpz_mul_2exp(one.get_mpz_t(), one.get_mpz_t(), Q);
  mpz_class yl = one / 2, yh = yl;
  mpz_class ul, uh, tl, th, sl, sh, n;

  Shot out;
  if (keep_orbit) out.orbit.resize(P);
  if (keep_orbit) out.orbit[P - 1] = DyadicInterval::point(DyadicRational(mpz_class(1), 1));
  for (std::size_t j = P - 1; j-- > 0;) {
    const char w = word[j];
    if (w != 'L' && w != 'R') fail(ErrorKind::InvalidInput, "shooting word has C before its end");
    // u = 4y/a, t = 1 - u, preimages (1 -+ sqrt t)/2
    mpz_mul_2exp(n.get_mpz_t(), yl.get_mpz_t(), Q + 2);
    mpz_fdiv_q(ul.get_mpz_t(), n.get_mpz_t(), ah.get_mpz_t());
    mpz_mul_2exp(n.get_mpz_t(), yh.get_mpz_t(), Q + 2);
    mpz_cdiv_q(uh.get_mpz_t(), n.get_mpz_t(), al.get_mpz_t());
    mpz_sub(tl.get_mpz_t(), one.get_mpz_t(), uh.get_mpz_t());
    mpz_sub(th.get_mpz_t(), one.get_mpz_t(), ul.get_mpz_t());
    if (sgn(th) < 0) {
      out.status = Shot::Status::Undefined;
      out.failed_at = j;
      if (keep_orbit) out.orbit.clear();
      return out;
    }
    if (sgn(tl) <= 0) {
      out.status = Shot::Status::Undecided;
      out.failed_at = j;
      if (keep_orbit) out.orbit.clear();
      return out;
    }
    mpz_mul_2exp(n.get_mpz_t(), tl.get_mpz_t(), Q);
    mpz_sqrt(sl.get_mpz_t(), n.get_mpz_t());
    mpz_mul_2exp(n.get_mpz_t(), th.get_mpz_t(), Q);
    mpz_sqrt(sh.get_mpz_t(), n.get_mpz_t());
    sh += 1;
    if (w == 'L') {
      n = one - sh;
      mpz_fdiv_q_2exp(yl.get_mpz_t(), n.get_mpz_t(), 1);
      n = one - sl;
      mpz_cdiv_q_2exp(yh.get_mpz_t(), n.get_mpz_t(), 1);
      if (sgn(yl) < 0) yl = 0;
    } else {
      n = one + sl;
      mpz_fdiv_q_2exp(yl.get_mpz_t(), n.get_mpz_t(), 1);
      n = one + sh;
      mpz_cdiv_q_2exp(yh.get_mpz_t(), n.get_mpz_t(), 1);
      if (yh > one) yh = one;
    }
    if (keep_orbit) out.orbit[j] = {DyadicRational(yl, prec), DyadicRational(yh, prec)};
  }
  mpz_class rl, rh;
  mpz_fdiv_q_2exp(rl.get_mpz_t(), al.get_mpz_t(), 2);
  mpz_cdiv_q_2exp(rh.get_mpz_t(), ah.get_mpz_t(), 2);
  out.residual = {DyadicRational(rl - yh, prec), DyadicRational(rh - yl, prec)};
  out.status = Shot::Status::Defined;
  return out;
}

namespace {

std::uint64_t bit_length(std::size_t n) {
  std::uint64_t b = 0;
  while (n) {
    ++b;
    n >>= 1;
  }
  return b;
}

}  // namespace

std::uint64_t shooting_precision(const DyadicInterval& a, std::size_t word_length, std::uint64_t bits) {
  return std::max<std::uint64_t>({bits, a.lo.exp(), a.hi.exp()}) + 64 + 2 * bit_length(word_length);
}

bool shooting_certifies(const DyadicInterval& a, const std::string& word, std::uint64_t prec, Shot* out) {
  Shot s = shoot(a, word, prec, out != nullptr);
  if (s.status != Shot::Status::Defined) return false;
  if (shoot(DyadicInterval::point(a.lo), word, prec).sign() != -1) return false;
  if (shoot(DyadicInterval::point(a.hi), word, prec).sign() != 1) return false;
  if (out) *out = std::move(s);
  return true;
}

ShootingRoot shoot_parameter(const DyadicInterval& window, const std::string& word, std::uint64_t bits) {
  std::uint64_t Q = shooting_precision(window, word.size(), bits);
  ShootingRoot root;
  auto eval = [&](const DyadicRational& c) {
    ++root.evaluations;
    Shot s = shoot(DyadicInterval::point(c), word, Q);
    for (int k = 0; k < 3 && s.sign() == 0; ++k) {
      Q += 64;
      s = shoot(DyadicInterval::point(c), word, Q);
    }
    return s;
  };
  auto value = [](const Shot& s) -> std::optional<Rational> {
    if (s.status != Shot::Status::Defined) return std::nullopt;
    return s.residual.mid().to_rational();
  };

  DyadicRational lo = window.lo, hi = window.hi;
  Shot slo = eval(lo), shi = eval(hi);
  if (slo.sign() != -1 || shi.sign() != 1)
    fail(ErrorKind::NonMonotoneKneading, "window does not bracket the kneading word");
  std::optional<Rational> flo = value(slo), fhi = value(shi);
  const DyadicRational eps = DyadicRational::pow2(-static_cast<std::int64_t>(bits));
  int last_side = 0;
  unsigned stalled = 0;
  bool near_root = false;
  DyadicRational centre;

  while (hi - lo > eps) {
    const DyadicRational width = hi - lo;
    DyadicRational c = midpoint(lo, hi);
    if (flo && fhi && stalled < 2) {
      Rational frac = *flo / (*flo - *fhi);
      DyadicRational s = DyadicRational::floor_at(lo.to_rational() + width.to_rational() * frac, Q - 8);
      if (lo < s && s < hi) c = s;
    }
    Shot sc = eval(c);
    const int sg = sc.sign();
    if (sg == 0) {
      near_root = true;
      centre = c;
      break;
    }
    if (sg < 0) {
      lo = c;
      flo = value(sc);
      if (last_side < 0 && fhi) *fhi /= 2;
      last_side = -1;
    } else {
      hi = c;
      fhi = value(sc);
      if (last_side > 0 && flo) *flo /= 2;
      last_side = 1;
    }
    // fall back to bisection while false position shrinks slowly
    stalled = (hi - lo) * DyadicRational(2) > width ? stalled + 1 : 0;
    if (stalled > 2) stalled = 0;
  }
  if (near_root) {
    const DyadicRational r = DyadicRational::pow2(-static_cast<std::int64_t>(bits) - 2);
    lo = std::max(lo, centre - r);
    hi = std::min(hi, centre + r);
    if (eval(lo).sign() != -1 || eval(hi).sign() != 1)
      fail(ErrorKind::WindowCollapse, "root of the shooting residual not isolated at 2^-" + std::to_string(bits));
  }
  root.a = {lo, hi};
  bool ok = shooting_certifies(root.a, word, Q, &root.shot);
  if (!ok) ok = shooting_certifies(root.a, word, Q += 64, &root.shot);
  if (!ok) fail(ErrorKind::WindowCollapse, "shooting root not certified over the final parameter enclosure");
  root.prec = Q;
  return root;
}

}  // namespace logistat
