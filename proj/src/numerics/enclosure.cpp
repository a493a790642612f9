#include "logistat/numerics/enclosure.hpp"

#include <algorithm>

#include "logistat/errors.hpp"

namespace logistat {

FixedInterval FixedInterval::from(const DyadicInterval& x, std::uint64_t prec) {
  return {prec, x.lo.scaled_floor(prec), x.hi.scaled_ceil(prec)};
}

FixedInterval FixedInterval::from(const Rational& x, std::uint64_t prec) {
  return from(DyadicInterval::around(x, prec), prec);
}

DyadicInterval FixedInterval::to_dyadic() const { return {DyadicRational(lo, prec), DyadicRational(hi, prec)}; }

FixedInterval::Side FixedInterval::locate(const mpz_class& t) const {
  if (hi < t) return Side::Below;
  if (lo > t) return Side::Above;
  if (lo == t && hi == t) return Side::Equal;
  return Side::Straddle;
}

mpz_class scaled(const DyadicRational& x, std::uint64_t prec) {
  if (x.exp() > prec) fail(ErrorKind::InvalidInput, "value not representable at this precision");
  return x.scaled_floor(prec);
}

mpz_class scaled_half(std::uint64_t prec) {
  mpz_class h = 1;
  mpz_mul_2exp(h.get_mpz_t(), h.get_mpz_t(), prec - 1);
  return h;
}

LogisticStep::LogisticStep(const DyadicInterval& a, std::uint64_t prec) : a_(a), prec_(prec) {
  if (prec < 4) fail(ErrorKind::InvalidInput, "precision too small");
  if (a.lo.sign() < 0) fail(ErrorKind::InvalidInput, "negative parameter");
  al_ = a.lo.scaled_floor(prec);
  ah_ = a.hi.scaled_ceil(prec);
  point_ = al_ == ah_;
  half_ = scaled_half(prec);
  quarter_ = 1;
  mpz_mul_2exp(quarter_.get_mpz_t(), quarter_.get_mpz_t(), prec - 2);
}

// lower bound of x - x^2 at the grid point x
void LogisticStep::q_lo(const mpz_class& x, mpz_class& out) {
  mpz_mul(sq_.get_mpz_t(), x.get_mpz_t(), x.get_mpz_t());
  mpz_cdiv_q_2exp(sq_.get_mpz_t(), sq_.get_mpz_t(), prec_);
  mpz_sub(out.get_mpz_t(), x.get_mpz_t(), sq_.get_mpz_t());
}

void LogisticStep::q_hi(const mpz_class& x, mpz_class& out) {
  mpz_mul(sq_.get_mpz_t(), x.get_mpz_t(), x.get_mpz_t());
  mpz_fdiv_q_2exp(sq_.get_mpz_t(), sq_.get_mpz_t(), prec_);
  mpz_sub(out.get_mpz_t(), x.get_mpz_t(), sq_.get_mpz_t());
}

void LogisticStep::operator()(FixedInterval& x) {
  if (x.prec != prec_) fail(ErrorKind::InvalidInput, "precision mismatch");
  if (x.hi <= half_) {
    q_lo(x.lo, ql_);
    if (x.lo == x.hi) {
      // point: floor and ceil of the square differ by at most one
      mpz_mul(t_.get_mpz_t(), x.lo.get_mpz_t(), x.lo.get_mpz_t());
      mpz_fdiv_q_2exp(t_.get_mpz_t(), t_.get_mpz_t(), prec_);
      mpz_sub(qh_.get_mpz_t(), x.lo.get_mpz_t(), t_.get_mpz_t());
    } else {
      q_hi(x.hi, qh_);
    }
  } else if (x.lo >= half_) {
    q_lo(x.hi, ql_);
    q_hi(x.lo, qh_);
  } else {
    q_lo(x.lo, ql_);
    q_lo(x.hi, t_);
    if (t_ < ql_) mpz_swap(ql_.get_mpz_t(), t_.get_mpz_t());
    qh_ = quarter_;
  }
  const mpz_class& alo = (point_ || sgn(ql_) >= 0) ? al_ : ah_;
  const mpz_class& ahi = (point_ || sgn(qh_) >= 0) ? ah_ : al_;
  mpz_mul(x.lo.get_mpz_t(), alo.get_mpz_t(), ql_.get_mpz_t());
  mpz_fdiv_q_2exp(x.lo.get_mpz_t(), x.lo.get_mpz_t(), prec_);
  mpz_mul(x.hi.get_mpz_t(), ahi.get_mpz_t(), qh_.get_mpz_t());
  mpz_cdiv_q_2exp(x.hi.get_mpz_t(), x.hi.get_mpz_t(), prec_);
}

namespace {
void check_width(const FixedInterval& x) {
  mpz_class w = x.hi - x.lo;
  if (mpz_sizeinbase(w.get_mpz_t(), 2) > x.prec) {
    mpz_class one = 1;
    mpz_mul_2exp(one.get_mpz_t(), one.get_mpz_t(), x.prec);
    if (w > one) fail(ErrorKind::EnclosureBlowup, "enclosure wider than 1; raise work_bits");
  }
}
}  // namespace

DyadicInterval iterate_enclosure(const DyadicInterval& a, const DyadicInterval& x, std::uint64_t n,
                                 std::uint64_t work_bits) {
  LogisticStep f(a, work_bits);
  FixedInterval y = FixedInterval::from(x, work_bits);
  for (std::uint64_t i = 0; i < n; ++i) {
    f(y);
    check_width(y);
  }
  return y.to_dyadic();
}

std::vector<DyadicInterval> orbit_enclosures(const DyadicInterval& a, const DyadicInterval& x, std::uint64_t n,
                                             std::uint64_t work_bits) {
  LogisticStep f(a, work_bits);
  FixedInterval y = FixedInterval::from(x, work_bits);
  std::vector<DyadicInterval> out;
  out.reserve(n + 1);
  out.push_back(y.to_dyadic());
  for (std::uint64_t i = 0; i < n; ++i) {
    f(y);
    check_width(y);
    out.push_back(y.to_dyadic());
  }
  return out;
}

DyadicInterval operator+(const DyadicInterval& a, const DyadicInterval& b) { return {a.lo + b.lo, a.hi + b.hi}; }

DyadicInterval operator-(const DyadicInterval& a, const DyadicInterval& b) { return {a.lo - b.hi, a.hi - b.lo}; }

DyadicInterval operator*(const DyadicInterval& a, const DyadicInterval& b) {
  DyadicRational p[4] = {a.lo * b.lo, a.lo * b.hi, a.hi * b.lo, a.hi * b.hi};
  auto [mn, mx] = std::minmax_element(p, p + 4);
  return {*mn, *mx};
}

DyadicInterval round_out(const DyadicInterval& a, std::uint64_t bits) { return {a.lo.floor_to(bits), a.hi.ceil_to(bits)}; }

DyadicInterval abs(const DyadicInterval& a) {
  if (a.lo.sign() >= 0) return a;
  if (a.hi.sign() <= 0) return {-a.hi, -a.lo};
  return {DyadicRational(0), std::max(-a.lo, a.hi)};
}

DyadicInterval logistic_derivative(const DyadicInterval& a, const DyadicInterval& x, std::uint64_t bits) {
  DyadicInterval one_minus_2x{DyadicRational(1) - x.hi.shifted(1), DyadicRational(1) - x.lo.shifted(1)};
  return round_out(a * one_minus_2x, bits);
}

}  // namespace logistat
