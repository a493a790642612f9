#include "logistat/numerics/dyadic.hpp"

#include <cmath>
#include <stdexcept>

#include "logistat/errors.hpp"

namespace logistat {

DyadicRational::DyadicRational(mpz_class num, std::uint64_t exp) : num_(std::move(num)), exp_(exp) {
  canonicalize();
}

void DyadicRational::canonicalize() {
  if (num_ == 0) {
    exp_ = 0;
    return;
  }
  if (exp_ == 0) return;
  std::uint64_t tz = mpz_scan1(num_.get_mpz_t(), 0);
  std::uint64_t k = tz < exp_ ? tz : exp_;
  if (k) {
    mpz_tdiv_q_2exp(num_.get_mpz_t(), num_.get_mpz_t(), k);
    exp_ -= k;
  }
}

DyadicRational DyadicRational::from_double(double v) {
  if (!std::isfinite(v)) fail(ErrorKind::InvalidInput, "non-finite double");
  if (v == 0.0) return {};
  int e = 0;
  double f = std::frexp(v, &e);
  mpz_class m;
  mpz_set_d(m.get_mpz_t(), std::ldexp(f, 53));
  std::int64_t shift = static_cast<std::int64_t>(e) - 53;
  if (shift >= 0) {
    mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
    return {m, 0};
  }
  return {m, static_cast<std::uint64_t>(-shift)};
}

DyadicRational DyadicRational::floor_at(const Rational& q, std::uint64_t bits) {
  mpz_class n = q.get_num();
  mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), bits);
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), n.get_mpz_t(), q.get_den_mpz_t());
  return {r, bits};
}

DyadicRational DyadicRational::ceil_at(const Rational& q, std::uint64_t bits) {
  mpz_class n = q.get_num();
  mpz_mul_2exp(n.get_mpz_t(), n.get_mpz_t(), bits);
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), n.get_mpz_t(), q.get_den_mpz_t());
  return {r, bits};
}

DyadicRational DyadicRational::pow2(std::int64_t k) {
  if (k >= 0) {
    mpz_class m = 1;
    mpz_mul_2exp(m.get_mpz_t(), m.get_mpz_t(), static_cast<mp_bitcnt_t>(k));
    return {m, 0};
  }
  return {mpz_class(1), static_cast<std::uint64_t>(-k)};
}

Rational DyadicRational::to_rational() const {
  mpz_class d = 1;
  mpz_mul_2exp(d.get_mpz_t(), d.get_mpz_t(), exp_);
  Rational q(num_, d);
  q.canonicalize();
  return q;
}

double DyadicRational::to_double() const {
  if (num_ == 0) return 0.0;
  long e = 0;
  double d = mpz_get_d_2exp(&e, num_.get_mpz_t());
  return std::ldexp(d, static_cast<int>(e - static_cast<long>(exp_)));
}

std::string DyadicRational::to_decimal() const {
  if (exp_ == 0) return num_.get_str();
  mpz_class five;
  mpz_ui_pow_ui(five.get_mpz_t(), 5, exp_);
  mpz_class a = abs(num_) * five;
  std::string digits = a.get_str();
  if (digits.size() <= exp_) digits.insert(0, exp_ - digits.size() + 1, '0');
  digits.insert(digits.size() - exp_, ".");
  return (num_ < 0 ? "-" : "") + digits;
}

mpz_class DyadicRational::scaled_floor(std::uint64_t p) const {
  mpz_class r;
  if (p >= exp_)
    mpz_mul_2exp(r.get_mpz_t(), num_.get_mpz_t(), p - exp_);
  else
    mpz_fdiv_q_2exp(r.get_mpz_t(), num_.get_mpz_t(), exp_ - p);
  return r;
}

mpz_class DyadicRational::scaled_ceil(std::uint64_t p) const {
  mpz_class r;
  if (p >= exp_)
    mpz_mul_2exp(r.get_mpz_t(), num_.get_mpz_t(), p - exp_);
  else
    mpz_cdiv_q_2exp(r.get_mpz_t(), num_.get_mpz_t(), exp_ - p);
  return r;
}

DyadicRational DyadicRational::floor_to(std::uint64_t bits) const {
  if (exp_ <= bits) return *this;
  return {scaled_floor(bits), bits};
}

DyadicRational DyadicRational::ceil_to(std::uint64_t bits) const {
  if (exp_ <= bits) return *this;
  return {scaled_ceil(bits), bits};
}

DyadicRational DyadicRational::shifted(std::int64_t k) const {
  if (k >= 0) {
    auto uk = static_cast<std::uint64_t>(k);
    if (uk <= exp_) return {num_, exp_ - uk};
    mpz_class m;
    mpz_mul_2exp(m.get_mpz_t(), num_.get_mpz_t(), uk - exp_);
    return {m, 0};
  }
  return {num_, exp_ + static_cast<std::uint64_t>(-k)};
}

namespace {
void align(const DyadicRational& a, const DyadicRational& b, mpz_class& x, mpz_class& y, std::uint64_t& e) {
  e = a.exp() > b.exp() ? a.exp() : b.exp();
  mpz_mul_2exp(x.get_mpz_t(), a.num().get_mpz_t(), e - a.exp());
  mpz_mul_2exp(y.get_mpz_t(), b.num().get_mpz_t(), e - b.exp());
}
}  // namespace

DyadicRational operator+(const DyadicRational& a, const DyadicRational& b) {
  mpz_class x, y;
  std::uint64_t e;
  align(a, b, x, y, e);
  return {x + y, e};
}

DyadicRational operator-(const DyadicRational& a, const DyadicRational& b) {
  mpz_class x, y;
  std::uint64_t e;
  align(a, b, x, y, e);
  return {x - y, e};
}

DyadicRational operator*(const DyadicRational& a, const DyadicRational& b) {
  return {a.num_ * b.num_, a.exp_ + b.exp_};
}

DyadicRational DyadicRational::operator-() const {
  DyadicRational r = *this;
  r.num_ = -r.num_;
  return r;
}

std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b) {
  if (a.exp_ == b.exp_) {
    int c = cmp(a.num_, b.num_);
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
  }
  int sa = sgn(a.num_), sb = sgn(b.num_);
  if (sa != sb) return sa < sb ? std::strong_ordering::less : std::strong_ordering::greater;
  mpz_class x, y;
  std::uint64_t e;
  align(a, b, x, y, e);
  int c = cmp(x, y);
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

DyadicRational midpoint(const DyadicRational& a, const DyadicRational& b) { return (a + b).shifted(-1); }

DyadicRational abs(const DyadicRational& a) { return a.sign() < 0 ? -a : a; }

std::strong_ordering compare(const DyadicRational& a, const Rational& q) {
  int c = cmp(a.to_rational(), q);
  return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

DyadicInterval::DyadicInterval(DyadicRational l, DyadicRational h) : lo(std::move(l)), hi(std::move(h)) {
  if (hi < lo) fail(ErrorKind::InvalidInput, "interval with lo > hi");
}

DyadicInterval DyadicInterval::around(const Rational& q, std::uint64_t bits) {
  return {DyadicRational::floor_at(q, bits), DyadicRational::ceil_at(q, bits)};
}

bool DyadicInterval::contains(const Rational& q) const { return compare(lo, q) <= 0 && compare(hi, q) >= 0; }

bool DyadicInterval::narrower_than(std::uint64_t bits) const {
  return width() <= DyadicRational::pow2(-static_cast<std::int64_t>(bits));
}

DyadicInterval hull(const DyadicInterval& a, const DyadicInterval& b) {
  return {a.lo < b.lo ? a.lo : b.lo, a.hi > b.hi ? a.hi : b.hi};
}

Rational parse_rational(const std::string& s) {
  auto bad = [&] { fail(ErrorKind::InvalidInput, "cannot parse number '" + s + "'"); };
  if (s.empty()) bad();
  auto slash = s.find('/');
  try {
    if (slash != std::string::npos) {
      mpz_class p(s.substr(0, slash), 10), q(s.substr(slash + 1), 10);
      if (q == 0) bad();
      Rational r(p, q);
      r.canonicalize();
      return r;
    }
    std::string mant = s;
    long ex = 0;
    auto epos = s.find_first_of("eE");
    if (epos != std::string::npos) {
      mant = s.substr(0, epos);
      ex = std::stol(s.substr(epos + 1));
    }
    bool neg = false;
    if (!mant.empty() && (mant[0] == '-' || mant[0] == '+')) {
      neg = mant[0] == '-';
      mant = mant.substr(1);
    }
    auto dot = mant.find('.');
    std::string digits = mant;
    long frac = 0;
    if (dot != std::string::npos) {
      digits = mant.substr(0, dot) + mant.substr(dot + 1);
      frac = static_cast<long>(mant.size() - dot - 1);
    }
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) bad();
    mpz_class n(digits, 10);
    long p10 = ex - frac;
    mpz_class ten;
    mpz_ui_pow_ui(ten.get_mpz_t(), 10, static_cast<unsigned long>(p10 < 0 ? -p10 : p10));
    Rational r = p10 >= 0 ? Rational(n * ten) : Rational(n, ten);
    r.canonicalize();
    return neg ? Rational(-r) : r;
  } catch (const std::invalid_argument&) {
    bad();
  } catch (const std::out_of_range&) {
    bad();
  }
  return {};
}

std::string to_string(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  if (c.get_den() == 1) return c.get_num().get_str();
  return c.get_num().get_str() + "/" + c.get_den().get_str();
}

Rational rational_pow2(std::int64_t k) { return DyadicRational::pow2(k).to_rational(); }

std::int64_t neg_log2_floor(const Rational& x) {
  if (sgn(x) <= 0) fail(ErrorKind::InvalidInput, "log2 of non-positive");
  auto k = static_cast<std::int64_t>(mpz_sizeinbase(x.get_den_mpz_t(), 2)) -
           static_cast<std::int64_t>(mpz_sizeinbase(x.get_num_mpz_t(), 2));
  while (cmp(rational_pow2(-k), x) < 0) --k;
  while (cmp(rational_pow2(-(k + 1)), x) >= 0) ++k;
  return k;
}

}  // namespace logistat
