#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>

namespace logistat {

using Rational = mpq_class;

// Exact value num / 2^exp, kept canonical: exp == 0 or num odd.
class DyadicRational {
 public:
  DyadicRational() = default;
  DyadicRational(long v) : num_(v) {}  // NOLINT: implicit on purpose
  DyadicRational(mpz_class num, std::uint64_t exp);

  static DyadicRational from_double(double v);
  static DyadicRational floor_at(const Rational& q, std::uint64_t bits);
  static DyadicRational ceil_at(const Rational& q, std::uint64_t bits);
  static DyadicRational pow2(std::int64_t k);  // 2^k

  const mpz_class& num() const { return num_; }
  std::uint64_t exp() const { return exp_; }

  Rational to_rational() const;
  double to_double() const;
  // exact decimal expansion
  std::string to_decimal() const;
  int sign() const { return sgn(num_); }
  bool is_zero() const { return num_ == 0; }

  DyadicRational floor_to(std::uint64_t bits) const;
  DyadicRational ceil_to(std::uint64_t bits) const;
  DyadicRational shifted(std::int64_t k) const;  // times 2^k
  // value scaled by 2^p, rounded down / up to an integer
  mpz_class scaled_floor(std::uint64_t p) const;
  mpz_class scaled_ceil(std::uint64_t p) const;

  friend DyadicRational operator+(const DyadicRational& a, const DyadicRational& b);
  friend DyadicRational operator-(const DyadicRational& a, const DyadicRational& b);
  friend DyadicRational operator*(const DyadicRational& a, const DyadicRational& b);
  DyadicRational operator-() const;
  DyadicRational& operator+=(const DyadicRational& b) { return *this = *this + b; }
  DyadicRational& operator-=(const DyadicRational& b) { return *this = *this - b; }

  friend std::strong_ordering operator<=>(const DyadicRational& a, const DyadicRational& b);
  friend bool operator==(const DyadicRational& a, const DyadicRational& b) {
    return a.exp_ == b.exp_ && a.num_ == b.num_;
  }

 private:
  void canonicalize();
  mpz_class num_{0};
  std::uint64_t exp_ = 0;
};

DyadicRational midpoint(const DyadicRational& a, const DyadicRational& b);
DyadicRational abs(const DyadicRational& a);
std::strong_ordering compare(const DyadicRational& a, const Rational& q);

struct DyadicInterval {
  DyadicRational lo, hi;

  DyadicInterval() = default;
  DyadicInterval(DyadicRational l, DyadicRational h);
  static DyadicInterval point(const DyadicRational& x) { return {x, x}; }
  // smallest interval with endpoints on the 2^-bits grid containing q
  static DyadicInterval around(const Rational& q, std::uint64_t bits);

  DyadicRational width() const { return hi - lo; }
  DyadicRational mid() const { return midpoint(lo, hi); }
  bool contains(const DyadicRational& x) const { return lo <= x && x <= hi; }
  bool contains(const Rational& q) const;
  bool contains(const DyadicInterval& o) const { return lo <= o.lo && o.hi <= hi; }
  bool intersects(const DyadicInterval& o) const { return !(o.hi < lo || hi < o.lo); }
  bool is_point() const { return lo == hi; }
  // width <= 2^-bits
  bool narrower_than(std::uint64_t bits) const;

  friend bool operator==(const DyadicInterval&, const DyadicInterval&) = default;
};

DyadicInterval hull(const DyadicInterval& a, const DyadicInterval& b);

Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);  // "p/q", or "p" for integers
Rational rational_pow2(std::int64_t k);
// largest k with 2^-k >= x for x > 0, i.e. floor(-log2 x)
std::int64_t neg_log2_floor(const Rational& x);

}  // namespace logistat
