#pragma once

#include <cstdint>
#include <vector>

#include "logistat/numerics/dyadic.hpp"

namespace logistat {

// Interval [lo, hi] / 2^prec with integer endpoints; rounding is always outward.
struct FixedInterval {
  std::uint64_t prec = 0;
  mpz_class lo, hi;

  static FixedInterval from(const DyadicInterval& x, std::uint64_t prec);
  static FixedInterval from(const DyadicRational& x, std::uint64_t prec) { return from(DyadicInterval::point(x), prec); }
  static FixedInterval from(const Rational& x, std::uint64_t prec);
  DyadicInterval to_dyadic() const;
  mpz_class width() const { return hi - lo; }
  // position relative to threshold t (given already scaled by 2^prec)
  enum class Side { Below, Equal, Above, Straddle };
  Side locate(const mpz_class& t) const;
};

mpz_class scaled(const DyadicRational& x, std::uint64_t prec);  // exact: requires x.exp() <= prec
mpz_class scaled_half(std::uint64_t prec);

// x -> a x (1 - x) on enclosures, a >= 0. Keeps scratch space so the hot loop does not allocate.
class LogisticStep {
 public:
  LogisticStep(const DyadicInterval& a, std::uint64_t prec);
  void operator()(FixedInterval& x);
  std::uint64_t prec() const { return prec_; }
  const DyadicInterval& parameter() const { return a_; }

 private:
  void q_lo(const mpz_class& x, mpz_class& out);
  void q_hi(const mpz_class& x, mpz_class& out);

  DyadicInterval a_;
  std::uint64_t prec_;
  bool point_;
  mpz_class al_, ah_, half_, quarter_;
  mpz_class sq_, ql_, qh_, t_;
};

// Enclosure of f_a^n(x) at working precision work_bits; throws EnclosureBlowup when wider than 1.
DyadicInterval iterate_enclosure(const DyadicInterval& a, const DyadicInterval& x, std::uint64_t n,
                                 std::uint64_t work_bits);
// All iterates x_0 .. x_n.
std::vector<DyadicInterval> orbit_enclosures(const DyadicInterval& a, const DyadicInterval& x, std::uint64_t n,
                                             std::uint64_t work_bits);

// exact interval arithmetic and outward rounding
DyadicInterval operator+(const DyadicInterval& a, const DyadicInterval& b);
DyadicInterval operator-(const DyadicInterval& a, const DyadicInterval& b);
DyadicInterval operator*(const DyadicInterval& a, const DyadicInterval& b);
DyadicInterval round_out(const DyadicInterval& a, std::uint64_t bits);
DyadicInterval abs(const DyadicInterval& a);
// f_a'(x) = a (1 - 2x)
DyadicInterval logistic_derivative(const DyadicInterval& a, const DyadicInterval& x, std::uint64_t bits);

}  // namespace logistat
