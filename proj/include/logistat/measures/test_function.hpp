#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "logistat/numerics/dyadic.hpp"

namespace logistat {

// Continuous piecewise-linear function with rational breakpoints, constant outside them.
class TestFunction {
 public:
  using Breakpoint = std::pair<Rational, Rational>;

  TestFunction() = default;  // zero
  explicit TestFunction(std::vector<Breakpoint> bps);
  static TestFunction constant(const Rational& c) { return TestFunction({{Rational(0), c}}); }
  // 0 outside [x0, x3], 1 on [x1, x2], linear in between
  static TestFunction trapezoid(const Rational& x0, const Rational& x1, const Rational& x2, const Rational& x3);

  Rational operator()(const Rational& x) const;
  Rational operator()(const DyadicRational& x) const { return (*this)(x.to_rational()); }
  double eval(double x) const;

  const std::vector<Breakpoint>& breakpoints() const { return bps_; }
  // minimal breakpoint list; equal functions give equal keys
  std::string key() const;

  friend TestFunction operator+(const TestFunction& f, const TestFunction& g);
  friend TestFunction operator*(const Rational& c, const TestFunction& f);
  friend bool operator==(const TestFunction& f, const TestFunction& g) { return f.bps_ == g.bps_; }

 private:
  void canonicalize();
  std::vector<Breakpoint> bps_;
  std::vector<std::pair<double, double>> fast_;
};

// Versioned enumeration of the countable family: finite rational combinations of
// trapezoid bumps with rational corners in [0, 1]. Index 1 is the constant 1.
inline constexpr const char* kTauScheme = "tau-pairing-v1";

TestFunction enumerate_tau(std::size_t index);

struct TauTerm {
  Rational coefficient;
  Rational x0, x1, x2, x3;
};

// Raw code of the pairing layer (code 0 is the constant 1); every raw code decodes
// deterministically, invalid ones to nothing.
mpz_class encode_tau(const std::vector<TauTerm>& terms);
bool decode_tau(const mpz_class& code, TestFunction& out);

mpz_class cantor_pair(const mpz_class& a, const mpz_class& b);
std::pair<mpz_class, mpz_class> cantor_unpair(const mpz_class& z);

}  // namespace logistat
