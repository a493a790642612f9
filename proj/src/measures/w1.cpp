#include "logistat/measures/w1.hpp"

#include <algorithm>

namespace logistat {

Rational w1(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
  const auto& A = mu.atoms();
  const auto& B = nu.atoms();
  std::uint64_t E = 0;
  for (auto& a : A) E = std::max(E, a.x.exp());
  for (auto& b : B) E = std::max(E, b.x.exp());
  const mpz_class da(static_cast<unsigned long>(mu.denominator())), db(static_cast<unsigned long>(nu.denominator()));

  // sweep the merged support; diff = (F_mu - F_nu) * da * db
  mpz_class diff = 0, sum = 0, prev, cur, gap, t;
  bool started = false;
  std::size_t i = 0, j = 0;
  while (i < A.size() || j < B.size()) {
    const DyadicRational* x;
    if (j >= B.size() || (i < A.size() && A[i].x <= B[j].x))
      x = &A[i].x;
    else
      x = &B[j].x;
    cur = x->scaled_floor(E);
    if (started && diff != 0) {
      gap = cur - prev;
      mpz_mul(t.get_mpz_t(), diff.get_mpz_t(), gap.get_mpz_t());
      mpz_abs(t.get_mpz_t(), t.get_mpz_t());
      sum += t;
    }
    DyadicRational here = *x;
    while (i < A.size() && A[i].x == here) diff += mpz_class(static_cast<unsigned long>(A[i++].count)) * db;
    while (j < B.size() && B[j].x == here) diff -= mpz_class(static_cast<unsigned long>(B[j++].count)) * da;
    prev = cur;
    started = true;
  }
  mpz_class den = da * db;
  mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), E);
  Rational r(sum, den);
  r.canonicalize();
  return r;
}

Rational integrate(const TestFunction& tau, const DiscreteMeasure& mu) {
  Rational s = 0;
  for (auto& a : mu.atoms()) s += tau(a.x) * mpz_class(static_cast<unsigned long>(a.count));
  s /= mpz_class(static_cast<unsigned long>(mu.denominator()));
  s.canonicalize();
  return s;
}

}  // namespace logistat
