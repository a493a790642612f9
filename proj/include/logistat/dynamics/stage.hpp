#pragma once

#include <cstdint>

#include "logistat/numerics/dyadic.hpp"
#include "logistat/numerics/enclosure.hpp"
#include "logistat/numerics/lazy_parameter.hpp"

namespace logistat {

// Horseshoe geometry of g = f_a^3 around the critical point:
// I = [beta', beta], L = [beta', l], R = [r, beta], g decreasing on L, increasing on R.
struct Stage {
  DyadicInterval a;
  DyadicInterval beta, beta_prime, l, r;
  std::uint64_t bits = 0;
};

Stage solve_stage(const DyadicInterval& a, std::uint64_t bits);
Stage solve_stage(LazyParameter& a, std::uint64_t bits);

// g_a applied to an enclosure (three logistic steps)
void apply_g(LogisticStep& f, FixedInterval& x);
DyadicInterval g_enclosure(const DyadicInterval& a, const DyadicInterval& x, std::uint64_t prec);

struct TipCertificate {
  DyadicInterval c;
  DyadicInterval g1, g2, g3;  // g_c^k(1/2)
  DyadicInterval residual;    // g_c^2(1/2) - g_c^3(1/2) over the whole enclosure of c
  bool separated = false;     // g_c(1/2) != g_c^2(1/2)
  bool fold = false;          // g_c has a single turning point on [1 - g2, g2]
};

// Parameter c in (3.85, 4) with g_c(1/2) != g_c^2(1/2) = g_c^3(1/2), enclosed to 2^-bits.
DyadicInterval find_tip_c(std::uint64_t bits);
TipCertificate certify_tip(const DyadicInterval& c, std::uint64_t prec);

}  // namespace logistat
