#pragma once

#include "logistat/measures/measure.hpp"
#include "logistat/measures/test_function.hpp"

namespace logistat {

// Exact Wasserstein-1 distance on the line: integral of |F_mu - F_nu|.
Rational w1(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

Rational integrate(const TestFunction& tau, const DiscreteMeasure& mu);

}  // namespace logistat
