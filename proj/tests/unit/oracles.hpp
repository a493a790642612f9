#pragma once

// Independent reference computations used by the tests.

#include <algorithm>
#include <string>
#include <vector>

#include "logistat/measures/measure.hpp"

namespace oracle {

using logistat::Rational;

// Optimal transport on the line by greedy matching of sorted atoms (north-west corner rule).
inline Rational greedy_transport(const logistat::DiscreteMeasure& mu, const logistat::DiscreteMeasure& nu) {
  std::vector<std::pair<Rational, Rational>> a, b;
  for (std::size_t i = 0; i < mu.size(); ++i) a.push_back({mu.atoms()[i].x.to_rational(), mu.weight(i)});
  for (std::size_t i = 0; i < nu.size(); ++i) b.push_back({nu.atoms()[i].x.to_rational(), nu.weight(i)});
  std::size_t i = 0, j = 0;
  Rational cost = 0;
  while (i < a.size() && j < b.size()) {
    Rational m = std::min(a[i].second, b[j].second);
    Rational d = a[i].first - b[j].first;
    cost += m * (d < 0 ? Rational(-d) : d);
    a[i].second -= m;
    b[j].second -= m;
    if (a[i].second == 0) ++i;
    if (b[j].second == 0) ++j;
  }
  cost.canonicalize();
  return cost;
}

// Kantorovich dual by enumerating the extreme 1-Lipschitz potentials on the merged support.
inline Rational dual_transport(const logistat::DiscreteMeasure& mu, const logistat::DiscreteMeasure& nu) {
  std::vector<Rational> xs;
  for (auto& a : mu.atoms()) xs.push_back(a.x.to_rational());
  for (auto& a : nu.atoms()) xs.push_back(a.x.to_rational());
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Rational> net(xs.size());
  for (std::size_t i = 0; i < mu.size(); ++i)
    net[std::lower_bound(xs.begin(), xs.end(), mu.atoms()[i].x.to_rational()) - xs.begin()] += mu.weight(i);
  for (std::size_t i = 0; i < nu.size(); ++i)
    net[std::lower_bound(xs.begin(), xs.end(), nu.atoms()[i].x.to_rational()) - xs.begin()] -= nu.weight(i);
  Rational best = 0;
  std::size_t gaps = xs.size() - 1;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << gaps); ++mask) {
    Rational f = 0, v = 0;
    for (std::size_t k = 0; k < xs.size(); ++k) {
      if (k) f += ((mask >> (k - 1)) & 1 ? 1 : -1) * (xs[k] - xs[k - 1]);
      v += f * net[k];
    }
    if (v > best) best = v;
  }
  best.canonicalize();
  return best;
}

// Letters of f_a^j(1/2), j = 1..n, by exact rational iteration (small n only).
inline std::string exact_kneading(const Rational& a, std::size_t n) {
  std::string out;
  Rational x(1, 2);
  for (std::size_t j = 0; j < n; ++j) {
    x = a * x * (1 - x);
    x.canonicalize();
    out += x < Rational(1, 2) ? 'L' : x > Rational(1, 2) ? 'R' : 'C';
  }
  return out;
}

// Integral of a piecewise-linear function against a discrete measure, interpolating
// each atom between its two neighbouring breakpoints by hand.
inline Rational tau_integral(const std::vector<std::pair<Rational, Rational>>& bps,
                             const logistat::DiscreteMeasure& mu) {
  Rational total = 0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const Rational x = mu.atoms()[i].x.to_rational();
    Rational v;
    if (x <= bps.front().first) {
      v = bps.front().second;
    } else if (x >= bps.back().first) {
      v = bps.back().second;
    } else {
      std::size_t k = 1;
      while (bps[k].first < x) ++k;
      const auto& [x0, y0] = bps[k - 1];
      const auto& [x1, y1] = bps[k];
      v = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
    total += v * mu.weight(i);
  }
  total.canonicalize();
  return total;
}

}  // namespace oracle
