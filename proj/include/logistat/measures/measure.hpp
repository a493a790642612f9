#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "logistat/numerics/dyadic.hpp"

namespace logistat {

struct Atom {
  DyadicRational x;
  std::uint64_t count = 0;  // weight = count / denominator
  friend bool operator==(const Atom&, const Atom&) = default;
};

// Finitely supported probability measure on dyadic points, atoms sorted and distinct.
class DiscreteMeasure {
 public:
  DiscreteMeasure() = default;
  // equal weights; repeated points merge
  static DiscreteMeasure uniform(std::vector<DyadicRational> xs);
  static DiscreteMeasure from_counts(std::vector<Atom> atoms, std::uint64_t denominator);
  static DiscreteMeasure from_weights(const std::vector<std::pair<DyadicRational, Rational>>& atoms);
  static DiscreteMeasure dirac(const DyadicRational& x) { return uniform({x}); }

  const std::vector<Atom>& atoms() const { return atoms_; }
  std::uint64_t denominator() const { return denom_; }
  std::size_t size() const { return atoms_.size(); }
  bool empty() const { return atoms_.empty(); }
  Rational weight(std::size_t i) const;
  Rational mass(const DyadicInterval& I) const;  // closed interval

  std::map<std::string, std::string> meta;

  friend bool operator==(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    if (a.denom_ != b.denom_ || a.atoms_.size() != b.atoms_.size()) return false;
    for (std::size_t i = 0; i < a.atoms_.size(); ++i)
      if (a.atoms_[i].count != b.atoms_[i].count || !(a.atoms_[i].x == b.atoms_[i].x)) return false;
    return true;
  }

 private:
  std::vector<Atom> atoms_;
  std::uint64_t denom_ = 1;
};

// sum_i w_i mu_i with rational w_i summing to 1
DiscreteMeasure mixture(const std::vector<std::pair<Rational, const DiscreteMeasure*>>& parts);

}  // namespace logistat
