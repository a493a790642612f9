#include "logistat/tuner/kneading.hpp"

#include "logistat/errors.hpp"
#include "logistat/numerics/enclosure.hpp"

namespace logistat {

namespace {

int rank(char c) { return c == 'L' ? 0 : c == 'C' ? 1 : 2; }

char letter(const FixedInterval& x, const mpz_class& half) {
  switch (x.locate(half)) {
    case FixedInterval::Side::Below: return 'L';
    case FixedInterval::Side::Above: return 'R';
    case FixedInterval::Side::Equal: return 'C';
    default: return '?';
  }
}

}  // namespace

std::string kneading(const DyadicInterval& a, std::size_t n, std::uint64_t prec) {
  LogisticStep f(a, prec);
  FixedInterval x = FixedInterval::from(DyadicRational(mpz_class(1), 1), prec);
  const mpz_class half = scaled_half(prec);
  std::string out;
  for (std::size_t j = 0; j < n; ++j) {
    f(x);
    char c = letter(x, half);
    if (c == '?') break;
    out.push_back(c);
    if (c == 'C') {
      // 1/2 maps onto the same orbit again
      for (std::size_t k = j + 1; k < n; ++k) out.push_back(out[k - j - 1]);
      break;
    }
  }
  return out;
}

std::size_t first_difference(std::string_view s, std::string_view t) {
  std::size_t i = 0;
  while (i < s.size() && i < t.size() && s[i] == t[i]) ++i;
  return i;
}

int cmp_unimodal(std::string_view s, std::string_view t) {
  bool flip = false;
  for (std::size_t i = 0; i < s.size() && i < t.size(); ++i) {
    if (s[i] != t[i]) {
      int r = rank(s[i]) < rank(t[i]) ? -1 : 1;
      return flip ? -r : r;
    }
    if (s[i] == 'R') flip = !flip;
  }
  return 0;
}

KneadingComparison compare_kneading(const DyadicRational& a, std::string_view target, std::uint64_t prec_hint) {
  std::uint64_t prec = std::max<std::uint64_t>(prec_hint, 128);
  const std::uint64_t cap = 8 * (2 * target.size() + 256);
  for (;; prec = std::min(2 * prec, cap)) {
    LogisticStep f(DyadicInterval::point(a), prec);
    FixedInterval x = FixedInterval::from(DyadicRational(mpz_class(1), 1), prec);
    const mpz_class half = scaled_half(prec);
    bool flip = false;
    bool undecided = false;
    for (std::size_t j = 0; j < target.size(); ++j) {
      f(x);
      char c = letter(x, half);
      if (c == '?') {
        undecided = true;
        break;
      }
      if (c != target[j]) {
        int r = rank(c) < rank(target[j]) ? -1 : 1;
        return {flip ? -r : r, j, prec};
      }
      if (c == 'C') return {0, j + 1, prec};
      if (c == 'R') flip = !flip;
    }
    if (!undecided) return {0, target.size(), prec};
    if (prec >= cap) fail(ErrorKind::RefinementExhausted, "kneading letter undecided at maximum precision");
  }
}

}  // namespace logistat
