#include "logistat/dynamics/words.hpp"

#include <mutex>

#include "logistat/errors.hpp"

namespace logistat {

namespace {
// compare with 1 < 0
bool before(const std::string& a, const std::string& b) {
  for (std::size_t i = 0; i < a.size() && i < b.size(); ++i)
    if (a[i] != b[i]) return a[i] == '1';
  return a.size() < b.size();
}

std::vector<SymbolicWord> words_of_period(std::size_t k) {
  std::vector<SymbolicWord> out;
  if (k >= 40) fail(ErrorKind::InvalidInput, "period too large to enumerate");
  for (std::uint64_t v = 0; v < (std::uint64_t{1} << k); ++v) {
    std::string s(k, '1');
    for (std::size_t i = 0; i < k; ++i)
      if (v >> (k - 1 - i) & 1) s[i] = '0';
    SymbolicWord w(s);
    if (w.primitive() && w.canonical() == w) out.push_back(w);
  }
  return out;
}

std::mutex cache_mu;
std::vector<SymbolicWord> cache;
std::size_t cached_period = 0;

void extend_to(std::size_t count) {
  while (cache.size() < count)
    for (auto& w : words_of_period(++cached_period)) cache.push_back(w);
}
}  // namespace

SymbolicWord::SymbolicWord(std::string letters) : s_(std::move(letters)) {
  for (char c : s_)
    if (c != '0' && c != '1') fail(ErrorKind::InvalidInput, "word letters must be 0 or 1");
}

SymbolicWord SymbolicWord::rotation(std::size_t k) const {
  if (s_.empty()) return *this;
  k %= s_.size();
  return SymbolicWord(s_.substr(k) + s_.substr(0, k));
}

bool SymbolicWord::primitive() const {
  std::size_t n = s_.size();
  if (n == 0) return false;
  for (std::size_t d = 1; d < n; ++d)
    if (n % d == 0 && rotation(d).s_ == s_) return false;
  return true;
}

SymbolicWord SymbolicWord::canonical() const {
  std::string best = s_;
  for (std::size_t k = 1; k < s_.size(); ++k) {
    std::string r = rotation(k).s_;
    if (before(r, best)) best = r;
  }
  return SymbolicWord(best);
}

std::vector<SymbolicWord> enumerate_words(std::size_t count) {
  std::lock_guard lock(cache_mu);
  extend_to(count);
  return {cache.begin(), cache.begin() + static_cast<std::ptrdiff_t>(count)};
}

SymbolicWord word_at(std::size_t index) {
  if (index == 0) fail(ErrorKind::InvalidInput, "word indices start at 1");
  std::lock_guard lock(cache_mu);
  extend_to(index);
  return cache[index - 1];
}

std::size_t word_index(const SymbolicWord& w) {
  if (!w.primitive()) fail(ErrorKind::InvalidInput, "word is not primitive");
  SymbolicWord c = w.canonical();
  std::lock_guard lock(cache_mu);
  while (cached_period < c.length())
    for (auto& x : words_of_period(++cached_period)) cache.push_back(x);
  for (std::size_t i = 0; i < cache.size(); ++i)
    if (cache[i] == c) return i + 1;
  fail(ErrorKind::NotFound, "word not enumerated");
}

}  // namespace logistat
