#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace logistat {

// Finite word over {0, 1}: 0 = left branch L, 1 = right branch R of g.
class SymbolicWord {
 public:
  SymbolicWord() = default;
  explicit SymbolicWord(std::string letters);

  const std::string& str() const { return s_; }
  std::size_t length() const { return s_.size(); }
  char operator[](std::size_t i) const { return s_[i]; }
  SymbolicWord rotation(std::size_t k) const;
  bool primitive() const;
  // representative of the cyclic class: least rotation with 1 ordered before 0
  SymbolicWord canonical() const;

  friend bool operator==(const SymbolicWord&, const SymbolicWord&) = default;

 private:
  std::string s_;
};

// First `count` primitive cyclic classes, by period, then by the order 1 < 0.
std::vector<SymbolicWord> enumerate_words(std::size_t count);
// 1-based
SymbolicWord word_at(std::size_t index);
std::size_t word_index(const SymbolicWord& w);

}  // namespace logistat
