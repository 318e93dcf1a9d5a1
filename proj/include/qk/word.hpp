#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace qk {

/// Ordered set of degree-1 generator labels of a free algebra.
struct GeneratorSet {
  std::vector<std::string> names;

  GeneratorSet() = default;
  explicit GeneratorSet(std::vector<std::string> labels);

  int size() const { return static_cast<int>(names.size()); }
  const std::string& label(int i) const { return names.at(i); }
  /// Index of a label, or -1 if absent.
  int index_of(const std::string& label) const;
};

/// A monomial of the free algebra: a sequence of generator indices in
/// [0, d). Module elements carry a head (module-generator index >= 0);
/// the head contributes 0 to the internal degree.
struct Word {
  int head = -1; // -1: plain algebra word
  std::vector<uint8_t> letters;

  Word() = default;
  explicit Word(std::vector<uint8_t> ls) : letters(std::move(ls)) {}
  Word(int h, std::vector<uint8_t> ls) : head(h), letters(std::move(ls)) {}

  bool is_module() const { return head >= 0; }
  int degree() const { return static_cast<int>(letters.size()); }

  bool operator==(const Word& o) const {
    return head == o.head && letters == o.letters;
  }
  bool operator!=(const Word& o) const { return !(*this == o); }

  /// Structural order used for canonical term storage: head status, head
  /// index, degree, then letter values left to right. Independent of any
  /// MonomialOrder.
  bool operator<(const Word& o) const;

  Word concat(const Word& right) const;
  Word subword(int pos, int len) const;
  /// First position where `pattern` occurs as a (head-respecting) subword,
  /// or -1. Module-headed patterns only match at the front of module words.
  int find_subword(const Word& pattern) const;

  std::string str(const GeneratorSet& gens,
                  const std::vector<std::string>* heads = nullptr) const;
};

enum class Cmp { LT = -1, EQ = 0, GT = 1 };

/// Degree-first order on words: total degree, then lexicographic left to
/// right on the generator precedence given by a permutation. Module words
/// compare by head index first (ascending). Comparing a module word with a
/// plain word is rejected.
struct MonomialOrder {
  int d = 0;
  std::vector<int> rank; // rank[letter] = position in the precedence chain

  static MonomialOrder identity(int d);
  /// precedence[k] = letter that sits at position k (smallest first).
  static MonomialOrder from_precedence(const std::vector<int>& precedence);

  Cmp compare(const Word& u, const Word& v) const;
  bool less(const Word& u, const Word& v) const {
    return compare(u, v) == Cmp::LT;
  }
};

} // namespace qk
