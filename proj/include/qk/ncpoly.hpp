#pragma once

#include <map>
#include <optional>

#include "qk/rational.hpp"
#include "qk/word.hpp"

namespace qk {

/// Rational-coefficient element of the free algebra (or of a free module
/// with module-headed words). Terms are kept zero-free and all words share
/// the same head presence.
class NcPoly {
 public:
  using TermMap = std::map<Word, Rational>;

  NcPoly() = default;
  explicit NcPoly(const Word& w, Rational c = Rational(1)) {
    add_term(w, std::move(c));
  }
  static NcPoly one() { return NcPoly(Word{}); }
  static NcPoly zero() { return {}; }

  bool is_zero() const { return terms_.empty(); }
  int num_terms() const { return static_cast<int>(terms_.size()); }
  const TermMap& terms() const { return terms_; }
  bool is_module() const {
    return !terms_.empty() && terms_.begin()->first.is_module();
  }
  /// All nonzero terms are homogeneous of this internal degree, if any.
  std::optional<int> homogeneous_degree() const;

  void add_term(const Word& w, Rational c);
  Rational coeff(const Word& w) const;

  NcPoly& operator+=(const NcPoly& o);
  NcPoly& operator-=(const NcPoly& o);
  NcPoly& operator*=(const Rational& c);
  friend NcPoly operator+(NcPoly a, const NcPoly& b) { return a += b; }
  friend NcPoly operator-(NcPoly a, const NcPoly& b) { return a -= b; }
  friend NcPoly operator*(NcPoly a, const Rational& c) { return a *= c; }
  friend NcPoly operator*(const Rational& c, NcPoly a) { return a *= c; }
  bool operator==(const NcPoly& o) const { return terms_ == o.terms_; }
  bool operator!=(const NcPoly& o) const { return !(*this == o); }

  /// Leading word with respect to a monomial order. Poly must be nonzero.
  const Word& leading_word(const MonomialOrder& order) const;

  std::string str(const GeneratorSet& gens,
                  const std::vector<std::string>* heads = nullptr) const;

 private:
  TermMap terms_;
};

/// Bilinear concatenation product. At most one factor may be module-headed,
/// and a module-headed factor must be on the left.
NcPoly multiply(const NcPoly& p, const NcPoly& q);

/// p * (single word) — the common case when building layer matrices.
NcPoly multiply(const NcPoly& p, const Word& w);
NcPoly multiply(const Word& w, const NcPoly& p);

} // namespace qk
