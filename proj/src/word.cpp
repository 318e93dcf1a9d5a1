#include "qk/word.hpp"

#include <algorithm>
#include <set>

namespace qk {

GeneratorSet::GeneratorSet(std::vector<std::string> labels)
    : names(std::move(labels)) {
  if (names.empty()) throw std::invalid_argument("generator set is empty");
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (n.empty()) throw std::invalid_argument("empty generator label");
    if (!seen.insert(n).second)
      throw std::invalid_argument("duplicate generator label: " + n);
  }
}

int GeneratorSet::index_of(const std::string& label) const {
  for (int i = 0; i < size(); ++i)
    if (names[i] == label) return i;
  return -1;
}

bool Word::operator<(const Word& o) const {
  if (head != o.head) return head < o.head;
  if (letters.size() != o.letters.size())
    return letters.size() < o.letters.size();
  return letters < o.letters;
}

Word Word::concat(const Word& right) const {
  if (right.is_module())
    throw std::invalid_argument("cannot concatenate onto a module word");
  Word w = *this;
  w.letters.insert(w.letters.end(), right.letters.begin(),
                   right.letters.end());
  return w;
}

Word Word::subword(int pos, int len) const {
  Word w(std::vector<uint8_t>(letters.begin() + pos,
                              letters.begin() + pos + len));
  return w;
}

int Word::find_subword(const Word& pattern) const {
  if (pattern.is_module()) {
    if (head != pattern.head) return -1;
    if (pattern.degree() > degree()) return -1;
    // prefix match only
    if (std::equal(pattern.letters.begin(), pattern.letters.end(),
                   letters.begin()))
      return 0;
    return -1;
  }
  int n = degree(), m = pattern.degree();
  if (m == 0) return 0;
  for (int i = 0; i + m <= n; ++i)
    if (std::equal(pattern.letters.begin(), pattern.letters.end(),
                   letters.begin() + i))
      return i;
  return -1;
}

std::string Word::str(const GeneratorSet& gens,
                      const std::vector<std::string>* heads) const {
  std::string out;
  if (is_module()) {
    if (heads && head < static_cast<int>(heads->size()))
      out += (*heads)[head];
    else
      out += "e" + std::to_string(head + 1);
    if (!letters.empty()) out += ".";
  }
  for (size_t i = 0; i < letters.size(); ++i) {
    if (i) out += "*";
    out += gens.label(letters[i]);
  }
  if (out.empty()) out = "1";
  return out;
}

MonomialOrder MonomialOrder::identity(int d) {
  MonomialOrder o;
  o.d = d;
  o.rank.resize(d);
  for (int i = 0; i < d; ++i) o.rank[i] = i;
  return o;
}

MonomialOrder MonomialOrder::from_precedence(const std::vector<int>& prec) {
  MonomialOrder o;
  o.d = static_cast<int>(prec.size());
  o.rank.assign(o.d, -1);
  for (int pos = 0; pos < o.d; ++pos) {
    int g = prec[pos];
    if (g < 0 || g >= o.d || o.rank[g] != -1)
      throw std::invalid_argument("precedence list is not a permutation");
    o.rank[g] = pos;
  }
  return o;
}

Cmp MonomialOrder::compare(const Word& u, const Word& v) const {
  if (u.is_module() != v.is_module())
    throw std::invalid_argument("comparing words of mixed head status");
  if (u.is_module() && u.head != v.head)
    return u.head < v.head ? Cmp::LT : Cmp::GT;
  if (u.degree() != v.degree())
    return u.degree() < v.degree() ? Cmp::LT : Cmp::GT;
  for (int i = 0; i < u.degree(); ++i) {
    int a = rank.at(u.letters[i]), b = rank.at(v.letters[i]);
    if (a != b) return a < b ? Cmp::LT : Cmp::GT;
  }
  return Cmp::EQ;
}

} // namespace qk
