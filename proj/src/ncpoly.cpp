#include "qk/ncpoly.hpp"

namespace qk {

std::optional<int> NcPoly::homogeneous_degree() const {
  if (terms_.empty()) return std::nullopt;
  int deg = terms_.begin()->first.degree();
  for (const auto& [w, c] : terms_)
    if (w.degree() != deg) throw std::invalid_argument("inhomogeneous poly");
  return deg;
}

void NcPoly::add_term(const Word& w, Rational c) {
  if (c == 0) return;
  if (!terms_.empty() && terms_.begin()->first.is_module() != w.is_module())
    throw std::invalid_argument("mixing module and algebra words in a poly");
  auto [it, fresh] = terms_.emplace(w, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational NcPoly::coeff(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Rational(0) : it->second;
}

NcPoly& NcPoly::operator+=(const NcPoly& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, c);
  return *this;
}

NcPoly& NcPoly::operator-=(const NcPoly& o) {
  for (const auto& [w, c] : o.terms_) add_term(w, -c);
  return *this;
}

NcPoly& NcPoly::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [w, coeff] : terms_) coeff *= c;
  return *this;
}

const Word& NcPoly::leading_word(const MonomialOrder& order) const {
  if (terms_.empty()) throw std::logic_error("leading word of zero poly");
  const Word* best = &terms_.begin()->first;
  for (const auto& [w, c] : terms_)
    if (order.less(*best, w)) best = &w;
  return *best;
}

std::string NcPoly::str(const GeneratorSet& gens,
                        const std::vector<std::string>* heads) const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : terms_) {
    Rational a = c;
    if (first) {
      if (a < 0) {
        out += "-";
        a = -a;
      }
    } else {
      out += a < 0 ? " - " : " + ";
      if (a < 0) a = -a;
    }
    std::string cs = to_string(a);
    bool trivial_word = w.degree() == 0 && !w.is_module();
    if (cs != "1" || trivial_word) {
      out += cs;
      if (!trivial_word) out += "*";
    }
    if (!trivial_word) out += w.str(gens, heads);
    first = false;
  }
  return out;
}

NcPoly multiply(const NcPoly& p, const NcPoly& q) {
  if (q.is_module())
    throw std::invalid_argument("module-headed right factor in product");
  NcPoly r;
  for (const auto& [u, a] : p.terms())
    for (const auto& [v, b] : q.terms()) r.add_term(u.concat(v), a * b);
  return r;
}

NcPoly multiply(const NcPoly& p, const Word& w) {
  if (w.is_module())
    throw std::invalid_argument("module-headed right factor in product");
  NcPoly r;
  for (const auto& [u, a] : p.terms()) r.add_term(u.concat(w), a);
  return r;
}

NcPoly multiply(const Word& w, const NcPoly& p) {
  if (p.is_module())
    throw std::invalid_argument("module-headed right factor in product");
  NcPoly r;
  for (const auto& [u, a] : p.terms()) r.add_term(w.concat(u), a);
  return r;
}

} // namespace qk
