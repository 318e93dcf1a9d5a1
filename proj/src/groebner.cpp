#include "qk/groebner.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <set>

namespace qk {

namespace {

NcPoly monic(NcPoly p, const MonomialOrder& order) {
  if (p.is_zero()) return p;
  Rational lc = p.coeff(p.leading_word(order));
  return p * (1 / lc);
}

struct Reducer {
  const MonomialOrder& order;
  const std::vector<NcPoly>* elements;
  const std::vector<Word>* leads;
  const std::vector<NcPoly>* prefix = nullptr; // optional module part
  const std::vector<Word>* prefix_leads = nullptr;
  const std::vector<char>* alive = nullptr; // optional liveness mask
  int skip = -1;                            // element index to ignore

  bool alive_at(bool pfx, int i) const {
    if (!alive) return true;
    size_t off = pfx ? elements->size() : 0;
    return (*alive)[off + i];
  }

  // one reduction step on the given term; returns false if irreducible
  bool step(NcPoly& p, const Word& w, const Rational& c) const {
    if (prefix_leads && w.is_module()) {
      for (size_t i = 0; i < prefix_leads->size(); ++i) {
        if (!alive_at(true, static_cast<int>(i))) continue;
        const Word& lw = (*prefix_leads)[i];
        if (lw.head != w.head || lw.degree() > w.degree()) continue;
        if (w.find_subword(lw) != 0) continue;
        Word right = w.subword(lw.degree(), w.degree() - lw.degree());
        p -= c * multiply((*prefix)[i], right);
        return true;
      }
    }
    for (size_t i = 0; i < leads->size(); ++i) {
      if (static_cast<int>(i) == skip) continue;
      if (!alive_at(false, static_cast<int>(i))) continue;
      const Word& lw = (*leads)[i];
      if (lw.degree() > w.degree()) continue;
      int pos = w.find_subword(lw);
      if (pos < 0) continue;
      Word left = w.is_module()
                      ? Word(w.head, std::vector<uint8_t>(
                                         w.letters.begin(),
                                         w.letters.begin() + pos))
                      : w.subword(0, pos);
      Word right = w.subword(pos + lw.degree(),
                             w.degree() - pos - lw.degree());
      p -= c * multiply(multiply(left, (*elements)[i]), right);
      return true;
    }
    return false;
  }

  NcPoly full(NcPoly p, ReduceStrategy strat) const {
    // terms confirmed irreducible; re-checked only when p changes
    while (true) {
      bool reduced = false;
      // collect terms in the chosen scan order
      std::vector<const Word*> ws;
      ws.reserve(p.terms().size());
      for (const auto& [w, c] : p.terms()) ws.push_back(&w);
      std::sort(ws.begin(), ws.end(), [&](const Word* a, const Word* b) {
        Cmp r = order.compare(*a, *b);
        return strat == ReduceStrategy::LargestFirst ? r == Cmp::GT
                                                     : r == Cmp::LT;
      });
      for (const Word* w : ws) {
        Rational c = p.coeff(*w);
        if (c == 0) continue;
        if (step(p, *w, c)) {
          reduced = true;
          break;
        }
      }
      if (!reduced) return p;
    }
  }
};

struct Obstruction {
  int deg;        // degree of the overlap word
  Word overlap;   // the overlap word itself (for deterministic ordering)
  int i, j;       // element indices (prefix part uses j for two-sided)
  bool prefix_i;  // whether element i is a module prefix element
  int cut;        // alignment: suffix length of lead(i) shared with lead(j)
};

struct ObstructionOrder {
  const MonomialOrder* order;
  bool operator()(const Obstruction& a, const Obstruction& b) const {
    if (a.deg != b.deg) return a.deg > b.deg; // priority queue: smallest first
    Cmp c = order->compare(a.overlap, b.overlap);
    if (c != Cmp::EQ) return c == Cmp::GT;
    if (a.i != b.i) return a.i > b.i;
    if (a.j != b.j) return a.j > b.j;
    return a.cut > b.cut;
  }
};

} // namespace

NcPoly normal_form(const NcPoly& p, const GroebnerBasis& gb,
                   ReduceStrategy s) {
  if (auto d = p.homogeneous_degree();
      d && *d > gb.truncation_degree && !gb.complete)
    throw std::invalid_argument("normal_form: degree beyond truncation");
  Reducer red{gb.order, &gb.elements, &gb.leads};
  return red.full(p, s);
}

NcPoly normal_form(const NcPoly& p, const ModuleGroebnerBasis& gb,
                   ReduceStrategy s) {
  if (auto d = p.homogeneous_degree();
      d && *d > gb.truncation_degree && !gb.complete)
    throw std::invalid_argument("normal_form: degree beyond truncation");
  Reducer red{gb.two_sided.order, &gb.two_sided.elements, &gb.two_sided.leads,
              &gb.prefix, &gb.prefix_leads};
  return red.full(p, s);
}

GroebnerBasis buchberger_two_sided(const std::vector<NcPoly>& relations,
                                   const MonomialOrder& order, int trunc) {
  int maxdeg = 0;
  for (const auto& r : relations) {
    if (r.is_zero())
      throw std::invalid_argument("zero relation among Groebner inputs");
    if (r.is_module())
      throw std::invalid_argument("module-headed relation in two-sided basis");
    auto d = r.homogeneous_degree();
    maxdeg = std::max(maxdeg, *d);
  }
  if (trunc < maxdeg)
    throw std::invalid_argument("truncation below max relation degree");

  std::vector<NcPoly> elems;
  std::vector<Word> leads;
  std::vector<char> alive;
  std::priority_queue<Obstruction, std::vector<Obstruction>, ObstructionOrder>
      queue{ObstructionOrder{&order}};
  bool truncated_away = false;

  auto enqueue_pairs = [&](int idx) {
    for (int j = 0; j <= idx; ++j) {
      if (!alive[j]) continue;
      // proper overlaps: nonempty proper suffix of one lead = prefix of the
      // other, in both directions; inclusions of one lead inside the other
      auto add_overlaps = [&](int a, int b) {
        const Word& ua = leads[a];
        const Word& ub = leads[b];
        for (int k = 1; k < std::min(ua.degree(), ub.degree()); ++k) {
          if (!std::equal(ua.letters.end() - k, ua.letters.end(),
                          ub.letters.begin()))
            continue;
          Word overlap = ua.concat(ub.subword(k, ub.degree() - k));
          if (overlap.degree() > trunc) {
            truncated_away = true;
            continue;
          }
          queue.push({overlap.degree(), overlap, a, b, false, k});
        }
      };
      add_overlaps(idx, j);
      if (j != idx) add_overlaps(j, idx);
      // inclusion: shorter lead inside longer one
      auto add_inclusions = [&](int big, int small) {
        if (leads[small].degree() >= leads[big].degree()) return;
        if (leads[big].find_subword(leads[small]) >= 0)
          queue.push({leads[big].degree(), leads[big], big, small, false, -1});
      };
      add_inclusions(idx, j);
      if (j != idx) add_inclusions(j, idx);
    }
  };

  std::deque<NcPoly> pending(relations.begin(), relations.end());

  auto insert_poly = [&](NcPoly h) {
    Reducer red{order, &elems, &leads, nullptr, nullptr, &alive};
    h = red.full(std::move(h), ReduceStrategy::LargestFirst);
    if (h.is_zero()) return;
    if (*h.homogeneous_degree() > trunc) {
      truncated_away = true;
      return;
    }
    h = monic(std::move(h), order);
    Word lw = h.leading_word(order);
    // retire elements whose lead is now divisible; re-reduce them later
    for (size_t i = 0; i < elems.size(); ++i) {
      if (!alive[i]) continue;
      if (leads[i].find_subword(lw) >= 0) {
        alive[i] = 0;
        pending.push_back(elems[i]);
      }
    }
    elems.push_back(std::move(h));
    leads.push_back(lw);
    alive.push_back(1);
    enqueue_pairs(static_cast<int>(elems.size()) - 1);
  };

  while (!pending.empty() || !queue.empty()) {
    if (!pending.empty()) {
      NcPoly p = std::move(pending.front());
      pending.pop_front();
      insert_poly(std::move(p));
      continue;
    }
    Obstruction ob = queue.top();
    queue.pop();
    if (!alive[ob.i] || !alive[ob.j]) continue;
    NcPoly s;
    if (ob.cut >= 0) {
      const Word& u = leads[ob.i];
      const Word& v = leads[ob.j];
      Word left = u.subword(0, u.degree() - ob.cut);
      Word right = v.subword(ob.cut, v.degree() - ob.cut);
      s = multiply(elems[ob.i], NcPoly(right)) -
          multiply(NcPoly(left), elems[ob.j]);
    } else {
      // inclusion: lead(j) inside lead(i)
      const Word& u = leads[ob.i];
      const Word& v = leads[ob.j];
      int pos = u.find_subword(v);
      Word left = u.subword(0, pos);
      Word right = u.subword(pos + v.degree(), u.degree() - pos - v.degree());
      s = elems[ob.i] -
          multiply(multiply(NcPoly(left), elems[ob.j]), NcPoly(right));
    }
    insert_poly(std::move(s));
  }

  // final interreduction: tail-reduce each surviving element
  GroebnerBasis gb;
  gb.order = order;
  gb.truncation_degree = trunc;
  gb.complete = !truncated_away;
  std::vector<int> keep;
  for (size_t i = 0; i < elems.size(); ++i)
    if (alive[i]) keep.push_back(static_cast<int>(i));
  std::sort(keep.begin(), keep.end(), [&](int a, int b) {
    return order.less(leads[a], leads[b]);
  });
  for (int idx : keep) {
    gb.elements.push_back(elems[idx]);
    gb.leads.push_back(leads[idx]);
  }
  for (size_t i = 0; i < gb.elements.size(); ++i) {
    Reducer red{order, &gb.elements, &gb.leads};
    red.skip = static_cast<int>(i);
    gb.elements[i] =
        red.full(std::move(gb.elements[i]), ReduceStrategy::LargestFirst);
  }
  return gb;
}

ModuleGroebnerBasis module_groebner(const GroebnerBasis& alg_gb,
                                    const std::vector<NcPoly>& modrels,
                                    int num_heads, int trunc) {
  const MonomialOrder& order = alg_gb.order;
  for (const auto& r : modrels) {
    if (r.is_zero())
      throw std::invalid_argument("zero relation among module inputs");
    if (!r.is_module())
      throw std::invalid_argument("module relation lacks a head");
    for (const auto& [w, c] : r.terms()) {
      if (w.head < 0 || w.head >= num_heads)
        throw std::invalid_argument("module head index out of range");
      if (w.degree() < 1)
        throw std::invalid_argument("module relation of algebra degree 0");
    }
    (void)r.homogeneous_degree();
  }
  if (!alg_gb.complete && alg_gb.truncation_degree < trunc)
    throw std::invalid_argument("algebra basis not complete to truncation");

  ModuleGroebnerBasis mgb;
  mgb.two_sided = alg_gb;
  mgb.num_heads = num_heads;
  mgb.truncation_degree = trunc;

  std::vector<NcPoly> prefix;
  std::vector<Word> pleads;
  std::vector<char> palive;
  bool truncated_away = false;

  struct POb {
    int deg;
    Word overlap;
    int qi; // prefix element
    int gj; // two-sided element
    int cut;
  };
  auto pob_less = [&](const POb& a, const POb& b) {
    if (a.deg != b.deg) return a.deg > b.deg;
    Cmp c = order.compare(a.overlap, b.overlap);
    if (c != Cmp::EQ) return c == Cmp::GT;
    if (a.qi != b.qi) return a.qi > b.qi;
    if (a.gj != b.gj) return a.gj > b.gj;
    return a.cut > b.cut;
  };
  std::priority_queue<POb, std::vector<POb>, decltype(pob_less)> queue{
      pob_less};

  auto enqueue = [&](int qi) {
    const Word& w = pleads[qi];
    for (int gj = 0; gj < alg_gb.size(); ++gj) {
      const Word& u = alg_gb.leads[gj];
      // proper suffix of w equals a proper prefix of u
      for (int k = 1; k < std::min(w.degree() + 1, u.degree()); ++k) {
        if (k > w.degree()) break;
        if (!std::equal(w.letters.end() - k, w.letters.end(),
                        u.letters.begin()))
          continue;
        Word overlap(w.head, w.letters);
        overlap.letters.insert(overlap.letters.end(), u.letters.begin() + k,
                               u.letters.end());
        if (overlap.degree() > trunc) {
          truncated_away = true;
          continue;
        }
        queue.push({overlap.degree(), overlap, qi, gj, k});
      }
    }
  };

  std::deque<NcPoly> pending(modrels.begin(), modrels.end());

  auto full_reduce = [&](NcPoly p) {
    // liveness mask covers [two-sided | prefix]
    std::vector<char> alive(alg_gb.size() + prefix.size(), 1);
    for (size_t i = 0; i < palive.size(); ++i)
      alive[alg_gb.size() + i] = palive[i];
    Reducer red{order, &alg_gb.elements, &alg_gb.leads, &prefix, &pleads,
                &alive};
    return red.full(std::move(p), ReduceStrategy::LargestFirst);
  };

  auto insert_poly = [&](NcPoly h) {
    h = full_reduce(std::move(h));
    if (h.is_zero()) return;
    if (*h.homogeneous_degree() > trunc) {
      truncated_away = true;
      return;
    }
    h = monic(std::move(h), order);
    Word lw = h.leading_word(order);
    for (size_t i = 0; i < prefix.size(); ++i) {
      if (!palive[i]) continue;
      if (pleads[i].head == lw.head && pleads[i].find_subword(lw) == 0) {
        palive[i] = 0;
        pending.push_back(prefix[i]);
      }
    }
    prefix.push_back(std::move(h));
    pleads.push_back(lw);
    palive.push_back(1);
    enqueue(static_cast<int>(prefix.size()) - 1);
  };

  while (!pending.empty() || !queue.empty()) {
    if (!pending.empty()) {
      NcPoly p = std::move(pending.front());
      pending.pop_front();
      insert_poly(std::move(p));
      continue;
    }
    POb ob = queue.top();
    queue.pop();
    if (!palive[ob.qi]) continue;
    const Word& w = pleads[ob.qi];
    const Word& u = alg_gb.leads[ob.gj];
    Word right = u.subword(ob.cut, u.degree() - ob.cut);
    Word left(w.head, std::vector<uint8_t>(w.letters.begin(),
                                           w.letters.end() - ob.cut));
    NcPoly s = multiply(prefix[ob.qi], NcPoly(right)) -
               multiply(NcPoly(left), alg_gb.elements[ob.gj]);
    insert_poly(std::move(s));
  }

  std::vector<int> keep;
  for (size_t i = 0; i < prefix.size(); ++i)
    if (palive[i]) keep.push_back(static_cast<int>(i));
  std::sort(keep.begin(), keep.end(), [&](int a, int b) {
    return order.less(pleads[a], pleads[b]);
  });
  for (int idx : keep) {
    mgb.prefix.push_back(prefix[idx]);
    mgb.prefix_leads.push_back(pleads[idx]);
  }
  mgb.complete = alg_gb.complete && !truncated_away;
  // tail-reduction pass
  for (size_t i = 0; i < mgb.prefix.size(); ++i) {
    NcPoly lead_term(mgb.prefix_leads[i]);
    NcPoly tail = mgb.prefix[i] - lead_term;
    Reducer red{order, &mgb.two_sided.elements, &mgb.two_sided.leads,
                &mgb.prefix, &mgb.prefix_leads};
    tail = red.full(std::move(tail), ReduceStrategy::LargestFirst);
    mgb.prefix[i] = lead_term + tail;
  }
  return mgb;
}

namespace {

// DFS enumeration of words avoiding the leading words; letters explored in
// precedence order so output is ascending in the monomial order.
struct Enumerator {
  const MonomialOrder& order;
  const std::vector<Word>& leads;
  const std::vector<Word>* prefix_leads = nullptr;
  int head = -1;
  std::vector<int> letters_by_rank;

  explicit Enumerator(const MonomialOrder& o, const std::vector<Word>& l)
      : order(o), leads(l) {
    letters_by_rank.resize(o.d);
    for (int g = 0; g < o.d; ++g) letters_by_rank[o.rank[g]] = g;
  }

  bool tail_blocked(const Word& w) const {
    for (const auto& lw : leads) {
      int k = lw.degree();
      if (k == 0 || k > w.degree()) continue;
      if (std::equal(lw.letters.begin(), lw.letters.end(),
                     w.letters.end() - k))
        return true;
    }
    if (prefix_leads && w.is_module()) {
      for (const auto& pw : *prefix_leads) {
        if (pw.head != w.head || pw.degree() != w.degree()) continue;
        if (pw.letters == w.letters) return true;
      }
    }
    return false;
  }

  void run(int m, std::vector<Word>& out) {
    Word cur;
    cur.head = head;
    if (m == 0) {
      if (!(prefix_leads && cur.is_module() && tail_blocked(cur)))
        out.push_back(cur);
      return;
    }
    dfs(cur, m, out);
  }

  void dfs(Word& cur, int m, std::vector<Word>& out) {
    for (int g : letters_by_rank) {
      cur.letters.push_back(static_cast<uint8_t>(g));
      if (!tail_blocked(cur)) {
        if (cur.degree() == m)
          out.push_back(cur);
        else
          dfs(cur, m, out);
      }
      cur.letters.pop_back();
    }
  }
};

} // namespace

std::vector<Word> standard_words(const GroebnerBasis& gb, int m) {
  if (m > gb.truncation_degree)
    throw std::invalid_argument("standard_words: beyond truncation");
  std::vector<Word> out;
  Enumerator e(gb.order, gb.leads);
  e.run(m, out);
  return out;
}

std::vector<Word> standard_words(const ModuleGroebnerBasis& gb, int m) {
  if (m > gb.truncation_degree)
    throw std::invalid_argument("standard_words: beyond truncation");
  std::vector<Word> out;
  for (int h = 0; h < gb.num_heads; ++h) {
    Enumerator e(gb.two_sided.order, gb.two_sided.leads);
    e.prefix_leads = &gb.prefix_leads;
    e.head = h;
    e.run(m, out);
  }
  return out;
}

std::vector<long> hilbert_series(const GroebnerBasis& gb, int max_degree) {
  std::vector<long> out;
  for (int m = 0; m <= max_degree; ++m)
    out.push_back(static_cast<long>(standard_words(gb, m).size()));
  return out;
}

std::vector<long> hilbert_series(const ModuleGroebnerBasis& gb,
                                 int max_degree) {
  std::vector<long> out;
  for (int m = 0; m <= max_degree; ++m)
    out.push_back(static_cast<long>(standard_words(gb, m).size()));
  return out;
}

} // namespace qk
