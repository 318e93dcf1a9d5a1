#pragma once

#include <vector>

#include "qk/ncpoly.hpp"

namespace qk {

/// Interreduced two-sided Groebner basis of a homogeneous ideal in the free
/// algebra, truncated at `truncation_degree`. Elements are monic, fully
/// tail-reduced and sorted by leading word; no leading word divides another.
struct GroebnerBasis {
  MonomialOrder order;
  std::vector<NcPoly> elements;
  std::vector<Word> leads; // leading words, parallel to elements
  int truncation_degree = 0;
  bool complete = false; // completion terminated below the truncation

  int size() const { return static_cast<int>(elements.size()); }
};

/// Combined rewriting system for a quadratic (or higher) module presented
/// over an algebra with Groebner basis `two_sided`: module-headed prefix
/// elements plus the two-sided part.
struct ModuleGroebnerBasis {
  GroebnerBasis two_sided;
  std::vector<NcPoly> prefix;
  std::vector<Word> prefix_leads;
  int num_heads = 0;
  int truncation_degree = 0;
  bool complete = false;
};

/// Standard words per internal degree (index = degree).
using GradedBasis = std::vector<std::vector<Word>>;

enum class ReduceStrategy { LargestFirst, SmallestFirst };

GroebnerBasis buchberger_two_sided(const std::vector<NcPoly>& relations,
                                   const MonomialOrder& order, int trunc);

ModuleGroebnerBasis module_groebner(const GroebnerBasis& alg_gb,
                                    const std::vector<NcPoly>& modrels,
                                    int num_heads, int trunc);

NcPoly normal_form(const NcPoly& p, const GroebnerBasis& gb,
                   ReduceStrategy s = ReduceStrategy::LargestFirst);
NcPoly normal_form(const NcPoly& p, const ModuleGroebnerBasis& gb,
                   ReduceStrategy s = ReduceStrategy::LargestFirst);

/// Standard words of internal degree m, ascending in the basis order.
std::vector<Word> standard_words(const GroebnerBasis& gb, int m);
/// Module standard words of internal degree m (heads ascending first).
std::vector<Word> standard_words(const ModuleGroebnerBasis& gb, int m);

std::vector<long> hilbert_series(const GroebnerBasis& gb, int max_degree);
std::vector<long> hilbert_series(const ModuleGroebnerBasis& gb,
                                 int max_degree);

} // namespace qk
