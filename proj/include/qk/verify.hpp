#pragma once

#include "qk/identities.hpp"
#include "qk/resolving.hpp"

namespace qk {

struct CheckLine {
  std::string family;
  std::string instance;
  std::string expected;
  std::string got;
  bool pass = false;
};

struct VerifyReport {
  std::vector<CheckLine> lines;
  bool all_pass() const {
    for (const auto& l : lines)
      if (!l.pass) return false;
    return true;
  }
  void add(const std::string& fam, const std::string& inst,
           const std::string& expect, const std::string& got) {
    lines.push_back({fam, inst, expect, got, expect == got});
  }
  /// One machine-parsable line per check: FAMILY instance EXPECTED got STATUS
  std::string render() const;
};

/// Shared FK(4) computation stack reused across the verification suites.
struct Fk4Stack {
  std::shared_ptr<AlgebraCtx> alg;
  std::shared_ptr<AlgebraCtx> dual;
  std::vector<CatalogModule> catalog; // k, M1, M2, M3
  std::vector<std::shared_ptr<KoszulCtx>> ctxs;

  static Fk4Stack make(int alg_trunc = 13, int dual_trunc = 15);
};

/// The resolving datum of the catalog algebra on six generators (modules
/// k, M1, M2, M3 and the thirteen-entry multiplicity map).
ResolvingDatum fk4_resolving_datum();
ResolvingDatum fk3_resolving_datum();
ResolvingDatum kxy_resolving_datum();
ResolvingDatum cassidy_resolving_datum(int m);
ResolvingDatum conner_goetz_resolving_datum(const Rational& g);

/// Identity suite: every product family instantiated for n <= bound.
VerifyReport verify_identities_suite(int bound_n = 9);

/// Closed-form boundary dimensions, first-letter statistics of the
/// reordered standard-word bases, and the image split dimensions.
VerifyReport verify_stable_dims(const Fk4Stack& stack, int n_max = 8);

/// Full identification pipeline against the thirteen-entry map, plus the
/// auxiliary homology facts.
VerifyReport verify_fk4_pipeline(const Fk4Stack& stack);

VerifyReport verify_all(int bound_n = 9, int n_max = 8);

/// Classification of a dual-algebra standard word: a two-block word on a
/// complementary generator pair (including pure powers) or not.
bool is_pair_power_word(const Word& w);

/// Checks the two-term differential formula on the pair-power columns of
/// the layer d_{n,m} of the trivial module: the image of z (x) w is the
/// alternating left-letter term plus the partner term.
bool check_pair_power_columns(const KoszulCtx& kc, int n, int m);

} // namespace qk
