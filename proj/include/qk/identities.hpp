#pragma once

#include <optional>
#include <set>

#include "qk/groebner.hpp"

namespace qk {

/// Affine expression a*n + b*r + c used in exponents and parity arguments.
struct AffineExpr {
  int cn = 0, cr = 0, c0 = 0;
  long eval(long n, long r) const { return cn * n + cr * r + c0; }
};

/// One multiplicand of a coefficient: an integer, chi(arg) or (-1)^arg.
struct CoeffFactor {
  enum Kind { Integer, Chi, SignPower } kind = Integer;
  long value = 1;  // for Integer
  AffineExpr arg;  // for Chi / SignPower
};

/// A monomial template: optional module head plus label^exponent factors,
/// or a reference to a named macro instantiated at n + shift.
struct MonomialTemplate {
  std::string head;  // empty for algebra monomials
  struct Factor {
    std::string label;
    AffineExpr exp; // constant 1 when absent
  };
  std::vector<Factor> factors;        // factors before the macro reference
  std::vector<Factor> factors_after;  // factors after it
  std::string macro;                  // expanded in place at n + macro_shift
  int macro_shift = 0;
};

struct TermTemplate {
  std::vector<CoeffFactor> coeff;
  MonomialTemplate mono;
};

struct IdentityTemplate {
  std::vector<TermTemplate> lhs;
  std::vector<TermTemplate> rhs;
  // per-identity r-scope override (empty = family scope)
  bool has_r = false;
  AffineExpr r_lo, r_hi;
};

/// A named family of identity templates with an instantiation scope.
struct IdentityFamily {
  std::string name;
  AffineExpr n_lo{0, 0, 2}, n_hi; // n_hi.cn == -1 encodes "up to the bound"
  bool uses_n = true;
  int parity = -1; // 0: even n only, 1: odd n only
  bool pairs = false;
  bool fam_has_r = false;
  AffineExpr fam_r_lo, fam_r_hi;
  std::string module; // empty: evaluate in the dual algebra
  std::vector<IdentityTemplate> identities;
};

struct IdentityFile {
  std::map<std::string, MonomialTemplate> macros;
  std::vector<IdentityFamily> families;
};

IdentityFile parse_identity_file(const std::string& text);

struct IdentityOutcome {
  std::string family;
  int instances = 0;
  int failures = 0;
  std::vector<std::string> failed_instances;
};

/// Evaluation context: generator labels of the dual algebra, its Groebner
/// basis, and optionally a module rewriting system per module name.
struct IdentityContext {
  const GeneratorSet* gens = nullptr;
  const GroebnerBasis* gb = nullptr;
  std::map<std::string, std::pair<const std::vector<std::string>*,
                                  const ModuleGroebnerBasis*>> modules;
};

std::vector<IdentityOutcome> verify_identities(const IdentityFile& file,
                                               const IdentityContext& ctx,
                                               int bound_n);

/// The built-in identity data (product tables of the catalog dual algebra
/// and the dual-module action tables).
const std::string& builtin_identity_data();

} // namespace qk
