#pragma once

#include "qk/groebner.hpp"
#include "qk/linalg.hpp"
#include "qk/ncpoly.hpp"

namespace qk {

/// Quadratic algebra presentation: generators V and an independent list of
/// degree-2 relations spanning R inside V (x) V.
struct Presentation {
  GeneratorSet gens;
  std::vector<NcPoly> relations;

  int dim_v() const { return gens.size(); }
  int dim_r() const { return static_cast<int>(relations.size()); }
};

/// Quadratic right module presentation (V_M, R_M) over a quadratic algebra:
/// module generators and an independent list of module-headed relations of
/// algebra degree 1.
struct ModulePresentation {
  Presentation algebra;
  std::vector<std::string> mgens;
  std::vector<NcPoly> relations;

  int dim_vm() const { return static_cast<int>(mgens.size()); }
  int dim_rm() const { return static_cast<int>(relations.size()); }
};

/// Basis of a space of linear maps V_M -> V_N, each map a dense column-major
/// matrix m[target][source].
struct LinearMapBasis {
  int dim_source = 0;
  int dim_target = 0;
  std::vector<std::vector<std::vector<Rational>>> maps;

  int dim() const { return static_cast<int>(maps.size()); }
};

/// Validates invariants (degrees, head ranges, linear independence of the
/// relation lists). Throws std::invalid_argument on violation.
void validate(const Presentation& p);
void validate(const ModulePresentation& m);

/// Coefficient matrix of the relation list in the tensor basis; algebra
/// relations use columns (first letter)*d + (second letter), module
/// relations columns (module gen)*d + (letter).
SparseMatrix relation_matrix(const Presentation& p);
SparseMatrix relation_matrix(const ModulePresentation& m);

/// Quadratic dual (V*, R-perp) under the evaluation pairing; dual generator
/// labels follow the x -> y renaming convention, otherwise a ' suffix.
Presentation quadratic_dual(const Presentation& p);
ModulePresentation module_quadratic_dual(const ModulePresentation& m);

std::string dual_label(const std::string& label);

/// Hom of quadratic presentations over the same algebra: all g with
/// (g (x) id)(R_M) contained in R_N.
LinearMapBasis hom_space(const ModulePresentation& m,
                         const ModulePresentation& n);

/// The trivial module: one generator, killed by every algebra generator.
ModulePresentation trivial_module(const Presentation& p);

} // namespace qk
