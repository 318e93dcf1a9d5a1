#pragma once

#include <variant>

#include "qk/quadratic.hpp"

namespace qk {

/// chi(n) = 1 for even n, 0 for odd n.
inline int chi(long n) { return (n % 2 == 0) ? 1 : 0; }

/// Built-in presentations. Modules come with their algebra attached.
Presentation fk4();
Presentation fk3();
Presentation poly2(); // k[x,y] presented by xy - yx
Presentation cassidy(int m);
Presentation conner_goetz(const Rational& g);

ModulePresentation fk4_module_m1();
ModulePresentation fk4_module_m2();
ModulePresentation fk4_module_m3();
ModulePresentation fk4_module_m4();
ModulePresentation conner_goetz_module_m1(const Rational& g);

/// Resolves a built-in name like "FK4", "M2", "Cassidy:5", "ConnerGoetz:1",
/// "CGM1:1", "KXY", "FK3". Names are case-insensitive; a leading '@' is
/// accepted. Throws std::invalid_argument for unknown names or bad params.
std::variant<Presentation, ModulePresentation> catalog_lookup(
    const std::string& name);

/// Expected self-check metadata attached to a catalog entry.
struct CatalogExpectation {
  std::string name;
  int generators = 0;
  int relations = 0;
  std::vector<long> dimension_vector; // empty when unbounded/not asserted
};
std::vector<CatalogExpectation> catalog_expectations();

} // namespace qk
