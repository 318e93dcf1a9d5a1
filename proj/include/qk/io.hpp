#pragma once

#include <variant>

#include "qk/resolving.hpp"

namespace qk {

/// A parsed presentation file: algebra or module presentation plus the
/// optional generator order (labels, smallest first).
struct ParsedPresentation {
  std::variant<Presentation, ModulePresentation> pres;
  std::vector<std::string> order_labels; // empty: listing order

  const Presentation& algebra() const {
    return std::holds_alternative<Presentation>(pres)
               ? std::get<Presentation>(pres)
               : std::get<ModulePresentation>(pres).algebra;
  }
  bool is_module() const {
    return std::holds_alternative<ModulePresentation>(pres);
  }
  MonomialOrder order() const;
};

/// Structured text document with fields `generators`, `relations` (lists of
/// [rational-string, label-list] terms), optional `module_generators`,
/// `module_relations` (words led by a module-generator label) and `order`.
/// Parse errors carry 1-based line numbers.
ParsedPresentation parse_presentation(const std::string& text);
std::string print_presentation(const ParsedPresentation& p);
ParsedPresentation wrap(const Presentation& p);
ParsedPresentation wrap(const ModulePresentation& m);

/// Resolves "@Name" against the catalog or reads and parses a file.
ParsedPresentation load_presentation(const std::string& arg);

/// Datum document: `modules` (built-in names or inline presentations) and
/// `hh` entries [i, j, k, ell, pi1, pi2].
ResolvingDatum parse_datum(const std::string& text);
/// "@FK4", "@FK3", "@KXY", "@Cassidy:m", "@CG:g" or a file path.
ResolvingDatum load_datum(const std::string& arg);

} // namespace qk
