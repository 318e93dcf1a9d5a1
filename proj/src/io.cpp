#include "qk/io.hpp"

#include <fstream>
#include <json.hpp>

#include "qk/catalog.hpp"
#include "qk/verify.hpp"

namespace qk {

using nlohmann::json;

namespace {

int line_of_offset(const std::string& text, size_t byte) {
  int line = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("parse error at line " +
                                std::to_string(line_of_offset(text, e.byte)) +
                                ": " + e.what());
  }
}

NcPoly parse_poly(const json& terms, const GeneratorSet& gens,
                  const std::vector<std::string>* heads) {
  NcPoly p;
  for (const auto& term : terms) {
    if (!term.is_array() || term.size() != 2)
      throw std::invalid_argument("relation term must be [coeff, word]");
    Rational c = parse_rational(term[0].get<std::string>());
    Word w;
    bool first = true;
    for (const auto& lab : term[1]) {
      std::string l = lab.get<std::string>();
      if (first && heads) {
        auto it = std::find(heads->begin(), heads->end(), l);
        if (it != heads->end()) {
          w.head = static_cast<int>(it - heads->begin());
          first = false;
          continue;
        }
      }
      first = false;
      int g = gens.index_of(l);
      if (g < 0) throw std::invalid_argument("unknown generator: " + l);
      w.letters.push_back(static_cast<uint8_t>(g));
    }
    if (heads && w.head < 0)
      throw std::invalid_argument("module word without leading generator");
    p.add_term(w, c);
  }
  return p;
}

json poly_terms(const NcPoly& p, const GeneratorSet& gens,
                const std::vector<std::string>* heads) {
  json terms = json::array();
  for (const auto& [w, c] : p.terms()) {
    json labels = json::array();
    if (w.is_module()) labels.push_back((*heads)[w.head]);
    for (uint8_t l : w.letters) labels.push_back(gens.label(l));
    terms.push_back(json::array({to_string(c), labels}));
  }
  return terms;
}

} // namespace

MonomialOrder ParsedPresentation::order() const {
  const GeneratorSet& gens = algebra().gens;
  if (order_labels.empty()) return MonomialOrder::identity(gens.size());
  std::vector<int> prec;
  for (const auto& l : order_labels) {
    int g = gens.index_of(l);
    if (g < 0) throw std::invalid_argument("order lists unknown label " + l);
    prec.push_back(g);
  }
  return MonomialOrder::from_precedence(prec);
}

ParsedPresentation parse_presentation(const std::string& text) {
  json doc = parse_json(text);
  if (!doc.contains("generators"))
    throw std::invalid_argument("missing `generators`");
  std::vector<std::string> labels;
  for (const auto& g : doc["generators"]) labels.push_back(g);
  Presentation alg;
  alg.gens = GeneratorSet(labels);
  for (const auto& rel : doc.value("relations", json::array()))
    alg.relations.push_back(parse_poly(rel, alg.gens, nullptr));
  ParsedPresentation out;
  if (doc.contains("order"))
    for (const auto& l : doc["order"]) out.order_labels.push_back(l);
  if (doc.contains("module_generators")) {
    ModulePresentation mod;
    mod.algebra = alg;
    for (const auto& g : doc["module_generators"])
      mod.mgens.push_back(g.get<std::string>());
    for (const auto& rel : doc.value("module_relations", json::array()))
      mod.relations.push_back(parse_poly(rel, alg.gens, &mod.mgens));
    validate(mod);
    out.pres = std::move(mod);
  } else {
    validate(alg);
    out.pres = std::move(alg);
  }
  return out;
}

std::string print_presentation(const ParsedPresentation& p) {
  json doc;
  const Presentation& alg = p.algebra();
  doc["generators"] = alg.gens.names;
  json rels = json::array();
  for (const auto& r : alg.relations)
    rels.push_back(poly_terms(r, alg.gens, nullptr));
  doc["relations"] = rels;
  if (!p.order_labels.empty()) doc["order"] = p.order_labels;
  if (p.is_module()) {
    const auto& mod = std::get<ModulePresentation>(p.pres);
    doc["module_generators"] = mod.mgens;
    json mrels = json::array();
    for (const auto& r : mod.relations)
      mrels.push_back(poly_terms(r, alg.gens, &mod.mgens));
    doc["module_relations"] = mrels;
  }
  return doc.dump(2) + "\n";
}

ParsedPresentation wrap(const Presentation& p) {
  ParsedPresentation out;
  out.pres = p;
  return out;
}

ParsedPresentation wrap(const ModulePresentation& m) {
  ParsedPresentation out;
  out.pres = m;
  return out;
}

ParsedPresentation load_presentation(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') {
    ParsedPresentation out;
    auto v = catalog_lookup(arg);
    if (std::holds_alternative<Presentation>(v))
      out.pres = std::get<Presentation>(v);
    else
      out.pres = std::get<ModulePresentation>(v);
    return out;
  }
  std::ifstream in(arg);
  if (!in) throw std::invalid_argument("cannot read " + arg);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_presentation(text);
}

ResolvingDatum parse_datum(const std::string& text) {
  json doc = parse_json(text);
  ResolvingDatum d;
  for (const auto& m : doc.value("modules", json::array())) {
    CatalogModule cm;
    if (m.is_string()) {
      cm.name = m.get<std::string>();
      auto v = catalog_lookup(cm.name);
      if (!std::holds_alternative<ModulePresentation>(v))
        throw std::invalid_argument("datum module is not a module: " +
                                    cm.name);
      cm.pres = std::get<ModulePresentation>(v);
    } else {
      ParsedPresentation p = parse_presentation(m.dump());
      if (!p.is_module())
        throw std::invalid_argument("datum entry is not a module");
      cm.pres = std::get<ModulePresentation>(p.pres);
      cm.name = "inline";
    }
    d.modules.push_back(std::move(cm));
  }
  for (const auto& e : doc.value("hh", json::array())) {
    if (!e.is_array() || e.size() != 6)
      throw std::invalid_argument("hh entry must be [i,j,k,ell,pi1,pi2]");
    d.hh.push_back({e[0], e[1], e[2], e[3], e[4], e[5]});
  }
  // dimension vectors via the module bases, truncated when unbounded
  for (auto& cm : d.modules) {
    int trunc = 14;
    MonomialOrder order =
        MonomialOrder::identity(cm.pres.algebra.dim_v());
    GroebnerBasis gb =
        buchberger_two_sided(cm.pres.algebra.relations, order, trunc);
    ModuleGroebnerBasis mgb = module_groebner(gb, cm.pres.relations,
                                              cm.pres.dim_vm(), trunc);
    auto h = hilbert_series(mgb, trunc);
    while (!h.empty() && h.back() == 0) h.pop_back();
    cm.dimvec.assign(h.begin(), h.end());
    cm.truncated = static_cast<int>(h.size()) > trunc; // still nonzero at top
  }
  return d;
}

ResolvingDatum load_datum(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') {
    std::string name = arg.substr(1), param;
    if (auto pos = name.find(':'); pos != std::string::npos) {
      param = name.substr(pos + 1);
      name = name.substr(0, pos);
    }
    for (auto& c : name) c = static_cast<char>(std::tolower(c));
    if (name == "fk4") return fk4_resolving_datum();
    if (name == "fk3") return fk3_resolving_datum();
    if (name == "kxy") return kxy_resolving_datum();
    if (name == "cassidy") return cassidy_resolving_datum(std::stoi(param));
    if (name == "cg" || name == "connergoetz")
      return conner_goetz_resolving_datum(parse_rational(param));
    throw std::invalid_argument("unknown built-in datum " + arg);
  }
  std::ifstream in(arg);
  if (!in) throw std::invalid_argument("cannot read " + arg);
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_datum(text);
}

} // namespace qk
