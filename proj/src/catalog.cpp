#include "qk/catalog.hpp"

#include <algorithm>
#include <sstream>

namespace qk {

namespace {

/// Builds a polynomial from (coeff, head, letters) triples given as label
/// strings resolved against the generator set.
struct RelBuilder {
  const GeneratorSet& gens;
  const std::vector<std::string>* heads = nullptr;

  uint8_t g(const std::string& l) const {
    int i = gens.index_of(l);
    if (i < 0) throw std::invalid_argument("unknown generator " + l);
    return static_cast<uint8_t>(i);
  }
  int h(const std::string& l) const {
    auto it = std::find(heads->begin(), heads->end(), l);
    if (it == heads->end())
      throw std::invalid_argument("unknown module generator " + l);
    return static_cast<int>(it - heads->begin());
  }

  NcPoly word(int c, std::initializer_list<std::string> labels) const {
    std::vector<uint8_t> ls;
    for (const auto& l : labels) ls.push_back(g(l));
    return NcPoly(Word(std::move(ls)), Rational(c));
  }
  NcPoly mword(int c, const std::string& head,
               std::initializer_list<std::string> labels) const {
    std::vector<uint8_t> ls;
    for (const auto& l : labels) ls.push_back(g(l));
    return NcPoly(Word(h(head), std::move(ls)), Rational(c));
  }
};

} // namespace

Presentation fk4() {
  Presentation p;
  p.gens = GeneratorSet({"x12", "x13", "x23", "x14", "x24", "x34"});
  RelBuilder b{p.gens};
  auto sq = [&](const std::string& x) { return b.word(1, {x, x}); };
  auto braid = [&](const std::string& a, const std::string& bb,
                   const std::string& c) {
    // ab - bc - ca
    return b.word(1, {a, bb}) + b.word(-1, {bb, c}) + b.word(-1, {c, a});
  };
  auto comm = [&](const std::string& a, const std::string& bb) {
    return b.word(1, {a, bb}) + b.word(-1, {bb, a});
  };
  p.relations = {sq("x12"),
                 sq("x13"),
                 sq("x23"),
                 sq("x14"),
                 sq("x24"),
                 sq("x34"),
                 braid("x12", "x23", "x13"),
                 braid("x23", "x12", "x13"),
                 braid("x12", "x24", "x14"),
                 braid("x24", "x12", "x14"),
                 braid("x13", "x34", "x14"),
                 braid("x34", "x13", "x14"),
                 braid("x23", "x34", "x24"),
                 braid("x34", "x23", "x24"),
                 comm("x12", "x34"),
                 comm("x13", "x24"),
                 comm("x14", "x23")};
  return p;
}

Presentation fk3() {
  Presentation p;
  p.gens = GeneratorSet({"x12", "x13", "x23"});
  RelBuilder b{p.gens};
  auto braid = [&](const std::string& a, const std::string& bb,
                   const std::string& c) {
    return b.word(1, {a, bb}) + b.word(-1, {bb, c}) + b.word(-1, {c, a});
  };
  p.relations = {b.word(1, {"x12", "x12"}), b.word(1, {"x13", "x13"}),
                 b.word(1, {"x23", "x23"}), braid("x12", "x23", "x13"),
                 braid("x23", "x12", "x13")};
  return p;
}

Presentation poly2() {
  Presentation p;
  p.gens = GeneratorSet({"x", "y"});
  RelBuilder b{p.gens};
  p.relations = {b.word(1, {"x", "y"}) + b.word(-1, {"y", "x"})};
  return p;
}

Presentation cassidy(int m) {
  if (m < 5) throw std::invalid_argument("cassidy: m must be >= 5");
  std::vector<std::string> names = {"n", "p", "q", "r", "s",
                                    "t", "u", "v", "w"};
  auto xi = [](int i) { return "X" + std::to_string(i); };
  auto yi = [](int i) { return "Y" + std::to_string(i); };
  auto zi = [](int i) { return "Z" + std::to_string(i); };
  names.push_back(xi(1));
  names.push_back(yi(1));
  names.push_back(zi(1));
  for (int i = 2; i <= m - 4; ++i) {
    names.push_back(xi(i));
    names.push_back(yi(i));
    names.push_back(zi(i));
  }
  names.push_back(xi(m - 3));
  names.push_back(yi(m - 3));
  names.push_back(xi(m - 2));
  Presentation p;
  p.gens = GeneratorSet(names);
  RelBuilder b{p.gens};
  auto two = [&](const std::string& a1, const std::string& a2) {
    return b.word(1, {a1, a2});
  };
  auto diff = [&](const std::string& a1, const std::string& a2,
                  const std::string& b1, const std::string& b2) {
    return b.word(1, {a1, a2}) + b.word(-1, {b1, b2});
  };
  auto sum = [&](const std::string& a1, const std::string& a2,
                 const std::string& b1, const std::string& b2) {
    return b.word(1, {a1, a2}) + b.word(1, {b1, b2});
  };
  p.relations = {diff("n", "p", "n", "q"),    diff("n", "p", "n", "r"),
                 diff("p", "s", "p", "t"),    diff("q", "t", "q", "u"),
                 diff("r", "s", "r", "u"),    diff("s", "v", "s", "w"),
                 diff("t", "w", "t", xi(1)),  diff("u", "v", "u", xi(1)),
                 two("v", xi(2)),             two("w", xi(2)),
                 diff("s", "v", "s", yi(1)),  diff("t", "w", "t", yi(1)),
                 diff("u", xi(1), "u", yi(1)), two("s", zi(1)),
                 two("t", zi(1)),             two("u", zi(1))};
  for (int i = 1; i <= m - 3; ++i) p.relations.push_back(two(xi(i), xi(i + 1)));
  for (int i = 2; i <= m - 3; ++i)
    p.relations.push_back(sum(yi(i - 1), xi(i), zi(i - 1), yi(i)));
  for (int i = 1; i <= m - 5; ++i) p.relations.push_back(two(zi(i), zi(i + 1)));
  return p;
}

Presentation conner_goetz(const Rational& g) {
  Presentation p;
  p.gens = GeneratorSet({"x", "y", "z"});
  RelBuilder b{p.gens};
  p.relations = {b.word(1, {"x", "y"}) + b.word(-1, {"y", "x"}),
                 b.word(1, {"z", "z"}),
                 b.word(1, {"x", "z"}) + b.word(-1, {"z", "x"}) +
                     b.word(-1, {"y", "y"}) + (-g) * b.word(1, {"x", "x"})};
  return p;
}

ModulePresentation fk4_module_m1() {
  ModulePresentation m;
  m.algebra = fk4();
  m.mgens = {"a1", "a2"};
  RelBuilder b{m.algebra.gens, &m.mgens};
  m.relations = {b.mword(1, "a1", {"x12"}) + b.mword(1, "a2", {"x12"}),
                 b.mword(1, "a1", {"x13"}),
                 b.mword(1, "a2", {"x23"}),
                 b.mword(1, "a2", {"x14"}),
                 b.mword(1, "a1", {"x24"}),
                 b.mword(1, "a1", {"x34"}) + b.mword(1, "a2", {"x34"})};
  return m;
}

ModulePresentation fk4_module_m2() {
  ModulePresentation m;
  m.algebra = fk4();
  m.mgens = {"h1", "h2", "h3", "h4", "h5", "h6", "h7"};
  RelBuilder b{m.algebra.gens, &m.mgens};
  auto t = [&](int c, const char* h, const char* x) {
    return b.mword(c, h, {x});
  };
  m.relations = {
      t(1, "h1", "x12"),
      t(1, "h1", "x13"),
      t(1, "h1", "x23"),
      t(1, "h2", "x12"),
      t(1, "h2", "x14"),
      t(1, "h2", "x24"),
      t(1, "h3", "x13"),
      t(1, "h3", "x14"),
      t(1, "h3", "x34"),
      t(1, "h4", "x23"),
      t(1, "h4", "x24"),
      t(1, "h4", "x34"),
      t(1, "h1", "x24") + t(-1, "h3", "x24") + t(-1, "h5", "x13"),
      t(1, "h2", "x13") + t(-1, "h4", "x13") + t(1, "h5", "x24"),
      t(1, "h5", "x34") + t(-1, "h6", "x12"),
      t(1, "h1", "x14") + t(-1, "h4", "x14") + t(1, "h6", "x23"),
      t(1, "h2", "x23") + t(-1, "h3", "x23") + t(-1, "h6", "x14"),
      t(1, "h5", "x12") + t(1, "h6", "x34"),
      t(1, "h1", "x34") + t(1, "h2", "x34") + t(1, "h7", "x12"),
      t(1, "h6", "x24") + t(1, "h7", "x13"),
      t(1, "h5", "x14") + t(1, "h7", "x23"),
      t(1, "h5", "x23") + t(-1, "h7", "x14"),
      t(1, "h6", "x13") + t(-1, "h7", "x24"),
      t(1, "h3", "x12") + t(1, "h4", "x12") + t(1, "h7", "x34")};
  return m;
}

ModulePresentation fk4_module_m3() {
  ModulePresentation m;
  m.algebra = fk4();
  m.mgens = {"e1", "e2", "e3", "e4", "e5", "e6", "e7", "e8"};
  RelBuilder b{m.algebra.gens, &m.mgens};
  auto t = [&](int c, const char* h, const char* x) {
    return b.mword(c, h, {x});
  };
  m.relations = {
      t(1, "e1", "x12") + t(1, "e2", "x34"),
      t(1, "e1", "x34") + t(-1, "e2", "x12"),
      t(1, "e3", "x12") + t(-1, "e4", "x34"),
      t(1, "e3", "x34") + t(1, "e4", "x12"),
      t(1, "e4", "x13") + t(1, "e2", "x24"),
      t(1, "e4", "x24") + t(-1, "e2", "x13"),
      t(1, "e3", "x13") + t(1, "e1", "x24"),
      t(1, "e3", "x24") + t(-1, "e1", "x13"),
      t(1, "e1", "x23") + t(-1, "e4", "x14"),
      t(1, "e1", "x14") + t(1, "e4", "x23"),
      t(1, "e3", "x23") + t(-1, "e2", "x14"),
      t(1, "e3", "x14") + t(1, "e2", "x23"),
      t(1, "e5", "x12"),
      t(1, "e5", "x13"),
      t(1, "e5", "x23"),
      t(1, "e6", "x12"),
      t(1, "e6", "x14"),
      t(1, "e6", "x24"),
      t(1, "e7", "x13"),
      t(1, "e7", "x14"),
      t(1, "e7", "x34"),
      t(1, "e8", "x23"),
      t(1, "e8", "x24"),
      t(1, "e8", "x34")};
  return m;
}

ModulePresentation fk4_module_m4() {
  ModulePresentation m;
  m.algebra = fk4();
  m.mgens = {"c1", "c2", "c3", "c4", "c5", "c6", "c7", "c8"};
  RelBuilder b{m.algebra.gens, &m.mgens};
  auto t = [&](int c, const char* h, const char* x) {
    return b.mword(c, h, {x});
  };
  m.relations = {
      t(1, "c1", "x12"),
      t(1, "c1", "x13"),
      t(1, "c1", "x23"),
      t(1, "c2", "x12"),
      t(1, "c2", "x14"),
      t(1, "c2", "x24"),
      t(1, "c3", "x13"),
      t(1, "c3", "x14"),
      t(1, "c3", "x34"),
      t(1, "c4", "x23"),
      t(1, "c4", "x24"),
      t(1, "c4", "x34"),
      t(1, "c5", "x13") + t(-1, "c1", "x24") + t(1, "c3", "x24"),
      t(1, "c5", "x24") + t(1, "c2", "x13") + t(-1, "c4", "x13"),
      t(1, "c6", "x23") + t(1, "c1", "x14") + t(-1, "c4", "x14"),
      t(1, "c6", "x14") + t(-1, "c2", "x23") + t(1, "c3", "x23"),
      t(1, "c7", "x12") + t(1, "c1", "x34") + t(1, "c2", "x34"),
      t(1, "c7", "x34") + t(1, "c3", "x12") + t(1, "c4", "x12"),
      t(1, "c5", "x12") + t(1, "c6", "x34"),
      t(1, "c5", "x34") + t(-1, "c6", "x12"),
      t(1, "c6", "x13") + t(-1, "c7", "x24"),
      t(1, "c6", "x24") + t(1, "c7", "x13"),
      t(1, "c5", "x14") + t(1, "c7", "x23"),
      t(1, "c5", "x23") + t(-1, "c7", "x14"),
      t(1, "c8", "x12"),
      t(1, "c8", "x13"),
      t(1, "c8", "x23"),
      t(1, "c8", "x14"),
      t(1, "c8", "x24"),
      t(1, "c8", "x34")};
  return m;
}

ModulePresentation conner_goetz_module_m1(const Rational& g) {
  ModulePresentation m;
  m.algebra = conner_goetz(g);
  m.mgens = {"v"};
  RelBuilder b{m.algebra.gens, &m.mgens};
  m.relations = {b.mword(1, "v", {"z"})};
  return m;
}

std::variant<Presentation, ModulePresentation> catalog_lookup(
    const std::string& raw) {
  std::string name = raw;
  if (!name.empty() && name[0] == '@') name = name.substr(1);
  std::string base = name, param;
  if (auto pos = name.find(':'); pos != std::string::npos) {
    base = name.substr(0, pos);
    param = name.substr(pos + 1);
  }
  std::string lb;
  for (char c : base) lb += static_cast<char>(std::tolower(c));
  if (lb == "fk4") return fk4();
  if (lb == "fk4!") return quadratic_dual(fk4());
  if (lb == "fk3") return fk3();
  if (lb == "kxy") return poly2();
  if (lb == "m1") return fk4_module_m1();
  if (lb == "m2") return fk4_module_m2();
  if (lb == "m3") return fk4_module_m3();
  if (lb == "m4") return fk4_module_m4();
  if (lb == "k" || lb == "trivial") {
    if (param.empty()) return trivial_module(fk4());
    auto base_v = catalog_lookup(param);
    if (!std::holds_alternative<Presentation>(base_v))
      throw std::invalid_argument("trivial module needs an algebra name");
    return trivial_module(std::get<Presentation>(base_v));
  }
  if (lb == "cassidy") {
    if (param.empty()) throw std::invalid_argument("Cassidy needs :m");
    int m = std::stoi(param);
    return cassidy(m);
  }
  if (lb == "connergoetz" || lb == "a") {
    if (param.empty()) throw std::invalid_argument("ConnerGoetz needs :g");
    return conner_goetz(parse_rational(param));
  }
  if (lb == "cgm1") {
    if (param.empty()) throw std::invalid_argument("CGM1 needs :g");
    return conner_goetz_module_m1(parse_rational(param));
  }
  throw std::invalid_argument("unknown built-in name: " + raw);
}

std::vector<CatalogExpectation> catalog_expectations() {
  return {
      {"FK4", 6, 17, {1, 6, 19, 42, 71, 96, 106, 96, 71, 42, 19, 6, 1}},
      {"FK3", 3, 5, {}},
      {"KXY", 2, 1, {}},
      {"M1", 2, 6, {2, 6, 11, 12, 11, 6, 2}},
      {"M2", 7, 24, {7, 18, 32, 42, 40, 30, 16, 6, 1}},
      {"M3", 8, 24, {8, 24, 48, 72, 80, 72, 48, 24, 8}},
      {"M4", 8, 30, {8, 18, 32, 42, 40, 30, 16, 6, 1}},
      {"Cassidy:5", 15, 19, {}},
      {"ConnerGoetz:1", 3, 3, {}},
  };
}

} // namespace qk
