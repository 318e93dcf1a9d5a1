#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qk/catalog.hpp"
#include "qk/quadratic.hpp"

using namespace qk;

namespace {

NcPoly terms(std::initializer_list<std::pair<int, std::vector<int>>> ts) {
  NcPoly p;
  for (const auto& [c, ls] : ts) {
    std::vector<uint8_t> w(ls.begin(), ls.end());
    p.add_term(Word(std::move(w)), Rational(c));
  }
  return p;
}

NcPoly mterms(
    std::initializer_list<std::pair<int, std::pair<int, int>>> ts) {
  NcPoly p;
  for (const auto& [c, hw] : ts)
    p.add_term(Word(hw.first, {static_cast<uint8_t>(hw.second)}),
               Rational(c));
  return p;
}

// the 19 spanning elements of the FK(4) dual relation space
std::vector<NcPoly> fk4_dual_relations_expected() {
  return {
      terms({{1, {0, 2}}, {1, {2, 1}}}), terms({{1, {1, 2}}, {1, {2, 0}}}),
      terms({{1, {0, 2}}, {1, {1, 0}}}), terms({{1, {0, 1}}, {1, {2, 0}}}),
      terms({{1, {0, 4}}, {1, {4, 3}}}), terms({{1, {3, 4}}, {1, {4, 0}}}),
      terms({{1, {0, 4}}, {1, {3, 0}}}), terms({{1, {0, 3}}, {1, {4, 0}}}),
      terms({{1, {1, 5}}, {1, {5, 3}}}), terms({{1, {3, 5}}, {1, {5, 1}}}),
      terms({{1, {1, 5}}, {1, {3, 1}}}), terms({{1, {1, 3}}, {1, {5, 1}}}),
      terms({{1, {2, 5}}, {1, {5, 4}}}), terms({{1, {4, 5}}, {1, {5, 2}}}),
      terms({{1, {2, 5}}, {1, {4, 2}}}), terms({{1, {2, 4}}, {1, {5, 2}}}),
      terms({{1, {0, 5}}, {1, {5, 0}}}), terms({{1, {1, 4}}, {1, {4, 1}}}),
      terms({{1, {2, 3}}, {1, {3, 2}}}),
  };
}

// 6 spanning elements of the dual relation space of M1 (heads = dual gens)
std::vector<NcPoly> m1_dual_relations_expected() {
  return {
      mterms({{1, {0, 0}}, {-1, {1, 0}}}), mterms({{1, {1, 1}}}),
      mterms({{1, {0, 2}}}),               mterms({{1, {0, 3}}}),
      mterms({{1, {1, 4}}}),               mterms({{1, {0, 5}}, {-1, {1, 5}}}),
  };
}

// 18 spanning elements of the dual relation space of M2
std::vector<NcPoly> m2_dual_relations_expected() {
  return {
      mterms({{1, {0, 5}}, {-1, {1, 5}}}),
      mterms({{1, {2, 0}}, {-1, {3, 0}}}),
      mterms({{1, {4, 0}}, {-1, {5, 5}}}),
      mterms({{1, {4, 5}}, {1, {5, 0}}}),
      mterms({{1, {0, 5}}, {-1, {6, 0}}}),
      mterms({{1, {2, 0}}, {-1, {6, 5}}}),
      mterms({{1, {0, 4}}, {1, {2, 4}}}),
      mterms({{1, {1, 1}}, {1, {3, 1}}}),
      mterms({{1, {5, 1}}, {1, {6, 4}}}),
      mterms({{1, {5, 4}}, {-1, {6, 1}}}),
      mterms({{1, {0, 4}}, {1, {4, 1}}}),
      mterms({{1, {1, 1}}, {-1, {4, 4}}}),
      mterms({{1, {0, 3}}, {1, {3, 3}}}),
      mterms({{1, {1, 2}}, {1, {2, 2}}}),
      mterms({{1, {4, 2}}, {1, {6, 3}}}),
      mterms({{1, {4, 3}}, {-1, {6, 2}}}),
      mterms({{1, {0, 3}}, {-1, {5, 2}}}),
      mterms({{1, {1, 2}}, {1, {5, 3}}}),
  };
}

SparseMatrix stack_relations(const std::vector<NcPoly>& a,
                             const std::vector<NcPoly>& b, int d,
                             bool module_heads) {
  SparseMatrix m(static_cast<int>(a.size() + b.size()), 64 * d);
  int r = 0;
  auto put = [&](const std::vector<NcPoly>& rels) {
    for (const auto& rel : rels) {
      for (const auto& [w, c] : rel.terms()) {
        int col = module_heads ? w.head * d + w.letters[0]
                               : w.letters[0] * d + w.letters[1];
        m.add(r, col, c);
      }
      ++r;
    }
  };
  put(a);
  put(b);
  m.finalize();
  return m;
}

bool same_span(const std::vector<NcPoly>& a, const std::vector<NcPoly>& b,
               int d, bool module_heads) {
  if (a.size() != b.size()) return false;
  SparseMatrix joint = stack_relations(a, b, d, module_heads);
  SparseMatrix left = stack_relations(a, {}, d, module_heads);
  return rank_exact(joint) == rank_exact(left) &&
         rank_exact(left) == static_cast<int>(a.size());
}

} // namespace

TEST_CASE("FK(4) dual: 19 relations spanning the listed space") {
  Presentation dual = quadratic_dual(fk4());
  CHECK(dual.dim_v() == 6);
  CHECK(dual.dim_r() == 19);
  CHECK(dual.gens.label(0) == "y12");
  CHECK(same_span(dual.relations, fk4_dual_relations_expected(), 6, false));
}

TEST_CASE("k[x,y] dual is the exterior-algebra relation space") {
  Presentation dual = quadratic_dual(poly2());
  CHECK(dual.dim_r() == 3);
  std::vector<NcPoly> expect = {terms({{1, {0, 0}}}),
                                terms({{1, {1, 1}}}),
                                terms({{1, {0, 1}}, {1, {1, 0}}})};
  CHECK(same_span(dual.relations, expect, 2, false));
}

TEST_CASE("double dual returns the original relation span") {
  for (auto p : {fk4(), fk3(), poly2(), conner_goetz(Rational(2)),
                 cassidy(5)}) {
    Presentation dd = quadratic_dual(quadratic_dual(p));
    CHECK(same_span(dd.relations, p.relations, p.dim_v(), false));
  }
}

TEST_CASE("orthogonality: dim R + dim Rperp = d^2 and pairing vanishes") {
  for (auto p : {fk4(), fk3(), poly2(), conner_goetz(Rational(1)),
                 cassidy(6)}) {
    Presentation dual = quadratic_dual(p);
    int d = p.dim_v();
    CHECK(p.dim_r() + dual.dim_r() == d * d);
    for (const auto& alpha : dual.relations)
      for (const auto& r : p.relations) {
        Rational pairing(0);
        for (const auto& [w, c] : alpha.terms()) pairing += c * r.coeff(w);
        CHECK(pairing == 0);
      }
  }
}

TEST_CASE("module duals: M1, M2, trivial") {
  ModulePresentation d1 = module_quadratic_dual(fk4_module_m1());
  CHECK(d1.dim_rm() == 6);
  CHECK(same_span(d1.relations, m1_dual_relations_expected(), 6, true));

  ModulePresentation d2 = module_quadratic_dual(fk4_module_m2());
  CHECK(d2.dim_rm() == 7 * 6 - 24);
  CHECK(same_span(d2.relations, m2_dual_relations_expected(), 6, true));

  ModulePresentation dk = module_quadratic_dual(trivial_module(fk4()));
  CHECK(dk.dim_rm() == 0); // free rank-1 dual module: k^! = A^!

  for (auto m : {fk4_module_m1(), fk4_module_m2(), fk4_module_m3(),
                 fk4_module_m4()}) {
    ModulePresentation dm = module_quadratic_dual(m);
    CHECK(m.dim_rm() + dm.dim_rm() == m.dim_vm() * 6);
    // gamma_{2,M} vanishes on Rperp x R
    for (const auto& beta : dm.relations)
      for (const auto& r : m.relations) {
        Rational pairing(0);
        for (const auto& [w, c] : beta.terms()) pairing += c * r.coeff(w);
        CHECK(pairing == 0);
      }
    ModulePresentation ddm = module_quadratic_dual(dm);
    CHECK(ddm.dim_rm() == m.dim_rm());
    SparseMatrix joint = stack_relations(ddm.relations, m.relations, 6, true);
    CHECK(rank_exact(joint) == m.dim_rm());
  }
}

TEST_CASE("hom spaces") {
  ModulePresentation k = trivial_module(fk4());
  LinearMapBasis kk = hom_space(k, k);
  CHECK(kk.dim() == 1);

  ModulePresentation m1 = fk4_module_m1();
  LinearMapBasis h11 = hom_space(m1, m1);
  // contains the identity map
  bool has_identity = false;
  std::vector<std::vector<Rational>> id(
      2, std::vector<Rational>(2, Rational(0)));
  id[0][0] = id[1][1] = 1;
  // the hom space is a linear space; identity is present iff reducing it
  // against the basis leaves nothing
  SparseMatrix basis_mat(h11.dim() + 1, 4);
  for (int b = 0; b < h11.dim(); ++b)
    for (int t = 0; t < 2; ++t)
      for (int s = 0; s < 2; ++s)
        basis_mat.add(b, t * 2 + s, h11.maps[b][t][s]);
  basis_mat.add(h11.dim(), 0, Rational(1));
  basis_mat.add(h11.dim(), 3, Rational(1));
  basis_mat.finalize();
  SparseMatrix only_basis = basis_mat;
  only_basis.rows.pop_back();
  only_basis.nrows -= 1;
  has_identity = rank_exact(basis_mat) == rank_exact(only_basis);
  CHECK(has_identity);

  // M4 = M2 (+) k: hom(M4, M4) contains the two projections
  ModulePresentation m4 = fk4_module_m4();
  LinearMapBasis h44 = hom_space(m4, m4);
  CHECK(h44.dim() >= 2);
  // projection onto the c8-span (trivial part) must be a hom
  SparseMatrix stack(h44.dim() + 1, 64);
  for (int b = 0; b < h44.dim(); ++b)
    for (int t = 0; t < 8; ++t)
      for (int s = 0; s < 8; ++s) stack.add(b, t * 8 + s, h44.maps[b][t][s]);
  stack.add(h44.dim(), 7 * 8 + 7, Rational(1));
  stack.finalize();
  SparseMatrix base = stack;
  base.rows.pop_back();
  base.nrows -= 1;
  CHECK(rank_exact(stack) == rank_exact(base));

  CHECK_THROWS_AS(hom_space(m1, trivial_module(poly2())),
                  std::invalid_argument);
}

TEST_CASE("hom maps extended over standard words respect the action") {
  // extend f: M4 -> M2 over module standard words to degree 3 and check
  // f(m . x) = f(m) . x through normal forms
  ModulePresentation m4 = fk4_module_m4();
  ModulePresentation m2 = fk4_module_m2();
  LinearMapBasis homs = hom_space(m4, m2);
  REQUIRE(homs.dim() >= 1);
  MonomialOrder order = MonomialOrder::identity(6);
  GroebnerBasis gb = buchberger_two_sided(m4.algebra.relations, order, 8);
  ModuleGroebnerBasis gb4 = module_groebner(gb, m4.relations, 8, 8);
  ModuleGroebnerBasis gb2 = module_groebner(gb, m2.relations, 7, 8);
  const auto& f = homs.maps[0];
  auto apply_f = [&](const NcPoly& p) {
    NcPoly out;
    for (const auto& [w, c] : p.terms())
      for (int j = 0; j < 7; ++j) {
        if (f[j][w.head] == 0) continue;
        out.add_term(Word(j, w.letters), c * f[j][w.head]);
      }
    return normal_form(out, gb2);
  };
  for (int m = 0; m <= 2; ++m)
    for (const Word& w : standard_words(gb4, m))
      for (int s = 0; s < 6; ++s) {
        NcPoly mx = normal_form(
            NcPoly(w.concat(Word({static_cast<uint8_t>(s)}))), gb4);
        NcPoly lhs = apply_f(mx);
        NcPoly rhs = normal_form(
            multiply(apply_f(NcPoly(w)), Word({static_cast<uint8_t>(s)})),
            gb2);
        CHECK(lhs == rhs);
      }
}

TEST_CASE("presentation validation") {
  Presentation p = fk4();
  validate(p);
  Presentation bad = p;
  bad.relations.push_back(bad.relations[0] * Rational(2)); // dependent
  CHECK_THROWS_AS(validate(bad), std::invalid_argument);
  for (const auto& e : catalog_expectations()) {
    auto v = catalog_lookup(e.name);
    if (std::holds_alternative<Presentation>(v)) {
      const auto& pres = std::get<Presentation>(v);
      validate(pres);
      CHECK(pres.dim_v() == e.generators);
      CHECK(pres.dim_r() == e.relations);
    } else {
      const auto& mod = std::get<ModulePresentation>(v);
      validate(mod);
      CHECK(mod.dim_vm() == e.generators);
      CHECK(mod.dim_rm() == e.relations);
    }
  }
}
