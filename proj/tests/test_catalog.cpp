#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qk/catalog.hpp"
#include "qk/verify.hpp"

using namespace qk;

TEST_CASE("catalog entries match their expected metadata") {
  for (const auto& e : catalog_expectations()) {
    auto v = catalog_lookup(e.name);
    int gens = 0, rels = 0;
    if (std::holds_alternative<Presentation>(v)) {
      const auto& p = std::get<Presentation>(v);
      validate(p);
      gens = p.dim_v();
      rels = p.dim_r();
    } else {
      const auto& m = std::get<ModulePresentation>(v);
      validate(m);
      gens = m.dim_vm();
      rels = m.dim_rm();
      if (!e.dimension_vector.empty()) {
        MonomialOrder order = MonomialOrder::identity(m.algebra.dim_v());
        GroebnerBasis gb =
            buchberger_two_sided(m.algebra.relations, order, 12);
        ModuleGroebnerBasis mgb =
            module_groebner(gb, m.relations, m.dim_vm(), 12);
        auto h = hilbert_series(mgb, 11);
        while (!h.empty() && h.back() == 0) h.pop_back();
        CHECK(h == e.dimension_vector);
      }
    }
    CHECK(gens == e.generators);
    CHECK(rels == e.relations);
  }
  CHECK_THROWS_AS(catalog_lookup("@NoSuchThing"), std::invalid_argument);
  CHECK_THROWS_AS(catalog_lookup("@Cassidy:4"), std::invalid_argument);
  CHECK_THROWS_AS(catalog_lookup("@Cassidy"), std::invalid_argument);
}

TEST_CASE("parameterized entries") {
  for (int m : {5, 6, 8}) {
    Presentation c = cassidy(m);
    CHECK(c.dim_v() == 3 * m);
    CHECK(c.dim_r() == 3 * m + 4);
    validate(c);
  }
  Presentation a = conner_goetz(Rational(7) / 3);
  CHECK(a.dim_r() == 3);
  validate(a);
}

TEST_CASE("three-generator algebra series is reproduced by the pipeline") {
  GroebnerBasis gb = buchberger_two_sided(fk3().relations,
                                          MonomialOrder::identity(3), 10);
  CHECK(gb.complete);
  auto h = hilbert_series(gb, 6);
  CHECK(h == std::vector<long>{1, 3, 4, 3, 1, 0, 0});
}

TEST_CASE("dual module dimensions per degree") {
  Fk4Stack stack = Fk4Stack::make();
  // first module: 3(n+1) for n >= 1
  CHECK(stack.ctxs[1]->dual_dim(0) == 2);
  for (int n = 1; n <= 12; ++n)
    CHECK(stack.ctxs[1]->dual_dim(n) == 3 * (n + 1));
  // second module: 7, 24, 43, then 3n+45
  CHECK(stack.ctxs[2]->dual_dim(0) == 7);
  CHECK(stack.ctxs[2]->dual_dim(1) == 24);
  CHECK(stack.ctxs[2]->dual_dim(2) == 43);
  for (int n = 3; n <= 12; ++n)
    CHECK(stack.ctxs[2]->dual_dim(n) == 3 * n + 45);
  // third module: 8, 24, 40, then constant 48
  CHECK(stack.ctxs[3]->dual_dim(0) == 8);
  CHECK(stack.ctxs[3]->dual_dim(1) == 24);
  CHECK(stack.ctxs[3]->dual_dim(2) == 40);
  for (int n = 3; n <= 12; ++n) CHECK(stack.ctxs[3]->dual_dim(n) == 48);
  // the third module splits off four six-dimensional corner summands: its
  // dual dimensions are 24 from the four-generator block plus 4 x 6
  // (checked through the constant 48 above)
}

TEST_CASE("identity suite at a small bound") {
  VerifyReport rep = verify_identities_suite(6);
  for (const auto& l : rep.lines) {
    INFO(l.family << " " << l.instance);
    CHECK(l.pass);
  }
}

TEST_CASE("stable dimension formulas (windowed)") {
  Fk4Stack stack = Fk4Stack::make();
  VerifyReport rep = verify_stable_dims(stack, 6);
  int checked = 0;
  for (const auto& l : rep.lines) {
    INFO(l.family << " " << l.instance << " expected " << l.expected
                  << " got " << l.got);
    CHECK(l.pass);
    ++checked;
  }
  CHECK(checked > 300);
}

TEST_CASE("example cross-checks: quivers from the cited data") {
  // single arrows with the cited bidegrees
  ResolvingQuiver cas = build_quiver(cassidy_resolving_datum(7));
  REQUIRE(cas.arrows.size() == 1);
  CHECK(cas.arrows[0].d1 == 7);
  CHECK(cas.arrows[0].d2 == 8);
  ResolvingQuiver cg = build_quiver(conner_goetz_resolving_datum(Rational(2)));
  REQUIRE(cg.arrows.size() == 1);
  CHECK(cg.arrows[0].d1 == 3);
  CHECK(cg.arrows[0].d2 == 4);
}

TEST_CASE("homology pipeline on the three-parameter twisted algebra") {
  // The catalog presentation follows the printed three-relation form. Its
  // Koszul homology is concentrated in homological degree 2 (certified
  // below), so the example's decomposition against {k, v.A/(v.z)} leaves
  // the identification unresolved; the printed example data do not match
  // the printed presentation. The quiver built from the cited map is
  // checked in the cross-check case above.
  Rational g(2);
  Presentation pres = conner_goetz(g);
  auto a = std::make_shared<AlgebraCtx>(pres, MonomialOrder::identity(3), 10);
  KoszulCtx kc = KoszulCtx::make(a, trivial_module(pres), 10);
  for (int m = 0; m <= 6; ++m) CHECK(kc.homology_dim(1, m) == 0);
  CHECK(kc.homology_dim(2, 3) == 2);
  for (int m = 0; m <= 6; ++m) CHECK(kc.homology_dim(3, m) == 0);
  ModulePresentation m1 = conner_goetz_module_m1(g);
  ModuleGroebnerBasis mgb = module_groebner(a->gb(), m1.relations, 1, 10);
  auto dims = hilbert_series(mgb, 9);
  std::vector<CatalogModule> cat = {{"k", trivial_module(pres), {1}},
                                    {"M1", m1, dims, true}};
  IdentifyReport r = identify_homology(kc, 0, 2, cat, 8);
  CHECK_FALSE(r.resolved);
}

TEST_CASE("chi parity convention") {
  CHECK(chi(0) == 1);
  CHECK(chi(1) == 0);
  CHECK(chi(2) == 1);
  CHECK(chi(-1) == 0);
  CHECK(chi(-2) == 1);
}
