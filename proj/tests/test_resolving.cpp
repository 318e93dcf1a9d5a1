#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "qk/catalog.hpp"
#include "qk/verify.hpp"

using namespace qk;

namespace {

// brute-force path walker used as an independent oracle
void walk(const ResolvingQuiver& q, int at, int d1, int d2,
          std::vector<int>& arrows, int n_max,
          std::vector<std::vector<int>>& out) {
  out.push_back(arrows);
  for (size_t ai = 0; ai < q.arrows.size(); ++ai) {
    const Arrow& a = q.arrows[ai];
    if (a.source != at || d1 + a.d1 > n_max) continue;
    arrows.push_back(static_cast<int>(ai));
    walk(q, a.target, d1 + a.d1, d2 + a.d2, arrows, n_max, out);
    arrows.pop_back();
  }
}

} // namespace

TEST_CASE("quiver of the six-generator catalog datum: thirteen arrows") {
  ResolvingDatum d = fk4_resolving_datum();
  ResolvingQuiver q = build_quiver(d);
  CHECK(q.num_vertices == 4);
  CHECK(q.arrows.size() == 13);
  CHECK(q.connected);
  // vertex/arrow/bidegree multiset
  std::multiset<std::tuple<int, int, int, int, bool>> got, want;
  for (const auto& a : q.arrows)
    got.insert({a.source, a.target, a.d1, a.d2, a.kernel_part});
  std::vector<std::tuple<int, int, int, int, bool>> expect = {
      {0, 0, 4, 6, true},  {0, 0, 4, 8, false}, {0, 0, 6, 16, false},
      {0, 1, 5, 8, false}, {0, 2, 4, 6, true},  {1, 0, 2, 6, false},
      {1, 0, 2, 8, false}, {1, 2, 2, 4, true},  {2, 0, 2, 4, false},
      {2, 0, 2, 6, false}, {2, 1, 3, 6, false}, {2, 3, 4, 6, false},
      {3, 3, 4, 6, false}};
  for (auto& e : expect) want.insert(e);
  CHECK(got == want);
  // DOT export carries every arrow, dashes the kernel part and colors the
  // odd difference degrees
  std::string dot = quiver_dot(q, {"k", "M1", "M2", "M3"});
  CHECK(std::count(dot.begin(), dot.end(), '>') == 13);
  CHECK(dot.find("style=dashed") != std::string::npos);
  CHECK(dot.find("color=red") != std::string::npos);
}

TEST_CASE("small example quivers") {
  ResolvingQuiver fk3q = build_quiver(fk3_resolving_datum());
  REQUIRE(fk3q.arrows.size() == 1);
  CHECK(fk3q.arrows[0].d1 == 4);
  CHECK(fk3q.arrows[0].d2 == 6);
  CHECK(fk3q.connected);

  ResolvingQuiver empty = build_quiver(kxy_resolving_datum());
  CHECK(empty.arrows.empty());
  CHECK(empty.connected);

  ResolvingQuiver cas = build_quiver(cassidy_resolving_datum(5));
  REQUIRE(cas.arrows.size() == 1);
  CHECK(cas.arrows[0].d1 == 5);
  CHECK(cas.arrows[0].d2 == 6);

  ResolvingQuiver cg = build_quiver(conner_goetz_resolving_datum(Rational(1)));
  REQUIRE(cg.arrows.size() == 1);
  CHECK(cg.arrows[0].d1 == 3);
  CHECK(cg.arrows[0].d2 == 4);

  ResolvingDatum bad = fk3_resolving_datum();
  bad.hh.push_back({0, 0, 0, 2, 0, 1}); // k = 0 is out of range
  CHECK_THROWS_AS(build_quiver(bad), std::invalid_argument);
}

TEST_CASE("path enumeration matches the brute-force walker") {
  for (auto datum : {fk4_resolving_datum(), fk3_resolving_datum()}) {
    ResolvingQuiver q = build_quiver(datum);
    for (int vertex = 0; vertex < q.num_vertices; ++vertex) {
      for (int n_max : {4, 6}) {
        auto paths = enumerate_paths(q, vertex, n_max);
        std::vector<std::vector<int>> expect;
        std::vector<int> cur;
        walk(q, vertex, 0, 0, cur, n_max, expect);
        CHECK(paths.size() == expect.size());
        std::set<std::vector<int>> got_set, want_set;
        for (const auto& p : paths) got_set.insert(p.arrows);
        for (const auto& e : expect) want_set.insert(e);
        CHECK(got_set == want_set);
        // vertex path first, and the order refines the partial path order
        CHECK(paths[0].arrows.empty());
        for (size_t i = 0; i < paths.size(); ++i)
          for (size_t j = i + 1; j < paths.size(); ++j)
            CHECK(path_compare(q, paths[i], paths[j]) != -1);
      }
    }
  }
  // single-loop quiver at n_max = 12: powers of the loop
  ResolvingQuiver fk3q = build_quiver(fk3_resolving_datum());
  auto paths = enumerate_paths(fk3q, 0, 12);
  REQUIRE(paths.size() == 4);
  std::vector<int> d1s;
  for (const auto& p : paths) d1s.push_back(p.d1);
  CHECK(d1s == std::vector<int>{0, 4, 8, 12});
}

TEST_CASE("path order follows the vertex-maximality and prefix rules") {
  ResolvingQuiver q = build_quiver(fk4_resolving_datum());
  auto paths = enumerate_paths(q, 0, 8);
  const QuiverPath* vertex = &paths[0];
  for (const auto& p : paths)
    if (!p.arrows.empty()) {
      CHECK(path_compare(q, *vertex, p) == 1);
      CHECK(path_compare(q, p, *vertex) == -1);
    }
  // prefix < extension comparison: find a path of length two
  for (const auto& p : paths)
    if (p.length() == 2) {
      QuiverPath prefix;
      prefix.source = p.source;
      prefix.arrows = {p.arrows[0]};
      const Arrow& a = q.arrows[p.arrows[0]];
      prefix.d1 = a.d1;
      prefix.d2 = a.d2;
      CHECK(path_compare(q, p, prefix) == -1);
      break;
    }
  // arrows of equal first component: cokernel part below kernel part
  QuiverPath loop46, loop48;
  for (size_t ai = 0; ai < q.arrows.size(); ++ai) {
    const Arrow& a = q.arrows[ai];
    if (a.source == 0 && a.target == 0 && a.d1 == 4) {
      QuiverPath p;
      p.source = 0;
      p.arrows = {static_cast<int>(ai)};
      p.d1 = a.d1;
      p.d2 = a.d2;
      (a.kernel_part ? loop46 : loop48) = p;
    }
  }
  CHECK(path_compare(q, loop48, loop46) == -1); // cokernel < kernel
  // different first components compare by the smaller one
  QuiverPath arrow58;
  for (size_t ai = 0; ai < q.arrows.size(); ++ai)
    if (q.arrows[ai].source == 0 && q.arrows[ai].d1 == 5) {
      arrow58.source = 0;
      arrow58.arrows = {static_cast<int>(ai)};
      arrow58.d1 = 5;
      arrow58.d2 = 8;
    }
  CHECK(path_compare(q, loop46, arrow58) == -1);
}

TEST_CASE("resolution shape") {
  ResolvingQuiver fk3q = build_quiver(fk3_resolving_datum());
  auto terms = resolution_shape(fk3q, 0, 4);
  REQUIRE(terms.size() == 2);
  CHECK(terms[0].koszul_index == 4);
  CHECK(terms[0].shift == 0);
  CHECK(terms[1].koszul_index == 0);
  CHECK(terms[1].shift == 6);

  ResolvingQuiver q4 = build_quiver(fk4_resolving_datum());
  auto t4 = resolution_shape(q4, 0, 4);
  REQUIRE(t4.size() == 4);
  std::multiset<std::tuple<int, int, int>> got;
  for (const auto& t : t4) got.insert({t.module, t.koszul_index, t.shift});
  std::multiset<std::tuple<int, int, int>> want = {
      {0, 4, 0}, {0, 0, 6}, {0, 0, 8}, {2, 0, 6}};
  CHECK(got == want);
  // below every arrow threshold only the vertex term survives
  auto t2 = resolution_shape(q4, 0, 2);
  REQUIRE(t2.size() == 1);
  CHECK(t2[0].koszul_index == 2);
}

TEST_CASE("minimality criterion") {
  ResolvingQuiver fk3q = build_quiver(fk3_resolving_datum());
  CHECK(check_minimality(fk3q, 0, 12).minimal);
  ResolvingQuiver cas = build_quiver(cassidy_resolving_datum(5));
  CHECK(check_minimality(cas, 0, 10).minimal);
  CHECK(check_minimality(cas, 1, 10).minimal);
  // the six-generator datum carries odd difference degrees; the verdict is
  // computed, and any failure witness must be a genuinely ordered pair
  ResolvingQuiver q4 = build_quiver(fk4_resolving_datum());
  auto v = check_minimality(q4, 0, 8);
  CHECK_FALSE(v.minimal);
  CHECK(path_compare(q4, v.witness_a, v.witness_b) == -1);
  CHECK(v.witness_a.ddeg() == v.witness_b.ddeg() - 1);
}

TEST_CASE("enumerate_paths rejects nonpositive homological shifts") {
  ResolvingQuiver q;
  q.num_vertices = 1;
  q.arrows.push_back({0, 0, 0, 3, false, 0});
  CHECK_THROWS_AS(enumerate_paths(q, 0, 5), std::invalid_argument);
}

TEST_CASE("assembled resolutions: polynomial algebra and the three-generator"
          " catalog algebra") {
  // Koszul case: the assembly is exactly the Koszul complex
  {
    ResolutionAssembler asmr(kxy_resolving_datum(), 6, 10);
    auto rep = asmr.verify(0);
    CHECK(rep.d2_zero);
    CHECK(rep.exact);
    CHECK(rep.shape_match);
    AssembledResolution r = asmr.resolution(0);
    for (int n = 0; n <= 6; ++n) {
      REQUIRE(r.terms[n].size() == 1);
      CHECK(r.terms[n][0] == ChainSummand{0, n, 0});
    }
  }
  {
    // one degree beyond the acceptance window: exact at degrees 1..5
    ResolutionAssembler asmr(fk3_resolving_datum(), 7, 10);
    auto rep = asmr.verify(0);
    CHECK(rep.d2_zero);
    CHECK(rep.exact);
    CHECK(rep.shape_match);
    AssembledResolution r = asmr.resolution(0);
    // the first two degrees coincide with the Koszul complex
    CHECK(r.terms[0] == std::vector<ChainSummand>{{0, 0, 0}});
    CHECK(r.terms[1] == std::vector<ChainSummand>{{0, 1, 0}});
    // degree four picks up the loop contribution
    std::multiset<std::tuple<int, int, int>> got;
    for (const auto& s : r.terms[4]) got.insert({s.module, s.k, s.shift});
    CHECK(got == std::multiset<std::tuple<int, int, int>>{{0, 4, 0},
                                                          {0, 0, 6}});
  }
}

TEST_CASE("assembled resolution of the full catalog datum (window)") {
  // the deepest case: a genuine horseshoe with kernel and cokernel parts
  ResolutionAssembler asmr(fk4_resolving_datum(), 4, 8);
  auto rep = asmr.verify(0);
  CHECK(rep.d2_zero);
  CHECK(rep.exact);
  CHECK(rep.shape_match);
  for (const auto& fmsg : rep.failures) {
    INFO(fmsg);
    CHECK(false);
  }
  AssembledResolution r = asmr.resolution(0);
  CHECK(r.terms[0] == std::vector<ChainSummand>{{0, 0, 0}});
  CHECK(r.terms[1] == std::vector<ChainSummand>{{0, 1, 0}});
  std::multiset<std::tuple<int, int, int>> got;
  for (const auto& s : r.terms[4]) got.insert({s.module, s.k, s.shift});
  std::multiset<std::tuple<int, int, int>> want = {
      {0, 4, 0}, {0, 0, 6}, {0, 0, 8}, {2, 0, 6}};
  CHECK(got == want);
}

TEST_CASE("parallel homology table agrees with the sequential one") {
  Presentation a = fk3();
  auto actx = std::make_shared<AlgebraCtx>(a, MonomialOrder::identity(3), 10);
  KoszulCtx k1 = KoszulCtx::make(actx, trivial_module(a), 10);
  KoszulCtx k2 = KoszulCtx::make(actx, trivial_module(a), 10);
  CHECK(k1.homology_table(5, 8) == k2.homology_table(5, 8, 3));
}

TEST_CASE("koszulness predicate through the quiver" ) {
  // no arrows <=> vanishing positive homology of the trivial module
  struct Case {
    ResolvingDatum d;
    bool koszul;
  };
  std::vector<Case> cases;
  cases.push_back({kxy_resolving_datum(), true});
  cases.push_back({fk3_resolving_datum(), false});
  for (auto& c : cases) {
    ResolvingQuiver q = build_quiver(c.d);
    CHECK(q.arrows.empty() == c.koszul);
    const Presentation& a = c.d.modules[0].pres.algebra;
    auto actx = std::make_shared<AlgebraCtx>(
        a, MonomialOrder::identity(a.dim_v()), 10);
    KoszulCtx kc = KoszulCtx::make(actx, c.d.modules[0].pres, 10);
    bool vanishing = true;
    for (int n = 1; n <= 5; ++n)
      for (int m = 0; m <= 8; ++m)
        if (kc.homology_dim(n, m) != 0) vanishing = false;
    CHECK(vanishing == c.koszul);
  }
}

TEST_CASE("almost-koszul quiver shape predicate") {
  // predicate side on a manufactured single-vertex quiver with
  // dim(A_p) * dim(A!_q) arrows of bidegree (q+1, q+p)
  auto shape_holds = [](const ResolvingQuiver& q, long dim_ap, long dim_aq,
                        int p, int qq) {
    if (q.num_vertices != 1) return false;
    long count = 0;
    for (const auto& a : q.arrows) {
      if (a.d1 != qq + 1 || a.d2 != qq + p) return false;
      ++count;
    }
    return count == dim_ap * dim_aq;
  };
  ResolvingQuiver manufactured;
  manufactured.num_vertices = 1;
  for (int t = 0; t < 6; ++t)
    manufactured.arrows.push_back({0, 0, 4, 5, false, t});
  CHECK(shape_holds(manufactured, 2, 3, 2, 3));
  CHECK_FALSE(shape_holds(manufactured, 2, 3, 2, 4));
  // no catalog algebra satisfies the finiteness premises (finite dimension
  // with a finite-length dual), so the equivalence is vacuous there; check
  // the premise failure explicitly for the six-generator algebra: its dual
  // grows forever, so no finite Koszul-complex length exists
  Presentation dual = quadratic_dual(fk4());
  GroebnerBasis gb = buchberger_two_sided(dual.relations,
                                          MonomialOrder::identity(6), 14);
  CHECK(standard_words(gb, 13).size() > 0);
}

TEST_CASE("datum consistency gates the assembler") {
  ResolvingDatum wrong = fk3_resolving_datum();
  wrong.hh[0].ell = 7; // wrong internal shift
  CHECK_THROWS_AS(ResolutionAssembler(wrong, 5, 9), AssemblyError);
}
