#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qk/catalog.hpp"
#include "qk/io.hpp"

using namespace qk;

TEST_CASE("presentation round trips") {
  for (const char* name : {"@FK4", "@FK3", "@KXY", "@M1", "@M2", "@M3",
                           "@M4", "@Cassidy:5", "@ConnerGoetz:2/3"}) {
    ParsedPresentation p = load_presentation(name);
    std::string text = print_presentation(p);
    ParsedPresentation q = parse_presentation(text);
    CHECK(p.is_module() == q.is_module());
    CHECK(p.algebra().gens.names == q.algebra().gens.names);
    CHECK(p.algebra().relations == q.algebra().relations);
    if (p.is_module()) {
      const auto& pm = std::get<ModulePresentation>(p.pres);
      const auto& qm = std::get<ModulePresentation>(q.pres);
      CHECK(pm.mgens == qm.mgens);
      CHECK(pm.relations == qm.relations);
    }
  }
}

TEST_CASE("order field round trip") {
  ParsedPresentation p = load_presentation("@FK4");
  p.order_labels = {"x12", "x34", "x13", "x23", "x14", "x24"};
  ParsedPresentation q = parse_presentation(print_presentation(p));
  CHECK(q.order_labels == p.order_labels);
  MonomialOrder o = q.order();
  CHECK(o.rank[5] == 1); // the second-listed label is x34
}

TEST_CASE("parse errors carry line numbers") {
  std::string bad = "{\n  \"generators\": [\"x\"],\n  broken\n}";
  try {
    parse_presentation(bad);
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    std::string msg = e.what();
    CHECK(msg.find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(
      parse_presentation("{\"generators\": [\"x\"], \"relations\": "
                         "[[[\"1\", [\"y\", \"x\"]]]]}"),
      std::invalid_argument);
  CHECK_THROWS_AS(parse_presentation("{\"generators\": [\"x\", \"x\"]}"),
                  std::invalid_argument);
  // rationals accepted as p/q or integer strings
  ParsedPresentation ok = parse_presentation(
      "{\"generators\": [\"x\", \"y\"], \"relations\": "
      "[[[\"2/4\", [\"x\", \"y\"]], [\"-1/2\", [\"y\", \"x\"]]]]}");
  CHECK(std::get<Presentation>(ok.pres).relations[0].num_terms() == 2);
}

TEST_CASE("datum documents") {
  std::string text = R"({
    "modules": ["@trivial:FK4", "@M1", "@M2", "@M3"],
    "hh": [[0,2,3,6,1,0], [0,0,3,6,1,0], [1,2,1,4,1,0],
           [0,0,3,8,0,1], [0,1,4,8,0,1], [0,0,5,16,0,1],
           [1,0,1,6,0,1], [1,0,1,8,0,1], [2,0,1,4,0,1],
           [2,0,1,6,0,1], [2,1,2,6,0,1], [2,3,3,6,0,1], [3,3,3,6,0,1]]
  })";
  ResolvingDatum d = parse_datum(text);
  CHECK(d.modules.size() == 4);
  CHECK(d.hh.size() == 13);
  CHECK(d.modules[1].dimvec == std::vector<long>{2, 6, 11, 12, 11, 6, 2});
  CHECK_FALSE(d.modules[1].truncated);
  ResolvingQuiver q = build_quiver(d);
  CHECK(q.arrows.size() == 13);

  ResolvingDatum builtin = load_datum("@FK3");
  CHECK(builtin.modules.size() == 1);
  CHECK(builtin.hh.size() == 1);
  CHECK_THROWS_AS(load_datum("@NoSuch"), std::invalid_argument);
}
