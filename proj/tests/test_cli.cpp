#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#ifndef QK_CLI_PATH
#define QK_CLI_PATH "./qkoszul"
#endif

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(QK_CLI_PATH) + " " + args + " 2>/dev/null";
  RunResult r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
  r.status = pclose(p);
  return r;
}

} // namespace

TEST_CASE("gb subcommand") {
  RunResult r = run("gb @FK4 --trunc 12");
  CHECK(r.status == 0);
  CHECK(r.out.find("30 elements, complete at degree 6") != std::string::npos);
  RunResult dual = run("gb @FK4!");
  CHECK(dual.out.find("31 elements") != std::string::npos);
  RunResult bad = run("gb /nonexistent.qa");
  CHECK(bad.status != 0);
}

TEST_CASE("hilbert subcommand") {
  RunResult r = run("hilbert @FK4 --max 12");
  CHECK(r.status == 0);
  CHECK(r.out == "1,6,19,42,71,96,106,96,71,42,19,6,1\n");
  RunResult m3 = run("hilbert @M3 --max 8");
  CHECK(m3.out == "8,24,48,72,80,72,48,24,8\n");
  RunResult deg0 = run("hilbert @FK3 --max 0");
  CHECK(deg0.out == "1\n");
}

TEST_CASE("homology subcommand and byte stability") {
  RunResult a = run("homology @FK4 --nmax 5 --mmax 12 --what H");
  CHECK(a.status == 0);
  CHECK(a.out.find("3,0,0,0,8,18,33,42,40,30,16,6,1,0") != std::string::npos);
  RunResult b = run("homology @FK4 --nmax 5 --mmax 12 --what H");
  CHECK(a.out == b.out); // deterministic pipeline, byte-stable tables
  RunResult md =
      run("homology @FK4 --module @M2 --nmax 3 --mmax 12 --what H "
          "--format md");
  CHECK(md.out.find("| 3 | 0 | 0 | 0 | 8 | 24 | 48 | 72 | 80 | 72 | 48 | 24 "
                    "| 8 | 0 |") != std::string::npos);
}

TEST_CASE("quiver and resolve subcommands") {
  RunResult q = run("quiver @FK4");
  CHECK(q.status == 0);
  CHECK(std::count(q.out.begin(), q.out.end(), '>') == 13);
  RunResult r = run("resolve @FK3 --vertex 0 --n 4");
  CHECK(r.status == 0);
  CHECK(r.out.find("K_4(k)") != std::string::npos);
  CHECK(r.out.find("K_0(k)(-6)") != std::string::npos);
  RunResult asm1 = run("resolve @KXY --vertex 0 --n 5 --mmax 8 --assemble");
  CHECK(asm1.status == 0);
  CHECK(asm1.out.find("d2=0 window-exact=yes shape=match") !=
        std::string::npos);
}

TEST_CASE("verify subcommand") {
  RunResult r = run("verify identities --bound 4");
  CHECK(r.status == 0);
  CHECK(r.out.find("ALL PASS") != std::string::npos);
  CHECK(r.out.find("0-fail PASS") != std::string::npos);
  RunResult bad = run("verify nosuch");
  CHECK(bad.status != 0);
}

TEST_CASE("layer dump in triplet form") {
  RunResult r = run(
      "homology @FK4 --dump-layer 1 0 --dump-file /tmp/qk_layer.sms");
  CHECK(r.status == 0);
  std::ifstream in("/tmp/qk_layer.sms");
  std::string header;
  std::getline(in, header);
  CHECK(header == "6 6 M");
}
