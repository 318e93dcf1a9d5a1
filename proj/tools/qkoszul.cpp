// Command-line front end: Groebner bases, Hilbert series, Koszul homology
// tables, resolving quivers and assembled resolutions, verification suites.
#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <thread>

#include "qk/io.hpp"
#include "qk/verify.hpp"

using namespace qk;

namespace {

int default_trunc(int fallback) {
  if (const char* env = std::getenv("QA_TRUNC_DEFAULT")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  return fallback;
}

struct GbResult {
  ParsedPresentation pres;
  GroebnerBasis alg_gb;
  std::optional<ModuleGroebnerBasis> mod_gb;
};

GbResult build_gb(const std::string& arg,
                  const std::vector<std::string>& order_labels, int trunc) {
  GbResult out;
  out.pres = load_presentation(arg);
  if (!order_labels.empty()) out.pres.order_labels = order_labels;
  MonomialOrder order = out.pres.order();
  out.alg_gb =
      buchberger_two_sided(out.pres.algebra().relations, order, trunc);
  if (out.pres.is_module()) {
    const auto& mod = std::get<ModulePresentation>(out.pres.pres);
    out.mod_gb =
        module_groebner(out.alg_gb, mod.relations, mod.dim_vm(), trunc);
  }
  return out;
}

void print_table(const std::vector<std::vector<long>>& table,
                 const std::string& format) {
  if (format == "md")
    std::cout << table_markdown(table);
  else
    std::cout << table_csv(table);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Quadratic algebras: noncommutative Groebner bases, Koszul homology, "
      "resolving quivers and assembled projective resolutions"};
  app.require_subcommand(1);

  // ---- gb ----
  std::string gb_input;
  std::vector<std::string> gb_order;
  int gb_trunc = default_trunc(12);
  auto* gb_cmd =
      app.add_subcommand("gb", "Groebner basis of a presentation");
  gb_cmd->add_option("input", gb_input, "presentation file or @name")
      ->required();
  gb_cmd->add_option("--order", gb_order, "generator precedence (labels)");
  gb_cmd->add_option("--trunc", gb_trunc, "truncation degree");

  // ---- hilbert ----
  std::string hi_input;
  int hi_max = 12;
  int hi_trunc = default_trunc(15);
  auto* hi_cmd = app.add_subcommand("hilbert", "graded dimensions");
  hi_cmd->add_option("input", hi_input, "presentation file or @name")
      ->required();
  hi_cmd->add_option("--max", hi_max, "largest degree");
  hi_cmd->add_option("--trunc", hi_trunc, "truncation degree");

  // ---- homology ----
  std::string ho_alg, ho_module, ho_what = "H", ho_format = "csv";
  int ho_nmax = 5, ho_mmax = 12, ho_jobs = 0;
  int ho_dual_trunc = default_trunc(15);
  std::vector<int> ho_dump;
  std::string ho_dump_file;
  auto* ho_cmd =
      app.add_subcommand("homology", "Koszul complex dimension tables");
  ho_cmd->add_option("algebra", ho_alg, "algebra file or @name")->required();
  ho_cmd->add_option("--module", ho_module,
                     "module file or @name (default: trivial module)");
  ho_cmd->add_option("--nmax", ho_nmax, "largest homological degree");
  ho_cmd->add_option("--mmax", ho_mmax, "largest internal degree");
  ho_cmd->add_option("--what", ho_what, "B, D or H");
  ho_cmd->add_option("--format", ho_format, "csv or md");
  ho_cmd->add_option("--jobs", ho_jobs, "worker count (0 = all cores)");
  ho_cmd->add_option("--dump-layer", ho_dump,
                     "write one layer matrix (n m) in SMS form")
      ->expected(2);
  ho_cmd->add_option("--dump-file", ho_dump_file, "SMS output path");

  // ---- quiver ----
  std::string qv_datum, qv_dot;
  auto* qv_cmd =
      app.add_subcommand("quiver", "resolving quiver of a datum");
  qv_cmd->add_option("datum", qv_datum, "datum file or @name")->required();
  qv_cmd->add_option("--dot", qv_dot, "write DOT to this file");

  // ---- resolve ----
  std::string rs_datum;
  int rs_vertex = 0, rs_n = 4, rs_mmax = 10;
  bool rs_assemble = false;
  auto* rs_cmd = app.add_subcommand(
      "resolve", "resolution shape (and assembly) at a vertex");
  rs_cmd->add_option("datum", rs_datum, "datum file or @name")->required();
  rs_cmd->add_option("--vertex", rs_vertex, "vertex module index");
  rs_cmd->add_option("--n", rs_n, "homological degree");
  rs_cmd->add_option("--mmax", rs_mmax, "internal degree window");
  rs_cmd->add_flag("--assemble", rs_assemble,
                   "assemble the differentials and verify the window");

  // ---- verify ----
  std::string vf_suite;
  int vf_bound = 9, vf_nmax = 8;
  auto* vf_cmd = app.add_subcommand("verify", "verification suites");
  vf_cmd->add_option("suite", vf_suite,
                     "identities | stable-dims | fk4 | all")
      ->required();
  vf_cmd->add_option("--bound", vf_bound, "identity instantiation bound");
  vf_cmd->add_option("--nmax", vf_nmax, "stable-dims homological range");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gb_cmd) {
      GbResult r = build_gb(gb_input, gb_order, gb_trunc);
      const GeneratorSet& gens = r.pres.algebra().gens;
      int maxdeg = 0;
      for (const auto& lw : r.alg_gb.leads)
        maxdeg = std::max(maxdeg, lw.degree());
      for (const auto& e : r.alg_gb.elements)
        std::cout << e.str(gens) << "\n";
      if (r.mod_gb) {
        const auto& mod = std::get<ModulePresentation>(r.pres.pres);
        for (const auto& e : r.mod_gb->prefix)
          std::cout << e.str(gens, &mod.mgens) << "\n";
        int total = r.alg_gb.size() + static_cast<int>(r.mod_gb->prefix.size());
        std::cout << total << " elements ("
                  << r.alg_gb.size() << " two-sided, "
                  << r.mod_gb->prefix.size() << " prefix), "
                  << (r.mod_gb->complete ? "complete" : "truncated") << "\n";
      } else {
        std::cout << r.alg_gb.size() << " elements, ";
        if (r.alg_gb.complete)
          std::cout << "complete at degree " << maxdeg << "\n";
        else
          std::cout << "truncated at degree " << r.alg_gb.truncation_degree
                    << "\n";
      }
      return 0;
    }
    if (*hi_cmd) {
      GbResult r = build_gb(hi_input, {}, std::max(hi_trunc, hi_max));
      std::vector<long> h = r.mod_gb ? hilbert_series(*r.mod_gb, hi_max)
                                     : hilbert_series(r.alg_gb, hi_max);
      for (size_t i = 0; i < h.size(); ++i)
        std::cout << (i ? "," : "") << h[i];
      std::cout << "\n";
      return 0;
    }
    if (*ho_cmd) {
      ParsedPresentation ap = load_presentation(ho_alg);
      if (ap.is_module())
        throw std::invalid_argument("homology expects an algebra first");
      const Presentation& alg = std::get<Presentation>(ap.pres);
      ModulePresentation mod = trivial_module(alg);
      if (!ho_module.empty()) {
        ParsedPresentation mp = load_presentation(ho_module);
        if (!mp.is_module())
          throw std::invalid_argument("--module expects a module");
        mod = std::get<ModulePresentation>(mp.pres);
      }
      int alg_trunc = default_trunc(std::max(12, ho_mmax + 2));
      auto actx = std::make_shared<AlgebraCtx>(alg, ap.order(),
                                               std::max(alg_trunc, ho_mmax + 2));
      int dtr = std::max(ho_dual_trunc, ho_nmax + 2);
      auto dctx = std::make_shared<AlgebraCtx>(quadratic_dual(alg),
                                               ap.order(), dtr);
      KoszulCtx kc(actx, dctx, mod, dtr);
      if (!ho_dump.empty()) {
        KoszulLayer l = kc.layer(ho_dump[0], ho_dump[1]);
        std::ofstream out(ho_dump_file.empty() ? "layer.sms" : ho_dump_file);
        write_sms(out, l.mat);
        std::cerr << "wrote layer (" << ho_dump[0] << "," << ho_dump[1]
                  << ") as SMS\n";
        return 0;
      }
      int jobs = ho_jobs > 0
                     ? ho_jobs
                     : static_cast<int>(std::thread::hardware_concurrency());
      std::vector<std::vector<long>> table;
      if (ho_what == "H") {
        table = kc.homology_table(ho_nmax, ho_mmax, jobs);
      } else {
        table.assign(ho_nmax + 1, std::vector<long>(ho_mmax + 1, 0));
        for (int n = 0; n <= ho_nmax; ++n)
          for (int m = 0; m <= ho_mmax; ++m) {
            std::cerr << "layer (" << n << "," << m << ")\r";
            table[n][m] = ho_what == "B" ? kc.boundary_dim(n, m)
                                         : kc.cycle_dim(n, m);
          }
        std::cerr << "\n";
      }
      print_table(table, ho_format);
      return 0;
    }
    if (*qv_cmd) {
      ResolvingDatum d = load_datum(qv_datum);
      ResolvingQuiver q = build_quiver(d);
      std::vector<std::string> names;
      for (const auto& m : d.modules) names.push_back(m.name);
      std::string dot = quiver_dot(q, names);
      if (!qv_dot.empty()) {
        std::ofstream out(qv_dot);
        out << dot;
      } else {
        std::cout << dot;
      }
      std::cerr << q.arrows.size() << " arrows, "
                << (q.connected ? "connected" : "disconnected") << "\n";
      return 0;
    }
    if (*rs_cmd) {
      ResolvingDatum d = load_datum(rs_datum);
      ResolvingQuiver q = build_quiver(d);
      auto terms = resolution_shape(q, rs_vertex, rs_n);
      for (const auto& t : terms) {
        std::cout << "K_" << t.koszul_index << "(" << d.modules[t.module].name
                  << ")";
        if (t.shift) std::cout << "(-" << t.shift << ")";
        std::cout << "  [path d1=" << t.path.d1 << " d2=" << t.path.d2
                  << "]\n";
      }
      auto mv = check_minimality(q, rs_vertex, rs_n);
      std::cout << "minimality criterion at n<=" << rs_n << ": "
                << (mv.minimal ? "holds" : "fails") << "\n";
      if (rs_assemble) {
        ResolutionAssembler asmr(d, rs_n, rs_mmax);
        auto rep = asmr.verify(rs_vertex);
        std::cout << "d2=" << (rep.d2_zero ? "0" : "NONZERO")
                  << " window-exact=" << (rep.exact ? "yes" : "no")
                  << " shape=" << (rep.shape_match ? "match" : "MISMATCH")
                  << "\n";
        for (const auto& f : rep.failures) std::cout << "  " << f << "\n";
        if (!rep.d2_zero || !rep.exact || !rep.shape_match) return 1;
      }
      return 0;
    }
    if (*vf_cmd) {
      VerifyReport rep;
      if (vf_suite == "identities") {
        rep = verify_identities_suite(vf_bound);
      } else if (vf_suite == "stable-dims") {
        Fk4Stack stack = Fk4Stack::make();
        rep = verify_stable_dims(stack, vf_nmax);
      } else if (vf_suite == "fk4") {
        Fk4Stack stack = Fk4Stack::make();
        rep = verify_fk4_pipeline(stack);
      } else if (vf_suite == "all") {
        rep = verify_all(vf_bound, vf_nmax);
      } else {
        throw std::invalid_argument("unknown suite " + vf_suite);
      }
      std::cout << rep.render();
      std::cout << (rep.all_pass() ? "ALL PASS" : "FAILURES PRESENT")
                << "\n";
      return rep.all_pass() ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
