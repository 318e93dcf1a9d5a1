#include "qk/resolving.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace qk {

ResolvingQuiver build_quiver(const ResolvingDatum& d) {
  int nv = static_cast<int>(d.modules.size());
  ResolvingQuiver q;
  q.num_vertices = nv;
  std::set<std::tuple<int, int, int, int>> seen;
  for (const auto& e : d.hh) {
    if (e.i < 0 || e.i >= nv || e.j < 0 || e.j >= nv)
      throw std::invalid_argument("hh entry with module index out of range");
    if (e.k < 1 || e.ell < 1)
      throw std::invalid_argument("hh entry with nonpositive (k, ell)");
    if (e.pi1 < 0 || e.pi2 < 0)
      throw std::invalid_argument("hh entry with negative multiplicity");
    if (!seen.insert({e.i, e.j, e.k, e.ell}).second)
      throw std::invalid_argument("duplicate hh support entry");
    for (int t = 0; t < e.pi1; ++t)
      q.arrows.push_back({e.i, e.j, e.k + 1, e.ell, true, t});
    for (int t = 0; t < e.pi2; ++t)
      q.arrows.push_back({e.i, e.j, e.k + 1, e.ell, false, t});
  }
  // deterministic global order: cokernel-part arrows come before kernel-part
  // arrows of equal source and first bidegree component, refining the
  // partial arrow order; ties broken by (target, d2, ordinal)
  std::sort(q.arrows.begin(), q.arrows.end(),
            [](const Arrow& a, const Arrow& b) {
              return std::tuple(a.source, a.d1, a.kernel_part, a.target, a.d2,
                                a.ordinal) <
                     std::tuple(b.source, b.d1, b.kernel_part, b.target, b.d2,
                                b.ordinal);
            });
  // connectivity of the underlying undirected graph
  std::vector<int> comp(nv, -1);
  std::vector<int> stack;
  if (nv > 0) {
    comp[0] = 0;
    stack.push_back(0);
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (const auto& a : q.arrows) {
        int o = -1;
        if (a.source == v) o = a.target;
        if (a.target == v) o = a.source;
        if (o >= 0 && comp[o] < 0) {
          comp[o] = 0;
          stack.push_back(o);
        }
      }
    }
  }
  q.connected = std::all_of(comp.begin(), comp.end(),
                            [](int c) { return c == 0; });
  return q;
}

int path_target(const ResolvingQuiver& q, const QuiverPath& p) {
  return p.arrows.empty() ? p.source : q.arrows[p.arrows.back()].target;
}

namespace {

// arrow order within same source and first bidegree component: cokernel
// part < kernel part; otherwise incomparable (0)
int arrow_compare(const Arrow& a, const Arrow& b) {
  if (a.kernel_part == b.kernel_part) return 0;
  return a.kernel_part ? 1 : -1;
}

} // namespace

int path_compare(const ResolvingQuiver& q, const QuiverPath& a,
                 const QuiverPath& b) {
  if (a.source != b.source)
    throw std::invalid_argument("comparing paths from different vertices");
  size_t j0 = 0;
  while (j0 < a.arrows.size() && j0 < b.arrows.size() &&
         a.arrows[j0] == b.arrows[j0])
    ++j0;
  if (j0 == a.arrows.size() && j0 == b.arrows.size()) return 0; // equal
  // the vertex path is greater than every other path
  if (a.arrows.empty()) return 1;
  if (b.arrows.empty()) return -1;
  if (j0 == b.arrows.size()) return -1; // b is a proper prefix of a: a < b
  if (j0 == a.arrows.size()) return 1;
  const Arrow& alpha = q.arrows[a.arrows[j0]];
  const Arrow& beta = q.arrows[b.arrows[j0]];
  if (alpha.d1 != beta.d1) return alpha.d1 < beta.d1 ? -1 : 1;
  return arrow_compare(alpha, beta);
}

std::vector<QuiverPath> enumerate_paths(const ResolvingQuiver& q, int vertex,
                                        int n_max) {
  for (const auto& a : q.arrows)
    if (a.d1 < 1)
      throw std::invalid_argument(
          "arrow with nonpositive homological shift (would not terminate)");
  if (vertex < 0 || vertex >= q.num_vertices)
    throw std::invalid_argument("vertex out of range");
  std::vector<QuiverPath> out;
  QuiverPath cur;
  cur.source = vertex;
  std::function<void(int)> dfs = [&](int at) {
    out.push_back(cur);
    for (size_t ai = 0; ai < q.arrows.size(); ++ai) {
      const Arrow& a = q.arrows[ai];
      if (a.source != at || cur.d1 + a.d1 > n_max) continue;
      cur.arrows.push_back(static_cast<int>(ai));
      cur.d1 += a.d1;
      cur.d2 += a.d2;
      dfs(a.target);
      cur.d1 -= a.d1;
      cur.d2 -= a.d2;
      cur.arrows.pop_back();
    }
  };
  dfs(vertex);
  // total deterministic extension of the path order, vertex path first:
  // lexicographic on the global arrow ordering (which refines the partial
  // arrow order) with proper prefixes greater than their extensions
  std::sort(out.begin(), out.end(),
            [&](const QuiverPath& x, const QuiverPath& y) {
              size_t k = 0;
              while (k < x.arrows.size() && k < y.arrows.size() &&
                     x.arrows[k] == y.arrows[k])
                ++k;
              if (k == x.arrows.size() && k == y.arrows.size()) return false;
              if (k == x.arrows.size()) return true;  // x prefix: greater
              if (k == y.arrows.size()) return false; // y prefix of x
              // greater arrows (larger first component, kernel part) first
              return x.arrows[k] > y.arrows[k];
            });
  return out;
}

std::vector<ResolutionTerm> resolution_shape(const ResolvingQuiver& q,
                                             int vertex, int n) {
  std::vector<ResolutionTerm> out;
  for (const auto& p : enumerate_paths(q, vertex, n)) {
    ResolutionTerm t;
    t.path = p;
    t.module = path_target(q, p);
    t.koszul_index = n - p.d1;
    t.shift = p.d2;
    out.push_back(std::move(t));
  }
  return out;
}

std::vector<long> term_dims(const ResolutionTerm& t,
                            const std::vector<std::vector<long>>& dual_dims,
                            const std::vector<long>& algebra_dims,
                            int m_max) {
  std::vector<long> dims(m_max + 1, 0);
  long zdim = 0;
  if (t.koszul_index < static_cast<int>(dual_dims[t.module].size()))
    zdim = dual_dims[t.module][t.koszul_index];
  for (int m = 0; m <= m_max; ++m) {
    int a = m - t.shift - t.koszul_index;
    if (a < 0 || a >= static_cast<int>(algebra_dims.size())) continue;
    dims[m] = zdim * algebra_dims[a];
  }
  return dims;
}

MinimalityVerdict check_minimality(const ResolvingQuiver& q, int vertex,
                                   int n_max) {
  auto paths = enumerate_paths(q, vertex, n_max);
  for (const auto& a : paths)
    for (const auto& b : paths) {
      if (path_compare(q, a, b) != -1) continue; // want a < b
      if (a.ddeg() == b.ddeg() - 1) return {false, a, b};
    }
  return {true, {}, {}};
}

std::string quiver_dot(const ResolvingQuiver& q,
                       const std::vector<std::string>& names) {
  std::ostringstream os;
  os << "digraph resolving_quiver {\n";
  for (int v = 0; v < q.num_vertices; ++v) {
    std::string label =
        v < static_cast<int>(names.size()) ? names[v] : "M" + std::to_string(v);
    os << "  v" << v << " [label=\"" << label << "\"];\n";
  }
  for (const auto& a : q.arrows) {
    os << "  v" << a.source << " -> v" << a.target << " [label=\"(" << a.d1
       << "," << a.d2 << ")\"";
    if (a.kernel_part) os << ", style=dashed";
    if (a.ddeg() % 2 != 0) os << ", color=red";
    os << "];\n";
  }
  os << "}\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// assembly

void AMatrix::add(int r, int c, const NcPoly& p) {
  if (p.is_zero()) return;
  auto [it, fresh] = entries.emplace(std::make_pair(r, c), p);
  if (!fresh) {
    it->second += p;
    if (it->second.is_zero()) entries.erase(it);
  }
}

namespace {

/// Generator count of a summand list given a dual-dimension callback.
template <typename F>
int gens_of(const std::vector<ChainSummand>& ts, F&& dual_dim) {
  int c = 0;
  for (const auto& s : ts) c += dual_dim(s.module, s.k);
  return c;
}

} // namespace

ResolutionAssembler::ResolutionAssembler(const ResolvingDatum& d, int n_max,
                                         int m_max, int dual_trunc)
    : datum_(d), n_max_(n_max), m_max_(m_max) {
  if (d.modules.empty())
    throw std::invalid_argument("datum without modules");
  const Presentation& a = d.modules[0].pres.algebra;
  for (const auto& cm : d.modules)
    if (cm.pres.algebra.gens.names != a.gens.names)
      throw std::invalid_argument("datum modules over different algebras");
  int trunc = std::max(m_max_ + 2, 4);
  alg_ = std::make_shared<AlgebraCtx>(a, MonomialOrder::identity(a.dim_v()),
                                      trunc);
  int dtr = std::max(dual_trunc, n_max_ + 2);
  dual_alg_ = std::make_shared<AlgebraCtx>(
      quadratic_dual(a), MonomialOrder::identity(a.dim_v()), dtr);
  for (const auto& cm : d.modules)
    ctxs_.push_back(
        std::make_shared<KoszulCtx>(alg_, dual_alg_, cm.pres, dtr));
  // identification window: the full internal range when the algebra is
  // finite dimensional (complete basis with vanishing top), else the window
  int id_scan = m_max_ + 1;
  if (alg_->gb().complete) {
    int top = trunc;
    while (top > 0 && alg_->dim(top) == 0) --top;
    id_scan = std::max(id_scan, top + 1);
  }
  int nm = static_cast<int>(d.modules.size());
  top_degree_.assign(nm, 0);
  std::set<std::pair<int, int>> support_found;
  int deepest = 0;
  for (int i = 0; i < nm; ++i) {
    // the base of the recursion is the Koszul tail above the top nonzero
    // homology, so scan until the homology stays zero long enough for every
    // lift within the window
    int mi = 0;
    for (int k = 1; k <= mi + std::max(n_max_, 1); ++k) {
      bool nonzero = false;
      for (int m = 0; m <= id_scan && !nonzero; ++m)
        nonzero = ctxs_[i]->homology_dim(k, m) > 0;
      if (!nonzero) continue;
      mi = k;
      IdentifyReport rep =
          identify_homology(*ctxs_[i], i, k, datum_.modules, id_scan);
      if (!rep.resolved)
        throw AssemblyError("homology identification unresolved at (module " +
                            std::to_string(i) + ", k " + std::to_string(k) +
                            "): " + rep.note);
      for (const auto& e : rep.entries) {
        auto it = std::find_if(datum_.hh.begin(), datum_.hh.end(),
                               [&](const HhEntry& h) {
                                 return h.i == e.i && h.j == e.j &&
                                        h.k == e.k && h.ell == e.ell;
                               });
        if (it == datum_.hh.end() || it->pi1 != e.pi1 || it->pi2 != e.pi2)
          throw AssemblyError("identified homology disagrees with hh at (" +
                              std::to_string(e.i) + "," + std::to_string(e.j) +
                              "," + std::to_string(e.k) + "," +
                              std::to_string(e.ell) + ")");
        support_found.insert({e.i, e.k});
      }
      idmap_[{i, k}] = std::move(rep);
    }
    top_degree_[i] = mi;
    deepest = std::max(deepest, mi);
  }
  for (const auto& h : datum_.hh) {
    if (h.pi1 + h.pi2 == 0) continue;
    if (h.k > top_degree_[h.i] + n_max_) continue; // beyond the scan window
    if (!support_found.count({h.i, h.k}))
      throw AssemblyError("hh support not reproduced by identification");
  }
  build_all();
}

int ResolutionAssembler::num_module_gens(int module, int k) const {
  return ctxs_[module]->dual_dim(k);
}

std::vector<ChainSummand> ResolutionAssembler::shifted(
    const std::vector<ChainSummand>& ts, int extra_shift) const {
  std::vector<ChainSummand> out = ts;
  for (auto& t : out) t.shift += extra_shift;
  return out;
}

AMatrix ResolutionAssembler::koszul_diff(int module, int k,
                                         int /*shift*/) const {
  const KoszulCtx& kc = *ctxs_[module];
  AMatrix m;
  m.nrows = kc.dual_dim(k - 1);
  m.ncols = kc.dual_dim(k);
  int d = alg_->num_gens();
  for (int s = 0; s < d; ++s) {
    const auto& rm = kc.dual_rightmul(s, k - 1);
    NcPoly xs((Word({static_cast<uint8_t>(s)})));
    for (int ut = 0; ut < m.nrows; ++ut)
      for (const auto& [us, c] : rm[ut].ent) m.add(ut, us, c * xs);
  }
  return m;
}

std::vector<int> ResolutionAssembler::generator_degrees(
    const std::vector<ChainSummand>& ts) const {
  std::vector<int> degs;
  for (const auto& t : ts) {
    int g = num_module_gens(t.module, t.k);
    for (int i = 0; i < g; ++i) degs.push_back(t.k + t.shift);
  }
  return degs;
}

namespace {

std::vector<int> offsets_for(const std::vector<int>& degs, int t,
                             const AlgebraCtx& alg) {
  std::vector<int> off(degs.size() + 1, 0);
  for (size_t i = 0; i < degs.size(); ++i) {
    int a = t - degs[i];
    off[i + 1] = off[i] + (a >= 0 ? alg.dim(a) : 0);
  }
  return off;
}

} // namespace

SparseMatrix ResolutionAssembler::scalarize(
    const AMatrix& mat, const std::vector<ChainSummand>& tgt,
    const std::vector<ChainSummand>& src, int t) const {
  std::vector<int> tdeg = generator_degrees(tgt);
  std::vector<int> sdeg = generator_degrees(src);
  std::vector<int> toff = offsets_for(tdeg, t, *alg_);
  std::vector<int> soff = offsets_for(sdeg, t, *alg_);
  SparseMatrix out(toff.back(), soff.back());
  for (const auto& [rc, poly] : mat.entries) {
    int r = rc.first, c = rc.second;
    int adeg_s = t - sdeg[c];
    if (adeg_s < 0 || alg_->dim(adeg_s) == 0) continue;
    if (t - tdeg[r] < 0) continue;
    const auto& swords = alg_->words(adeg_s);
    for (size_t wi = 0; wi < swords.size(); ++wi) {
      NcPoly img = normal_form(multiply(poly, swords[wi]), alg_->gb());
      for (const auto& [w, cf] : img.terms()) {
        int tw = alg_->index_of(t - tdeg[r], w);
        out.add(toff[r] + tw, soff[c] + static_cast<int>(wi), cf);
      }
    }
  }
  out.finalize();
  return out;
}

SparseVec ResolutionAssembler::apply_scalar(
    const AMatrix& mat, const std::vector<ChainSummand>& tgt,
    const std::vector<ChainSummand>& src, int t, const SparseVec& v) const {
  std::vector<int> tdeg = generator_degrees(tgt);
  std::vector<int> sdeg = generator_degrees(src);
  std::vector<int> toff = offsets_for(tdeg, t, *alg_);
  std::vector<int> soff = offsets_for(sdeg, t, *alg_);
  std::map<int, NcPoly> srcpolys; // source generator -> algebra element
  for (const auto& [idx, cf] : v.ent) {
    int g = static_cast<int>(std::upper_bound(soff.begin(), soff.end(), idx) -
                             soff.begin()) -
            1;
    int wi = idx - soff[g];
    srcpolys[g] += cf * NcPoly(alg_->words(t - sdeg[g])[wi]);
  }
  SparseVec out;
  for (const auto& [rc, poly] : mat.entries) {
    auto it = srcpolys.find(rc.second);
    if (it == srcpolys.end()) continue;
    if (t - tdeg[rc.first] < 0) continue;
    NcPoly img = normal_form(multiply(poly, it->second), alg_->gb());
    for (const auto& [w, cf] : img.terms())
      out.push(toff[rc.first] + alg_->index_of(t - tdeg[rc.first], w), cf);
  }
  out.sort_and_combine();
  return out;
}

void ResolutionAssembler::build_all() {
  int nm = static_cast<int>(datum_.modules.size());
  rchain_.assign(nm, {});
  presolution_.assign(nm, {});

  struct QPart {
    int j;
    int ell;
    std::vector<SparseVec> classes;
    bool quotient_side;
  };
  struct QChain {
    int module = 0;
    int kprime = 0;
    std::vector<QPart> parts;
    int first_quotient = -1; // index of the first quotient-side part
    std::vector<std::vector<ChainSummand>> terms;
    std::vector<AMatrix> diff;
    AMatrix aug; // Q_0 -> K_{kprime}(module)
  };
  std::map<std::pair<int, int>, QChain> qchains;

  auto dual_dim_cb = [&](int module, int k) {
    return ctxs_[module]->dual_dim(k);
  };

  auto class_to_amat_col = [&](int module, int adim, const SparseVec& cls,
                               AMatrix& m, int col) {
    const KoszulCtx& kc = *ctxs_[module];
    if (cls.empty()) return;
    int aw = kc.alg().dim(adim);
    std::map<int, NcPoly> rows;
    for (const auto& [idx, cf] : cls.ent) {
      int u = idx / aw, w = idx % aw;
      rows[u] += cf * NcPoly(kc.alg().words(adim)[w]);
    }
    for (auto& [u, poly] : rows) m.add(u, col, poly);
  };

  // scalar coordinates -> one A-matrix column against a summand list
  auto scalar_to_amat_col = [&](const std::vector<ChainSummand>& tgt, int deg,
                                const SparseVec& sol, AMatrix& m, int col) {
    std::vector<int> tdeg = generator_degrees(tgt);
    std::vector<int> toff = offsets_for(tdeg, deg, *alg_);
    std::map<int, NcPoly> rows;
    for (const auto& [idx, cf] : sol.ent) {
      int g = static_cast<int>(
                  std::upper_bound(toff.begin(), toff.end(), idx) -
                  toff.begin()) -
              1;
      int wi = idx - toff[g];
      rows[g] += cf * NcPoly(alg_->words(deg - tdeg[g])[wi]);
    }
    for (auto& [g, poly] : rows) m.add(g, col, poly);
  };

  // batched lift: find u in chain.terms[t] with d(u) = rhs, where d is
  // chain.diff[t-1] for t >= 1 and the Koszul augmentation for t == 0
  auto lift_through = [&](const Chain& chain, int t,
                          const std::vector<std::pair<int, SparseVec>>& rhs,
                          std::vector<SparseVec>& sols, const char* what) {
    std::map<int, std::vector<int>> by_deg;
    for (size_t q = 0; q < rhs.size(); ++q)
      by_deg[rhs[q].first].push_back(static_cast<int>(q));
    sols.assign(rhs.size(), {});
    for (const auto& [deg, qs] : by_deg) {
      SparseMatrix mat;
      if (t == 0) {
        AMatrix dmat = koszul_diff(chain.module, chain.bottom_k, 0);
        std::vector<ChainSummand> amb = {{chain.module, chain.bottom_k - 1,
                                          0}};
        mat = scalarize(dmat, amb, chain.terms[0], deg);
      } else {
        mat = scalarize(chain.diff[t - 1], chain.terms[t - 1], chain.terms[t],
                        deg);
      }
      std::vector<SparseVec> cols;
      for (int q : qs) cols.push_back(rhs[q].second);
      auto sol = solve_many(mat, cols);
      if (!sol)
        throw AssemblyError(std::string("lifting system unsolvable in ") +
                            what + " at internal degree " +
                            std::to_string(deg));
      for (size_t z = 0; z < qs.size(); ++z) sols[qs[z]] = (*sol)[z];
    }
  };

  // ---- initialize chains ----
  for (int i = 0; i < nm; ++i) {
    int mi = top_degree_[i];
    rchain_[i].resize(mi + 1);
    for (int k = 0; k <= mi; ++k) {
      Chain& ch = rchain_[i][k];
      ch.module = i;
      ch.bottom_k = mi - k + 1;
      ch.terms.push_back({{i, ch.bottom_k, 0}});
    }
    Chain& p = presolution_[i];
    p.module = i;
    p.bottom_k = 0;
    p.terms.push_back({{i, 0, 0}});
    for (int k = 1; k <= mi; ++k) {
      auto idit = idmap_.find({i, k});
      if (idit == idmap_.end()) continue;
      const IdentifyReport& rep = idit->second;
      if (rep.m0 < 0) continue;
      QChain qc;
      qc.module = i;
      qc.kprime = k;
      for (const auto& part : rep.sub_parts)
        qc.parts.push_back({part.j, k + rep.m0, part.matched, false});
      qc.first_quotient = static_cast<int>(qc.parts.size());
      for (const auto& [m1, reps] : rep.quotient_reps)
        for (const auto& r : reps) qc.parts.push_back({0, k + m1, {r}, true});
      qc.aug.nrows = ctxs_[i]->dual_dim(k);
      int col = 0;
      std::vector<ChainSummand> t0;
      for (const auto& part : qc.parts) {
        t0.push_back({part.j, 0, part.ell});
        for (const auto& cls : part.classes)
          class_to_amat_col(i, part.ell - k, cls, qc.aug, col++);
      }
      qc.aug.ncols = col;
      qc.terms.push_back(std::move(t0));
      qchains[{i, k}] = std::move(qc);
    }
  }

  // ---- staged extension ----
  for (int stage = 1; stage <= std::max(1, n_max_ - 1); ++stage) {
    // 1. extend Q chains to homological degree stage-1
    for (auto& [key, qc] : qchains) {
      int t = stage - 1;
      if (t == 0 || static_cast<int>(qc.terms.size()) > t) continue;
      const KoszulCtx& kc = *ctxs_[qc.module];
      std::vector<ChainSummand> ts;          // Q_t
      std::vector<int> tgt_off, src_off;      // generator offsets per part
      {
        int toffc = 0, soffc = 0;
        for (const auto& part : qc.parts) {
          tgt_off.push_back(toffc);
          src_off.push_back(soffc);
          toffc += gens_of(shifted(presolution_[part.j].terms[t - 1],
                                   part.ell),
                           dual_dim_cb);
          soffc += gens_of(shifted(presolution_[part.j].terms[t], part.ell),
                           dual_dim_cb);
        }
      }
      AMatrix dd;
      for (const auto& part : qc.parts)
        for (const auto& s : shifted(presolution_[part.j].terms[t], part.ell))
          ts.push_back(s);
      dd.nrows = gens_of(qc.terms[t - 1], dual_dim_cb);
      dd.ncols = gens_of(ts, dual_dim_cb);
      for (size_t pi = 0; pi < qc.parts.size(); ++pi) {
        const AMatrix& bd = presolution_[qc.parts[pi].j].diff[t - 1];
        for (const auto& [rc, poly] : bd.entries)
          dd.add(tgt_off[pi] + rc.first, src_off[pi] + rc.second, poly);
      }
      // horseshoe corrections: quotient-side columns into the kernel-side
      // block
      int fq = qc.first_quotient;
      if (fq > 0 && fq < static_cast<int>(qc.parts.size())) {
        std::vector<ChainSummand> ker_now, ker_prev;
        for (int pk = 0; pk < fq; ++pk) {
          for (const auto& s :
               shifted(presolution_[qc.parts[pk].j].terms[t - 1],
                       qc.parts[pk].ell))
            ker_now.push_back(s);
          if (t >= 2)
            for (const auto& s :
                 shifted(presolution_[qc.parts[pk].j].terms[t - 2],
                         qc.parts[pk].ell))
              ker_prev.push_back(s);
        }
        int kpg_prev = gens_of(ker_prev, dual_dim_cb);
        for (size_t pi = fq; pi < qc.parts.size(); ++pi) {
          const QPart& part = qc.parts[pi];
          const Chain& pj = presolution_[part.j];
          std::vector<ChainSummand> src_terms = shifted(pj.terms[t],
                                                        part.ell);
          std::vector<int> sdegs = generator_degrees(src_terms);
          std::vector<int> soff = offsets_for(sdegs, 0, *alg_);
          for (size_t g = 0; g < sdegs.size(); ++g) {
            if (sdegs[g] > m_max_) continue; // outside the window
            // unit vector at generator g, word 1, internal degree sdegs[g]
            std::vector<int> soff_g = offsets_for(sdegs, sdegs[g], *alg_);
            SparseVec unit;
            unit.push(soff_g[g], Rational(1));
            SparseVec dimg =
                apply_scalar(pj.diff[t - 1], shifted(pj.terms[t - 1],
                                                     part.ell),
                             src_terms, sdegs[g], unit);
            if (t == 1) {
              // epsilon'-equation: u in kernel degree-0 block with
              // class(u) = -sigma(d''_1 x) modulo boundaries
              SparseVec sig;
              {
                std::vector<ChainSummand> t0 = shifted(pj.terms[0], part.ell);
                std::vector<int> t0deg = generator_degrees(t0);
                std::vector<int> t0off =
                    offsets_for(t0deg, sdegs[g], *alg_);
                for (const auto& [idx, cf] : dimg.ent) {
                  int gg = static_cast<int>(std::upper_bound(t0off.begin(),
                                                             t0off.end(),
                                                             idx) -
                                            t0off.begin()) -
                           1;
                  int wi = idx - t0off[gg];
                  const Word& w = alg_->words(sdegs[g] - t0deg[gg])[wi];
                  SparseVec contrib = kc.act_word(
                      qc.kprime, part.ell - qc.kprime, part.classes[gg], w);
                  for (auto& [r2, v2] : contrib.ent) sig.push(r2, cf * v2);
                }
                sig.sort_and_combine();
              }
              int m_int = sdegs[g];
              const Subspace& bnd =
                  kc.boundaries(qc.kprime, m_int - qc.kprime);
              std::vector<SparseVec> cols;
              std::vector<std::tuple<int, int, int>> colinfo;
              for (int pk = 0; pk < fq; ++pk) {
                const QPart& kp = qc.parts[pk];
                int adeg = m_int - kp.ell;
                if (adeg < 0 || alg_->dim(adeg) == 0) continue;
                for (size_t cg = 0; cg < kp.classes.size(); ++cg)
                  for (int wi = 0; wi < alg_->dim(adeg); ++wi) {
                    cols.push_back(kc.act_word(qc.kprime,
                                               kp.ell - qc.kprime,
                                               kp.classes[cg],
                                               alg_->words(adeg)[wi]));
                    colinfo.emplace_back(pk, static_cast<int>(cg), wi);
                  }
              }
              int amb = kc.dim_k(qc.kprime, m_int - qc.kprime);
              SparseMatrix sys(amb,
                               static_cast<int>(cols.size()) + bnd.dim());
              for (size_t ci = 0; ci < cols.size(); ++ci)
                for (const auto& [r2, v2] : cols[ci].ent)
                  sys.add(r2, static_cast<int>(ci), v2);
              for (int bi = 0; bi < bnd.dim(); ++bi)
                for (const auto& [r2, v2] : bnd.basis[bi].ent)
                  sys.add(r2, static_cast<int>(cols.size()) + bi, v2);
              sys.finalize();
              std::vector<Rational> rhsv(amb, Rational(0));
              for (const auto& [r2, v2] : sig.ent) rhsv[r2] = -v2;
              auto sol = solve(sys, rhsv);
              if (!sol)
                throw AssemblyError(
                    "horseshoe augmentation lift unsolvable (Q chain)");
              std::map<std::pair<int, int>, NcPoly> contrib;
              for (size_t ci = 0; ci < cols.size(); ++ci) {
                if ((*sol)[ci] == 0) continue;
                auto [pk, cg, wi] = colinfo[ci];
                int adeg = m_int - qc.parts[pk].ell;
                contrib[{pk, cg}] += (*sol)[ci] *
                                     NcPoly(alg_->words(adeg)[wi]);
              }
              for (auto& [key2, poly] : contrib) {
                int pk = key2.first, cg = key2.second;
                // generator cg offset inside part pk's degree-0 block
                dd.add(tgt_off[pk] + cg,
                       src_off[pi] + static_cast<int>(g), poly);
              }
            } else {
              // t >= 2: d'(u) = -f_{t-1}(d''_t x) in the kernel-side block
              const AMatrix& prev = qc.diff[t - 2];
              AMatrix fview;
              fview.nrows = kpg_prev;
              int qcols = gens_of(shifted(pj.terms[t - 1], part.ell),
                                  dual_dim_cb);
              fview.ncols = qcols;
              for (const auto& [rc, poly] : prev.entries)
                if (rc.first < kpg_prev && rc.second >= tgt_off[pi] &&
                    rc.second < tgt_off[pi] + qcols)
                  fview.add(rc.first, rc.second - tgt_off[pi], poly);
              SparseVec val =
                  apply_scalar(fview, ker_prev,
                               shifted(pj.terms[t - 1], part.ell), sdegs[g],
                               dimg);
              for (auto& [r2, v2] : val.ent) v2 = -v2;
              // kernel-side differential: block diagonal of the P diffs
              AMatrix kdiff;
              kdiff.nrows = kpg_prev;
              kdiff.ncols = gens_of(ker_now, dual_dim_cb);
              {
                int ko = 0, ko2 = 0;
                for (int pk = 0; pk < fq; ++pk) {
                  const Chain& pk_ch = presolution_[qc.parts[pk].j];
                  const AMatrix& bd = pk_ch.diff[t - 2];
                  for (const auto& [rc, poly] : bd.entries)
                    kdiff.add(ko + rc.first, ko2 + rc.second, poly);
                  ko += gens_of(shifted(pk_ch.terms[t - 2],
                                        qc.parts[pk].ell),
                                dual_dim_cb);
                  ko2 += gens_of(shifted(pk_ch.terms[t - 1],
                                         qc.parts[pk].ell),
                                 dual_dim_cb);
                }
              }
              Chain pseudo;
              pseudo.module = qc.module;
              pseudo.bottom_k = 0;
              pseudo.terms.push_back(ker_prev);
              pseudo.terms.push_back(ker_now);
              pseudo.diff.push_back(kdiff);
              std::vector<SparseVec> sols;
              lift_through(pseudo, 1, {{sdegs[g], val}}, sols,
                           "Q-chain correction");
              scalar_to_amat_col(ker_now, sdegs[g], sols[0], dd,
                                 src_off[pi] + static_cast<int>(g));
            }
          }
        }
      }
      qc.terms.push_back(std::move(ts));
      qc.diff.push_back(std::move(dd));
    }

    // 2. extend R chains to degree `stage`, then P to degree `stage`
    for (int i = 0; i < nm; ++i) {
      int mi = top_degree_[i];
      for (int k = 0; k <= mi; ++k) {
        Chain& ch = rchain_[i][k];
        int t = stage;
        if (static_cast<int>(ch.terms.size()) > t) continue;
        if (k == 0) {
          ch.terms.push_back({{i, mi + 1 + t, 0}});
          ch.diff.push_back(koszul_diff(i, mi + 1 + t, 0));
          continue;
        }
        int kprime = mi - k + 1;
        const Chain& below = rchain_[i][k - 1];
        auto qit = qchains.find({i, kprime});
        std::vector<ChainSummand> ts = below.terms[t - 1];
        int below_gens = gens_of(below.terms[t - 1], dual_dim_cb);
        AMatrix dd;
        if (t == 1) {
          AMatrix kd = koszul_diff(i, below.bottom_k, 0);
          dd.nrows = kd.nrows;
          for (const auto& [rc, poly] : kd.entries)
            dd.add(rc.first, rc.second, poly);
          int off = below_gens;
          if (qit != qchains.end()) {
            for (const auto& [rc, poly] : qit->second.aug.entries)
              dd.add(rc.first, off + rc.second, poly);
            for (const auto& s : qit->second.terms[0]) ts.push_back(s);
            off += qit->second.aug.ncols;
          }
          dd.ncols = off;
        } else {
          const AMatrix& bd = below.diff[t - 2];
          int below_prev_gens = gens_of(below.terms[t - 2], dual_dim_cb);
          dd.nrows = below_prev_gens;
          for (const auto& [rc, poly] : bd.entries)
            dd.add(rc.first, rc.second, poly);
          if (qit != qchains.end()) {
            const QChain& qc = qit->second;
            dd.nrows += gens_of(qc.terms[t - 2], dual_dim_cb);
            for (const auto& s : qc.terms[t - 1]) ts.push_back(s);
            for (const auto& [rc, poly] : qc.diff[t - 2].entries)
              dd.add(below_prev_gens + rc.first, below_gens + rc.second,
                     poly);
            // connection f: Q_{t-1} -> below_{t-2}
            std::vector<int> sdegs = generator_degrees(qc.terms[t - 1]);
            std::vector<std::pair<int, SparseVec>> rhs;
            std::vector<int> live;
            for (size_t g = 0; g < sdegs.size(); ++g) {
              if (sdegs[g] > m_max_) continue;
              std::vector<int> soff_g = offsets_for(sdegs, sdegs[g], *alg_);
              SparseVec unit;
              unit.push(soff_g[g], Rational(1));
              SparseVec dimg = apply_scalar(qc.diff[t - 2], qc.terms[t - 2],
                                            qc.terms[t - 1], sdegs[g], unit);
              SparseVec val;
              if (t == 2) {
                val = apply_scalar(qc.aug, {{i, kprime, 0}}, qc.terms[0],
                                   sdegs[g], dimg);
              } else {
                const AMatrix& prev = ch.diff[t - 2];
                AMatrix fview;
                int rows3 = gens_of(below.terms[t - 3], dual_dim_cb);
                fview.nrows = rows3;
                int qcols = gens_of(qc.terms[t - 2], dual_dim_cb);
                fview.ncols = qcols;
                int bp = gens_of(below.terms[t - 2], dual_dim_cb);
                for (const auto& [rc, poly] : prev.entries)
                  if (rc.first < rows3 && rc.second >= bp)
                    fview.add(rc.first, rc.second - bp, poly);
                val = apply_scalar(fview, below.terms[t - 3],
                                   qc.terms[t - 2], sdegs[g], dimg);
              }
              for (auto& [r2, v2] : val.ent) v2 = -v2;
              live.push_back(static_cast<int>(g));
              rhs.emplace_back(sdegs[g], std::move(val));
            }
            std::vector<SparseVec> sols;
            lift_through(below, t - 2, rhs, sols,
                         ("R-chain correction (module " + std::to_string(i) +
                          ", k " + std::to_string(k) + ", t " +
                          std::to_string(t) + ")")
                             .c_str());
            for (size_t z = 0; z < live.size(); ++z)
              scalar_to_amat_col(below.terms[t - 2], rhs[z].first, sols[z],
                                 dd, below_gens + live[z]);
          }
          dd.ncols = gens_of(ts, dual_dim_cb);
        }
        ch.terms.push_back(std::move(ts));
        ch.diff.push_back(std::move(dd));
      }
      Chain& p = presolution_[i];
      int t = stage;
      if (static_cast<int>(p.terms.size()) > t) continue;
      if (mi == 0) {
        p.terms.push_back({{i, t, 0}});
        p.diff.push_back(koszul_diff(i, t, 0));
      } else {
        const Chain& top = rchain_[i][mi];
        p.terms.push_back(top.terms[t - 1]);
        if (t == 1)
          p.diff.push_back(koszul_diff(i, 1, 0));
        else
          p.diff.push_back(top.diff[t - 2]);
      }
    }
  }
  // final degree(s) up to n_max for every P
  for (int i = 0; i < nm; ++i) {
    Chain& p = presolution_[i];
    int mi = top_degree_[i];
    while (static_cast<int>(p.terms.size()) <= n_max_) {
      int t = static_cast<int>(p.terms.size());
      if (mi == 0) {
        p.terms.push_back({{i, t, 0}});
        p.diff.push_back(koszul_diff(i, t, 0));
      } else {
        const Chain& top = rchain_[i][mi];
        if (static_cast<int>(top.terms.size()) <= t - 1)
          throw AssemblyError("R chain shorter than required");
        p.terms.push_back(top.terms[t - 1]);
        if (t == 1)
          p.diff.push_back(koszul_diff(i, 1, 0));
        else
          p.diff.push_back(top.diff[t - 2]);
      }
    }
  }
}

AssembledResolution ResolutionAssembler::resolution(int vertex) const {
  if (vertex < 0 || vertex >= static_cast<int>(presolution_.size()))
    throw std::invalid_argument("vertex out of range");
  AssembledResolution r;
  r.vertex = vertex;
  r.n_max = n_max_;
  r.m_max = m_max_;
  r.terms = presolution_[vertex].terms;
  r.diff = presolution_[vertex].diff;
  return r;
}

namespace {

SparseMatrix exact_matmul(const SparseMatrix& a, const SparseMatrix& b) {
  SparseMatrix c(a.nrows, b.ncols);
  for (int r = 0; r < a.nrows; ++r) {
    std::map<int, Rational> acc;
    for (const auto& [k, av] : a.rows[r].ent)
      for (const auto& [j, bv] : b.rows[k].ent) acc[j] += av * bv;
    for (auto& [j, v] : acc)
      if (v != 0) c.rows[r].ent.emplace_back(j, std::move(v));
  }
  return c;
}

} // namespace

ResolutionAssembler::Report ResolutionAssembler::verify(int vertex) const {
  Report rep;
  const Chain& p = presolution_[vertex];
  // d^2 = 0, exactly, on every internal degree of the window
  for (size_t t = 2; t < p.terms.size(); ++t) {
    for (int m = 0; m <= m_max_; ++m) {
      SparseMatrix outer =
          scalarize(p.diff[t - 2], p.terms[t - 2], p.terms[t - 1], m);
      SparseMatrix inner =
          scalarize(p.diff[t - 1], p.terms[t - 1], p.terms[t], m);
      SparseMatrix sq = exact_matmul(outer, inner);
      if (sq.nnz() != 0) {
        rep.d2_zero = false;
        rep.failures.push_back("d^2 != 0 at (n=" + std::to_string(t) +
                               ", m=" + std::to_string(m) + ")");
      }
    }
  }
  // homology vanishing in the window
  for (int t = 1; t <= n_max_ - 2; ++t) {
    for (int m = 0; m <= m_max_ - 1; ++m) {
      SparseMatrix dt =
          scalarize(p.diff[t - 1], p.terms[t - 1], p.terms[t], m);
      SparseMatrix dt1 =
          scalarize(p.diff[t], p.terms[t], p.terms[t + 1], m);
      long dim = dt.ncols;
      long h = dim - rank(dt, 2, 0x7e57ab1eu + t * 131 + m) -
               rank(dt1, 2, 0x7e57ab1eu + t * 131 + m + 1);
      if (h != 0) {
        rep.exact = false;
        rep.failures.push_back("homology at (n=" + std::to_string(t) +
                               ", m=" + std::to_string(m) +
                               ") has dimension " + std::to_string(h));
      }
    }
  }
  // shape prediction from the quiver paths
  ResolvingQuiver q = build_quiver(datum_);
  std::vector<std::vector<long>> dual_dims;
  for (size_t i = 0; i < datum_.modules.size(); ++i) {
    std::vector<long> dd;
    for (int k = 0; k <= n_max_ + 1; ++k) dd.push_back(ctxs_[i]->dual_dim(k));
    dual_dims.push_back(std::move(dd));
  }
  std::vector<long> adims;
  for (int m = 0; m <= m_max_; ++m) adims.push_back(alg_->dim(m));
  for (int t = 0; t <= n_max_; ++t) {
    std::vector<long> pred(m_max_ + 1, 0);
    for (const auto& term : resolution_shape(q, vertex, t)) {
      auto td = term_dims(term, dual_dims, adims, m_max_);
      for (int m = 0; m <= m_max_; ++m) pred[m] += td[m];
    }
    std::vector<long> got(m_max_ + 1, 0);
    for (const auto& s : p.terms[t]) {
      long z = ctxs_[s.module]->dual_dim(s.k);
      for (int m = 0; m <= m_max_; ++m) {
        int a = m - s.shift - s.k;
        if (a >= 0 && a <= m_max_) got[m] += z * alg_->dim(a);
      }
    }
    if (pred != got) {
      rep.shape_match = false;
      rep.failures.push_back("shape mismatch at homological degree " +
                             std::to_string(t));
    }
  }
  return rep;
}

AssembledResolution assemble_resolution(const ResolvingDatum& d, int vertex,
                                        int n_max, int m_max) {
  ResolutionAssembler asmr(d, n_max, m_max);
  return asmr.resolution(vertex);
}

} // namespace qk
