#include "qk/quadratic.hpp"

namespace qk {

void validate(const Presentation& p) {
  int d = p.dim_v();
  if (d < 1) throw std::invalid_argument("presentation needs generators");
  if (p.dim_r() > d * d)
    throw std::invalid_argument("more relations than dim V^2");
  for (const auto& r : p.relations) {
    if (r.is_zero() || r.is_module())
      throw std::invalid_argument("invalid algebra relation");
    if (*r.homogeneous_degree() != 2)
      throw std::invalid_argument("algebra relation of degree != 2");
    for (const auto& [w, c] : r.terms())
      for (uint8_t l : w.letters)
        if (l >= d) throw std::invalid_argument("letter out of range");
  }
  if (rank_exact(relation_matrix(p)) != p.dim_r())
    throw std::invalid_argument("dependent relation list");
}

void validate(const ModulePresentation& m) {
  validate(m.algebra);
  int d = m.algebra.dim_v();
  int k = m.dim_vm();
  if (k < 1) throw std::invalid_argument("module needs generators");
  if (m.dim_rm() > k * d)
    throw std::invalid_argument("more relations than dim V_M (x) V");
  for (const auto& r : m.relations) {
    if (r.is_zero() || !r.is_module())
      throw std::invalid_argument("invalid module relation");
    if (*r.homogeneous_degree() != 1)
      throw std::invalid_argument("module relation of algebra degree != 1");
    for (const auto& [w, c] : r.terms())
      if (w.head < 0 || w.head >= k)
        throw std::invalid_argument("module head out of range");
  }
  if (rank_exact(relation_matrix(m)) != m.dim_rm())
    throw std::invalid_argument("dependent module relation list");
}

SparseMatrix relation_matrix(const Presentation& p) {
  int d = p.dim_v();
  SparseMatrix m(p.dim_r(), d * d);
  for (int i = 0; i < p.dim_r(); ++i)
    for (const auto& [w, c] : p.relations[i].terms())
      m.add(i, w.letters[0] * d + w.letters[1], c);
  m.finalize();
  return m;
}

SparseMatrix relation_matrix(const ModulePresentation& mp) {
  int d = mp.algebra.dim_v();
  SparseMatrix m(mp.dim_rm(), mp.dim_vm() * d);
  for (int i = 0; i < mp.dim_rm(); ++i)
    for (const auto& [w, c] : mp.relations[i].terms())
      m.add(i, w.head * d + w.letters[0], c);
  m.finalize();
  return m;
}

std::string dual_label(const std::string& label) {
  if (!label.empty() && label[0] == 'x') return "y" + label.substr(1);
  return label + "'";
}

Presentation quadratic_dual(const Presentation& p) {
  validate(p);
  int d = p.dim_v();
  Subspace perp = nullspace(relation_matrix(p));
  Presentation dual;
  std::vector<std::string> labels;
  for (const auto& n : p.gens.names) labels.push_back(dual_label(n));
  dual.gens = GeneratorSet(labels);
  for (const auto& v : perp.basis) {
    NcPoly rel;
    for (const auto& [idx, c] : v.ent) {
      Word w(std::vector<uint8_t>{static_cast<uint8_t>(idx / d),
                                  static_cast<uint8_t>(idx % d)});
      rel.add_term(w, c);
    }
    dual.relations.push_back(std::move(rel));
  }
  return dual;
}

ModulePresentation module_quadratic_dual(const ModulePresentation& m) {
  validate(m);
  int d = m.algebra.dim_v();
  Subspace perp = nullspace(relation_matrix(m));
  ModulePresentation dual;
  dual.algebra = quadratic_dual(m.algebra);
  for (const auto& g : m.mgens) dual.mgens.push_back(dual_label(g));
  for (const auto& v : perp.basis) {
    NcPoly rel;
    for (const auto& [idx, c] : v.ent) {
      Word w(idx / d, std::vector<uint8_t>{static_cast<uint8_t>(idx % d)});
      rel.add_term(w, c);
    }
    dual.relations.push_back(std::move(rel));
  }
  return dual;
}

LinearMapBasis hom_space(const ModulePresentation& m,
                         const ModulePresentation& n) {
  if (m.algebra.gens.names != n.algebra.gens.names)
    throw std::invalid_argument("hom_space: algebra mismatch");
  int d = m.algebra.dim_v();
  int km = m.dim_vm(), kn = n.dim_vm();
  Subspace rn = row_space(relation_matrix(n));
  // unknowns g[t][s] (t in V_N, s in V_M), flattened t*km + s; for each
  // relation r of M the image sum_{s,l} r[s][l] g[.][s] (x) x_l must reduce
  // to zero against RREF(R_N)
  std::vector<SparseVec> eq_rows; // equations over the kn*km unknowns
  for (const auto& rel : m.relations) {
    // image coefficient at tensor slot (t, l) is sum_s r[s][l] g[t][s];
    // reduce the symbolic vector against rn: treat each unknown separately
    // by linearity — build for each unknown (t, s) the reduced image of the
    // elementary map and collect rows of the combined constraint matrix.
    // Cheaper equivalent: for fixed rel, the constraint is that the vector
    // v(g) with v[t*d + l] = sum_s rel[s][l] g[t][s] reduces to 0 mod R_N.
    // The reduction is linear, so compute reduce(elementary slot) once.
    // Assemble rows indexed by ambient coordinates of the residual space.
    std::map<int, SparseVec> residual_rows; // ambient coord -> equation row
    for (int t = 0; t < kn; ++t) {
      for (int s = 0; s < km; ++s) {
        SparseVec img;
        for (const auto& [w, c] : rel.terms())
          if (w.head == s) img.push(t * d + w.letters[0], c);
        img.sort_and_combine();
        if (img.empty()) continue;
        SparseVec res = rn.reduce(std::move(img));
        for (const auto& [coord, val] : res.ent)
          residual_rows[coord].push(t * km + s, val);
      }
    }
    for (auto& [coord, row] : residual_rows) {
      row.sort_and_combine();
      eq_rows.push_back(std::move(row));
    }
  }
  SparseMatrix eqs(static_cast<int>(eq_rows.size()), kn * km);
  for (size_t i = 0; i < eq_rows.size(); ++i)
    eqs.rows[i] = std::move(eq_rows[i]);
  Subspace sol = nullspace(eqs);
  LinearMapBasis basis;
  basis.dim_source = km;
  basis.dim_target = kn;
  for (const auto& v : sol.basis) {
    std::vector<std::vector<Rational>> g(
        kn, std::vector<Rational>(km, Rational(0)));
    for (const auto& [idx, c] : v.ent) g[idx / km][idx % km] = c;
    basis.maps.push_back(std::move(g));
  }
  return basis;
}

ModulePresentation trivial_module(const Presentation& p) {
  ModulePresentation t;
  t.algebra = p;
  t.mgens = {"e"};
  for (int s = 0; s < p.dim_v(); ++s) {
    NcPoly rel;
    rel.add_term(Word(0, {static_cast<uint8_t>(s)}), Rational(1));
    t.relations.push_back(std::move(rel));
  }
  return t;
}

} // namespace qk
