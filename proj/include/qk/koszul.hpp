#pragma once

#include <map>
#include <memory>
#include <optional>

#include "qk/linalg.hpp"
#include "qk/quadratic.hpp"

namespace qk {

/// Cached graded data of a quadratic algebra: Groebner basis, standard-word
/// bases per degree, and one-letter multiplication structure constants.
class AlgebraCtx {
 public:
  AlgebraCtx(Presentation pres, MonomialOrder order, int trunc);

  const Presentation& pres() const { return pres_; }
  const GroebnerBasis& gb() const { return gb_; }
  int trunc() const { return gb_.truncation_degree; }
  int num_gens() const { return pres_.dim_v(); }

  int dim(int m) const;
  const std::vector<Word>& words(int m) const;
  int index_of(int m, const Word& w) const;

  /// NF(x_s * w) over words(m+1), indexed by the position of w in words(m).
  const std::vector<SparseVec>& leftmul(int s, int m) const;
  /// NF(w * x_s) over words(m+1).
  const std::vector<SparseVec>& rightmul(int s, int m) const;

 private:
  Presentation pres_;
  GroebnerBasis gb_;
  std::vector<std::vector<Word>> words_;
  std::vector<std::map<Word, int>> index_;
  std::vector<char> words_done_;
  mutable std::map<std::pair<int, int>, std::vector<SparseVec>> leftmul_;
  mutable std::map<std::pair<int, int>, std::vector<SparseVec>> rightmul_;
};

/// Matrix of d_{n,m}: K_{n,m} -> K_{n-1,m+1}; rows indexed by target pairs
/// (dual word, algebra word), columns by source pairs, dual-word major.
struct KoszulLayer {
  int n = 0;
  int m = 0;
  SparseMatrix mat;
};

/// Canonical homology representatives at one bidegree: vectors in the cycle
/// space spanning a complement of the boundary space.
struct HomologySlice {
  int n = 0;
  int m = 0;
  std::vector<SparseVec> reps;
  int dim() const { return static_cast<int>(reps.size()); }
};

/// Graded right action of the algebra generators on H_n. action[s][k] is the
/// matrix of -.x_s : H_{n,m_min+k} -> H_{n,m_min+k+1} (rows = target reps).
struct GradedHomologyModule {
  int n = 0;
  int m_min = 0;
  std::vector<HomologySlice> slices;
  std::vector<std::vector<SparseMatrix>> action;
};

struct InternalInconsistency : std::logic_error {
  using std::logic_error::logic_error;
};

/// Koszul complex of a quadratic module: dual-module standard words, layer
/// matrices, ranks with exactness certification, homology data.
class KoszulCtx {
 public:
  KoszulCtx(std::shared_ptr<const AlgebraCtx> alg,
            std::shared_ptr<const AlgebraCtx> dual_alg, ModulePresentation mod,
            int dual_trunc);

  static KoszulCtx make(std::shared_ptr<const AlgebraCtx> alg,
                        const ModulePresentation& mod, int dual_trunc);

  const AlgebraCtx& alg() const { return *alg_; }
  const AlgebraCtx& dual_alg() const { return *dual_alg_; }
  const ModulePresentation& mod() const { return mod_; }
  const ModuleGroebnerBasis& dual_gb() const { return dual_gb_; }
  int dual_trunc() const { return dual_gb_.truncation_degree; }

  int dual_dim(int n) const;
  const std::vector<Word>& dual_words(int n) const;
  /// NF(u * y_s) over dual_words(n+1) for u in dual_words(n).
  const std::vector<SparseVec>& dual_rightmul(int s, int n) const;

  int dim_k(int n, int m) const;
  KoszulLayer layer(int n, int m) const;

  /// rank of d_{n,m}; single-prime by default, upgraded to multi-prime
  /// agreement when a nonzero homology dimension depends on it.
  int layer_rank(int n, int m) const;
  int boundary_dim(int n, int m) const { return layer_rank(n + 1, m - 1); }
  int cycle_dim(int n, int m) const {
    return dim_k(n, m) - layer_rank(n, m);
  }
  /// dim H_{n,m}; zero values are certified exactly by the rank squeeze
  /// dim B + rank d = dim K, nonzero values by multi-prime agreement.
  int homology_dim(int n, int m) const;
  /// rows n in [0, n_max], columns m in [0, m_max]
  std::vector<std::vector<long>> homology_table(int n_max, int m_max) const;
  /// Same table with layer ranks computed by a pool of workers; the shared
  /// caches are warmed up front so the workers never mutate shared state.
  std::vector<std::vector<long>> homology_table(int n_max, int m_max,
                                                int jobs) const;

  /// Exact canonical boundary basis (RREF) of B_{n,m}.
  const Subspace& boundaries(int n, int m) const;
  /// Exact canonical cycle basis of D_{n,m}.
  const Subspace& cycles(int n, int m) const;
  /// Exact representatives: complement of B inside D, pivots rightmost.
  HomologySlice homology_reps(int n, int m) const;

  /// v * x_s at chain level: K_{n,m} -> K_{n,m+1}.
  SparseVec act(int n, int m, const SparseVec& v, int s) const;
  /// v * w for an algebra word w.
  SparseVec act_word(int n, int m, const SparseVec& v, const Word& w) const;

  /// Modular incremental rank of span(B_{n,m} + added vectors); base_rank
  /// is recorded at construction. Used for the span-growth tests.
  class GrowProbe {
   public:
    GrowProbe(const KoszulCtx& kc, int n, int m, int nprimes = 3);
    int base_rank() const { return base_rank_; }
    int rank() const { return rank_; }
    /// Inserts vectors; returns the certified rank afterwards.
    int add(const std::vector<SparseVec>& vecs);

   private:
    std::vector<ZpEchelon> ech_;
    int base_rank_ = 0;
    int rank_ = 0;
  };

  /// Graded dims of the A-submodule of H_n generated by classes at (n, m0).
  std::vector<long> submodule_dimvec(int n, int m0,
                                     const std::vector<SparseVec>& classes,
                                     int m_max) const;

  /// True iff every candidate relation evaluated on the classes lands in the
  /// boundary span.
  bool check_relations(int n, int m0, const std::vector<SparseVec>& classes,
                       const ModulePresentation& candidate) const;

  enum class Split { SplitSeq, NonSplit };
  struct SplitWitness {
    Split verdict;
    int generator = -1; // certifying generator for NonSplit
    int rank_without = 0;
    int rank_with = 0;
  };
  /// Split test for a 1-dimensional quotient class at (n, m): the other
  /// classes span the kernel of the quotient projection at that bidegree.
  SplitWitness split_test(int n, int m,
                          const std::vector<SparseVec>& other_classes,
                          const SparseVec& quotient_class) const;

  /// Per-generator action matrices on H_n across internal degrees <= m_max.
  GradedHomologyModule homology_action(int n, int m_max) const;

  const GeneratorSet& dual_mgens() const { return dual_mgen_set_; }

 private:
  void build_layer_triplets(int n, int m, SparseMatrix& out) const;

  std::shared_ptr<const AlgebraCtx> alg_;
  std::shared_ptr<const AlgebraCtx> dual_alg_;
  ModulePresentation mod_;
  ModulePresentation dual_mod_;
  ModuleGroebnerBasis dual_gb_;
  GeneratorSet dual_mgen_set_;
  std::vector<std::vector<Word>> dual_words_;
  std::vector<std::map<Word, int>> dual_index_;
  std::vector<char> dual_words_done_;
  mutable std::map<std::pair<int, int>, std::vector<SparseVec>> dual_rmul_;
  struct RankInfo {
    int value = -1;
    bool certified = false;
  };
  mutable std::map<std::pair<int, int>, RankInfo> ranks_;
  mutable std::map<std::pair<int, int>, Subspace> boundary_rref_;
  mutable std::map<std::pair<int, int>, Subspace> cycle_basis_;
  void certify_rank(int n, int m) const;
};

/// One inferred contribution of the homology decomposition: pi1 copies in
/// the kernel part and pi2 in the cokernel part of M^j(-ell) inside H_n.
struct HhEntry {
  int i = 0, j = 0, k = 0, ell = 0;
  int pi1 = 0, pi2 = 0;
  bool operator==(const HhEntry&) const = default;
  bool operator<(const HhEntry& o) const {
    return std::tie(i, j, k, ell) < std::tie(o.i, o.j, o.k, o.ell);
  }
};

struct IdentifyReport {
  bool resolved = true;
  std::string note;
  std::vector<HhEntry> entries; // with i = module index passed by caller
  // decomposition data for downstream consumers (resolution assembly):
  int m0 = -1; // generator degree of the submodule part
  bool nonsplit = false;
  struct SubPart {
    int j = 0;                            // catalog index
    std::vector<SparseVec> matched;       // classes matched to its generators
  };
  std::vector<SubPart> sub_parts;
  // quotient pieces: (internal degree m, representatives of trivial classes)
  std::vector<std::pair<int, std::vector<SparseVec>>> quotient_reps;
};

/// A catalog module with its presentation and (finite) dimension vector.
struct CatalogModule {
  std::string name;
  ModulePresentation pres;
  std::vector<long> dimvec;
  /// dimvec only known up to a truncation horizon (infinite-dimensional
  /// module); matches are then certified within the computed window only
  bool truncated = false;
};

/// Decomposes H_k(K(M^i)) for every k in [1, n_max] against the catalog,
/// mirroring the extension-versus-isomorphism analysis: lowest-degree
/// classes generate a submodule matched against catalog modules (single or
/// direct sums found through hom spaces); the quotient must split into
/// shifted trivial modules; a split test decides the pi1/pi2 partition.
IdentifyReport identify_homology(const KoszulCtx& kc, int module_index,
                                 int n, const std::vector<CatalogModule>& cat,
                                 int m_max);

/// Quadratic presentation of the submodule generated by classes at (n, m0):
/// generators = the classes, relations = all degree-1 combinations landing
/// in the boundary span (exact).
ModulePresentation class_presentation(const KoszulCtx& kc, int n, int m0,
                                      const std::vector<SparseVec>& classes);

/// Finds combinations of the classes matched to the candidate's generators
/// (a presentation morphism that is bijective on degree 0), or nullopt.
std::optional<std::vector<SparseVec>> match_generators(
    const KoszulCtx& kc, int n, int m0, const std::vector<SparseVec>& classes,
    const ModulePresentation& candidate);

/// Chain map K(f) induced by f in hom_space(M, N): per-layer matrices,
/// verified to commute with the differentials (throws InternalInconsistency
/// otherwise).
std::map<std::pair<int, int>, SparseMatrix> koszul_chain_map(
    const std::vector<std::vector<Rational>>& f, const KoszulCtx& src,
    const KoszulCtx& dst, int n_max, int m_max);

/// Table export, rows = n, cols = m.
std::string table_csv(const std::vector<std::vector<long>>& t);
std::string table_markdown(const std::vector<std::vector<long>>& t);

} // namespace qk
