#pragma once

#include "qk/koszul.hpp"

namespace qk {

/// A resolving datum: catalog modules (index 0 = the trivial module) and the
/// finitely supported multiplicity map hh.
struct ResolvingDatum {
  std::vector<CatalogModule> modules;
  std::vector<HhEntry> hh;
};

struct Arrow {
  int source = 0;
  int target = 0;
  int d1 = 0; // bidegree components
  int d2 = 0;
  bool kernel_part = false; // Ar' (pi1) when true, Ar'' (pi2) otherwise
  int ordinal = 0;          // position within its Ar set (deterministic)
  int ddeg() const { return d2 - d1; }
  bool operator==(const Arrow&) const = default;
};

struct ResolvingQuiver {
  int num_vertices = 0;
  std::vector<Arrow> arrows;
  bool connected = false;
};

ResolvingQuiver build_quiver(const ResolvingDatum& d);

struct QuiverPath {
  int source = 0;          // vertex for the empty path
  std::vector<int> arrows; // indices into quiver.arrows
  int d1 = 0;
  int d2 = 0;
  int length() const { return static_cast<int>(arrows.size()); }
  int ddeg() const { return d2 - d1; }
};

int path_target(const ResolvingQuiver& q, const QuiverPath& p);

/// The strict partial order on paths from a common vertex: the vertex path
/// is greater than every other path; otherwise compare after the longest
/// common prefix by arrow order (same first component) or by smaller first
/// bidegree component, and a proper prefix is greater than its extensions.
/// Arrows are partially ordered: cokernel-part arrows precede kernel-part
/// arrows of the same source and first bidegree component.
/// Returns +1 if a > b, -1 if a < b, 0 if equal or incomparable.
int path_compare(const ResolvingQuiver& q, const QuiverPath& a,
                 const QuiverPath& b);

/// All paths from the vertex with first bidegree component <= n_max, sorted
/// decreasingly by a deterministic total extension of the path order (the
/// vertex path first). Rejects quivers with an arrow of nonpositive first
/// bidegree component.
std::vector<QuiverPath> enumerate_paths(const ResolvingQuiver& q, int vertex,
                                        int n_max);

struct ResolutionTerm {
  QuiverPath path;
  int module = 0;       // target vertex of the path
  int koszul_index = 0; // n - d1(path)
  int shift = 0;        // internal shift: the term is K_k(M)(-shift)
};

/// The direct-sum shape of P_n at the vertex; graded dims are returned via
/// term_dims (dual dims of each module per Koszul index are supplied by the
/// caller).
std::vector<ResolutionTerm> resolution_shape(const ResolvingQuiver& q,
                                             int vertex, int n);
std::vector<long> term_dims(const ResolutionTerm& t,
                            const std::vector<std::vector<long>>& dual_dims,
                            const std::vector<long>& algebra_dims, int m_max);

struct MinimalityVerdict {
  bool minimal = true;
  QuiverPath witness_a, witness_b; // violating pair when not minimal
};
MinimalityVerdict check_minimality(const ResolvingQuiver& q, int vertex,
                                   int n_max);

/// DOT export: arrows labeled by bidegree, kernel-part arrows dashed, odd
/// difference-degree arrows red.
std::string quiver_dot(const ResolvingQuiver& q,
                       const std::vector<std::string>& names);

// ---------------------------------------------------------------------------
// Resolution assembly (truncated Horseshoe construction)

/// One free summand K_k(M_module)(-shift) of an assembled chain degree.
struct ChainSummand {
  int module = 0;
  int k = 0;
  int shift = 0;
  bool operator==(const ChainSummand&) const = default;
  bool operator<(const ChainSummand& o) const {
    return std::tie(module, k, shift) < std::tie(o.module, o.k, o.shift);
  }
};

/// Matrix over the algebra between free chain degrees: entry (t, s) is the
/// coefficient of target generator t in the image of source generator s.
struct AMatrix {
  int nrows = 0; // total target generators
  int ncols = 0;
  std::map<std::pair<int, int>, NcPoly> entries;

  void add(int r, int c, const NcPoly& p);
};

struct AssembledResolution {
  int vertex = 0;
  int n_max = 0;
  int m_max = 0;
  std::vector<std::vector<ChainSummand>> terms; // per homological degree
  std::vector<AMatrix> diff;                    // diff[n]: P_n -> P_{n-1}
};

struct AssemblyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class ResolutionAssembler {
 public:
  /// Builds Koszul contexts for every module of the datum, runs the
  /// homology identification, checks it against hh, and assembles the
  /// resolutions of all modules up to homological degree n_max within
  /// internal degree m_max.
  ResolutionAssembler(const ResolvingDatum& d, int n_max, int m_max,
                      int dual_trunc = 15);

  const ResolvingDatum& datum() const { return datum_; }
  const KoszulCtx& ctx(int module) const { return *ctxs_[module]; }
  AssembledResolution resolution(int vertex) const;

  /// Total generators of a chain degree and per-generator internal degrees.
  std::vector<int> generator_degrees(
      const std::vector<ChainSummand>& ts) const;
  /// Scalar matrix of an A-matrix at internal degree t.
  SparseMatrix scalarize(const AMatrix& mat,
                         const std::vector<ChainSummand>& tgt,
                         const std::vector<ChainSummand>& src, int t) const;

  struct Report {
    bool d2_zero = true;
    bool exact = true;
    bool shape_match = true;
    std::vector<std::string> failures;
  };
  /// d^2 = 0 exactly; homology vanishing for 1 <= n <= n_max-2 and
  /// m <= m_max-1; graded dims of each P_n equal the path-shape prediction.
  Report verify(int vertex) const;

 private:
  struct Chain {
    int module = 0;
    int bottom_k = 0; // degree-0 term is K_{bottom_k}(module)
    std::vector<std::vector<ChainSummand>> terms;
    std::vector<AMatrix> diff; // diff[t]: terms[t] -> terms[t-1] (t >= 1)
    // augmentation of degree 0 into K_{bottom_k - 1} is the Koszul
    // differential, so it needs no storage
  };

  int num_module_gens(int module, int k) const;
  std::vector<ChainSummand> shifted(const std::vector<ChainSummand>& ts,
                                    int extra_shift) const;
  AMatrix koszul_diff(int module, int k, int shift) const;
  SparseVec apply_scalar(const AMatrix& mat,
                         const std::vector<ChainSummand>& tgt,
                         const std::vector<ChainSummand>& src, int t,
                         const SparseVec& v) const;

  void build_all();

  ResolvingDatum datum_;
  int n_max_, m_max_;
  std::shared_ptr<AlgebraCtx> alg_;
  std::shared_ptr<AlgebraCtx> dual_alg_;
  std::vector<std::shared_ptr<KoszulCtx>> ctxs_;
  std::map<std::pair<int, int>, IdentifyReport> idmap_; // per (module, k)
  std::vector<int> top_degree_;           // m_i per module (windowed)
  std::vector<std::vector<Chain>> rchain_; // per module: R^{i,k} chains
  std::vector<Chain> presolution_;         // final P^i as chains
};

/// Convenience: assemble and verify the resolution of one vertex module.
AssembledResolution assemble_resolution(const ResolvingDatum& d, int vertex,
                                        int n_max, int m_max);

} // namespace qk
