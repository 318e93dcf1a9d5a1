#include "qk/linalg.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace qk {

void SparseVec::sort_and_combine() {
  std::sort(ent.begin(), ent.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  size_t out = 0;
  for (size_t i = 0; i < ent.size();) {
    size_t j = i + 1;
    Rational acc = ent[i].second;
    while (j < ent.size() && ent[j].first == ent[i].first)
      acc += ent[j++].second;
    if (acc != 0) ent[out++] = {ent[i].first, acc};
    i = j;
  }
  ent.resize(out);
}

void SparseMatrix::add(int r, int c, const Rational& v) {
  if (r < 0 || r >= nrows || c < 0 || c >= ncols)
    throw std::out_of_range("matrix index out of range");
  rows[r].ent.emplace_back(c, v);
}

void SparseMatrix::finalize() {
  for (auto& r : rows) r.sort_and_combine();
}

SparseMatrix SparseMatrix::transposed() const {
  SparseMatrix t(ncols, nrows);
  for (int r = 0; r < nrows; ++r)
    for (const auto& [c, v] : rows[r].ent) t.rows[c].ent.emplace_back(r, v);
  return t;
}

size_t SparseMatrix::nnz() const {
  size_t n = 0;
  for (const auto& r : rows) n += r.ent.size();
  return n;
}

// ---------------------------------------------------------------------------
// Z/p arithmetic

namespace {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
  return static_cast<uint64_t>((__uint128_t)a * b % p);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t p) {
  uint64_t r = 1;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod(r, a, p);
    a = mulmod(a, a, p);
    e >>= 1;
  }
  return r;
}

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t q : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % q == 0) return n == q;
  }
  uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) d >>= 1, ++s;
  for (uint64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

uint64_t inv_mod(uint64_t a, uint64_t p) {
  int64_t t = 0, newt = 1;
  int64_t r = static_cast<int64_t>(p), newr = static_cast<int64_t>(a % p);
  while (newr != 0) {
    int64_t q = r / newr;
    std::swap(t -= q * newt, newt);
    std::swap(r -= q * newr, newr);
  }
  if (r != 1) throw std::runtime_error("not invertible mod p");
  return static_cast<uint64_t>(t < 0 ? t + static_cast<int64_t>(p) : t);
}

uint64_t mpz_mod_ui(const mpz_class& z, uint64_t p) {
  return mpz_fdiv_ui(z.get_mpz_t(), static_cast<unsigned long>(p));
}

} // namespace

std::vector<uint64_t> random_primes(int count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<uint64_t> dist(1ull << 30, (1ull << 31) - 1);
  std::vector<uint64_t> out;
  while (static_cast<int>(out.size()) < count) {
    uint64_t c = dist(rng) | 1;
    if (is_prime(c) && std::find(out.begin(), out.end(), c) == out.end())
      out.push_back(c);
  }
  return out;
}

std::vector<std::pair<int, uint64_t>> reduce_vec_mod(const SparseVec& v,
                                                     uint64_t p) {
  std::vector<std::pair<int, uint64_t>> out;
  out.reserve(v.ent.size());
  for (const auto& [c, q] : v.ent) {
    uint64_t den = mpz_mod_ui(q.get_den(), p);
    if (den == 0) throw std::runtime_error("prime divides a denominator");
    uint64_t num = mpz_mod_ui(q.get_num(), p);
    uint64_t val = mulmod(num, inv_mod(den, p), p);
    if (val) out.emplace_back(c, val);
  }
  return out;
}

ZpEchelon::ZpEchelon(uint64_t p, int ncols)
    : p_(p), ncols_(ncols), pivot_of_col_(ncols, -1), buf_(ncols, 0) {}

bool ZpEchelon::reduce_into_buffer(
    const std::vector<std::pair<int, uint64_t>>& v, bool insert) {
  if (v.empty()) return false;
  int lead = ncols_;
  for (const auto& [c, val] : v) {
    uint64_t x = val % p_;
    if (!x) continue;
    if (buf_[c] == 0) touched_.push_back(c);
    buf_[c] = (buf_[c] + x) % p_;
    lead = std::min(lead, c);
  }
  int newpivot = -1;
  for (int c = lead; c < ncols_; ++c) {
    uint64_t x = buf_[c];
    if (!x) continue;
    int pr = pivot_of_col_[c];
    if (pr < 0) {
      newpivot = c;
      break;
    }
    // cancel with the pivot row (its leading coefficient is 1)
    uint64_t mult = p_ - x;
    for (const auto& [j, rv] : rows_[pr].e) {
      if (buf_[j] == 0) touched_.push_back(j);
      buf_[j] = (buf_[j] + mult * rv) % p_;
    }
  }
  bool grew = false;
  if (newpivot >= 0 && insert) {
    Row row;
    uint64_t inv = inv_mod(buf_[newpivot], p_);
    for (int c = newpivot; c < ncols_; ++c)
      if (buf_[c]) row.e.emplace_back(c, mulmod(buf_[c], inv, p_));
    pivot_of_col_[newpivot] = static_cast<int>(rows_.size());
    rows_.push_back(std::move(row));
    grew = true;
  } else if (newpivot >= 0) {
    grew = true; // nonzero remainder, not inserted
  }
  for (int c : touched_) buf_[c] = 0;
  touched_.clear();
  return grew;
}

bool ZpEchelon::reduce_into_buffer_const(
    const std::vector<std::pair<int, uint64_t>>& v) const {
  return const_cast<ZpEchelon*>(this)->reduce_into_buffer(v, false);
}

bool ZpEchelon::add(const SparseVec& v) {
  return reduce_into_buffer(reduce_vec_mod(v, p_), true);
}

bool ZpEchelon::add(const std::vector<std::pair<int, uint64_t>>& v) {
  return reduce_into_buffer(v, true);
}

bool ZpEchelon::contains(const SparseVec& v) const {
  return !reduce_into_buffer_const(reduce_vec_mod(v, p_));
}

// ---------------------------------------------------------------------------
// Exact elimination

namespace {

/// Incremental echelon over Q with a dense accumulator. Rows keep their
/// leading coefficient normalized to 1 but are not back-reduced until
/// to_rref() is called.
class RatEchelon {
 public:
  explicit RatEchelon(int ncols)
      : ncols_(ncols), pivot_of_col_(ncols, -1), buf_(ncols),
        in_touched_(ncols, 0) {}

  int rank() const { return static_cast<int>(rows_.size()); }

  // Returns the leading column of the remainder, or -1 if v reduced to zero.
  // When insert is false the remainder is discarded.
  int add(const SparseVec& v, bool insert = true,
          SparseVec* remainder = nullptr) {
    int lead = ncols_;
    for (const auto& [c, q] : v.ent) {
      if (q == 0) continue;
      buf_[c] += q;
      touch(c);
      lead = std::min(lead, c);
    }
    int newpivot = -1;
    for (int c = lead; c < ncols_; ++c) {
      if (buf_[c] == 0) continue;
      int pr = pivot_of_col_[c];
      if (pr < 0) {
        newpivot = c;
        break;
      }
      Rational mult = buf_[c];
      for (const auto& [j, rv] : rows_[pr].ent) {
        buf_[j] -= mult * rv;
        touch(j);
      }
    }
    if (newpivot >= 0) {
      SparseVec row;
      Rational inv = 1 / Rational(buf_[newpivot]);
      for (int c = newpivot; c < ncols_; ++c)
        if (buf_[c] != 0) row.ent.emplace_back(c, buf_[c] * inv);
      if (remainder) *remainder = row;
      if (insert) {
        pivot_of_col_[newpivot] = static_cast<int>(rows_.size());
        rows_.push_back(std::move(row));
        pivots_.push_back(newpivot);
      }
    }
    clear_buffer();
    return newpivot;
  }

  /// Canonicalize: back-reduce entries above each pivot, sort by pivot.
  Subspace to_rref() {
    std::vector<int> order(rows_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return pivots_[a] > pivots_[b]; });
    // rightmost pivot first; every pivot column met during the scan belongs
    // to an already-canonical row, so one ascending pass per row suffices
    for (int idx : order) {
      SparseVec& row = rows_[idx];
      for (const auto& [c, q] : row.ent) {
        buf_[c] += q;
        touch(c);
      }
      for (int c = pivots_[idx] + 1; c < ncols_; ++c) {
        if (buf_[c] == 0) continue;
        int pr = pivot_of_col_[c];
        if (pr < 0) continue;
        Rational mult = buf_[c];
        for (const auto& [j, rv] : rows_[pr].ent) {
          buf_[j] -= mult * rv;
          touch(j);
        }
      }
      SparseVec out;
      std::sort(touched_.begin(), touched_.end());
      for (int c : touched_)
        if (buf_[c] != 0) out.ent.emplace_back(c, buf_[c]);
      clear_buffer();
      row = std::move(out);
    }
    Subspace s;
    s.ambient = ncols_;
    std::vector<int> order2(rows_.size());
    for (size_t i = 0; i < order2.size(); ++i) order2[i] = static_cast<int>(i);
    std::sort(order2.begin(), order2.end(),
              [&](int a, int b) { return pivots_[a] < pivots_[b]; });
    for (int idx : order2) {
      s.basis.push_back(std::move(rows_[idx]));
      s.pivots.push_back(pivots_[idx]);
    }
    return s;
  }

 private:
  void touch(int c) {
    if (!in_touched_[c]) {
      in_touched_[c] = 1;
      touched_.push_back(c);
    }
  }
  void clear_buffer() {
    for (int c : touched_) {
      buf_[c] = 0;
      in_touched_[c] = 0;
    }
    touched_.clear();
  }

  int ncols_;
  std::vector<SparseVec> rows_;
  std::vector<int> pivots_;
  std::vector<int> pivot_of_col_;
  std::vector<Rational> buf_;
  std::vector<int> touched_;
  std::vector<char> in_touched_;
};

} // namespace

SparseVec Subspace::reduce(SparseVec v) const {
  // basis rows are RREF with leftmost pivots sorted ascending, so reduction
  // at column c only creates entries at columns > c
  std::map<int, Rational> acc;
  for (auto& [c, q] : v.ent)
    if (q != 0) acc[c] += q;
  SparseVec out;
  while (!acc.empty()) {
    auto it = acc.begin();
    int c = it->first;
    Rational q = it->second;
    acc.erase(it);
    if (q == 0) continue;
    auto pv = std::lower_bound(pivots.begin(), pivots.end(), c);
    if (pv != pivots.end() && *pv == c) {
      int ri = static_cast<int>(pv - pivots.begin());
      for (const auto& [j, rv] : basis[ri].ent)
        if (j != c) acc[j] -= q * rv;
    } else {
      out.ent.emplace_back(c, std::move(q));
    }
  }
  return out;
}

int rank_exact(const SparseMatrix& m) {
  RatEchelon e(m.ncols);
  for (const auto& r : m.rows) e.add(r);
  return e.rank();
}

int rank(const SparseMatrix& m, int nprimes, uint64_t seed) {
  auto primes = random_primes(nprimes + 8, seed);
  int agreed = -1, count = 0;
  for (uint64_t p : primes) {
    int rk;
    try {
      ZpEchelon e(p, m.ncols);
      for (const auto& r : m.rows) e.add(r);
      rk = e.rank();
    } catch (const std::runtime_error&) {
      continue; // prime divides a denominator; skip it
    }
    if (rk > agreed) {
      agreed = rk;
      count = 1;
    } else if (rk == agreed) {
      ++count;
    }
    if (count >= nprimes) return agreed;
  }
  throw std::runtime_error("modular rank: primes failed to agree");
}

Subspace row_space(const SparseMatrix& m) {
  RatEchelon e(m.ncols);
  for (const auto& r : m.rows) e.add(r);
  return e.to_rref();
}

Subspace rref(std::vector<SparseVec> vecs, int ambient, bool rightmost) {
  if (!rightmost) {
    RatEchelon e(ambient);
    for (auto& v : vecs) e.add(v);
    return e.to_rref();
  }
  auto flip = [ambient](SparseVec v) {
    for (auto& [c, q] : v.ent) c = ambient - 1 - c;
    std::sort(v.ent.begin(), v.ent.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return v;
  };
  RatEchelon e(ambient);
  for (auto& v : vecs) e.add(flip(std::move(v)));
  Subspace s = e.to_rref();
  Subspace out;
  out.ambient = ambient;
  for (size_t i = 0; i < s.basis.size(); ++i) {
    out.basis.push_back(flip(std::move(s.basis[i])));
    out.pivots.push_back(ambient - 1 - s.pivots[i]);
  }
  // keep deterministic ordering: by pivot column descending (rightmost first)
  return out;
}

Subspace nullspace(const SparseMatrix& m) {
  Subspace rs = row_space(m);
  Subspace ns;
  ns.ambient = m.ncols;
  std::vector<char> is_pivot(m.ncols, 0);
  for (int p : rs.pivots) is_pivot[p] = 1;
  // entry lookup per basis row
  for (int f = 0; f < m.ncols; ++f) {
    if (is_pivot[f]) continue;
    SparseVec x;
    for (size_t i = 0; i < rs.basis.size(); ++i) {
      const auto& row = rs.basis[i].ent;
      auto it = std::lower_bound(
          row.begin(), row.end(), f,
          [](const auto& a, int col) { return a.first < col; });
      if (it != row.end() && it->first == f)
        x.ent.emplace_back(rs.pivots[i], -it->second);
    }
    x.ent.emplace_back(f, Rational(1));
    x.sort_and_combine();
    ns.basis.push_back(std::move(x));
    ns.pivots.push_back(f);
  }
  return ns;
}

std::optional<std::vector<SparseVec>> solve_many(
    const SparseMatrix& m, const std::vector<SparseVec>& b_cols,
    int* bad_col) {
  int k = static_cast<int>(b_cols.size());
  // augmented rows: (row of m | b_0[r] ... b_{k-1}[r]), with pivots
  // restricted to the m-part by eliminating in a wider matrix whose RHS
  // columns sit after all m columns; a pivot landing in the RHS block marks
  // inconsistency rows.
  SparseMatrix aug(m.nrows, m.ncols + k);
  for (int r = 0; r < m.nrows; ++r) aug.rows[r] = m.rows[r];
  for (int j = 0; j < k; ++j)
    for (const auto& [r, v] : b_cols[j].ent) aug.rows[r].push(m.ncols + j, v);
  for (auto& r : aug.rows) r.sort_and_combine();

  RatEchelon e(aug.ncols);
  std::vector<SparseVec> inconsistent;
  for (const auto& r : aug.rows) {
    SparseVec rem;
    int pivot = e.add(r, /*insert=*/false, &rem);
    if (pivot < 0) continue;
    if (pivot < m.ncols) {
      e.add(rem, true);
    } else {
      inconsistent.push_back(std::move(rem));
    }
  }
  std::vector<char> bad(k, 0);
  for (const auto& row : inconsistent)
    for (const auto& [c, v] : row.ent) bad[c - m.ncols] = 1;
  for (int j = 0; j < k; ++j)
    if (bad[j]) {
      if (bad_col) *bad_col = j;
      return std::nullopt;
    }
  Subspace rr = e.to_rref();
  std::vector<SparseVec> xs(k);
  for (size_t i = 0; i < rr.basis.size(); ++i) {
    int p = rr.pivots[i];
    for (const auto& [c, v] : rr.basis[i].ent)
      if (c >= m.ncols) xs[c - m.ncols].push(p, v);
  }
  for (auto& x : xs) x.sort_and_combine();
  return xs;
}

std::optional<std::vector<Rational>> solve(const SparseMatrix& m,
                                           const std::vector<Rational>& b) {
  if (static_cast<int>(b.size()) != m.nrows)
    throw std::invalid_argument("solve: dimension mismatch");
  SparseVec col;
  for (int r = 0; r < m.nrows; ++r) col.push(r, b[r]);
  auto xs = solve_many(m, {col});
  if (!xs) return std::nullopt;
  std::vector<Rational> out(m.ncols, Rational(0));
  for (const auto& [c, v] : (*xs)[0].ent) out[c] = v;
  return out;
}

int grow_rank(const SparseMatrix& base, const std::vector<SparseVec>& extra,
              int nprimes, uint64_t seed) {
  auto primes = random_primes(nprimes + 8, seed);
  int agreed = -1, count = 0;
  for (uint64_t p : primes) {
    int rk;
    try {
      ZpEchelon e(p, base.ncols);
      for (const auto& r : base.rows) e.add(r);
      for (const auto& v : extra) e.add(v);
      rk = e.rank();
    } catch (const std::runtime_error&) {
      continue;
    }
    if (rk > agreed) {
      agreed = rk;
      count = 1;
    } else if (rk == agreed) {
      ++count;
    }
    if (count >= nprimes) return agreed;
  }
  throw std::runtime_error("modular rank: primes failed to agree");
}

int grow_rank(const Subspace& base, const std::vector<SparseVec>& extra) {
  RatEchelon e(base.ambient);
  for (const auto& r : base.basis) e.add(r);
  for (const auto& v : extra) e.add(v);
  return e.rank();
}

void write_sms(std::ostream& os, const SparseMatrix& m) {
  os << m.nrows << " " << m.ncols << " M\n";
  for (int r = 0; r < m.nrows; ++r)
    for (const auto& [c, v] : m.rows[r].ent)
      os << (r + 1) << " " << (c + 1) << " " << to_string(v) << "\n";
  os << "0 0 0\n";
}

SparseMatrix read_sms(std::istream& is) {
  int nr, nc;
  std::string tag;
  if (!(is >> nr >> nc >> tag) || tag != "M")
    throw std::invalid_argument("bad SMS header");
  SparseMatrix m(nr, nc);
  while (true) {
    long r, c;
    std::string v;
    if (!(is >> r >> c >> v)) throw std::invalid_argument("truncated SMS");
    if (r == 0 && c == 0) break;
    m.add(static_cast<int>(r - 1), static_cast<int>(c - 1),
          parse_rational(v));
  }
  m.finalize();
  return m;
}

} // namespace qk
