#include <omp.h>

#include <algorithm>
#include <bit>
#include <unordered_set>

#include "fqm/errors.hpp"
#include "fqm/matroid.hpp"
#include "fqm/subspace.hpp"

namespace fqm {

namespace {

// Order witnessed by the bipartition (s, full ^ s), or -1 if it is not a separation.
inline std::int64_t order_of(const std::vector<std::uint8_t>& rk, Mask s, Mask full, int r,
                             SeparationKind kind) {
  const Mask t = full ^ s;
  const int r1 = rk[s], r2 = rk[t];
  const std::int64_t ord = r1 + r2 - r + 1;
  switch (kind) {
    case SeparationKind::Vertical:
      return ord <= std::min(r1, r2) ? ord : -1;
    case SeparationKind::Cyclic:
      return (r1 < std::popcount(s) && r2 < std::popcount(t)) ? ord : -1;
    case SeparationKind::Tutte:
      return ord <= std::min(std::popcount(s), std::popcount(t)) ? ord : -1;
  }
  return -1;
}

inline bool better(std::int64_t o, Mask s, const ScanResult& cur) {
  if (o < 0) return false;
  if (cur.order < 0 || o < cur.order) return true;
  return o == cur.order && s < cur.part1;
}

Separation make_separation(Mask s, std::size_t m, SeparationKind kind, std::int64_t order) {
  const Mask full = m == 64 ? ~Mask(0) : (Mask(1) << m) - 1;
  return Separation{indices_of(s), indices_of(full ^ s), kind, order};
}

ConnectivityResult from_scan(const ScanResult& sr, std::size_t m, SeparationKind kind) {
  ConnectivityResult out;
  if (sr.order < 0) return out;
  out.value = ExtInt(sr.order);
  out.witness = make_separation(sr.part1, m, kind, sr.order);
  return out;
}

std::vector<std::uint8_t> table_for(const RepMatroid& mat, const Budget& b) {
  if (mat.size() > b.partition_max_m || mat.size() > 26)
    throw BudgetExceeded("bipartition search over " + std::to_string(mat.size()) +
                         " elements exceeds the partition budget");
  return SubsetRanker(mat.matrix()).rank_table();
}

// Vertical connectivity through annihilators. A vertical separation can be
// taken with both sides non-spanning; then kappa = r - S + 1 with S the largest
// dim W1 + dim W2 over nonzero subspaces of the dual such that every element
// is orthogonal to W1 or to W2. The search runs over W1 with dim W1 <= dim W2.
class CoverSearch {
 public:
  explicit CoverSearch(const RepMatroid& mat) : b_(row_reduce(mat.matrix())), rk_(b_) {
    r_ = b_.rows();
    m_ = b_.cols();
    full_ = m_ == 64 ? ~Mask(0) : (Mask(1) << m_) - 1;
  }

  // false once more than `cap` nodes would be visited
  bool run(std::uint64_t cap) {
    if (r_ < 2) return true;
    const FieldPtr& fp = b_.field_ptr();
    const Field& f = *fp;
    const unsigned q = f.order();
    const std::uint64_t hyper = projective_count(r_, q);
    if (hyper > cap) return false;
    work_ = hyper;
    cap_ = cap;
    std::vector<std::uint64_t> packed;
    const bool bin = q == 2 && r_ <= 64;
    if (bin) {
      packed.resize(m_);
      for (std::size_t c = 0; c < m_; ++c)
        for (std::size_t i = 0; i < r_; ++i)
          if (b_.at(i, c)) packed[c] |= std::uint64_t(1) << i;
    }
    for (std::uint64_t h = 0; h < hyper; ++h) {
      FqVector y(r_, 0);
      if (bin) {
        for (std::size_t i = 0; i < r_; ++i) y[i] = Elem((h + 1) >> i & 1);
      } else {
        y = projective_point(h, r_, q);
      }
      Mask off = 0;
      for (std::size_t c = 0; c < m_; ++c) {
        bool nz;
        if (bin) {
          nz = std::popcount((h + 1) & packed[c]) & 1;
        } else {
          Elem dot = 0;
          for (std::size_t i = 0; i < r_; ++i)
            if (y[i]) dot = f.add(dot, f.mul(y[i], b_.at(i, c)));
          nz = dot != 0;
        }
        if (nz) off |= Mask(1) << c;
      }
      const std::size_t s2 = r_ - rk_.rank(off);
      if (s2 == 0) continue;
      record(off, s2);
      cands_.push_back({std::move(y), off, s2});
    }
    // Beating S needs a side of rank at most R; when few column sets span such
    // sides, grow them directly instead of searching the dual.
    if (best_s() == r_) return true;
    const std::size_t R = (2 * r_ - best_s() - 1) / 2;
    double sets = 0, term = 1;
    for (std::size_t j = 1; j <= R && sets <= kDirect; ++j) {
      term = term * double(m_ - j + 1) / double(j);
      sets += term;
    }
    if (sets <= kDirect) return grow(0, 0, 0, R);
    std::stable_sort(cands_.begin(), cands_.end(),
                     [](const Cand& a, const Cand& b) { return a.s2 > b.s2; });
    std::vector<FqVector> basis;
    return extend(0, basis, 0, r_);
  }

  ScanResult result() const { return best_; }

 private:
  struct Cand {
    FqVector y;
    Mask off;
    std::size_t s2;
  };

  std::size_t best_s() const { return best_.order < 0 ? 0 : r_ + 1 - std::size_t(best_.order); }

  static constexpr double kDirect = 2e5;

  // independent column sets a of size j, extended in index order; each closure is one side
  bool grow(std::size_t from, Mask a, std::size_t j, std::size_t R) {
    for (std::size_t c = from; c < m_; ++c) {
      const Mask na = a | (Mask(1) << c);
      if (rk_.rank(na) != j + 1) continue;
      if (++work_ > cap_) return false;
      Mask fl = na;
      for (std::size_t x = 0; x < m_; ++x)
        if (!(fl >> x & 1) && rk_.rank(na | (Mask(1) << x)) == j + 1) fl |= Mask(1) << x;
      const Mask rest = full_ ^ fl;
      if (rest) {
        const std::size_t r2 = rk_.rank(rest);
        if (r2 < r_) {
          const std::int64_t ord = std::int64_t(j + 1 + r2) - std::int64_t(r_) + 1;
          if (better(ord, fl, best_)) best_ = {ord, fl};
        }
      }
      if (j + 1 < R && !grow(c + 1, na, j + 1, R)) return false;
    }
    return true;
  }

  void record(Mask off, std::size_t s2) {
    const Mask a1 = full_ ^ off;
    const std::int64_t ord = std::int64_t(rk_.rank(a1)) + std::int64_t(r_ - s2) - std::int64_t(r_) + 1;
    if (better(ord, a1, best_)) best_ = {ord, a1};
  }

  bool extend(std::size_t from, std::vector<FqVector>& basis, Mask off, std::size_t s2) {
    const std::size_t d = basis.size();
    for (std::size_t i = from; i < cands_.size(); ++i) {
      if (best_s() == r_) return true;
      const Cand& c = cands_[i];
      if (2 * std::min(s2, c.s2) <= best_s()) break;
      if (++work_ > cap_) return false;
      // a vector of the span adds nothing to the off-set
      if (d > 0 && (c.off & ~off) == 0 &&
          SubspaceHandle::span_of(b_.field_ptr(), r_, basis).contains(c.y))
        continue;
      const Mask o = off | c.off;
      const std::size_t t = d == 0 ? c.s2 : r_ - rk_.rank(o);
      if (t == 0) continue;
      if (d > 0) record(o, t);
      if (t >= d + 2 && 2 * t > best_s()) {
        basis.push_back(c.y);
        const bool ok = extend(i + 1, basis, o, t);
        basis.pop_back();
        if (!ok) return false;
      }
    }
    return true;
  }

  FqMatrix b_;
  SubsetRanker rk_;
  std::size_t r_ = 0, m_ = 0;
  Mask full_ = 0;
  std::vector<Cand> cands_;
  ScanResult best_;
  std::uint64_t work_ = 0, cap_ = 0;
};

}  // namespace

ScanResult scan_bipartitions(const std::vector<std::uint8_t>& rk, std::size_t m,
                             SeparationKind kind) {
  ScanResult best;
  if (m < 2) return best;
  const Mask full = (Mask(1) << m) - 1;
  const int r = rk[full];
  const Mask half = Mask(1) << (m - 1);  // subsets avoiding the last element
  for (Mask s = 1; s < half; ++s) {
    const std::int64_t o = order_of(rk, s, full, r, kind);
    if (better(o, s, best)) best = {o, s};
  }
  return best;
}

ScanResult scan_bipartitions_parallel(const std::vector<std::uint8_t>& rk, std::size_t m,
                                      SeparationKind kind) {
  ScanResult best;
  if (m < 2) return best;
  const Mask full = (Mask(1) << m) - 1;
  const int r = rk[full];
  const std::int64_t half = std::int64_t(1) << (m - 1);
#pragma omp parallel
  {
    ScanResult local;
#pragma omp for schedule(static) nowait
    for (std::int64_t s = 1; s < half; ++s) {
      const std::int64_t o = order_of(rk, Mask(s), full, r, kind);
      if (better(o, Mask(s), local)) local = {o, Mask(s)};
    }
#pragma omp critical(fqm_scan_merge)
    if (local.order >= 0 && better(local.order, local.part1, best)) best = local;
  }
  return best;
}

static ScanResult scan(const std::vector<std::uint8_t>& rk, std::size_t m, SeparationKind kind) {
  // nested inside a parallel trial loop the serial scan is used
  if (m >= 20 && !omp_in_parallel() && omp_get_max_threads() > 1)
    return scan_bipartitions_parallel(rk, m, kind);
  return scan_bipartitions(rk, m, kind);
}

ConnectivityResult vertical_connectivity(const RepMatroid& mat, const Budget& b,
                                         VerticalMethod how) {
  const std::size_t m = mat.size();
  if (m > 64) throw BudgetExceeded("connectivity supports at most 64 elements");
  const bool small = m <= 16;
  if (how == VerticalMethod::Bipartitions || (how == VerticalMethod::Auto && small))
    return from_scan(scan(table_for(mat, b), m, SeparationKind::Vertical), m,
                     SeparationKind::Vertical);
  CoverSearch cs(mat);
  if (!cs.run(b.flat_work)) {
    if (how == VerticalMethod::Auto && m <= b.partition_max_m)
      return from_scan(scan(table_for(mat, b), m, SeparationKind::Vertical), m,
                       SeparationKind::Vertical);
    throw BudgetExceeded("vertical connectivity search exceeds its budget");
  }
  return from_scan(cs.result(), m, SeparationKind::Vertical);
}

ConnectivityResult cyclic_connectivity(const RepMatroid& mat, const Budget& b) {
  const std::size_t m = mat.size();
  return from_scan(scan(table_for(mat, b), m, SeparationKind::Cyclic), m, SeparationKind::Cyclic);
}

ConnectivityResult tutte_connectivity(const RepMatroid& mat, const Budget& b) {
  const std::size_t m = mat.size();
  if (m < 1) throw InvalidParam("Tutte connectivity needs a nonempty ground set");
  const auto table = table_for(mat, b);
  ConnectivityResult t = from_scan(scan(table, m, SeparationKind::Tutte), m, SeparationKind::Tutte);
  if (m >= 3) {
    const auto kv = scan(table, m, SeparationKind::Vertical);
    const auto kc = scan(table, m, SeparationKind::Cyclic);
    ExtInt k1 = kv.order < 0 ? ExtInt::infinity() : ExtInt(kv.order);
    ExtInt k2 = kc.order < 0 ? ExtInt::infinity() : ExtInt(kc.order);
    // no vertical or cyclic separation at all: finite convention kappa = r, kappa* = r*
    bool ok = std::min(k1, k2) == t.value;
    if (!ok && k1.is_infinite() && k2.is_infinite()) {
      const long r = static_cast<long>(mat.rank());
      ok = t.value == ExtInt(std::min(r, static_cast<long>(m) - r));
    }
    if (!ok)
      throw ConsistencyError("Tutte connectivity " + t.value.str() + " differs from min(" +
                             k1.str() + ", " + k2.str() + ")");
  }
  return t;
}

}  // namespace fqm
