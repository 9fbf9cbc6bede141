#include "fqm/matroid.hpp"

#include <algorithm>
#include <bit>
#include <set>

#include "fqm/errors.hpp"

namespace fqm {

namespace {

// next mask with the same popcount (Gosper)
Mask next_combination(Mask x) {
  const Mask c = x & (~x + 1);
  const Mask r = x + c;
  return (((r ^ x) >> 2) / c) | r;
}

std::uint64_t binom_sat(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  long double v = 1;
  for (std::size_t i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v > 1.8e19L ? UINT64_MAX : std::uint64_t(v + 0.5L);
}

struct KernelSweep {
  std::size_t m, d;
  unsigned q;
  std::vector<Mask> bin;          // q = 2
  std::vector<FqVector> vecs;     // general q
};

KernelSweep kernel_of(const RepMatroid& mat) {
  KernelSweep ks;
  ks.m = mat.size();
  ks.q = mat.field().order();
  ks.vecs = kernel_basis(mat.matrix());
  ks.d = ks.vecs.size();
  if (ks.q == 2)
    for (auto& v : ks.vecs) {
      Mask x = 0;
      for (std::size_t i = 0; i < ks.m; ++i)
        if (v[i]) x |= Mask(1) << i;
      ks.bin.push_back(x);
    }
  return ks;
}

std::uint64_t sweep_size(unsigned q, std::size_t d) {
  std::uint64_t s = 1;
  for (std::size_t i = 0; i < d; ++i) {
    if (s > UINT64_MAX / q) return UINT64_MAX;
    s *= q;
  }
  return s;
}

// Visits the support of every kernel vector up to scalars.
template <class Fn>
void sweep_supports(const Field& f, const KernelSweep& ks, Fn&& fn) {
  if (ks.d == 0) return;
  if (ks.q == 2) {
    Mask x = 0;
    const std::uint64_t total = std::uint64_t(1) << ks.d;
    for (std::uint64_t i = 1; i < total; ++i) {
      x ^= ks.bin[std::size_t(std::countr_zero(i))];
      fn(x);
    }
    return;
  }
  std::vector<Elem> coef(ks.d, 0);
  FqVector x(ks.m, 0);
  for (;;) {
    std::size_t i = 0;
    for (; i < ks.d; ++i) {
      const Elem next = coef[i] + 1u < f.order() ? Elem(coef[i] + 1) : Elem(0);
      axpy(f, f.sub(next, coef[i]), ks.vecs[i].data(), x.data(), ks.m);
      coef[i] = next;
      if (next != 0) break;
    }
    if (i == ks.d) break;
    std::size_t lead = 0;
    while (coef[lead] == 0) ++lead;
    if (coef[lead] != 1) continue;
    Mask s = 0;
    for (std::size_t j = 0; j < ks.m; ++j)
      if (x[j]) s |= Mask(1) << j;
    fn(s);
  }
}

}  // namespace

RepMatroid::RepMatroid(FqMatrix a) : a_(std::move(a)), rank_(fqm::rank(a_)) {}

std::size_t rank_of_subset(const RepMatroid& m, const IndexSet& s) {
  for (std::size_t i : s)
    if (i >= m.size()) throw InvalidParam("element index out of range");
  return rank(m.matrix().select_columns(s));
}

bool is_circuit(const RepMatroid& m, const IndexSet& s) {
  if (s.empty()) throw InvalidParam("is_circuit needs a nonempty set");
  std::set<std::size_t> uniq(s.begin(), s.end());
  if (uniq.size() != s.size()) return false;
  IndexSet set(uniq.begin(), uniq.end());
  if (rank_of_subset(m, set) + 1 != set.size()) return false;
  for (std::size_t i = 0; i < set.size(); ++i) {
    IndexSet sub = set;
    sub.erase(sub.begin() + std::ptrdiff_t(i));
    if (rank_of_subset(m, sub) != sub.size()) return false;
  }
  return true;
}

bool is_simple(const RepMatroid& m) {
  std::set<FqVector> seen;
  const FqMatrix& a = m.matrix();
  for (std::size_t c = 0; c < a.cols(); ++c) {
    FqVector v(a.column(c).begin(), a.column(c).end());
    if (std::all_of(v.begin(), v.end(), [](Elem x) { return x == 0; })) return false;
    normalize_projective(a.field(), v);
    if (!seen.insert(v).second) return false;
  }
  return true;
}

static bool use_sweep(const RepMatroid& m, const Budget& b, SpectrumMethod how) {
  const bool fits = m.size() <= 64 && sweep_size(m.field().order(), m.corank()) <= b.kernel_sweep;
  if (how == SpectrumMethod::KernelSweep) {
    if (!fits) throw BudgetExceeded("kernel sweep exceeds its budget");
    return true;
  }
  if (how == SpectrumMethod::Subsets) return false;
  return fits;
}

static void check_subset_budget(const RepMatroid& m, const Budget& b, std::size_t upto) {
  if (m.size() > 64) throw BudgetExceeded("subset enumeration needs at most 64 elements");
  std::uint64_t total = 0;
  for (std::size_t k = 1; k <= upto; ++k) {
    const std::uint64_t c = binom_sat(m.size(), k);
    total = (c > UINT64_MAX - total) ? UINT64_MAX : total + c;
  }
  if (total > b.subsets) throw BudgetExceeded("subset enumeration exceeds its budget");
}

ExtInt girth(const RepMatroid& m, const Budget& b, SpectrumMethod how) {
  if (m.corank() == 0) return ExtInt::infinity();
  if (use_sweep(m, b, how)) {
    const KernelSweep ks = kernel_of(m);
    int best = 65;
    sweep_supports(m.field(), ks, [&](Mask s) { best = std::min(best, std::popcount(s)); });
    return ExtInt(best);
  }
  // smallest dependent set is a circuit; any dependent set of size k exists iff
  // a circuit of size <= k does
  if (m.size() > 63) throw BudgetExceeded("subset enumeration needs at most 63 elements");
  SubsetRanker rk(m.matrix());
  const Mask end = Mask(1) << m.size();
  for (std::size_t k = 1; k <= m.rank() + 1; ++k) {
    check_subset_budget(m, b, k);
    for (Mask s = (Mask(1) << k) - 1; s < end; s = next_combination(s))
      if (rk.rank(s) < k) return ExtInt(std::int64_t(k));
  }
  throw ConsistencyError("dependent matroid without a circuit");
}

std::map<std::size_t, std::uint64_t> circuit_spectrum(const RepMatroid& m, const Budget& b,
                                                      SpectrumMethod how) {
  std::map<std::size_t, std::uint64_t> out;
  if (m.corank() == 0) return out;
  SubsetRanker rk(m.matrix());
  if (use_sweep(m, b, how)) {
    const KernelSweep ks = kernel_of(m);
    sweep_supports(m.field(), ks, [&](Mask s) {
      const std::size_t k = std::size_t(std::popcount(s));
      if (rk.rank(s) + 1 == k) ++out[k];
    });
    return out;
  }
  if (m.size() > 20) throw BudgetExceeded("subset circuit enumeration needs at most 20 elements");
  check_subset_budget(m, b, std::min(m.size(), m.rank() + 1));
  const std::size_t mm = m.size();
  for (std::size_t k = 1; k <= std::min(mm, m.rank() + 1); ++k) {
    for (Mask s = (Mask(1) << k) - 1; s < (Mask(1) << mm); s = next_combination(s)) {
      if (rk.rank(s) + 1 != k) continue;
      bool minimal = true;
      for (Mask t = s; t && minimal; t &= t - 1)
        minimal = rk.rank(s & ~(t & (~t + 1))) == k - 1;
      if (minimal) ++out[k];
    }
  }
  return out;
}

std::optional<std::pair<std::size_t, std::size_t>> is_uniform(const RepMatroid& m) {
  const std::size_t mm = m.size(), r = m.rank();
  if (mm > 20) throw InvalidParam("is_uniform supports at most 20 elements");
  if (r == 0) return std::make_pair(std::size_t(0), mm);
  SubsetRanker rk(m.matrix());
  for (Mask s = (Mask(1) << r) - 1; s < (Mask(1) << mm); s = next_combination(s))
    if (rk.rank(s) != r) return std::nullopt;
  return std::make_pair(r, mm);
}

bool contains_pg(const FqMatrix& a, std::size_t r) {
  if (a.rows() != r) throw InvalidParam("contains_pg expects a matrix with r rows");
  const Field& f = a.field();
  const std::uint64_t total = projective_count(r, f.order());
  std::vector<bool> hit(total, false);
  std::uint64_t count = 0;
  for (std::size_t c = 0; c < a.cols(); ++c) {
    auto col = a.column(c);
    if (std::all_of(col.begin(), col.end(), [](Elem x) { return x == 0; })) continue;
    const std::uint64_t idx = projective_index(f, col);
    if (!hit[idx]) {
      hit[idx] = true;
      ++count;
    }
  }
  return count == total;
}

RepMatroid catalog_matroid(const std::string& name, const FieldPtr& f) {
  if (name == "U12") return RepMatroid(FqMatrix::from_rows(f, {{1, 1}}));
  if (name == "U23") return RepMatroid(FqMatrix::from_rows(f, {{1, 0, 1}, {0, 1, 1}}));
  auto colon = name.find(':');
  if (colon != std::string::npos) {
    const std::string kind = name.substr(0, colon);
    std::size_t r = 0;
    try {
      r = std::stoul(name.substr(colon + 1));
    } catch (const std::exception&) {
      throw InvalidParam("bad catalog entry " + name);
    }
    if (kind == "free") {
      FqMatrix a(f, r, r);
      for (std::size_t i = 0; i < r; ++i) a.set(i, i, 1);
      return RepMatroid(a);
    }
    if (kind == "PG") return RepMatroid(projective_geometry(f, r));
  }
  throw InvalidParam("unknown catalog matroid " + name);
}

}  // namespace fqm
