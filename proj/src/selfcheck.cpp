#include "fqm/selfcheck.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "fqm/errors.hpp"
#include "fqm/matroid.hpp"
#include "fqm/montecarlo.hpp"
#include "fqm/rref.hpp"
#include "fqm/theory.hpp"

namespace fqm {

namespace th = fqm::theory;

namespace {

// Fails with a message; caught by the driver.
struct Fail : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Fail(what);
}

FqMatrix matrix_from_bits(const FieldPtr& f, std::size_t n, std::size_t m, std::uint64_t bits) {
  FqMatrix a(f, n, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) a.set(i, j, Elem((bits >> (j * n + i)) & 1));
  return a;
}

std::string field_axioms(bool corrupt) {
  std::size_t checked = 0;
  for (unsigned q = 2; q <= 64; ++q) {
    unsigned p, e;
    if (!prime_power(q, p, e)) continue;
    FieldPtr f = make_field(q);
    if (corrupt && q == 4) f = f->corrupted_copy(2, 3, 2);
    const auto rep = check_field_axioms(*f, 64);
    expect(rep.ok, "q=" + std::to_string(q) + ": " + rep.failure);
    ++checked;
  }
  return std::to_string(checked) + " fields";
}

std::string rank_law() {
  const auto f = make_field(2);
  std::size_t full = 0;
  for (std::uint64_t b = 0; b < 16; ++b) full += rank(matrix_from_bits(f, 2, 2, b)) == 2;
  expect(full == 6, "2x2 F_2 matrices of rank 2: " + std::to_string(full));
  expect(th::rank_full_prob_exact(2, 2, 2) == th::Rational(3, 8), "rank_full_prob(2,2,2) != 3/8");
  std::vector<std::uint64_t> cnt(4, 0);
  for (std::uint64_t b = 0; b < 64; ++b) ++cnt[3 - rank(matrix_from_bits(f, 2, 3, b))];
  const auto pmf = th::corank_pmf_exact(2, 2, 3);
  for (std::size_t c = 0; c < 4; ++c)
    expect(pmf[c] == th::Rational(cnt[c], 64), "corank pmf at c=" + std::to_string(c));
  for (unsigned q : {2u, 3u})
    for (unsigned n = 1; n <= 12; ++n)
      for (unsigned m = 0; m <= n; ++m)
        expect(th::corank_pmf_exact(n, q, m)[0] == th::rank_full_prob_exact(n, m, q),
               "corank marginal vs full-rank product");
  return "exhaustive 2x2 and 2x3 over F_2";
}

// rank / kernel / contract / delete against the rank table of A
void contract_identities(const FqMatrix& a) {
  const std::size_t m = a.cols();
  const auto rt = SubsetRanker(a).rank_table();
  const std::size_t r = rank(a);
  expect(rt[(std::size_t(1) << m) - 1] == r, "rank table disagrees with rank");
  const auto ker = kernel_basis(a);
  expect(r + ker.size() == m, "rank + nullity != m");
  for (const auto& x : ker) {
    FqVector y(a.rows(), 0);
    for (std::size_t j = 0; j < m; ++j) axpy(a.field(), x[j], a.column(j).data(), y.data(), a.rows());
    for (auto e : y) expect(e == 0, "kernel vector is not in the kernel");
  }
  if (!ker.empty())
    expect(rank(FqMatrix::from_columns(a.field_ptr(), m, ker)) == ker.size(), "kernel basis dependent");
  for (Mask x = 0; x < (Mask(1) << m); ++x) {
    const IndexSet xs = indices_of(x);
    IndexSet rest;
    for (std::size_t j = 0; j < m; ++j)
      if (!((x >> j) & 1)) rest.push_back(j);
    const FqMatrix c = contract(a, xs), d = delete_columns(a, xs);
    expect(c.rows() == a.rows() - rt[x], "contraction has the wrong row count");
    const auto rc = SubsetRanker(c).rank_table(), rd = SubsetRanker(d).rank_table();
    for (Mask s = 0; s < (Mask(1) << rest.size()); ++s) {
      Mask full = 0;
      for (std::size_t i = 0; i < rest.size(); ++i)
        if ((s >> i) & 1) full |= Mask(1) << rest[i];
      expect(rd[s] == rt[full], "deletion changed a rank");
      expect(rc[s] == rt[full | x] - rt[x], "contraction rank identity fails");
    }
  }
}

std::string rank_contract() {
  const auto f2 = make_field(2);
  std::size_t count = 0;
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t m = 0; m <= 5; ++m)
      for (std::uint64_t b = 0; b < (std::uint64_t(1) << (n * m)); ++b, ++count)
        contract_identities(matrix_from_bits(f2, n, m, b));
  const auto f3 = make_field(3);
  Rng rng(20240601, 0);
  for (int t = 0; t < 300; ++t, ++count)
    contract_identities(random_uniform_matrix(1 + rng.below(4), rng.below(7), f3, rng));
  return std::to_string(count) + " matrices";
}

std::string incremental_rank() {
  Rng rng(77, 1);
  for (unsigned q : {2u, 3u, 4u}) {
    const auto f = make_field(q);
    for (int t = 0; t < 1000; ++t) {
      const std::size_t n = 1 + rng.below(12), m = rng.below(13);
      const FqMatrix a = random_uniform_matrix(n, m, f, rng);
      RrefState st(f, n);
      for (std::size_t j = 0; j < m; ++j) st.insert(a.column(j));
      expect(st.rank() == rank(a), "incremental rank differs from batch rank");
      RrefState rev(f, n, false);
      for (std::size_t j = m; j-- > 0;) rev.insert(a.column(j));
      expect(rev.rank() == st.rank(), "insertion order changed the rank");
    }
  }
  return "3000 matrices";
}

std::string subspace_counts() {
  for (unsigned q : {2u, 3u})
    for (std::size_t n = 0; n <= 4; ++n)
      for (std::size_t k = 0; k <= n; ++k) {
        const auto subs = enumerate_subspaces(make_field(q), n, k);
        expect(th::BigInt(subs.size()) == th::gaussian_binomial(unsigned(n), unsigned(k), q),
               "subspace count mismatch at n=" + std::to_string(n) + " k=" + std::to_string(k));
        for (std::size_t i = 1; i < subs.size(); ++i) expect(subs[i - 1] < subs[i], "order not strict");
      }
  return "n <= 4, q in {2,3}";
}

std::string subspace_intersection() {
  for (unsigned q : {2u, 3u})
    for (std::size_t n = 1; n <= 5; ++n) {
      const auto f = make_field(q);
      for (std::size_t k = 0; k <= n; ++k) {
        std::vector<FqVector> wv;
        for (std::size_t i = 0; i < k; ++i) {
          FqVector e(n, 0);
          e[i] = 1;
          wv.push_back(e);
        }
        for (std::size_t j = 0; j <= n; ++j) {
          std::vector<std::uint64_t> by(n + 1, 0);
          for_each_subspace(f, n, j, 10'000'000, [&](const SubspaceHandle& s) {
            std::vector<FqVector> all = wv;
            for (std::size_t i = 0; i < s.dim(); ++i) all.emplace_back(s.row(i).begin(), s.row(i).end());
            const std::size_t sum = SubspaceHandle::span_of(f, n, all).dim();
            ++by[k + j - sum];
            return true;
          });
          th::BigInt total = 0;
          for (std::size_t l = 0; l <= n; ++l) {
            const auto nc = th::subspace_count(long(n), long(k), long(j), long(l), q);
            expect(nc == by[l], "N(n,k,j,l) disagrees with brute force");
            total += nc;
          }
          expect(total == th::gaussian_binomial(unsigned(n), unsigned(j), q), "partition identity fails");
        }
      }
    }
  return "n <= 5, q in {2,3}";
}

std::string connectivity_identities() {
  const auto pg = RepMatroid(projective_geometry(make_field(2), 2));
  expect(vertical_connectivity(pg).value.is_infinite(), "kappa(PG(1,2)) is finite");
  Rng rng(4242, 0);
  std::size_t checked = 0;
  for (int t = 0; t < 1000; ++t) {
    const unsigned q = rng.below(2) ? 3 : 2;
    const std::size_t n = 1 + rng.below(5), m = 3 + rng.below(6);
    const RepMatroid mt(random_uniform_matrix(n, m, make_field(q), rng));
    const ExtInt tt = tutte_connectivity(mt).value;  // cross-checks min(kappa, kappa*)
    const ExtInt kb = vertical_connectivity(mt, {}, VerticalMethod::Bipartitions).value;
    const ExtInt kf = vertical_connectivity(mt, {}, VerticalMethod::Flats).value;
    expect(kb == kf, "vertical connectivity: bipartitions and flats disagree");
    const auto u = is_uniform(mt);
    if (u && u->second >= 2 * u->first - 1) continue;
    expect(tt == std::min(kb, girth(mt)), "t != min(kappa, girth)");
    ++checked;
  }
  return std::to_string(checked) + " instances";
}

std::string dp_vs_limit() {
  std::ostringstream os;
  for (unsigned c : {1u, 2u}) {
    const auto dp = th::tau_crk_exact_pmf(60, 2, c);
    expect(std::fabs(dp.total() - 1) < 1e-9, "exact pmf does not sum to 1");
    double d = 0;
    for (long k = -60; k <= long(c); ++k) d = std::max(d, std::fabs(dp.at(60 + k) - th::limit_Cck(2, c, k)));
    expect(d <= 0.01, "sup-distance too large");
    os << "c=" << c << " sup " << d << "; ";
  }
  return os.str();
}

std::string critical_pg() {
  for (unsigned q : {2u, 3u})
    for (std::size_t n = 1; n <= 4; ++n)
      expect(critical_number(RepMatroid(projective_geometry(make_field(q), n))) == n, "chi(PG) != n");
  // adding a column raises chi by at most one, all F_2 matrices n <= 3, m <= 5 without loops
  const auto f = make_field(2);
  for (std::size_t n = 1; n <= 3; ++n)
    for (std::size_t m = 1; m <= 5; ++m)
      for (std::uint64_t b = 0; b < (std::uint64_t(1) << (n * m)); ++b) {
        const FqMatrix a = matrix_from_bits(f, n, m, b);
        bool loop = false;
        for (std::size_t j = 0; j < m; ++j) {
          bool z = true;
          for (auto e : a.column(j)) z = z && !e;
          loop = loop || z;
        }
        if (loop) continue;
        const std::size_t whole = critical_number(RepMatroid(a));
        const std::size_t part = critical_number(RepMatroid(delete_columns(a, {m - 1})));
        expect(whole == part || whole == part + 1, "critical number skipped a value");
      }
  return "PG(n-1,q) n <= 4 and the one-step property";
}

}  // namespace

std::vector<SelfCheckItem> run_selfcheck(const SelfCheckOptions& opts) {
  struct Suite {
    const char* name;
    bool oracle;
    std::function<std::string()> fn;
  };
  const std::vector<Suite> suites = {
      {"field axioms (q <= 64)", true, [&] { return field_axioms(opts.corrupt_field); }},
      {"rank law enumeration", true, rank_law},
      {"rank/kernel/contract/delete identities", true, rank_contract},
      {"incremental vs batch rank", false, incremental_rank},
      {"subspace enumeration counts", true, subspace_counts},
      {"subspace intersection counts", true, subspace_intersection},
      {"connectivity identities", false, connectivity_identities},
      {"exact pmf vs limit", false, dp_vs_limit},
      {"critical number", false, critical_pg},
  };
  std::vector<SelfCheckItem> out;
  for (const auto& s : suites) {
    if (opts.oracles_only && !s.oracle) continue;
    SelfCheckItem it;
    it.name = s.name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      it.detail = s.fn();
      it.pass = true;
    } catch (const std::exception& e) {
      it.detail = e.what();
      it.pass = false;
    }
    it.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(std::move(it));
  }
  return out;
}

}  // namespace fqm
