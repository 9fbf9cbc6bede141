#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fqm/budget.hpp"
#include "fqm/extint.hpp"
#include "fqm/matrix.hpp"
#include "fqm/ranker.hpp"
#include "fqm/subspace.hpp"

namespace fqm {

/// The column matroid M[A].
class RepMatroid {
 public:
  explicit RepMatroid(FqMatrix a);

  const FqMatrix& matrix() const { return a_; }
  const Field& field() const { return a_.field(); }
  const FieldPtr& field_ptr() const { return a_.field_ptr(); }
  std::size_t size() const { return a_.cols(); }
  std::size_t rank() const { return rank_; }
  std::size_t corank() const { return a_.cols() - rank_; }

 private:
  FqMatrix a_;
  std::size_t rank_;
};

enum class SeparationKind { Vertical, Cyclic, Tutte };

struct Separation {
  IndexSet part1, part2;
  SeparationKind kind = SeparationKind::Vertical;
  std::int64_t order = 0;
};

struct ConnectivityResult {
  ExtInt value = ExtInt::infinity();
  std::optional<Separation> witness;
};

std::size_t rank_of_subset(const RepMatroid& m, const IndexSet& s);
bool is_circuit(const RepMatroid& m, const IndexSet& s);
bool is_simple(const RepMatroid& m);

enum class SpectrumMethod { Auto, KernelSweep, Subsets };

ExtInt girth(const RepMatroid& m, const Budget& b = {}, SpectrumMethod how = SpectrumMethod::Auto);
/// Number of circuits of each length.
std::map<std::size_t, std::uint64_t> circuit_spectrum(const RepMatroid& m, const Budget& b = {},
                                                      SpectrumMethod how = SpectrumMethod::Auto);

enum class VerticalMethod { Auto, Bipartitions, Flats };

ConnectivityResult vertical_connectivity(const RepMatroid& m, const Budget& b = {},
                                         VerticalMethod how = VerticalMethod::Auto);
ConnectivityResult cyclic_connectivity(const RepMatroid& m, const Budget& b = {});
/// Direct search over Tutte separations, cross-checked against min(kappa, kappa*)
/// when |E| >= 3 (ConsistencyError on mismatch).
ConnectivityResult tutte_connectivity(const RepMatroid& m, const Budget& b = {});

/// Best separation of the given kind from a full rank table (unordered bipartitions).
struct ScanResult {
  std::int64_t order = -1;  // -1: none
  Mask part1 = 0;
};
ScanResult scan_bipartitions(const std::vector<std::uint8_t>& ranks, std::size_t m,
                             SeparationKind kind);
/// OpenMP version of scan_bipartitions; identical result.
ScanResult scan_bipartitions_parallel(const std::vector<std::uint8_t>& ranks, std::size_t m,
                                      SeparationKind kind);

/// (r, m) when M is the uniform matroid U_{r,m}.
std::optional<std::pair<std::size_t, std::size_t>> is_uniform(const RepMatroid& m);

enum class CriticalMethod { Auto, Bitmap, Dual };

/// Least k such that some (n-k)-dimensional subspace misses every column.
/// Throws LoopPresent when a column is zero.
std::size_t critical_number(const RepMatroid& m, const Budget& b = {},
                            CriticalMethod how = CriticalMethod::Auto);

/// Distinct nonzero vectors of F_q^n, with a bitmap when q^n is small.
class PointSet {
 public:
  PointSet(FieldPtr f, std::size_t n, std::uint64_t bitmap_limit = std::uint64_t{1} << 22);
  bool insert(std::span<const Elem> v);  // false if already present
  bool contains_index(std::uint64_t idx) const;
  bool has_bitmap() const { return !bits_.empty(); }
  const std::vector<FqVector>& points() const { return pts_; }
  std::size_t ambient() const { return n_; }
  const FieldPtr& field_ptr() const { return f_; }

 private:
  FieldPtr f_;
  std::size_t n_;
  std::vector<std::uint64_t> bits_;
  std::vector<FqVector> pts_;
  std::map<FqVector, bool> seen_;  // used without a bitmap
};

/// A (n-k)-dimensional subspace avoiding every point, if one exists.
std::optional<SubspaceHandle> find_avoiding_subspace(const PointSet& pts, std::size_t k,
                                                     const Budget& b = {},
                                                     CriticalMethod how = CriticalMethod::Auto);

struct MinorWitness {
  IndexSet contract, remove;
  /// image[i] = element of M playing the role of element i of N.
  IndexSet image;
};

/// Searches contraction sets and deletion sets of M for a copy of N (|E(M)| <= minor budget).
std::optional<MinorWitness> has_minor(const RepMatroid& m, const RepMatroid& n,
                                      const Budget& b = {});
/// Recomputes M/C\D and compares rank functions under the bijection.
bool verify_minor(const RepMatroid& m, const RepMatroid& n, const MinorWitness& w);
/// Isomorphism of two matroids given by rank tables over the same number of elements.
std::optional<IndexSet> isomorphism(const std::vector<std::uint8_t>& ra,
                                    const std::vector<std::uint8_t>& rb, std::size_t m);

/// Whether the columns of A (r rows) meet every point of PG(r-1, q).
bool contains_pg(const FqMatrix& a, std::size_t r);

/// Small catalog: "U12", "U23", "free:<r>", "PG:<r>".
RepMatroid catalog_matroid(const std::string& name, const FieldPtr& f);

}  // namespace fqm
