#pragma once

#include "fqm/matrix.hpp"
#include "fqm/rng.hpp"
#include "oracle.hpp"

inline oracle::Mat to_oracle(const fqm::FqMatrix& a) {
  oracle::Mat cols;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    oracle::Vec v;
    for (auto e : a.column(j)) v.push_back(e);
    cols.push_back(v);
  }
  return cols;
}

inline fqm::FqMatrix random_matrix(std::size_t n, std::size_t m, unsigned q, fqm::Rng& rng) {
  return fqm::random_uniform_matrix(n, m, fqm::make_field(q), rng);
}

// random matrix without zero columns
inline fqm::FqMatrix random_loopless(std::size_t n, std::size_t m, unsigned q, fqm::Rng& rng) {
  auto f = fqm::make_field(q);
  fqm::FqMatrix a(f, n, 0);
  while (a.cols() < m) {
    fqm::FqVector v(n);
    bool nz = false;
    for (auto& e : v) {
      e = fqm::Elem(rng.below(q));
      nz = nz || e;
    }
    if (nz) a.append_column(v);
  }
  return a;
}
