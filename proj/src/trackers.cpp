#include <algorithm>
#include <bit>

#include "fqm/errors.hpp"
#include "fqm/process.hpp"

namespace fqm {

namespace {

std::size_t packed_rank(const std::vector<std::uint64_t>& cols, Mask s) {
  std::uint64_t slot[64] = {};
  std::size_t r = 0;
  for (; s; s &= s - 1) {
    std::uint64_t v = cols[std::size_t(std::countr_zero(s))];
    while (v) {
      const int h = 63 - std::countl_zero(v);
      if (!slot[h]) {
        slot[h] = v;
        ++r;
        break;
      }
      v ^= slot[h];
    }
  }
  return r;
}

void require_fresh(const ProcessState& st, const char* what) {
  if (st.steps() != 0)
    throw InvalidParam(std::string(what) + " must be attached before the first step");
}

}  // namespace

void CorankTracker::observe(ProcessState& st, const ColumnReport& rep) {
  if (rep.corank >= c_) hit_ = st.hits().crk.at(c_);
}

void KCircuitTracker::observe(ProcessState& st, const ColumnReport& rep) {
  const bool binary = st.field().order() == 2 && st.n() <= 64;
  if (binary) {
    std::uint64_t w = 0;
    auto col = st.last_column();
    for (std::size_t i = 0; i < col.size(); ++i)
      if (col[i]) w |= std::uint64_t(1) << i;
    packed_.push_back(w);
  }
  bool found = false;
  if (k_ == 1) {
    found = rep.zero;
  } else if (rep.dependent) {
    if (!rep.dependency) throw InvalidParam("k-circuit tracking needs the row transform");
    if (binary && rep.step <= 64)
      found = sweep_binary(st, *rep.dependency);
    else
      found = sweep_generic(st, *rep.dependency);
  }
  if (found) {
    hit_ = rep.step;
    st.hits().k_circ.emplace(k_, rep.step);
    if (k_ == st.n()) st.hits().hamilton = rep.step;
    st.tag(std::to_string(k_) + "-circuit");
  }
}

bool KCircuitTracker::sweep_binary(const ProcessState&, const Dependency& d) {
  Mask x = 0;
  for (std::size_t i : d.support()) x |= Mask(1) << i;
  const std::size_t dim = kmask_.size();
  if (dim >= 63 || (std::uint64_t(1) << dim) > budget_.kernel_sweep)
    throw BudgetExceeded("k-circuit sweep exceeds the kernel budget");
  bool found = false;
  auto check = [&](Mask s) {
    if (std::size_t(std::popcount(s)) == k_ && packed_rank(packed_, s) + 1 == k_) found = true;
  };
  check(x);
  Mask y = x;
  const std::uint64_t total = std::uint64_t(1) << dim;
  for (std::uint64_t g = 1; g < total && !found; ++g) {
    y ^= kmask_[std::size_t(std::countr_zero(g))];
    check(y);
  }
  kmask_.push_back(x);
  FqVector v(64, 0);
  for (std::size_t i : d.support()) v[i] = 1;
  kvec_.push_back(std::move(v));
  return found;
}

bool KCircuitTracker::sweep_generic(const ProcessState& st, const Dependency& d) {
  const Field& f = st.field();
  const std::size_t m = st.steps();
  for (auto& v : kvec_) v.resize(std::max(v.size(), m), 0);
  FqVector x = d.kernel_vector(f, m);
  const std::size_t dim = kvec_.size();
  std::uint64_t total = 1;
  for (std::size_t i = 0; i < dim; ++i) {
    if (total > budget_.kernel_sweep / f.order())
      throw BudgetExceeded("k-circuit sweep exceeds the kernel budget");
    total *= f.order();
  }
  const FqMatrix& a = st.matrix();
  auto check = [&](const FqVector& y) {
    std::size_t w = 0;
    IndexSet s;
    for (std::size_t i = 0; i < m; ++i)
      if (y[i]) {
        ++w;
        s.push_back(i);
      }
    return w == k_ && rank(a.select_columns(s)) + 1 == k_;
  };
  bool found = check(x);
  std::vector<Elem> coef(dim, 0);
  FqVector y = x;
  while (!found) {
    std::size_t i = 0;
    for (; i < dim; ++i) {
      const Elem next = coef[i] + 1u < f.order() ? Elem(coef[i] + 1) : Elem(0);
      axpy(f, f.sub(next, coef[i]), kvec_[i].data(), y.data(), m);
      coef[i] = next;
      if (next != 0) break;
    }
    if (i == dim) break;
    found = check(y);
  }
  kvec_.push_back(std::move(x));
  Mask mk = 0;
  if (m <= 64)
    for (std::size_t i = 0; i < m; ++i)
      if (kvec_.back()[i]) mk |= Mask(1) << i;
  kmask_.push_back(mk);
  return found;
}

void ConnectivityTracker::observe(ProcessState& st, const ColumnReport& rep) {
  if (full_rank_only_ && rep.rank < st.n()) return;
  const ExtInt kappa = vertical_connectivity(RepMatroid(st.matrix()), budget_).value;
  if (kappa >= ExtInt(std::int64_t(k_))) {
    hit_ = rep.step;
    st.hits().k_conn.emplace(k_, rep.step);
    st.tag("kappa>=" + std::to_string(k_));
  }
}

void KappaMonitor::observe(ProcessState& st, const ColumnReport& rep) {
  if (rep.step >= max_step_) finished_ = true;
  if (rep.rank < st.n()) return;
  const ExtInt kappa = vertical_connectivity(RepMatroid(st.matrix()), budget_).value;
  if (!traj_.empty() && kappa < traj_.back().second) {
    drops_.push_back(rep.step);
    st.tag("kappa-drop");
  }
  traj_.emplace_back(rep.step, kappa);
}

void CriticalTracker::observe(ProcessState& st, const ColumnReport& rep) {
  const std::size_t n = st.n();
  const std::size_t target = target_ ? target_ : n;
  if (!pts_) pts_.emplace(st.field_ptr(), n);
  if (rep.zero) {
    ++loops_;
    return;
  }
  if (!pts_->insert(st.last_column())) return;
  if (chi_ > 0 && !witness_->contains(st.last_column())) return;
  const std::size_t old = chi_;
  std::size_t k = std::max<std::size_t>(chi_, 1);
  for (;; ++k) {
    auto w = find_avoiding_subspace(*pts_, k, budget_);
    if (w) {
      witness_ = std::move(w);
      break;
    }
  }
  if (k != old) {
    chi_ = k;
    changes_.emplace_back(rep.step, k);
    if (old > 0 && k > old + 1) skips_.push_back(rep.step);
    for (std::size_t j = old + 1; j <= k; ++j) st.hits().k_crt.emplace(j - 1, rep.step);
    st.tag("chi=" + std::to_string(k));
  }
  if (chi_ >= target) done_ = true;
}

MinorTracker::MinorTracker(RepMatroid target, std::string name, Budget b)
    : target_(std::move(target)), name_(std::move(name)), budget_(b) {
  if (target_.size() <= 20) {
    if (auto u = is_uniform(target_)) {
      if (u->first == u->second)
        kind_ = Kind::Free;
      else if (u->first == 1 && u->second == 2)
        kind_ = Kind::U12;
      else if (u->first == 2 && u->second == 3)
        kind_ = Kind::U23;
    }
  }
}

void MinorTracker::observe(ProcessState& st, const ColumnReport& rep) {
  bool found = false;
  switch (kind_) {
    case Kind::Free:
      found = rep.rank >= target_.rank();
      break;
    case Kind::U12:
      if (!rep.zero) ++nonzero_;
      found = nonzero_ > rep.rank;
      break;
    case Kind::U23: {
      if (!points_) points_.emplace(st.field_ptr(), st.n());
      if (!rep.zero) {
        FqVector v(st.last_column().begin(), st.last_column().end());
        normalize_projective(st.field(), v);
        points_->insert(v);
      }
      found = points_->points().size() > rep.rank;
      break;
    }
    case Kind::General:
      if (rep.corank < target_.corank() || rep.rank < target_.rank()) return;
      found = has_minor(RepMatroid(st.matrix()), target_, budget_).has_value();
      break;
  }
  if (found) {
    hit_ = rep.step;
    st.hits().minor.emplace(name_, rep.step);
    if (name_.rfind("PG:", 0) == 0) st.hits().pg.emplace(std::stoul(name_.substr(3)), rep.step);
    st.tag("minor " + name_);
  }
}

std::size_t run_until_corank(ProcessState& st, std::size_t c) {
  if (c == 0) throw InvalidParam("corank target must be at least 1");
  while (st.corank() < c) st.step();
  return st.hits().crk.at(c);
}

std::pair<std::size_t, std::size_t> track_first_circuit(ProcessState& st) {
  if (!st.options().track_transform) throw InvalidParam("first circuit needs the row transform");
  while (!st.hits().first_circuit) st.step();
  return {*st.hits().first_circuit, *st.hits().first_circuit_length};
}

template <class T>
static std::size_t run_one(ProcessState& st, T& tr, std::size_t max_steps, const char* what) {
  Tracker* list[] = {&tr};
  run_trackers(st, list, max_steps);
  if (!tr.done()) throw BudgetExceeded(std::string(what) + " not reached within the step cap");
  return st.steps();
}

std::size_t track_k_circuit(ProcessState& st, std::size_t k, const Budget& b,
                            std::size_t max_steps) {
  if (auto it = st.hits().k_circ.find(k); it != st.hits().k_circ.end()) return it->second;
  require_fresh(st, "k-circuit tracking");
  KCircuitTracker tr(k, b);
  return run_one(st, tr, max_steps, "k-circuit");
}

std::size_t track_connectivity(ProcessState& st, std::size_t k, const Budget& b,
                               bool after_full_rank, std::size_t max_steps) {
  if (auto it = st.hits().k_conn.find(k); it != st.hits().k_conn.end()) return it->second;
  require_fresh(st, "connectivity tracking");
  ConnectivityTracker tr(k, b, after_full_rank);
  return run_one(st, tr, max_steps, "connectivity");
}

std::size_t track_critical(ProcessState& st, std::size_t k, const Budget& b,
                           std::size_t max_steps) {
  if (auto it = st.hits().k_crt.find(k); it != st.hits().k_crt.end()) return it->second;
  require_fresh(st, "critical-number tracking");
  if (k + 1 > st.n()) throw InvalidParam("critical number cannot exceed n");
  CriticalTracker tr(k + 1, b);
  run_one(st, tr, max_steps, "critical number");
  return st.hits().k_crt.at(k);
}

std::size_t track_minor(ProcessState& st, const RepMatroid& target, const std::string& name,
                        const Budget& b, std::size_t max_steps) {
  if (auto it = st.hits().minor.find(name); it != st.hits().minor.end()) return it->second;
  require_fresh(st, "minor tracking");
  MinorTracker tr(target, name, b);
  return run_one(st, tr, max_steps, "minor");
}

}  // namespace fqm
