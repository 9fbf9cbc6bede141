#include <algorithm>
#include <unordered_set>

#include "fqm/errors.hpp"
#include "fqm/process.hpp"

namespace fqm {

ProcessState::ProcessState(std::size_t n, FieldPtr f, std::uint64_t seed, std::uint64_t stream,
                           ProcessOptions opts)
    : n_(n),
      field_(f),
      seed_(seed),
      stream_(stream),
      opts_(opts),
      rng_(seed, stream),
      a_(f, n, 0),
      rref_(f, n, opts.track_transform, opts.keep_dependencies),
      col_(n, 0) {
  if (n == 0) throw InvalidParam("process dimension must be positive");
}

ProcessState::~ProcessState() {
  try {
    flush_trace();
  } catch (...) {
  }
}

void ProcessState::tag(const std::string& t) {
  if (trace_) tags_.push_back(t);
}

void ProcessState::flush_trace() {
  if (!trace_ || !pending_) return;
  *trace_ << "step " << steps() << ": rank " << rank() << ", corank " << corank() << ",";
  if (tags_.empty()) *trace_ << " -";
  for (std::size_t i = 0; i < tags_.size(); ++i) *trace_ << (i ? "," : "") << ' ' << tags_[i];
  *trace_ << '\n';
  tags_.clear();
  pending_ = false;
}

ColumnReport ProcessState::step() {
  flush_trace();
  const unsigned q = field_->order();
  if (q == 2) {
    for (std::size_t i = 0; i < n_; i += 64) {
      std::uint64_t w = rng_.next_u64();
      for (std::size_t j = i; j < std::min(n_, i + 64); ++j, w >>= 1) col_[j] = Elem(w & 1);
    }
  } else {
    for (std::size_t i = 0; i < n_; ++i) col_[i] = Elem(rng_.below(q));
  }
  a_.append_column(col_);
  const std::size_t before = rref_.corank();
  const bool indep = rref_.insert(col_);

  ColumnReport rep;
  rep.step = steps();
  rep.dependent = !indep;
  rep.zero = std::all_of(col_.begin(), col_.end(), [](Elem x) { return x == 0; });
  rep.rank = rref_.rank();
  rep.corank = rref_.corank();
  if (rep.corank != before + (indep ? 0 : 1))
    throw ConsistencyError("corank moved by more than one step");
  history_.push_back(rep.corank);
  if (trace_) pending_ = true;
  if (rep.zero) tag("loop");
  if (rep.dependent) {
    hits_.crk.emplace(rep.corank, rep.step);
    tag("crk=" + std::to_string(rep.corank));
    if (opts_.track_transform) {
      rep.dependency = &rref_.last_dependency();
      if (rep.corank == 1) {
        rep.first_circuit = rep.dependency->support();
        hits_.first_circuit = rep.step;
        hits_.first_circuit_length = rep.first_circuit->size();
        tag("first-circuit=" + std::to_string(rep.first_circuit->size()));
      }
    }
  }
  if (rep.rank == n_ && indep) tag("full-rank");
  return rep;
}

std::size_t run_trackers(ProcessState& st, std::span<Tracker* const> trackers,
                         std::size_t max_steps) {
  auto all_done = [&] {
    return std::all_of(trackers.begin(), trackers.end(), [](Tracker* t) { return t->done(); });
  };
  while (!all_done() && st.steps() < max_steps) {
    const ColumnReport rep = st.step();
    for (Tracker* t : trackers)
      if (!t->done()) t->observe(st, rep);
  }
  return st.steps();
}

ModelSample sample_m1(std::size_t n, const FieldPtr& f, std::size_t m, Rng& rng) {
  ModelSample s;
  s.model = Model::M1;
  s.n = n;
  s.q = f->order();
  s.m = m;
  s.matrix = random_uniform_matrix(n, m, f, rng);
  return s;
}

ModelSample sample_m2(std::size_t n, const FieldPtr& f, std::size_t m, Rng& rng) {
  const std::uint64_t total = projective_count(n, f->order());
  if (m > total) throw InvalidParam("M2 needs m <= [n]_q");
  ModelSample s;
  s.model = Model::M2;
  s.n = n;
  s.q = f->order();
  s.m = m;
  // Floyd's subset sampling
  std::unordered_set<std::uint64_t> chosen;
  for (std::uint64_t j = total - m; j < total; ++j) {
    const std::uint64_t t = rng.below64(j + 1);
    if (!chosen.insert(t).second) chosen.insert(j);
  }
  s.points.assign(chosen.begin(), chosen.end());
  std::sort(s.points.begin(), s.points.end());
  s.matrix = FqMatrix(f, n, 0);
  for (std::uint64_t p : s.points) s.matrix.append_column(projective_point(p, n, f->order()));
  return s;
}

ModelSample sample_m3(std::size_t n, const FieldPtr& f, double p, Rng& rng) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidParam("M3 needs p in [0, 1]");
  const std::uint64_t total = projective_count(n, f->order());
  if (total > (std::uint64_t(1) << 26)) throw InvalidParam("PG(n-1, q) too large for M3");
  ModelSample s;
  s.model = Model::M3;
  s.n = n;
  s.q = f->order();
  s.p = p;
  s.matrix = FqMatrix(f, n, 0);
  for (std::uint64_t i = 0; i < total; ++i)
    if (rng.uniform01() < p) {
      s.points.push_back(i);
      s.matrix.append_column(projective_point(i, n, f->order()));
    }
  s.m = s.points.size();
  return s;
}

ModelSample sample_pg_model(Model model, std::size_t n, const FieldPtr& f, double param, Rng& rng) {
  switch (model) {
    case Model::M1:
    case Model::M2:
      if (param < 0 || param != double(std::size_t(param)))
        throw InvalidParam("m must be a non-negative integer");
      return model == Model::M1 ? sample_m1(n, f, std::size_t(param), rng)
                                : sample_m2(n, f, std::size_t(param), rng);
    case Model::M3:
      return sample_m3(n, f, param, rng);
  }
  throw InvalidParam("unknown model");
}

}  // namespace fqm
