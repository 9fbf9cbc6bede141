#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fqm/budget.hpp"
#include "fqm/extint.hpp"
#include "fqm/matroid.hpp"
#include "fqm/rref.hpp"

namespace fqm {

struct ProcessOptions {
  bool track_transform = true;     // needed for first-circuit extraction
  bool keep_dependencies = false;  // every dependent column's dependency
};

struct ColumnReport {
  std::size_t step = 0;  // m after the append
  bool dependent = false;
  bool zero = false;
  std::size_t rank = 0, corank = 0;
  /// Support of the unique kernel generator, on the step the corank first reaches 1.
  std::optional<IndexSet> first_circuit;
  /// Dependency of this column when it was dependent and the transform is tracked.
  const Dependency* dependency = nullptr;
};

/// First step at which each tracked property held.
struct HittingTimes {
  std::map<std::size_t, std::size_t> crk;  // c -> tau_crk=c
  std::optional<std::size_t> first_circuit;
  std::optional<std::size_t> first_circuit_length;
  std::map<std::size_t, std::size_t> k_circ;
  std::map<std::size_t, std::size_t> k_conn;
  std::map<std::size_t, std::size_t> k_crt;
  std::map<std::string, std::size_t> minor;
  std::map<std::size_t, std::size_t> pg;
  std::optional<std::size_t> hamilton;
};

/// The column process A_1, A_2, ... over F_q^n driven by stream `stream` of `seed`.
class ProcessState {
 public:
  ProcessState(std::size_t n, FieldPtr f, std::uint64_t seed, std::uint64_t stream = 0,
               ProcessOptions opts = {});
  ~ProcessState();
  ProcessState(const ProcessState&) = delete;
  ProcessState& operator=(const ProcessState&) = delete;

  ColumnReport step();

  std::size_t n() const { return n_; }
  const Field& field() const { return *field_; }
  const FieldPtr& field_ptr() const { return field_; }
  std::size_t steps() const { return a_.cols(); }
  std::size_t rank() const { return rref_.rank(); }
  std::size_t corank() const { return rref_.corank(); }
  const FqMatrix& matrix() const { return a_; }
  std::span<const Elem> last_column() const { return a_.column(a_.cols() - 1); }
  const RrefState& rref() const { return rref_; }
  const std::vector<std::size_t>& corank_history() const { return history_; }
  HittingTimes& hits() { return hits_; }
  const HittingTimes& hits() const { return hits_; }
  const ProcessOptions& options() const { return opts_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  /// Writes "step m: rank r, corank c, tags" per step to `out` (nullptr disables).
  void set_trace(std::ostream* out) { trace_ = out; }
  /// Adds an event tag to the current step's trace line.
  void tag(const std::string& t);

 private:
  void flush_trace();

  std::size_t n_;
  FieldPtr field_;
  std::uint64_t seed_, stream_;
  ProcessOptions opts_;
  Rng rng_;
  FqMatrix a_;
  RrefState rref_;
  std::vector<std::size_t> history_;
  HittingTimes hits_;
  FqVector col_;
  std::ostream* trace_ = nullptr;
  std::vector<std::string> tags_;
  bool pending_ = false;
};

/// Observes every step of a process; attach before the first step.
class Tracker {
 public:
  virtual ~Tracker() = default;
  virtual void observe(ProcessState& st, const ColumnReport& rep) = 0;
  virtual bool done() const = 0;
};

/// Steps until every tracker is done or `max_steps` columns exist; returns the step count.
std::size_t run_trackers(ProcessState& st, std::span<Tracker* const> trackers,
                         std::size_t max_steps);

class CorankTracker : public Tracker {
 public:
  explicit CorankTracker(std::size_t c) : c_(c) {}
  void observe(ProcessState& st, const ColumnReport& rep) override;
  bool done() const override { return hit_.has_value(); }
  std::optional<std::size_t> hit() const { return hit_; }

 private:
  std::size_t c_;
  std::optional<std::size_t> hit_;
};

/// First step with a circuit of length k; k = n records the Hamilton time too.
class KCircuitTracker : public Tracker {
 public:
  KCircuitTracker(std::size_t k, Budget b = {}) : k_(k), budget_(b) {}
  void observe(ProcessState& st, const ColumnReport& rep) override;
  bool done() const override { return hit_.has_value(); }
  std::optional<std::size_t> hit() const { return hit_; }

 private:
  bool sweep_binary(const ProcessState& st, const Dependency& d);
  bool sweep_generic(const ProcessState& st, const Dependency& d);

  std::size_t k_;
  Budget budget_;
  std::optional<std::size_t> hit_;
  std::vector<Mask> kmask_;
  std::vector<FqVector> kvec_;
  std::vector<std::uint64_t> packed_;  // binary columns
};

/// Vertical connectivity at every step; first step with kappa >= k.
class ConnectivityTracker : public Tracker {
 public:
  ConnectivityTracker(std::size_t k, Budget b = {}, bool after_full_rank = false)
      : k_(k), budget_(b), full_rank_only_(after_full_rank) {}
  void observe(ProcessState& st, const ColumnReport& rep) override;
  bool done() const override { return hit_.has_value(); }
  std::optional<std::size_t> hit() const { return hit_; }

 private:
  std::size_t k_;
  Budget budget_;
  bool full_rank_only_;
  std::optional<std::size_t> hit_;
};

/// kappa along the process from the first full-rank step up to a step cap,
/// with a record of every decrease.
class KappaMonitor : public Tracker {
 public:
  KappaMonitor(std::size_t max_step, Budget b = {}) : max_step_(max_step), budget_(b) {}
  void observe(ProcessState& st, const ColumnReport& rep) override;
  bool done() const override { return finished_; }
  const std::vector<std::pair<std::size_t, ExtInt>>& trajectory() const { return traj_; }
  const std::vector<std::size_t>& decreases() const { return drops_; }

 private:
  std::size_t max_step_;
  Budget budget_;
  bool finished_ = false;
  std::vector<std::pair<std::size_t, ExtInt>> traj_;
  std::vector<std::size_t> drops_;
};

/// Critical number of the loopless part of M[A_m], rechecked only when a new
/// column falls in the current witness subspace. Zero columns are skipped.
class CriticalTracker : public Tracker {
 public:
  /// Done once chi reaches `target` (default n).
  explicit CriticalTracker(std::size_t target = 0, Budget b = {}) : target_(target), budget_(b) {}
  void observe(ProcessState& st, const ColumnReport& rep) override;
  bool done() const override { return done_; }
  std::size_t chi() const { return chi_; }
  /// (step, chi) at every change.
  const std::vector<std::pair<std::size_t, std::size_t>>& changes() const { return changes_; }
  /// Steps where chi rose by more than one.
  const std::vector<std::size_t>& skips() const { return skips_; }
  std::size_t loops() const { return loops_; }

 private:
  std::size_t target_;
  Budget budget_;
  bool done_ = false;
  std::size_t chi_ = 0;
  std::size_t loops_ = 0;
  std::optional<PointSet> pts_;
  std::optional<SubspaceHandle> witness_;
  std::vector<std::pair<std::size_t, std::size_t>> changes_;
  std::vector<std::size_t> skips_;
};

/// First step with N as a minor. Free matroids, U_{1,2} and U_{2,3} use
/// rank/point-count criteria; anything else runs the general minor search.
class MinorTracker : public Tracker {
 public:
  MinorTracker(RepMatroid target, std::string name, Budget b = {});
  void observe(ProcessState& st, const ColumnReport& rep) override;
  bool done() const override { return hit_.has_value(); }
  std::optional<std::size_t> hit() const { return hit_; }

 private:
  enum class Kind { Free, U12, U23, General };
  RepMatroid target_;
  std::string name_;
  Budget budget_;
  Kind kind_ = Kind::General;
  std::optional<std::size_t> hit_;
  std::size_t nonzero_ = 0;
  std::optional<PointSet> points_;
};

std::size_t run_until_corank(ProcessState& st, std::size_t c);
/// (step, length) of the first circuit.
std::pair<std::size_t, std::size_t> track_first_circuit(ProcessState& st);
std::size_t track_k_circuit(ProcessState& st, std::size_t k, const Budget& b = {},
                            std::size_t max_steps = 1'000'000);
std::size_t track_connectivity(ProcessState& st, std::size_t k, const Budget& b = {},
                               bool after_full_rank = false, std::size_t max_steps = 64);
/// tau_k-crt: first step with chi = k + 1.
std::size_t track_critical(ProcessState& st, std::size_t k, const Budget& b = {},
                           std::size_t max_steps = 1'000'000);
std::size_t track_minor(ProcessState& st, const RepMatroid& target, const std::string& name,
                        const Budget& b = {}, std::size_t max_steps = 1'000'000);

enum class Model { M1, M2, M3 };

struct ModelSample {
  Model model = Model::M1;
  std::size_t n = 0;
  unsigned q = 0;
  std::size_t m = 0;
  double p = 0.0;
  std::vector<std::uint64_t> points;  // projective indices (M2, M3)
  FqMatrix matrix;
};

/// M1: uniform n x m matrix.
ModelSample sample_m1(std::size_t n, const FieldPtr& f, std::size_t m, Rng& rng);
/// M2: uniform m-subset of PG(n-1, q).
ModelSample sample_m2(std::size_t n, const FieldPtr& f, std::size_t m, Rng& rng);
/// M3: each point of PG(n-1, q) independently with probability p.
ModelSample sample_m3(std::size_t n, const FieldPtr& f, double p, Rng& rng);
/// Dispatch on the model tag; `param` is m for M1/M2 and p for M3.
ModelSample sample_pg_model(Model model, std::size_t n, const FieldPtr& f, double param, Rng& rng);

}  // namespace fqm
