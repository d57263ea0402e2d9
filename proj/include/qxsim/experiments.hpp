// Copyright 2026 The qxsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QXSIM_EXPERIMENTS_HPP_
#define QXSIM_EXPERIMENTS_HPP_

#include <cstdlib>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "qxsim/born.hpp"
#include "qxsim/fsp.hpp"
#include "qxsim/genpost.hpp"
#include "qxsim/nonlinear.hpp"
#include "qxsim/table.hpp"

namespace qxsim::cli {

struct ExperimentConfig {
  std::string name;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
};

struct ParamSpec {
  std::string name;
  std::string default_value;
  std::string description;
};

struct ExperimentInfo {
  std::string name;
  std::string description;
  std::vector<ParamSpec> params;
};

/// Worker cap: QXSIM_THREADS when set, hardware concurrency otherwise.
inline unsigned worker_count() {
  if (const char* env = std::getenv("QXSIM_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

/// Fans trial indices [0, n) out to the worker pool. Each trial must be a
/// pure function of its index (seeded as Rng(master, index)) writing into a
/// preallocated slot, so results never depend on the thread count.
inline void parallel_trials(std::size_t n, const std::function<void(std::size_t)>& fn) {
  unsigned workers = worker_count();
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  workers = std::min<unsigned>(workers, static_cast<unsigned>(n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

namespace detail {

class Params {
 public:
  Params(const ExperimentConfig& cfg, const ExperimentInfo& info) {
    for (const auto& spec : info.params) values_[spec.name] = spec.default_value;
    for (const auto& [key, val] : cfg.params) {
      if (!values_.count(key)) fail(Errc::BadParam, "unknown parameter '" + key + "'");
      values_[key] = val;
    }
  }

  double real(const std::string& key) const {
    const std::string& s = at(key);
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
      fail(Errc::BadParam, "parameter '" + key + "' is not a number: " + s);
    return v;
  }

  std::int64_t integer(const std::string& key) const {
    const std::string& s = at(key);
    char* end = nullptr;
    long long v = std::strtoll(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
      fail(Errc::BadParam, "parameter '" + key + "' is not an integer: " + s);
    return v;
  }

  const std::map<std::string, std::string>& map() const { return values_; }

 private:
  const std::string& at(const std::string& key) const {
    auto it = values_.find(key);
    if (it == values_.end()) fail(Errc::BadParam, "unknown parameter '" + key + "'");
    return it->second;
  }
  std::map<std::string, std::string> values_;
};

inline ResultTable new_table(const ExperimentConfig& cfg, const Params& p,
                             std::vector<std::string> columns) {
  ResultTable t;
  t.experiment = cfg.name;
  t.params = p.map();
  t.seed = cfg.seed;
  t.columns = std::move(columns);
  return t;
}

// --- individual experiments -------------------------------------------------

inline ResultTable run_fsp_capacity(const ExperimentConfig& cfg,
                                    const ExperimentInfo& info) {
  Params p(cfg, info);
  double lo = p.real("kappa_min"), hi = p.real("kappa_max");
  std::int64_t steps = p.integer("steps");
  if (steps < 1 || hi < lo) fail(Errc::BadParam, "bad kappa sweep: steps");
  ResultTable t = new_table(cfg, p, {"kappa", "eps1", "capacity", "bound_3_8ln2"});
  for (std::int64_t i = 0; i < steps; ++i) {
    double kappa = (steps == 1) ? lo : lo + (hi - lo) * double(i) / double(steps - 1);
    auto m = fsp::diag_map({1.0, kappa});
    auto ch = fsp::signal_channel(m, fsp::SignalDirection::AliceToBob);
    t.add_row({kappa, ch.eps1, channels::capacity_closed_form(ch),
               fsp::fsp_capacity_bound(kappa - 1.0)});
  }
  return t;
}

inline ResultTable run_fsp_search(const ExperimentConfig& cfg,
                                  const ExperimentInfo& info) {
  Params p(cfg, info);
  int n = static_cast<int>(p.integer("n"));
  double kappa = p.real("kappa");
  std::size_t runs = static_cast<std::size_t>(p.integer("runs"));
  // Validate before the parallel fan-out: worker threads must not throw.
  if (n < 2 || n > 40) fail(Errc::BadParam, "bad parameter: n (need 2..40)");
  if (!(kappa > 1.0 + 1e-12))
    fail(Errc::BadParam, "bad parameter: kappa (need kappa > 1)");
  if (runs < 1) fail(Errc::BadParam, "bad parameter: runs");
  auto m = fsp::diag_map({1.0, kappa});
  struct Row {
    bool has_solution;
    bool decided_one;
    int applications;
    int queries;
  };
  std::vector<Row> rows(runs);
  parallel_trials(runs, [&](std::size_t r) {
    Rng rng(cfg.seed, r);
    SearchInstance inst;
    inst.n_bits = n;
    if (r % 2 == 1) inst.marked = r;
    auto run = fsp::fsp_search(inst, m, rng);
    rows[r] = Row{inst.marked.has_value(),
                  run.decision == SearchDecision::OneSolution,
                  run.map_applications, inst.queries};
  });
  ResultTable t = new_table(cfg, p, {"run", "has_solution", "decided_one_solution",
                                     "correct", "map_applications", "oracle_queries"});
  for (std::size_t r = 0; r < runs; ++r) {
    t.add_row({std::int64_t(r), std::int64_t(rows[r].has_solution),
               std::int64_t(rows[r].decided_one),
               std::int64_t(rows[r].has_solution == rows[r].decided_one),
               std::int64_t(rows[r].applications), std::int64_t(rows[r].queries)});
  }
  return t;
}

inline ResultTable run_bbbv(const ExperimentConfig& cfg, const ExperimentInfo& info) {
  Params p(cfg, info);
  std::size_t n_items = static_cast<std::size_t>(p.integer("n_items"));
  std::size_t q = static_cast<std::size_t>(p.integer("queries"));
  double map_kappa = p.real("map_kappa");
  std::int64_t map_step = p.integer("map_step");
  fsp::TraceProgram prog = fsp::grover_program(n_items, q);
  if (map_kappa > 1.0 && q > 0) {
    rvector_t d(n_items, 1.0);
    d[0] = map_kappa;
    std::size_t step =
        std::min<std::size_t>(static_cast<std::size_t>(std::max<std::int64_t>(map_step, 0)), q - 1);
    prog.segments[step].push_back(fsp::TraceOp(fsp::diag_map(d)));
  }
  auto trace = fsp::run_trace(prog);
  auto hq = fsp::hybrid_quantities(trace);
  double succ = fsp::trace_success_probability(trace);
  ResultTable t = new_table(cfg, p, {"k", "c_k", "d_k", "r_k", "success_prob", "eta_n"});
  for (std::size_t k = 0; k <= q; ++k)
    t.add_row({std::int64_t(k), hq.c[k], hq.d[k], hq.r[k], succ,
               fsp::eta() * double(n_items)});
  return t;
}

inline ResultTable run_born_gadget(const ExperimentConfig& cfg,
                                   const ExperimentInfo& info) {
  Params p(cfg, info);
  auto model = born::make_model(p.real("delta"));
  int n = static_cast<int>(p.integer("n"));
  std::size_t trials = static_cast<std::size_t>(p.integer("trials"));
  if (model.delta == 0.0) fail(Errc::BadParam, "bad parameter: delta (need nonzero)");
  if (n < 1 || n > 60) fail(Errc::BadParam, "bad parameter: n (need 1..60)");
  if (trials < 1) fail(Errc::BadParam, "bad parameter: trials");
  std::vector<born::TeleportRun> runs(trials);
  parallel_trials(trials, [&](std::size_t t) {
    Rng rng(cfg.seed, t);
    runs[t] = born::teleport_signal(model, n, rng);
  });
  ResultTable t = new_table(cfg, p, {"trial", "fidelity", "ancilla_k", "leakage"});
  for (std::size_t i = 0; i < trials; ++i)
    t.add_row({std::int64_t(i), runs[i].fidelity, std::int64_t(runs[i].ancilla_k),
               runs[i].leakage});
  return t;
}

inline ResultTable run_born_bounds(const ExperimentConfig& cfg,
                                   const ExperimentInfo& info) {
  Params p(cfg, info);
  std::int64_t n_items = p.integer("n_items");
  int m_qubits = static_cast<int>(p.integer("m_qubits"));
  int n_qubits = static_cast<int>(p.integer("n_qubits"));
  ResultTable t = new_table(
      cfg, p, {"quantity", "q", "n_items", "m_qubits", "epsilon", "n_qubits", "value"});
  double root = std::sqrt(double(n_items));
  std::vector<std::int64_t> qs{0, std::int64_t(root / 24.0),
                               std::int64_t(root / 12.0), std::int64_t(root / 6.0)};
  for (auto q : qs)
    t.add_row({std::string("search"), q, n_items, std::int64_t(m_qubits), 0.0,
               std::int64_t(0), born::delta_bound_from_search(q, n_items, m_qubits)});
  for (double eps : {0.05, 0.1, 0.25, 0.5, 1.0})
    t.add_row({std::string("signaling"), std::int64_t(0), std::int64_t(0),
               std::int64_t(0), eps, std::int64_t(n_qubits),
               born::delta_bound_from_signaling(eps, n_qubits)});
  return t;
}

inline ResultTable run_clone_search(const ExperimentConfig& cfg,
                                    const ExperimentInfo& info) {
  Params p(cfg, info);
  int n = static_cast<int>(p.integer("n"));
  std::size_t trials = static_cast<std::size_t>(p.integer("trials"));
  if (n < 2 || n > 24) fail(Errc::BadParam, "bad parameter: n (need 2..24)");
  if (trials < 1) fail(Errc::BadParam, "bad parameter: trials");
  struct Row {
    bool correct;
    int iterations;
    int queries;
  };
  std::vector<Row> rows(trials);
  parallel_trials(trials, [&](std::size_t i) {
    Rng rng(cfg.seed, i);
    SearchInstance inst;
    inst.n_bits = n;
    if (i % 2 == 1) inst.marked = i;
    auto run = nonlinear::clone_search(inst, rng);
    rows[i] = Row{(run.decision == SearchDecision::OneSolution) ==
                      inst.marked.has_value(),
                  run.iterations, inst.queries};
  });
  std::int64_t successes = 0, max_it = 0;
  double mean_it = 0.0;
  for (const auto& r : rows) {
    successes += r.correct;
    max_it = std::max<std::int64_t>(max_it, r.iterations);
    mean_it += r.iterations;
  }
  mean_it /= double(trials);
  ResultTable t = new_table(cfg, p,
                            {"n", "trials", "successes", "success_rate",
                             "max_iterations", "mean_iterations", "queries_per_trial"});
  t.add_row({std::int64_t(n), std::int64_t(trials), successes,
             double(successes) / double(trials), max_it, mean_it, std::int64_t(1)});
  return t;
}

inline ResultTable run_clone_signal(const ExperimentConfig& cfg,
                                    const ExperimentInfo& info) {
  Params p(cfg, info);
  int k = static_cast<int>(p.integer("k"));
  int trials = static_cast<int>(p.integer("trials"));
  Rng rng(cfg.seed, 0);
  auto res = nonlinear::clone_signal(k, trials, rng);
  double expected = std::exp2(1.0 - k);
  double sigma = std::sqrt(expected * (1.0 - expected) / double(trials));
  double z = sigma > 0.0 ? (res.unmeasured_all_equal_freq - expected) / sigma : 0.0;
  ResultTable t = new_table(cfg, p,
                            {"k", "trials", "measured_all_equal_freq",
                             "unmeasured_all_equal_freq", "expected_freq", "z_score"});
  t.add_row({std::int64_t(k), std::int64_t(trials), res.measured_all_equal_freq,
             res.unmeasured_all_equal_freq, expected, z});
  return t;
}

inline ResultTable run_haar_overlap(const ExperimentConfig& cfg,
                                    const ExperimentInfo& info) {
  Params p(cfg, info);
  int n = static_cast<int>(p.integer("n"));
  int samples = static_cast<int>(p.integer("samples"));
  Rng rng(cfg.seed, 0);
  auto res = genpost::haar_rms_overlap(n, samples, rng);
  double z = res.std_error > 0.0 ? (res.mc_estimate - res.exact) / res.std_error : 0.0;
  ResultTable t = new_table(
      cfg, p, {"n", "n_dim", "samples", "mc_estimate", "exact", "std_error", "z_score"});
  t.add_row({std::int64_t(n), std::int64_t(1) << n, std::int64_t(samples),
             res.mc_estimate, res.exact, res.std_error, z});
  return t;
}

inline ResultTable run_nlamp(const ExperimentConfig& cfg, const ExperimentInfo& info) {
  Params p(cfg, info);
  double kappa = p.real("kappa");
  int initial_exp = static_cast<int>(p.integer("initial_exp"));
  double target = p.real("target");
  int samples = static_cast<int>(p.integer("samples"));
  auto m = fsp::diag_map({1.0, kappa});
  nonlinear::NonlinearMap s{2, [m](const cvector_t& v) {
                              return fsp::apply_map_raw(m, v);
                            }};
  Rng rng(cfg.seed, 0);
  auto est = nonlinear::estimate_magnification(s, samples, rng);
  double angle = std::ldexp(1.0, -initial_exp);
  auto a = qcore::normalize({1.0, 0.0});
  auto b = qcore::normalize({std::cos(angle), std::sin(angle)});
  int iters = nonlinear::nonlinear_amplify(s, a, b, target, est);
  double initial = qcore::trace_distance(a, b);
  std::int64_t bound =
      static_cast<std::int64_t>(std::ceil(std::log(target / initial) / std::log(est.r))) +
      10;
  ResultTable t = new_table(
      cfg, p, {"kappa", "r_estimate", "iterations", "iteration_bound"});
  t.add_row({kappa, est.r, std::int64_t(iters), bound});
  return t;
}

inline ResultTable run_channel_grid(const ExperimentConfig& cfg,
                                    const ExperimentInfo& info) {
  Params p(cfg, info);
  std::size_t grid = static_cast<std::size_t>(p.integer("grid"));
  if (grid < 1 || grid > 999) fail(Errc::BadParam, "bad parameter: grid");
  struct Row {
    double e0, e1, closed, optimized;
  };
  std::vector<Row> rows(grid * grid);
  parallel_trials(grid * grid, [&](std::size_t idx) {
    std::size_t i = idx / grid, j = idx % grid;
    double e0 = double(i + 1) / double(grid + 1);
    double e1 = double(j + 1) / double(grid + 1);
    rows[idx] = Row{e0, e1, channels::capacity_closed_form(e0, e1),
                    channels::capacity_optimized(e0, e1)};
  });
  ResultTable t = new_table(
      cfg, p, {"eps0", "eps1", "capacity_closed", "capacity_optimized", "abs_diff"});
  for (const auto& r : rows)
    t.add_row({r.e0, r.e1, r.closed, r.optimized, std::abs(r.closed - r.optimized)});
  return t;
}

inline ResultTable run_ambiguity(const ExperimentConfig& cfg,
                                 const ExperimentInfo& info) {
  Params p(cfg, info);
  auto demo = nonlinear::schmidt_ambiguity_demo();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  cvector_t zero_plus{inv_sqrt2, inv_sqrt2, 0.0, 0.0};
  cvector_t zero_zero{1.0, 0.0, 0.0, 0.0};
  double f1 = std::norm(inner(zero_plus, demo.from_computational.amps));
  double f2 = std::norm(inner(zero_zero, demo.from_hadamard.amps));
  ResultTable t = new_table(cfg, p,
                            {"second_factor_trace_distance",
                             "fidelity_with_zero_plus", "fidelity_with_zero_zero"});
  t.add_row({demo.second_factor_trace_distance, f1, f2});
  return t;
}

}  // namespace detail

/// Registered experiments with parameter schemas and defaults.
inline const std::vector<ExperimentInfo>& list_experiments() {
  static const std::vector<ExperimentInfo> registry{
      {"fsp-capacity",
       "Signaling channel and capacity of a non-unitary map across a condition-number sweep",
       {{"kappa_min", "1.01", "smallest condition number"},
        {"kappa_max", "1.2", "largest condition number"},
        {"steps", "20", "sweep points"}}},
      {"fsp-search",
       "Single-query search decisions via iterated non-unitary amplification",
       {{"n", "16", "list size exponent (N = 2^n)"},
        {"kappa", "1.1", "condition number of the map"},
        {"runs", "100", "independent runs, alternating solution count"}}},
      {"bbbv",
       "Hybrid-argument quantities C_k, D_k, R_k for a traced search algorithm",
       {{"n_items", "16", "list size"},
        {"queries", "3", "oracle queries"},
        {"map_kappa", "1", "condition number of an optional inserted map (1 = none)"},
        {"map_step", "0", "segment index receiving the inserted map"}}},
      {"born-gadget",
       "Teleportation signaling through simulated postselection under a modified measurement rule",
       {{"delta", "1", "exponent deviation"},
        {"n", "8", "target leakage exponent (leakage <= 2^-n)"},
        {"trials", "100", "random input qubits"}}},
      {"born-bounds",
       "Lower-bound formulas linking search speedups and signaling bias to the exponent deviation",
       {{"n_items", "2304", "list size for the search bound"},
        {"m_qubits", "6", "algorithm qubit count"},
        {"n_qubits", "10", "signaling protocol qubit count"}}},
      {"clone-search",
       "Single-query search decisions via the CNOT-clone map iteration",
       {{"n", "12", "list size exponent (N = 2^n)"},
        {"trials", "1000", "independent trials, alternating solution count"}}},
      {"clone-signal",
       "EPR signaling by repeated cloning: all-equal outcome frequencies",
       {{"k", "5", "measured copies"},
        {"trials", "10000", "trials per branch"}}},
      {"haar-overlap",
       "Monte Carlo vs exact mean of |<psi|X(x)1|psi>|^2 over Haar states",
       {{"n", "4", "qubits"}, {"samples", "10000", "Haar samples"}}},
      {"nlamp",
       "Magnification estimate and amplification iterations for a differentiable state map",
       {{"kappa", "2", "condition number inducing the map"},
        {"initial_exp", "20", "initial angular separation 2^-initial_exp"},
        {"target", "0.3", "target trace distance"},
        {"samples", "1000", "seed pairs for the magnification search"}}},
      {"channel-grid",
       "Closed-form vs optimized binary-asymmetric-channel capacity on a grid",
       {{"grid", "99", "grid points per axis"}}},
      {"ambiguity",
       "Subsystem ambiguity of a bare nonlinear rule on the two EPR decompositions",
       {}},
  };
  return registry;
}

inline const ExperimentInfo& find_experiment(const std::string& name) {
  for (const auto& e : list_experiments())
    if (e.name == name) return e;
  fail(Errc::UnknownExperiment, "no experiment named '" + name + "'");
}

/// Runs a registered experiment. Output is a deterministic function of the
/// config (seed included); wall time is reported by the caller, not stored.
inline ResultTable run_experiment(const ExperimentConfig& cfg) {
  const ExperimentInfo& info = find_experiment(cfg.name);
  if (cfg.name == "fsp-capacity") return detail::run_fsp_capacity(cfg, info);
  if (cfg.name == "fsp-search") return detail::run_fsp_search(cfg, info);
  if (cfg.name == "bbbv") return detail::run_bbbv(cfg, info);
  if (cfg.name == "born-gadget") return detail::run_born_gadget(cfg, info);
  if (cfg.name == "born-bounds") return detail::run_born_bounds(cfg, info);
  if (cfg.name == "clone-search") return detail::run_clone_search(cfg, info);
  if (cfg.name == "clone-signal") return detail::run_clone_signal(cfg, info);
  if (cfg.name == "haar-overlap") return detail::run_haar_overlap(cfg, info);
  if (cfg.name == "nlamp") return detail::run_nlamp(cfg, info);
  if (cfg.name == "channel-grid") return detail::run_channel_grid(cfg, info);
  if (cfg.name == "ambiguity") return detail::run_ambiguity(cfg, info);
  fail(Errc::UnknownExperiment, "no experiment named '" + cfg.name + "'");
}

}  // namespace qxsim::cli

#endif  // QXSIM_EXPERIMENTS_HPP_
