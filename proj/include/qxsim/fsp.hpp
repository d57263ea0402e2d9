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

#ifndef QXSIM_FSP_HPP_
#define QXSIM_FSP_HPP_

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <variant>
#include <vector>

#include "qxsim/channels.hpp"
#include "qxsim/qcore.hpp"
#include "qxsim/search.hpp"

namespace qxsim::fsp {

using channels::BinaryChannel;
using qcore::PureState;
using qxsim::SearchDecision;
using qxsim::SearchInstance;

/// Success-probability constant of the hybrid argument,
/// (sqrt(2) - sqrt(2 - sqrt(2)))^2, kept in closed form.
inline double eta() {
  double s = std::sqrt(2.0);
  double t = std::sqrt(2.0) - std::sqrt(2.0 - s);
  return t * t;
}

/// Linear but not necessarily unitary map with its SVD cached. The
/// non-unitarity parameter is delta = kappa - 1 >= 0 (deviation of the
/// condition number from one).
struct NonUnitaryMap {
  Mat mat;
  SvdData svd;

  std::size_t dim() const { return mat.rows; }
  double kappa() const { return svd.condition_number; }
  double delta() const { return svd.condition_number - 1.0; }
  double lambda_min() const { return svd.singular_values.back(); }
  double lambda_max() const { return svd.singular_values.front(); }
  /// Right singular vector of the smallest / largest singular value.
  cvector_t phi_min() const { return svd.right(dim() - 1); }
  cvector_t phi_max() const { return svd.right(0); }
  cvector_t psi_min() const { return svd.left(dim() - 1); }
  cvector_t psi_max() const { return svd.left(0); }
};

inline NonUnitaryMap make_map(Mat m) {
  SvdData s = svd(m);
  return NonUnitaryMap{std::move(m), std::move(s)};
}

inline NonUnitaryMap diag_map(const rvector_t& d) {
  cvector_t c(d.begin(), d.end());
  return make_map(Mat::diag(c));
}

inline cvector_t apply_map_raw(const NonUnitaryMap& m, const cvector_t& v) {
  if (m.dim() != v.size()) fail(Errc::DimMismatch, "apply_map dimension mismatch");
  cvector_t w = matvec(m.mat, v);
  double n = norm2(w);
  if (n <= kZeroThreshold)
    fail(Errc::ZeroVector, "map annihilated the state (non-invertible input)");
  for (auto& a : w) a /= n;
  return w;
}

/// Final-state-projection dynamics: apply M, then readjust the norm to one.
inline PureState apply_map(const NonUnitaryMap& m, const PureState& s) {
  cvector_t out = apply_map_raw(m, s.amps);
  return PureState{s.dims, std::move(out)};
}

enum class SignalDirection { AliceToBob, BobToAlice };

namespace detail {

// Probability of each outcome when subsystem 0 of `state` (dims {d, 2}) is
// measured in the orthonormal basis given by the columns of `basis`.
inline rvector_t subsystem0_distribution(const cvector_t& state,
                                         std::size_t d, const Mat& basis) {
  rvector_t p(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t b = 0; b < 2; ++b) {
      complex_t amp = 0.0;
      for (std::size_t r = 0; r < d; ++r)
        amp += std::conj(basis(r, i)) * state[r * 2 + b];
      p[i] += std::norm(amp);
    }
  }
  return p;
}

}  // namespace detail

/// Simulates the signaling protocol on the shared state
/// (|phi_0>|0> + |phi_1>|1>)/sqrt(2) built from M's extreme right singular
/// vectors and reduces it to a classical binary asymmetric channel.
///
/// Alice-to-Bob: message 1 applies M (+renormalization) to Alice's half;
/// Bob measures his qubit. Bob-to-Alice: message 0 measures Bob's qubit
/// (handled as a pure-state ensemble, never a pre-map density matrix),
/// message 1 leaves it alone; Alice applies M and measures in the left
/// singular basis. Message labels are chosen so that both directions present
/// the channel as eps0 = 1/2, eps1 = lambda_min^2/(lambda_min^2+lambda_max^2).
inline BinaryChannel signal_channel(const NonUnitaryMap& m,
                                    SignalDirection dir) {
  const std::size_t d = m.dim();
  if (d < 2) fail(Errc::DimMismatch, "signal_channel needs dimension >= 2");
  cvector_t phi0 = m.phi_min();
  cvector_t phi1 = m.phi_max();
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  cvector_t shared(d * 2, 0.0);
  for (std::size_t r = 0; r < d; ++r) {
    shared[r * 2 + 0] = phi0[r] * inv_sqrt2;
    shared[r * 2 + 1] = phi1[r] * inv_sqrt2;
  }
  PureState psi = qcore::make_state({d, 2}, shared);
  Mat m_full = kron(m.mat, Mat::identity(2));

  if (dir == SignalDirection::AliceToBob) {
    // Message 0: nothing happens; Bob's reduced state comes from the shared
    // state as-is. Message 1: M acts on Alice's subsystem first.
    qcore::DensityMatrix rho0 = qcore::partial_trace_pure(psi, {1});
    cvector_t evolved = matvec(m_full, psi.amps);
    double n = norm2(evolved);
    if (n <= kZeroThreshold) fail(Errc::ZeroVector, "map annihilated the state");
    for (auto& a : evolved) a /= n;
    qcore::DensityMatrix rho1 =
        qcore::partial_trace_pure(qcore::make_state({d, 2}, evolved), {1});
    double eps0 = rho0.mat(1, 1).real();  // decode 1 although 0 was sent
    double eps1 = rho1.mat(0, 0).real();  // decode 0 although 1 was sent
    return BinaryChannel{eps0, eps1};
  }

  // Bob-to-Alice. Alice always applies M and measures in the left singular
  // basis; outcome psi_min decodes as 0, anything else as 1.
  Mat left_basis(d, d);
  for (std::size_t j = 0; j < d; ++j) {
    cvector_t u = m.svd.left(d - 1 - j);  // column 0 = psi_min
    for (std::size_t r = 0; r < d; ++r) left_basis(r, j) = u[r];
  }

  // Message 0: Bob measures. The post-measurement branches stay pure states;
  // M acts on each branch separately.
  qcore::PureEnsemble branches = qcore::branch_ensemble(psi, 1);
  double p_decode1_given0 = 0.0;
  for (const auto& [prob, branch] : branches.members) {
    cvector_t evolved = matvec(m_full, branch.amps);
    double n = norm2(evolved);
    for (auto& a : evolved) a /= n;
    rvector_t pd = detail::subsystem0_distribution(evolved, d, left_basis);
    for (std::size_t i = 1; i < d; ++i) p_decode1_given0 += prob * pd[i];
  }

  // Message 1: Bob does nothing; M acts on the entangled state.
  cvector_t evolved = matvec(m_full, psi.amps);
  double n = norm2(evolved);
  for (auto& a : evolved) a /= n;
  rvector_t pd = detail::subsystem0_distribution(evolved, d, left_basis);
  double p_decode0_given1 = pd[0];

  return BinaryChannel{p_decode1_given0, p_decode0_given1};
}

/// Lower-bound formula for the signaling capacity of a map whose condition
/// number deviates from one by delta: (3 / (8 ln 2)) delta^2.
inline double fsp_capacity_bound(double delta) {
  if (delta < 0.0) fail(Errc::OutOfRange, "delta must be nonnegative");
  return 3.0 / (8.0 * std::log(2.0)) * delta * delta;
}

struct SeparationResult {
  int iterations = 0;
  PureState a;
  PureState b;
};

/// Iterated amplification of the separation between two states: rotate the
/// pair symmetrically about M's minimum right singular vector inside the
/// (phi_min, phi_max) plane, apply M, repeat. Each round multiplies the
/// half-angle tangent by kappa, so roughly log_kappa(target/initial) rounds
/// reach the target trace distance.
inline SeparationResult separate_states(const NonUnitaryMap& m,
                                        const PureState& a, const PureState& b,
                                        double target) {
  if (a.dims != b.dims || a.dim() != m.dim())
    fail(Errc::DimMismatch, "separate_states dimension mismatch");
  if (!(m.kappa() > 1.0 + 1e-12))
    fail(Errc::NoAmplification, "map has condition number 1");
  if (qcore::trace_distance(a, b) <= kZeroThreshold)
    fail(Errc::NoAmplification, "input states coincide");

  const cvector_t phi0 = m.phi_min();
  const cvector_t phi1 = m.phi_max();
  cvector_t va = a.amps, vb = b.amps;
  const int cap = 10000;
  for (int it = 0; it <= cap; ++it) {
    auto g = pair_geometry(va, vb);
    if (g.sin_angle >= target || it == cap) {
      if (it == cap && g.sin_angle < target)
        fail(Errc::IterationCap, "separation did not reach target");
      return SeparationResult{it, PureState{a.dims, va}, PureState{a.dims, vb}};
    }
    // Place the pair symmetrically about phi_min in the extreme singular
    // plane: a -> cos(h) phi0 + sin(h) phi1, b -> cos(h) phi0 - sin(h) phi1
    // with h the half-angle of the pair.
    double h = 0.5 * std::atan2(g.sin_angle, g.cos_angle);
    double ch = std::cos(h), sh = std::sin(h);
    cvector_t at(va.size()), bt(va.size()), tt(va.size());
    for (std::size_t r = 0; r < va.size(); ++r) {
      at[r] = ch * phi0[r] + sh * phi1[r];
      bt[r] = ch * phi0[r] - sh * phi1[r];
    }
    auto gt = pair_geometry(at, bt);
    Mat u = unitary_mapping_frames({va, g.tangent}, {at, gt.tangent});
    va = apply_map_raw(m, matvec(u, va));
    vb = apply_map_raw(m, matvec(u, vb));
  }
  fail(Errc::IterationCap, "unreachable");
}

struct SearchRun {
  SearchDecision decision = SearchDecision::ZeroSolutions;
  int map_applications = 0;
  int oracle_queries = 0;
};

/// Single-query Grover decision using repeated applications of a non-unitary
/// map. The no-solution branch sits exactly on the fixed ray of the
/// iteration (the minimum singular vector), so only a genuine solution can
/// ever drift away from it.
inline SearchRun fsp_search(SearchInstance& inst, const NonUnitaryMap& m,
                            Rng& rng) {
  if (!(m.kappa() > 1.0 + 1e-12))
    fail(Errc::NoAmplification, "map has condition number 1");
  auto prep = prepare_search_state(inst, rng);
  if (prep.certified_solution)
    return SearchRun{SearchDecision::OneSolution, 0, 1};

  // Embed the flag qubit into the extreme singular plane of M: |0> on
  // phi_min (the fixed ray), |1> along phi_max.
  const cvector_t phi0 = m.phi_min();
  const cvector_t phi1 = m.phi_max();
  const double t0 = prep.tan_theta0;
  const double c0 = 1.0 / std::sqrt(1.0 + t0 * t0);
  cvector_t v(m.dim());
  for (std::size_t r = 0; r < m.dim(); ++r)
    v[r] = c0 * (phi0[r] + t0 * phi1[r]);
  cvector_t ref = phi0;

  Mat align = matmul(m.svd.right_vectors, adjoint(m.svd.left_vectors));
  const double target = 0.3;
  const double tan_target = std::tan(std::asin(target));
  double initial_tan = (t0 > 0.0) ? t0 : 1.0 / std::ldexp(1.0, inst.n_bits);
  int k_max = 8 + static_cast<int>(std::min(
                      1e6, std::ceil(std::log(tan_target / initial_tan) /
                                     std::log(m.kappa()))));

  int applications = 0;
  for (int k = 0; k < k_max; ++k) {
    v = apply_map_raw(m, v);
    ref = apply_map_raw(m, ref);
    ++applications;
    double sep = std::sqrt(std::max(0.0, 1.0 - std::norm(inner(ref, v))));
    if (sep >= target) break;
    if (k + 1 < k_max) {
      v = matvec(align, v);
      double nv = norm2(v);
      for (auto& x : v) x /= nv;
      ref = matvec(align, ref);
      double nr = norm2(ref);
      for (auto& x : ref) x /= nr;
    }
  }

  // Final discrimination: 100 projective measurements in a basis containing
  // the reference ray; any outcome off the reference certifies a solution.
  double p_orth = std::max(0.0, 1.0 - std::norm(inner(ref, v)));
  bool saw_orth = false;
  for (int t = 0; t < 100; ++t)
    if (rng.uniform() < p_orth) saw_orth = true;
  return SearchRun{saw_orth ? SearchDecision::OneSolution
                            : SearchDecision::ZeroSolutions,
                   applications, 1};
}

// ---------------------------------------------------------------------------
// Hybrid-argument harness
// ---------------------------------------------------------------------------

/// One inter-query step: either a unitary or a renormalized non-unitary map.
using TraceOp = std::variant<Mat, NonUnitaryMap>;

/// Search algorithm skeleton for the hybrid argument: an initial state and q
/// segments, each consisting of one phase-flip oracle call followed by the
/// listed operations.
struct TraceProgram {
  std::size_t n_items = 0;
  cvector_t initial;
  std::vector<std::vector<TraceOp>> segments;
};

/// Per-oracle-index state sequences |psi_k^x> plus the oracle-free sequence
/// |psi_k>, each of length q+1.
struct AlgorithmTrace {
  std::size_t n_items = 0;
  std::size_t q = 0;
  std::vector<std::vector<cvector_t>> per_x;
  std::vector<cvector_t> oracle_free;
};

namespace detail {

inline cvector_t apply_ops(const std::vector<TraceOp>& ops, cvector_t v) {
  for (const auto& op : ops) {
    if (std::holds_alternative<Mat>(op)) {
      v = matvec(std::get<Mat>(op), v);
    } else {
      v = apply_map_raw(std::get<NonUnitaryMap>(op), v);
    }
  }
  return v;
}

}  // namespace detail

/// Executes the program for every marked index x (phase-flip oracle
/// O_x = 1 - 2|x><x|) and once with the oracle replaced by the identity.
inline AlgorithmTrace run_trace(const TraceProgram& prog) {
  if (prog.n_items == 0 || prog.n_items > 64)
    fail(Errc::OutOfRange, "trace supports up to 64 items");
  if (prog.initial.size() != prog.n_items)
    fail(Errc::DimMismatch, "initial state size mismatch");
  AlgorithmTrace tr;
  tr.n_items = prog.n_items;
  tr.q = prog.segments.size();
  tr.per_x.resize(prog.n_items);
  for (std::size_t x = 0; x < prog.n_items; ++x) {
    auto& seq = tr.per_x[x];
    seq.push_back(prog.initial);
    for (const auto& seg : prog.segments) {
      cvector_t v = seq.back();
      v[x] = -v[x];  // phase-flip oracle
      seq.push_back(detail::apply_ops(seg, std::move(v)));
    }
  }
  tr.oracle_free.push_back(prog.initial);
  for (const auto& seg : prog.segments)
    tr.oracle_free.push_back(detail::apply_ops(seg, tr.oracle_free.back()));
  return tr;
}

/// Hybrid-argument sums:
///   C_k = sum_x ||O_x psi_{k-1}^x - psi_{k-1}||^2
///   D_k = sum_x ||psi_k^x - psi_k||^2,   R_k = D_k - C_k,   B = max_k R_k,
/// plus the recurrence checks D_0 = 0, C_k <= D_{k-1} + 4 sqrt(D_{k-1}) + 4
/// and D_k <= (4+B) k^2.
struct HybridQuantities {
  rvector_t c;  // c[k], k = 1..q (c[0] unused, kept 0)
  rvector_t d;  // d[k], k = 0..q
  rvector_t r;  // r[k], k = 1..q
  double b = 0.0;
  bool d0_is_zero = false;
  bool ck_recurrence_ok = false;
  bool dk_quadratic_ok = false;
};

inline HybridQuantities hybrid_quantities(const AlgorithmTrace& tr) {
  const std::size_t n_items = tr.n_items;
  const std::size_t q = tr.q;
  if (tr.per_x.size() != n_items || tr.oracle_free.size() != q + 1)
    fail(Errc::MalformedTrace, "trace shape mismatch");
  for (const auto& seq : tr.per_x) {
    if (seq.size() != q + 1) fail(Errc::MalformedTrace, "trace shape mismatch");
    for (const auto& v : seq)
      if (std::abs(norm2(v) - 1.0) > 1e-8)
        fail(Errc::MalformedTrace, "trace state is not normalized");
  }

  HybridQuantities out;
  out.c.assign(q + 1, 0.0);
  out.d.assign(q + 1, 0.0);
  out.r.assign(q + 1, 0.0);
  for (std::size_t k = 0; k <= q; ++k) {
    double dk = 0.0;
    for (std::size_t x = 0; x < n_items; ++x) {
      const cvector_t& a = tr.per_x[x][k];
      const cvector_t& b = tr.oracle_free[k];
      double s = 0.0;
      for (std::size_t r = 0; r < a.size(); ++r) s += std::norm(a[r] - b[r]);
      dk += s;
    }
    out.d[k] = dk;
  }
  for (std::size_t k = 1; k <= q; ++k) {
    double ck = 0.0;
    for (std::size_t x = 0; x < n_items; ++x) {
      cvector_t a = tr.per_x[x][k - 1];
      a[x] = -a[x];  // O_x applied to psi_{k-1}^x
      const cvector_t& b = tr.oracle_free[k - 1];
      double s = 0.0;
      for (std::size_t r = 0; r < a.size(); ++r) s += std::norm(a[r] - b[r]);
      ck += s;
    }
    out.c[k] = ck;
    out.r[k] = out.d[k] - ck;
  }
  out.b = 0.0;
  for (std::size_t k = 1; k <= q; ++k) out.b = std::max(out.b, out.r[k]);

  out.d0_is_zero = (out.d[0] == 0.0);
  out.ck_recurrence_ok = true;
  out.dk_quadratic_ok = true;
  const double slack = 1e-9;
  for (std::size_t k = 1; k <= q; ++k) {
    double lhs = out.c[k];
    double rhs = out.d[k - 1] + 4.0 * std::sqrt(out.d[k - 1]) + 4.0;
    if (lhs > rhs * (1.0 + slack) + slack) out.ck_recurrence_ok = false;
    double bound = (4.0 + out.b) * static_cast<double>(k) * static_cast<double>(k);
    if (out.d[k] > bound * (1.0 + slack) + slack) out.dk_quadratic_ok = false;
  }
  return out;
}

/// Worst-case success probability of the traced algorithm: min over x of
/// |<x|psi_q^x>|^2.
inline double trace_success_probability(const AlgorithmTrace& tr) {
  double p = 1.0;
  for (std::size_t x = 0; x < tr.n_items; ++x)
    p = std::min(p, std::norm(tr.per_x[x].back()[x]));
  return p;
}

/// Standard Grover program: uniform initial state, q segments of
/// oracle + diffusion (2|s><s| - 1).
inline TraceProgram grover_program(std::size_t n_items, std::size_t q) {
  TraceProgram prog;
  prog.n_items = n_items;
  double amp = 1.0 / std::sqrt(static_cast<double>(n_items));
  prog.initial.assign(n_items, complex_t(amp));
  Mat diffusion(n_items, n_items);
  double two_over_n = 2.0 / static_cast<double>(n_items);
  for (std::size_t i = 0; i < n_items; ++i)
    for (std::size_t j = 0; j < n_items; ++j)
      diffusion(i, j) = two_over_n - (i == j ? 1.0 : 0.0);
  for (std::size_t k = 0; k < q; ++k)
    prog.segments.push_back({TraceOp(diffusion)});
  return prog;
}

/// Certified capacity lower bound implied by a q-query search algorithm on N
/// items: epsilon = eta/(2 q^2) - 2/N, channel (1/2, 1/2 - epsilon/8).
/// Returns 0 when epsilon <= 0 (no speedup detected).
inline double speedup_capacity_bound(int q, std::int64_t n_items) {
  if (q < 1 || n_items < 2) fail(Errc::OutOfRange, "need q >= 1 and N >= 2");
  double eps = eta() / (2.0 * double(q) * double(q)) - 2.0 / double(n_items);
  if (eps <= 0.0) return 0.0;
  return channels::capacity_closed_form(0.5, 0.5 - eps / 8.0);
}

/// Minimum condition number consistent with an observed total variation
/// distance Delta between a map's two protocol output distributions:
/// Delta <= (kappa^2 - 1)/2, hence kappa >= sqrt(1 + 2 Delta). For a
/// two-map protocol the caller takes a further square root.
inline double condition_bound_from_tvd(double delta) {
  if (delta < 0.0 || delta > 1.0)
    fail(Errc::OutOfRange, "TVD must lie in [0,1]");
  return std::sqrt(1.0 + 2.0 * delta);
}

/// Map applications needed for single-query search on N items at signaling
/// capacity C: ceil(log N / log(1 + C^2)).
inline std::int64_t search_cost_from_capacity(std::int64_t n_items, double c) {
  if (n_items < 2) fail(Errc::OutOfRange, "need N >= 2");
  if (!(c > 0.0)) fail(Errc::ZeroCapacity, "capacity must be positive");
  return static_cast<std::int64_t>(
      std::ceil(std::log(double(n_items)) / std::log1p(c * c)));
}

}  // namespace qxsim::fsp

#endif  // QXSIM_FSP_HPP_
