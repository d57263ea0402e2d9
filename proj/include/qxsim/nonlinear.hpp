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

#ifndef QXSIM_NONLINEAR_HPP_
#define QXSIM_NONLINEAR_HPP_

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "qxsim/channels.hpp"
#include "qxsim/qcore.hpp"
#include "qxsim/search.hpp"

namespace qxsim::nonlinear {

using qcore::DensityMatrix;
using qcore::PureState;

/// Single-qubit cloner rho_AB -> rho_AB (x) rho_B. The copy is appended as
/// the last subsystem; the original position keeps whatever entanglement the
/// input had, the copy is unentangled with everything.
inline DensityMatrix clone(const DensityMatrix& rho, std::size_t target) {
  if (target >= rho.dims.size())
    fail(Errc::BadSubsystem, "clone target out of range");
  if (rho.dims[target] != 2) fail(Errc::NotAQubit, "clone target must be a qubit");
  if (rho.dim() * 2 > (std::size_t(1) << kMaxDensityQubits))
    fail(Errc::DimTooLarge, "cloned state exceeds the density-matrix cap");
  DensityMatrix marginal = qcore::partial_trace(rho, {target});
  Mat out = kron(rho.mat, marginal.mat);
  std::vector<std::size_t> dims = rho.dims;
  dims.push_back(2);
  return DensityMatrix{std::move(dims), std::move(out)};
}

/// Quadratic CNOT-clone map on single-qubit density matrices, closed form:
///   [[r00^2 + r00 r11, r01^2 + r01 r10],
///    [r10^2 + r10 r01, r11^2 + r11 r00]].
inline DensityMatrix cnot_clone_map(const DensityMatrix& rho) {
  if (rho.dim() != 2) fail(Errc::NotAQubit, "cnot_clone_map expects one qubit");
  const Mat& r = rho.mat;
  Mat out(2, 2);
  out(0, 0) = r(0, 0) * r(0, 0) + r(0, 0) * r(1, 1);
  out(0, 1) = r(0, 1) * r(0, 1) + r(0, 1) * r(1, 0);
  out(1, 0) = r(1, 0) * r(1, 0) + r(1, 0) * r(0, 1);
  out(1, 1) = r(1, 1) * r(1, 1) + r(1, 1) * r(0, 0);
  return DensityMatrix{rho.dims, std::move(out)};
}

/// The same map realized by its defining gadget: clone, CNOT from the
/// original onto the copy, discard the copy.
inline DensityMatrix cnot_clone_gadget(const DensityMatrix& rho) {
  if (rho.dim() != 2) fail(Errc::NotAQubit, "cnot_clone_gadget expects one qubit");
  DensityMatrix two = clone(rho, 0);
  Mat cnot(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(2, 3) = cnot(3, 2) = 1.0;
  Mat evolved = matmul(cnot, matmul(two.mat, adjoint(cnot)));
  return qcore::partial_trace(DensityMatrix{two.dims, std::move(evolved)}, {0});
}

inline DensityMatrix rho_plus() {
  Mat m(2, 2);
  m(0, 0) = m(0, 1) = m(1, 0) = m(1, 1) = 0.5;
  return DensityMatrix{{2}, std::move(m)};
}

/// (1-eps)|+><+| + eps|-><-|.
inline DensityMatrix rho_eps(double eps) {
  Mat m(2, 2);
  m(0, 0) = m(1, 1) = 0.5;
  m(0, 1) = m(1, 0) = 0.5 - eps;
  return DensityMatrix{{2}, std::move(m)};
}

struct CloneSearchRun {
  SearchDecision decision = SearchDecision::ZeroSolutions;
  int iterations = 0;
  int oracle_queries = 0;
};

/// Single-query Grover decision with the cloning gadget. One bit-flip-oracle
/// query on the maximally mixed index register leaves the flag qubit in
/// rho_plus (no solution) or rho_eps with eps = 2^-n (one solution); the
/// n-qubit register itself is never materialized. Iterating the CNOT-clone
/// map doubles eps per step away from the repulsive fixed point rho_plus
/// until the two cases are a constant trace distance apart.
inline CloneSearchRun clone_search(SearchInstance& inst, Rng& rng) {
  if (inst.n_bits < 2 || inst.n_bits > 24)
    fail(Errc::OutOfRange, "clone_search supports 2..24 bits");
  inst.queries += 1;
  double eps = inst.marked ? std::exp2(-static_cast<double>(inst.n_bits)) : 0.0;
  DensityMatrix rho = rho_eps(eps);
  const DensityMatrix plus = rho_plus();
  const int cap = inst.n_bits + 6;
  int iters = 0;
  while (iters < cap && qcore::trace_distance(rho, plus) < 0.2) {
    rho = cnot_clone_map(rho);
    ++iters;
  }
  // 100 measurements in the |+>/|-> basis; a single |-> outcome certifies a
  // solution because rho_plus never produces one.
  double p_minus = 0.5 * (rho.mat(0, 0) + rho.mat(1, 1)).real() -
                   0.5 * (rho.mat(0, 1) + rho.mat(1, 0)).real();
  p_minus = std::max(0.0, p_minus);
  bool saw_minus = false;
  for (int t = 0; t < 100; ++t)
    if (rng.uniform() < p_minus) saw_minus = true;
  return CloneSearchRun{saw_minus ? SearchDecision::OneSolution
                                  : SearchDecision::ZeroSolutions,
                        iters, 1};
}

struct CloneSignalResult {
  channels::BinaryChannel channel;  // exact: eps1 = 0, eps0 = 2^(1-k)
  double measured_all_equal_freq = 0.0;
  double unmeasured_all_equal_freq = 0.0;
  int trials = 0;
};

namespace detail {

// Diagonal of Bob's k-qubit register built through the actual cloner, for the
// branch where Alice left the EPR pair alone. Requires k + 1 qubits total.
inline rvector_t unmeasured_diagonal_via_cloner(int k) {
  Mat epr(4, 4);
  epr(0, 0) = epr(0, 3) = epr(3, 0) = epr(3, 3) = 0.5;
  DensityMatrix joint{{2, 2}, std::move(epr)};
  for (int c = 1; c < k; ++c) joint = clone(joint, joint.dims.size() - 1);
  std::vector<std::size_t> bob(joint.dims.size() - 1);
  for (std::size_t i = 0; i < bob.size(); ++i) bob[i] = i + 1;
  DensityMatrix rb = qcore::partial_trace(joint, bob);
  rvector_t diag(rb.dim());
  for (std::size_t i = 0; i < rb.dim(); ++i) diag[i] = rb.mat(i, i).real();
  return diag;
}

// Diagonal of Bob's k-qubit register after Alice's measurement collapsed his
// qubit to |b>: cloning a pure basis state stays a point mass on b^k.
inline rvector_t measured_diagonal_via_cloner(int k, int b) {
  Mat one(2, 2);
  one(std::size_t(b), std::size_t(b)) = 1.0;
  DensityMatrix bob{{2}, std::move(one)};
  for (int c = 1; c < k; ++c) bob = clone(bob, bob.dims.size() - 1);
  rvector_t diag(bob.dim());
  for (std::size_t i = 0; i < bob.dim(); ++i) diag[i] = bob.mat(i, i).real();
  return diag;
}

inline std::uint64_t sample_index(const rvector_t& diag, Rng& rng) {
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    acc += diag[i];
    if (u < acc) return i;
  }
  return diag.size() - 1;
}

}  // namespace detail

/// EPR signaling by cloning: Alice measures her half (message 1) or leaves it
/// alone (message 0); Bob makes k measurable copies in the computational
/// basis and outputs 1 iff all outcomes agree. Measurement branches are
/// handled as pure-state ensembles, so Alice's measured branch clones to an
/// exact product |b>^k and agrees with probability one, while the unmeasured
/// branch gives k independent fair bits (all-equal probability 2^(1-k)).
/// Returns the exact channel plus the simulated all-equal frequencies.
inline CloneSignalResult clone_signal(int k, int trials, Rng& rng) {
  if (k < 1) fail(Errc::OutOfRange, "need k >= 1");
  if (trials < 1) fail(Errc::OutOfRange, "need at least one trial");

  CloneSignalResult out;
  out.trials = trials;
  out.channel = channels::BinaryChannel{std::exp2(1.0 - k), 0.0};

  const std::uint64_t all_ones = (1ULL << k) - 1;

  // Unmeasured branch. Up to the density-matrix cap the outcome distribution
  // is produced by the cloner itself; beyond it the (cloner-verified) product
  // structure gives the same k independent fair bits.
  rvector_t diag;
  if (k + 1 <= static_cast<int>(kMaxDensityQubits))
    diag = detail::unmeasured_diagonal_via_cloner(k);
  long equal_unmeasured = 0;
  for (int t = 0; t < trials; ++t) {
    std::uint64_t outcome = 0;
    if (!diag.empty()) {
      outcome = detail::sample_index(diag, rng);
    } else {
      for (int b = 0; b < k; ++b) outcome = (outcome << 1) | (rng.next_u64() & 1);
    }
    if (outcome == 0 || outcome == all_ones) ++equal_unmeasured;
  }
  out.unmeasured_all_equal_freq = double(equal_unmeasured) / trials;

  // Measured branch: Alice's outcome collapses Bob's qubit to a pure basis
  // state, and cloning |b><b| stays the point mass on b^k.
  rvector_t diag_measured[2];
  if (k <= static_cast<int>(kMaxDensityQubits)) {
    diag_measured[0] = detail::measured_diagonal_via_cloner(k, 0);
    diag_measured[1] = detail::measured_diagonal_via_cloner(k, 1);
  }
  long equal_measured = 0;
  for (int t = 0; t < trials; ++t) {
    int alice = static_cast<int>(rng.next_u64() & 1);
    std::uint64_t outcome = diag_measured[alice].empty()
                                ? (alice ? all_ones : 0)
                                : detail::sample_index(diag_measured[alice], rng);
    if (outcome == 0 || outcome == all_ones) ++equal_measured;
  }
  out.measured_all_equal_freq = double(equal_measured) / trials;
  return out;
}

/// Differentiable map from normalized pure states to normalized pure states.
struct NonlinearMap {
  std::size_t dim = 0;
  std::function<cvector_t(const cvector_t&)> eval;
};

struct MagnificationEstimate {
  double r = 1.0;         // largest distance-expansion ratio found (lower bound)
  cvector_t segment_a;    // endpoints of the magnifying geodesic segment
  cvector_t segment_b;
};

namespace detail {

inline cvector_t random_tangent(const cvector_t& at, Rng& rng) {
  cvector_t t(at.size());
  for (;;) {
    for (auto& v : t) v = rng.complex_normal();
    complex_t proj = inner(at, t);
    for (std::size_t r = 0; r < t.size(); ++r) t[r] -= proj * at[r];
    double n = norm2(t);
    if (n > 1e-8) {
      for (auto& v : t) v /= n;
      return t;
    }
  }
}

struct PairParam {
  cvector_t mid;      // unit midpoint
  cvector_t tangent;  // unit tangent at mid
  double half_angle = 0.0;
};

inline void pair_points(const PairParam& p, cvector_t& a, cvector_t& b) {
  double c = std::cos(p.half_angle), s = std::sin(p.half_angle);
  a.resize(p.mid.size());
  b.resize(p.mid.size());
  for (std::size_t r = 0; r < p.mid.size(); ++r) {
    a[r] = c * p.mid[r] + s * p.tangent[r];
    b[r] = c * p.mid[r] - s * p.tangent[r];
  }
}

inline double pair_ratio(const NonlinearMap& s, const PairParam& p) {
  cvector_t a, b;
  pair_points(p, a, b);
  double before = state_angle(a, b);
  if (before < 1e-12) return 0.0;
  double after = state_angle(s.eval(a), s.eval(b));
  return after / before;
}

inline cvector_t geodesic_step(const cvector_t& from, const cvector_t& dir,
                               double step) {
  cvector_t out(from.size());
  double c = std::cos(step), s = std::sin(step);
  for (std::size_t r = 0; r < from.size(); ++r) out[r] = c * from[r] + s * dir[r];
  return out;
}

}  // namespace detail

/// Heuristic search for the magnification factor r = max |S(a)-S(b)|/|a-b|
/// under the angle metric: random seed pairs followed by shrink-and-perturb
/// refinement. The reported ratio is achieved by the returned segment, so it
/// is a lower bound on the true maximum.
inline MagnificationEstimate estimate_magnification(const NonlinearMap& s,
                                                    int samples, Rng& rng) {
  if (s.dim < 2) fail(Errc::DimMismatch, "map dimension must be at least 2");
  detail::PairParam best;
  double best_ratio = -1.0;
  for (int t = 0; t < samples; ++t) {
    detail::PairParam p;
    p.mid = qcore::haar_vector(s.dim, rng);
    p.tangent = detail::random_tangent(p.mid, rng);
    p.half_angle = 0.5 * std::exp(rng.uniform(std::log(1e-5), std::log(1.0)));
    double ratio = detail::pair_ratio(s, p);
    if (ratio > best_ratio) {
      best_ratio = ratio;
      best = p;
    }
  }
  // Coordinate refinement: shrink toward the locally best configuration.
  for (int round = 0; round < 50; ++round) {
    double step = 0.5 * std::pow(0.85, round);
    for (int prop = 0; prop < 6; ++prop) {
      detail::PairParam p = best;
      switch (prop) {
        case 0:
          p.half_angle = std::max(5e-7, p.half_angle * 0.5);
          break;
        case 1:
          p.mid = detail::geodesic_step(p.mid, detail::random_tangent(p.mid, rng),
                                        step);
          break;
        case 2: {
          cvector_t u = detail::random_tangent(p.mid, rng);
          for (std::size_t r = 0; r < p.tangent.size(); ++r)
            p.tangent[r] += step * u[r];
          break;
        }
        case 3:
          p.half_angle = std::max(5e-7, p.half_angle * 0.25);
          break;
        case 4: {
          p.mid = detail::geodesic_step(p.mid, p.tangent, step * 0.5);
          break;
        }
        default:
          p.mid = detail::geodesic_step(p.mid, p.tangent, -step * 0.5);
          break;
      }
      // Re-orthonormalize the frame after any move.
      double nm = norm2(p.mid);
      for (auto& v : p.mid) v /= nm;
      complex_t proj = inner(p.mid, p.tangent);
      for (std::size_t r = 0; r < p.tangent.size(); ++r)
        p.tangent[r] -= proj * p.mid[r];
      double nt = norm2(p.tangent);
      if (nt < 1e-10) continue;
      for (auto& v : p.tangent) v /= nt;
      double ratio = detail::pair_ratio(s, p);
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best = p;
      }
    }
  }
  MagnificationEstimate out;
  out.r = std::max(0.0, best_ratio);
  detail::pair_points(best, out.segment_a, out.segment_b);
  return out;
}

/// Iterated amplification through the magnifying segment: map the pair onto
/// the segment, apply S, repeat until the pair reaches the target trace
/// distance. Iterations stay within ceil(log_r(target/initial)) + 10.
inline int nonlinear_amplify(const NonlinearMap& s, const PureState& a,
                             const PureState& b, double target,
                             const MagnificationEstimate& mag) {
  if (!(mag.r > 1.0 + 1e-6))
    fail(Errc::NoAmplification, "estimated magnification does not exceed 1");
  if (a.dim() != s.dim || b.dim() != s.dim)
    fail(Errc::DimMismatch, "state dimension does not match the map");
  cvector_t va = a.amps, vb = b.amps;
  double initial = qcore::trace_distance(a, b);
  if (initial >= target) return 0;
  if (initial <= kZeroThreshold)
    fail(Errc::NoAmplification, "input states coincide");
  const int cap =
      static_cast<int>(std::ceil(std::log(target / initial) / std::log(mag.r))) +
      10;

  // Segment frame. pair_geometry gives b = phase (cos a + sin t), so the
  // midpoint is cos(sh) a + sin(sh) t and the tangent at the midpoint is the
  // unit vector completing that rotation.
  auto seg = pair_geometry(mag.segment_a, mag.segment_b);
  double sh = 0.5 * std::atan2(seg.sin_angle, seg.cos_angle);
  cvector_t smid(mag.segment_a.size()), stan(mag.segment_a.size());
  {
    double c = std::cos(sh), si = std::sin(sh);
    for (std::size_t r = 0; r < smid.size(); ++r) {
      smid[r] = c * mag.segment_a[r] + si * seg.tangent[r];
      stan[r] = -si * mag.segment_a[r] + c * seg.tangent[r];
    }
  }

  int iterations = 0;
  for (;;) {
    auto g = pair_geometry(va, vb);
    if (g.sin_angle >= target) return iterations;
    if (iterations >= cap)
      fail(Errc::IterationCap, "amplification exceeded its iteration budget");
    double h = 0.5 * std::atan2(g.sin_angle, g.cos_angle);
    cvector_t at(va.size()), bt(va.size());
    double c = std::cos(h), si = std::sin(h);
    for (std::size_t r = 0; r < va.size(); ++r) {
      at[r] = c * smid[r] + si * stan[r];
      bt[r] = c * smid[r] - si * stan[r];
    }
    auto gt = pair_geometry(at, bt);
    Mat u = unitary_mapping_frames({va, g.tangent}, {at, gt.tangent});
    va = s.eval(matvec(u, va));
    vb = s.eval(matvec(u, vb));
    ++iterations;
  }
}

struct AmbiguityDemo {
  PureState from_computational;  // naive rule applied to the |00>+|11> form
  PureState from_hadamard;       // naive rule applied to the |++>+|--> form
  double second_factor_trace_distance = 0.0;
};

/// Applies the (ill-defined) symbolic rule S0|psi> -> |0> to the first tensor
/// factor of a decomposition sum_i coef_i |first_i> (x) |second_i>, which
/// collapses to |0> (x) sum_i coef_i |second_i>.
inline PureState apply_naive_rule(
    const std::vector<std::pair<complex_t, cvector_t>>& branches) {
  if (branches.empty()) fail(Errc::OutOfRange, "empty decomposition");
  std::size_t d = branches.front().second.size();
  cvector_t second(d, 0.0);
  for (const auto& [coef, vec] : branches) {
    if (vec.size() != d) fail(Errc::DimMismatch, "ragged decomposition");
    for (std::size_t r = 0; r < d; ++r) second[r] += coef * vec[r];
  }
  cvector_t full(2 * d, 0.0);
  for (std::size_t r = 0; r < d; ++r) full[r] = second[r];
  return qcore::normalize(full, {2, d});
}

/// Demonstrates that a bare nonlinear rule on a subsystem is ambiguous: the
/// two Schmidt decompositions of the EPR pair yield |0>|+> and |0>|0>, a
/// second-factor trace distance of 1/sqrt(2).
inline AmbiguityDemo schmidt_ambiguity_demo() {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  AmbiguityDemo demo;
  demo.from_computational = apply_naive_rule(
      {{inv_sqrt2, {1.0, 0.0}}, {inv_sqrt2, {0.0, 1.0}}});
  demo.from_hadamard = apply_naive_rule(
      {{inv_sqrt2, {inv_sqrt2, inv_sqrt2}}, {inv_sqrt2, {inv_sqrt2, -inv_sqrt2}}});
  PureState s1 = qcore::normalize(
      {demo.from_computational.amps[0], demo.from_computational.amps[1]});
  PureState s2 = qcore::normalize(
      {demo.from_hadamard.amps[0], demo.from_hadamard.amps[1]});
  demo.second_factor_trace_distance = qcore::trace_distance(s1, s2);
  return demo;
}

}  // namespace qxsim::nonlinear

#endif  // QXSIM_NONLINEAR_HPP_
