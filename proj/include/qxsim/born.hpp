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

#ifndef QXSIM_BORN_HPP_
#define QXSIM_BORN_HPP_

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qxsim/qcore.hpp"
#include "qxsim/search.hpp"

namespace qxsim::born {

using qcore::PureState;

/// Measurement rule p_x proportional to |alpha_x|^(2+delta).
struct BornModel {
  double delta = 0.0;
  double p() const { return 2.0 + delta; }
};

inline BornModel make_model(double delta) {
  if (!(2.0 + delta > 0.0)) fail(Errc::OutOfRange, "exponent 2+delta must be positive");
  return BornModel{delta};
}

/// Outcome distribution of the modified rule on (possibly unnormalized)
/// amplitudes: p_x = |a_x|^p / sum_y |a_y|^p.
inline rvector_t born_distribution(const cvector_t& amps, const BornModel& m) {
  rvector_t w(amps.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    double a = std::abs(amps[i]);
    w[i] = (a > 0.0) ? std::pow(a, m.p()) : 0.0;
    total += w[i];
  }
  if (total <= 0.0) fail(Errc::ZeroVector, "all amplitudes vanish");
  for (auto& v : w) v /= total;
  return w;
}

/// Sample an outcome index under the modified rule (inverse CDF, ascending
/// outcome order).
inline std::size_t born_sample(const PureState& s, const BornModel& m, Rng& rng) {
  rvector_t p = born_distribution(s.amps, m);
  double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return i;
  }
  return p.size() - 1;
}

/// One measurement branch, reduced to a label, a scalar amplitude and a
/// multiplicity weight. The weight generalizes "2^k ancilla basis states at
/// amplitude 2^{-k/2} each": a branch whose payload vector is c has
/// amplitude ||c|| and weight (sum_j |c_j|^p) / ||c||^p, so that
/// weight * |amplitude|^p is always the branch's exact modified-Born mass.
struct WeightedBranch {
  int label = 0;
  complex_t amplitude = 0.0;
  double weight = 1.0;
};

using WeightedBranches = std::vector<WeightedBranch>;

inline double branch_mass(const WeightedBranch& b, const BornModel& m) {
  double a = std::abs(b.amplitude);
  return (a > 0.0) ? b.weight * std::pow(a, m.p()) : 0.0;
}

inline WeightedBranch branch_from_payload(int label, const cvector_t& payload,
                                          const BornModel& m) {
  double n = norm2(payload);
  double mass = 0.0;
  for (const auto& c : payload) {
    double a = std::abs(c);
    if (a > 0.0) mass += std::pow(a, m.p());
  }
  double w = (n > 0.0) ? mass / std::pow(n, m.p()) : 1.0;
  return WeightedBranch{label, complex_t(n), w};
}

struct PostselectResult {
  double suppression = 1.0;   // 2^{-k|delta|/2}
  double leakage = 0.0;       // mass fraction left outside the kept branch
  WeightedBranches branches;  // weights updated by the gadget
  PureState effective;        // renormalized conditional state over labels
};

/// Simulated postselection via the modified Born rule. For delta > 0, k
/// ancilla qubits are spread (by controlled Hadamards) on every branch other
/// than the kept one, multiplying those branches' masses by 2^{-k delta/2};
/// for delta < 0 the spreading attaches to the kept branch instead, which
/// boosts it by the same factor. Ancilla registers are never materialized:
/// the weights carry the suppression analytically.
///
/// The returned effective state folds the weights back into amplitude
/// magnitudes (|a'| = (w |a|^p)^(1/p)) and l2-normalizes, so born_sample on
/// it reproduces the gadget's outcome statistics exactly.
inline PostselectResult simulate_postselect(WeightedBranches branches,
                                            const BornModel& m, int k,
                                            int keep_label) {
  if (m.delta == 0.0) fail(Errc::ZeroDelta, "postselection gadget needs delta != 0");
  if (k < 1) fail(Errc::OutOfRange, "need at least one ancilla qubit");
  const double ad = std::abs(m.delta);
  const double suppression = std::exp2(-0.5 * static_cast<double>(k) * ad);

  bool found = false;
  for (auto& b : branches) {
    if (b.label == keep_label) {
      found = true;
      if (m.delta < 0.0) b.weight /= suppression;
    } else if (m.delta > 0.0) {
      b.weight *= suppression;
    }
  }
  if (!found) fail(Errc::OutOfRange, "keep label not present in branches");

  double total = 0.0, kept = 0.0;
  for (const auto& b : branches) {
    double mass = branch_mass(b, m);
    total += mass;
    if (b.label == keep_label) kept += mass;
  }
  if (total <= 0.0) fail(Errc::ZeroVector, "all branch masses vanish");

  PostselectResult out;
  out.suppression = suppression;
  out.leakage = (total - kept) / total;
  out.branches = branches;
  cvector_t eff(branches.size());
  for (std::size_t i = 0; i < branches.size(); ++i) {
    const auto& b = branches[i];
    double a = std::abs(b.amplitude);
    double mag = (a > 0.0) ? std::pow(b.weight * std::pow(a, m.p()), 1.0 / m.p())
                           : 0.0;
    complex_t phase = (a > 0.0) ? b.amplitude / a : complex_t(1.0);
    eff[i] = phase * mag;
  }
  out.effective = qcore::normalize(eff);
  return out;
}

struct TeleportRun {
  double fidelity = 0.0;
  int ancilla_k = 0;
  double leakage = 0.0;
};

namespace detail {

// Smallest k whose gadget leakage across three equal-mass wrong branches
// stays at or below 2^-n.
inline int teleport_ancillas(const BornModel& m, int n) {
  double target = std::exp2(-static_cast<double>(n));
  double ad = std::abs(m.delta);
  double need = target / (3.0 * (1.0 - target));  // suppression factor bound
  int k = std::max(1, static_cast<int>(std::ceil(-2.0 * std::log2(need) / ad)));
  while (3.0 * std::exp2(-0.5 * k * ad) /
             (1.0 + 3.0 * std::exp2(-0.5 * k * ad)) >
         target)
    ++k;
  return k;
}

}  // namespace detail

/// Teleportation with the classical channel replaced by simulated
/// postselection of Alice's Bell outcome onto 00. Returns the fidelity of
/// Bob's qubit with the input, which stays above 1 - 2^-n.
inline TeleportRun teleport_signal_state(const BornModel& m, int n,
                                         const cvector_t& input_qubit) {
  if (m.delta == 0.0) fail(Errc::ZeroDelta, "teleport gadget needs delta != 0");
  if (n < 1 || n > 60) fail(Errc::OutOfRange, "n out of range");
  if (input_qubit.size() != 2) fail(Errc::DimMismatch, "input must be one qubit");

  // chi (x) (|00>+|11>)/sqrt(2), then CNOT(0->1) and H on qubit 0; Alice's
  // computational outcome on qubits 0,1 is then a Bell measurement.
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  cvector_t st(8, 0.0);
  for (int x0 = 0; x0 < 2; ++x0)
    for (int x1 = 0; x1 < 2; ++x1)
      st[std::size_t(x0) * 4 + std::size_t(x1) * 2 + std::size_t(x1)] +=
          input_qubit[x0] * inv_sqrt2;
  cvector_t tmp(8, 0.0);
  for (int x0 = 0; x0 < 2; ++x0)  // CNOT qubit0 -> qubit1
    for (int x1 = 0; x1 < 2; ++x1)
      for (int x2 = 0; x2 < 2; ++x2)
        tmp[std::size_t(x0) * 4 + std::size_t(x1 ^ x0) * 2 + std::size_t(x2)] =
            st[std::size_t(x0) * 4 + std::size_t(x1) * 2 + std::size_t(x2)];
  st = tmp;
  for (int x1 = 0; x1 < 2; ++x1)  // H on qubit 0
    for (int x2 = 0; x2 < 2; ++x2) {
      std::size_t lo = std::size_t(x1) * 2 + std::size_t(x2);
      complex_t a = st[lo], b = st[4 + lo];
      st[lo] = (a + b) * inv_sqrt2;
      st[4 + lo] = (a - b) * inv_sqrt2;
    }

  WeightedBranches branches;
  std::vector<cvector_t> payloads(4);
  for (int mm = 0; mm < 4; ++mm) {
    payloads[mm] = {st[std::size_t(mm) * 2], st[std::size_t(mm) * 2 + 1]};
    branches.push_back(branch_from_payload(mm, payloads[mm], m));
  }

  int k = detail::teleport_ancillas(m, n);
  PostselectResult ps = simulate_postselect(branches, m, k, /*keep=*/0);

  rvector_t mass(4, 0.0);
  double total = 0.0;
  for (const auto& b : ps.branches) {
    mass[static_cast<std::size_t>(b.label)] = branch_mass(b, m);
    total += branch_mass(b, m);
  }
  double fidelity = 0.0;
  for (int mm = 0; mm < 4; ++mm) {
    double nn = norm2(payloads[mm]);
    if (nn <= 0.0) continue;
    complex_t ov = inner(input_qubit, payloads[mm]) / nn;
    fidelity += mass[std::size_t(mm)] / total * std::norm(ov);
  }
  return TeleportRun{fidelity, k, ps.leakage};
}

inline TeleportRun teleport_signal(const BornModel& m, int n, Rng& rng) {
  return teleport_signal_state(m, n, qcore::haar_vector(2, rng));
}

struct BornSearchRun {
  SearchDecision decision = SearchDecision::ZeroSolutions;
  int ancilla_k = 0;
  int oracle_queries = 0;
};

/// Ancilla weight used by born_search: enough spreading to push the
/// unmarked branch's mass ratio (2^n - 1)^(2+delta) two bits below the
/// marked branch.
inline int born_search_ancillas(int n_bits, const BornModel& m) {
  double l = std::log2(std::ldexp(1.0, n_bits) - 1.0);
  return static_cast<int>(
      std::ceil(2.0 / std::abs(m.delta) * (m.p() * l + 2.0)));
}

/// Single-query search decision via the postselection gadget: prepare the
/// flag-qubit pair, postselect toward |1> and take the majority of 100
/// modified-Born samples. A missing solution leaves the |1> branch at exactly
/// zero amplitude, so the two cases cannot be confused by the gadget.
inline BornSearchRun born_search(SearchInstance& inst, const BornModel& m,
                                 Rng& rng) {
  if (m.delta == 0.0) fail(Errc::ZeroDelta, "born_search needs delta != 0");
  int k = born_search_ancillas(inst.n_bits, m);
  auto prep = prepare_search_state(inst, rng);
  if (prep.certified_solution)
    return BornSearchRun{SearchDecision::OneSolution, k, 1};

  double t0 = prep.tan_theta0;
  double c0 = 1.0 / std::sqrt(1.0 + t0 * t0);
  WeightedBranches branches{WeightedBranch{0, complex_t(c0), 1.0},
                            WeightedBranch{1, complex_t(c0 * t0), 1.0}};
  PostselectResult ps = simulate_postselect(branches, m, k, /*keep=*/1);
  int ones = 0;
  for (int t = 0; t < 100; ++t)
    if (born_sample(ps.effective, m, rng) == 1) ++ones;
  return BornSearchRun{ones > 50 ? SearchDecision::OneSolution
                                 : SearchDecision::ZeroSolutions,
                       k, 1};
}

/// First-order lower bound on |delta| implied by a signaling protocol with
/// bias epsilon on n qubits: epsilon / n.
inline double delta_bound_from_signaling(double epsilon, int n) {
  if (epsilon <= 0.0 || epsilon > 1.0 || n < 1)
    fail(Errc::OutOfRange, "need 0 < epsilon <= 1 and n >= 1");
  return epsilon / static_cast<double>(n);
}

/// First-order lower bound on |delta| implied by a Q-query search of N items
/// on m qubits: max(0, (1/6 - 2Q/sqrt(N)) / m).
inline double delta_bound_from_search(std::int64_t queries, std::int64_t n_items,
                                      int m_qubits) {
  if (n_items < 4 || m_qubits < 1 || queries < 0)
    fail(Errc::OutOfRange, "need N >= 4, m >= 1, Q >= 0");
  double v = (1.0 / 6.0 - 2.0 * static_cast<double>(queries) /
                              std::sqrt(static_cast<double>(n_items))) /
             static_cast<double>(m_qubits);
  return std::max(0.0, v);
}

/// Candidate measurement rule: amplitude -> nonnegative weight.
using AmplitudeRule = std::function<double(complex_t)>;

struct ScaleCheckResult {
  bool passed = true;
  std::string witness;  // empty when passed
};

namespace detail {

inline bool rule_distribution(const AmplitudeRule& f, const cvector_t& amps,
                              rvector_t& out) {
  out.assign(amps.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    out[i] = f(amps[i]);
    total += out[i];
  }
  if (!(total > 0.0)) return false;
  for (auto& v : out) v /= total;
  return true;
}

inline std::string describe_amps(const cvector_t& amps) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (i) os << ", ";
    os << amps[i].real() << (amps[i].imag() < 0 ? "-" : "+")
       << std::abs(amps[i].imag()) << "i";
  }
  os << "]";
  return os.str();
}

inline complex_t disk_point(Rng& rng) {
  double r = std::sqrt(rng.uniform());
  double t = rng.uniform(0.0, 6.283185307179586);
  return {r * std::cos(t), r * std::sin(t)};
}

}  // namespace detail

/// Property check behind the power-law uniqueness statement: a rule that is
/// not |alpha|^p either changes outcome probabilities under rescaling of the
/// state (including pure phases) or breaks p_{xy} = p_x p_y on tensor
/// products. Returns the first violating witness found.
inline ScaleCheckResult scale_invariance_check(const AmplitudeRule& rule,
                                               int trials, Rng& rng) {
  const double tol = 1e-9;
  auto check_scale = [&](const cvector_t& amps, complex_t k) -> bool {
    rvector_t p, pk;
    cvector_t scaled(amps);
    for (auto& a : scaled) a *= k;
    if (!detail::rule_distribution(rule, amps, p) ||
        !detail::rule_distribution(rule, scaled, pk))
      return true;  // degenerate sample, skip
    for (std::size_t i = 0; i < p.size(); ++i)
      if (std::abs(p[i] - pk[i]) > tol) return false;
    return true;
  };
  auto check_tensor = [&](const cvector_t& a, const cvector_t& b) -> bool {
    rvector_t pa, pb, pab;
    cvector_t prod(a.size() * b.size());
    for (std::size_t x = 0; x < a.size(); ++x)
      for (std::size_t y = 0; y < b.size(); ++y)
        prod[x * b.size() + y] = a[x] * b[y];
    if (!detail::rule_distribution(rule, a, pa) ||
        !detail::rule_distribution(rule, b, pb) ||
        !detail::rule_distribution(rule, prod, pab))
      return true;
    for (std::size_t x = 0; x < a.size(); ++x)
      for (std::size_t y = 0; y < b.size(); ++y)
        if (std::abs(pab[x * b.size() + y] - pa[x] * pb[y]) > tol) return false;
    return true;
  };

  // Canonical probes first, so textbook counterexamples surface with a
  // reproducible witness before any random exploration.
  cvector_t probe{complex_t(std::sqrt(1.0 / 3.0)), complex_t(std::sqrt(2.0 / 3.0))};
  std::vector<complex_t> probe_scalars{complex_t(0.5),
                                       std::polar(1.0, 1.0),
                                       std::polar(0.75, 2.3)};
  for (auto k : probe_scalars) {
    if (!check_scale(probe, k)) {
      return {false, "scale violation on " + detail::describe_amps(probe) +
                         " with k = " + detail::describe_amps({k})};
    }
  }
  if (!check_tensor(probe, {complex_t(0.6), complex_t(0.8)}))
    return {false, "tensor-product violation on canonical probe"};

  for (int t = 0; t < trials; ++t) {
    std::size_t d = 2 + rng.below(3);
    cvector_t amps(d);
    double biggest = 0.0;
    for (auto& a : amps) {
      a = detail::disk_point(rng);
      biggest = std::max(biggest, std::abs(a));
    }
    if (biggest < 0.1) continue;
    complex_t k;
    switch (t % 3) {
      case 0: k = std::polar(1.0, rng.uniform(0.0, 6.283185307179586)); break;
      case 1: k = complex_t(rng.uniform(0.05, 1.0)); break;
      default: k = detail::disk_point(rng); break;
    }
    if (std::abs(k) < 0.05) k = complex_t(0.5);
    if (!check_scale(amps, k)) {
      return {false, "scale violation on " + detail::describe_amps(amps) +
                         " with k = " + detail::describe_amps({k})};
    }
    cvector_t other(2 + rng.below(2));
    for (auto& a : other) a = detail::disk_point(rng);
    if (norm2(other) < 0.1) continue;
    if (!check_tensor(amps, other)) {
      return {false, "tensor-product violation on " +
                         detail::describe_amps(amps) + " (x) " +
                         detail::describe_amps(other)};
    }
  }
  return {true, ""};
}

}  // namespace qxsim::born

#endif  // QXSIM_BORN_HPP_
