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

#ifndef QXSIM_GENPOST_HPP_
#define QXSIM_GENPOST_HPP_

#include <cmath>
#include <utility>
#include <vector>

#include "qxsim/qcore.hpp"

namespace qxsim::genpost {

using qcore::PureState;

/// Postselection onto one arbitrary but fixed n-qubit state: every use of
/// the "gate" targets the same |psi>.
struct GenericPostselector {
  PureState psi;
  int n = 0;
};

inline GenericPostselector make_postselector(PureState psi) {
  int n = static_cast<int>(psi.dims.size());
  for (auto d : psi.dims)
    if (d != 2) fail(Errc::NotAQubit, "postselector state must live on qubits");
  if (n < 1 || n > 6)
    fail(Errc::DimTooLarge, "postselector supports 1..6 qubits");
  return GenericPostselector{std::move(psi), n};
}

inline GenericPostselector haar_postselector(int n, Rng& rng) {
  if (n < 1 || n > 6) fail(Errc::DimTooLarge, "postselector supports 1..6 qubits");
  return make_postselector(qcore::haar_state(static_cast<std::size_t>(n), rng));
}

/// Extracts a copy of the postselector's state by preparing the maximally
/// entangled state sum_x |x>|x> and postselecting the second register.
/// Bare projection returns the complex conjugate of |psi|; passing
/// exact_copy = true conjugates the projection target instead, so the output
/// is |psi> itself.
inline PureState extract_copy(const GenericPostselector& g,
                              bool exact_copy = false) {
  const std::size_t n_dim = std::size_t(1) << g.n;
  cvector_t target = g.psi.amps;
  if (exact_copy)
    for (auto& a : target) a = std::conj(a);
  // |Phi> = sum_x |x>|x> / sqrt(N), then <target| on the second register.
  const double amp = 1.0 / std::sqrt(static_cast<double>(n_dim));
  cvector_t phi(n_dim * n_dim, 0.0);
  for (std::size_t x = 0; x < n_dim; ++x) phi[x * n_dim + x] = amp;
  cvector_t out(n_dim, 0.0);
  for (std::size_t x = 0; x < n_dim; ++x)
    for (std::size_t y = 0; y < n_dim; ++y)
      out[x] += std::conj(target[y]) * phi[x * n_dim + y];
  if (norm2(out) <= kZeroThreshold)
    fail(Errc::ZeroOverlap, "projection annihilated the entangled state");
  return qcore::normalize(out, g.psi.dims);
}

/// Which single-qubit twist distinguishes the two register copies inside the
/// gadget: sigma_x on the first qubit, or Z on the first qubit.
enum class GadgetVariant { XOnFirstQubit, ZOnFirstQubit };

inline cvector_t twisted_state(const GenericPostselector& g,
                               GadgetVariant variant) {
  const std::size_t n_dim = std::size_t(1) << g.n;
  const std::size_t top_bit = n_dim >> 1;
  cvector_t out(n_dim);
  if (variant == GadgetVariant::XOnFirstQubit) {
    for (std::size_t y = 0; y < n_dim; ++y) out[y ^ top_bit] = g.psi.amps[y];
  } else {
    for (std::size_t y = 0; y < n_dim; ++y)
      out[y] = ((y & top_bit) ? -1.0 : 1.0) * g.psi.amps[y];
  }
  return out;
}

struct GadgetResult {
  PureState out;                  // designated qubit + payload, renormalized
  double residual_amplitude = 0;  // |1>-branch weight left on that qubit
  complex_t overlap = 0.0;        // <psi| twist |psi>, the suppression factor
};

/// Simulated postselection onto |0> using only the generic |psi> gate:
///   control qubit --*----------------
///   twist(|psi>)  --X-- SWAP --------       (discarded)
///   |psi>         ----- SWAP -- <psi|       (postselected)
/// The full 1 + payload + 2n qubit state is built, the controlled SWAP
/// applied, and the bottom register projected onto |psi>. Each control
/// branch then holds its middle register in a known pure state, which is
/// projected out exactly, leaving the designated qubit + payload.
inline GadgetResult gadget_postselect_zero(
    const GenericPostselector& g, const PureState& input,
    GadgetVariant variant = GadgetVariant::XOnFirstQubit) {
  if (input.dims.empty() || input.dims[0] != 2)
    fail(Errc::NotAQubit, "first subsystem must be the designated qubit");
  const std::size_t n_dim = std::size_t(1) << g.n;
  const std::size_t payload = input.dim() / 2;
  const cvector_t twisted = twisted_state(g, variant);
  const cvector_t& psi = g.psi.amps;

  // State after the controlled SWAP, bottom register projected onto |psi>:
  // xi[t, j, mid] = sum_bot conj(psi[bot]) * chi[t, j, mid, bot], where the
  // t = 0 branch holds (mid, bot) = (twisted, psi) and the t = 1 branch the
  // swapped pair (psi, twisted).
  Mat xi0(payload, n_dim);
  Mat xi1(payload, n_dim);
  complex_t psi_norm_sq = inner(psi, psi);       // = 1 for a valid gate state
  complex_t bottom_proj = inner(psi, twisted);   // suppression of the 1 branch
  for (std::size_t j = 0; j < payload; ++j) {
    complex_t a0 = input.amps[j];
    complex_t a1 = input.amps[payload + j];
    for (std::size_t mid = 0; mid < n_dim; ++mid) {
      xi0(j, mid) = a0 * twisted[mid] * psi_norm_sq;
      xi1(j, mid) = a1 * psi[mid] * bottom_proj;
    }
  }
  // Each branch's middle register sits in a known pure state; projecting it
  // out is exact and leaves the designated qubit + payload.
  cvector_t out(2 * payload, 0.0);
  for (std::size_t j = 0; j < payload; ++j) {
    complex_t b0 = 0.0, b1 = 0.0;
    for (std::size_t mid = 0; mid < n_dim; ++mid) {
      b0 += std::conj(twisted[mid]) * xi0(j, mid);
      b1 += std::conj(psi[mid]) * xi1(j, mid);
    }
    out[j] = b0;
    out[payload + j] = b1;
  }
  if (norm2(out) <= kZeroThreshold)
    fail(Errc::ZeroOverlap, "postselection annihilated the state");

  GadgetResult res;
  res.out = qcore::normalize(out, input.dims);
  double w1 = 0.0;
  for (std::size_t j = 0; j < payload; ++j) w1 += std::norm(res.out.amps[payload + j]);
  res.residual_amplitude = std::sqrt(w1);
  res.overlap = bottom_proj;
  return res;
}

struct HaarOverlapResult {
  double mc_estimate = 0.0;
  double exact = 0.0;  // 1/(N+1)
  double std_error = 0.0;
};

/// Monte Carlo mean of |<psi| sigma_x (x) 1 |psi>|^2 over Haar states against
/// the fourth-moment value (N-1)/(N^2-1) = 1/(N+1).
inline HaarOverlapResult haar_rms_overlap(int n, int samples, Rng& rng) {
  if (n < 1 || n > 10) fail(Errc::DimTooLarge, "haar_rms_overlap supports 1..10 qubits");
  if (samples < 100) fail(Errc::OutOfRange, "need at least 100 samples");
  const std::size_t n_dim = std::size_t(1) << n;
  const std::size_t top_bit = n_dim >> 1;
  double sum = 0.0, sumsq = 0.0;
  for (int t = 0; t < samples; ++t) {
    PureState psi = qcore::haar_state(static_cast<std::size_t>(n), rng);
    complex_t ov = 0.0;
    for (std::size_t y = 0; y < n_dim; ++y)
      ov += std::conj(psi.amps[y]) * psi.amps[y ^ top_bit];
    double v = std::norm(ov);
    sum += v;
    sumsq += v * v;
  }
  HaarOverlapResult out;
  out.mc_estimate = sum / samples;
  out.exact = 1.0 / (static_cast<double>(n_dim) + 1.0);
  double var = std::max(0.0, sumsq / samples - out.mc_estimate * out.mc_estimate);
  out.std_error = std::sqrt(var / samples);
  return out;
}

}  // namespace qxsim::genpost

#endif  // QXSIM_GENPOST_HPP_
