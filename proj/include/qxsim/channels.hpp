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

#ifndef QXSIM_CHANNELS_HPP_
#define QXSIM_CHANNELS_HPP_

#include <algorithm>
#include <cmath>

#include "qxsim/common.hpp"

namespace qxsim::channels {

/// Classical binary asymmetric channel: eps0 is the bit-flip probability
/// given input 0, eps1 given input 1.
struct BinaryChannel {
  double eps0 = 0.0;
  double eps1 = 0.0;
};

/// 0 log 0 := 0 everywhere.
inline double xlog2x(double x) { return x > 0.0 ? x * std::log2(x) : 0.0; }

/// Binary entropy in bits.
inline double binary_entropy(double p) { return -xlog2x(p) - xlog2x(1.0 - p); }

/// Shannon entropy of a probability vector, in bits.
inline double entropy(const rvector_t& p) {
  double h = 0.0;
  for (double v : p) h -= xlog2x(v);
  return h;
}

/// Capacity of the binary asymmetric channel in closed form:
///   C = h(1/(1+z)) - log2(z)/(1+z) + eps0 log2(z) - h(eps0),
///   z = 2^[(h(eps1)-h(eps0)) / (1-eps1-eps0)].
/// The degenerate line eps0+eps1 = 1 (output independent of input) returns 0.
inline double capacity_closed_form(const BinaryChannel& ch) {
  double e0 = ch.eps0, e1 = ch.eps1;
  if (e0 < 0.0 || e0 > 1.0 || e1 < 0.0 || e1 > 1.0)
    fail(Errc::OutOfRange, "flip probabilities must lie in [0,1]");
  double denom = 1.0 - e0 - e1;
  // On the degenerate line the outputs carry no information and the exponent
  // below turns into 0/0; capacity is continuous there, so return its limit.
  if (std::abs(denom) < 1e-12) return 0.0;
  double h0 = binary_entropy(e0);
  double h1 = binary_entropy(e1);
  double lz = std::clamp((h1 - h0) / denom, -700.0, 700.0);  // log2(z)
  double z = std::exp2(lz);
  double c = binary_entropy(1.0 / (1.0 + z)) - lz / (1.0 + z) + e0 * lz - h0;
  return std::max(0.0, c);
}

inline double capacity_closed_form(double eps0, double eps1) {
  return capacity_closed_form(BinaryChannel{eps0, eps1});
}

namespace detail {

inline double mutual_information(const BinaryChannel& ch, double p1) {
  // p1 = prior probability of input 1.
  double py1 = (1.0 - p1) * ch.eps0 + p1 * (1.0 - ch.eps1);
  return binary_entropy(py1) -
         ((1.0 - p1) * binary_entropy(ch.eps0) + p1 * binary_entropy(ch.eps1));
}

}  // namespace detail

/// Capacity by direct 1-D maximization of the mutual information over the
/// input prior. Mutual information is concave in the prior, so golden-section
/// search converges to the optimum; this routine is the independent oracle
/// against which the closed form is checked.
inline double capacity_optimized(const BinaryChannel& ch) {
  if (ch.eps0 < 0.0 || ch.eps0 > 1.0 || ch.eps1 < 0.0 || ch.eps1 > 1.0)
    fail(Errc::OutOfRange, "flip probabilities must lie in [0,1]");
  const double invphi = 0.6180339887498948482;
  double a = 0.0, b = 1.0;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = detail::mutual_information(ch, x1);
  double f2 = detail::mutual_information(ch, x2);
  for (int it = 0; it < 200; ++it) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = detail::mutual_information(ch, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = detail::mutual_information(ch, x2);
    }
  }
  return std::max(0.0, std::max(f1, f2));
}

inline double capacity_optimized(double eps0, double eps1) {
  return capacity_optimized(BinaryChannel{eps0, eps1});
}

/// Upper bound on capacity from the total variation distance delta between
/// the two conditional output distributions: C <= delta - delta log2 delta,
/// valid for 0 < delta <= 1/e.
inline double tvd_capacity_bound(double delta) {
  if (delta <= 0.0 || delta > 1.0 / std::exp(1.0))
    fail(Errc::OutOfRegime, "tvd_capacity_bound needs 0 < delta <= 1/e");
  return delta - delta * std::log2(delta);
}

/// Classical Fannes corollary: |H(p)-H(q)| <= T log2 d - T log2 T for
/// distributions on d outcomes at total variation distance T <= 1/e.
inline double fannes_bound(double t, int d) {
  if (t <= 0.0 || t > 1.0 / std::exp(1.0))
    fail(Errc::OutOfRegime, "fannes_bound needs 0 < T <= 1/e");
  if (d < 2) fail(Errc::OutOfRange, "fannes_bound needs d >= 2");
  return t * std::log2(static_cast<double>(d)) - t * std::log2(t);
}

/// Total variation distance: half the l1 distance between distributions.
inline double tvd(const rvector_t& p, const rvector_t& q) {
  if (p.size() != q.size()) fail(Errc::LengthMismatch, "tvd length mismatch");
  double sp = 0.0, sq = 0.0, s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sp += p[i];
    sq += q[i];
    s += std::abs(p[i] - q[i]);
  }
  if (std::abs(sp - 1.0) > kBasisTol || std::abs(sq - 1.0) > kBasisTol)
    fail(Errc::NotNormalized, "tvd inputs must sum to 1");
  return 0.5 * s;
}

/// TVD between the two conditional output distributions of a channel;
/// the delta fed into tvd_capacity_bound.
inline double output_tvd(const BinaryChannel& ch) {
  return std::abs(1.0 - ch.eps0 - ch.eps1);
}

}  // namespace qxsim::channels

#endif  // QXSIM_CHANNELS_HPP_
