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

#ifndef QXSIM_QCORE_HPP_
#define QXSIM_QCORE_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "qxsim/linalg.hpp"

namespace qxsim::qcore {

/// Normalized pure state over a list of subsystem dimensions. The first
/// subsystem is the most significant index digit: for dims {d0, d1} the
/// flat index of basis state |x0, x1> is x0*d1 + x1.
struct PureState {
  std::vector<std::size_t> dims;
  cvector_t amps;

  std::size_t dim() const { return amps.size(); }
  std::size_t subsystems() const { return dims.size(); }
};

/// Hermitian, PSD, trace-one matrix over subsystem dimensions.
struct DensityMatrix {
  std::vector<std::size_t> dims;
  Mat mat;

  std::size_t dim() const { return mat.rows; }
};

/// Probabilistic ensemble of pure states. With nonlinear dynamics in play a
/// density matrix is not a faithful summary of a measurement's branches, so
/// protocol code carries the branches explicitly.
struct PureEnsemble {
  std::vector<std::pair<double, PureState>> members;
};

inline std::size_t product(const std::vector<std::size_t>& dims) {
  std::size_t p = 1;
  for (auto d : dims) p *= d;
  return p;
}

/// normalize: v / ||v||. Rejects vectors below the zero threshold.
inline PureState normalize(const cvector_t& v,
                           std::vector<std::size_t> dims = {}) {
  double n = norm2(v);
  if (n <= kZeroThreshold) fail(Errc::ZeroVector, "cannot normalize ~zero vector");
  if (dims.empty()) dims = {v.size()};
  if (product(dims) != v.size())
    fail(Errc::DimMismatch, "dims do not match vector length");
  if (v.size() > (std::size_t(1) << kMaxPureQubits))
    fail(Errc::DimTooLarge, "pure states are capped at 2^12 dimensions");
  PureState s{std::move(dims), v};
  for (auto& a : s.amps) a /= n;
  return s;
}

inline PureState make_state(std::vector<std::size_t> dims, cvector_t amps) {
  if (product(dims) != amps.size())
    fail(Errc::DimMismatch, "dims do not match amplitude length");
  if (amps.size() > (std::size_t(1) << kMaxPureQubits))
    fail(Errc::DimTooLarge, "pure states are capped at 2^12 dimensions");
  double n = norm2(amps);
  if (std::abs(n - 1.0) > kInvariantTol)
    fail(Errc::NotNormalized, "pure state norm deviates from 1");
  return PureState{std::move(dims), std::move(amps)};
}

/// Checked density-matrix constructor: Hermitian and unit trace within
/// 1e-10, eigenvalues above -1e-10.
inline DensityMatrix make_density(std::vector<std::size_t> dims, Mat m) {
  if (m.rows != m.cols || product(dims) != m.rows)
    fail(Errc::DimMismatch, "density matrix shape mismatch");
  if (m.rows > (std::size_t(1) << kMaxDensityQubits))
    fail(Errc::DimTooLarge, "density matrices are capped at 2^6 dimensions");
  double herm_err = 0.0;
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j)
      herm_err = std::max(herm_err, std::abs(m(i, j) - std::conj(m(j, i))));
  if (herm_err > kInvariantTol) fail(Errc::OutOfRange, "matrix is not Hermitian");
  if (std::abs(trace(m) - complex_t(1.0)) > kInvariantTol)
    fail(Errc::OutOfRange, "density matrix trace deviates from 1");
  rvector_t eig = hermitian_eigenvalues(m);
  if (eig.back() < -kInvariantTol)
    fail(Errc::OutOfRange, "density matrix has a negative eigenvalue");
  return DensityMatrix{std::move(dims), std::move(m)};
}

inline DensityMatrix density_from_pure(const PureState& s) {
  Mat m(s.dim(), s.dim());
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = 0; j < s.dim(); ++j)
      m(i, j) = s.amps[i] * std::conj(s.amps[j]);
  return DensityMatrix{s.dims, std::move(m)};
}

namespace detail {

struct IndexSplit {
  std::vector<std::size_t> keep;       // sorted kept subsystem indices
  std::vector<std::size_t> traced;     // the rest
  std::size_t keep_dim = 1;
  std::size_t traced_dim = 1;
};

inline IndexSplit split_subsystems(const std::vector<std::size_t>& dims,
                                   std::vector<std::size_t> keep) {
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  IndexSplit sp;
  for (auto k : keep)
    if (k >= dims.size()) fail(Errc::BadSubsystem, "subsystem index out of range");
  sp.keep = keep;
  for (std::size_t i = 0; i < dims.size(); ++i)
    if (!std::binary_search(keep.begin(), keep.end(), i)) sp.traced.push_back(i);
  for (auto k : sp.keep) sp.keep_dim *= dims[k];
  for (auto t : sp.traced) sp.traced_dim *= dims[t];
  return sp;
}

// Flat index from per-subsystem digits in (keep digits, traced digits) form.
inline std::size_t flat_index(const std::vector<std::size_t>& dims,
                              const IndexSplit& sp, std::size_t keep_idx,
                              std::size_t traced_idx) {
  std::vector<std::size_t> digit(dims.size(), 0);
  for (auto it = sp.keep.rbegin(); it != sp.keep.rend(); ++it) {
    digit[*it] = keep_idx % dims[*it];
    keep_idx /= dims[*it];
  }
  for (auto it = sp.traced.rbegin(); it != sp.traced.rend(); ++it) {
    digit[*it] = traced_idx % dims[*it];
    traced_idx /= dims[*it];
  }
  std::size_t flat = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) flat = flat * dims[i] + digit[i];
  return flat;
}

}  // namespace detail

/// Partial trace over everything not in `keep`. Kept subsystems stay in
/// ascending original order.
inline DensityMatrix partial_trace(const DensityMatrix& rho,
                                   std::vector<std::size_t> keep) {
  auto sp = detail::split_subsystems(rho.dims, std::move(keep));
  Mat out(sp.keep_dim, sp.keep_dim);
  for (std::size_t i = 0; i < sp.keep_dim; ++i)
    for (std::size_t j = 0; j < sp.keep_dim; ++j) {
      complex_t s = 0.0;
      for (std::size_t t = 0; t < sp.traced_dim; ++t)
        s += rho.mat(detail::flat_index(rho.dims, sp, i, t),
                     detail::flat_index(rho.dims, sp, j, t));
      out(i, j) = s;
    }
  std::vector<std::size_t> kd;
  for (auto k : sp.keep) kd.push_back(rho.dims[k]);
  return DensityMatrix{std::move(kd), std::move(out)};
}

inline DensityMatrix partial_trace_pure(const PureState& s,
                                        std::vector<std::size_t> keep) {
  return partial_trace(density_from_pure(s), std::move(keep));
}

/// Haar-random pure state on n qubits (1..12).
inline PureState haar_state(std::size_t n_qubits, Rng& rng) {
  if (n_qubits < 1 || n_qubits > kMaxPureQubits)
    fail(Errc::DimTooLarge, "haar_state supports 1..12 qubits");
  std::size_t d = std::size_t(1) << n_qubits;
  cvector_t v(d);
  for (auto& a : v) a = rng.complex_normal();
  return normalize(v, std::vector<std::size_t>(n_qubits, 2));
}

/// Haar-random unit vector of arbitrary dimension (internal helper).
inline cvector_t haar_vector(std::size_t dim, Rng& rng) {
  cvector_t v(dim);
  double n = 0.0;
  while (n <= kZeroThreshold) {
    for (auto& a : v) a = rng.complex_normal();
    n = norm2(v);
  }
  for (auto& a : v) a /= n;
  return v;
}

/// Trace distance (1/2)||a - b||_1 via the eigenvalues of the difference.
inline double trace_distance(const DensityMatrix& a, const DensityMatrix& b) {
  if (a.dims != b.dims) fail(Errc::DimMismatch, "trace_distance dims differ");
  Mat d = a.mat;
  for (std::size_t i = 0; i < d.a.size(); ++i) d.a[i] -= b.mat.a[i];
  rvector_t eig = hermitian_eigenvalues(d);
  double s = 0.0;
  for (double e : eig) s += std::abs(e);
  return 0.5 * s;
}

/// Trace distance between pure states: sqrt(1 - |<a|b>|^2).
inline double trace_distance(const PureState& a, const PureState& b) {
  if (a.dims != b.dims) fail(Errc::DimMismatch, "trace_distance dims differ");
  double ov = std::norm(inner(a.amps, b.amps));
  return std::sqrt(std::max(0.0, 1.0 - ov));
}

inline void check_orthonormal(const std::vector<cvector_t>& basis) {
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i; j < basis.size(); ++j) {
      complex_t g = inner(basis[i], basis[j]);
      double want = (i == j) ? 1.0 : 0.0;
      if (std::abs(g - want) > kBasisTol)
        fail(Errc::BadBasis, "basis is not orthonormal");
    }
}

struct MeasureResult {
  std::size_t outcome = 0;
  PureState post;
};

/// Full-register projective measurement in the given orthonormal basis.
/// Sampling is inverse-CDF in ascending outcome-index order.
inline MeasureResult measure(const PureState& s,
                             const std::vector<cvector_t>& basis, Rng& rng) {
  if (basis.size() != s.dim() || basis[0].size() != s.dim())
    fail(Errc::DimMismatch, "basis does not span the state");
  check_orthonormal(basis);
  rvector_t p(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i)
    p[i] = std::norm(inner(basis[i], s.amps));
  double u = rng.uniform();
  double acc = 0.0;
  std::size_t outcome = basis.size() - 1;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) {
      outcome = i;
      break;
    }
  }
  complex_t amp = inner(basis[outcome], s.amps);
  cvector_t post(s.dim());
  for (std::size_t r = 0; r < s.dim(); ++r) post[r] = basis[outcome][r] * amp;
  return MeasureResult{outcome, normalize(post, s.dims)};
}

inline std::vector<cvector_t> computational_basis(std::size_t d) {
  std::vector<cvector_t> b(d, cvector_t(d, 0.0));
  for (std::size_t i = 0; i < d; ++i) b[i][i] = 1.0;
  return b;
}

/// Computational-basis measurement of one subsystem, returning the complete
/// branch ensemble (probability, post-measurement state) instead of a sample.
inline PureEnsemble branch_ensemble(const PureState& s, std::size_t subsystem) {
  if (subsystem >= s.dims.size())
    fail(Errc::BadSubsystem, "subsystem index out of range");
  auto sp = detail::split_subsystems(s.dims, {subsystem});
  PureEnsemble ens;
  for (std::size_t o = 0; o < s.dims[subsystem]; ++o) {
    cvector_t branch(s.dim(), 0.0);
    double p = 0.0;
    for (std::size_t t = 0; t < sp.traced_dim; ++t) {
      std::size_t idx = detail::flat_index(s.dims, sp, o, t);
      branch[idx] = s.amps[idx];
      p += std::norm(s.amps[idx]);
    }
    if (p > kZeroThreshold * kZeroThreshold)
      ens.members.emplace_back(p, normalize(branch, s.dims));
  }
  return ens;
}

}  // namespace qxsim::qcore

#endif  // QXSIM_QCORE_HPP_
