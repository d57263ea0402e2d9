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

#ifndef QXSIM_LINALG_HPP_
#define QXSIM_LINALG_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "qxsim/common.hpp"
#include "qxsim/rng.hpp"

namespace qxsim {

/// Dense row-major complex matrix. Dimensions in this project never exceed
/// 64x64 for anything that hits the O(n^3) paths, so everything below favors
/// clarity over blocking tricks.
struct Mat {
  std::size_t rows = 0;
  std::size_t cols = 0;
  cvector_t a;

  Mat() = default;
  Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c) {}

  complex_t& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
  const complex_t& operator()(std::size_t i, std::size_t j) const {
    return a[i * cols + j];
  }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static Mat diag(const cvector_t& d) {
    Mat m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }
};

inline complex_t inner(const cvector_t& x, const cvector_t& y) {
  complex_t s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::conj(x[i]) * y[i];
  return s;
}

inline double norm2(const cvector_t& x) {
  double s = 0.0;
  for (const auto& v : x) s += std::norm(v);
  return std::sqrt(s);
}

inline void scale(cvector_t& x, complex_t c) {
  for (auto& v : x) v *= c;
}

inline cvector_t matvec(const Mat& m, const cvector_t& x) {
  if (m.cols != x.size()) fail(Errc::DimMismatch, "matvec size mismatch");
  cvector_t y(m.rows, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    complex_t s = 0.0;
    for (std::size_t j = 0; j < m.cols; ++j) s += m(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

inline Mat matmul(const Mat& l, const Mat& r) {
  if (l.cols != r.rows) fail(Errc::DimMismatch, "matmul size mismatch");
  Mat out(l.rows, r.cols);
  for (std::size_t i = 0; i < l.rows; ++i)
    for (std::size_t k = 0; k < l.cols; ++k) {
      complex_t lik = l(i, k);
      if (lik == complex_t(0.0)) continue;
      for (std::size_t j = 0; j < r.cols; ++j) out(i, j) += lik * r(k, j);
    }
  return out;
}

inline Mat adjoint(const Mat& m) {
  Mat out(m.cols, m.rows);
  for (std::size_t i = 0; i < m.rows; ++i)
    for (std::size_t j = 0; j < m.cols; ++j) out(j, i) = std::conj(m(i, j));
  return out;
}

inline Mat kron(const Mat& l, const Mat& r) {
  Mat out(l.rows * r.rows, l.cols * r.cols);
  for (std::size_t i = 0; i < l.rows; ++i)
    for (std::size_t j = 0; j < l.cols; ++j) {
      complex_t lij = l(i, j);
      if (lij == complex_t(0.0)) continue;
      for (std::size_t p = 0; p < r.rows; ++p)
        for (std::size_t q = 0; q < r.cols; ++q)
          out(i * r.rows + p, j * r.cols + q) = lij * r(p, q);
    }
  return out;
}

inline cvector_t kron_vec(const cvector_t& l, const cvector_t& r) {
  cvector_t out(l.size() * r.size());
  for (std::size_t i = 0; i < l.size(); ++i)
    for (std::size_t j = 0; j < r.size(); ++j) out[i * r.size() + j] = l[i] * r[j];
  return out;
}

inline double frobenius_norm(const Mat& m) {
  double s = 0.0;
  for (const auto& v : m.a) s += std::norm(v);
  return std::sqrt(s);
}

inline complex_t trace(const Mat& m) {
  complex_t t = 0.0;
  for (std::size_t i = 0; i < std::min(m.rows, m.cols); ++i) t += m(i, i);
  return t;
}

/// Result of a singular-value decomposition M = sum_i s_i u_i v_i^H.
/// Singular values are sorted descending; u/v columns are orthonormal.
struct SvdData {
  rvector_t singular_values;
  Mat left_vectors;    // columns u_i
  Mat right_vectors;   // columns v_i
  double condition_number = 1.0;  // s_max / s_min, +inf for singular input

  cvector_t left(std::size_t i) const {
    cvector_t v(left_vectors.rows);
    for (std::size_t r = 0; r < left_vectors.rows; ++r) v[r] = left_vectors(r, i);
    return v;
  }
  cvector_t right(std::size_t i) const {
    cvector_t v(right_vectors.rows);
    for (std::size_t r = 0; r < right_vectors.rows; ++r)
      v[r] = right_vectors(r, i);
    return v;
  }
};

namespace detail {

// Orthonormalize `v` against the first `k` columns of basis and append it if
// anything survives. Returns true on success.
inline bool gram_schmidt_append(Mat& basis, std::size_t k, cvector_t v) {
  for (std::size_t pass = 0; pass < 2; ++pass) {
    for (std::size_t j = 0; j < k; ++j) {
      complex_t proj = 0.0;
      for (std::size_t r = 0; r < basis.rows; ++r)
        proj += std::conj(basis(r, j)) * v[r];
      for (std::size_t r = 0; r < basis.rows; ++r) v[r] -= proj * basis(r, j);
    }
  }
  double n = norm2(v);
  if (n < 1e-9) return false;
  for (std::size_t r = 0; r < basis.rows; ++r) basis(r, k) = v[r] / n;
  return true;
}

}  // namespace detail

/// One-sided Jacobi SVD for square complex matrices. Dimensions in this
/// project stay at or below 64, where Jacobi is simple and accurate.
inline SvdData svd(const Mat& m_in) {
  if (m_in.rows != m_in.cols) fail(Errc::DimMismatch, "svd expects square input");
  const std::size_t n = m_in.rows;
  for (const auto& v : m_in.a)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      fail(Errc::OutOfRange, "svd input has non-finite entries");

  Mat a = m_in;              // columns converge to u_i * s_i
  Mat v = Mat::identity(n);  // accumulates right rotations

  const double scale_ref = std::max(frobenius_norm(a), 1e-300);
  const double tol = 1e-15;
  for (int sweep = 0; sweep < 80; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        complex_t gamma = 0.0;
        double alpha = 0.0, beta = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
          gamma += std::conj(a(r, p)) * a(r, q);
          alpha += std::norm(a(r, p));
          beta += std::norm(a(r, q));
        }
        double g = std::abs(gamma);
        off = std::max(off, g);
        if (g <= tol * std::sqrt(alpha * beta) || g <= 1e-280) continue;
        complex_t phase = gamma / g;
        double tau = (beta - alpha) / (2.0 * g);
        double t = (tau >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        // Columns (p,q) <- (c*p - s*conj(phase)*q, s*phase*p + c*q) keeps the
        // rotation unitary after absorbing the phase of gamma.
        for (std::size_t r = 0; r < n; ++r) {
          complex_t ap = a(r, p), aq = a(r, q);
          a(r, p) = c * ap - s * std::conj(phase) * aq;
          a(r, q) = s * phase * ap + c * aq;
        }
        for (std::size_t r = 0; r < n; ++r) {
          complex_t vp = v(r, p), vq = v(r, q);
          v(r, p) = c * vp - s * std::conj(phase) * vq;
          v(r, q) = s * phase * vp + c * vq;
        }
      }
    }
    if (off <= tol * scale_ref) break;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  rvector_t sig(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0.0;
    for (std::size_t r = 0; r < n; ++r) s += std::norm(a(r, j));
    sig[j] = std::sqrt(s);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return sig[x] > sig[y]; });

  SvdData out;
  out.singular_values.resize(n);
  out.left_vectors = Mat(n, n);
  out.right_vectors = Mat(n, n);
  const double rank_tol = 1e-14 * scale_ref;
  std::size_t filled = 0;
  for (std::size_t j = 0; j < n; ++j) {
    std::size_t src = order[j];
    out.singular_values[j] = sig[src];
    for (std::size_t r = 0; r < n; ++r) out.right_vectors(r, j) = v(r, src);
    if (sig[src] > rank_tol) {
      for (std::size_t r = 0; r < n; ++r)
        out.left_vectors(r, j) = a(r, src) / sig[src];
      ++filled;
    }
  }
  // Null-space columns of the left factor: complete to an orthonormal basis.
  for (std::size_t j = filled; j < n; ++j) {
    for (std::size_t e = 0; e < n; ++e) {
      cvector_t cand(n, 0.0);
      cand[(j + e) % n] = 1.0;
      if (detail::gram_schmidt_append(out.left_vectors, j, cand)) break;
    }
  }

  double smin = out.singular_values[n - 1];
  double smax = out.singular_values[0];
  out.condition_number = (smin <= rank_tol)
                             ? std::numeric_limits<double>::infinity()
                             : smax / smin;
  if (smax == 0.0) out.condition_number = std::numeric_limits<double>::infinity();
  return out;
}

/// Eigenvalues of a Hermitian matrix via cyclic Jacobi, sorted descending.
inline rvector_t hermitian_eigenvalues(Mat a) {
  if (a.rows != a.cols) fail(Errc::DimMismatch, "eigenvalues expect square input");
  const std::size_t n = a.rows;
  const double scale_ref = std::max(frobenius_norm(a), 1e-300);
  for (int sweep = 0; sweep < 80; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(a(p, q));
    if (std::sqrt(off) <= 1e-15 * scale_ref) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double g = std::abs(a(p, q));
        if (g <= 1e-18 * scale_ref) continue;
        complex_t phase = a(p, q) / g;
        double app = a(p, p).real();
        double aqq = a(q, q).real();
        double tau = (aqq - app) / (2.0 * g);
        double t = (tau >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        // G column p = (c, -s*conj(phase)), column q = (s*phase, c).
        for (std::size_t r = 0; r < n; ++r) {  // A <- A G
          complex_t arp = a(r, p), arq = a(r, q);
          a(r, p) = c * arp - s * std::conj(phase) * arq;
          a(r, q) = s * phase * arp + c * arq;
        }
        for (std::size_t r = 0; r < n; ++r) {  // A <- G^H A
          complex_t apr = a(p, r), aqr = a(q, r);
          a(p, r) = c * apr - s * phase * aqr;
          a(q, r) = s * std::conj(phase) * apr + c * aqr;
        }
      }
    }
  }
  rvector_t vals(n);
  for (std::size_t i = 0; i < n; ++i) vals[i] = a(i, i).real();
  std::sort(vals.begin(), vals.end(), std::greater<double>());
  return vals;
}

/// Relative geometry of two unit vectors under the projective angle metric
/// acos|<a|b>|. The tangent is the unit component of b orthogonal to a with
/// b's global phase aligned to a, so b = phase * (cos * a + sin * tangent).
struct PairGeometry {
  double cos_angle = 1.0;
  double sin_angle = 0.0;
  cvector_t tangent;
};

inline PairGeometry pair_geometry(const cvector_t& a, const cvector_t& b) {
  PairGeometry g;
  complex_t ov = inner(a, b);
  double c = std::abs(ov);
  complex_t phase = (c > 0.0) ? ov / c : complex_t(1.0);
  cvector_t w(b.size());
  for (std::size_t r = 0; r < b.size(); ++r)
    w[r] = b[r] * std::conj(phase) - a[r] * c;
  double s = norm2(w);
  g.cos_angle = std::min(1.0, c);
  g.sin_angle = s;
  if (s > 0.0) {
    for (auto& v : w) v /= s;
    g.tangent = std::move(w);
  } else {
    g.tangent = cvector_t(b.size(), 0.0);
  }
  return g;
}

/// Projective angle acos|<a|b>| computed stably for small separations.
inline double state_angle(const cvector_t& a, const cvector_t& b) {
  auto g = pair_geometry(a, b);
  return std::atan2(g.sin_angle, g.cos_angle);
}

/// Unitary sending orthonormal frame {src_i} onto orthonormal frame {dst_i};
/// both frames are completed to full bases and the completions are matched.
inline Mat unitary_mapping_frames(const std::vector<cvector_t>& src,
                                  const std::vector<cvector_t>& dst) {
  if (src.empty() || src.size() != dst.size())
    fail(Errc::DimMismatch, "frame sizes differ");
  const std::size_t n = src[0].size();
  Mat sb(n, n), db(n, n);
  for (std::size_t j = 0; j < src.size(); ++j)
    for (std::size_t r = 0; r < n; ++r) {
      sb(r, j) = src[j][r];
      db(r, j) = dst[j][r];
    }
  std::size_t k = src.size();
  for (std::size_t j = k; j < n; ++j) {
    for (std::size_t e = 0; e < n; ++e) {
      cvector_t cand(n, 0.0);
      cand[(j + e) % n] = 1.0;
      if (detail::gram_schmidt_append(sb, j, cand)) break;
    }
    for (std::size_t e = 0; e < n; ++e) {
      cvector_t cand(n, 0.0);
      cand[(j + e) % n] = 1.0;
      if (detail::gram_schmidt_append(db, j, cand)) break;
    }
  }
  return matmul(db, adjoint(sb));
}

/// Haar-random unitary: Gram-Schmidt QR of a complex Ginibre matrix. The
/// Gram-Schmidt Q is the unique factor with positive-real R diagonal, which
/// is the convention that makes the result Haar-distributed.
inline Mat haar_unitary(std::size_t n, Rng& rng) {
  Mat g(n, n);
  for (auto& v : g.a) v = rng.complex_normal();
  Mat q(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    cvector_t col(n);
    for (std::size_t r = 0; r < n; ++r) col[r] = g(r, j);
    for (std::size_t pass = 0; pass < 2; ++pass) {
      for (std::size_t i = 0; i < j; ++i) {
        complex_t proj = 0.0;
        for (std::size_t r = 0; r < n; ++r) proj += std::conj(q(r, i)) * col[r];
        for (std::size_t r = 0; r < n; ++r) col[r] -= proj * q(r, i);
      }
    }
    double nn = norm2(col);
    for (std::size_t r = 0; r < n; ++r) q(r, j) = col[r] / nn;
  }
  return q;
}

}  // namespace qxsim

#endif  // QXSIM_LINALG_HPP_
