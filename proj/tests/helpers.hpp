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

#ifndef QXSIM_TESTS_HELPERS_HPP_
#define QXSIM_TESTS_HELPERS_HPP_

#include <cmath>
#include <cstdlib>
#include <string>

#include "qxsim/qcore.hpp"

namespace test_helpers {

using namespace qxsim;

/// Random density matrix: G G^H / tr(G G^H) with Ginibre G, full rank a.s.
inline qcore::DensityMatrix random_density(std::vector<std::size_t> dims,
                                           Rng& rng) {
  std::size_t d = 1;
  for (auto v : dims) d *= v;
  Mat g(d, d);
  for (auto& v : g.a) v = rng.complex_normal();
  Mat m = matmul(g, adjoint(g));
  complex_t tr = trace(m);
  for (auto& v : m.a) v /= tr;
  return qcore::DensityMatrix{std::move(dims), std::move(m)};
}

/// Random complex square matrix with N(0,1) entries.
inline Mat random_matrix(std::size_t d, Rng& rng) {
  Mat g(d, d);
  for (auto& v : g.a) v = rng.complex_normal();
  return g;
}

/// 99.9% chi-squared critical value via the Wilson-Hilferty approximation;
/// generous enough for seeded frequency tests.
inline double chi2_crit999(int df) {
  double z = 3.0902;  // 99.9% normal quantile
  double t = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
  return df * t * t * t;
}

inline double chi2_statistic(const std::vector<long>& counts,
                             const rvector_t& probs, long total) {
  double stat = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    double expect = probs[i] * double(total);
    if (expect < 1e-12) continue;
    double diff = double(counts[i]) - expect;
    stat += diff * diff / expect;
  }
  return stat;
}

inline const char* qxsim_binary() { return std::getenv("QXSIM_BIN"); }

}  // namespace test_helpers

#endif  // QXSIM_TESTS_HELPERS_HPP_
