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

#ifndef QXSIM_SEARCH_HPP_
#define QXSIM_SEARCH_HPP_

#include <cmath>
#include <cstdint>
#include <optional>

#include "qxsim/common.hpp"
#include "qxsim/rng.hpp"

namespace qxsim {

/// Unstructured-search instance: list size 2^n_bits with zero or one marked
/// element, plus the oracle-query counter for the owning algorithm.
struct SearchInstance {
  int n_bits = 0;
  std::optional<std::uint64_t> marked;
  int queries = 0;
};

enum class SearchDecision { ZeroSolutions, OneSolution };

/// Single-query state preparation shared by the nonlinear search algorithms:
/// query the bit-flip oracle on the uniform superposition with a fresh flag
/// qubit, Hadamard the index register and measure it. Outcome 0^n (which for
/// s <= 1 happens with probability >= 1 - 2^{1-n}) leaves the flag qubit in
///     ((N-s)|0> + s|1>) / sqrt((N-s)^2 + s^2);
/// any other outcome has amplitude only on marked items, so it certifies a
/// solution outright. The register is never materialized: the outcome
/// probability and the flag-qubit direction follow in closed form.
struct PreparedSearch {
  bool certified_solution = false;
  double tan_theta0 = 0.0;  // flag-qubit |1>/|0> amplitude ratio
};

inline PreparedSearch prepare_search_state(SearchInstance& inst, Rng& rng) {
  if (inst.n_bits < 2 || inst.n_bits > 40)
    fail(Errc::OutOfRange, "search size out of range");
  inst.queries += 1;
  const double n_items = std::ldexp(1.0, inst.n_bits);
  const double s = inst.marked ? 1.0 : 0.0;
  PreparedSearch prep;
  if (s == 0.0) return prep;
  double p_zero_register =
      ((n_items - s) * (n_items - s) + s * s) / (n_items * n_items);
  if (rng.uniform() >= p_zero_register) {
    prep.certified_solution = true;
    return prep;
  }
  prep.tan_theta0 = s / (n_items - s);
  return prep;
}

}  // namespace qxsim

#endif  // QXSIM_SEARCH_HPP_
