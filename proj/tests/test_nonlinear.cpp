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

#include <doctest.h>

#include "helpers.hpp"
#include "qxsim/fsp.hpp"
#include "qxsim/nonlinear.hpp"

using namespace qxsim;
using namespace test_helpers;

TEST_CASE("clone: product and EPR inputs") {
  Rng rng(51, 0);
  // Pure unentangled input: |psi><psi| -> |psi><psi| (x) |psi><psi|.
  auto psi = qcore::haar_state(1, rng);
  auto rho = qcore::density_from_pure(psi);
  auto cl = nonlinear::clone(rho, 0);
  Mat expect = kron(rho.mat, rho.mat);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(std::abs(cl.mat(i, j) - expect(i, j)) < 1e-12);

  // EPR with the copy taken from B: rho_AB (x) I/2.
  double q = 1.0 / std::sqrt(2.0);
  auto epr = qcore::density_from_pure(qcore::make_state({2, 2}, {q, 0, 0, q}));
  auto cl2 = nonlinear::clone(epr, 1);
  auto copy = qcore::partial_trace(cl2, {2});
  CHECK(std::abs(copy.mat(0, 0) - complex_t(0.5)) < 1e-12);
  CHECK(std::abs(copy.mat(0, 1)) < 1e-12);
  // The original pair keeps its entanglement.
  auto pair = qcore::partial_trace(cl2, {0, 1});
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      CHECK(std::abs(pair.mat(i, j) - epr.mat(i, j)) < 1e-12);
}

TEST_CASE("clone: both output positions share the reduced state") {
  Rng rng(52, 0);
  for (int t = 0; t < 30; ++t) {
    auto rho = random_density({2, 2}, rng);
    auto cl = nonlinear::clone(rho, 1);
    auto orig = qcore::partial_trace(cl, {1});
    auto copy = qcore::partial_trace(cl, {2});
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        CHECK(std::abs(orig.mat(i, j) - copy.mat(i, j)) < 1e-12);
    CHECK(std::abs(trace(cl.mat) - complex_t(1.0)) < 1e-12);
    // Non-target subsystem untouched.
    auto before = qcore::partial_trace(rho, {0});
    auto after = qcore::partial_trace(cl, {0});
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        CHECK(std::abs(before.mat(i, j) - after.mat(i, j)) < 1e-12);
  }
  auto qutrit = random_density({3}, rng);
  CHECK_THROWS_AS(nonlinear::clone(qutrit, 0), Error);
}

TEST_CASE("cnot_clone_map: fixed points") {
  for (double r : {0.0, 0.3, 1.0}) {
    Mat m(2, 2);
    m(0, 0) = r;
    m(1, 1) = 1.0 - r;
    qcore::DensityMatrix rho{{2}, m};
    auto out = nonlinear::cnot_clone_map(rho);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        CHECK(std::abs(out.mat(i, j) - rho.mat(i, j)) < 1e-12);
  }
  auto plus = nonlinear::rho_plus();
  auto out = nonlinear::cnot_clone_map(plus);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(std::abs(out.mat(i, j) - plus.mat(i, j)) < 1e-12);
}

TEST_CASE("cnot_clone_map: epsilon recursion, exactly on dyadic inputs") {
  // rho_eps evolves off-diagonals as eps' = 2 eps - 2 eps^2; for dyadic eps
  // every intermediate is exactly representable, so equality is bitwise.
  for (int e = 1; e <= 20; ++e) {
    double eps = std::ldexp(1.0, -e);
    auto out = nonlinear::cnot_clone_map(nonlinear::rho_eps(eps));
    double eps_next = 2.0 * eps - 2.0 * eps * eps;
    CHECK(out.mat(0, 1).real() == 0.5 - eps_next);
  }
  // Generic eps to rounding accuracy, including the worked 0.1 -> 0.18 case.
  auto out = nonlinear::cnot_clone_map(nonlinear::rho_eps(0.1));
  CHECK(std::abs(out.mat(0, 1).real() - 0.32) < 1e-15);
  for (double eps : {0.013, 0.21, 0.37}) {
    auto o = nonlinear::cnot_clone_map(nonlinear::rho_eps(eps));
    CHECK(std::abs(o.mat(0, 1).real() - (0.5 - (2 * eps - 2 * eps * eps))) < 1e-15);
  }
}

TEST_CASE("cnot_clone_map equals its gadget on random density matrices") {
  Rng rng(53, 0);
  for (int t = 0; t < 1000; ++t) {
    auto rho = random_density({2}, rng);
    auto closed = nonlinear::cnot_clone_map(rho);
    auto gadget = nonlinear::cnot_clone_gadget(rho);
    for (std::size_t i = 0; i < 2; ++i)
      for (std::size_t j = 0; j < 2; ++j)
        CHECK(std::abs(closed.mat(i, j) - gadget.mat(i, j)) <= 1e-12);
    CHECK(std::abs(trace(closed.mat) - complex_t(1.0)) <= 1e-12);
  }
}

TEST_CASE("cnot_clone_map: no spurious fixed points among random states") {
  Rng rng(54, 0);
  int fixed = 0;
  for (int t = 0; t < 1000; ++t) {
    auto rho = random_density({2}, rng);
    auto out = nonlinear::cnot_clone_map(rho);
    double diff = 0.0;
    for (std::size_t i = 0; i < 4; ++i) diff += std::abs(out.mat.a[i] - rho.mat.a[i]);
    // Random full-rank states sit in the attraction basin, not on the
    // fixed-point set, unless they happen to be (numerically) diagonal.
    bool near_diagonal = std::abs(rho.mat(0, 1)) < 1e-6;
    if (diff < 1e-9 && !near_diagonal) ++fixed;
  }
  CHECK(fixed == 0);
}

TEST_CASE("clone_search decides both cases within the iteration budget") {
  for (int n : {10, 20}) {
    for (int r = 0; r < 40; ++r) {
      Rng rng(55, n * 100 + r);
      SearchInstance inst;
      inst.n_bits = n;
      if (r % 2) inst.marked = 2;
      auto run = nonlinear::clone_search(inst, rng);
      CHECK(inst.queries == 1);
      CHECK(run.iterations <= n + 6);
      CHECK((run.decision == SearchDecision::OneSolution) == inst.marked.has_value());
    }
  }
}

TEST_CASE("clone_signal frequencies") {
  {
    Rng rng(56, 0);
    auto res = nonlinear::clone_signal(1, 2000, rng);
    CHECK(res.channel.eps0 == 1.0);  // a single bit is trivially all-equal
    CHECK(res.channel.eps1 == 0.0);
    CHECK(res.unmeasured_all_equal_freq == 1.0);
  }
  {
    Rng rng(56, 1);
    auto res = nonlinear::clone_signal(5, 10000, rng);
    CHECK(res.measured_all_equal_freq == 1.0);
    double p = std::exp2(-4.0);
    double sigma = std::sqrt(p * (1 - p) / 10000.0);
    CHECK(std::abs(res.unmeasured_all_equal_freq - p) <= 3.0 * sigma);
    CHECK(res.channel.eps0 == p);
  }
  Rng rng(56, 2);
  CHECK_THROWS_AS(nonlinear::clone_signal(0, 10, rng), Error);
}

namespace {

nonlinear::NonlinearMap map_from_kappa(double kappa) {
  auto m = fsp::diag_map({1.0, kappa});
  return nonlinear::NonlinearMap{2, [m](const cvector_t& v) {
                                   return fsp::apply_map_raw(m, v);
                                 }};
}

}  // namespace

TEST_CASE("estimate_magnification: unitary maps sit at r = 1") {
  Rng urng(57, 0);
  Mat u = haar_unitary(2, urng);
  nonlinear::NonlinearMap s{2, [u](const cvector_t& v) {
                              cvector_t w = matvec(u, v);
                              double n = norm2(w);
                              for (auto& x : w) x /= n;
                              return w;
                            }};
  Rng rng(57, 1);
  auto est = nonlinear::estimate_magnification(s, 500, rng);
  CHECK(std::abs(est.r - 1.0) < 1e-6);
}

TEST_CASE("estimate_magnification recovers the condition number") {
  int idx = 0;
  for (double kappa : {1.1, 1.5, 2.0}) {
    Rng rng(58, idx++);
    auto est = nonlinear::estimate_magnification(map_from_kappa(kappa), 1000, rng);
    CHECK(est.r <= kappa + 1e-9);  // reported value is a lower bound
    CHECK(est.r >= 0.95 * kappa);
  }
}

TEST_CASE("estimate_magnification finds the extreme gain in dimension 3") {
  auto m = fsp::make_map(Mat::diag({1.0, 1.2, 2.0}));
  nonlinear::NonlinearMap s{3, [m](const cvector_t& v) {
                              return fsp::apply_map_raw(m, v);
                            }};
  Rng rng(58, 10);
  auto est = nonlinear::estimate_magnification(s, 1000, rng);
  CHECK(est.r <= 2.0 + 1e-9);
  CHECK(est.r >= 0.9 * 2.0);
}

TEST_CASE("clone refuses to grow past the density-matrix cap") {
  Rng rng(58, 20);
  auto rho = random_density({2, 2, 2, 2, 2, 2}, rng);  // six qubits, at the cap
  CHECK_THROWS_AS(nonlinear::clone(rho, 0), Error);
}

TEST_CASE("nonlinear_amplify: trivial, budgeted, and halving behavior") {
  auto s = map_from_kappa(2.0);
  Rng rng(59, 0);
  auto est = nonlinear::estimate_magnification(s, 1000, rng);

  // Separation already at target: no work.
  auto wide_a = qcore::normalize({1.0, 0.0});
  auto wide_b = qcore::normalize({0.0, 1.0});
  CHECK(nonlinear::nonlinear_amplify(s, wide_a, wide_b, 0.3, est) == 0);

  double angle = std::ldexp(1.0, -20);
  auto a = qcore::normalize({1.0, 0.0});
  auto b = qcore::normalize({std::cos(angle), std::sin(angle)});
  int iters = nonlinear::nonlinear_amplify(s, a, b, 0.3, est);
  CHECK(iters <= 30);
  CHECK(iters >= 10);

  // Iterations scale like 1/log(r): going 1.5 -> 2.25 halves them (+-2).
  Rng r1(59, 1), r2(59, 2);
  auto s15 = map_from_kappa(1.5);
  auto s225 = map_from_kappa(2.25);
  auto e15 = nonlinear::estimate_magnification(s15, 1000, r1);
  auto e225 = nonlinear::estimate_magnification(s225, 1000, r2);
  int i15 = nonlinear::nonlinear_amplify(s15, a, b, 0.3, e15);
  int i225 = nonlinear::nonlinear_amplify(s225, a, b, 0.3, e225);
  CHECK(std::abs(i225 - (i15 + 1) / 2) <= 2);

  nonlinear::MagnificationEstimate flat;
  flat.r = 1.0;
  flat.segment_a = {1.0, 0.0};
  flat.segment_b = {std::cos(0.01), std::sin(0.01)};
  CHECK_THROWS_AS(nonlinear::nonlinear_amplify(s, a, b, 0.3, flat), Error);
}

TEST_CASE("schmidt ambiguity demo") {
  auto demo = nonlinear::schmidt_ambiguity_demo();
  double q = 1.0 / std::sqrt(2.0);
  cvector_t zero_plus{q, q, 0.0, 0.0};
  cvector_t zero_zero{1.0, 0.0, 0.0, 0.0};
  CHECK(std::abs(std::abs(inner(zero_plus, demo.from_computational.amps)) - 1.0) <
        1e-12);
  CHECK(std::abs(std::abs(inner(zero_zero, demo.from_hadamard.amps)) - 1.0) < 1e-12);
  CHECK(std::abs(demo.second_factor_trace_distance - q) <= 1e-12);
}

TEST_CASE("naive rule is unambiguous on product states") {
  Rng rng(60, 0);
  auto first = qcore::haar_vector(2, rng);
  auto second = qcore::haar_vector(2, rng);
  // Write |a>|b> over two different bases of the first factor.
  Mat u = haar_unitary(2, rng);
  cvector_t e0{u(0, 0), u(1, 0)}, e1{u(0, 1), u(1, 1)};
  complex_t c0 = inner(e0, first), c1 = inner(e1, first);
  auto in_computational = nonlinear::apply_naive_rule(
      {{first[0], second}, {first[1], second}});
  auto in_rotated = nonlinear::apply_naive_rule({{c0, second}, {c1, second}});
  CHECK(qcore::trace_distance(in_computational, in_rotated) < 1e-7);
}
