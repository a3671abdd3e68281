// Copyright 2026 The cavnet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "cavnet/schemes.hpp"

namespace cavnet {
namespace {

// Expected absorption time by value iteration, independent of the library's
// linear solve.
double value_iteration_steps(double p, std::size_t n) {
  std::vector<double> e(n + 2, 0.0);
  for (int it = 0; it < 2000000; ++it) {
    double delta = 0.0;
    const double e0 = 1.0 + e[1];
    delta = std::max(delta, std::abs(e0 - e[0]));
    e[0] = e0;
    for (std::size_t j = 1; j <= n; ++j) {
      const double v = 1.0 + p * e[j + 1] + (1.0 - p) * e[j - 1];
      delta = std::max(delta, std::abs(v - e[j]));
      e[j] = v;
    }
    if (delta < 1e-12) break;
  }
  return e[1];
}

// Test-side Monte Carlo with a different generator and sampling method.
double independent_mc(double p, std::size_t n, std::size_t max_steps, std::size_t trials, unsigned seed) {
  std::minstd_rand rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    std::size_t pos = 1, k = 0;
    for (; k < max_steps && pos != n + 1; ++k) pos = pos == 0 ? 1 : (u(rng) < p ? pos + 1 : pos - 1);
    hits += pos == n + 1;
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

TEST(RetryWalkTest, DeterministicForwardWalk) {
  for (std::size_t n : {1, 2, 5, 9}) {
    const auto r = retry_walk({1.0, n});
    EXPECT_EQ(r.success_prob, 1.0);
    EXPECT_NEAR(r.expected_steps, static_cast<double>(n), 1e-12);
    EXPECT_EQ(r.conditional_fidelity, 1.0);
  }
}

TEST(RetryWalkTest, ShortHorizonCombinatorics) {
  for (double p : {0.3, 0.5, 0.9})
    for (std::size_t n : {1, 3, 6}) {
      const double pn = std::pow(p, double(n));
      EXPECT_NEAR(retry_walk({p, n, n}).success_prob, pn, 1e-14);
      EXPECT_NEAR(retry_walk({p, n, n + 1}).success_prob, pn, 1e-14);  // parity
      EXPECT_NEAR(retry_walk({p, n, n + 2}).success_prob, pn * (1.0 + (1.0 - p) * (1.0 + double(n - 1) * p)), 1e-14);
      if (n > 1) {
        EXPECT_EQ(retry_walk({p, n, n - 1}).success_prob, 0.0);
      }
    }
}

TEST(RetryWalkTest, ExpectedStepsMatchValueIteration) {
  for (double p : {0.5, 0.8, 0.95})
    for (std::size_t n : {2, 4, 8}) EXPECT_NEAR(retry_walk({p, n}).expected_steps, value_iteration_steps(p, n), 1e-6);
}

TEST(RetryWalkTest, Monotonicity) {
  for (std::size_t n : {2, 5}) {
    double prev = 0.0;
    for (double p = 0.05; p <= 1.0; p += 0.05) {
      const double s = retry_walk({p, n, 30}).success_prob;
      EXPECT_GE(s, prev - 1e-15);
      prev = s;
    }
    prev = 0.0;
    for (std::size_t k = 1; k < 200; k += 7) {
      const double s = retry_walk({0.4, n, k}).success_prob;
      EXPECT_GE(s, prev - 1e-15);
      prev = s;
    }
  }
}

TEST(RetryWalkTest, AgreesWithIndependentMonteCarlo) {
  for (double p : {0.5, 0.8})
    for (std::size_t n : {2, 4}) {
      const auto r = retry_walk({p, n, 12});
      EXPECT_NEAR(independent_mc(p, n, 12, 200000, 99), r.success_prob, 0.01) << p << "," << n;
    }
}

TEST(RetryWalkTest, LibraryMonteCarloDeterminism) {
  const RetryWalkParams params{0.6, 3, 9};
  const auto a = retry_walk_monte_carlo(params, 50000, 7, 1);
  const auto b = retry_walk_monte_carlo(params, 50000, 7, 4);
  const auto c = retry_walk_monte_carlo(params, 50000, 8, 1);
  EXPECT_EQ(a.success_prob, b.success_prob);
  EXPECT_EQ(a.mean_steps, b.mean_steps);
  EXPECT_NE(a.success_prob, c.success_prob);
  EXPECT_NEAR(a.success_prob, retry_walk(params).success_prob, 0.01);
  EXPECT_EQ(a.trajectories, 50000u);
}

TEST(RetryWalkTest, Validation) {
  EXPECT_THROW(retry_walk({0.0, 3}), ParameterError);
  EXPECT_THROW(retry_walk({-0.1, 3}), ParameterError);
  EXPECT_THROW(retry_walk({1.1, 3}), ParameterError);
  EXPECT_THROW(retry_walk({0.5, 0}), ParameterError);
  EXPECT_THROW(retry_walk({0.5, 2, 0}), ParameterError);
  EXPECT_THROW(retry_walk_monte_carlo({0.5, 2}, 0, 1), ParameterError);
}

}  // namespace
}  // namespace cavnet
