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


// Prints the flip probability against pulse width for a few couplings, as a
// plot-ready CSV on stdout.

#include <iostream>
#include <vector>

#include "cavnet/iomodel.hpp"

int main() {
  const std::vector<double> g{0.5, 1.0, 2.0, 5.0};
  const auto tau = cavnet::log_spaced(0.1, 40.0, 20);
  const auto rows = cavnet::flip_probability_sweep(g, tau);
  cavnet::write_sweep_csv(std::cout, rows);

  // Single pulse, with the residual cavity population visible in the budget.
  const auto r = cavnet::integrate_pulse({5.0, 5.0, 1.0, 10.0});
  std::cerr << "g/kappa = 5, kappa tau = 10: P_flip = " << r.P_flip << ", P_noflip = " << r.P_noflip << "\n";
  return 0;
}
