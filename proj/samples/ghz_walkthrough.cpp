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


// Builds the four-atom GHZ network, prints the state after every element and
// the heralded, corrected outputs.

#include <cstdio>
#include <string>

#include "cavnet/cavnet.hpp"

namespace {

void print_state(const cavnet::PureState& s) {
  for (std::size_t i = 0; i < s.dim(); ++i) {
    const auto a = s.amplitude(i);
    if (std::abs(a) < 1e-12) continue;
    std::printf("    %+.6f%+.6fi |%s>\n", a.real(), a.imag(), s.reg().basis_string(i).c_str());
  }
}

}  // namespace

int main() {
  const auto scheme = cavnet::build_ghz_atoms(4);
  std::printf("scheme %s, %zu elements\n", scheme.name.c_str(), scheme.elements.size());

  auto state = cavnet::initial_state(scheme);
  std::printf("initial\n");
  print_state(state);
  for (const auto& e : scheme.elements) {
    state = cavnet::apply_element(state, e, scheme.wiring);
    std::printf("after %s\n", cavnet::element_name(e).c_str());
    print_state(state);
  }

  for (const auto& r : cavnet::run(scheme)) {
    std::printf("detector %s: probability %.6f, fidelity %.12f\n", r.detector_id.c_str(), r.probability,
                r.fidelity_vs_target);
    if (r.corrected_state) print_state(*r.corrected_state);
  }
  return 0;
}
