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

/**
 * @file    serialize.hpp
 * @brief   JSON shapes for schemes, outcome reports, graphs and retry walks.
 *
 *   {"scheme":   {"name", "n", "register": [{"label","kind","dim"}],
 *                 "elements": [{"type", ...}], "initial": [{"subsystem", "state"}]},
 *    "outcomes": [{"detector", "probability", "heralds_success", "fidelity",
 *                  "corrected_register": [labels],
 *                  "corrected_state": [[re, im], ...]}]}
 *
 * Graph input: {"vertices": n, "edges": [[u, v], ...]}, 0-indexed.
 * Doubles are written in shortest round-trip form.
 */

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "cavnet/elements.hpp"
#include "cavnet/schemes.hpp"
#include "cavnet/verify.hpp"

namespace cavnet {

using json = nlohmann::json;

inline json element_to_json(const Element& element) {
  json j;
  j["type"] = element_name(element);
  auto port = [&](const std::optional<std::size_t>& p) {
    if (p) j["port"] = *p;
  };
  std::visit(
      [&](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, BeamSplitter>) {
          j["reflectivity"] = e.reflectivity;
          j["ports"] = {e.port_a, e.port_b};
        } else if constexpr (std::is_same_v<T, PolarizingBeamSplitter>) {
          j["ports"] = {e.port_a, e.port_b};
        } else if constexpr (std::is_same_v<T, PolarizationRotator>) {
          j["port"] = e.port;
        } else if constexpr (std::is_same_v<T, PhaseShifter>) {
          j["port"] = e.port;
          j["phase"] = e.phase;
        } else if constexpr (std::is_same_v<T, CavityAtomBlock>) {
          j["atom"] = e.atom;
          j["port"] = e.port;
        } else if constexpr (std::is_same_v<T, RamseyZone> || std::is_same_v<T, ExternalPiPulse>) {
          j["atom"] = e.atom;
          port(e.port);
        } else {
          j["field"] = e.field;
          j["atom"] = e.atom;
          port(e.port);
        }
      },
      element);
  return j;
}

inline json amplitudes_to_json(const Amplitudes& a) {
  json out = json::array();
  for (Eigen::Index i = 0; i < a.size(); ++i) out.push_back({a(i).real(), a(i).imag()});
  return out;
}

inline json scheme_to_json(const Scheme& s) {
  json j;
  j["name"] = s.name;
  j["n"] = s.n;
  j["register"] = json::array();
  for (const auto& sub : s.reg.subsystems())
    j["register"].push_back({{"label", sub.label()}, {"kind", std::string(kind_name(sub.kind()))}, {"dim", sub.dim()}});
  j["elements"] = json::array();
  for (const auto& e : s.elements) j["elements"].push_back(element_to_json(e));
  j["initial"] = json::array();
  for (std::size_t k = 0; k < s.reg.size(); ++k) {
    const auto& local = s.initial[k];
    json entry{{"subsystem", s.reg[k].label()}};
    // Basis states are written as their label, superpositions as amplitudes.
    Eigen::Index hot = -1;
    int nonzero = 0;
    for (Eigen::Index i = 0; i < local.size(); ++i)
      if (std::abs(local(i)) > 1e-15) ++nonzero, hot = i;
    if (nonzero == 1 && std::abs(local(hot) - Complex(1.0)) < 1e-15)
      entry["state"] = s.reg[k].basis_label(static_cast<std::size_t>(hot));
    else
      entry["state"] = amplitudes_to_json(local);
    j["initial"].push_back(std::move(entry));
  }
  return j;
}

inline json outcomes_to_json(const std::vector<OutcomeReport>& reports) {
  json out = json::array();
  for (const auto& r : reports) {
    json j{{"detector", r.detector_id}, {"probability", r.probability},
           {"heralds_success", r.heralds_success}, {"fidelity", r.fidelity_vs_target}};
    if (r.corrected_state) {
      json labels = json::array();
      for (const auto& sub : r.corrected_state->reg().subsystems()) labels.push_back(sub.label());
      j["corrected_register"] = std::move(labels);
      j["corrected_state"] = amplitudes_to_json(r.corrected_state->amplitudes());
    } else {
      j["corrected_register"] = json::array();
      j["corrected_state"] = json::array();
    }
    out.push_back(std::move(j));
  }
  return out;
}

inline json run_report_to_json(const Scheme& s, const std::vector<OutcomeReport>& reports) {
  return {{"scheme", scheme_to_json(s)}, {"outcomes", outcomes_to_json(reports)}};
}

inline Graph graph_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vertices") || !j.contains("edges"))
    throw GraphError("graph JSON needs 'vertices' and 'edges'");
  if (!j["vertices"].is_number_integer() || j["vertices"].get<long long>() < 1)
    throw GraphError("'vertices' must be a positive integer");
  std::vector<Graph::Edge> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer() ||
        e[0].get<long long>() < 0 || e[1].get<long long>() < 0)
      throw GraphError("each edge must be a pair of non-negative vertex indices");
    edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
  }
  return Graph(j["vertices"].get<std::size_t>(), std::move(edges));
}

inline json graph_to_json(const Graph& g) {
  json edges = json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  return {{"vertices", g.vertices()}, {"edges", edges}};
}

inline json retry_walk_to_json(const RetryWalkParams& p, const RetryWalkResult& r) {
  return {{"p_flip", p.p_flip},
          {"n_cavities", p.n_cavities},
          {"max_steps", p.max_steps},
          {"success_prob", r.success_prob},
          {"conditional_fidelity", r.conditional_fidelity},
          {"expected_steps", r.expected_steps}};
}

}  // namespace cavnet
