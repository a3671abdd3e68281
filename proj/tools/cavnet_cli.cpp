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


// cavnet command-line front end.
//
//   cavnet run-scheme <name> [--n N] [--kind star|linear|ring] [--graph FILE] [--out PATH]
//   cavnet flip-sweep --g LIST (--tau LIST | --tau-range LO:HI:COUNT) [--threads T] [--out PATH]
//   cavnet retry-walk --p P --n N [--max-steps K] [--mc-trajectories M] [--seed S] [--out PATH]
//
// Exit codes: 0 success, 2 usage or parameter error, 3 internal contract violation.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cavnet/cavnet.hpp"

namespace {

using cavnet::json;

constexpr int kExitUsage = 2;
constexpr int kExitContract = 3;

struct RunConfig {
  std::string scheme;
  std::optional<std::size_t> n;
  std::string kind = "linear";
  std::string graph_file;
  std::string g_list;
  std::string tau_list;
  std::string tau_range;
  unsigned threads = 0;
  double p = 0.0;
  std::size_t cavities = 0;
  std::size_t max_steps = 10000;
  std::size_t mc_trajectories = 0;
  std::uint64_t seed = 0;
  std::string out;
};

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw cavnet::ParameterError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw cavnet::ParameterError("not a number: '" + text + "'");
  return v;
}

std::vector<double> parse_positive_list(const std::string& text, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const double v = parse_double(item);
    if (!(v > 0.0) || !std::isfinite(v)) throw cavnet::ParameterError(what + " values must be positive: " + item);
    out.push_back(v);
  }
  if (out.empty() || text.back() == ',') throw cavnet::ParameterError("malformed " + what + " list: '" + text + "'");
  return out;
}

std::vector<double> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  if (parts.size() != 3) throw cavnet::ParameterError("--tau-range expects LO:HI:COUNT");
  const double lo = parse_double(parts[0]), hi = parse_double(parts[1]);
  const double count = parse_double(parts[2]);
  if (!(lo > 0.0) || !(hi >= lo) || count < 1 || count != std::floor(count))
    throw cavnet::ParameterError("--tau-range needs 0 < LO <= HI and a positive integer COUNT");
  return cavnet::log_spaced(lo, hi, static_cast<std::size_t>(count));
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream os(cfg.out, std::ios::binary);
  if (!os) throw cavnet::ParameterError("cannot open output file: " + cfg.out);
  os << text;
}

std::size_t require_n(const RunConfig& cfg, std::size_t fallback) { return cfg.n.value_or(fallback); }

cavnet::Scheme build_scheme(const RunConfig& cfg) {
  const std::string& s = cfg.scheme;
  if (s == "ghz-atoms") return cavnet::build_ghz_atoms(require_n(cfg, 2));
  if (s == "w") return cavnet::build_w_pow2(require_n(cfg, 2));
  if (s == "w3-prob") return cavnet::build_w3_probabilistic();
  if (s == "w3-det") return cavnet::build_w3_deterministic();
  if (s == "cluster") return cavnet::build_cluster_atoms(require_n(cfg, 2));
  if (s == "ghz-fields") return cavnet::build_ghz_fields(require_n(cfg, 2));
  if (s == "field-cz") return cavnet::build_field_cz_pair();
  if (s == "graph") {
    if (!cfg.graph_file.empty()) {
      std::ifstream is(cfg.graph_file);
      if (!is) throw cavnet::ParameterError("cannot read graph file: " + cfg.graph_file);
      json j;
      try {
        j = json::parse(is);
      } catch (const json::exception& e) {
        throw cavnet::GraphError(std::string("invalid graph JSON: ") + e.what());
      }
      return cavnet::build_field_graph(cavnet::graph_from_json(j));
    }
    static const std::map<std::string, cavnet::GraphKind> kinds{
        {"star", cavnet::GraphKind::Star}, {"linear", cavnet::GraphKind::Linear}, {"ring", cavnet::GraphKind::Ring}};
    const auto it = kinds.find(cfg.kind);
    if (it == kinds.end()) throw cavnet::ParameterError("unknown graph kind: " + cfg.kind);
    return cavnet::build_field_graph(it->second, require_n(cfg, 3));
  }
  throw cavnet::ParameterError("unknown scheme: " + s +
                               " (expected ghz-atoms, w, w3-prob, w3-det, cluster, ghz-fields, field-cz, graph)");
}

void cmd_run_scheme(const RunConfig& cfg) {
  const auto scheme = build_scheme(cfg);
  const auto reports = cavnet::run(scheme);
  emit(cfg, cavnet::run_report_to_json(scheme, reports).dump(2) + "\n");
}

void cmd_flip_sweep(const RunConfig& cfg) {
  const auto g = parse_positive_list(cfg.g_list, "--g");
  if (cfg.tau_list.empty() == cfg.tau_range.empty())
    throw cavnet::ParameterError("give exactly one of --tau or --tau-range");
  const auto tau = cfg.tau_list.empty() ? parse_range(cfg.tau_range) : parse_positive_list(cfg.tau_list, "--tau");
  const auto rows = cavnet::flip_probability_sweep(g, tau, cfg.threads);
  std::ostringstream os;
  cavnet::write_sweep_csv(os, rows);
  emit(cfg, os.str());
}

void cmd_retry_walk(const RunConfig& cfg) {
  const cavnet::RetryWalkParams params{cfg.p, cfg.cavities, cfg.max_steps};
  const auto result = cavnet::retry_walk(params);
  json j = cavnet::retry_walk_to_json(params, result);
  if (cfg.mc_trajectories > 0) {
    const auto mc = cavnet::retry_walk_monte_carlo(params, cfg.mc_trajectories, cfg.seed);
    j["monte_carlo"] = {{"trajectories", mc.trajectories},
                        {"seed", cfg.seed},
                        {"success_prob", mc.success_prob},
                        {"mean_steps_given_success", mc.mean_steps},
                        {"abs_difference", std::abs(mc.success_prob - result.success_prob)}};
  }
  emit(cfg, j.dump(2) + "\n");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cavnet: cavity-QED entanglement network simulator"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* run = app.add_subcommand("run-scheme", "Run a scheme and print its outcome reports as JSON");
  run->add_option("scheme", cfg.scheme, "ghz-atoms | w | w3-prob | w3-det | cluster | ghz-fields | field-cz | graph")
      ->required();
  run->add_option("--n", cfg.n, "Number of atoms, fields or graph vertices");
  run->add_option("--kind", cfg.kind, "Graph kind for 'graph': star | linear | ring");
  run->add_option("--graph", cfg.graph_file, "Graph JSON file {\"vertices\": n, \"edges\": [[u, v], ...]}");
  run->add_option("--out", cfg.out, "Write output to this path instead of stdout");

  auto* sweep = app.add_subcommand("flip-sweep", "Flip probability versus pulse width as CSV");
  sweep->add_option("--g", cfg.g_list, "Comma-separated g/kappa values")->required();
  sweep->add_option("--tau", cfg.tau_list, "Comma-separated kappa*tau values");
  sweep->add_option("--tau-range", cfg.tau_range, "LO:HI:COUNT, log-spaced kappa*tau values");
  sweep->add_option("--threads", cfg.threads, "Worker threads (0 = hardware concurrency)");
  sweep->add_option("--out", cfg.out, "Write output to this path instead of stdout");

  auto* walk = app.add_subcommand("retry-walk", "Success probability of the photon retry walk");
  walk->add_option("--p", cfg.p, "Flip probability per cavity pass")->required();
  walk->add_option("--n", cfg.cavities, "Number of cavities")->required();
  walk->add_option("--max-steps", cfg.max_steps, "Step budget");
  walk->add_option("--mc-trajectories", cfg.mc_trajectories, "Monte-Carlo cross-check trajectories");
  walk->add_option("--seed", cfg.seed, "Root seed for the Monte-Carlo cross-check");
  walk->add_option("--out", cfg.out, "Write output to this path instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*run) cmd_run_scheme(cfg);
    if (*sweep) cmd_flip_sweep(cfg);
    if (*walk) cmd_retry_walk(cfg);
  } catch (const cavnet::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cavnet::ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const cavnet::ContractViolation& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitContract;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitContract;
  }
  return 0;
}
