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

#include <chrono>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qxsim/experiments.hpp"

namespace {

constexpr int kExitBadArguments = 2;
constexpr int kExitRuntimeFailure = 3;

void print_listing() {
  for (const auto& e : qxsim::cli::list_experiments()) {
    std::cout << e.name << "\n    " << e.description << "\n";
    for (const auto& p : e.params)
      std::cout << "    --param " << p.name << "=" << p.default_value << "  ("
                << p.description << ")\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qxsim: seeded experiment runner for non-unitary quantum models"};
  std::string experiment;
  std::vector<std::string> raw_params;
  std::uint64_t seed = 0;
  std::string out_path;
  std::string format = "csv";
  app.add_option("experiment", experiment,
                 "experiment name, or 'list' to show the registry")
      ->required();
  app.add_option("--param", raw_params, "experiment parameter as key=value")
      ->take_all();
  app.add_option("--seed", seed, "master seed (default 0)");
  app.add_option("--out", out_path, "output file (default: stdout)");
  app.add_option("--format", format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitBadArguments;
  }

  if (experiment == "list") {
    print_listing();
    return 0;
  }

  qxsim::cli::ExperimentConfig cfg;
  cfg.name = experiment;
  cfg.seed = seed;
  for (const auto& kv : raw_params) {
    auto pos = kv.find('=');
    if (pos == std::string::npos || pos == 0) {
      std::cerr << "BadParam: expected key=value, got '" << kv << "'\n";
      return kExitBadArguments;
    }
    cfg.params[kv.substr(0, pos)] = kv.substr(pos + 1);
  }

  try {
    auto start = std::chrono::steady_clock::now();
    qxsim::cli::ResultTable table = qxsim::cli::run_experiment(cfg);
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    std::string payload = qxsim::cli::serialize(table, format);
    if (out_path.empty())
      std::cout << payload;
    else
      qxsim::cli::write_file(out_path, payload);
    std::cerr << experiment << ": " << table.rows.size() << " rows in "
              << elapsed << " ms\n";
    return 0;
  } catch (const qxsim::Error& e) {
    std::cerr << e.what() << "\n";
    switch (e.code()) {
      case qxsim::Errc::UnknownExperiment:
      case qxsim::Errc::BadParam:
        return kExitBadArguments;
      default:
        return kExitRuntimeFailure;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntimeFailure;
  }
}
