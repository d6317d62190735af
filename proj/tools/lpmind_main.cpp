// Copyright 2026 The lpmind Authors.
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

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "lpmind/cli.hpp"

int main(int argc, char** argv) {
  lpmind::cli::ExperimentConfig cfg;
  CLI::App app{"Hidden-vector recovery from separable distance queries"};
  app.require_subcommand(1);

  std::string format = "csv";
  app.add_option("--n", cfg.n, "Dimension(s)")->delimiter(',');
  app.add_option("--k", cfg.k, "Entry bound(s)")->delimiter(',');
  app.add_option("--measure", cfg.measures, "Measure spec(s): lp:<p>, lp:inf, huber:<c>, fair:<c>, l1l2, smoothmax")
      ->delimiter(',');
  app.add_option("--strategy", cfg.strategy,
                 "auto, separable, naive-basis, l2-basis, l2-matrix or linf (recover only)");
  app.add_option("--trials", cfg.trials, "Hidden vectors per configuration");
  app.add_option("--seed", cfg.seed, "Seed for the mt19937_64 generator");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--save-matrix", cfg.save_matrix, "Write the detecting matrix used by recover");
  app.add_option("--load-matrix", cfg.load_matrix, "Read a detecting matrix for recover");
  app.add_option("--p", cfg.p, "Exponent(s) for bounds and adversary; 'inf' allowed for bounds")->delimiter(',');
  app.add_option("--R", cfg.radius, "Ball radius (or radii) for bounds")->delimiter(',');
  app.add_option("--eps", cfg.eps, "Relative noise for adversary");
  app.add_option("--samples", cfg.samples, "Monte Carlo samples for adversary");
  app.add_option("--plan-length", cfg.plan_length, "Shared query plan length for adversary");
  app.add_option("--matrix-max-n", cfg.matrix_max_n, "Largest profile length swept by verify");
  app.add_option("--matrix-max-radix", cfg.matrix_max_radix, "Largest radix swept by verify");

  const std::map<std::string, std::string> subcommands = {
      {"recover", "Recover random hidden vectors and report query counts"},
      {"bench", "Sweep (n, k) and compare query counts with n+2 and the size bound"},
      {"bounds", "Print lower-bound tables"},
      {"adversary", "Noisy adversary demonstration"},
      {"verify", "Exhaustive small-instance checks (cap raised by LPMIND_VERIFY_CAP)"},
  };
  for (const auto& [name, help] : subcommands) {
    app.add_subcommand(name, help)->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  cfg.subcommand = app.get_subcommands().front()->get_name();
  cfg.format = format == "json" ? lpmind::cli::OutputFormat::json : lpmind::cli::OutputFormat::csv;
  return lpmind::cli::run(cfg, std::cout, std::cerr);
}
