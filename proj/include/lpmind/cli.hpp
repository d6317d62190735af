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

#pragma once

// Experiment driver behind the `lpmind` command line tool. Each subcommand
// produces a table that is written as CSV (header row, no quoting) or JSON.

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <system_error>
#include <variant>
#include <vector>

#include "json.hpp"
#include "lpmind/bounds.hpp"
#include "lpmind/codebreaker.hpp"
#include "lpmind/codemaker.hpp"
#include "lpmind/detecting_matrix.hpp"
#include "lpmind/measures.hpp"
#include "lpmind/random.hpp"
#include "lpmind/verification.hpp"

namespace lpmind::cli {

enum class OutputFormat { csv, json };

struct ExperimentConfig {
  std::string subcommand;
  std::vector<std::size_t> n{8};
  std::vector<int> k{2};
  std::vector<std::string> measures{"lp:2"};
  std::string strategy = "auto";
  std::size_t trials = 1;
  std::uint64_t seed = 0;
  OutputFormat format = OutputFormat::csv;
  std::optional<std::string> save_matrix;
  std::optional<std::string> load_matrix;
  // bounds
  std::vector<std::string> p{"2"};
  std::vector<double> radius{1.0};
  // adversary
  double eps = 0.1;
  std::size_t samples = 10000;
  std::size_t plan_length = 50;
  // verify: detecting-matrix sweep limits
  std::size_t matrix_max_n = 6;
  std::uint64_t matrix_max_radix = 4;
};

using Cell = std::variant<long long, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(const std::string& v) const { return v; }
    std::string operator()(bool v) const { return v ? "1" : "0"; }
  };
  return std::visit(Visitor{}, c);
}

inline nlohmann::ordered_json cell_json(const Cell& c) {
  struct Visitor {
    nlohmann::ordered_json operator()(long long v) const { return v; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return format_double(v);
      return v;
    }
    nlohmann::ordered_json operator()(const std::string& v) const { return v; }
    nlohmann::ordered_json operator()(bool v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

inline void write_table(std::ostream& out, const Table& t, OutputFormat fmt, const std::string& command) {
  if (fmt == OutputFormat::csv) {
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_cell(row[i]);
      out << '\n';
    }
    return;
  }
  nlohmann::ordered_json doc;
  doc["command"] = command;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
    doc["rows"].push_back(std::move(obj));
  }
  out << doc.dump(2) << '\n';
}

inline std::optional<Strategy> parse_strategy(const std::string& s) {
  for (Strategy st : {Strategy::separable, Strategy::naive_basis, Strategy::l2_basis, Strategy::l2_matrix,
                      Strategy::linf}) {
    if (s == to_string(st)) return st;
  }
  return std::nullopt;
}

inline double parse_p(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  const double v = std::stod(s, &used);
  if (used != s.size()) throw std::invalid_argument("bad p '" + s + "'");
  return v;
}

struct RunOutcome {
  Table table;
  bool ok = true;
};

inline RunOutcome run_recover(const ExperimentConfig& cfg, std::ostream& err) {
  if (cfg.n.size() != 1 || cfg.k.size() != 1 || cfg.measures.size() != 1) {
    throw std::invalid_argument("recover takes exactly one --n, --k and --measure");
  }
  const std::size_t n = cfg.n[0];
  const int k = cfg.k[0];
  const SeparableMeasure m = parse_measure(cfg.measures[0]);
  Strategy strategy = Strategy::naive_basis;
  if (cfg.strategy == "auto") {
    strategy = choose_strategy(m, n, k);
  } else if (auto st = parse_strategy(cfg.strategy)) {
    strategy = *st;
  } else {
    throw std::invalid_argument("unknown strategy '" + cfg.strategy + "'");
  }

  std::optional<InnerProductPlan> plan;
  if (strategy == Strategy::separable) {
    std::optional<DetectingMatrix> loaded;
    if (cfg.load_matrix) {
      std::ifstream in(*cfg.load_matrix);
      if (!in) throw std::runtime_error("cannot open " + *cfg.load_matrix);
      loaded = load_matrix(in);
    }
    plan = plan_separable(m, n, k, std::move(loaded));
    if (cfg.save_matrix) {
      std::ofstream out(*cfg.save_matrix);
      if (!out) throw std::runtime_error("cannot write " + *cfg.save_matrix);
      save_matrix(out, *plan->matrix);
    }
  } else if (strategy == Strategy::naive_basis) {
    plan = plan_naive_basis(m, n, k);
  }
  if ((cfg.save_matrix || cfg.load_matrix) && strategy != Strategy::separable) {
    err << "note: matrix file ignored for strategy " << to_string(strategy) << '\n';
  }

  RunOutcome res;
  res.table.columns = {"trial", "queries_used", "success", "strategy"};
  Rng rng(cfg.seed);
  std::size_t successes = 0;
  std::size_t total_queries = 0;
  for (std::size_t t = 0; t < cfg.trials; ++t) {
    const std::vector<int> y = uniform_vector(rng, n, k);
    auto [oracle, transcript] = wrap_counting(make_honest_oracle(HiddenVector(y, k), m));
    bool success = false;
    try {
      const RecoveryResult r = plan ? execute(*plan, oracle) : solve(strategy, m, n, k, oracle);
      success = r.recovered == y;
    } catch (const std::exception& e) {
      err << "trial " << t << ": " << e.what() << '\n';
    }
    if (success) ++successes;
    total_queries += transcript->count();
    res.table.rows.push_back({static_cast<long long>(t), static_cast<long long>(transcript->count()), success,
                              std::string(to_string(strategy))});
  }
  const double trials = static_cast<double>(std::max<std::size_t>(cfg.trials, 1));
  res.table.rows.push_back({std::string("summary"), static_cast<double>(total_queries) / trials,
                            static_cast<double>(successes) / trials, std::string(to_string(strategy))});
  res.ok = successes == cfg.trials;
  return res;
}

inline RunOutcome run_bench(const ExperimentConfig& cfg, std::ostream& err) {
  RunOutcome res;
  res.table.columns = {"measure", "n",       "k",          "radix",      "nu",          "s",
                       "queries_used", "naive_queries", "size_bound_lhs", "size_bound_rhs", "size_bound_holds",
                       "lower_bound", "success"};
  Rng rng(cfg.seed);
  for (const auto& spec : cfg.measures) {
    const SeparableMeasure m = parse_measure(spec);
    for (std::size_t n : cfg.n) {
      for (int k : cfg.k) {
        const InnerProductPlan plan = plan_separable(m, n, k);
        const DetectingMatrix& mat = *plan.matrix;
        const SizeBound sb = size_bound(mat.radices(), mat.dimension());
        double lb = std::numeric_limits<double>::quiet_NaN();
        if (m.kind() == MeasureKind::lp) lb = lower_bound_lp(n, k, m.parameter(), 0.5).s_min;
        bool success = true;
        std::size_t used = 0;
        for (std::size_t t = 0; t < std::max<std::size_t>(cfg.trials, 1); ++t) {
          const std::vector<int> y = uniform_vector(rng, n, k);
          auto [oracle, transcript] = wrap_counting(make_honest_oracle(HiddenVector(y, k), m));
          try {
            success = execute(plan, oracle).recovered == y && success;
          } catch (const std::exception& e) {
            err << spec << " n=" << n << " k=" << k << ": " << e.what() << '\n';
            success = false;
          }
          used = transcript->count();
        }
        res.ok = res.ok && success;
        res.table.rows.push_back({spec, static_cast<long long>(n), static_cast<long long>(k),
                                  static_cast<long long>(mat.radices()[n - 1]), static_cast<long long>(mat.dimension()),
                                  static_cast<long long>(mat.rows()), static_cast<long long>(used),
                                  static_cast<long long>(n + 2), sb.lhs, sb.rhs, sb.holds, lb, success});
      }
    }
  }
  return res;
}

inline RunOutcome run_bounds(const ExperimentConfig& cfg, std::ostream&) {
  RunOutcome res;
  res.table.columns = {"n", "k", "p", "R", "log_volume", "volume", "s_min", "formula", "heuristic"};
  for (std::size_t n : cfg.n) {
    for (int k : cfg.k) {
      for (const auto& ps : cfg.p) {
        const double p = parse_p(ps);
        for (double r : cfg.radius) {
          const BoundsReport b = std::isinf(p) ? lower_bound_linf(n, k, r) : lower_bound_lp(n, k, p, r);
          res.table.rows.push_back({static_cast<long long>(n), static_cast<long long>(k), p, r, b.log_volume, b.volume,
                                    b.s_min, b.formula, b.heuristic});
        }
      }
    }
  }
  return res;
}

struct BlurStats {
  std::size_t samples = 0;
  std::size_t blurred = 0;
  double rate() const { return samples ? static_cast<double>(blurred) / static_cast<double>(samples) : 0.0; }
};

// Fraction of uniformly drawn (y, x) pairs on which the adversary's
// y-independent answer is a legal (1 +- eps) answer.
inline BlurStats measure_blur_rate(std::size_t n, int k, double p, double eps, std::size_t samples, Rng& rng) {
  BlurStats st;
  for (std::size_t i = 0; i < samples; ++i) {
    const std::vector<int> y = uniform_vector(rng, n, k);
    const std::vector<int> x = uniform_vector(rng, n, k);
    NoisyAdversary adv(HiddenVector(y, k), p, eps);
    adv(x);
    ++st.samples;
    if (adv.transcript()->entries().front().blurred.value_or(false)) ++st.blurred;
  }
  return st;
}

struct Indistinguishability {
  bool found = false;
  std::vector<int> first;
  std::vector<int> second;
  std::vector<double> first_answers;
  std::vector<double> second_answers;
  bool identical = false;
};

// Looks for two distinct hidden vectors whose transcripts on one random
// query plan are blurred throughout, and compares those transcripts.
inline Indistinguishability find_indistinguishable_pair(std::size_t n, int k, double p, double eps,
                                                        std::size_t plan_length, Rng& rng,
                                                        std::size_t max_attempts = 10000) {
  QueryPlan plan;
  for (std::size_t q = 0; q < plan_length; ++q) plan.add(uniform_vector(rng, n, k), QueryRole::sign_row);
  Indistinguishability out;
  for (std::size_t attempt = 0; attempt < max_attempts; ++attempt) {
    std::vector<int> y = uniform_vector(rng, n, k);
    if (!out.first.empty() && y == out.first) continue;
    auto [oracle, transcript] = make_noisy_adversary(HiddenVector(y, k), p, eps);
    const std::vector<double> answers = ask_all(plan, oracle);
    bool all_blurred = true;
    for (const auto& e : transcript->entries()) all_blurred = all_blurred && e.blurred.value_or(false);
    if (!all_blurred) continue;
    if (out.first.empty()) {
      out.first = std::move(y);
      out.first_answers = answers;
    } else {
      out.second = std::move(y);
      out.second_answers = answers;
      out.found = true;
      out.identical = out.first_answers == out.second_answers;
      return out;
    }
  }
  return out;
}

inline RunOutcome run_adversary(const ExperimentConfig& cfg, std::ostream&) {
  RunOutcome res;
  res.table.columns = {"n", "k", "p", "eps", "samples", "blurred", "blur_rate", "plan_length",
                       "pair_found", "transcripts_identical", "chernoff_exponent", "log_query_bound"};
  Rng rng(cfg.seed);
  for (std::size_t n : cfg.n) {
    for (int k : cfg.k) {
      for (const auto& ps : cfg.p) {
        const double p = parse_p(ps);
        const BlurStats st = measure_blur_rate(n, k, p, cfg.eps, cfg.samples, rng);
        const Indistinguishability ind = find_indistinguishable_pair(n, k, p, cfg.eps, cfg.plan_length, rng);
        const NoisyBound nb = noisy_bound_exponent(n, k, p, cfg.eps);
        if (ind.found && !ind.identical) res.ok = false;
        res.table.rows.push_back({static_cast<long long>(n), static_cast<long long>(k), p, cfg.eps,
                                  static_cast<long long>(st.samples), static_cast<long long>(st.blurred), st.rate(),
                                  static_cast<long long>(cfg.plan_length), ind.found, ind.identical,
                                  nb.chernoff_exponent, nb.log_query_bound});
      }
    }
  }
  return res;
}

// Nondecreasing radix profiles of length 1..max_n over {2..max_d}.
inline std::vector<RadixProfile> all_radix_profiles(std::size_t max_n, std::uint64_t max_d) {
  std::vector<RadixProfile> out;
  std::vector<std::uint64_t> cur;
  auto rec = [&](auto&& self, std::uint64_t lo) -> void {
    if (!cur.empty()) out.emplace_back(cur);
    if (cur.size() == max_n) return;
    for (std::uint64_t d = lo; d <= max_d; ++d) {
      cur.push_back(d);
      self(self, d);
      cur.pop_back();
    }
  };
  rec(rec, 2);
  return out;
}

inline RunOutcome run_verify(const ExperimentConfig& cfg, std::ostream& err) {
  RunOutcome res;
  res.table.columns = {"check", "target", "n", "k", "total", "failures", "pass"};
  for (const RadixProfile& rp : all_radix_profiles(cfg.matrix_max_n, cfg.matrix_max_radix)) {
    const DetectingMatrix mat = construct(rp);
    const ExhaustiveReport rep = detecting_property_check(mat, rp);
    const bool spectra_ok = !check_column_spectra(mat).has_value();
    std::string target;
    for (auto d : rp.values()) target += (target.empty() ? "" : "x") + std::to_string(d);
    const bool pass = rep.pass() && spectra_ok;
    res.ok = res.ok && pass;
    res.table.rows.push_back({std::string("detecting"), target, static_cast<long long>(rp.size()), 0LL,
                              static_cast<long long>(rep.total), static_cast<long long>(rep.failures.size()), pass});
  }
  for (const auto& spec : cfg.measures) {
    const SeparableMeasure m = parse_measure(spec);
    const std::vector<Strategy> strategies =
        m.separable() ? std::vector<Strategy>{Strategy::separable, Strategy::naive_basis}
                      : std::vector<Strategy>{Strategy::linf};
    for (std::size_t n : cfg.n) {
      for (int k : cfg.k) {
        for (Strategy st : strategies) {
          const ExhaustiveReport rep = exhaustive_recovery_check(m, n, k, st);
          for (const auto& msg : rep.messages) err << spec << " " << to_string(st) << ": " << msg << '\n';
          res.ok = res.ok && rep.pass();
          res.table.rows.push_back({std::string("recovery/") + std::string(to_string(st)), spec,
                                    static_cast<long long>(n), static_cast<long long>(k),
                                    static_cast<long long>(rep.total), static_cast<long long>(rep.failures.size()),
                                    rep.pass()});
        }
      }
    }
  }
  return res;
}

// Exit status: 0 on success, 1 if a trial failed or an invariant broke, 2 on
// bad configuration or an unexpected error.
inline int run(const ExperimentConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (cfg.trials == 0) throw std::invalid_argument("--trials must be positive");
    for (auto n : cfg.n) if (n == 0) throw std::invalid_argument("--n must be positive");
    for (auto k : cfg.k) if (k <= 0) throw std::invalid_argument("--k must be positive");
    for (const auto& m : cfg.measures) parse_measure(m);
    RunOutcome res;
    if (cfg.subcommand == "recover") res = run_recover(cfg, err);
    else if (cfg.subcommand == "bench") res = run_bench(cfg, err);
    else if (cfg.subcommand == "bounds") res = run_bounds(cfg, err);
    else if (cfg.subcommand == "adversary") res = run_adversary(cfg, err);
    else if (cfg.subcommand == "verify") res = run_verify(cfg, err);
    else throw std::invalid_argument("unknown subcommand '" + cfg.subcommand + "'");
    write_table(out, res.table, cfg.format, cfg.subcommand);
    return res.ok ? 0 : 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace lpmind::cli
