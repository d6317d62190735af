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

#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "lpmind/errors.hpp"
#include "lpmind/measures.hpp"

namespace lpmind {

using Query = std::vector<int>;
using Oracle = std::function<double(std::span<const int>)>;

class HiddenVector {
 public:
  HiddenVector(std::vector<int> y, int k) : y_(std::move(y)), k_(k) {
    if (k_ < 1) throw std::invalid_argument("HiddenVector: k must be >= 1");
    if (y_.empty()) throw std::invalid_argument("HiddenVector: n must be >= 1");
    for (int v : y_) {
      if (v < -k_ || v > k_) throw std::invalid_argument("HiddenVector: entry outside [-k, k]");
    }
  }

  std::span<const int> values() const { return y_; }
  const std::vector<int>& vector() const { return y_; }
  std::size_t n() const { return y_.size(); }
  int k() const { return k_; }

 private:
  std::vector<int> y_;
  int k_;
};

inline void validate_query(std::span<const int> x, std::size_t n, int k) {
  if (x.size() != n) {
    throw invalid_query("query has " + std::to_string(x.size()) + " entries, expected " + std::to_string(n));
  }
  for (int v : x) {
    if (v < -k || v > k) throw invalid_query("query entry " + std::to_string(v) + " outside [-k, k]");
  }
}

// Append-only record of (query, answer) pairs.
class Transcript {
 public:
  struct Entry {
    Query query;
    double answer = 0;
    std::optional<bool> blurred;
  };

  void append(std::span<const int> query, double answer, std::optional<bool> blurred = std::nullopt) {
    entries_.push_back({Query(query.begin(), query.end()), answer, blurred});
  }

  std::size_t count() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

  std::vector<double> answers() const {
    std::vector<double> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.answer);
    return out;
  }

  // One JSON object per line: {"index", "query", "answer", "blurred"?}.
  void write_jsonl(std::ostream& os) const {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      nlohmann::ordered_json j;
      j["index"] = i;
      j["query"] = entries_[i].query;
      j["answer"] = entries_[i].answer;
      if (entries_[i].blurred) j["blurred"] = *entries_[i].blurred;
      os << j.dump() << '\n';
    }
  }

 private:
  std::vector<Entry> entries_;
};

// Answers f(y - x) for the given measure.
inline Oracle make_honest_oracle(HiddenVector y, SeparableMeasure m) {
  return [y = std::move(y), m](std::span<const int> x) {
    validate_query(x, y.n(), y.k());
    std::vector<int> diff(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) diff[i] = y.values()[i] - x[i];
    return eval_distance(m, diff);
  };
}

// Pass-through oracle that records every call.
inline std::pair<Oracle, std::shared_ptr<Transcript>> wrap_counting(Oracle inner) {
  auto transcript = std::make_shared<Transcript>();
  Oracle wrapped = [inner = std::move(inner), transcript](std::span<const int> x) {
    const double a = inner(x);
    transcript->append(x, a);
    return a;
  };
  return {std::move(wrapped), std::move(transcript)};
}

// m(v) = (2k+1)^-1 * sum_{z=-k..k} |v - z|^p for v in {-k..k}, index v + k.
inline std::vector<double> coordinate_means(int k, double p) {
  std::vector<double> means(static_cast<std::size_t>(2 * k + 1));
  for (int v = -k; v <= k; ++v) {
    double acc = 0;
    for (int z = -k; z <= k; ++z) acc += std::pow(std::abs(v - z), p);
    means[static_cast<std::size_t>(v + k)] = acc / static_cast<double>(2 * k + 1);
  }
  return means;
}

// E_z ||x - z||_p^p for z uniform on {-k..k}^n.
inline double expected_query_power(std::span<const int> x, int k, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("expected_query_power: p must be >= 1");
  validate_query(x, x.size(), k);
  const auto means = coordinate_means(k, p);
  double acc = 0;
  for (int v : x) acc += means[static_cast<std::size_t>(v + k)];
  return acc;
}

// Answers every query with (E_z ||x - z||_p^p)^{1/p}, which does not depend on
// y, whenever that value lies in the (1 +- eps) band around the honest
// answer; otherwise answers honestly.
class NoisyAdversary {
 public:
  NoisyAdversary(HiddenVector y, double p, double eps)
      : y_(std::move(y)), p_(p), eps_(eps), means_(), transcript_(std::make_shared<Transcript>()) {
    if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("NoisyAdversary: eps must lie in (0, 1)");
    if (!(p >= 1.0) || !std::isfinite(p)) throw std::invalid_argument("NoisyAdversary: p must be finite and >= 1");
    means_ = coordinate_means(y_.k(), p_);
  }

  double operator()(std::span<const int> x) const {
    validate_query(x, y_.n(), y_.k());
    double honest_pow = 0;
    double blur_pow = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      honest_pow += std::pow(std::abs(y_.values()[i] - x[i]), p_);
      blur_pow += means_[static_cast<std::size_t>(x[i] + y_.k())];
    }
    const double honest = std::pow(honest_pow, 1.0 / p_);
    const double blur = std::pow(blur_pow, 1.0 / p_);
    const bool blurred = (1.0 - eps_) * honest <= blur && blur <= (1.0 + eps_) * honest;
    const double answer = blurred ? blur : honest;
    if (answer < (1.0 - eps_) * honest || answer > (1.0 + eps_) * honest) {
      throw std::logic_error("NoisyAdversary: answer left the (1 +- eps) band");
    }
    transcript_->append(x, answer, blurred);
    return answer;
  }

  const HiddenVector& hidden() const { return y_; }
  double epsilon() const { return eps_; }
  double p() const { return p_; }
  std::shared_ptr<const Transcript> transcript() const { return transcript_; }

 private:
  HiddenVector y_;
  double p_;
  double eps_;
  std::vector<double> means_;
  std::shared_ptr<Transcript> transcript_;
};

// Copies share one transcript, so the returned handle sees every call.
inline std::pair<Oracle, std::shared_ptr<const Transcript>> make_noisy_adversary(HiddenVector y, double p,
                                                                                 double eps) {
  NoisyAdversary adv(std::move(y), p, eps);
  auto transcript = adv.transcript();
  return {Oracle(std::move(adv)), std::move(transcript)};
}

}  // namespace lpmind
