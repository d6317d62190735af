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

// Separable distances f(u) = sum_i g(|u_i|) and the odd-part tables that
// turn sign queries into inner products.
//
// For a radius k, h(x) = g(k - x) on {-k..k}. Querying k*sigma against y
// yields sum_i h(sigma_i y_i), whose odd part is linear in sigma, so the odd
// values h_odd(y_i) play the role of the unknown digits.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lpmind/errors.hpp"

namespace lpmind {

enum class MeasureKind { lp, l1l2, huber, fair, smoothmax, linf };

// Largest radius for which exp(2k) stays comfortably inside double range.
inline constexpr int kSmoothMaxRadiusLimit = 300;

class SeparableMeasure {
 public:
  MeasureKind kind() const { return kind_; }
  // p for lp, tau for huber, c for fair; unused otherwise.
  double parameter() const { return param_; }

  // linf is carried for the oracle/CLI but is not a coordinate-wise sum.
  bool separable() const { return kind_ != MeasureKind::linf; }
  // lp oracles report the p-th root of the coordinate sum.
  bool reports_root() const { return kind_ == MeasureKind::lp && param_ != 1.0; }

  // Per-coordinate loss g(x) for x >= 0.
  double g(double x) const {
    switch (kind_) {
      case MeasureKind::lp:
        return param_ == 1.0 ? x : std::pow(x, param_);
      case MeasureKind::l1l2:
        return 2.0 * (std::sqrt(1.0 + x * x / 2.0) - 1.0);
      case MeasureKind::huber:
        return x <= param_ ? x * x / (2.0 * param_) : x - param_ / 2.0;
      case MeasureKind::fair:
        return param_ * param_ * (x / param_ - std::log1p(x / param_));
      case MeasureKind::smoothmax:
        return std::exp(x);
      case MeasureKind::linf:
        return x;
    }
    return 0;
  }

  // Coordinate sum -> reported value, and back.
  double report_from_sum(double sum) const { return reports_root() ? std::pow(sum, 1.0 / param_) : sum; }
  double sum_from_report(double report) const { return reports_root() ? std::pow(report, param_) : report; }

  // CLI spelling, e.g. "lp:2", "huber:1", "l1l2".
  std::string spec() const {
    std::ostringstream os;
    switch (kind_) {
      case MeasureKind::lp: os << "lp:" << param_; break;
      case MeasureKind::l1l2: os << "l1l2"; break;
      case MeasureKind::huber: os << "huber:" << param_; break;
      case MeasureKind::fair: os << "fair:" << param_; break;
      case MeasureKind::smoothmax: os << "smoothmax"; break;
      case MeasureKind::linf: os << "lp:inf"; break;
    }
    return os.str();
  }

  friend bool operator==(const SeparableMeasure&, const SeparableMeasure&) = default;

 private:
  friend SeparableMeasure make_measure(MeasureKind kind, double param);
  SeparableMeasure(MeasureKind kind, double param) : kind_(kind), param_(param) {}

  MeasureKind kind_ = MeasureKind::lp;
  double param_ = 2.0;
};

inline SeparableMeasure make_measure(MeasureKind kind, double param = 0.0) {
  switch (kind) {
    case MeasureKind::lp:
      if (!(param >= 1.0) || !std::isfinite(param)) throw std::invalid_argument("make_measure: lp needs finite p >= 1");
      break;
    case MeasureKind::huber:
      if (!(param > 0.0) || !std::isfinite(param)) throw std::invalid_argument("make_measure: huber needs tau > 0");
      break;
    case MeasureKind::fair:
      if (!(param > 0.0) || !std::isfinite(param)) throw std::invalid_argument("make_measure: fair needs c > 0");
      break;
    case MeasureKind::l1l2:
    case MeasureKind::smoothmax:
    case MeasureKind::linf:
      param = 0.0;
      break;
  }
  return SeparableMeasure(kind, param);
}

// Parses "lp:<p>", "lp:inf", "huber:<tau>", "fair:<c>", "l1l2", "smoothmax".
inline SeparableMeasure parse_measure(const std::string& text) {
  const auto colon = text.find(':');
  const std::string name = text.substr(0, colon);
  const bool has_arg = colon != std::string::npos;
  const std::string arg = has_arg ? text.substr(colon + 1) : std::string{};
  auto number = [&]() {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(arg, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != arg.size()) throw std::invalid_argument("parse_measure: bad parameter in '" + text + "'");
    return v;
  };
  if (name == "lp") {
    if (!has_arg) throw std::invalid_argument("parse_measure: lp needs a parameter");
    if (arg == "inf") return make_measure(MeasureKind::linf);
    return make_measure(MeasureKind::lp, number());
  }
  if (name == "huber") return make_measure(MeasureKind::huber, has_arg ? number() : 1.0);
  if (name == "fair") return make_measure(MeasureKind::fair, has_arg ? number() : 1.0);
  if (name == "l1l2" && !has_arg) return make_measure(MeasureKind::l1l2);
  if (name == "smoothmax" && !has_arg) return make_measure(MeasureKind::smoothmax);
  throw std::invalid_argument("parse_measure: unrecognized measure '" + text + "'");
}

// Reported distance of the difference vector u.
template <typename Int>
double eval_distance(const SeparableMeasure& m, std::span<const Int> u) {
  double acc = 0;
  if (m.kind() == MeasureKind::linf) {
    for (Int x : u) acc = std::max(acc, std::abs(static_cast<double>(x)));
    return acc;
  }
  for (Int x : u) acc += m.g(std::abs(static_cast<double>(x)));
  if (!std::isfinite(acc)) throw std::overflow_error("eval_distance: value overflows double range");
  return m.report_from_sum(acc);
}

inline double eval_distance(const SeparableMeasure& m, const std::vector<int>& u) {
  return eval_distance<int>(m, std::span<const int>(u));
}

// Tables over {-k..k}, index x + k.
struct EvenOddTables {
  int k = 0;
  std::vector<double> even;
  std::vector<double> odd;

  double even_at(int x) const { return even[static_cast<std::size_t>(x + k)]; }
  double odd_at(int x) const { return odd[static_cast<std::size_t>(x + k)]; }
};

inline EvenOddTables even_odd_decompose(const std::function<double(int)>& h, int k) {
  if (k < 0) throw std::invalid_argument("even_odd_decompose: negative radius");
  EvenOddTables t;
  t.k = k;
  const auto len = static_cast<std::size_t>(2 * k + 1);
  t.even.resize(len);
  t.odd.resize(len);
  for (int x = -k; x <= k; ++x) {
    const double hp = h(x);
    const double hm = h(-x);
    t.even[static_cast<std::size_t>(x + k)] = (hp + hm) / 2.0;
    t.odd[static_cast<std::size_t>(x + k)] = (hp - hm) / 2.0;
  }
  return t;
}

// Odd-part table of one coordinate together with its normalization.
class CoordinateProfile {
 public:
  int radius() const { return tables_.k; }
  double h(int x) const { return h_[static_cast<std::size_t>(x + tables_.k)]; }
  double h_even(int x) const { return tables_.even_at(x); }
  double h_odd(int x) const { return tables_.odd_at(x); }
  double m_min() const { return m_min_; }
  double m_max() const { return m_max_; }
  // Minimum gap between distinct odd values of this coordinate.
  double delta() const { return delta_i_; }
  // d_i = ceil((M_max - M_min) / Delta) + 1 for the global Delta.
  double radix() const { return radix_; }
  // phi(x) = (h_odd(x) - M_min) / Delta.
  double phi(int x) const { return phi_[static_cast<std::size_t>(x + tables_.k)]; }

  // Admissible phi values, ascending.
  std::vector<double> images() const {
    std::vector<double> out;
    out.reserve(sorted_.size());
    for (const auto& [v, x] : sorted_) out.push_back(v);
    return out;
  }

  // Integer x whose phi is nearest to value; the residual must stay below
  // 1/3 (Delta/3 before normalization).
  int lookup(double value) const {
    auto it = std::lower_bound(sorted_.begin(), sorted_.end(), std::pair{value, std::numeric_limits<int>::min()});
    double best = std::numeric_limits<double>::infinity();
    int best_x = 0;
    for (auto cand : {it, it == sorted_.begin() ? it : it - 1}) {
      if (cand == sorted_.end()) continue;
      const double diff = std::abs(cand->first - value);
      if (diff < best) {
        best = diff;
        best_x = cand->second;
      }
    }
    if (!(best < 1.0 / 3.0)) {
      std::ostringstream os;
      os << "lookup: no tabulated odd value near " << value;
      throw decode_error(os.str());
    }
    return best_x;
  }

 private:
  friend class OddProfileBuilder;

  EvenOddTables tables_;
  std::vector<double> h_;
  double m_min_ = 0;
  double m_max_ = 0;
  double delta_i_ = 0;
  double radix_ = 0;
  std::vector<double> phi_;
  std::vector<std::pair<double, int>> sorted_;
};

class OddProfile {
 public:
  int radius() const { return k_; }
  double delta() const { return delta_; }
  // Number of distinct tables; one table is shared by every coordinate.
  std::size_t tables() const { return coords_.size(); }
  const CoordinateProfile& at(std::size_t i) const { return coords_.size() == 1 ? coords_[0] : coords_[i]; }

  double max_radix() const {
    double d = 0;
    for (const auto& c : coords_) d = std::max(d, c.radix());
    return d;
  }

 private:
  friend class OddProfileBuilder;

  int k_ = 0;
  double delta_ = 0;
  std::vector<CoordinateProfile> coords_;
};

class OddProfileBuilder {
 public:
  static OddProfile build(std::span<const SeparableMeasure> measures, int k) {
    if (k < 1) throw std::invalid_argument("build_odd_profile: k must be >= 1");
    if (measures.empty()) throw std::invalid_argument("build_odd_profile: no measures");
    OddProfile prof;
    prof.k_ = k;
    prof.delta_ = std::numeric_limits<double>::infinity();
    for (const auto& m : measures) {
      if (!m.separable()) throw std::invalid_argument("build_odd_profile: " + m.spec() + " is not separable");
      if (m.kind() == MeasureKind::smoothmax && k > kSmoothMaxRadiusLimit) {
        throw std::invalid_argument("build_odd_profile: smoothmax radius above operating range");
      }
      CoordinateProfile c;
      c.h_.resize(static_cast<std::size_t>(2 * k + 1));
      for (int x = -k; x <= k; ++x) {
        const double v = m.g(static_cast<double>(k - x));
        if (!std::isfinite(v)) throw std::overflow_error("build_odd_profile: g is not finite on [0, 2k]");
        c.h_[static_cast<std::size_t>(x + k)] = v;
      }
      c.tables_ = even_odd_decompose([&](int x) { return c.h_[static_cast<std::size_t>(x + k)]; }, k);
      const auto& odd = c.tables_.odd;
      c.m_min_ = *std::min_element(odd.begin(), odd.end());
      c.m_max_ = *std::max_element(odd.begin(), odd.end());
      std::vector<double> sorted = odd;
      std::sort(sorted.begin(), sorted.end());
      c.delta_i_ = std::numeric_limits<double>::infinity();
      for (std::size_t i = 1; i < sorted.size(); ++i) c.delta_i_ = std::min(c.delta_i_, sorted[i] - sorted[i - 1]);
      const double floor = 1e-12 * std::max(std::abs(c.m_min_), std::abs(c.m_max_));
      if (!(c.delta_i_ > 0.0) || c.delta_i_ <= floor) {
        throw degenerate_measure_error("build_odd_profile: odd part of " + m.spec() +
                                       " is not injective on {-k..k}");
      }
      prof.delta_ = std::min(prof.delta_, c.delta_i_);
      prof.coords_.push_back(std::move(c));
    }
    for (auto& c : prof.coords_) {
      double q = (c.m_max_ - c.m_min_) / prof.delta_;
      const double r = std::round(q);
      if (std::abs(q - r) <= 1e-9 * std::max(1.0, q)) q = r;
      c.radix_ = std::ceil(q) + 1.0;
      c.phi_.resize(c.tables_.odd.size());
      c.sorted_.clear();
      for (int x = -k; x <= k; ++x) {
        const auto idx = static_cast<std::size_t>(x + k);
        double v = (c.tables_.odd[idx] - c.m_min_) / prof.delta_;
        v = std::clamp(v, 0.0, c.radix_ - 1.0);
        c.phi_[idx] = v;
        c.sorted_.emplace_back(v, x);
      }
      std::sort(c.sorted_.begin(), c.sorted_.end());
    }
    return prof;
  }
};

inline OddProfile build_odd_profile(const SeparableMeasure& m, int k) {
  return OddProfileBuilder::build(std::span<const SeparableMeasure>(&m, 1), k);
}

// Heterogeneous g_i, one measure per coordinate.
inline OddProfile build_odd_profile(std::span<const SeparableMeasure> per_coordinate, int k) {
  return OddProfileBuilder::build(per_coordinate, k);
}

}  // namespace lpmind
