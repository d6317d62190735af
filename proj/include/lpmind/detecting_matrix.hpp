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

// (d_1,...,d_n)-detecting matrices with triangular Fourier structure.
//
// Rows are the 2^nu points of the hypercube, so each column is a {0,1}
// function g on {-1,+1}^nu. Columns are grouped by a character a: the i-th
// column of a group starting at column r depends only on the coordinates in
// supp(a) and has
//
//   ghat(a) = d_{r+1} * ... * d_{r+i-1} / 2^wt(a),   ghat(b) = 0 for b above a.
//
// For f = M u the coefficient at a, once heavier groups are peeled off, is
// psi(u_{r+1..r+l}) / 2^wt(a) with psi the mixed-radix value of the group's
// digits, which is what decode_digits inverts.

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lpmind/errors.hpp"
#include "lpmind/fourier.hpp"

namespace lpmind {

// Radices are kept exactly representable as doubles.
inline constexpr std::uint64_t kMaxRadix = std::uint64_t{1} << 53;

class RadixProfile {
 public:
  RadixProfile() = default;
  explicit RadixProfile(std::vector<std::uint64_t> radices) : radices_(std::move(radices)) {
    if (radices_.empty()) throw std::invalid_argument("RadixProfile: empty");
    for (std::size_t i = 0; i < radices_.size(); ++i) {
      if (radices_[i] < 2) throw std::invalid_argument("RadixProfile: radices must be >= 2");
      if (radices_[i] > kMaxRadix) throw std::invalid_argument("RadixProfile: radix exceeds 2^53");
      if (i > 0 && radices_[i] < radices_[i - 1]) {
        throw std::invalid_argument("RadixProfile: radices must be nondecreasing");
      }
    }
  }

  static RadixProfile uniform(std::size_t n, std::uint64_t d) {
    return RadixProfile(std::vector<std::uint64_t>(n, d));
  }

  std::size_t size() const { return radices_.size(); }
  std::uint64_t operator[](std::size_t i) const { return radices_[i]; }
  std::span<const std::uint64_t> values() const { return radices_; }

  // d = d_1 + ... + d_n (as a double; smooth-max radices can be large).
  double total() const {
    double t = 0;
    for (auto d : radices_) t += static_cast<double>(d);
    return t;
  }

  double log2_product() const {
    double t = 0;
    for (auto d : radices_) t += std::log2(static_cast<double>(d));
    return t;
  }

  std::uint64_t box_size() const {
    std::uint64_t p = 1;
    for (auto d : radices_) {
      if (p > std::numeric_limits<std::uint64_t>::max() / d) return std::numeric_limits<std::uint64_t>::max();
      p *= d;
    }
    return p;
  }

  friend bool operator==(const RadixProfile&, const RadixProfile&) = default;

 private:
  std::vector<std::uint64_t> radices_;
};

// How many columns a character of weight w can host.
enum class CapacityRule {
  // Largest column weight d_{r+1}...d_{r+l-1} must fit a {0,1} function on
  // the w-subcube, i.e. be at most 2^(w-1).
  column_weight,
  // d_{r+1}...d_{r+l} <= 2^w, the textbook inequality.
  product_bound,
};

struct Group {
  CharacterIndex character;
  std::size_t start = 0;
  std::size_t length = 0;
};

struct GroupPlan {
  unsigned nu = 0;
  std::vector<Group> groups;

  std::size_t columns() const {
    std::size_t c = 0;
    for (const auto& g : groups) c += g.length;
    return c;
  }
};

namespace detail {

inline std::uint64_t saturating_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

// Can a group of character weight w, whose current columns have product
// `prod` (= weight of the next column), take one more column of radix d?
inline bool fits(CapacityRule rule, int w, std::uint64_t prod, std::uint64_t d) {
  if (w == 0) return false;
  const std::uint64_t cap = std::uint64_t{1} << w;
  switch (rule) {
    case CapacityRule::column_weight:
      return prod <= cap / 2;
    case CapacityRule::product_bound:
      return saturating_mul(prod, d) <= cap;
  }
  return false;
}

// Gathers the bits of `value` selected by `mask` into the low bits, keeping
// their relative order.
inline std::uint32_t extract_bits(std::uint32_t value, std::uint32_t mask) {
  std::uint32_t out = 0;
  int pos = 0;
  for (int b = 0; b < 32; ++b) {
    if ((mask >> b) & 1u) {
      out |= ((value >> b) & 1u) << pos;
      ++pos;
    }
  }
  return out;
}

}  // namespace detail

// Greedy group assignment over characters in decoding order. Empty when the
// 2^nu characters cannot cover all columns.
inline std::optional<GroupPlan> try_plan_groups(const RadixProfile& radices, unsigned nu,
                                                CapacityRule rule = CapacityRule::column_weight) {
  if (nu < 1 || nu > kMaxCubeDimension) throw std::invalid_argument("plan_groups: nu out of range");
  const std::size_t n = radices.size();
  GroupPlan plan;
  plan.nu = nu;
  std::size_t r = 0;
  for (const CharacterIndex a : characters_in_order(nu)) {
    if (r == n) break;
    std::size_t len = 0;
    std::uint64_t prod = 1;
    while (r + len < n && detail::fits(rule, a.weight(), prod, radices[r + len])) {
      prod = detail::saturating_mul(prod, radices[r + len]);
      ++len;
    }
    if (len > 0) {
      plan.groups.push_back({a, r, len});
      r += len;
    }
  }
  if (r < n) return std::nullopt;
  return plan;
}

inline GroupPlan plan_groups(const RadixProfile& radices, unsigned nu,
                             CapacityRule rule = CapacityRule::column_weight) {
  auto plan = try_plan_groups(radices, nu, rule);
  if (!plan) {
    throw capacity_error("plan_groups: nu=" + std::to_string(nu) + " cannot host " +
                         std::to_string(radices.size()) + " columns");
  }
  return *std::move(plan);
}

// Smallest nu for which plan_groups succeeds.
inline unsigned plan_size(const RadixProfile& radices, CapacityRule rule = CapacityRule::column_weight) {
  // Under column_weight every character of weight >= 1 hosts a column, so
  // 2^nu - 1 >= n is always enough.
  const unsigned cap = rule == CapacityRule::column_weight
                           ? std::max(1u, static_cast<unsigned>(std::bit_width(radices.size())))
                           : kMaxCubeDimension;
  for (unsigned nu = 1; nu <= cap; ++nu) {
    if (try_plan_groups(radices, nu, rule)) return nu;
  }
  throw std::logic_error("plan_size: no dimension up to the safety cap works");
}

// The size inequality s(log2 s - 4) <= 2 n log2(d/n), vacuous for log2 s <= 4.
struct SizeBound {
  std::size_t rows = 0;
  double lhs = 0;
  double rhs = 0;
  bool holds = true;
};

inline SizeBound size_bound(std::size_t rows, std::size_t n, double d_total) {
  SizeBound b;
  b.rows = rows;
  const double log_s = std::log2(static_cast<double>(rows));
  b.lhs = static_cast<double>(rows) * (log_s - 4.0);
  b.rhs = 2.0 * static_cast<double>(n) * std::log2(d_total / static_cast<double>(n));
  b.holds = log_s <= 4.0 || b.lhs <= b.rhs;
  return b;
}

inline SizeBound size_bound(const RadixProfile& radices, unsigned nu) {
  return size_bound(std::size_t{1} << nu, radices.size(), radices.total());
}

class DetectingMatrix {
 public:
  DetectingMatrix() = default;

  unsigned dimension() const { return plan_.nu; }
  std::size_t rows() const { return std::size_t{1} << plan_.nu; }
  std::size_t cols() const { return radices_.size(); }
  const GroupPlan& plan() const { return plan_; }
  const RadixProfile& radices() const { return radices_; }

  std::uint8_t at(std::size_t row, std::size_t col) const { return entries_[row * cols() + col]; }
  std::span<const std::uint8_t> row(std::size_t r) const {
    return {entries_.data() + r * cols(), cols()};
  }

  // Weight ghat_j(a) * 2^wt(a) of column j within its group (exact integer).
  std::uint64_t column_weight(std::size_t col) const { return weights_[col]; }
  const Group& group_of(std::size_t col) const { return plan_.groups[group_index_[col]]; }

  HypercubeFunction column(std::size_t col) const {
    std::vector<double> v(rows());
    for (std::size_t r = 0; r < rows(); ++r) v[r] = at(r, col);
    return HypercubeFunction(std::move(v));
  }

  std::vector<double> multiply(std::span<const double> u) const {
    if (u.size() != cols()) throw std::invalid_argument("DetectingMatrix::multiply: size mismatch");
    std::vector<double> out(rows(), 0.0);
    for (std::size_t r = 0; r < rows(); ++r) {
      double acc = 0;
      for (std::size_t c = 0; c < cols(); ++c) if (at(r, c)) acc += u[c];
      out[r] = acc;
    }
    return out;
  }

  std::vector<std::int64_t> multiply_exact(std::span<const std::int64_t> u) const {
    if (u.size() != cols()) throw std::invalid_argument("DetectingMatrix::multiply_exact: size mismatch");
    std::vector<std::int64_t> out(rows(), 0);
    for (std::size_t r = 0; r < rows(); ++r) {
      std::int64_t acc = 0;
      for (std::size_t c = 0; c < cols(); ++c) if (at(r, c)) acc += u[c];
      out[r] = acc;
    }
    return out;
  }

  // Raw assembly; the entries are not certified here.
  static DetectingMatrix assemble(RadixProfile radices, GroupPlan plan, std::vector<std::uint8_t> entries) {
    DetectingMatrix m;
    m.radices_ = std::move(radices);
    m.plan_ = std::move(plan);
    if (m.plan_.columns() != m.radices_.size()) {
      throw std::invalid_argument("DetectingMatrix: plan does not cover the radix profile");
    }
    if (entries.size() != m.rows() * m.cols()) {
      throw std::invalid_argument("DetectingMatrix: entry count mismatch");
    }
    for (auto e : entries) if (e > 1) throw std::invalid_argument("DetectingMatrix: entries must be 0/1");
    m.entries_ = std::move(entries);
    m.weights_.assign(m.cols(), 1);
    m.group_index_.assign(m.cols(), 0);
    for (std::size_t g = 0; g < m.plan_.groups.size(); ++g) {
      const Group& grp = m.plan_.groups[g];
      std::uint64_t w = 1;
      for (std::size_t j = grp.start; j < grp.start + grp.length; ++j) {
        m.weights_[j] = w;
        m.group_index_[j] = g;
        w = detail::saturating_mul(w, m.radices_[j]);
      }
    }
    return m;
  }

 private:
  std::vector<std::uint8_t> entries_;
  GroupPlan plan_;
  RadixProfile radices_;
  std::vector<std::uint64_t> weights_;
  std::vector<std::size_t> group_index_;
};

inline DetectingMatrix construct(const RadixProfile& radices, unsigned nu,
                                 CapacityRule rule = CapacityRule::column_weight) {
  GroupPlan plan = plan_groups(radices, nu, rule);
  const std::size_t s = std::size_t{1} << nu;
  const std::size_t n = radices.size();
  std::vector<std::uint8_t> entries(s * n, 0);
  for (const Group& grp : plan.groups) {
    const int w = grp.character.weight();
    const std::uint32_t mask = grp.character.mask();
    const std::size_t sub = std::size_t{1} << w;
    std::uint64_t weight = 1;
    for (std::size_t j = grp.start; j < grp.start + grp.length; ++j) {
      if (weight > sub / 2) {
        throw construction_error("construct: column " + std::to_string(j) + " needs weight " +
                                 std::to_string(weight) + " on a " + std::to_string(w) + "-subcube");
      }
      // Indicator of the first `weight` subcube points where chi_a = +1, i.e.
      // with an even number of -1 coordinates.
      std::vector<std::uint8_t> chosen(sub, 0);
      std::uint64_t taken = 0;
      for (std::size_t q = 0; q < sub && taken < weight; ++q) {
        if (((w - std::popcount(q)) & 1) == 0) {
          chosen[q] = 1;
          ++taken;
        }
      }
      for (std::size_t p = 0; p < s; ++p) {
        entries[p * n + j] = chosen[detail::extract_bits(static_cast<std::uint32_t>(p), mask)];
      }
      weight = detail::saturating_mul(weight, radices[j]);
    }
  }
  return DetectingMatrix::assemble(radices, std::move(plan), std::move(entries));
}

inline DetectingMatrix construct(const RadixProfile& radices, CapacityRule rule = CapacityRule::column_weight) {
  return construct(radices, plan_size(radices, rule), rule);
}

// Checks every column's spectrum: prescribed value at its group character,
// zero at every character above it. Returns a description of the first
// violation, or nothing.
inline std::optional<std::string> check_column_spectra(const DetectingMatrix& m, double tol = 1e-9) {
  for (std::size_t j = 0; j < m.cols(); ++j) {
    const Group& grp = m.group_of(j);
    const FourierSpectrum spec = wht(m.column(j));
    const double expected =
        static_cast<double>(m.column_weight(j)) / static_cast<double>(std::uint64_t{1} << grp.character.weight());
    if (std::abs(spec[grp.character] - expected) > tol) {
      std::ostringstream os;
      os << "column " << j << ": coefficient at " << grp.character.to_string() << " is "
         << spec[grp.character] << ", expected " << expected;
      return os.str();
    }
    for (std::uint32_t b = 0; b < spec.size(); ++b) {
      const CharacterIndex cb(b, m.dimension());
      if (precedes(cb, grp.character) && std::abs(spec[b]) > tol) {
        std::ostringstream os;
        os << "column " << j << ": nonzero coefficient " << spec[b] << " at " << cb.to_string()
           << " above " << grp.character.to_string();
        return os.str();
      }
    }
  }
  return std::nullopt;
}

// Admissible digit values per coordinate: sorted, pairwise at least 1 apart.
class DigitImageSet {
 public:
  DigitImageSet() = default;
  explicit DigitImageSet(std::vector<std::vector<double>> images) : images_(std::move(images)) {
    for (auto& img : images_) {
      if (img.empty()) throw std::invalid_argument("DigitImageSet: empty coordinate");
      std::sort(img.begin(), img.end());
      for (std::size_t i = 1; i < img.size(); ++i) {
        if (img[i] - img[i - 1] < 1.0 - 1e-9) {
          throw std::invalid_argument("DigitImageSet: values closer than 1");
        }
      }
    }
  }

  static DigitImageSet integers(const RadixProfile& radices) {
    std::vector<std::vector<double>> images(radices.size());
    for (std::size_t i = 0; i < radices.size(); ++i) {
      images[i].resize(radices[i]);
      for (std::uint64_t v = 0; v < radices[i]; ++v) images[i][v] = static_cast<double>(v);
    }
    return DigitImageSet(std::move(images));
  }

  std::size_t size() const { return images_.size(); }
  std::span<const double> operator[](std::size_t i) const { return images_[i]; }

  // All values lie in [0, d_i - 1].
  bool fits(const RadixProfile& radices) const {
    if (radices.size() != images_.size()) return false;
    for (std::size_t i = 0; i < images_.size(); ++i) {
      if (images_[i].front() < -1e-9) return false;
      if (images_[i].back() > static_cast<double>(radices[i] - 1) + 1e-9) return false;
    }
    return true;
  }

 private:
  std::vector<std::vector<double>> images_;
};

using DigitTuple = std::vector<double>;

// psi(z) = sum_i z_i * prod_{j<i} d_{start+j} over one group's columns.
inline double group_psi(const DetectingMatrix& m, const Group& grp, std::span<const double> digits) {
  double acc = 0;
  for (std::size_t i = 0; i < grp.length; ++i) {
    acc += digits[i] * static_cast<double>(m.column_weight(grp.start + i));
  }
  return acc;
}

// Recovers phi from M*phi, peeling groups off in decoding order.
inline DigitTuple decode_digits(const DetectingMatrix& m, std::span<const double> measurement,
                                const DigitImageSet& images) {
  if (measurement.size() != m.rows()) throw std::invalid_argument("decode_digits: measurement size mismatch");
  if (!images.fits(m.radices())) throw std::invalid_argument("decode_digits: image set does not fit radices");

  FourierSpectrum spec = wht(HypercubeFunction(std::vector<double>(measurement.begin(), measurement.end())));
  DigitTuple digits(m.cols(), 0.0);
  constexpr double kTol = 0.25;

  for (const Group& grp : m.plan().groups) {
    const double scale = static_cast<double>(std::uint64_t{1} << grp.character.weight());
    double remaining = spec[grp.character] * scale;
    // Binary search over the group's lexicographic order: the most
    // significant (last) column decides first, lower columns contribute at
    // most its weight minus one.
    for (std::size_t i = grp.length; i-- > 0;) {
      const std::size_t col = grp.start + i;
      const double weight = static_cast<double>(m.column_weight(col));
      const auto img = images[col];
      const auto it = std::upper_bound(img.begin(), img.end(), (remaining + kTol) / weight);
      if (it == img.begin()) {
        throw decode_error("decode_digits: coefficient at " + grp.character.to_string() +
                           " below every admissible value");
      }
      digits[col] = *(it - 1);
      remaining -= digits[col] * weight;
    }
    if (std::abs(remaining) > kTol) {
      std::ostringstream os;
      os << "decode_digits: coefficient at " << grp.character.to_string() << " misses the nearest tuple by "
         << remaining;
      throw decode_error(os.str());
    }

    std::vector<double> contribution(m.rows(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t col = grp.start; col < grp.start + grp.length; ++col) {
        if (m.at(r, col)) contribution[r] += digits[col];
      }
    }
    const FourierSpectrum delta = wht(HypercubeFunction(std::move(contribution)));
    for (std::size_t b = 0; b < spec.size(); ++b) spec[b] -= delta[b];
  }

  for (std::uint32_t b = 0; b < spec.size(); ++b) {
    if (std::abs(spec[b]) * static_cast<double>(std::uint64_t{1} << std::popcount(b)) > kTol) {
      std::ostringstream os;
      os << "decode_digits: residual coefficient " << spec[b] << " at "
         << CharacterIndex(b, m.dimension()).to_string();
      throw decode_error(os.str());
    }
  }
  return digits;
}

// Text format:
//   nu=<nu> n=<n>
//   <d_1>
//   ...
//   <d_n>
//   <row 0 as n characters from {0,1}>
//   ...
inline void save_matrix(std::ostream& os, const DetectingMatrix& m) {
  os << "nu=" << m.dimension() << " n=" << m.cols() << '\n';
  for (auto d : m.radices().values()) os << d << '\n';
  std::string line(m.cols(), '0');
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) line[c] = m.at(r, c) ? '1' : '0';
    os << line << '\n';
  }
}

// Parses the text format and certifies the columns against a group plan
// rebuilt from the radices.
inline DetectingMatrix load_matrix(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::invalid_argument("load_matrix: missing header");
  unsigned nu = 0;
  std::size_t n = 0;
  {
    std::istringstream hs(line);
    std::string a, b;
    hs >> a >> b;
    if (a.rfind("nu=", 0) != 0 || b.rfind("n=", 0) != 0) {
      throw std::invalid_argument("load_matrix: header must be 'nu=<nu> n=<n>'");
    }
    try {
      nu = static_cast<unsigned>(std::stoul(a.substr(3)));
      n = std::stoul(b.substr(2));
    } catch (const std::exception&) {
      throw std::invalid_argument("load_matrix: malformed header");
    }
  }
  if (nu < 1 || nu > kMaxCubeDimension || n == 0) throw std::invalid_argument("load_matrix: bad dimensions");
  std::vector<std::uint64_t> radices(n);
  for (auto& d : radices) {
    if (!std::getline(is, line)) throw std::invalid_argument("load_matrix: truncated radix list");
    try {
      d = std::stoull(line);
    } catch (const std::exception&) {
      throw std::invalid_argument("load_matrix: malformed radix '" + line + "'");
    }
  }
  const std::size_t s = std::size_t{1} << nu;
  std::vector<std::uint8_t> entries(s * n);
  for (std::size_t r = 0; r < s; ++r) {
    if (!std::getline(is, line)) throw std::invalid_argument("load_matrix: truncated rows");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() != n) throw std::invalid_argument("load_matrix: row " + std::to_string(r) + " has wrong length");
    for (std::size_t c = 0; c < n; ++c) {
      if (line[c] != '0' && line[c] != '1') throw std::invalid_argument("load_matrix: entries must be 0/1");
      entries[r * n + c] = static_cast<std::uint8_t>(line[c] - '0');
    }
  }
  RadixProfile profile(std::move(radices));
  std::string why = "no group plan fits";
  for (CapacityRule rule : {CapacityRule::column_weight, CapacityRule::product_bound}) {
    auto plan = try_plan_groups(profile, nu, rule);
    if (!plan) continue;
    DetectingMatrix m = DetectingMatrix::assemble(profile, *std::move(plan), entries);
    auto violation = check_column_spectra(m);
    if (!violation) return m;
    why = *violation;
  }
  throw std::invalid_argument("load_matrix: columns are not triangular: " + why);
}

}  // namespace lpmind
