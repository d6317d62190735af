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

// Fourier analysis of real functions on the hypercube {-1,+1}^nu.
//
// Points and characters are both encoded as nu-bit integers. Coordinate i
// lives in bit (nu-1-i), so bits[0] is the most significant bit and integer
// order is lexicographic order. For points, bit 0 means -1 and bit 1 means +1;
// point indices therefore enumerate the cube in binary counting order.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lpmind {

inline constexpr unsigned kMaxCubeDimension = 30;

class CharacterIndex {
 public:
  constexpr CharacterIndex() = default;
  constexpr CharacterIndex(std::uint32_t mask, unsigned dim)
      : mask_(mask), dim_(dim) {
    if (dim > kMaxCubeDimension || (dim < 32 && (mask >> dim) != 0)) {
      throw std::invalid_argument("CharacterIndex: mask does not fit dimension");
    }
  }

  // Builds from flags, bits[0] first.
  static CharacterIndex from_bits(std::span<const int> bits) {
    std::uint32_t mask = 0;
    for (int b : bits) {
      if (b != 0 && b != 1) throw std::invalid_argument("CharacterIndex: flags must be 0/1");
      mask = (mask << 1) | static_cast<std::uint32_t>(b);
    }
    return {mask, static_cast<unsigned>(bits.size())};
  }

  constexpr std::uint32_t mask() const { return mask_; }
  constexpr unsigned dimension() const { return dim_; }
  constexpr int weight() const { return std::popcount(mask_); }
  constexpr bool bit(unsigned i) const { return ((mask_ >> (dim_ - 1 - i)) & 1u) != 0; }

  std::vector<int> bits() const {
    std::vector<int> out(dim_);
    for (unsigned i = 0; i < dim_; ++i) out[i] = bit(i) ? 1 : 0;
    return out;
  }

  std::string to_string() const {
    std::string s(dim_, '0');
    for (unsigned i = 0; i < dim_; ++i) if (bit(i)) s[i] = '1';
    return s;
  }

  friend constexpr bool operator==(CharacterIndex, CharacterIndex) = default;

 private:
  std::uint32_t mask_ = 0;
  unsigned dim_ = 0;
};

// True when a sits strictly above b in the decoding order: heavier characters
// first, ties broken by ascending lexicographic order.
constexpr bool precedes(CharacterIndex a, CharacterIndex b) {
  if (a.weight() != b.weight()) return a.weight() > b.weight();
  return a.mask() < b.mask();
}

inline std::vector<CharacterIndex> characters_in_order(unsigned nu) {
  std::vector<CharacterIndex> out;
  out.reserve(std::size_t{1} << nu);
  for (std::uint32_t m = 0; m < (std::uint32_t{1} << nu); ++m) out.emplace_back(m, nu);
  std::sort(out.begin(), out.end(), precedes);
  return out;
}

// Coordinates of the point with the given index, as +-1 values.
inline std::vector<int> cube_point(std::uint32_t index, unsigned nu) {
  std::vector<int> x(nu);
  for (unsigned i = 0; i < nu; ++i) x[i] = ((index >> (nu - 1 - i)) & 1u) ? 1 : -1;
  return x;
}

// chi_a(x): product of x_i over set bits of a.
inline int char_eval(CharacterIndex a, std::span<const int> x) {
  if (x.size() != a.dimension()) {
    throw std::invalid_argument("char_eval: dimension mismatch");
  }
  int prod = 1;
  for (unsigned i = 0; i < a.dimension(); ++i) {
    if (x[i] != 1 && x[i] != -1) throw std::invalid_argument("char_eval: point must be +-1");
    if (a.bit(i)) prod *= x[i];
  }
  return prod;
}

// chi_a at the point with the given index.
constexpr int char_eval(std::uint32_t a_mask, std::uint32_t point) {
  return ((std::popcount(a_mask) - std::popcount(a_mask & point)) & 1) ? -1 : 1;
}

namespace detail {

inline unsigned log2_exact(std::size_t len, const char* who) {
  if (len == 0 || !std::has_single_bit(len)) {
    throw std::invalid_argument(std::string(who) + ": length must be a power of two");
  }
  const auto nu = static_cast<unsigned>(std::countr_zero(len));
  if (nu > kMaxCubeDimension) throw std::invalid_argument(std::string(who) + ": dimension too large");
  return nu;
}

}  // namespace detail

// Unnormalized Sylvester-Hadamard butterfly, in place:
// out[a] = sum_p in[p] * (-1)^{popcount(a & p)}.
template <typename T>
void hadamard_inplace(std::span<T> v) {
  detail::log2_exact(v.size(), "hadamard_inplace");
  for (std::size_t h = 1; h < v.size(); h <<= 1) {
    for (std::size_t i = 0; i < v.size(); i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const T a = v[j];
        const T b = v[j + h];
        v[j] = a + b;
        v[j + h] = a - b;
      }
    }
  }
}

// Values f(x) for every point of {-1,+1}^nu in point-index order.
class HypercubeFunction {
 public:
  HypercubeFunction() : values_(1, 0.0) {}
  explicit HypercubeFunction(std::vector<double> values)
      : nu_(detail::log2_exact(values.size(), "HypercubeFunction")), values_(std::move(values)) {}

  static HypercubeFunction zero(unsigned nu) {
    return HypercubeFunction(std::vector<double>(std::size_t{1} << nu, 0.0));
  }

  unsigned dimension() const { return nu_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t p) const { return values_[p]; }
  double& operator[](std::size_t p) { return values_[p]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

 private:
  unsigned nu_ = 0;
  std::vector<double> values_;
};

// Coefficients fhat(a), indexed by the character mask (lexicographic order).
class FourierSpectrum {
 public:
  FourierSpectrum() : coeffs_(1, 0.0) {}
  explicit FourierSpectrum(std::vector<double> coeffs)
      : nu_(detail::log2_exact(coeffs.size(), "FourierSpectrum")), coeffs_(std::move(coeffs)) {}

  unsigned dimension() const { return nu_; }
  std::size_t size() const { return coeffs_.size(); }
  double operator[](std::size_t a) const { return coeffs_[a]; }
  double& operator[](std::size_t a) { return coeffs_[a]; }
  double operator[](CharacterIndex a) const { return coeffs_[a.mask()]; }
  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }

 private:
  unsigned nu_ = 0;
  std::vector<double> coeffs_;
};

// fhat(a) = 2^-nu * sum_x f(x) chi_a(x), in O(nu 2^nu).
inline FourierSpectrum wht(const HypercubeFunction& f) {
  std::vector<double> c(f.values().begin(), f.values().end());
  hadamard_inplace(std::span<double>(c));
  const double scale = 1.0 / static_cast<double>(c.size());
  for (std::size_t a = 0; a < c.size(); ++a) {
    // chi_a differs from the Sylvester row by (-1)^wt(a) under the -1 <-> 0 encoding.
    c[a] *= (std::popcount(a) & 1) ? -scale : scale;
  }
  return FourierSpectrum(std::move(c));
}

// f(x) = sum_a fhat(a) chi_a(x).
inline HypercubeFunction inverse_wht(const FourierSpectrum& spec) {
  std::vector<double> v(spec.coeffs().begin(), spec.coeffs().end());
  for (std::size_t a = 0; a < v.size(); ++a) {
    if (std::popcount(a) & 1) v[a] = -v[a];
  }
  hadamard_inplace(std::span<double>(v));
  return HypercubeFunction(std::move(v));
}

}  // namespace lpmind
