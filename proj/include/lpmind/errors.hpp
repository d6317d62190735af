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

#include <stdexcept>
#include <string>

namespace lpmind {

// Not enough characters in {0,1}^nu to host every column.
class capacity_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A planned column could not be realized as a {0,1} function.
class construction_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// The measurement is not M*u for any admissible u.
class decode_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The odd part of h is not injective at working precision.
class degenerate_measure_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class oracle_inconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class invalid_query : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class feasibility_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace lpmind
