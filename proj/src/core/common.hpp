// Copyright 2026 The smegemm Authors
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

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace smegemm {

/// Memory access outside the simulated image or outside an instruction's
/// legal range.
class FaultError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid operand combination (bad group size, tile/precision mismatch...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The tiling planner could not satisfy its constraints.
class PlannerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Layout : uint8_t { kRowMajor, kColMajor };

/// Input -> accumulator precision pair of a GEMM.
enum class Precision : uint8_t { kF32, kF64, kF16F32, kI8I32 };

/// Bytes per input element.
constexpr unsigned input_bytes(Precision p) {
  switch (p) {
    case Precision::kF32: return 4;
    case Precision::kF64: return 8;
    case Precision::kF16F32: return 2;
    case Precision::kI8I32: return 1;
  }
  return 0;
}

/// Bytes per accumulator / output element.
constexpr unsigned output_bytes(Precision p) {
  return p == Precision::kF64 ? 8 : 4;
}

/// Number of input elements consumed per FMOPA/SMOPA lane.
constexpr unsigned interleave_factor(Precision p) {
  switch (p) {
    case Precision::kF16F32: return 2;
    case Precision::kI8I32: return 4;
    default: return 1;
  }
}

/// K granularity of the micro-kernels: four unrolled steps of four
/// outer products, each consuming `interleave_factor` K values.
constexpr unsigned k_unit(Precision p) { return 16 * interleave_factor(p); }

std::string_view to_string(Precision p);
std::string_view to_string(Layout l);
Precision parse_precision(std::string_view s);
Layout parse_layout(std::string_view s);

constexpr uint64_t round_up(uint64_t v, uint64_t m) { return (v + m - 1) / m * m; }
constexpr uint64_t ceil_div(uint64_t v, uint64_t m) { return (v + m - 1) / m; }

}  // namespace smegemm
