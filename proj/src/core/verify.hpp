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

// Naive reference GEMM (f64 accumulation, exact integer arithmetic for i8)
// and the element-wise acceptance check used for run verdicts.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "common.hpp"

namespace smegemm {

/// Host copy of one GEMM problem in its own layout and leading dimensions.
struct HostProblem {
  Precision precision = Precision::kF32;
  Layout layout = Layout::kRowMajor;
  uint64_t m = 0, n = 0, k = 0;
  uint64_t lda = 0, ldb = 0, ldc = 0;
  double alpha = 1.0, beta = 0.0;
  std::vector<std::byte> a, b, c;  // raw element bytes

  uint64_t a_index(uint64_t i, uint64_t p) const { return index(i, p, lda); }
  uint64_t b_index(uint64_t p, uint64_t j) const { return index(p, j, ldb); }
  uint64_t c_index(uint64_t i, uint64_t j) const { return index(i, j, ldc); }
  uint64_t index(uint64_t r, uint64_t c, uint64_t ld) const {
    return layout == Layout::kRowMajor ? r * ld + c : c * ld + r;
  }
  /// Sizes in elements with the given leading dimensions.
  uint64_t a_elems() const;
  uint64_t b_elems() const;
  uint64_t c_elems() const;

  double a_value(uint64_t i, uint64_t p) const;
  double b_value(uint64_t p, uint64_t j) const;
  double c_value(std::span<const std::byte> c_bytes, uint64_t i, uint64_t j) const;
};

/// Fresh problem with packed leading dimensions and zeroed storage.
HostProblem make_problem(Precision p, Layout l, uint64_t m, uint64_t n, uint64_t k,
                         double alpha = 1.0, double beta = 0.0);

/// Uniform random fill: floats in [-1, 1], i8 in [-128, 127], C likewise.
void fill_random(HostProblem& hp, uint64_t seed);

struct OracleResult {
  std::vector<double> value;  // row-major m x n
  std::vector<double> scale;  // sum |alpha a b| + |beta c| per element
};
/// alpha*A*B + beta*C in double precision; for i8 the exact int32-wrapped value.
OracleResult naive_oracle(const HostProblem& hp);

struct Verdict {
  bool pass = true;
  double max_rel_err = 0;
  double tolerance = 0;
  uint64_t failures = 0;
  uint64_t worst_i = 0, worst_j = 0;
};

/// Default element-wise relative tolerance: 1e-5 f32, 1e-12 f64, 1e-2 f16
/// inputs, 0 (exact) for i8.
double default_tolerance(Precision p);

/// Compares `c_out` (same layout as hp.c) against the oracle. The relative
/// error of an element is |got - ref| / scale, with scale the magnitude sum
/// of its terms (absolute error when that sum is zero).
Verdict check_result(const HostProblem& hp, std::span<const std::byte> c_out,
                     double tolerance = -1);

}  // namespace smegemm
