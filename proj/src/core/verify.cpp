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

#include "verify.hpp"

#include <cmath>
#include <cstring>
#include <random>

#include "fp16.hpp"

namespace smegemm {

namespace {

template <typename T>
T load(const std::byte* base, uint64_t idx) {
  T v;
  std::memcpy(&v, base + idx * sizeof(T), sizeof(T));
  return v;
}

template <typename T>
void store(std::byte* base, uint64_t idx, T v) {
  std::memcpy(base + idx * sizeof(T), &v, sizeof(T));
}

double input_value(Precision p, const std::byte* base, uint64_t idx) {
  switch (p) {
    case Precision::kF32: return load<float>(base, idx);
    case Precision::kF64: return load<double>(base, idx);
    case Precision::kF16F32: return half_to_float(load<uint16_t>(base, idx));
    case Precision::kI8I32: return load<int8_t>(base, idx);
  }
  return 0;
}

uint64_t extent(Layout l, uint64_t rows, uint64_t cols, uint64_t ld) {
  return l == Layout::kRowMajor ? (rows - 1) * ld + cols : (cols - 1) * ld + rows;
}

}  // namespace

uint64_t HostProblem::a_elems() const { return extent(layout, m, k, lda); }
uint64_t HostProblem::b_elems() const { return extent(layout, k, n, ldb); }
uint64_t HostProblem::c_elems() const { return extent(layout, m, n, ldc); }

double HostProblem::a_value(uint64_t i, uint64_t p) const {
  return input_value(precision, a.data(), a_index(i, p));
}
double HostProblem::b_value(uint64_t p, uint64_t j) const {
  return input_value(precision, b.data(), b_index(p, j));
}
double HostProblem::c_value(std::span<const std::byte> cb, uint64_t i, uint64_t j) const {
  const uint64_t idx = c_index(i, j);
  switch (precision) {
    case Precision::kF64: return load<double>(cb.data(), idx);
    case Precision::kI8I32: return load<int32_t>(cb.data(), idx);
    default: return load<float>(cb.data(), idx);
  }
}

HostProblem make_problem(Precision p, Layout l, uint64_t m, uint64_t n, uint64_t k, double alpha,
                         double beta) {
  if (m == 0 || n == 0 || k == 0) throw UsageError("problem dimensions must be positive");
  HostProblem hp;
  hp.precision = p;
  hp.layout = l;
  hp.m = m;
  hp.n = n;
  hp.k = k;
  hp.alpha = alpha;
  hp.beta = beta;
  const bool row = l == Layout::kRowMajor;
  hp.lda = row ? k : m;
  hp.ldb = row ? n : k;
  hp.ldc = row ? n : m;
  hp.a.assign(hp.a_elems() * input_bytes(p), std::byte{0});
  hp.b.assign(hp.b_elems() * input_bytes(p), std::byte{0});
  hp.c.assign(hp.c_elems() * output_bytes(p), std::byte{0});
  return hp;
}

void fill_random(HostProblem& hp, uint64_t seed) {
  std::mt19937_64 rng(seed);
  // Bit-level mappings rather than std distributions keep the values
  // identical across standard libraries.
  auto unit_f32 = [&] { return static_cast<float>(static_cast<double>(rng() >> 40) / 8388608.0 - 1.0); };
  auto unit_f64 = [&] { return static_cast<double>(rng() >> 11) / 4503599627370496.0 - 1.0; };
  auto fill_in = [&](std::vector<std::byte>& v) {
    const Precision p = hp.precision;
    for (uint64_t i = 0; i < v.size() / input_bytes(p); ++i) {
      switch (p) {
        case Precision::kF32: store<float>(v.data(), i, unit_f32()); break;
        case Precision::kF64: store<double>(v.data(), i, unit_f64()); break;
        case Precision::kF16F32: store<uint16_t>(v.data(), i, float_to_half(unit_f32())); break;
        case Precision::kI8I32: store<int8_t>(v.data(), i, static_cast<int8_t>(rng() >> 56)); break;
      }
    }
  };
  fill_in(hp.a);
  fill_in(hp.b);
  for (uint64_t i = 0; i < hp.c.size() / output_bytes(hp.precision); ++i) {
    switch (hp.precision) {
      case Precision::kF64: store<double>(hp.c.data(), i, unit_f64()); break;
      case Precision::kI8I32:
        store<int32_t>(hp.c.data(), i, static_cast<int32_t>(static_cast<int64_t>(rng() >> 48) - 32768));
        break;
      default: store<float>(hp.c.data(), i, unit_f32()); break;
    }
  }
}

OracleResult naive_oracle(const HostProblem& hp) {
  OracleResult r;
  r.value.assign(hp.m * hp.n, 0.0);
  r.scale.assign(hp.m * hp.n, 0.0);
  const bool int8 = hp.precision == Precision::kI8I32;
  for (uint64_t i = 0; i < hp.m; ++i)
    for (uint64_t j = 0; j < hp.n; ++j) {
      const double c = hp.c_value(hp.c, i, j);
      if (int8) {
        int64_t s = 0;
        for (uint64_t p = 0; p < hp.k; ++p)
          s += static_cast<int64_t>(hp.a_value(i, p)) * static_cast<int64_t>(hp.b_value(p, j));
        // int32 wraparound, as the hardware accumulates
        const uint32_t acc = static_cast<uint32_t>(s);
        const uint32_t v = static_cast<uint32_t>(static_cast<int64_t>(hp.alpha)) * acc +
                           (hp.beta == 0 ? 0u
                                         : static_cast<uint32_t>(static_cast<int64_t>(hp.beta)) *
                                               static_cast<uint32_t>(static_cast<int32_t>(c)));
        r.value[i * hp.n + j] = static_cast<int32_t>(v);
        continue;
      }
      double s = 0, mag = 0;
      for (uint64_t p = 0; p < hp.k; ++p) {
        const double t = hp.a_value(i, p) * hp.b_value(p, j);
        s += t;
        mag += std::fabs(hp.alpha * t);
      }
      const double bc = hp.beta == 0 ? 0.0 : hp.beta * c;
      r.value[i * hp.n + j] = hp.alpha * s + bc;
      r.scale[i * hp.n + j] = mag + std::fabs(bc);
    }
  return r;
}

double default_tolerance(Precision p) {
  switch (p) {
    case Precision::kF32: return 1e-5;
    case Precision::kF64: return 1e-12;
    case Precision::kF16F32: return 1e-2;
    case Precision::kI8I32: return 0.0;
  }
  return 0;
}

Verdict check_result(const HostProblem& hp, std::span<const std::byte> c_out, double tolerance) {
  if (c_out.size() < hp.c.size()) throw UsageError("result buffer smaller than C");
  Verdict v;
  v.tolerance = tolerance < 0 ? default_tolerance(hp.precision) : tolerance;
  const OracleResult ref = naive_oracle(hp);
  for (uint64_t i = 0; i < hp.m; ++i)
    for (uint64_t j = 0; j < hp.n; ++j) {
      const double got = hp.c_value(c_out, i, j);
      const double want = ref.value[i * hp.n + j];
      const double scale = ref.scale[i * hp.n + j];
      double err;
      if (std::isnan(got) || std::isnan(want))
        err = std::isnan(got) && std::isnan(want) ? 0.0 : INFINITY;
      else
        err = scale > 0 ? std::fabs(got - want) / scale : std::fabs(got - want);
      if (err > v.max_rel_err || std::isinf(err)) {
        v.max_rel_err = err;
        v.worst_i = i;
        v.worst_j = j;
      }
      if (!(err <= v.tolerance)) ++v.failures;
    }
  v.pass = v.failures == 0;
  return v;
}

}  // namespace smegemm
