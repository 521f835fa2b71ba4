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

// IEEE-754 binary16 conversion. The toolchain has no native half type, so
// halves travel as raw uint16_t bit patterns.

#include <bit>
#include <cmath>
#include <cstdint>

namespace smegemm {

/// Exact widening conversion (every binary16 value is representable in
/// binary32).
inline float half_to_float(uint16_t h) {
  const uint32_t sign = static_cast<uint32_t>(h & 0x8000u) << 16;
  const uint32_t exp = (h >> 10) & 0x1fu;
  uint32_t mant = h & 0x3ffu;
  uint32_t bits;
  if (exp == 0x1f) {
    bits = sign | 0x7f800000u | (mant << 13);
  } else if (exp != 0) {
    bits = sign | ((exp + 112u) << 23) | (mant << 13);
  } else if (mant == 0) {
    bits = sign;
  } else {
    // Subnormal: renormalise.
    int e = -1;
    do {
      ++e;
      mant <<= 1;
    } while ((mant & 0x400u) == 0);
    bits = sign | static_cast<uint32_t>(112 - e) << 23 | ((mant & 0x3ffu) << 13);
  }
  return std::bit_cast<float>(bits);
}

/// Round-to-nearest-even narrowing conversion.
inline uint16_t float_to_half(float f) {
  const uint32_t x = std::bit_cast<uint32_t>(f);
  const uint16_t sign = static_cast<uint16_t>((x >> 16) & 0x8000u);
  const uint32_t abs = x & 0x7fffffffu;
  if (abs >= 0x7f800000u) {
    // Inf stays inf; NaN keeps a quiet payload bit.
    return sign | 0x7c00u | (abs > 0x7f800000u ? 0x200u | ((abs >> 13) & 0x3ffu) : 0u);
  }
  if (abs >= 0x477ff000u) return sign | 0x7c00u;  // rounds past 65504
  if (abs < 0x33000001u) return sign;              // below half the min subnormal
  int exp = static_cast<int>(abs >> 23);
  uint32_t mant = (abs & 0x7fffffu) | 0x800000u;
  int shift;
  uint32_t hexp;
  if (exp < 113) {
    shift = 126 - exp;  // subnormal result
    hexp = 0;
  } else {
    shift = 13;
    hexp = static_cast<uint32_t>(exp - 112);
    mant &= 0x7fffffu;
  }
  const uint32_t kept = mant >> shift;
  const uint32_t rest = mant & ((1u << shift) - 1);
  const uint32_t halfway = 1u << (shift - 1);
  uint32_t out = (hexp << 10) + kept;
  if (rest > halfway || (rest == halfway && (kept & 1u))) ++out;
  return static_cast<uint16_t>(sign | out);
}

}  // namespace smegemm
