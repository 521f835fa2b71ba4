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

// Per-unit execution context shared by the packers and micro-kernels, plus
// the grouped load/store helpers that implement the four-way loading switch.

#include <cstdint>

#include "memsim.hpp"
#include "vsme.hpp"

namespace smegemm {

/// Predicate register conventions used by the packers and kernels.
inline constexpr unsigned kPnLoad = 8;
inline constexpr unsigned kPnStore = 9;
inline constexpr unsigned kPLoad = 0;
inline constexpr unsigned kPStore = 1;

struct UnitContext {
  Machine* machine;
  MemPort mem;
  bool four_way = true;  // false: every grouped load is issued as single-register loads

  Machine& m() const { return *machine; }
};

/// Loads four consecutive registers from `addr` with the first `active`
/// elements live (the rest zeroed).
void load4(const UnitContext& ctx, uint64_t addr, unsigned first_reg, uint32_t elem_bits,
           uint64_t active);
/// Stores the first `active` elements of four consecutive registers.
void store4(const UnitContext& ctx, uint64_t addr, unsigned first_reg, uint32_t elem_bits,
            uint64_t active);
/// Single-register load/store with the first `active` lanes live.
void load1(const UnitContext& ctx, uint64_t addr, unsigned reg, uint32_t elem_bits, uint64_t active);
void store1(const UnitContext& ctx, uint64_t addr, unsigned reg, uint32_t elem_bits,
            uint64_t active);

}  // namespace smegemm
