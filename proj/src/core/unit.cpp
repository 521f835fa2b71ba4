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

#include "unit.hpp"

#include <algorithm>

namespace smegemm {

void load4(const UnitContext& ctx, uint64_t addr, unsigned first_reg, uint32_t elem_bits,
           uint64_t active) {
  Machine& m = ctx.m();
  const uint64_t lanes = m.lanes(elem_bits);
  if (!ctx.four_way) {
    for (unsigned r = 0; r < 4; ++r) {
      const uint64_t here = std::min(lanes, active > r * lanes ? active - r * lanes : 0);
      load1(ctx, addr + r * lanes * (elem_bits / 8), first_reg + r, elem_bits, here);
    }
    return;
  }
  if (active >= 4 * lanes) {
    m.ld_multi(ctx.mem, addr, 4, first_reg, elem_bits);
  } else {
    m.whilelt_pn(kPnLoad, 0, active, elem_bits, 4);
    m.ld_multi(ctx.mem, addr, 4, first_reg, elem_bits, kPnLoad);
  }
}

void store4(const UnitContext& ctx, uint64_t addr, unsigned first_reg, uint32_t elem_bits,
            uint64_t active) {
  Machine& m = ctx.m();
  if (active >= 4ull * m.lanes(elem_bits)) {
    m.st_multi(ctx.mem, addr, 4, first_reg, elem_bits);
  } else {
    m.whilelt_pn(kPnStore, 0, active, elem_bits, 4);
    m.st_multi(ctx.mem, addr, 4, first_reg, elem_bits, kPnStore);
  }
}

void load1(const UnitContext& ctx, uint64_t addr, unsigned reg, uint32_t elem_bits,
           uint64_t active) {
  Machine& m = ctx.m();
  if (active >= m.lanes(elem_bits)) {
    m.ld_multi(ctx.mem, addr, 1, reg, elem_bits);
  } else {
    m.whilelt(kPLoad, 0, active, elem_bits);
    m.ld_multi(ctx.mem, addr, 1, reg, elem_bits, kPLoad);
  }
}

void store1(const UnitContext& ctx, uint64_t addr, unsigned reg, uint32_t elem_bits,
            uint64_t active) {
  Machine& m = ctx.m();
  if (active >= m.lanes(elem_bits)) {
    m.st_multi(ctx.mem, addr, 1, reg, elem_bits);
  } else {
    m.whilelt(kPStore, 0, active, elem_bits);
    m.st_multi(ctx.mem, addr, 1, reg, elem_bits, kPStore);
  }
}

}  // namespace smegemm
