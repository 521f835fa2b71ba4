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

// Analytical cache/TLB tiling model. Chooses (mc, nc, kc, mr, nr) so that the
// packed blocks stay resident in the shared L2 and the packed panels of one
// micro-kernel sweep fit in the TLB, maximising the L2 compute-to-memory ratio.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "common.hpp"

namespace smegemm {

struct HardwareProfile {
  uint64_t l2_budget_bytes = 8ull << 20;  // effective working set, not raw capacity
  uint32_t tlb_entries = 256;
  uint64_t page_bytes = 16 << 10;
  uint32_t dtype_size_bytes = 4;
  uint32_t svl_bits = 512;

  void validate() const;
  /// L2 budget expressed in elements.
  uint64_t budget_elems() const { return l2_budget_bytes / dtype_size_bytes; }
};

struct TilingParams {
  uint64_t mc = 0;
  uint64_t nc = 0;
  uint64_t kc = 0;
  uint32_t mr = 0;
  uint32_t nr = 0;

  bool operator==(const TilingParams&) const = default;
};

struct MicroTile {
  uint32_t mr = 0;
  uint32_t nr = 0;
  bool operator==(const MicroTile&) const = default;
};

/// Main micro-kernel shape: four accumulator tiles side by side along the
/// contiguous dimension of C.
MicroTile micro_tile_shape(Precision p, uint32_t svl_bits, Layout layout);

/// TLB entries needed by one micro-kernel sweep over a kc-deep A panel and
/// (current + next) B panels, with one entry per C row.
struct TlbDemand {
  uint64_t a_pages = 0;
  uint64_t b_pages = 0;
  uint64_t c_pages = 0;
  uint64_t total() const { return a_pages + 2 * b_pages + c_pages; }
};
TlbDemand tlb_demand(const HardwareProfile& hw, uint32_t mr, uint32_t nr, uint64_t kc);

/// Elements the L2 must hold for one L3 iteration (Ac, Bc, the C block, plus
/// room for the next Bc and C block so Bc survives LRU eviction).
uint64_t l2_footprint_elems(uint64_t mc, uint64_t nc, uint64_t kc);

/// Compute-to-memory ratio of an (mc, nc, kc) block.
double cmr(uint64_t mc, uint64_t nc, uint64_t kc);

/// Largest multiple of `unit` (capped at `kc_limit`) meeting the TLB bound.
uint64_t solve_kc(const HardwareProfile& hw, uint32_t mr, uint32_t nr, uint32_t unit,
                  uint64_t kc_limit = 1 << 16);

/// Continuous maximiser of cmr() on the L2 boundary, from the Lagrange
/// condition n^2 (2k + 2m) = m^2 (k + 2n).
struct ContinuousOptimum {
  double mc = 0;
  double nc = 0;
  double cmr = 0;
};
ContinuousOptimum continuous_optimum(const HardwareProfile& hw, uint64_t kc);

/// Best (mc, nc) on the (mr, nr) grid under the strict L2 bound. Optional
/// caps (0 = none) bound mc and nc, e.g. by the padded problem size.
std::pair<uint64_t, uint64_t> solve_mc_nc(const HardwareProfile& hw, uint64_t kc, uint32_t mr,
                                          uint32_t nr, uint64_t mc_cap = 0, uint64_t nc_cap = 0);

struct Violation {
  std::string constraint;  // "divisibility", "l2_footprint", "tlb_entries"
  std::string detail;
};
std::vector<Violation> validate(const TilingParams& t, const HardwareProfile& hw, uint32_t unit);

/// Planner entry point used by the GEMM driver (row-major orientation).
TilingParams plan(const HardwareProfile& hw, Precision p, uint64_t m, uint64_t n, uint64_t k);

/// Human-readable constraint slack report.
std::string explain(const TilingParams& t, const HardwareProfile& hw, uint32_t unit);

}  // namespace smegemm
