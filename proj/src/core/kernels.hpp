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

// Micro-kernels: one call computes a register-blocked tile of C from a packed
// A panel (or four, for the edge kernel) and a B panel, then runs the
// alpha/beta epilogue.

#include <cstdint>

#include "common.hpp"
#include "unit.hpp"

namespace smegemm {

struct MicroTask {
  Precision precision = Precision::kF32;
  uint64_t a_panel = 0;         // first Ar panel
  uint64_t a_panel_stride = 0;  // bytes between consecutive Ar panels (edge kernel)
  uint64_t b_panel = 0;         // first logical row of the B panel (already column-offset)
  uint64_t b_row_stride = 0;    // bytes between logical B rows
  uint64_t b_rows_valid = 0;    // logical B rows holding data; the rest read as zero
  uint64_t b_cols_valid = 0;    // B lanes holding data per row
  uint64_t c_addr = 0;
  uint64_t ldc = 0;             // elements
  uint64_t kc_pad = 0;
  uint32_t rows = 0;            // live rows/cols of this C tile
  uint32_t cols = 0;
  double alpha = 1.0;
  double beta = 0.0;            // effective beta for this k-block
};

/// Micro-tile extents (mr, nr) of the main kernel for `p` at `svl_bits`.
uint32_t main_mr(Precision p, uint32_t svl_bits);
uint32_t main_nr(Precision p, uint32_t svl_bits);

/// mr x nr tile from one Ar and one Br panel; rows/cols below the maximum
/// are handled with row and column predicates (f32 and f64).
void kernel_f32_main(const UnitContext& ctx, const MicroTask& t);
/// 4*side x side tile from four consecutive Ar panels and one side-wide
/// column chunk of B. Requires four full Ar panels (f32 and f64).
void kernel_f32_edge(const UnitContext& ctx, const MicroTask& t);
void kernel_f16_main(const UnitContext& ctx, const MicroTask& t);
void kernel_i8_main(const UnitContext& ctx, const MicroTask& t);

/// Dispatches to the main kernel for t.precision.
void kernel_main(const UnitContext& ctx, const MicroTask& t);

}  // namespace smegemm
