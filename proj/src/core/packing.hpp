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

// Packing of A and B blocks into the contiguous Ac/Bc buffers, executed on the
// simulated SME unit so that every byte moved is counted.
//
// Ac: ceil(mc/mr) panels, each column-major over k-groups: k-group c of panel
//     p holds mr rows x (interleave) consecutive K values = one vector.
// Bc: ceil(nc/nr) panels of kc/(interleave) logical rows. f32/f64/i8 rows are
//     nr groups wide (four vectors). f16 panels are two 32-column sub-blocks,
//     each (kc/2) rows x 32 pairs.

#include <cstdint>
#include <ostream>

#include "common.hpp"
#include "memsim.hpp"
#include "unit.hpp"

namespace smegemm {

/// A row-major source block: `rows` x `cols` live elements starting at
/// `base`, consecutive rows `ld` elements apart.
struct SourceBlock {
  uint64_t base = 0;
  uint64_t ld = 0;
  uint64_t rows = 0;
  uint64_t cols = 0;
};

struct PackedPanelLayout {
  uint32_t panel_rows = 0;   // A: mr; B: kc (padded)
  uint32_t panel_cols = 0;   // A: kc (padded); B: nr
  bool column_major = false; // A panels are column-major, B panels row-major
  uint32_t interleave = 1;   // K values kept adjacent per lane
  uint64_t panels = 0;
  uint64_t bytes = 0;
};

PackedPanelLayout a_panel_layout(Precision p, uint32_t mr, uint64_t mc_pad, uint64_t kc_pad);
PackedPanelLayout b_panel_layout(Precision p, uint32_t nr, uint64_t kc_pad, uint64_t nc_pad);

/// Byte offset of B panel `q` inside Bc.
inline uint64_t b_panel_offset(Precision p, uint32_t nr, uint64_t kc_pad, uint64_t q) {
  return q * kc_pad * nr * input_bytes(p);
}
/// Byte offset of A panel `q` inside Ac.
inline uint64_t a_panel_offset(Precision p, uint32_t mr, uint64_t kc_pad, uint64_t q) {
  return q * kc_pad * mr * input_bytes(p);
}

/// Transposing pack of A through ZA: rows are written as horizontal slices
/// and read back as vertical slices of the accumulator-width tiles.
void pack_a_transposed(const UnitContext& ctx, Precision p, const SourceBlock& a, uint64_t mc_pad,
                       uint64_t kc_pad, uint64_t ac);
void pack_a_f32_transpose(const UnitContext& ctx, const SourceBlock& a, uint64_t mc_pad,
                          uint64_t kc_pad, uint64_t ac);
void pack_a_f16_transpose(const UnitContext& ctx, const SourceBlock& a, uint64_t mc_pad,
                          uint64_t kc_pad, uint64_t ac);
void pack_a_i8_transpose(const UnitContext& ctx, const SourceBlock& a, uint64_t mc_pad,
                         uint64_t kc_pad, uint64_t ac);

enum class PackMode : uint8_t { kUpfront, kOnline };

/// Source columns covered by one four-register row load; B is packed in
/// spans of this width (1, 2 or 4 panels).
uint64_t b_span_cols(Precision p, uint32_t svl_bits);
uint64_t b_span_panels(Precision p, uint32_t svl_bits);

/// Packs rows [k_begin, k_end) of B span `span`. Panels past `nc_pad` are skipped.
void pack_b_span(const UnitContext& ctx, Precision p, const SourceBlock& b, uint64_t kc_pad,
                 uint64_t nc_pad, uint64_t bc, uint64_t span, uint64_t k_begin = 0,
                 uint64_t k_end = UINT64_MAX);

/// Packs the whole kc x nc block. Upfront sweeps rows across all spans;
/// online packs span after span, the order the driver interleaves with the
/// first pass of micro-kernels. Both produce identical buffers.
void pack_b(const UnitContext& ctx, Precision p, const SourceBlock& b, uint64_t kc_pad,
            uint64_t nc_pad, uint64_t bc, PackMode mode = PackMode::kUpfront);
void pack_b_f16_zip(const UnitContext& ctx, const SourceBlock& b, uint64_t kc_pad, uint64_t nc_pad,
                    uint64_t bc);
void pack_b_i8(const UnitContext& ctx, const SourceBlock& b, uint64_t kc_pad, uint64_t nc_pad,
               uint64_t bc);

/// Debug dump: one text header line
///   smegemm-packed <a|b> dtype=<p> panels=<n> panel_rows=<r> panel_cols=<c> interleave=<g> bytes=<n>
/// followed by the raw little-endian buffer.
void dump_packed(std::ostream& os, const MemoryImage& image, uint64_t addr,
                 const PackedPanelLayout& layout, Precision p);

}  // namespace smegemm
