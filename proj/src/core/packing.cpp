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

#include "packing.hpp"

#include <algorithm>

namespace smegemm {

namespace {

uint32_t acc_bits(Precision p) { return p == Precision::kF64 ? 64 : 32; }

uint64_t clamp_active(uint64_t live, uint64_t start, uint64_t width) {
  return live > start ? std::min(live - start, width) : 0;
}

void zero4(Machine& m, unsigned first) {
  for (unsigned r = 0; r < 4; ++r) m.dup_zero(first + r);
}

}  // namespace

PackedPanelLayout a_panel_layout(Precision p, uint32_t mr, uint64_t mc_pad, uint64_t kc_pad) {
  PackedPanelLayout l;
  l.panel_rows = mr;
  l.panel_cols = static_cast<uint32_t>(kc_pad);
  l.column_major = true;
  l.interleave = interleave_factor(p);
  l.panels = ceil_div(mc_pad, mr);
  l.bytes = l.panels * mr * kc_pad * input_bytes(p);
  return l;
}

PackedPanelLayout b_panel_layout(Precision p, uint32_t nr, uint64_t kc_pad, uint64_t nc_pad) {
  PackedPanelLayout l;
  l.panel_rows = static_cast<uint32_t>(kc_pad);
  l.panel_cols = nr;
  l.interleave = interleave_factor(p);
  l.panels = ceil_div(nc_pad, nr);
  l.bytes = l.panels * nr * kc_pad * input_bytes(p);
  return l;
}

void pack_a_transposed(const UnitContext& ctx, Precision p, const SourceBlock& a, uint64_t mc_pad,
                       uint64_t kc_pad, uint64_t ac) {
  Machine& m = ctx.m();
  const uint32_t vl = m.vl();
  const uint32_t in_b = input_bytes(p);
  const uint32_t ebits = acc_bits(p);
  const uint32_t side = vl * 8 / ebits;  // == mr
  const uint32_t g = interleave_factor(p);
  const uint64_t width = 4ull * vl / in_b;  // source columns per sub-panel
  const uint64_t kgroups = kc_pad / g;
  const uint64_t full = 4ull * side;        // elements in a four-register store

  if (mc_pad % side || kc_pad % k_unit(p)) throw UsageError("pack_a: unpadded block");

  for (uint64_t pi = 0; pi < mc_pad / side; ++pi) {
    const uint64_t row0 = pi * side;
    const uint64_t rows = clamp_active(a.rows, row0, side);
    const uint64_t panel = ac + a_panel_offset(p, side, kc_pad, pi);
    for (uint64_t s = 0; s * width < kc_pad; ++s) {
      const uint64_t col0 = s * width;
      const uint64_t cols = rows ? clamp_active(a.cols, col0, width) : 0;
      if (rows < side || cols == 0) m.zero_za_all();
      if (cols) {
        for (uint32_t i = 0; i < rows; ++i) {
          load4(ctx, a.base + ((row0 + i) * a.ld + col0) * in_b, 0, in_b * 8, cols);
          for (unsigned r = 0; r < 4; ++r)
            m.mova_to_tile(TileView{ebits, r}, i, Orientation::kHorizontal, r);
        }
      }
      // Vertical slice j of tile t is k-group s*4*side + t*side + j.
      for (unsigned t = 0; t < 4; ++t) {
        const uint64_t kb = s * full + uint64_t{t} * side;
        if (kb >= kgroups) break;
        // kc_pad is a multiple of 16 groups, which can be less than a tile side.
        const uint64_t slices = std::min<uint64_t>(side, kgroups - kb);
        for (uint32_t j = 0; j < slices; j += 4) {
          m.mova_to_regs(TileView{ebits, t}, j, Orientation::kVertical, 4, 4);
          store4(ctx, panel + (kb + j) * vl, 4, ebits, full);
        }
      }
    }
  }
}

void pack_a_f32_transpose(const UnitContext& ctx, const SourceBlock& a, uint64_t mc_pad,
                          uint64_t kc_pad, uint64_t ac) {
  pack_a_transposed(ctx, Precision::kF32, a, mc_pad, kc_pad, ac);
}
void pack_a_f16_transpose(const UnitContext& ctx, const SourceBlock& a, uint64_t mc_pad,
                          uint64_t kc_pad, uint64_t ac) {
  pack_a_transposed(ctx, Precision::kF16F32, a, mc_pad, kc_pad, ac);
}
void pack_a_i8_transpose(const UnitContext& ctx, const SourceBlock& a, uint64_t mc_pad,
                         uint64_t kc_pad, uint64_t ac) {
  pack_a_transposed(ctx, Precision::kI8I32, a, mc_pad, kc_pad, ac);
}

uint64_t b_span_cols(Precision p, uint32_t svl_bits) { return svl_bits / 2 / input_bytes(p); }

uint64_t b_span_panels(Precision p, uint32_t svl_bits) {
  // nr is four accumulator-width vectors of columns
  const uint64_t nr = 4ull * svl_bits / acc_bits(p);
  return b_span_cols(p, svl_bits) / nr;
}

void pack_b_span(const UnitContext& ctx, Precision p, const SourceBlock& b, uint64_t kc_pad,
                 uint64_t nc_pad, uint64_t bc, uint64_t span, uint64_t k_begin,
                 uint64_t k_end) {
  Machine& m = ctx.m();
  const uint32_t vl = m.vl();
  const uint32_t in_b = input_bytes(p);
  const uint32_t ebits = acc_bits(p);
  const uint32_t nr = 4 * vl * 8 / ebits;
  const uint64_t width = b_span_cols(p, vl * 8);
  const uint64_t col0 = span * width;
  const uint64_t cols = clamp_active(b.cols, col0, width);
  const uint64_t panels = nc_pad / nr;
  if (nc_pad % nr || kc_pad % k_unit(p)) throw UsageError("pack_b: unpadded block");
  if (col0 >= nc_pad) return;
  k_end = std::min(k_end, kc_pad);
  if (k_begin % 4) throw UsageError("pack_b: row range must start on a group of four");

  auto load_row = [&](uint64_t k, unsigned first) {
    if (k < b.rows && cols)
      load4(ctx, b.base + (k * b.ld + col0) * in_b, first, in_b * 8, cols);
    else
      zero4(m, first);
  };

  switch (p) {
    case Precision::kF32:
    case Precision::kF64: {
      const uint64_t panel = bc + b_panel_offset(p, nr, kc_pad, span);
      for (uint64_t k = k_begin; k < k_end; ++k) {
        load_row(k, 0);
        store4(ctx, panel + k * 4ull * vl, 0, ebits, 4ull * vl * 8 / ebits);
      }
      break;
    }
    case Precision::kF16F32: {
      // Four source rows -> pair-rows k/2, k/2+1 of four 32-column sub-blocks.
      const uint64_t sub_bytes = kc_pad / 2 * 2ull * vl;
      const uint64_t subs = panels * 2;
      for (uint64_t k = k_begin; k < k_end; k += 4) {
        for (unsigned j = 0; j < 4; ++j) load_row(k + j, 4 * j);
        for (unsigned c = 0; c < 4; ++c) {
          m.zip(16 + 4 * c, c, 4 + c, 16);
          m.zip(18 + 4 * c, 8 + c, 12 + c, 16);
        }
        for (unsigned c = 0; c < 4; ++c) {
          const uint64_t sb = span * 4 + c;
          if (sb >= subs) break;
          store4(ctx, bc + sb * sub_bytes + (k / 2) * 2ull * vl, 16 + 4 * c, 32, 4ull * vl / 4);
        }
      }
      break;
    }
    case Precision::kI8I32: {
      // Four source rows -> one quad-row of four 64-column panels.
      for (uint64_t k = k_begin; k < k_end; k += 4) {
        for (unsigned j = 0; j < 4; ++j) load_row(k + j, 4 * j);
        for (unsigned c = 0; c < 4; ++c) {
          const uint64_t q = span * 4 + c;
          if (q >= panels) break;
          m.zip(16, c, 4 + c, 8);
          m.zip(18, 8 + c, 12 + c, 8);
          m.zip(20, 16, 18, 16);
          m.zip(22, 17, 19, 16);
          store4(ctx, bc + b_panel_offset(p, nr, kc_pad, q) + (k / 4) * 4ull * vl, 20, 32,
                 4ull * vl / 4);
        }
      }
      break;
    }
  }
}

void pack_b(const UnitContext& ctx, Precision p, const SourceBlock& b, uint64_t kc_pad,
            uint64_t nc_pad, uint64_t bc, PackMode mode) {
  const uint32_t svl = ctx.m().vl() * 8;
  const uint64_t spans = ceil_div(nc_pad, b_span_cols(p, svl));
  if (mode == PackMode::kOnline) {
    for (uint64_t s = 0; s < spans; ++s) pack_b_span(ctx, p, b, kc_pad, nc_pad, bc, s);
    return;
  }
  // Upfront: one k_unit strip of rows at a time across every span.
  const uint64_t unit = k_unit(p);
  for (uint64_t k0 = 0; k0 < kc_pad; k0 += unit)
    for (uint64_t s = 0; s < spans; ++s) pack_b_span(ctx, p, b, kc_pad, nc_pad, bc, s, k0, k0 + unit);
}

void pack_b_f16_zip(const UnitContext& ctx, const SourceBlock& b, uint64_t kc_pad, uint64_t nc_pad,
                    uint64_t bc) {
  pack_b(ctx, Precision::kF16F32, b, kc_pad, nc_pad, bc);
}
void pack_b_i8(const UnitContext& ctx, const SourceBlock& b, uint64_t kc_pad, uint64_t nc_pad,
               uint64_t bc) {
  pack_b(ctx, Precision::kI8I32, b, kc_pad, nc_pad, bc);
}

void dump_packed(std::ostream& os, const MemoryImage& image, uint64_t addr,
                 const PackedPanelLayout& layout, Precision p) {
  image.check(addr, layout.bytes);
  os << "smegemm-packed " << (layout.column_major ? 'a' : 'b') << " dtype=" << to_string(p)
     << " panels=" << layout.panels << " panel_rows=" << layout.panel_rows
     << " panel_cols=" << layout.panel_cols << " interleave=" << layout.interleave
     << " bytes=" << layout.bytes << '\n';
  os.write(reinterpret_cast<const char*>(image.ptr(addr)), static_cast<std::streamsize>(layout.bytes));
}

}  // namespace smegemm
