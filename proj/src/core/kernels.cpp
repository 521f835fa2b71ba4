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

#include "kernels.hpp"

#include <algorithm>
#include <array>

namespace smegemm {

namespace {

constexpr unsigned kPRows = 2;
constexpr unsigned kPCols = 3;  // kPCols + t for tile t
constexpr unsigned kZOut = 20;  // epilogue scratch: z20-z23 result, z24-z27 C
constexpr unsigned kZC = 24;

struct Shape {
  uint32_t ebits;  // accumulator / output element width
  uint32_t side;   // elements per ZA tile slice
  uint32_t group;  // K values per lane
  AluType alu;
};

Shape shape_of(Precision p, uint32_t vl) {
  const uint32_t ebits = p == Precision::kF64 ? 64 : 32;
  const AluType alu = p == Precision::kF64   ? AluType::kF64
                      : p == Precision::kI8I32 ? AluType::kI32
                                               : AluType::kF32;
  return {ebits, vl * 8 / ebits, interleave_factor(p), alu};
}

std::array<TileView, 4> tiles(uint32_t ebits) {
  return {TileView{ebits, 0}, TileView{ebits, 1}, TileView{ebits, 2}, TileView{ebits, 3}};
}

// C row i of the tile lives in ZA as: main -> slice i of tiles 0..3 (one
// register per tile), edge -> slice i%side of tile i/side.
struct CRowMap {
  bool edge;
  uint32_t side;
  unsigned regs() const { return edge ? 1 : 4; }
  TileView tile(uint32_t ebits, uint32_t i, unsigned r) const {
    return TileView{ebits, edge ? i / side : r};
  }
  uint32_t slice(uint32_t i) const { return edge ? i % side : i; }
};

void load_c_row(const UnitContext& ctx, const MicroTask& t, const Shape& sh, const CRowMap& map,
                uint32_t i, unsigned first) {
  const uint64_t addr = t.c_addr + uint64_t{i} * t.ldc * (sh.ebits / 8);
  if (map.edge)
    load1(ctx, addr, first, sh.ebits, t.cols);
  else
    load4(ctx, addr, first, sh.ebits, t.cols);
}

void store_c_row(const UnitContext& ctx, const MicroTask& t, const Shape& sh, const CRowMap& map,
                 uint32_t i, unsigned first) {
  const uint64_t addr = t.c_addr + uint64_t{i} * t.ldc * (sh.ebits / 8);
  if (map.edge)
    store1(ctx, addr, first, sh.ebits, t.cols);
  else
    store4(ctx, addr, first, sh.ebits, t.cols);
}

unsigned live_regs(const MicroTask& t, const Shape& sh, const CRowMap& map) {
  return map.edge ? 1 : static_cast<unsigned>((t.cols + sh.side - 1) / sh.side);
}

void prologue(const UnitContext& ctx, const MicroTask& t, const Shape& sh, const CRowMap& map) {
  Machine& m = ctx.m();
  const auto ts = tiles(sh.ebits);
  if (t.alpha != 1.0 || t.beta == 0.0) {
    m.zero_za(ts);
    return;
  }
  // alpha == 1: start from beta*C so the epilogue is a plain store.
  if (t.rows < (map.edge ? 4 * sh.side : sh.side)) m.zero_za(ts);
  const unsigned live = live_regs(t, sh, map);
  for (uint32_t i = 0; i < t.rows; ++i) {
    load_c_row(ctx, t, sh, map, i, kZC);
    if (t.beta != 1.0)
      for (unsigned r = 0; r < live; ++r) m.mul_scalar(kZC + r, kZC + r, t.beta, sh.alu);
    for (unsigned r = 0; r < map.regs(); ++r)
      m.mova_to_tile(map.tile(sh.ebits, i, r), map.slice(i), Orientation::kHorizontal, kZC + r);
  }
}

void epilogue(const UnitContext& ctx, const MicroTask& t, const Shape& sh, const CRowMap& map) {
  Machine& m = ctx.m();
  const unsigned live = live_regs(t, sh, map);
  for (uint32_t i = 0; i < t.rows; ++i) {
    for (unsigned r = 0; r < map.regs(); ++r)
      m.mova_to_regs(map.tile(sh.ebits, i, r), map.slice(i), Orientation::kHorizontal, kZOut + r);
    if (t.alpha != 1.0) {
      for (unsigned r = 0; r < live; ++r) m.mul_scalar(kZOut + r, kZOut + r, t.alpha, sh.alu);
      if (t.beta != 0.0) {
        load_c_row(ctx, t, sh, map, i, kZC);
        for (unsigned r = 0; r < live; ++r) {
          m.mul_scalar(kZC + r, kZC + r, t.beta, sh.alu);
          m.add(kZOut + r, kZOut + r, kZC + r, sh.alu);
        }
      }
    }
    store_c_row(ctx, t, sh, map, i, kZOut);
  }
}

void check_task(const MicroTask& t, const Shape& sh, uint32_t max_rows, uint32_t max_cols) {
  if (t.rows == 0 || t.cols == 0 || t.rows > max_rows || t.cols > max_cols)
    throw UsageError("micro-kernel tile " + std::to_string(t.rows) + "x" + std::to_string(t.cols) +
                     " outside " + std::to_string(max_rows) + "x" + std::to_string(max_cols));
  if (t.kc_pad == 0 || t.kc_pad % (16 * sh.group)) throw UsageError("micro-kernel: kc not padded");
}

void outer(Machine& m, Precision p, TileView tile, unsigned zn, unsigned zm,
           std::optional<unsigned> pn, std::optional<unsigned> pm) {
  switch (p) {
    case Precision::kF32: m.fmopa(tile, zn, zm, FmopaKind::kF32, pn, pm); break;
    case Precision::kF64: m.fmopa(tile, zn, zm, FmopaKind::kF64, pn, pm); break;
    case Precision::kF16F32: m.fmopa(tile, zn, zm, FmopaKind::kF16Widen, pn, pm); break;
    case Precision::kI8I32: m.smopa(tile, zn, zm, SmopaKind::kI8Widen, pn, pm); break;
  }
}

// Shared body of the f32/f64/i8 main kernel: four k-groups per step, one
// four-register A load and four four-register B row loads.
void main_body(const UnitContext& ctx, const MicroTask& t) {
  Machine& m = ctx.m();
  const Shape sh = shape_of(t.precision, m.vl());
  check_task(t, sh, sh.side, 4 * sh.side);
  const CRowMap map{false, sh.side};
  const uint64_t full = 4ull * sh.side;

  m.begin_kernel(KernelKind::kMain);
  prologue(ctx, t, sh, map);

  std::optional<unsigned> prow, pcol[4];
  if (t.rows < sh.side) {
    m.whilelt(kPRows, 0, t.rows, sh.ebits);
    prow = kPRows;
  }
  if (t.cols < full)
    for (unsigned r = 0; r < 4; ++r) {
      m.whilelt(kPCols + r, uint64_t{r} * sh.side, t.cols, sh.ebits);
      pcol[r] = kPCols + r;
    }

  const auto ts = tiles(sh.ebits);
  const uint64_t kgroups = t.kc_pad / sh.group;
  for (uint64_t c = 0; c < kgroups; c += 4) {
    load4(ctx, t.a_panel + c * m.vl(), 0, sh.ebits, full);
    for (unsigned r = 0; r < 4; ++r) {
      const uint64_t row = c + r;
      if (row < t.b_rows_valid)
        load4(ctx, t.b_panel + row * t.b_row_stride, 4 + 4 * r, sh.ebits, t.b_cols_valid);
      else
        for (unsigned q = 0; q < 4; ++q) m.dup_zero(4 + 4 * r + q);
    }
    for (unsigned r = 0; r < 4; ++r)
      for (unsigned k = 0; k < 4; ++k) outer(m, t.precision, ts[k], r, 4 + 4 * r + k, prow, pcol[k]);
  }

  epilogue(ctx, t, sh, map);
  m.end_kernel();
}

}  // namespace

uint32_t main_mr(Precision p, uint32_t svl_bits) { return svl_bits / (p == Precision::kF64 ? 64 : 32); }
uint32_t main_nr(Precision p, uint32_t svl_bits) { return 4 * main_mr(p, svl_bits); }

void kernel_f32_main(const UnitContext& ctx, const MicroTask& t) {
  if (t.precision != Precision::kF32 && t.precision != Precision::kF64)
    throw UsageError("kernel_f32_main: wrong precision");
  main_body(ctx, t);
}

void kernel_i8_main(const UnitContext& ctx, const MicroTask& t) {
  if (t.precision != Precision::kI8I32) throw UsageError("kernel_i8_main: wrong precision");
  main_body(ctx, t);
}

void kernel_f16_main(const UnitContext& ctx, const MicroTask& t) {
  if (t.precision != Precision::kF16F32) throw UsageError("kernel_f16_main: wrong precision");
  Machine& m = ctx.m();
  const uint32_t vl = m.vl();
  const Shape sh = shape_of(t.precision, vl);
  check_task(t, sh, sh.side, 4 * sh.side);
  const CRowMap map{false, sh.side};
  const uint64_t full = 4ull * sh.side;

  m.begin_kernel(KernelKind::kMain);
  prologue(ctx, t, sh, map);

  std::optional<unsigned> prow, pcol[4];
  if (t.rows < sh.side) {
    m.whilelt(kPRows, 0, t.rows, sh.ebits);
    prow = kPRows;
  }
  if (t.cols < full)
    for (unsigned r = 0; r < 4; ++r) {
      m.whilelt(kPCols + r, uint64_t{r} * sh.side, t.cols, sh.ebits);
      pcol[r] = kPCols + r;
    }

  // Panel = two 32-column sub-blocks; a pair-row of a sub-block is two vectors.
  const uint64_t row_bytes = 2ull * vl;
  const uint64_t s0 = t.b_panel;
  const uint64_t s1 = t.b_panel + t.kc_pad / 2 * row_bytes;
  const auto ts = tiles(sh.ebits);
  const uint64_t pairs = t.kc_pad / 2;
  for (uint64_t c = 0; c < pairs; c += 4) {
    load4(ctx, t.a_panel + c * vl, 0, 32, full);
    load4(ctx, s0 + c * row_bytes, 4, 32, full);
    load4(ctx, s1 + c * row_bytes, 8, 32, full);
    load4(ctx, s0 + (c + 2) * row_bytes, 12, 32, full);
    load4(ctx, s1 + (c + 2) * row_bytes, 16, 32, full);
    // A group r pairs with its B row: sub-block 0 feeds ZA0/ZA1, sub-block 1 ZA2/ZA3.
    for (unsigned r = 0; r < 4; ++r) {
      const unsigned lo = (r < 2 ? 4 : 12) + 2 * (r % 2);
      const unsigned hi = lo + 4;
      outer(m, t.precision, ts[0], r, lo, prow, pcol[0]);
      outer(m, t.precision, ts[1], r, lo + 1, prow, pcol[1]);
      outer(m, t.precision, ts[2], r, hi, prow, pcol[2]);
      outer(m, t.precision, ts[3], r, hi + 1, prow, pcol[3]);
    }
  }

  epilogue(ctx, t, sh, map);
  m.end_kernel();
}

void kernel_f32_edge(const UnitContext& ctx, const MicroTask& t) {
  if (t.precision != Precision::kF32 && t.precision != Precision::kF64)
    throw UsageError("kernel_f32_edge: wrong precision");
  Machine& m = ctx.m();
  const uint32_t vl = m.vl();
  const Shape sh = shape_of(t.precision, vl);
  check_task(t, sh, 4 * sh.side, sh.side);
  if (t.rows != 4 * sh.side) throw UsageError("kernel_f32_edge: needs four full A panels");
  const CRowMap map{true, sh.side};

  m.begin_kernel(KernelKind::kEdge);
  prologue(ctx, t, sh, map);

  std::optional<unsigned> pcol;
  if (t.cols < sh.side) {
    m.whilelt(kPCols, 0, t.cols, sh.ebits);
    pcol = kPCols;
  }
  const auto ts = tiles(sh.ebits);
  const uint64_t full = 4ull * sh.side;
  for (uint64_t c = 0; c < t.kc_pad; c += 4) {
    for (unsigned p = 0; p < 4; ++p)
      load4(ctx, t.a_panel + p * t.a_panel_stride + c * vl, 4 * p, sh.ebits, full);
    for (unsigned r = 0; r < 4; ++r) {
      const uint64_t row = c + r;
      if (row < t.b_rows_valid)
        load1(ctx, t.b_panel + row * t.b_row_stride, 16 + r, sh.ebits, t.cols);
      else
        m.dup_zero(16 + r);
    }
    for (unsigned r = 0; r < 4; ++r)
      for (unsigned p = 0; p < 4; ++p) outer(m, t.precision, ts[p], 4 * p + r, 16 + r, std::nullopt, pcol);
  }

  epilogue(ctx, t, sh, map);
  m.end_kernel();
}

void kernel_main(const UnitContext& ctx, const MicroTask& t) {
  switch (t.precision) {
    case Precision::kF32:
    case Precision::kF64: kernel_f32_main(ctx, t); break;
    case Precision::kF16F32: kernel_f16_main(ctx, t); break;
    case Precision::kI8I32: kernel_i8_main(ctx, t); break;
  }
}

}  // namespace smegemm
