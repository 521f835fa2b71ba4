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

#include "vsme.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <sstream>

#include "fp16.hpp"

namespace smegemm {

namespace {

char width_suffix(uint32_t eb) {
  switch (eb) {
    case 1: return 'b';
    case 2: return 'h';
    case 4: return 's';
    case 8: return 'd';
    default: return 'q';
  }
}

unsigned width_class(uint32_t eb) { return static_cast<unsigned>(std::countr_zero(eb)); }

bool valid_width(uint32_t bits) {
  return bits == 8 || bits == 16 || bits == 32 || bits == 64 || bits == 128;
}

void check_group(unsigned group) {
  if (group != 1 && group != 2 && group != 4)
    throw UsageError("register group must be 1, 2 or 4, got " + std::to_string(group));
}

float bf16_to_float(uint16_t v) { return std::bit_cast<float>(uint32_t{v} << 16); }

template <typename T>
void load_vec(T* dst, std::span<const uint8_t> src, unsigned n) {
  std::memcpy(dst, src.data(), n * sizeof(T));
}

std::ostream& reg_list(std::ostream& os, unsigned first, unsigned count, uint32_t eb) {
  const char s = width_suffix(eb);
  if (count == 1) return os << "{z" << first << '.' << s << '}';
  return os << "{z" << first << '.' << s << "-z" << first + count - 1 << '.' << s << '}';
}

std::ostream& pred_text(std::ostream& os, std::optional<unsigned> p, const char* qual) {
  if (!p) return os;
  return os << ", " << (*p >= 8 ? "pn" : "p") << *p << qual;
}

}  // namespace

void MachineConfig::validate() const {
  if (svl_bits < 128 || svl_bits > 2048 || !std::has_single_bit(svl_bits))
    throw UsageError("svl_bits must be a power of two in [128, 2048], got " +
                     std::to_string(svl_bits));
}

InstrStats& InstrStats::operator+=(const InstrStats& o) {
  for (size_t i = 0; i < loads_by_group.size(); ++i) {
    loads_by_group[i] += o.loads_by_group[i];
    stores_by_group[i] += o.stores_by_group[i];
  }
  fmopa_f32 += o.fmopa_f32;
  fmopa_f64 += o.fmopa_f64;
  fmopa_f16 += o.fmopa_f16;
  fmopa_bf16 += o.fmopa_bf16;
  smopa_i8 += o.smopa_i8;
  smopa_i16 += o.smopa_i16;
  slice_moves += o.slice_moves;
  zips += o.zips;
  zero_za += o.zero_za;
  vector_alu += o.vector_alu;
  bytes_loaded += o.bytes_loaded;
  bytes_stored += o.bytes_stored;
  flops += o.flops;
  int_ops += o.int_ops;
  main_kernel_calls += o.main_kernel_calls;
  edge_kernel_calls += o.edge_kernel_calls;
  for (size_t i = 0; i < main_tiles_touched.size(); ++i) {
    main_tiles_touched[i] += o.main_tiles_touched[i];
    edge_tiles_touched[i] += o.edge_tiles_touched[i];
  }
  return *this;
}

Machine::Machine(MachineConfig cfg) : cfg_(cfg) {
  cfg_.validate();
  vl_ = cfg_.vl_bytes();
  zregs_.assign(size_t{kNumZ} * vl_, 0);
  for (auto& p : preds_) p.mask.assign(vl_, 0);
  za_.assign(size_t{vl_} * vl_, 0);
}

std::span<uint8_t> Machine::z(unsigned reg) {
  check_z(reg, 1);
  return {zregs_.data() + size_t{reg} * vl_, vl_};
}

std::span<const uint8_t> Machine::z(unsigned reg) const {
  check_z(reg, 1);
  return {zregs_.data() + size_t{reg} * vl_, vl_};
}

const PredicateReg& Machine::p(unsigned reg) const {
  if (reg >= kNumP) throw UsageError("predicate register out of range");
  return preds_[reg];
}

void Machine::check_z(unsigned first, unsigned count) const {
  if (first >= kNumZ || count > kNumZ - first)
    throw UsageError("Z register range z" + std::to_string(first) + "+" +
                     std::to_string(count) + " exceeds z31");
}

void Machine::check_tile(TileView t) const {
  if (!valid_width(t.width_bits))
    throw UsageError("unsupported tile element width " + std::to_string(t.width_bits));
  if (t.index >= TileView::count(t.width_bits))
    throw UsageError("tile index " + std::to_string(t.index) + " out of range for width " +
                     std::to_string(t.width_bits));
}

size_t Machine::za_offset(TileView t, unsigned row, unsigned col) const {
  const uint32_t eb = t.elem_bytes();
  return (size_t{row} * eb + t.index) * vl_ + size_t{col} * eb;
}

void Machine::touch_tile(TileView t) {
  if (in_kernel_) touched_[width_class(t.elem_bytes())] |= static_cast<uint16_t>(1u << t.index);
}

const PredicateReg* Machine::pred_ptr(std::optional<unsigned> idx) const {
  if (!idx) return nullptr;
  return &p(*idx);
}

bool Machine::active(const PredicateReg* p, uint32_t eb, unsigned reg_in_group,
                     unsigned lane) const {
  if (p == nullptr) return true;
  if (p->count) return reg_in_group * (vl_ / eb) + lane < *p->count;
  return p->mask[size_t{lane} * eb] != 0;
}

const PredicateReg& Machine::whilelt(unsigned pd, uint64_t start, uint64_t end,
                                     uint32_t elem_bits) {
  if (pd >= kNumP) throw UsageError("predicate register out of range");
  if (!valid_width(elem_bits) || elem_bits > 64) throw UsageError("bad predicate element width");
  PredicateReg& p = preds_[pd];
  const uint32_t eb = elem_bits / 8;
  std::fill(p.mask.begin(), p.mask.end(), 0);
  p.count.reset();
  for (uint32_t k = 0; k < lanes(elem_bits); ++k)
    if (start + k < end) p.mask[size_t{k} * eb] = 1;
  if (trace_)
    *trace_ << "whilelt p" << pd << '.' << width_suffix(eb) << ", " << start << ", " << end << '\n';
  return p;
}

const PredicateReg& Machine::whilelt_pn(unsigned pn, uint64_t start, uint64_t end,
                                        uint32_t elem_bits, uint32_t group) {
  if (pn < 8 || pn >= kNumP) throw UsageError("predicate-as-counter must be pn8-pn15");
  check_group(group);
  if (!valid_width(elem_bits) || elem_bits > 64) throw UsageError("bad predicate element width");
  PredicateReg& p = preds_[pn];
  std::fill(p.mask.begin(), p.mask.end(), 0);
  const uint64_t n = end > start ? end - start : 0;
  p.count = static_cast<uint32_t>(std::min<uint64_t>(n, uint64_t{group} * lanes(elem_bits)));
  if (trace_)
    *trace_ << "whilelt pn" << pn << '.' << width_suffix(elem_bits / 8) << ", " << start << ", "
            << end << ", vlx" << group << '\n';
  return p;
}

const PredicateReg& Machine::ptrue(unsigned pd, uint32_t elem_bits) {
  return whilelt(pd, 0, lanes(elem_bits), elem_bits);
}

void Machine::ld_multi(MemPort mem, uint64_t addr, unsigned group, unsigned first_reg,
                       uint32_t elem_bits, std::optional<unsigned> pred) {
  check_group(group);
  check_z(first_reg, group);
  if (!valid_width(elem_bits) || elem_bits > 64) throw UsageError("bad load element width");
  const PredicateReg* p = pred_ptr(pred);
  if (p && !p->count && group > 1)
    throw UsageError("multi-register loads take a predicate-as-counter (pn8-pn15)");
  const uint32_t eb = elem_bits / 8;
  const uint32_t nl = vl_ / eb;
  uint8_t* dst = zregs_.data() + size_t{first_reg} * vl_;
  const size_t total = size_t{group} * vl_;
  uint64_t loaded = 0;
  if (p == nullptr || p->count) {
    const uint64_t n = p ? std::min<uint64_t>(*p->count, uint64_t{group} * nl) : uint64_t{group} * nl;
    const uint64_t bytes = n * eb;
    if (bytes) {
      mem.image->check(addr, bytes);
      std::memcpy(dst, mem.image->ptr(addr), bytes);
      mem.cache->access(addr, bytes, AccessKind::kRead);
    }
    std::memset(dst + bytes, 0, total - bytes);
    loaded = bytes;
  } else {
    // Masked single-register load: contiguous active runs.
    uint32_t k = 0;
    while (k < nl) {
      if (!active(p, eb, 0, k)) {
        std::memset(dst + size_t{k} * eb, 0, eb);
        ++k;
        continue;
      }
      uint32_t e = k;
      while (e < nl && active(p, eb, 0, e)) ++e;
      const uint64_t off = uint64_t{k} * eb;
      const uint64_t bytes = uint64_t{e - k} * eb;
      mem.image->check(addr + off, bytes);
      std::memcpy(dst + off, mem.image->ptr(addr + off), bytes);
      mem.cache->access(addr + off, bytes, AccessKind::kRead);
      loaded += bytes;
      k = e;
    }
  }
  ++stats_.loads_by_group[group];
  stats_.bytes_loaded += loaded;
  if (trace_) {
    *trace_ << "ld1" << width_suffix(eb) << ' ';
    reg_list(*trace_, first_reg, group, eb);
    pred_text(*trace_, pred, "/z") << ", [0x" << std::hex << addr << std::dec << "]\n";
  }
}

void Machine::st_multi(MemPort mem, uint64_t addr, unsigned group, unsigned first_reg,
                       uint32_t elem_bits, std::optional<unsigned> pred) {
  check_group(group);
  check_z(first_reg, group);
  if (!valid_width(elem_bits) || elem_bits > 64) throw UsageError("bad store element width");
  const PredicateReg* p = pred_ptr(pred);
  if (p && !p->count && group > 1)
    throw UsageError("multi-register stores take a predicate-as-counter (pn8-pn15)");
  const uint32_t eb = elem_bits / 8;
  const uint32_t nl = vl_ / eb;
  const uint8_t* src = zregs_.data() + size_t{first_reg} * vl_;
  uint64_t stored = 0;
  if (p == nullptr || p->count) {
    const uint64_t n = p ? std::min<uint64_t>(*p->count, uint64_t{group} * nl) : uint64_t{group} * nl;
    const uint64_t bytes = n * eb;
    if (bytes) {
      mem.image->check(addr, bytes);
      std::memcpy(mem.image->ptr(addr), src, bytes);
      mem.cache->access(addr, bytes, AccessKind::kWrite);
    }
    stored = bytes;
  } else {
    uint32_t k = 0;
    while (k < nl) {
      if (!active(p, eb, 0, k)) {
        ++k;
        continue;
      }
      uint32_t e = k;
      while (e < nl && active(p, eb, 0, e)) ++e;
      const uint64_t off = uint64_t{k} * eb;
      const uint64_t bytes = uint64_t{e - k} * eb;
      mem.image->check(addr + off, bytes);
      std::memcpy(mem.image->ptr(addr + off), src + off, bytes);
      mem.cache->access(addr + off, bytes, AccessKind::kWrite);
      stored += bytes;
      k = e;
    }
  }
  ++stats_.stores_by_group[group];
  stats_.bytes_stored += stored;
  if (trace_) {
    *trace_ << "st1" << width_suffix(eb) << ' ';
    reg_list(*trace_, first_reg, group, eb);
    pred_text(*trace_, pred, "") << ", [0x" << std::hex << addr << std::dec << "]\n";
  }
}

namespace {

// Row/column activity at accumulator granularity.
struct OuterMasks {
  std::array<uint8_t, 256> row{};
  std::array<uint8_t, 256> col{};
  bool all = true;
};

}  // namespace

void Machine::fmopa(TileView tile, unsigned zn, unsigned zm, FmopaKind kind,
                    std::optional<unsigned> pn, std::optional<unsigned> pm) {
  check_tile(tile);
  check_z(zn, 1);
  check_z(zm, 1);
  const uint32_t want = kind == FmopaKind::kF64 ? 64 : 32;
  if (tile.width_bits != want)
    throw UsageError("fmopa accumulator width " + std::to_string(want) +
                     " does not match tile width " + std::to_string(tile.width_bits));
  const uint32_t eb = tile.elem_bytes();
  const uint32_t side = vl_ / eb;
  const PredicateReg* prow = pred_ptr(pn);
  const PredicateReg* pcol = pred_ptr(pm);
  OuterMasks m;
  m.all = prow == nullptr && pcol == nullptr;
  for (uint32_t i = 0; i < side; ++i) {
    m.row[i] = active(prow, eb, 0, i);
    m.col[i] = active(pcol, eb, 0, i);
  }
  const uint8_t* a = zregs_.data() + size_t{zn} * vl_;
  const uint8_t* b = zregs_.data() + size_t{zm} * vl_;

  auto accumulate = [&](auto zero, auto&& product) {
    using T = decltype(zero);
    T row[64];
    for (uint32_t i = 0; i < side; ++i) {
      if (!m.row[i]) continue;
      uint8_t* dst = za_.data() + (size_t{i} * eb + tile.index) * vl_;
      std::memcpy(row, dst, vl_);
      for (uint32_t j = 0; j < side; ++j) {
        if (m.all || m.col[j]) {
          const T p = product(i, j);
          row[j] = row[j] + p;
        }
      }
      std::memcpy(dst, row, vl_);
    }
  };

  switch (kind) {
    case FmopaKind::kF32: {
      float av[64], bv[64];
      std::memcpy(av, a, vl_);
      std::memcpy(bv, b, vl_);
      accumulate(0.0f, [&](uint32_t i, uint32_t j) { return av[i] * bv[j]; });
      ++stats_.fmopa_f32;
      stats_.flops += 2ull * side * side;
      break;
    }
    case FmopaKind::kF64: {
      double av[32], bv[32];
      std::memcpy(av, a, vl_);
      std::memcpy(bv, b, vl_);
      accumulate(0.0, [&](uint32_t i, uint32_t j) { return av[i] * bv[j]; });
      ++stats_.fmopa_f64;
      stats_.flops += 2ull * side * side;
      break;
    }
    case FmopaKind::kF16Widen:
    case FmopaKind::kBF16Widen: {
      // Products of two 11-bit (or 8-bit) significands are exact in binary32;
      // the pair is summed first, then added to ZA, each rounded once.
      const bool bf = kind == FmopaKind::kBF16Widen;
      float a0[64], a1[64], b0[64], b1[64];
      for (uint32_t i = 0; i < side; ++i) {
        uint16_t h[4];
        std::memcpy(&h[0], a + 4 * i, 2);
        std::memcpy(&h[1], a + 4 * i + 2, 2);
        std::memcpy(&h[2], b + 4 * i, 2);
        std::memcpy(&h[3], b + 4 * i + 2, 2);
        a0[i] = bf ? bf16_to_float(h[0]) : half_to_float(h[0]);
        a1[i] = bf ? bf16_to_float(h[1]) : half_to_float(h[1]);
        b0[i] = bf ? bf16_to_float(h[2]) : half_to_float(h[2]);
        b1[i] = bf ? bf16_to_float(h[3]) : half_to_float(h[3]);
      }
      accumulate(0.0f, [&](uint32_t i, uint32_t j) {
        const float p0 = a0[i] * b0[j];
        const float p1 = a1[i] * b1[j];
        return p0 + p1;
      });
      ++(bf ? stats_.fmopa_bf16 : stats_.fmopa_f16);
      stats_.flops += 4ull * side * side;
      break;
    }
  }
  touch_tile(tile);
  if (trace_) {
    *trace_ << "fmopa za" << tile.index << '.' << width_suffix(eb);
    pred_text(*trace_, pn, "/m");
    pred_text(*trace_, pm, "/m");
    const char s = kind == FmopaKind::kF32 ? 's' : kind == FmopaKind::kF64 ? 'd' : 'h';
    *trace_ << ", z" << zn << '.' << s << ", z" << zm << '.' << s << '\n';
  }
}

void Machine::smopa(TileView tile, unsigned zn, unsigned zm, SmopaKind kind,
                    std::optional<unsigned> pn, std::optional<unsigned> pm) {
  check_tile(tile);
  check_z(zn, 1);
  check_z(zm, 1);
  const uint32_t want = kind == SmopaKind::kI16Widen64 ? 64 : 32;
  if (tile.width_bits != want)
    throw UsageError("smopa accumulator width " + std::to_string(want) +
                     " does not match tile width " + std::to_string(tile.width_bits));
  const uint32_t eb = tile.elem_bytes();
  const uint32_t side = vl_ / eb;
  const uint32_t src_bytes = kind == SmopaKind::kI8Widen ? 1 : 2;
  const uint32_t depth = eb / src_bytes;  // source lanes folded per accumulator
  const PredicateReg* prow = pred_ptr(pn);
  const PredicateReg* pcol = pred_ptr(pm);
  const uint8_t* a = zregs_.data() + size_t{zn} * vl_;
  const uint8_t* b = zregs_.data() + size_t{zm} * vl_;

  auto src = [&](const uint8_t* v, uint32_t idx) -> int64_t {
    if (src_bytes == 1) return static_cast<int8_t>(v[idx]);
    int16_t x;
    std::memcpy(&x, v + 2 * idx, 2);
    return x;
  };

  for (uint32_t i = 0; i < side; ++i) {
    if (!active(prow, eb, 0, i)) continue;
    uint8_t* dst = za_.data() + (size_t{i} * eb + tile.index) * vl_;
    for (uint32_t j = 0; j < side; ++j) {
      if (!active(pcol, eb, 0, j)) continue;
      int64_t dot = 0;
      for (uint32_t t = 0; t < depth; ++t) dot += src(a, depth * i + t) * src(b, depth * j + t);
      if (eb == 4) {
        uint32_t acc;
        std::memcpy(&acc, dst + 4 * j, 4);
        acc += static_cast<uint32_t>(dot);  // two's-complement wrap
        std::memcpy(dst + 4 * j, &acc, 4);
      } else {
        uint64_t acc;
        std::memcpy(&acc, dst + 8 * j, 8);
        acc += static_cast<uint64_t>(dot);
        std::memcpy(dst + 8 * j, &acc, 8);
      }
    }
  }
  ++(kind == SmopaKind::kI8Widen ? stats_.smopa_i8 : stats_.smopa_i16);
  stats_.int_ops += 2ull * depth * side * side;
  touch_tile(tile);
  if (trace_) {
    *trace_ << "smopa za" << tile.index << '.' << width_suffix(eb);
    pred_text(*trace_, pn, "/m");
    pred_text(*trace_, pm, "/m");
    const char s = src_bytes == 1 ? 'b' : 'h';
    *trace_ << ", z" << zn << '.' << s << ", z" << zm << '.' << s << '\n';
  }
}

void Machine::mova_to_regs(TileView tile, unsigned slice, Orientation o, unsigned first_reg,
                           unsigned count, std::optional<unsigned> pred) {
  check_tile(tile);
  check_group(count);
  check_z(first_reg, count);
  const uint32_t eb = tile.elem_bytes();
  const uint32_t side = vl_ / eb;
  if (slice >= side || count > side - slice)
    throw UsageError("tile slice " + std::to_string(slice) + "+" + std::to_string(count) +
                     " out of range (side " + std::to_string(side) + ")");
  const PredicateReg* p = pred_ptr(pred);
  if (p && p->count) throw UsageError("tile moves take a lane-mask predicate");
  for (unsigned s = 0; s < count; ++s) {
    uint8_t* dst = zregs_.data() + size_t{first_reg + s} * vl_;
    for (uint32_t k = 0; k < side; ++k) {
      if (!active(p, eb, 0, k)) continue;
      const size_t off = o == Orientation::kHorizontal ? za_offset(tile, slice + s, k)
                                                       : za_offset(tile, k, slice + s);
      std::memcpy(dst + size_t{k} * eb, za_.data() + off, eb);
    }
  }
  stats_.slice_moves += count;
  touch_tile(tile);
  if (trace_) {
    *trace_ << "mova ";
    reg_list(*trace_, first_reg, count, eb);
    *trace_ << ", za" << tile.index << (o == Orientation::kHorizontal ? 'h' : 'v') << '.'
            << width_suffix(eb) << '[' << slice << ']';
    pred_text(*trace_, pred, "/m") << '\n';
  }
}

void Machine::mova_to_tile(TileView tile, unsigned slice, Orientation o, unsigned first_reg,
                           unsigned count, std::optional<unsigned> pred) {
  check_tile(tile);
  check_group(count);
  check_z(first_reg, count);
  const uint32_t eb = tile.elem_bytes();
  const uint32_t side = vl_ / eb;
  if (slice >= side || count > side - slice)
    throw UsageError("tile slice " + std::to_string(slice) + "+" + std::to_string(count) +
                     " out of range (side " + std::to_string(side) + ")");
  const PredicateReg* p = pred_ptr(pred);
  if (p && p->count) throw UsageError("tile moves take a lane-mask predicate");
  for (unsigned s = 0; s < count; ++s) {
    const uint8_t* src = zregs_.data() + size_t{first_reg + s} * vl_;
    for (uint32_t k = 0; k < side; ++k) {
      if (!active(p, eb, 0, k)) continue;
      const size_t off = o == Orientation::kHorizontal ? za_offset(tile, slice + s, k)
                                                       : za_offset(tile, k, slice + s);
      std::memcpy(za_.data() + off, src + size_t{k} * eb, eb);
    }
  }
  stats_.slice_moves += count;
  touch_tile(tile);
  if (trace_) {
    *trace_ << "mova za" << tile.index << (o == Orientation::kHorizontal ? 'h' : 'v') << '.'
            << width_suffix(eb) << '[' << slice << "], ";
    reg_list(*trace_, first_reg, count, eb);
    pred_text(*trace_, pred, "/m") << '\n';
  }
}

void Machine::zero_za(std::span<const TileView> tiles) {
  for (const TileView& t : tiles) {
    check_tile(t);
    const uint32_t eb = t.elem_bytes();
    for (uint32_t i = 0; i < vl_ / eb; ++i)
      std::memset(za_.data() + (size_t{i} * eb + t.index) * vl_, 0, vl_);
    touch_tile(t);
  }
  ++stats_.zero_za;
  if (trace_) {
    *trace_ << "zero {";
    for (size_t i = 0; i < tiles.size(); ++i)
      *trace_ << (i ? ", " : "") << "za" << tiles[i].index << '.' << width_suffix(tiles[i].elem_bytes());
    *trace_ << "}\n";
  }
}

void Machine::zero_za_all() {
  std::fill(za_.begin(), za_.end(), 0);
  ++stats_.zero_za;
  if (trace_) *trace_ << "zero {za}\n";
}

void Machine::zip(unsigned dst_lo, unsigned src_a, unsigned src_b, uint32_t elem_bits) {
  check_z(dst_lo, 2);
  check_z(src_a, 1);
  check_z(src_b, 1);
  if (!valid_width(elem_bits) || elem_bits > 64) throw UsageError("bad zip element width");
  const uint32_t eb = elem_bits / 8;
  const uint32_t n = vl_ / eb;
  std::vector<uint8_t> a(z(src_a).begin(), z(src_a).end());
  std::vector<uint8_t> b(z(src_b).begin(), z(src_b).end());
  uint8_t* lo = zregs_.data() + size_t{dst_lo} * vl_;
  uint8_t* hi = lo + vl_;
  const uint32_t half = n / 2;
  for (uint32_t k = 0; k < half; ++k) {
    std::memcpy(lo + size_t{2 * k} * eb, a.data() + size_t{k} * eb, eb);
    std::memcpy(lo + size_t{2 * k + 1} * eb, b.data() + size_t{k} * eb, eb);
    std::memcpy(hi + size_t{2 * k} * eb, a.data() + size_t{half + k} * eb, eb);
    std::memcpy(hi + size_t{2 * k + 1} * eb, b.data() + size_t{half + k} * eb, eb);
  }
  ++stats_.zips;
  if (trace_) {
    *trace_ << "zip ";
    reg_list(*trace_, dst_lo, 2, eb) << ", z" << src_a << '.' << width_suffix(eb) << ", z"
                                     << src_b << '.' << width_suffix(eb) << '\n';
  }
}

void Machine::dup_zero(unsigned zd) {
  check_z(zd, 1);
  std::memset(zregs_.data() + size_t{zd} * vl_, 0, vl_);
  if (trace_) *trace_ << "dup z" << zd << ".b, #0\n";
}

void Machine::mul_scalar(unsigned zd, unsigned zn, double scalar, AluType t) {
  check_z(zd, 1);
  check_z(zn, 1);
  uint8_t* d = zregs_.data() + size_t{zd} * vl_;
  const uint8_t* s = zregs_.data() + size_t{zn} * vl_;
  switch (t) {
    case AluType::kF32: {
      const float f = static_cast<float>(scalar);
      for (uint32_t k = 0; k < vl_ / 4; ++k) {
        float v;
        std::memcpy(&v, s + 4 * k, 4);
        v = v * f;
        std::memcpy(d + 4 * k, &v, 4);
      }
      break;
    }
    case AluType::kF64:
      for (uint32_t k = 0; k < vl_ / 8; ++k) {
        double v;
        std::memcpy(&v, s + 8 * k, 8);
        v = v * scalar;
        std::memcpy(d + 8 * k, &v, 8);
      }
      break;
    case AluType::kI32: {
      const auto f = static_cast<uint32_t>(static_cast<int64_t>(scalar));
      for (uint32_t k = 0; k < vl_ / 4; ++k) {
        uint32_t v;
        std::memcpy(&v, s + 4 * k, 4);
        v = v * f;
        std::memcpy(d + 4 * k, &v, 4);
      }
      break;
    }
  }
  ++stats_.vector_alu;
  if (trace_) *trace_ << "fmul z" << zd << ", z" << zn << ", #" << scalar << '\n';
}

void Machine::add(unsigned zd, unsigned zn, unsigned zm, AluType t) {
  check_z(zd, 1);
  check_z(zn, 1);
  check_z(zm, 1);
  uint8_t* d = zregs_.data() + size_t{zd} * vl_;
  const uint8_t* x = zregs_.data() + size_t{zn} * vl_;
  const uint8_t* y = zregs_.data() + size_t{zm} * vl_;
  auto lanewise = [&](auto zero) {
    using T = decltype(zero);
    for (uint32_t k = 0; k < vl_ / sizeof(T); ++k) {
      T a, b;
      std::memcpy(&a, x + sizeof(T) * k, sizeof(T));
      std::memcpy(&b, y + sizeof(T) * k, sizeof(T));
      const T r = static_cast<T>(a + b);
      std::memcpy(d + sizeof(T) * k, &r, sizeof(T));
    }
  };
  switch (t) {
    case AluType::kF32: lanewise(0.0f); break;
    case AluType::kF64: lanewise(0.0); break;
    case AluType::kI32: lanewise(uint32_t{0}); break;
  }
  ++stats_.vector_alu;
  if (trace_) *trace_ << "add z" << zd << ", z" << zn << ", z" << zm << '\n';
}

void Machine::begin_kernel(KernelKind kind) {
  in_kernel_ = true;
  kernel_kind_ = kind;
  touched_ = {};
}

void Machine::end_kernel() {
  if (!in_kernel_) return;
  unsigned n = 0;
  for (uint16_t m : touched_) n += static_cast<unsigned>(std::popcount(m));
  if (kernel_kind_ == KernelKind::kMain) {
    ++stats_.main_kernel_calls;
    ++stats_.main_tiles_touched[std::min(n, 16u)];
  } else {
    ++stats_.edge_kernel_calls;
    ++stats_.edge_tiles_touched[std::min(n, 16u)];
  }
  in_kernel_ = false;
}

}  // namespace smegemm
