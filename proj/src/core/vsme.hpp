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

// Functional model of the SME register state and the instruction subset the
// GEMM kernels use. Each simulated SME unit owns one Machine.

#include <array>
#include <cstdint>
#include <cstring>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "common.hpp"
#include "memsim.hpp"

namespace smegemm {

struct MachineConfig {
  uint32_t svl_bits = 512;
  uint32_t unit_id = 0;

  void validate() const;
  uint32_t vl_bytes() const { return svl_bits / 8; }
};

enum class Orientation : uint8_t { kHorizontal, kVertical };

/// A ZA tile at some element width. ZA storage is (VL x VL) bytes; tile `t`
/// of an `eb`-byte width owns ZA array rows t, t+eb, t+2eb, ... so tiles of
/// the same width interleave row-wise.
struct TileView {
  uint32_t width_bits = 32;
  uint32_t index = 0;

  uint32_t elem_bytes() const { return width_bits / 8; }
  static uint32_t count(uint32_t width_bits) { return width_bits / 8; }
  static uint32_t side(uint32_t svl_bits, uint32_t width_bits) { return svl_bits / width_bits; }
};

/// One predicate register. Holds either a lane mask (one flag per byte
/// granule; an element is active when the flag of its lowest byte is set) or,
/// for PN8-PN15, an element count spanning a multi-register group.
struct PredicateReg {
  std::vector<uint8_t> mask;
  std::optional<uint32_t> count;
};

enum class FmopaKind : uint8_t { kF32, kF64, kF16Widen, kBF16Widen };
enum class SmopaKind : uint8_t { kI8Widen, kI16Widen32, kI16Widen64 };
enum class AluType : uint8_t { kF32, kF64, kI32 };
enum class KernelKind : uint8_t { kMain, kEdge };

/// Instruction-level event counters. Monotone within a run, merged by
/// addition across units.
struct InstrStats {
  std::array<uint64_t, 5> loads_by_group{};   // indexed by group size 1/2/4
  std::array<uint64_t, 5> stores_by_group{};
  uint64_t fmopa_f32 = 0;
  uint64_t fmopa_f64 = 0;
  uint64_t fmopa_f16 = 0;
  uint64_t fmopa_bf16 = 0;
  uint64_t smopa_i8 = 0;
  uint64_t smopa_i16 = 0;
  uint64_t slice_moves = 0;
  uint64_t zips = 0;
  uint64_t zero_za = 0;
  uint64_t vector_alu = 0;
  uint64_t bytes_loaded = 0;
  uint64_t bytes_stored = 0;
  uint64_t flops = 0;
  uint64_t int_ops = 0;
  uint64_t main_kernel_calls = 0;
  uint64_t edge_kernel_calls = 0;
  // Histogram of distinct ZA tiles touched per kernel invocation.
  std::array<uint64_t, 17> main_tiles_touched{};
  std::array<uint64_t, 17> edge_tiles_touched{};

  InstrStats& operator+=(const InstrStats& o);
  bool operator==(const InstrStats&) const = default;
  uint64_t total_loads() const { return loads_by_group[1] + loads_by_group[2] + loads_by_group[4]; }
};

class Machine {
 public:
  static constexpr unsigned kNumZ = 32;
  static constexpr unsigned kNumP = 16;

  explicit Machine(MachineConfig cfg = {});

  const MachineConfig& config() const { return cfg_; }
  uint32_t vl() const { return vl_; }
  /// Lanes per vector at an element width in bits.
  uint32_t lanes(uint32_t elem_bits) const { return cfg_.svl_bits / elem_bits; }

  // --- register access (test and host hooks; not counted) -----------------
  std::span<uint8_t> z(unsigned reg);
  std::span<const uint8_t> z(unsigned reg) const;
  template <typename T>
  T lane(unsigned reg, unsigned idx) const;
  template <typename T>
  void set_lane(unsigned reg, unsigned idx, T v);
  const PredicateReg& p(unsigned reg) const;
  std::span<uint8_t> za() { return za_; }
  std::span<const uint8_t> za() const { return za_; }
  template <typename T>
  T tile_elem(TileView t, unsigned row, unsigned col) const;
  template <typename T>
  void set_tile_elem(TileView t, unsigned row, unsigned col, T v);

  // --- predicates ----------------------------------------------------------
  /// Lane k active iff start + k < end, at the given element width.
  const PredicateReg& whilelt(unsigned pd, uint64_t start, uint64_t end, uint32_t elem_bits);
  /// Predicate-as-counter form for multi-register groups (PN8-PN15).
  const PredicateReg& whilelt_pn(unsigned pn, uint64_t start, uint64_t end, uint32_t elem_bits,
                                 uint32_t group);
  const PredicateReg& ptrue(unsigned pd, uint32_t elem_bits);

  // --- memory --------------------------------------------------------------
  /// LD1{B,H,W,D} of 1/2/4 consecutive Z registers. Inactive lanes are zeroed.
  void ld_multi(MemPort mem, uint64_t addr, unsigned group, unsigned first_reg,
                uint32_t elem_bits, std::optional<unsigned> pred = std::nullopt);
  /// ST1{B,H,W,D}; inactive lanes leave memory untouched.
  void st_multi(MemPort mem, uint64_t addr, unsigned group, unsigned first_reg,
                uint32_t elem_bits, std::optional<unsigned> pred = std::nullopt);

  // --- ZA ------------------------------------------------------------------
  void fmopa(TileView tile, unsigned zn, unsigned zm, FmopaKind kind,
             std::optional<unsigned> pn = std::nullopt, std::optional<unsigned> pm = std::nullopt);
  void smopa(TileView tile, unsigned zn, unsigned zm, SmopaKind kind,
             std::optional<unsigned> pn = std::nullopt, std::optional<unsigned> pm = std::nullopt);
  /// Moves `count` consecutive slices starting at `slice` into consecutive
  /// registers from `first_reg`. Merging predication.
  void mova_to_regs(TileView tile, unsigned slice, Orientation o, unsigned first_reg,
                    unsigned count = 1, std::optional<unsigned> pred = std::nullopt);
  void mova_to_tile(TileView tile, unsigned slice, Orientation o, unsigned first_reg,
                    unsigned count = 1, std::optional<unsigned> pred = std::nullopt);
  void zero_za(std::span<const TileView> tiles);
  void zero_za_all();

  // --- vector ops ----------------------------------------------------------
  /// ZIP: dst_lo = interleave of the low halves, dst_lo+1 = high halves.
  void zip(unsigned dst_lo, unsigned src_a, unsigned src_b, uint32_t elem_bits);
  void dup_zero(unsigned zd);
  /// zd = zn * scalar, element-wise (integer types wrap).
  void mul_scalar(unsigned zd, unsigned zn, double scalar, AluType t);
  /// zd = zn + zm, element-wise.
  void add(unsigned zd, unsigned zn, unsigned zm, AluType t);

  // --- accounting ----------------------------------------------------------
  void begin_kernel(KernelKind kind);
  void end_kernel();
  const InstrStats& stats() const { return stats_; }
  void reset_stats() { stats_ = {}; }

  /// Optional instruction trace, one line per instruction.
  void set_trace(std::ostream* os) { trace_ = os; }

 private:
  bool active(const PredicateReg* p, uint32_t eb, unsigned reg_in_group, unsigned lane) const;
  const PredicateReg* pred_ptr(std::optional<unsigned> idx) const;
  void check_z(unsigned first, unsigned count) const;
  void check_tile(TileView t) const;
  size_t za_offset(TileView t, unsigned row, unsigned col) const;
  void touch_tile(TileView t);

  MachineConfig cfg_;
  uint32_t vl_;
  std::vector<uint8_t> zregs_;
  std::array<PredicateReg, kNumP> preds_;
  std::vector<uint8_t> za_;
  InstrStats stats_;
  std::ostream* trace_ = nullptr;

  bool in_kernel_ = false;
  KernelKind kernel_kind_ = KernelKind::kMain;
  std::array<uint16_t, 5> touched_{};  // per width class, bitmask of tile indices
};

template <typename T>
T Machine::lane(unsigned reg, unsigned idx) const {
  T v;
  std::memcpy(&v, z(reg).data() + size_t{idx} * sizeof(T), sizeof(T));
  return v;
}

template <typename T>
void Machine::set_lane(unsigned reg, unsigned idx, T v) {
  std::memcpy(z(reg).data() + size_t{idx} * sizeof(T), &v, sizeof(T));
}

template <typename T>
T Machine::tile_elem(TileView t, unsigned row, unsigned col) const {
  T v;
  std::memcpy(&v, za_.data() + za_offset(t, row, col), sizeof(T));
  return v;
}

template <typename T>
void Machine::set_tile_elem(TileView t, unsigned row, unsigned col, T v) {
  std::memcpy(za_.data() + za_offset(t, row, col), &v, sizeof(T));
}

}  // namespace smegemm
