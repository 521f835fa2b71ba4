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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "fp16.hpp"
#include "isa_checks.hpp"
#include "vsme.hpp"

namespace smegemm {
namespace {

using testing::IsaCheck;

struct Mem {
  MemoryImage img;
  CacheSim cache;
  uint64_t base = img.alloc_region("buf", 4096);
  MemPort port() { return {&img, &cache}; }
};

TEST(TileView, TableOneLaw) {
  for (uint32_t svl : {128u, 256u, 512u, 1024u, 2048u})
    for (uint32_t w : {8u, 16u, 32u, 64u, 128u}) {
      const uint64_t side = TileView::side(svl, w);
      EXPECT_EQ(TileView::count(w) * side * side * (w / 8), uint64_t{svl / 8} * (svl / 8)) << svl << " " << w;
    }
  EXPECT_EQ(TileView::count(32), 4u);
  EXPECT_EQ(TileView::side(512, 32), 16u);
  EXPECT_EQ(TileView::count(64), 8u);
}

TEST(MachineConfig, RejectsOddVectorLengths) {
  EXPECT_THROW(Machine(MachineConfig{384, 0}), UsageError);
  EXPECT_THROW(Machine(MachineConfig{64, 0}), UsageError);
  EXPECT_NO_THROW(Machine(MachineConfig{256, 0}));
}

TEST(LdMulti, FourRegisterLoadFillsInOrder) {
  Mem mem;
  for (uint32_t i = 0; i < 64; ++i) mem.img.write<uint32_t>(mem.base + 4 * i, i);
  Machine m;
  m.ld_multi(mem.port(), mem.base, 4, 8, 32);
  for (uint32_t i = 0; i < 64; ++i) EXPECT_EQ(m.lane<uint32_t>(8 + i / 16, i % 16), i);
  EXPECT_EQ(m.stats().loads_by_group[4], 1u);
  EXPECT_EQ(m.stats().loads_by_group[1], 0u);
  // 256 bytes from a cold cache with 128-byte lines.
  EXPECT_EQ(mem.cache.stats().l2_misses, 2u);
}

TEST(LdMulti, PredicatedLoadZeroesInactiveLanes) {
  Mem mem;
  for (uint32_t i = 0; i < 16; ++i) mem.img.write<uint32_t>(mem.base + 4 * i, 7 + i);
  Machine m;
  for (auto& b : m.z(3)) b = 0xff;
  m.whilelt(1, 0, 3, 32);
  m.ld_multi(mem.port(), mem.base, 1, 3, 32, 1);
  EXPECT_EQ(m.lane<uint32_t>(3, 0), 7u);
  EXPECT_EQ(m.lane<uint32_t>(3, 1), 8u);
  EXPECT_EQ(m.lane<uint32_t>(3, 2), 9u);
  for (uint32_t i = 3; i < 16; ++i) EXPECT_EQ(m.lane<uint32_t>(3, i), 0u);
}

TEST(LdMulti, Errors) {
  Mem mem;
  Machine m;
  EXPECT_THROW(m.ld_multi(mem.port(), mem.base, 3, 0, 32), UsageError);
  EXPECT_THROW(m.ld_multi(mem.port(), mem.base, 4, 30, 32), UsageError);
  EXPECT_THROW(m.ld_multi(mem.port(), mem.base + 4096 - 32, 1, 0, 32), FaultError);
  EXPECT_THROW(m.st_multi(mem.port(), 0x100, 1, 0, 32), FaultError);
  // A fully inactive predicate touches no memory at all.
  m.whilelt(2, 5, 5, 32);
  EXPECT_NO_THROW(m.ld_multi(mem.port(), 0x100, 1, 0, 32, 2));
}

TEST(StMulti, RoundTripAndPredicatedStore) {
  Mem mem;
  Machine m;
  for (uint32_t r = 0; r < 4; ++r)
    for (uint32_t i = 0; i < 16; ++i) m.set_lane<uint32_t>(12 + r, i, 1000 * r + i);
  m.st_multi(mem.port(), mem.base, 4, 12, 32);
  EXPECT_EQ(m.stats().bytes_stored, 512u / 8 * 4);
  EXPECT_EQ(m.stats().stores_by_group[4], 1u);
  m.ld_multi(mem.port(), mem.base, 4, 0, 32);
  for (uint32_t r = 0; r < 4; ++r)
    EXPECT_TRUE(std::equal(m.z(r).begin(), m.z(r).end(), m.z(12 + r).begin()));

  const uint64_t dst = mem.base + 1024;
  m.whilelt(0, 0, 3, 32);
  m.st_multi(mem.port(), dst, 1, 15, 32, 0);
  for (uint32_t i = 0; i < 3; ++i) EXPECT_EQ(mem.img.read<uint32_t>(dst + 4 * i), 3000u + i);
  for (uint64_t a = dst + 12; a < dst + 64; ++a) EXPECT_EQ(mem.img.read<uint8_t>(a), 0u);
}

TEST(Fmopa, UnitOuterProduct) {
  Machine m;
  m.zero_za_all();
  m.dup_zero(0);
  m.dup_zero(1);
  m.set_lane<float>(0, 0, 1.0f);
  m.set_lane<float>(1, 0, 1.0f);
  m.fmopa({32, 2}, 0, 1, FmopaKind::kF32);
  for (uint32_t t = 0; t < 4; ++t)
    for (uint32_t i = 0; i < 16; ++i)
      for (uint32_t j = 0; j < 16; ++j)
        EXPECT_EQ(m.tile_elem<float>({32, t}, i, j), (t == 2 && i == 0 && j == 0) ? 1.0f : 0.0f);
  EXPECT_EQ(m.stats().flops, 512u);
  EXPECT_EQ(m.stats().fmopa_f32, 1u);
}

TEST(Fmopa, FlopsPerInstructionFollowsVectorLength) {
  for (uint32_t svl : {128u, 256u, 512u, 1024u, 2048u}) {
    Machine m(MachineConfig{svl, 0});
    m.fmopa({32, 0}, 0, 1, FmopaKind::kF32);
    EXPECT_EQ(m.stats().flops, 2ull * (svl / 32) * (svl / 32));
  }
}

TEST(Fmopa, WidthMismatchIsUsageError) {
  Machine m;
  EXPECT_THROW(m.fmopa({64, 0}, 0, 1, FmopaKind::kF32), UsageError);
  EXPECT_THROW(m.fmopa({32, 0}, 0, 1, FmopaKind::kF64), UsageError);
  EXPECT_THROW(m.fmopa({32, 4}, 0, 1, FmopaKind::kF32), UsageError);
  EXPECT_THROW(m.smopa({64, 0}, 0, 1, SmopaKind::kI8Widen), UsageError);
}

TEST(Fmopa, SequenceMatchesScalarSumInOrder) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<float> d(-1, 1);
  Machine m;
  m.zero_za_all();
  float ref[16][16] = {};
  for (int k = 0; k < 50; ++k) {
    for (uint32_t l = 0; l < 16; ++l) {
      m.set_lane<float>(0, l, d(rng));
      m.set_lane<float>(1, l, d(rng));
    }
    m.fmopa({32, 1}, 0, 1, FmopaKind::kF32);
    for (int i = 0; i < 16; ++i)
      for (int j = 0; j < 16; ++j) ref[i][j] = ref[i][j] + m.lane<float>(0, i) * m.lane<float>(1, j);
  }
  for (uint32_t i = 0; i < 16; ++i)
    for (uint32_t j = 0; j < 16; ++j) ASSERT_EQ(m.tile_elem<float>({32, 1}, i, j), ref[i][j]);
}

TEST(Smopa, OnesAndSingleGroup) {
  Machine m;
  m.zero_za_all();
  for (auto& b : m.z(0)) b = 1;
  for (auto& b : m.z(1)) b = 1;
  m.smopa({32, 0}, 0, 1, SmopaKind::kI8Widen);
  for (uint32_t i = 0; i < 16; ++i)
    for (uint32_t j = 0; j < 16; ++j) EXPECT_EQ(m.tile_elem<int32_t>({32, 0}, i, j), 4);

  m.zero_za_all();
  m.dup_zero(2);
  m.dup_zero(3);
  for (int t = 0; t < 4; ++t) {
    m.set_lane<int8_t>(2, t, static_cast<int8_t>(t + 1));
    m.set_lane<int8_t>(3, t, 1);
  }
  m.smopa({32, 3}, 2, 3, SmopaKind::kI8Widen);
  EXPECT_EQ(m.tile_elem<int32_t>({32, 3}, 0, 0), 10);
  EXPECT_EQ(m.tile_elem<int32_t>({32, 3}, 0, 1), 0);
}

TEST(Mova, HorizontalWriteVerticalReadTransposes) {
  Machine m;
  const TileView t{32, 1};
  for (uint32_t r = 0; r < 16; ++r) {
    for (uint32_t l = 0; l < 16; ++l) m.set_lane<float>(r, l, static_cast<float>(100 * r + l));
  }
  m.mova_to_tile(t, 0, Orientation::kHorizontal, 0, 4);
  m.mova_to_tile(t, 4, Orientation::kHorizontal, 4, 4);
  m.mova_to_tile(t, 8, Orientation::kHorizontal, 8, 4);
  m.mova_to_tile(t, 12, Orientation::kHorizontal, 12, 4);
  for (uint32_t c = 0; c < 16; c += 4) m.mova_to_regs(t, c, Orientation::kVertical, 16 + c, 4);
  for (uint32_t c = 0; c < 16; ++c)
    for (uint32_t r = 0; r < 16; ++r) EXPECT_EQ(m.lane<float>(16 + c, r), static_cast<float>(100 * r + c));
  EXPECT_THROW(m.mova_to_regs(t, 16, Orientation::kVertical, 0), UsageError);
  EXPECT_THROW(m.mova_to_regs(t, 14, Orientation::kVertical, 0, 4), UsageError);
}

TEST(Zip, FourLaneView) {
  // 128-bit vectors hold four 32-bit lanes.
  Machine m(MachineConfig{128, 0});
  for (uint32_t l = 0; l < 4; ++l) {
    m.set_lane<uint32_t>(0, l, 10 + l);
    m.set_lane<uint32_t>(1, l, 20 + l);
  }
  m.zip(2, 0, 1, 32);
  const uint32_t lo[] = {10, 20, 11, 21}, hi[] = {12, 22, 13, 23};
  for (uint32_t l = 0; l < 4; ++l) {
    EXPECT_EQ(m.lane<uint32_t>(2, l), lo[l]);
    EXPECT_EQ(m.lane<uint32_t>(3, l), hi[l]);
  }
  m.zip(4, 0, 0, 32);
  EXPECT_EQ(m.lane<uint32_t>(4, 0), 10u);
  EXPECT_EQ(m.lane<uint32_t>(4, 1), 10u);
}

TEST(Zip, IsAPermutation) {
  std::mt19937_64 rng(5);
  Machine m;
  for (int n = 0; n < 100; ++n) {
    for (unsigned r : {0u, 1u})
      for (auto& b : m.z(r)) b = static_cast<uint8_t>(rng());
    std::vector<uint16_t> in, out;
    for (uint32_t l = 0; l < 32; ++l) {
      in.push_back(m.lane<uint16_t>(0, l));
      in.push_back(m.lane<uint16_t>(1, l));
    }
    m.zip(6, 0, 1, 16);
    for (uint32_t l = 0; l < 32; ++l) {
      out.push_back(m.lane<uint16_t>(6, l));
      out.push_back(m.lane<uint16_t>(7, l));
    }
    std::sort(in.begin(), in.end());
    std::sort(out.begin(), out.end());
    ASSERT_EQ(in, out);
  }
}

TEST(ZeroZa, SelectedTilesOnly) {
  Machine m;
  for (auto& b : m.za()) b = 0xab;
  const TileView t0{32, 0};
  m.zero_za(std::span<const TileView>(&t0, 1));
  for (uint32_t t = 0; t < 4; ++t)
    for (uint32_t i = 0; i < 16; ++i)
      for (uint32_t j = 0; j < 16; ++j)
        EXPECT_EQ(m.tile_elem<uint32_t>({32, t}, i, j), t == 0 ? 0u : 0xababababu);
  m.zero_za_all();
  EXPECT_TRUE(std::all_of(m.za().begin(), m.za().end(), [](uint8_t b) { return b == 0; }));
}

TEST(Whilelt, Examples) {
  Machine m;
  auto active = [&](const PredicateReg& p) {
    int n = 0;
    for (uint32_t l = 0; l < 16; ++l) n += p.mask[4 * l] != 0;
    return n;
  };
  EXPECT_EQ(active(m.whilelt(0, 0, 16, 32)), 16);
  EXPECT_EQ(active(m.whilelt(0, 0, 5, 32)), 5);
  EXPECT_EQ(active(m.whilelt(0, 12, 12, 32)), 0);
  EXPECT_THROW(m.whilelt_pn(3, 0, 4, 32, 4), UsageError);
}

TEST(InstrStats, MergeAddsAndKernelTilesAreTracked) {
  Machine m;
  m.begin_kernel(KernelKind::kMain);
  for (uint32_t t = 0; t < 4; ++t) m.fmopa({32, t}, 0, 1, FmopaKind::kF32);
  m.end_kernel();
  EXPECT_EQ(m.stats().main_kernel_calls, 1u);
  EXPECT_EQ(m.stats().main_tiles_touched[4], 1u);
  InstrStats s = m.stats();
  s += m.stats();
  EXPECT_EQ(s.fmopa_f32, 8u);
  EXPECT_EQ(s.flops, 2 * 4 * 512u);
}

// Randomized brute-force checks, several vector lengths.
class IsaRandom : public ::testing::TestWithParam<uint32_t> {};

void expect_clean(const IsaCheck& r) {
  EXPECT_GE(r.cases, 1000u);
  EXPECT_EQ(r.failures, 0u) << r.first_failure;
}

TEST_P(IsaRandom, Fmopa) { expect_clean(testing::check_fmopa(1000, 1, GetParam())); }
TEST_P(IsaRandom, Smopa) { expect_clean(testing::check_smopa(1000, 2, GetParam())); }
TEST_P(IsaRandom, Zip) { expect_clean(testing::check_zip(1000, 3, GetParam())); }
TEST_P(IsaRandom, Mova) { expect_clean(testing::check_mova(1000, 4, GetParam())); }
TEST_P(IsaRandom, Whilelt) { expect_clean(testing::check_whilelt(1000, 5, GetParam())); }
TEST_P(IsaRandom, LoadStore) { expect_clean(testing::check_ld_st(1000, 6, GetParam())); }

INSTANTIATE_TEST_SUITE_P(Svl, IsaRandom, ::testing::Values(128u, 512u, 2048u));

}  // namespace
}  // namespace smegemm
