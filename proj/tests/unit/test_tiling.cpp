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

#include <random>

#include "tiling.hpp"

namespace smegemm {
namespace {

using u128 = unsigned __int128;

HardwareProfile small_tlb() {
  HardwareProfile hw;
  hw.page_bytes = 4096;
  hw.tlb_entries = 64;
  hw.dtype_size_bytes = 4;
  return hw;
}

// Closed-form TLB constraint, scanned over every multiple of the unit.
uint64_t kc_scan(const HardwareProfile& hw, uint64_t mr, uint64_t nr, uint64_t unit, uint64_t limit) {
  auto pages = [&](uint64_t bytes) { return (bytes + hw.page_bytes - 1) / hw.page_bytes + 1; };
  uint64_t best = 0;
  for (uint64_t kc = unit; kc <= limit; kc += unit) {
    const uint64_t ds = hw.dtype_size_bytes;
    if (pages(mr * kc * ds) + 2 * pages(nr * kc * ds) + mr < hw.tlb_entries) best = kc;
  }
  return best;
}

struct GridBest {
  uint64_t mc = 0, nc = 0;
};

// Exhaustive (mc, nc) search on the (mr, nr) grid; exact rational compare,
// ties to the larger nc.
GridBest grid_search(uint64_t budget_elems, uint64_t kc, uint64_t mr, uint64_t nr) {
  GridBest b;
  u128 bnum = 0, bden = 1;
  for (uint64_t mc = mr;; mc += mr) {
    bool any = false;
    for (uint64_t nc = nr;; nc += nr) {
      const uint64_t foot = mc * kc + kc * nc + mc * nc + kc * nc + mc * nc;
      if (foot >= budget_elems) break;
      any = true;
      const u128 num = u128{2} * mc * nc * kc, den = u128{mc} * kc + u128{kc} * nc + u128{2} * mc * nc;
      if (num * bden > bnum * den || (num * bden == bnum * den && nc > b.nc)) {
        b = {mc, nc};
        bnum = num;
        bden = den;
      }
    }
    if (!any) break;
  }
  return b;
}

TEST(MicroTile, Shapes) {
  EXPECT_EQ(micro_tile_shape(Precision::kF32, 512, Layout::kRowMajor), (MicroTile{16, 64}));
  EXPECT_EQ(micro_tile_shape(Precision::kF32, 512, Layout::kColMajor), (MicroTile{64, 16}));
  EXPECT_EQ(micro_tile_shape(Precision::kF64, 512, Layout::kRowMajor), (MicroTile{8, 32}));
  EXPECT_EQ(micro_tile_shape(Precision::kF16F32, 512, Layout::kRowMajor), (MicroTile{16, 64}));
  EXPECT_EQ(micro_tile_shape(Precision::kI8I32, 256, Layout::kRowMajor), (MicroTile{8, 32}));
}

TEST(SolveKc, SmallTlbExample) {
  const HardwareProfile hw = small_tlb();
  EXPECT_EQ(solve_kc(hw, 16, 64, 16), 304u);
  EXPECT_EQ(kc_scan(hw, 16, 64, 16, 1 << 16), 304u);
  EXPECT_EQ(tlb_demand(hw, 16, 64, 304).total(), 62u);
  EXPECT_EQ(tlb_demand(hw, 16, 64, 320).total(), 64u);
}

TEST(SolveKc, MatchesExhaustiveScan) {
  std::mt19937_64 rng(9);
  int checked = 0;
  while (checked < 300) {
    HardwareProfile hw;
    hw.page_bytes = uint64_t{1} << (10 + rng() % 8);
    hw.tlb_entries = static_cast<uint32_t>(16 + rng() % 300);
    hw.dtype_size_bytes = 1u << (rng() % 4);
    const uint32_t mr = 8u << (rng() % 2), nr = 4 * mr, unit = 16u << (rng() % 3);
    const uint64_t limit = 8192;
    const uint64_t want = kc_scan(hw, mr, nr, unit, limit);
    if (want == 0) {
      EXPECT_THROW(solve_kc(hw, mr, nr, unit, limit), PlannerError);
    } else {
      ASSERT_EQ(solve_kc(hw, mr, nr, unit, limit), want);
      // Tightness: one more unit breaks the bound (unless the cap stopped us).
      if (want + unit <= limit) {
        EXPECT_GE(tlb_demand(hw, mr, nr, want + unit).total(), hw.tlb_entries);
      }
    }
    ++checked;
  }
}

TEST(SolveKc, FloorOfTheConstraint) {
  HardwareProfile hw;
  hw.page_bytes = 4096;
  // Ta = Tb = 2 at kc = 16, so mr + 6 entries are needed and mr + 7 suffice.
  hw.tlb_entries = 16 + 7;
  EXPECT_EQ(solve_kc(hw, 16, 64, 16), 16u);
  hw.tlb_entries = 16 + 6;
  EXPECT_THROW(solve_kc(hw, 16, 64, 16), PlannerError);
  for (uint32_t e = 1; e <= 16 + 5; ++e) {
    hw.tlb_entries = e;
    EXPECT_THROW(solve_kc(hw, 16, 64, 16), PlannerError) << e;
  }
  try {
    hw.tlb_entries = 10;
    solve_kc(hw, 16, 64, 16);
  } catch (const PlannerError& e) {
    EXPECT_NE(std::string(e.what()).find("tlb_entries"), std::string::npos);
  }
}

TEST(SolveKc, HugePagesHitTheCap) {
  HardwareProfile hw;
  hw.page_bytes = uint64_t{1} << 40;
  hw.tlb_entries = 64;
  EXPECT_EQ(solve_kc(hw, 16, 64, 16), 65536u);
  EXPECT_EQ(solve_kc(hw, 16, 64, 16, 1000), 992u);
}

TEST(Cmr, Identities) {
  EXPECT_DOUBLE_EQ(cmr(64, 64, 64), 32.0);
  EXPECT_DOUBLE_EQ(cmr(1, 1, 1), 0.5);
  std::mt19937_64 rng(1);
  for (int i = 0; i < 1000; ++i) {
    const double m = 1 + rng() % 5000, n = 1 + rng() % 5000, k = 1 + rng() % 5000;
    EXPECT_DOUBLE_EQ(cmr(m, n, k), 2 * m * n * k / (m * k + k * n + 2 * m * n));
  }
  // kc = 1 bounds the ratio below 1.
  EXPECT_LT(cmr(4096, 4096, 1), 1.0);
}

TEST(Footprint, CountsDuplicatedTerms) {
  EXPECT_EQ(l2_footprint_elems(2, 3, 5), 2u * 5 + 5 * 3 + 2 * 3 + 5 * 3 + 2 * 3);
}

TEST(SolveMcNc, MatchesGridOracleAtDefaultBudget) {
  HardwareProfile hw;
  const auto [mc, nc] = solve_mc_nc(hw, 304, 16, 64);
  const GridBest g = grid_search(hw.budget_elems(), 304, 16, 64);
  EXPECT_EQ(mc, g.mc);
  EXPECT_EQ(nc, g.nc);
  EXPECT_LT(l2_footprint_elems(mc, nc, 304), hw.budget_elems());
}

TEST(SolveMcNc, MatchesGridOracleOnSmallBudgets) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    HardwareProfile hw;
    hw.dtype_size_bytes = 1u << (rng() % 4);
    hw.l2_budget_bytes = (64u << 10) + rng() % (1u << 20);
    const uint32_t mr = 8u << (rng() % 2), nr = 4 * mr;
    const uint64_t kc = 16 * (1 + rng() % 40);
    const GridBest g = grid_search(hw.budget_elems(), kc, mr, nr);
    if (g.mc == 0) {
      EXPECT_THROW(solve_mc_nc(hw, kc, mr, nr), PlannerError);
      continue;
    }
    const auto [mc, nc] = solve_mc_nc(hw, kc, mr, nr);
    ASSERT_EQ(mc, g.mc) << hw.l2_budget_bytes << " kc " << kc;
    ASSERT_EQ(nc, g.nc);
  }
}

TEST(SolveMcNc, DegenerateKcOfOne) {
  HardwareProfile hw;
  hw.l2_budget_bytes = 64 << 10;
  const auto [mc, nc] = solve_mc_nc(hw, 1, 16, 64);
  const GridBest g = grid_search(hw.budget_elems(), 1, 16, 64);
  EXPECT_EQ(mc, g.mc);
  EXPECT_EQ(nc, g.nc);
  EXPECT_LT(cmr(mc, nc, 1), 1.0);
}

TEST(SolveMcNc, BudgetTooSmall) {
  HardwareProfile hw;
  hw.l2_budget_bytes = 4096;
  EXPECT_THROW(solve_mc_nc(hw, 304, 16, 64), PlannerError);
}

TEST(SolveMcNc, ContinuousOptimumBoundsTheGrid) {
  for (uint64_t budget : {1ull << 20, 4ull << 20, 8ull << 20, 32ull << 20}) {
    HardwareProfile hw;
    hw.l2_budget_bytes = budget;
    for (uint64_t kc : {64u, 304u, 768u}) {
      const ContinuousOptimum c = continuous_optimum(hw, kc);
      const auto [mc, nc] = solve_mc_nc(hw, kc, 16, 64);
      EXPECT_LE(cmr(mc, nc, kc), c.cmr * (1 + 1e-12));
      EXPECT_GT(cmr(mc, nc, kc), 0.8 * c.cmr);
      // The continuous point satisfies the multiplier condition and sits on the boundary.
      const double m = c.mc, n = c.nc, k = static_cast<double>(kc);
      EXPECT_NEAR(n * n * (2 * k + 2 * m) / (m * m * (k + 2 * n)), 1.0, 1e-9);
      EXPECT_NEAR(m * k + 2 * k * n + 2 * m * n, static_cast<double>(hw.budget_elems()), 1e-6 * budget);
    }
  }
}

TEST(SolveMcNc, CapsLimitTheBlock) {
  HardwareProfile hw;
  const auto [mc, nc] = solve_mc_nc(hw, 304, 16, 64, 40, 100);
  EXPECT_LE(mc, 32u);
  EXPECT_LE(nc, 64u);
}

TEST(Plan, OutputAlwaysValidates) {
  std::mt19937_64 rng(8);
  for (int i = 0; i < 300; ++i) {
    HardwareProfile hw;
    hw.page_bytes = uint64_t{1} << (12 + rng() % 4);
    hw.tlb_entries = static_cast<uint32_t>(40 + rng() % 300);
    hw.l2_budget_bytes = (512u << 10) + rng() % (16u << 20);
    const Precision p = static_cast<Precision>(rng() % 4);
    hw.dtype_size_bytes = output_bytes(p);
    const uint64_t m = 1 + rng() % 3000, n = 1 + rng() % 3000, k = 1 + rng() % 3000;
    TilingParams t;
    try {
      t = plan(hw, p, m, n, k);
    } catch (const PlannerError&) {
      continue;
    }
    const auto v = validate(t, hw, k_unit(p));
    EXPECT_TRUE(v.empty()) << v.front().constraint << ": " << v.front().detail;
  }
}

TEST(Plan, MonotoneInBudget) {
  for (Precision p : {Precision::kF32, Precision::kF64, Precision::kF16F32, Precision::kI8I32}) {
    double last = 0;
    for (uint64_t budget = 256 << 10; budget <= (64ull << 20); budget += budget / 3) {
      HardwareProfile hw;
      hw.l2_budget_bytes = budget;
      hw.dtype_size_bytes = output_bytes(p);
      TilingParams t;
      try {
        t = plan(hw, p, 100000, 100000, 100000);
      } catch (const PlannerError&) {
        // Only budgets below every feasible one may be rejected.
        EXPECT_EQ(last, 0.0) << budget;
        continue;
      }
      const double r = cmr(t.mc, t.nc, t.kc);
      EXPECT_GE(r, last) << budget;
      last = r;
    }
  }
}

TEST(Plan, NoBetterFeasibleGridPointForSmallBudgets) {
  for (uint64_t budget : {256u << 10, 384u << 10, 512u << 10, 768u << 10, 1u << 20}) {
    HardwareProfile hw = small_tlb();
    hw.l2_budget_bytes = budget;
    const TilingParams t = plan(hw, Precision::kF32, 100000, 100000, 100000);
    const GridBest g = grid_search(hw.budget_elems(), t.kc, t.mr, t.nr);
    EXPECT_DOUBLE_EQ(cmr(t.mc, t.nc, t.kc), cmr(g.mc, g.nc, t.kc));
  }
}

TEST(Validate, NamesViolations) {
  const HardwareProfile hw = small_tlb();
  const TilingParams t = plan(hw, Precision::kF32, 4096, 4096, 4096);
  EXPECT_TRUE(validate(t, hw, 16).empty());

  TilingParams big = t;
  big.mc *= 2;
  big.nc *= 2;
  auto v = validate(big, hw, 16);
  ASSERT_EQ(v.size(), 1u);
  EXPECT_EQ(v[0].constraint, "l2_footprint");

  TilingParams deep = t;
  deep.kc = solve_kc(hw, 16, 64, 16) + 16;
  v = validate(deep, hw, 16);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v.back().constraint, "tlb_entries");

  TilingParams odd = t;
  odd.mc += 1;
  v = validate(odd, hw, 16);
  ASSERT_FALSE(v.empty());
  EXPECT_EQ(v[0].constraint, "divisibility");

  const std::string text = explain(t, hw, 16);
  EXPECT_NE(text.find("verdict       ok"), std::string::npos);
  EXPECT_NE(explain(big, hw, 16).find("l2_footprint"), std::string::npos);
}

TEST(HardwareProfile, Validation) {
  HardwareProfile hw;
  hw.dtype_size_bytes = 3;
  EXPECT_THROW(hw.validate(), PlannerError);
  hw.dtype_size_bytes = 4;
  hw.tlb_entries = 0;
  EXPECT_THROW(hw.validate(), PlannerError);
}

}  // namespace
}  // namespace smegemm
