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

#include "driver.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <random>
#include <thread>

#include "kernels.hpp"
#include "packing.hpp"
#include "unit.hpp"

namespace smegemm {

void SystemProfile::validate() const {
  l2.validate();
  tlb.validate();
  if (working_set_bytes == 0 || working_set_bytes > l2.capacity_bytes)
    throw UsageError("working set must be in (0, L2 capacity]");
  if (unit_count == 0) throw UsageError("unit_count must be >= 1");
  MachineConfig{svl_bits, 0}.validate();
}

HardwareProfile SystemProfile::hardware(Precision p) const {
  HardwareProfile hw;
  hw.l2_budget_bytes = working_set_bytes;
  hw.tlb_entries = tlb.entry_count;
  hw.page_bytes = tlb.page_bytes;
  hw.dtype_size_bytes = output_bytes(p);
  hw.svl_bits = svl_bits;
  return hw;
}

std::vector<TaskRecord> schedule_parallel(uint64_t m, uint64_t n, uint64_t k, uint64_t mc,
                                          uint64_t nc, uint32_t units, uint64_t seed) {
  if (units == 0) throw UsageError("unit count must be >= 1");
  if (mc == 0 || nc == 0) throw UsageError("block sizes must be positive");
  std::vector<TaskRecord> tasks;
  for (uint64_t n0 = 0; n0 < n; n0 += nc)
    for (uint64_t m0 = 0; m0 < m; m0 += mc) {
      TaskRecord t;
      t.m0 = m0;
      t.n0 = n0;
      t.rows = std::min(mc, m - m0);
      t.cols = std::min(nc, n - n0);
      t.cost = t.rows * t.cols * std::max<uint64_t>(k, 1);
      tasks.push_back(t);
    }
  if (seed != 0) {
    std::mt19937_64 rng(seed);
    std::shuffle(tasks.begin(), tasks.end(), rng);
  }
  std::vector<uint64_t> load(units, 0);
  for (auto& t : tasks) {
    const auto it = std::min_element(load.begin(), load.end());
    t.unit = static_cast<uint32_t>(it - load.begin());
    *it += t.cost;
  }
  return tasks;
}

namespace {

// The problem after the column-major transform: everything row-major.
struct Problem {
  Precision p;
  uint64_t m, n, k;
  MatrixView a, b, c;
  double alpha, beta;
  TilingParams t;
  uint32_t unit;
  Ablation ab;
  bool pack_b;  // false: the kernels read B in place
};

struct Buffers {
  uint64_t ac = 0;
  uint64_t bc = 0;
};

bool overlaps(uint64_t a0, uint64_t a1, uint64_t b0, uint64_t b1) { return a0 < b1 && b0 < a1; }

// Byte extent [first, last) of a row-major rows x cols matrix.
std::pair<uint64_t, uint64_t> extent(const MatrixView& v, uint64_t rows, uint64_t cols,
                                     uint32_t eb) {
  return {v.addr, v.addr + ((rows - 1) * v.ld + cols) * eb};
}

// One L3 iteration: Ac is already packed; walks Ar panels (L4) and Br panels
// (L5), packing Bc spans on the first L4 pass when `online` is set.
void macro_block(const UnitContext& ctx, const Problem& pr, const Buffers& buf, uint64_t m0,
                 uint64_t rows, uint64_t n0, uint64_t cols, uint64_t k0, uint64_t kc_act,
                 uint64_t kc_pad, bool online, double beta_eff) {
  const Precision p = pr.p;
  const uint32_t mr = pr.t.mr, nr = pr.t.nr;
  const uint32_t vl = ctx.m().vl();
  const uint32_t in_b = input_bytes(p), out_b = output_bytes(p);
  const uint32_t side = mr;  // edge-kernel column chunk
  const uint64_t mc_pad = round_up(rows, mr), nc_pad = round_up(cols, nr);
  const uint64_t m_panels = mc_pad / mr, n_panels = nc_pad / nr;
  const uint64_t span_panels = b_span_panels(p, vl * 8);
  const bool edge_ok = pr.ab.edge_kernel && (p == Precision::kF32 || p == Precision::kF64);
  const SourceBlock bsrc{pr.b.addr + (k0 * pr.b.ld + n0) * in_b, pr.b.ld, kc_act, cols};

  for (uint64_t i = 0; i < m_panels; ++i) {
    const uint64_t rows_rem = rows - i * mr;
    const uint64_t g0 = i / 4 * 4;
    const bool group_full = (g0 + 4) * mr <= rows;
    for (uint64_t j = 0; j < n_panels; ++j) {
      if (online && i == 0 && j % span_panels == 0)
        pack_b_span(ctx, p, bsrc, kc_pad, nc_pad, buf.bc, j / span_panels);
      const uint64_t cols_rem = cols - j * nr;

      MicroTask t;
      t.precision = p;
      t.kc_pad = kc_pad;
      t.alpha = pr.alpha;
      t.beta = beta_eff;
      t.ldc = pr.c.ld;
      t.a_panel_stride = a_panel_offset(p, mr, kc_pad, 1);
      if (pr.pack_b) {
        t.b_panel = buf.bc + b_panel_offset(p, nr, kc_pad, j);
        t.b_row_stride = 4ull * vl;
        t.b_rows_valid = kc_pad / interleave_factor(p);
        t.b_cols_valid = 4ull * vl / output_bytes(p);
      } else {
        t.b_panel = pr.b.addr + (k0 * pr.b.ld + n0 + j * nr) * in_b;
        t.b_row_stride = pr.b.ld * in_b;
        t.b_rows_valid = kc_act;
        t.b_cols_valid = std::min<uint64_t>(cols_rem, nr);
      }

      if (edge_ok && cols_rem < nr && group_full) {
        if (i != g0) continue;  // covered by the group's first panel
        t.a_panel = buf.ac + a_panel_offset(p, mr, kc_pad, i);
        t.rows = 4 * mr;
        const uint64_t b0 = t.b_panel;
        for (uint64_t ch = 0; ch * side < cols_rem; ++ch) {
          t.cols = static_cast<uint32_t>(std::min<uint64_t>(side, cols_rem - ch * side));
          t.b_panel = b0 + ch * side * in_b;
          t.c_addr = pr.c.addr + ((m0 + i * mr) * pr.c.ld + n0 + j * nr + ch * side) * out_b;
          kernel_f32_edge(ctx, t);
        }
        continue;
      }
      t.a_panel = buf.ac + a_panel_offset(p, mr, kc_pad, i);
      t.rows = static_cast<uint32_t>(std::min<uint64_t>(rows_rem, mr));
      t.cols = static_cast<uint32_t>(std::min<uint64_t>(cols_rem, nr));
      t.c_addr = pr.c.addr + ((m0 + i * mr) * pr.c.ld + n0 + j * nr) * out_b;
      kernel_main(ctx, t);
    }
  }
}

// Full k loop for one C block, used both by the serial nest (with the B
// packing hoisted out of L3) and by parallel tasks.
struct KStep {
  uint64_t k0, kc_act, kc_pad;
  double beta;
};

std::vector<KStep> k_steps(const Problem& pr) {
  std::vector<KStep> v;
  for (uint64_t k0 = 0; k0 < pr.k; k0 += pr.t.kc) {
    const uint64_t act = std::min(pr.t.kc, pr.k - k0);
    v.push_back({k0, act, round_up(act, pr.unit), k0 == 0 ? pr.beta : 1.0});
  }
  return v;
}

void pack_a_block(const UnitContext& ctx, const Problem& pr, const Buffers& buf, uint64_t m0,
                  uint64_t rows, const KStep& ks) {
  const SourceBlock a{pr.a.addr + (m0 * pr.a.ld + ks.k0) * input_bytes(pr.p), pr.a.ld, rows,
                      ks.kc_act};
  pack_a_transposed(ctx, pr.p, a, round_up(rows, pr.t.mr), ks.kc_pad, buf.ac);
}

void pack_b_block(const UnitContext& ctx, const Problem& pr, const Buffers& buf, uint64_t n0,
                  uint64_t cols, const KStep& ks) {
  const SourceBlock b{pr.b.addr + (ks.k0 * pr.b.ld + n0) * input_bytes(pr.p), pr.b.ld, ks.kc_act,
                      cols};
  pack_b(ctx, pr.p, b, ks.kc_pad, round_up(cols, pr.t.nr), buf.bc, PackMode::kUpfront);
}

void run_serial(const UnitContext& ctx, const Problem& pr, const Buffers& buf) {
  const auto steps = k_steps(pr);
  for (uint64_t n0 = 0; n0 < pr.n; n0 += pr.t.nc) {             // L1
    const uint64_t cols = std::min(pr.t.nc, pr.n - n0);
    for (const KStep& ks : steps) {                               // L2
      const bool online = pr.pack_b && pr.ab.online_packing;
      if (pr.pack_b && !online) pack_b_block(ctx, pr, buf, n0, cols, ks);
      for (uint64_t m0 = 0; m0 < pr.m; m0 += pr.t.mc) {           // L3
        const uint64_t rows = std::min(pr.t.mc, pr.m - m0);
        pack_a_block(ctx, pr, buf, m0, rows, ks);
        macro_block(ctx, pr, buf, m0, rows, n0, cols, ks.k0, ks.kc_act, ks.kc_pad,
                    online && m0 == 0, ks.beta);
      }
    }
  }
}

void run_task(const UnitContext& ctx, const Problem& pr, const Buffers& buf, const TaskRecord& task) {
  for (const KStep& ks : k_steps(pr)) {
    const bool online = pr.pack_b && pr.ab.online_packing;
    if (pr.pack_b && !online) pack_b_block(ctx, pr, buf, task.n0, task.cols, ks);
    pack_a_block(ctx, pr, buf, task.m0, task.rows, ks);
    macro_block(ctx, pr, buf, task.m0, task.rows, task.n0, task.cols, ks.k0, ks.kc_act, ks.kc_pad,
                online, ks.beta);
  }
}

void check_tiling(const TilingParams& t, Precision p, uint32_t svl) {
  const MicroTile mt = micro_tile_shape(p, svl, Layout::kRowMajor);
  if (t.mr != mt.mr || t.nr != mt.nr)
    throw UsageError("tiling override must use the micro-tile " + std::to_string(mt.mr) + "x" +
                     std::to_string(mt.nr));
  if (t.mc == 0 || t.nc == 0 || t.kc == 0 || t.mc % t.mr || t.nc % t.nr || t.kc % k_unit(p))
    throw PlannerError("tiling override violates divisibility (mc % mr, nc % nr, kc % k_unit)");
}

}  // namespace

RunReport gemm(MemoryImage& image, const SystemProfile& sys, const GemmConfig& cfg) {
  const auto wall0 = std::chrono::steady_clock::now();
  sys.validate();
  const Precision p = cfg.precision;
  if (cfg.m == 0 || cfg.n == 0 || cfg.k == 0) throw UsageError("gemm dimensions must be positive");
  if (p == Precision::kI8I32 &&
      (cfg.alpha != static_cast<double>(static_cast<int64_t>(cfg.alpha)) ||
       cfg.beta != static_cast<double>(static_cast<int64_t>(cfg.beta))))
    throw UsageError("i8 gemm takes integral alpha and beta");
  const uint32_t units = cfg.units ? cfg.units : sys.unit_count;

  // Column-major C = A*B is the row-major C^T = B^T * A^T.
  Problem pr{p, cfg.m, cfg.n, cfg.k, cfg.a, cfg.b, cfg.c, cfg.alpha, cfg.beta, {}, k_unit(p),
             cfg.ablation, true};
  const bool transposed = cfg.layout == Layout::kColMajor;
  if (transposed) {
    std::swap(pr.m, pr.n);
    std::swap(pr.a, pr.b);
  }
  const uint32_t in_b = input_bytes(p), out_b = output_bytes(p);
  if (pr.a.ld < pr.k || pr.b.ld < pr.n || pr.c.ld < pr.n)
    throw UsageError("leading dimension smaller than the contiguous extent");
  const auto ea = extent(pr.a, pr.m, pr.k, in_b);
  const auto eb = extent(pr.b, pr.k, pr.n, in_b);
  const auto ec = extent(pr.c, pr.m, pr.n, out_b);
  for (const auto& e : {ea, eb, ec}) image.check(e.first, e.second - e.first);
  if (overlaps(ec.first, ec.second, ea.first, ea.second) ||
      overlaps(ec.first, ec.second, eb.first, eb.second))
    throw UsageError("C overlaps A or B");

  const HardwareProfile hw = sys.hardware(p);
  const MicroTile mt = micro_tile_shape(p, sys.svl_bits, Layout::kRowMajor);
  if (!cfg.ablation.blocking) {
    pr.t = {round_up(pr.m, mt.mr), round_up(pr.n, mt.nr), round_up(pr.k, pr.unit), mt.mr, mt.nr};
    // Only A needs the transposing pack; f16/i8 B still needs its interleave.
    pr.pack_b = p == Precision::kF16F32 || p == Precision::kI8I32;
  } else if (cfg.tiling) {
    pr.t = *cfg.tiling;
    check_tiling(pr.t, p, sys.svl_bits);
  } else {
    pr.t = plan(hw, p, pr.m, pr.n, pr.k);
  }

  RunReport rep;
  rep.tiling = pr.t;
  rep.k_unit = pr.unit;
  rep.units = units;
  rep.transposed = transposed;
  rep.working_set_bytes = sys.working_set_bytes;
  {
    const uint64_t kc = std::min(pr.t.kc, round_up(pr.k, pr.unit));
    const uint64_t mc = std::min(pr.t.mc, round_up(pr.m, pr.t.mr));
    const uint64_t nc = std::min(pr.t.nc, round_up(pr.n, pr.t.nr));
    rep.footprint_bytes = (mc * kc + (pr.pack_b ? kc * nc : 0) + kc * pr.t.nr) * in_b + mc * nc * out_b;
  }

  // Private packing buffers per unit, allocated before any worker starts.
  const size_t mark = image.mark();
  const uint64_t mc_pad = round_up(std::min(pr.t.mc, pr.m), pr.t.mr);
  const uint64_t nc_pad = round_up(std::min(pr.t.nc, pr.n), pr.t.nr);
  const uint64_t kc_pad = round_up(std::min(pr.t.kc, pr.k), pr.unit);
  const uint64_t span_cols = b_span_cols(p, sys.svl_bits);
  std::vector<Buffers> bufs(units);
  for (uint32_t u = 0; u < units; ++u) {
    bufs[u].ac = image.alloc_region("ac." + std::to_string(u), mc_pad * kc_pad * in_b);
    if (pr.pack_b)
      bufs[u].bc = image.alloc_region("bc." + std::to_string(u),
                                      round_up(nc_pad, span_cols) * kc_pad * in_b);
  }

  std::vector<CacheSim> caches;
  std::vector<Machine> machines;
  caches.reserve(units);
  machines.reserve(units);
  for (uint32_t u = 0; u < units; ++u) {
    caches.emplace_back(sys.l2, sys.tlb);
    machines.emplace_back(MachineConfig{sys.svl_bits, u});
  }
  if (cfg.trace) machines[0].set_trace(cfg.trace);
  auto context = [&](uint32_t u) {
    return UnitContext{&machines[u], MemPort{&image, &caches[u]}, cfg.ablation.four_way};
  };

  try {
    if (units == 1 && cfg.queue_seed == 0) {
      run_serial(context(0), pr, bufs[0]);
      rep.tasks = schedule_parallel(pr.m, pr.n, pr.k, pr.t.mc, pr.t.nc, 1);
    } else {
      rep.tasks = schedule_parallel(pr.m, pr.n, pr.k, pr.t.mc, pr.t.nc, units, cfg.queue_seed);
      std::vector<std::exception_ptr> errors(units);
      auto worker = [&](uint32_t u) {
        try {
          const UnitContext ctx = context(u);
          for (const TaskRecord& t : rep.tasks)
            if (t.unit == u) run_task(ctx, pr, bufs[u], t);
        } catch (...) {
          errors[u] = std::current_exception();
        }
      };
      std::vector<std::thread> threads;
      for (uint32_t u = 1; u < units; ++u) threads.emplace_back(worker, u);
      worker(0);
      for (auto& th : threads) th.join();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }
  } catch (...) {
    image.release_to(mark);
    throw;
  }
  image.release_to(mark);

  for (uint32_t u = 0; u < units; ++u) {
    rep.unit_mem.push_back(caches[u].stats());
    rep.unit_instr.push_back(machines[u].stats());
    rep.mem += caches[u].stats();
    rep.instr += machines[u].stats();
  }
  rep.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - wall0).count();
  return rep;
}

}  // namespace smegemm
