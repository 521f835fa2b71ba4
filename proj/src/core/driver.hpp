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

// Blocked GEMM driver: L1 (n over nc) -> L2 (k over kc) -> L3 (m over mc) ->
// L4/L5 (Ar/Br panels) -> micro-kernel, with optional distribution of
// (mc, nc) blocks over several simulated units.

#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "common.hpp"
#include "memsim.hpp"
#include "tiling.hpp"
#include "vsme.hpp"

namespace smegemm {

/// A matrix stored in the simulated memory image. `ld` counts elements
/// between consecutive rows (row-major) or columns (column-major).
struct MatrixView {
  uint64_t addr = 0;
  uint64_t ld = 0;
};

struct SystemProfile {
  CacheConfig l2{};
  TlbConfig tlb{};
  uint64_t working_set_bytes = 8ull << 20;
  uint32_t unit_count = 1;
  uint32_t svl_bits = 512;

  void validate() const;
  /// Planner view of this system for a precision.
  HardwareProfile hardware(Precision p) const;
};

struct Ablation {
  bool blocking = true;        // off: one (M, N, K) block, only A packed where possible
  bool four_way = true;        // off: single-register loads everywhere
  bool online_packing = true;  // off: Bc packed before the L3 loop
  bool edge_kernel = true;     // off: tails use the predicated main kernel
};

struct GemmConfig {
  Precision precision = Precision::kF32;
  Layout layout = Layout::kRowMajor;
  uint64_t m = 0, n = 0, k = 0;
  double alpha = 1.0;
  double beta = 0.0;
  MatrixView a, b, c;
  uint32_t units = 0;  // 0: take the profile's unit_count
  Ablation ablation{};
  std::optional<TilingParams> tiling;  // overrides the planner (row-major orientation)
  uint64_t queue_seed = 0;             // nonzero: shuffle the task queue
  std::ostream* trace = nullptr;       // instruction trace of unit 0
};

/// One (mc, nc) block of C in the row-major orientation.
struct TaskRecord {
  uint64_t m0 = 0, n0 = 0, rows = 0, cols = 0;
  uint32_t unit = 0;
  uint64_t cost = 0;
};

struct RunReport {
  TilingParams tiling{};
  uint32_t k_unit = 0;
  uint32_t units = 1;
  MemStats mem{};
  InstrStats instr{};
  std::vector<MemStats> unit_mem;
  std::vector<InstrStats> unit_instr;
  std::vector<TaskRecord> tasks;
  uint64_t footprint_bytes = 0;    // Ac + Bc + C block + one streamed B panel
  uint64_t working_set_bytes = 0;
  bool transposed = false;         // column-major problem solved as C^T = B^T A^T
  double wall_ms = 0;
};

/// Builds the (nc-block, mc-block) task list and assigns it to `units`
/// workers: greedy by accumulated cost, ties to the lowest unit id. A
/// nonzero seed shuffles the queue first.
std::vector<TaskRecord> schedule_parallel(uint64_t m, uint64_t n, uint64_t k, uint64_t mc,
                                          uint64_t nc, uint32_t units, uint64_t seed = 0);

/// C = alpha*A*B + beta*C on the simulated machine.
RunReport gemm(MemoryImage& image, const SystemProfile& sys, const GemmConfig& cfg);

}  // namespace smegemm
