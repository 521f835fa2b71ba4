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

// Workload tables and the runner that initialises a problem, runs it on the
// simulated machine and checks it against the naive oracle.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "driver.hpp"
#include "verify.hpp"

namespace smegemm {

struct WorkloadSpec {
  std::string id;
  uint64_t m = 0, n = 0, k = 0;
};

/// The 24 DeepSeek/LLaMA GEMM shapes at full size.
const std::vector<WorkloadSpec>& builtin_workloads();
/// Reads `id M N K` lines ('#' comments allowed).
std::vector<WorkloadSpec> load_workload_table(const std::string& path);
/// Dimensions divided by `divisor`, rounded up.
WorkloadSpec scaled(const WorkloadSpec& w, uint64_t divisor);
const WorkloadSpec& find_workload(const std::vector<WorkloadSpec>& table, const std::string& id);

struct RunOptions {
  Precision precision = Precision::kF32;
  Layout layout = Layout::kRowMajor;
  double alpha = 1.0;
  double beta = 0.0;
  uint32_t units = 0;  // 0: profile default
  Ablation ablation{};
  std::optional<TilingParams> tiling;
  uint64_t seed = 1;
  uint64_t queue_seed = 0;
  double tolerance = -1;  // <0: default for the precision
  std::ostream* trace = nullptr;
  bool keep_c = false;    // keep the computed C bytes in the result
};

struct RunResult {
  std::string id;
  uint64_t m = 0, n = 0, k = 0;
  Precision precision = Precision::kF32;
  Layout layout = Layout::kRowMajor;
  double alpha = 1.0, beta = 0.0;
  uint64_t seed = 0;
  std::string ablation;  // label for ablation rows
  RunReport report;
  Verdict verdict;
  std::vector<std::byte> c;
};

/// Random problem (seeded), gemm, oracle check.
RunResult run_problem(const std::string& id, uint64_t m, uint64_t n, uint64_t k,
                      const SystemProfile& sys, const RunOptions& opt);
/// Runs `hp` as given (its C is the input C); result C returned in `c_out`.
RunReport run_host_problem(const HostProblem& hp, const SystemProfile& sys, const RunOptions& opt,
                           std::vector<std::byte>& c_out);

std::vector<RunResult> run_workloads(const std::vector<WorkloadSpec>& table, uint64_t scale,
                                     const SystemProfile& sys, const RunOptions& opt);

inline constexpr uint64_t kIrregularSizes[] = {80, 110, 140, 170, 200};
std::vector<RunResult> run_irregular_sweep(const SystemProfile& sys, const RunOptions& opt,
                                           uint64_t k = 2560);

/// Four rows: baseline (everything off), +blocking/packing, +four-way loads,
/// +online packing.
std::vector<RunResult> run_ablation(const WorkloadSpec& w, const SystemProfile& sys,
                                    const RunOptions& opt);

}  // namespace smegemm
