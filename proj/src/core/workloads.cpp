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

#include "workloads.hpp"

#include <fstream>
#include <sstream>

namespace smegemm {

const std::vector<WorkloadSpec>& builtin_workloads() {
  static const std::vector<WorkloadSpec> table = {
      {"1", 64, 2112, 7168},     {"2", 64, 24576, 1536},   {"3", 64, 32768, 512},
      {"4", 64, 7168, 16384},    {"5", 64, 4096, 7168},    {"6", 64, 7168, 2048},
      {"7", 128, 2112, 7168},    {"8", 128, 24576, 1536},  {"9", 128, 32768, 512},
      {"10", 128, 7168, 16384},  {"11", 128, 4096, 7168},  {"12", 128, 7168, 2048},
      {"13", 4096, 2112, 7168},  {"14", 4096, 24576, 1536}, {"15", 4096, 32768, 512},
      {"16", 4096, 7168, 16384}, {"17", 4096, 4096, 7168}, {"18", 4096, 7168, 2048},
      {"19", 4096, 256, 4096},   {"20", 11008, 256, 4096}, {"21", 4096, 256, 11008},
      {"22", 5120, 256, 5120},   {"23", 13824, 256, 5120}, {"24", 5120, 256, 13824},
  };
  return table;
}

std::vector<WorkloadSpec> load_workload_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open workload table '" + path + "'");
  std::vector<WorkloadSpec> out;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (const auto h = line.find('#'); h != std::string::npos) line.resize(h);
    std::istringstream ss(line);
    WorkloadSpec w;
    if (!(ss >> w.id)) continue;
    std::string extra;
    if (!(ss >> w.m >> w.n >> w.k) || (ss >> extra) || !w.m || !w.n || !w.k)
      throw UsageError(path + ":" + std::to_string(no) + ": expected `id M N K` with positive sizes");
    out.push_back(w);
  }
  if (out.empty()) throw UsageError("workload table '" + path + "' is empty");
  return out;
}

WorkloadSpec scaled(const WorkloadSpec& w, uint64_t divisor) {
  if (divisor == 0) throw UsageError("scale divisor must be >= 1");
  return {w.id, ceil_div(w.m, divisor), ceil_div(w.n, divisor), ceil_div(w.k, divisor)};
}

const WorkloadSpec& find_workload(const std::vector<WorkloadSpec>& table, const std::string& id) {
  for (const auto& w : table)
    if (w.id == id) return w;
  throw UsageError("unknown workload id '" + id + "'");
}

RunReport run_host_problem(const HostProblem& hp, const SystemProfile& sys, const RunOptions& opt,
                           std::vector<std::byte>& c_out) {
  MemoryImage image;
  GemmConfig cfg;
  cfg.precision = hp.precision;
  cfg.layout = hp.layout;
  cfg.m = hp.m;
  cfg.n = hp.n;
  cfg.k = hp.k;
  cfg.alpha = hp.alpha;
  cfg.beta = hp.beta;
  cfg.a = {image.alloc_region("A", hp.a.size()), hp.lda};
  cfg.b = {image.alloc_region("B", hp.b.size()), hp.ldb};
  cfg.c = {image.alloc_region("C", hp.c.size()), hp.ldc};
  image.copy_in(cfg.a.addr, hp.a);
  image.copy_in(cfg.b.addr, hp.b);
  image.copy_in(cfg.c.addr, hp.c);
  cfg.units = opt.units;
  cfg.ablation = opt.ablation;
  cfg.tiling = opt.tiling;
  cfg.queue_seed = opt.queue_seed;
  cfg.trace = opt.trace;
  RunReport rep = gemm(image, sys, cfg);
  c_out.assign(hp.c.size(), std::byte{0});
  image.copy_out(cfg.c.addr, c_out);
  return rep;
}

RunResult run_problem(const std::string& id, uint64_t m, uint64_t n, uint64_t k,
                      const SystemProfile& sys, const RunOptions& opt) {
  HostProblem hp = make_problem(opt.precision, opt.layout, m, n, k, opt.alpha, opt.beta);
  fill_random(hp, opt.seed);
  RunResult r;
  r.id = id;
  r.m = m;
  r.n = n;
  r.k = k;
  r.precision = opt.precision;
  r.layout = opt.layout;
  r.alpha = opt.alpha;
  r.beta = opt.beta;
  r.seed = opt.seed;
  std::vector<std::byte> c;
  r.report = run_host_problem(hp, sys, opt, c);
  r.verdict = check_result(hp, c, opt.tolerance);
  if (opt.keep_c) r.c = std::move(c);
  return r;
}

std::vector<RunResult> run_workloads(const std::vector<WorkloadSpec>& table, uint64_t scale,
                                     const SystemProfile& sys, const RunOptions& opt) {
  std::vector<RunResult> out;
  uint64_t i = 0;
  for (const auto& w : table) {
    const WorkloadSpec s = scaled(w, scale);
    RunOptions o = opt;
    o.seed = opt.seed + i++;
    out.push_back(run_problem(s.id, s.m, s.n, s.k, sys, o));
  }
  return out;
}

std::vector<RunResult> run_irregular_sweep(const SystemProfile& sys, const RunOptions& opt,
                                           uint64_t k) {
  std::vector<RunResult> out;
  uint64_t i = 0;
  for (uint64_t m : kIrregularSizes)
    for (uint64_t n : kIrregularSizes) {
      RunOptions o = opt;
      o.seed = opt.seed + i++;
      out.push_back(run_problem("irr-" + std::to_string(m) + "x" + std::to_string(n), m, n, k, sys, o));
    }
  return out;
}

std::vector<RunResult> run_ablation(const WorkloadSpec& w, const SystemProfile& sys,
                                    const RunOptions& opt) {
  struct Row {
    const char* label;
    bool blocking, four_way, online;
  };
  static constexpr Row rows[] = {{"baseline", false, false, false},
                                 {"+blocking", true, false, false},
                                 {"+four-way", true, true, false},
                                 {"+online", true, true, true}};
  std::vector<RunResult> out;
  for (const Row& row : rows) {
    RunOptions o = opt;
    o.ablation.blocking = row.blocking;
    o.ablation.four_way = row.four_way;
    o.ablation.online_packing = row.online;
    RunResult r = run_problem(w.id, w.m, w.n, w.k, sys, o);
    r.ablation = row.label;
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace smegemm
