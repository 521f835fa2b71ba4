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

#include "report.hpp"

#include <cstdio>
#include <iomanip>

namespace smegemm {

using nlohmann::json;

json to_json(const TilingParams& t) {
  return {{"mc", t.mc}, {"nc", t.nc}, {"kc", t.kc}, {"mr", t.mr}, {"nr", t.nr}};
}

json to_json(const MemStats& s) {
  return {{"l2_hits", s.l2_hits},     {"l2_misses", s.l2_misses},   {"tlb_hits", s.tlb_hits},
          {"tlb_misses", s.tlb_misses}, {"bytes_read", s.bytes_read}, {"bytes_written", s.bytes_written}};
}

json to_json(const InstrStats& s) {
  json j;
  j["loads_by_group"] = {{"1", s.loads_by_group[1]}, {"2", s.loads_by_group[2]}, {"4", s.loads_by_group[4]}};
  j["stores_by_group"] = {{"1", s.stores_by_group[1]}, {"2", s.stores_by_group[2]}, {"4", s.stores_by_group[4]}};
  j["fmopa_f32"] = s.fmopa_f32;
  j["fmopa_f64"] = s.fmopa_f64;
  j["fmopa_f16"] = s.fmopa_f16;
  j["fmopa_bf16"] = s.fmopa_bf16;
  j["smopa_i8"] = s.smopa_i8;
  j["smopa_i16"] = s.smopa_i16;
  j["slice_moves"] = s.slice_moves;
  j["zips"] = s.zips;
  j["zero_za"] = s.zero_za;
  j["vector_alu"] = s.vector_alu;
  j["bytes_loaded"] = s.bytes_loaded;
  j["bytes_stored"] = s.bytes_stored;
  j["flops"] = s.flops;
  j["int_ops"] = s.int_ops;
  j["main_kernel_calls"] = s.main_kernel_calls;
  j["edge_kernel_calls"] = s.edge_kernel_calls;
  auto hist = [](const auto& h) {
    json o = json::object();
    for (size_t i = 0; i < h.size(); ++i)
      if (h[i]) o[std::to_string(i)] = h[i];
    return o;
  };
  j["main_tiles_touched"] = hist(s.main_tiles_touched);
  j["edge_tiles_touched"] = hist(s.edge_tiles_touched);
  return j;
}

double four_way_fraction(const InstrStats& s) {
  const uint64_t total = s.total_loads();
  return total ? static_cast<double>(s.loads_by_group[4]) / static_cast<double>(total) : 0.0;
}

json to_json(const RunResult& r) {
  const RunReport& rep = r.report;
  json j;
  j["id"] = r.id;
  j["M"] = r.m;
  j["N"] = r.n;
  j["K"] = r.k;
  j["dtype"] = std::string(to_string(r.precision));
  j["layout"] = std::string(to_string(r.layout));
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  j["seed"] = r.seed;
  j["ablation"] = r.ablation.empty() ? "none" : r.ablation;
  j["units"] = rep.units;
  j["tiling"] = to_json(rep.tiling);
  j["tiling"]["k_unit"] = rep.k_unit;
  j["mem"] = to_json(rep.mem);
  j["instr"] = to_json(rep.instr);
  j["four_way_load_fraction"] = four_way_fraction(rep.instr);
  j["footprint_bytes"] = rep.footprint_bytes;
  j["working_set_bytes"] = rep.working_set_bytes;
  j["tasks"] = rep.tasks.size();
  j["verdict"] = {{"pass", r.verdict.pass},
                  {"max_rel_err", r.verdict.max_rel_err},
                  {"tolerance", r.verdict.tolerance},
                  {"failures", r.verdict.failures}};
  j["wall_ms"] = rep.wall_ms;
  return j;
}

json to_json(const std::vector<RunResult>& rs) {
  json a = json::array();
  for (const auto& r : rs) a.push_back(to_json(r));
  return a;
}

json strip_timing(json j) {
  if (j.is_array()) {
    for (auto& e : j) e = strip_timing(std::move(e));
  } else if (j.is_object()) {
    j.erase("wall_ms");
  }
  return j;
}

void print_table(std::ostream& os, const std::vector<RunResult>& rs) {
  char line[256];
  std::snprintf(line, sizeof line, "%-10s %-10s %6s %6s %6s %5s %4s %12s %12s %12s %8s %10s  %s\n",
                "id", "ablation", "M", "N", "K", "dtype", "lay", "l2_miss", "tlb_miss", "fmopa",
                "ld4_frac", "max_err", "verdict");
  os << line;
  for (const auto& r : rs) {
    const InstrStats& s = r.report.instr;
    const uint64_t mopa = s.fmopa_f32 + s.fmopa_f64 + s.fmopa_f16 + s.fmopa_bf16 + s.smopa_i8 + s.smopa_i16;
    std::snprintf(line, sizeof line,
                  "%-10s %-10s %6llu %6llu %6llu %5s %4s %12llu %12llu %12llu %8.3f %10.3g  %s\n",
                  r.id.c_str(), r.ablation.empty() ? "-" : r.ablation.c_str(),
                  static_cast<unsigned long long>(r.m), static_cast<unsigned long long>(r.n),
                  static_cast<unsigned long long>(r.k), to_string(r.precision).data(),
                  to_string(r.layout).data(), static_cast<unsigned long long>(r.report.mem.l2_misses),
                  static_cast<unsigned long long>(r.report.mem.tlb_misses),
                  static_cast<unsigned long long>(mopa), four_way_fraction(s), r.verdict.max_rel_err,
                  r.verdict.pass ? "PASS" : "FAIL");
    os << line;
  }
}

}  // namespace smegemm
