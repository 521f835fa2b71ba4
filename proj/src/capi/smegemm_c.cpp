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

#include "smegemm/smegemm.h"

#include <cstring>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "profile.hpp"
#include "report.hpp"
#include "workloads.hpp"

using namespace smegemm;

struct smg_context {
  SystemProfile sys;
  std::string text;  // last returned string
};

struct smg_report {
  std::vector<RunResult> runs;
  nlohmann::json json;
  std::string json_text;
  std::string table_text;
};

namespace {

thread_local std::string g_error;

template <typename F>
smg_status guarded(F&& f) {
  try {
    f();
    g_error.clear();
    return SMG_OK;
  } catch (const UsageError& e) {
    g_error = e.what();
    return SMG_ERR_USAGE;
  } catch (const FaultError& e) {
    g_error = e.what();
    return SMG_ERR_FAULT;
  } catch (const PlannerError& e) {
    g_error = e.what();
    return SMG_ERR_PLANNER;
  } catch (const std::exception& e) {
    g_error = e.what();
    return SMG_ERR_INTERNAL;
  } catch (...) {
    g_error = "unknown error";
    return SMG_ERR_INTERNAL;
  }
}

void require(bool cond, const char* what) {
  if (!cond) throw UsageError(what);
}

Precision precision_of(smg_dtype d) {
  switch (d) {
    case SMG_F32: return Precision::kF32;
    case SMG_F64: return Precision::kF64;
    case SMG_F16: return Precision::kF16F32;
    case SMG_I8: return Precision::kI8I32;
  }
  throw UsageError("unknown dtype");
}

// Keeps the trace stream alive for the duration of one call.
struct Resolved {
  RunOptions opt;
  std::unique_ptr<std::ofstream> trace;
};

Resolved resolve(const smg_options* o) {
  require(o != nullptr, "options must not be NULL");
  Resolved r;
  r.opt.precision = precision_of(o->dtype);
  require(o->layout == SMG_ROW_MAJOR || o->layout == SMG_COL_MAJOR, "unknown layout");
  r.opt.layout = o->layout == SMG_ROW_MAJOR ? Layout::kRowMajor : Layout::kColMajor;
  r.opt.alpha = o->alpha;
  r.opt.beta = o->beta;
  r.opt.units = o->units;
  r.opt.ablation.blocking = o->blocking != 0;
  r.opt.ablation.four_way = o->four_way_loads != 0;
  r.opt.ablation.online_packing = o->online_packing != 0;
  r.opt.ablation.edge_kernel = o->edge_kernel != 0;
  r.opt.seed = o->seed;
  r.opt.queue_seed = o->queue_seed;
  r.opt.tolerance = o->tolerance;
  if (o->mc || o->nc || o->kc) {
    require(o->mc && o->nc && o->kc, "tiling override needs mc, nc and kc");
    const MicroTile mt = micro_tile_shape(r.opt.precision, 512, Layout::kRowMajor);
    r.opt.tiling = TilingParams{o->mc, o->nc, o->kc, mt.mr, mt.nr};
  }
  if (o->trace_path) {
    r.trace = std::make_unique<std::ofstream>(o->trace_path);
    if (!*r.trace) throw UsageError(std::string("cannot open trace file '") + o->trace_path + "'");
    r.opt.trace = r.trace.get();
  }
  return r;
}

// The override's micro-tile must follow the context's vector length.
void fix_tiling(RunOptions& opt, const SystemProfile& sys) {
  if (!opt.tiling) return;
  const MicroTile mt = micro_tile_shape(opt.precision, sys.svl_bits, Layout::kRowMajor);
  opt.tiling->mr = mt.mr;
  opt.tiling->nr = mt.nr;
}

smg_report* make_report(std::vector<RunResult> runs) {
  auto* r = new smg_report;
  r->runs = std::move(runs);
  r->json = to_json(r->runs);
  return r;
}

std::vector<WorkloadSpec> table_for(const char* path) {
  return path ? load_workload_table(path) : builtin_workloads();
}

}  // namespace

extern "C" {

const char* smg_version(void) { return "0.1.0"; }
const char* smg_last_error(void) { return g_error.c_str(); }

const char* smg_status_name(smg_status s) {
  switch (s) {
    case SMG_OK: return "ok";
    case SMG_ERR_USAGE: return "usage error";
    case SMG_ERR_FAULT: return "memory fault";
    case SMG_ERR_PLANNER: return "planner error";
    case SMG_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void smg_options_init(smg_options* opt) {
  if (!opt) return;
  std::memset(opt, 0, sizeof *opt);
  opt->dtype = SMG_F32;
  opt->layout = SMG_ROW_MAJOR;
  opt->alpha = 1.0;
  opt->beta = 0.0;
  opt->blocking = opt->four_way_loads = opt->online_packing = opt->edge_kernel = 1;
  opt->seed = 1;
  opt->tolerance = -1.0;
}

smg_status smg_parse_dtype(const char* name, smg_dtype* out) {
  return guarded([&] {
    require(name && out, "NULL argument");
    switch (parse_precision(name)) {
      case Precision::kF32: *out = SMG_F32; break;
      case Precision::kF64: *out = SMG_F64; break;
      case Precision::kF16F32: *out = SMG_F16; break;
      case Precision::kI8I32: *out = SMG_I8; break;
    }
  });
}

smg_status smg_parse_layout(const char* name, smg_layout* out) {
  return guarded([&] {
    require(name && out, "NULL argument");
    *out = parse_layout(name) == Layout::kRowMajor ? SMG_ROW_MAJOR : SMG_COL_MAJOR;
  });
}

smg_status smg_context_create(smg_context** out) {
  return guarded([&] {
    require(out != nullptr, "NULL argument");
    *out = new smg_context;
  });
}

void smg_context_destroy(smg_context* ctx) { delete ctx; }

smg_status smg_context_load_profile(smg_context* ctx, const char* path) {
  return guarded([&] {
    require(ctx && path, "NULL argument");
    ctx->sys = load_profile(path);
  });
}

smg_status smg_context_parse_profile(smg_context* ctx, const char* text) {
  return guarded([&] {
    require(ctx && text, "NULL argument");
    ctx->sys = parse_profile(text);
  });
}

const char* smg_context_profile_text(smg_context* ctx) {
  if (!ctx) return "";
  ctx->text = format_profile(ctx->sys);
  return ctx->text.c_str();
}

smg_status smg_run_shape(smg_context* ctx, const smg_options* opt, uint64_t m, uint64_t n,
                         uint64_t k, smg_report** out) {
  return guarded([&] {
    require(ctx && out, "NULL argument");
    Resolved r = resolve(opt);
    fix_tiling(r.opt, ctx->sys);
    const std::string id = std::to_string(m) + "x" + std::to_string(n) + "x" + std::to_string(k);
    *out = make_report({run_problem(id, m, n, k, ctx->sys, r.opt)});
  });
}

smg_status smg_run_workloads(smg_context* ctx, const smg_options* opt, const char* table_path,
                             const char* id, uint64_t scale, smg_report** out) {
  return guarded([&] {
    require(ctx && out, "NULL argument");
    Resolved r = resolve(opt);
    fix_tiling(r.opt, ctx->sys);
    std::vector<WorkloadSpec> table = table_for(table_path);
    if (id) table = {find_workload(table, id)};
    *out = make_report(run_workloads(table, scale, ctx->sys, r.opt));
  });
}

smg_status smg_run_irregular(smg_context* ctx, const smg_options* opt, uint64_t k,
                             smg_report** out) {
  return guarded([&] {
    require(ctx && out, "NULL argument");
    require(k > 0, "k must be positive");
    Resolved r = resolve(opt);
    fix_tiling(r.opt, ctx->sys);
    *out = make_report(run_irregular_sweep(ctx->sys, r.opt, k));
  });
}

smg_status smg_run_ablation(smg_context* ctx, const smg_options* opt, const char* table_path,
                            const char* id, uint64_t scale, smg_report** out) {
  return guarded([&] {
    require(ctx && out && id, "NULL argument");
    Resolved r = resolve(opt);
    fix_tiling(r.opt, ctx->sys);
    const auto table = table_for(table_path);
    *out = make_report(run_ablation(scaled(find_workload(table, id), scale), ctx->sys, r.opt));
  });
}

smg_status smg_gemm(smg_context* ctx, const smg_options* opt, uint64_t m, uint64_t n, uint64_t k,
                    const void* a, uint64_t lda, const void* b, uint64_t ldb, void* c, uint64_t ldc,
                    smg_report** out) {
  return guarded([&] {
    require(ctx && a && b && c, "NULL argument");
    Resolved r = resolve(opt);
    fix_tiling(r.opt, ctx->sys);
    HostProblem hp = make_problem(r.opt.precision, r.opt.layout, m, n, k, r.opt.alpha, r.opt.beta);
    const uint64_t lo_a = r.opt.layout == Layout::kRowMajor ? k : m;
    const uint64_t lo_b = r.opt.layout == Layout::kRowMajor ? n : k;
    const uint64_t lo_c = r.opt.layout == Layout::kRowMajor ? n : m;
    require(lda >= lo_a && ldb >= lo_b && ldc >= lo_c, "leading dimension too small");
    hp.lda = lda;
    hp.ldb = ldb;
    hp.ldc = ldc;
    const unsigned ib = input_bytes(hp.precision), ob = output_bytes(hp.precision);
    auto bytes = [](const void* p, uint64_t n) {
      const auto* s = static_cast<const std::byte*>(p);
      return std::vector<std::byte>(s, s + n);
    };
    hp.a = bytes(a, hp.a_elems() * ib);
    hp.b = bytes(b, hp.b_elems() * ib);
    hp.c = bytes(c, hp.c_elems() * ob);
    std::vector<std::byte> c_out;
    RunResult res;
    res.id = "gemm";
    res.m = m;
    res.n = n;
    res.k = k;
    res.precision = hp.precision;
    res.layout = hp.layout;
    res.alpha = hp.alpha;
    res.beta = hp.beta;
    res.report = run_host_problem(hp, ctx->sys, r.opt, c_out);
    res.verdict = check_result(hp, c_out, r.opt.tolerance);
    std::memcpy(c, c_out.data(), c_out.size());
    if (out) *out = make_report({std::move(res)});
  });
}

smg_status smg_plan(smg_context* ctx, smg_dtype dtype, uint64_t m, uint64_t n, uint64_t k,
                    uint64_t tiling[5]) {
  return guarded([&] {
    require(ctx && tiling, "NULL argument");
    require(m && n && k, "dimensions must be positive");
    const Precision p = precision_of(dtype);
    const TilingParams t = plan(ctx->sys.hardware(p), p, m, n, k);
    tiling[0] = t.mc;
    tiling[1] = t.nc;
    tiling[2] = t.kc;
    tiling[3] = t.mr;
    tiling[4] = t.nr;
  });
}

smg_status smg_explain(smg_context* ctx, smg_dtype dtype, const uint64_t tiling[5],
                       const char** text) {
  return guarded([&] {
    require(ctx && tiling && text, "NULL argument");
    const Precision p = precision_of(dtype);
    const TilingParams t{tiling[0], tiling[1], tiling[2], static_cast<uint32_t>(tiling[3]),
                         static_cast<uint32_t>(tiling[4])};
    ctx->text = explain(t, ctx->sys.hardware(p), k_unit(p));
    *text = ctx->text.c_str();
  });
}

size_t smg_report_count(const smg_report* r) { return r ? r->runs.size() : 0; }

int smg_report_all_passed(const smg_report* r) {
  if (!r) return 0;
  for (const auto& x : r->runs)
    if (!x.verdict.pass) return 0;
  return 1;
}

const char* smg_report_json(smg_report* r) {
  if (!r) return "";
  r->json_text = r->json.dump(2);
  return r->json_text.c_str();
}

const char* smg_report_table(smg_report* r) {
  if (!r) return "";
  std::ostringstream os;
  print_table(os, r->runs);
  r->table_text = os.str();
  return r->table_text.c_str();
}

smg_status smg_report_value(const smg_report* r, size_t index, const char* path, double* out) {
  return guarded([&] {
    require(r && path && out, "NULL argument");
    require(index < r->runs.size(), "run index out of range");
    const nlohmann::json* node = &r->json[index];
    std::string_view rest(path);
    while (!rest.empty()) {
      const auto dot = rest.find('.');
      const std::string key(rest.substr(0, dot));
      rest = dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
      require(node->is_object() && node->contains(key), "no such report field");
      node = &(*node)[key];
    }
    if (node->is_boolean())
      *out = node->get<bool>() ? 1.0 : 0.0;
    else if (node->is_number())
      *out = node->get<double>();
    else
      throw UsageError("report field is not numeric");
  });
}

void smg_report_destroy(smg_report* r) { delete r; }

}  // extern "C"
