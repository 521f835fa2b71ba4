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

// Workload runner: the built-in workload table, the irregular sweep, ablations and
// single shapes on the simulated SME machine. Talks to the library only
// through its C interface.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "smegemm/smegemm.h"

namespace {

struct Failure {
  smg_status status;
};

void check(smg_status s) {
  if (s != SMG_OK) {
    std::cerr << "smegemm: " << smg_status_name(s) << ": " << smg_last_error() << '\n';
    throw Failure{s};
  }
}

bool parse_shape(const std::string& s, uint64_t& m, uint64_t& n, uint64_t& k) {
  char x1 = 0, x2 = 0;
  std::istringstream in(s);
  if (!(in >> m >> x1 >> n >> x2 >> k) || x1 != 'x' || x2 != 'x' || !m || !n || !k) return false;
  std::string rest;
  return !(in >> rest);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blocked multi-precision GEMM on a simulated SME machine"};
  app.set_version_flag("--version", smg_version());

  std::string workload, table, shape, profile, dtype = "f32", layout = "row", trace, report_path;
  std::string tiling;
  std::vector<std::string> disabled;
  uint64_t scale = 16, seed = 1, queue_seed = 0, sweep_k = 2560;
  uint32_t units = 0;
  double alpha = 1.0, beta = 0.0, tolerance = -1.0;
  bool sweep = false, ablate = false, explain = false, quiet = false;

  app.add_option("--workload", workload, "Workload id from the table, or 'all'");
  app.add_option("--table", table, "Workload table file (`id M N K` per line) instead of the built-in one")
      ->check(CLI::ExistingFile);
  app.add_option("--shape", shape, "Single problem MxNxK, e.g. 100x70x130");
  app.add_option("--scale", scale, "Divide workload dimensions by this (rounded up)")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--dtype", dtype, "f32 | f64 | f16 | i8")->capture_default_str();
  app.add_option("--layout", layout, "row | col")->capture_default_str();
  app.add_option("--alpha", alpha)->capture_default_str();
  app.add_option("--beta", beta)->capture_default_str();
  app.add_option("--units", units, "Simulated SME units (0: profile default)");
  app.add_option("--profile", profile, "Hardware profile file")->check(CLI::ExistingFile);
  app.add_flag("--ablate", ablate, "Run the four-row optimisation breakdown for --workload");
  app.add_option("--disable", disabled, "Switch off: blocking, four-way, online, edge")
      ->check(CLI::IsMember({"blocking", "four-way", "online", "edge"}))
      ->delimiter(',');
  app.add_flag("--sweep-irregular", sweep, "M, N in {80..200 step 30}");
  app.add_option("--sweep-k", sweep_k, "K of the irregular sweep")->capture_default_str();
  app.add_option("--seed", seed, "Input initialisation seed")->capture_default_str();
  app.add_option("--queue-seed", queue_seed, "Shuffle the parallel task queue (0: off)");
  app.add_option("--tolerance", tolerance, "Relative tolerance (default per precision)");
  app.add_option("--tiling", tiling, "Override as mc,nc,kc");
  app.add_option("--trace", trace, "Write the instruction trace of unit 0 to this file");
  app.add_option("--report", report_path, "JSON report file")->default_val("smegemm-report.json");
  app.add_flag("--explain", explain, "Print the planner's tiling and constraint slack, do not run");
  app.add_flag("-q,--quiet", quiet, "No table on standard output");

  CLI11_PARSE(app, argc, argv);

  smg_context* ctx = nullptr;
  smg_report* rep = nullptr;
  int code = 0;
  try {
    check(smg_context_create(&ctx));
    if (!profile.empty()) check(smg_context_load_profile(ctx, profile.c_str()));

    smg_options opt;
    smg_options_init(&opt);
    check(smg_parse_dtype(dtype.c_str(), &opt.dtype));
    check(smg_parse_layout(layout.c_str(), &opt.layout));
    opt.alpha = alpha;
    opt.beta = beta;
    opt.units = units;
    opt.seed = seed;
    opt.queue_seed = queue_seed;
    opt.tolerance = tolerance;
    for (const auto& d : disabled) {
      if (d == "blocking") opt.blocking = 0;
      if (d == "four-way") opt.four_way_loads = 0;
      if (d == "online") opt.online_packing = 0;
      if (d == "edge") opt.edge_kernel = 0;
    }
    if (!tiling.empty()) {
      char c1 = 0, c2 = 0;
      std::istringstream in(tiling);
      if (!(in >> opt.mc >> c1 >> opt.nc >> c2 >> opt.kc) || c1 != ',' || c2 != ',') {
        std::cerr << "smegemm: --tiling expects mc,nc,kc\n";
        return 2;
      }
    }
    if (!trace.empty()) opt.trace_path = trace.c_str();

    const int modes = !shape.empty() + sweep + ablate;
    if (modes > 1 || (!shape.empty() && !workload.empty())) {
      std::cerr << "smegemm: choose one of --shape, --workload, --sweep-irregular, --ablate\n";
      return 2;
    }
    const char* table_arg = table.empty() ? nullptr : table.c_str();

    if (explain) {
      uint64_t m = 0, n = 0, k = 0;
      if (shape.empty() || !parse_shape(shape, m, n, k)) {
        std::cerr << "smegemm: --explain needs --shape MxNxK\n";
        return 2;
      }
      uint64_t t[5];
      if (opt.layout == SMG_COL_MAJOR) std::swap(m, n);
      check(smg_plan(ctx, opt.dtype, m, n, k, t));
      if (opt.mc) {
        t[0] = opt.mc;
        t[1] = opt.nc;
        t[2] = opt.kc;
      }
      const char* text = nullptr;
      check(smg_explain(ctx, opt.dtype, t, &text));
      std::cout << text;
      smg_context_destroy(ctx);
      return 0;
    }

    if (!shape.empty()) {
      uint64_t m, n, k;
      if (!parse_shape(shape, m, n, k)) {
        std::cerr << "smegemm: --shape expects MxNxK with positive sizes\n";
        return 2;
      }
      check(smg_run_shape(ctx, &opt, m, n, k, &rep));
    } else if (sweep) {
      check(smg_run_irregular(ctx, &opt, sweep_k, &rep));
    } else if (ablate) {
      if (workload.empty() || workload == "all") {
        std::cerr << "smegemm: --ablate needs a single --workload id\n";
        return 2;
      }
      check(smg_run_ablation(ctx, &opt, table_arg, workload.c_str(), scale, &rep));
    } else {
      const char* id = workload.empty() || workload == "all" ? nullptr : workload.c_str();
      check(smg_run_workloads(ctx, &opt, table_arg, id, scale, &rep));
    }

    if (!quiet) std::cout << smg_report_table(rep);
    if (!report_path.empty()) {
      std::ofstream out(report_path);
      if (!out) {
        std::cerr << "smegemm: cannot write report '" << report_path << "'\n";
        code = 2;
      } else {
        out << smg_report_json(rep) << '\n';
      }
    }
    if (!smg_report_all_passed(rep)) {
      std::cerr << "smegemm: verification FAILED\n";
      code = 1;
    }
  } catch (const Failure&) {
    code = 2;
  }
  smg_report_destroy(rep);
  smg_context_destroy(ctx);
  return code;
}
