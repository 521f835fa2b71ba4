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

#include "tiling.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

namespace smegemm {

void HardwareProfile::validate() const {
  if (l2_budget_bytes == 0 || tlb_entries == 0 || page_bytes == 0 || svl_bits == 0)
    throw PlannerError("hardware profile fields must be positive");
  if (dtype_size_bytes != 1 && dtype_size_bytes != 2 && dtype_size_bytes != 4 &&
      dtype_size_bytes != 8)
    throw PlannerError("dtype_size must be 1, 2, 4 or 8");
}

MicroTile micro_tile_shape(Precision p, uint32_t svl_bits, Layout layout) {
  const uint32_t side = svl_bits / (p == Precision::kF64 ? 64 : 32);
  return layout == Layout::kRowMajor ? MicroTile{side, 4 * side} : MicroTile{4 * side, side};
}

TlbDemand tlb_demand(const HardwareProfile& hw, uint32_t mr, uint32_t nr, uint64_t kc) {
  const uint64_t ds = hw.dtype_size_bytes;
  return {ceil_div(mr * kc * ds, hw.page_bytes) + 1, ceil_div(nr * kc * ds, hw.page_bytes) + 1,
          mr};
}

uint64_t l2_footprint_elems(uint64_t mc, uint64_t nc, uint64_t kc) {
  return mc * kc + kc * nc + mc * nc + kc * nc + mc * nc;
}

double cmr(uint64_t mc, uint64_t nc, uint64_t kc) {
  const double m = static_cast<double>(mc), n = static_cast<double>(nc),
               k = static_cast<double>(kc);
  return 2.0 * m * n * k / (m * k + k * n + 2.0 * m * n);
}

uint64_t solve_kc(const HardwareProfile& hw, uint32_t mr, uint32_t nr, uint32_t unit,
                  uint64_t kc_limit) {
  hw.validate();
  if (unit == 0 || kc_limit < unit) throw PlannerError("kc limit below one k unit");
  const auto fits = [&](uint64_t kc) { return tlb_demand(hw, mr, nr, kc).total() < hw.tlb_entries; };
  if (!fits(unit)) {
    std::ostringstream msg;
    msg << "tlb_entries constraint infeasible: " << hw.tlb_entries << " entries cannot cover "
        << tlb_demand(hw, mr, nr, unit).total() << " pages needed at kc=" << unit;
    throw PlannerError(msg.str());
  }
  // Demand is monotone in kc: gallop, then bisect on multiples of unit.
  uint64_t lo = 1, hi = 2;  // in units; lo fits
  const uint64_t max_units = kc_limit / unit;
  while (hi <= max_units && fits(hi * unit)) {
    lo = hi;
    hi *= 2;
  }
  hi = std::min(hi, max_units + 1);
  while (hi - lo > 1) {
    const uint64_t mid = lo + (hi - lo) / 2;
    (fits(mid * unit) ? lo : hi) = mid;
  }
  return lo * unit;
}

ContinuousOptimum continuous_optimum(const HardwareProfile& hw, uint64_t kc) {
  const double s = static_cast<double>(hw.budget_elems());
  const double k = static_cast<double>(kc);
  const double n_max = s / (2.0 * k);
  if (n_max <= 0) return {};
  const auto m_of = [&](double n) { return (s - 2.0 * n * k) / (k + 2.0 * n); };
  const auto f = [&](double n) {
    const double m = m_of(n);
    return n * n * (2.0 * k + 2.0 * m) - m * m * (k + 2.0 * n);
  };
  double lo = 0.0, hi = n_max;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0 ? lo : hi) = mid;
  }
  const double n = 0.5 * (lo + hi);
  const double m = m_of(n);
  return {m, n, 2.0 * m * n * k / (m * k + k * n + 2.0 * m * n)};
}

namespace {

// a/b > c/d for the exact rational CMR values.
bool cmr_greater(uint64_t m1, uint64_t n1, uint64_t m2, uint64_t n2, uint64_t k) {
  using u128 = unsigned __int128;
  const u128 num1 = u128{2} * m1 * n1 * k, den1 = u128{m1} * k + u128{k} * n1 + u128{2} * m1 * n1;
  const u128 num2 = u128{2} * m2 * n2 * k, den2 = u128{m2} * k + u128{k} * n2 + u128{2} * m2 * n2;
  // Values are small enough (< 2^40 each) that the products fit in 128 bits.
  return num1 * den2 > num2 * den1;
}

}  // namespace

std::pair<uint64_t, uint64_t> solve_mc_nc(const HardwareProfile& hw, uint64_t kc, uint32_t mr,
                                          uint32_t nr, uint64_t mc_cap, uint64_t nc_cap) {
  hw.validate();
  if (kc == 0 || mr == 0 || nr == 0) throw PlannerError("kc, mr and nr must be positive");
  const uint64_t s = hw.budget_elems();
  if (l2_footprint_elems(mr, nr, kc) >= s) {
    std::ostringstream msg;
    msg << "l2_footprint constraint infeasible: one " << mr << "x" << nr << "x" << kc
        << " cell needs " << l2_footprint_elems(mr, nr, kc) << " elements, budget is " << s;
    throw PlannerError(msg.str());
  }
  const uint64_t mc_limit = mc_cap ? std::max<uint64_t>(mc_cap / mr, 1) * mr : ~uint64_t{0};
  const uint64_t nc_limit = nc_cap ? std::max<uint64_t>(nc_cap / nr, 1) * nr : ~uint64_t{0};

  // The continuous optimum sits on the boundary, and for fixed mc the ratio
  // grows with nc, so the grid optimum lies on the projection
  // mc -> largest feasible nc. Walk that projection exactly.
  uint64_t best_m = 0, best_n = 0;
  for (uint64_t mc = mr; mc <= mc_limit; mc += mr) {
    if (mc * kc + 2 * mc * nr + 2 * kc * nr >= s) break;
    // mc*kc + nc*(2kc + 2mc) < s
    uint64_t nc = (s - mc * kc - 1) / (2 * kc + 2 * mc) / nr * nr;
    nc = std::min(nc, nc_limit);
    if (nc < nr) break;
    if (best_m == 0 || cmr_greater(mc, nc, best_m, best_n, kc) ||
        (!cmr_greater(best_m, best_n, mc, nc, kc) && nc > best_n)) {
      best_m = mc;
      best_n = nc;
    }
  }
  return {best_m, best_n};
}

std::vector<Violation> validate(const TilingParams& t, const HardwareProfile& hw, uint32_t unit) {
  std::vector<Violation> out;
  if (t.mr == 0 || t.nr == 0 || t.mc == 0 || t.nc == 0 || t.kc == 0 || t.mc % t.mr != 0 ||
      t.nc % t.nr != 0 || (unit && t.kc % unit != 0)) {
    std::ostringstream d;
    d << "mc=" << t.mc << " nc=" << t.nc << " kc=" << t.kc << " must be positive multiples of mr="
      << t.mr << ", nr=" << t.nr << ", k_unit=" << unit;
    out.push_back({"divisibility", d.str()});
  }
  const uint64_t foot = l2_footprint_elems(t.mc, t.nc, t.kc);
  if (foot >= hw.budget_elems()) {
    std::ostringstream d;
    d << "footprint " << foot << " elements >= budget " << hw.budget_elems();
    out.push_back({"l2_footprint", d.str()});
  }
  const TlbDemand tlb = tlb_demand(hw, t.mr, t.nr, t.kc);
  if (tlb.total() >= hw.tlb_entries) {
    std::ostringstream d;
    d << "Ta + 2Tb + Tc = " << tlb.a_pages << " + 2*" << tlb.b_pages << " + " << tlb.c_pages
      << " = " << tlb.total() << " >= " << hw.tlb_entries << " entries";
    out.push_back({"tlb_entries", d.str()});
  }
  return out;
}

TilingParams plan(const HardwareProfile& hw, Precision p, uint64_t m, uint64_t n, uint64_t k) {
  const MicroTile mt = micro_tile_shape(p, hw.svl_bits, Layout::kRowMajor);
  const uint32_t unit = k_unit(p);
  uint64_t kc = solve_kc(hw, mt.mr, mt.nr, unit);
  kc = std::min<uint64_t>(kc, round_up(std::max<uint64_t>(k, 1), unit));
  const auto [mc, nc] = solve_mc_nc(hw, kc, mt.mr, mt.nr, round_up(std::max<uint64_t>(m, 1), mt.mr),
                                    round_up(std::max<uint64_t>(n, 1), mt.nr));
  return {mc, nc, kc, mt.mr, mt.nr};
}

std::string explain(const TilingParams& t, const HardwareProfile& hw, uint32_t unit) {
  std::ostringstream os;
  const uint64_t foot = l2_footprint_elems(t.mc, t.nc, t.kc);
  const TlbDemand tlb = tlb_demand(hw, t.mr, t.nr, t.kc);
  os << "tiling        mc=" << t.mc << " nc=" << t.nc << " kc=" << t.kc << " mr=" << t.mr
     << " nr=" << t.nr << " (k_unit " << unit << ")\n";
  os << "l2 footprint  " << foot << " < " << hw.budget_elems() << " elements (slack "
     << static_cast<int64_t>(hw.budget_elems()) - static_cast<int64_t>(foot) << ")\n";
  os << "tlb demand    " << tlb.a_pages << " + 2*" << tlb.b_pages << " + " << tlb.c_pages << " = "
     << tlb.total() << " < " << hw.tlb_entries << " entries (slack "
     << static_cast<int64_t>(hw.tlb_entries) - static_cast<int64_t>(tlb.total()) << ")\n";
  const ContinuousOptimum c = continuous_optimum(hw, t.kc);
  os << "cmr           " << cmr(t.mc, t.nc, t.kc) << " (continuous optimum " << c.cmr << " at mc="
     << c.mc << " nc=" << c.nc << ")\n";
  const auto v = validate(t, hw, unit);
  os << "verdict       " << (v.empty() ? "ok" : "VIOLATED") << '\n';
  for (const auto& x : v) os << "  " << x.constraint << ": " << x.detail << '\n';
  return os.str();
}

}  // namespace smegemm
