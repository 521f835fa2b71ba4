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

#include "isa_checks.hpp"

#include <cstring>
#include <random>
#include <sstream>
#include <vector>

#include "fp16.hpp"
#include "vsme.hpp"

namespace smegemm::testing {
namespace {

using Rng = std::mt19937_64;

void fail(IsaCheck& r, const std::string& what) {
  if (r.failures++ == 0) r.first_failure = what;
}

void randomize_z(Machine& m, unsigned reg, Rng& rng) {
  for (auto& b : m.z(reg)) b = static_cast<uint8_t>(rng());
}

// Finite random floats in [-4, 4] keep products and sums away from inf/nan.
float rand_f32(Rng& rng) { return static_cast<float>(static_cast<int64_t>(rng() % 2000001) - 1000000) * 4e-6f; }
double rand_f64(Rng& rng) { return static_cast<double>(static_cast<int64_t>(rng() % 2000001) - 1000000) * 4e-6; }
uint16_t rand_f16(Rng& rng) {
  for (;;) {
    const uint16_t h = static_cast<uint16_t>(rng());
    if (((h >> 10) & 0x1f) != 0x1f) return h;
  }
}

// Random lane-mask predicate over `lanes` elements, or none.
std::optional<unsigned> random_pred(Machine& m, unsigned reg, uint32_t lanes, uint32_t bits, Rng& rng) {
  if (rng() % 3 == 0) return std::nullopt;
  const uint64_t start = rng() % (lanes + 2), end = rng() % (lanes + 4);
  m.whilelt(reg, start, end, bits);
  return reg;
}

bool lane_on(const Machine& m, std::optional<unsigned> p, uint32_t eb, uint32_t lane) {
  return !p || m.p(*p).mask[size_t{lane} * eb] != 0;
}

std::vector<uint8_t> za_copy(const Machine& m) { return {m.za().begin(), m.za().end()}; }

// Compares every element of every tile of `bits` width other than `skip`.
bool others_unchanged(const Machine& m, const std::vector<uint8_t>& before, uint32_t bits, uint32_t skip) {
  const uint32_t eb = bits / 8, side = m.vl() / eb;
  for (uint32_t t = 0; t < TileView::count(bits); ++t) {
    if (t == skip) continue;
    for (uint32_t i = 0; i < side; ++i) {
      // Row i of tile t occupies ZA row i*eb + t.
      const size_t off = (size_t{i} * eb + t) * m.vl();
      if (std::memcmp(before.data() + off, m.za().data() + off, m.vl()) != 0) return false;
    }
  }
  return true;
}

}  // namespace

IsaCheck check_fmopa(uint64_t cases, uint64_t seed, uint32_t svl_bits) {
  IsaCheck r;
  Rng rng(seed);
  Machine m(MachineConfig{svl_bits, 0});
  for (uint64_t n = 0; n < cases; ++n, ++r.cases) {
    const int kind = static_cast<int>(rng() % 3);  // f32, f64, f16 widen
    const uint32_t bits = kind == 1 ? 64 : 32;
    const uint32_t eb = bits / 8, side = svl_bits / bits;
    const TileView t{bits, static_cast<uint32_t>(rng() % TileView::count(bits))};
    for (auto& b : m.za()) b = 0;
    for (uint32_t i = 0; i < side; ++i)
      for (uint32_t j = 0; j < side; ++j) {
        if (bits == 64) m.set_tile_elem<double>(t, i, j, rand_f64(rng));
        else m.set_tile_elem<float>(t, i, j, rand_f32(rng));
      }
    const unsigned za = static_cast<unsigned>(rng() % 32), zb = static_cast<unsigned>(rng() % 32);
    for (uint32_t l = 0; l < side; ++l) {
      if (kind == 0) { m.set_lane<float>(za, l, rand_f32(rng)); m.set_lane<float>(zb, l, rand_f32(rng)); }
      if (kind == 1) { m.set_lane<double>(za, l, rand_f64(rng)); m.set_lane<double>(zb, l, rand_f64(rng)); }
      if (kind == 2)
        for (uint32_t h = 0; h < 2; ++h) {
          m.set_lane<uint16_t>(za, 2 * l + h, rand_f16(rng));
          m.set_lane<uint16_t>(zb, 2 * l + h, rand_f16(rng));
        }
    }
    const auto pn = random_pred(m, 0, side, bits, rng);
    const auto pm = random_pred(m, 1, side, bits, rng);
    const std::vector<uint8_t> before = za_copy(m);
    std::vector<double> old(side * side);
    for (uint32_t i = 0; i < side; ++i)
      for (uint32_t j = 0; j < side; ++j)
        old[i * side + j] = bits == 64 ? m.tile_elem<double>(t, i, j) : m.tile_elem<float>(t, i, j);
    const Machine snap = m;
    const FmopaKind fk = kind == 0 ? FmopaKind::kF32 : kind == 1 ? FmopaKind::kF64 : FmopaKind::kF16Widen;
    m.fmopa(t, za, zb, fk, pn, pm);
    bool ok = others_unchanged(m, before, bits, t.index);
    for (uint32_t i = 0; i < side && ok; ++i)
      for (uint32_t j = 0; j < side && ok; ++j) {
        const bool on = lane_on(snap, pn, eb, i) && lane_on(snap, pm, eb, j);
        if (kind == 1) {
          const double want = on ? old[i * side + j] + snap.lane<double>(za, i) * snap.lane<double>(zb, j)
                                 : old[i * side + j];
          const double got = m.tile_elem<double>(t, i, j);
          ok = std::memcmp(&got, &want, 8) == 0;
        } else {
          float want = static_cast<float>(old[i * side + j]);
          if (on && kind == 0) want = want + snap.lane<float>(za, i) * snap.lane<float>(zb, j);
          if (on && kind == 2) {
            // Products of halves are exact in double and in float.
            const float p0 = static_cast<float>(static_cast<double>(half_to_float(snap.lane<uint16_t>(za, 2 * i))) *
                                                half_to_float(snap.lane<uint16_t>(zb, 2 * j)));
            const float p1 = static_cast<float>(static_cast<double>(half_to_float(snap.lane<uint16_t>(za, 2 * i + 1))) *
                                                half_to_float(snap.lane<uint16_t>(zb, 2 * j + 1)));
            want = want + (p0 + p1);
          }
          const float got = m.tile_elem<float>(t, i, j);
          ok = std::memcmp(&got, &want, 4) == 0;
        }
        if (!ok) {
          std::ostringstream os;
          os << "fmopa kind " << kind << " tile " << t.index << " (" << i << "," << j << ")";
          fail(r, os.str());
        }
      }
    if (ok && m.stats().flops == 0) fail(r, "fmopa flop counter not advanced");
  }
  return r;
}

IsaCheck check_smopa(uint64_t cases, uint64_t seed, uint32_t svl_bits) {
  IsaCheck r;
  Rng rng(seed);
  Machine m(MachineConfig{svl_bits, 0});
  for (uint64_t n = 0; n < cases; ++n, ++r.cases) {
    const int kind = static_cast<int>(rng() % 3);  // i8->32, i16->32, i16->64
    const uint32_t bits = kind == 2 ? 64 : 32;
    const uint32_t eb = bits / 8, side = svl_bits / bits;
    const uint32_t src_b = kind == 0 ? 1 : 2, depth = eb / src_b;
    const TileView t{bits, static_cast<uint32_t>(rng() % TileView::count(bits))};
    for (auto& b : m.za()) b = static_cast<uint8_t>(rng());
    const unsigned za = static_cast<unsigned>(rng() % 32), zb = static_cast<unsigned>(rng() % 32);
    randomize_z(m, za, rng);
    randomize_z(m, zb, rng);
    const auto pn = random_pred(m, 2, side, bits, rng);
    const auto pm = random_pred(m, 3, side, bits, rng);
    const std::vector<uint8_t> before = za_copy(m);
    const Machine snap = m;
    const SmopaKind sk = kind == 0 ? SmopaKind::kI8Widen : kind == 1 ? SmopaKind::kI16Widen32 : SmopaKind::kI16Widen64;
    m.smopa(t, za, zb, sk, pn, pm);
    auto src = [&](unsigned reg, uint32_t idx) -> int64_t {
      return src_b == 1 ? snap.lane<int8_t>(reg, idx) : snap.lane<int16_t>(reg, idx);
    };
    bool ok = others_unchanged(m, before, bits, t.index);
    for (uint32_t i = 0; i < side && ok; ++i)
      for (uint32_t j = 0; j < side && ok; ++j) {
        int64_t dot = 0;
        for (uint32_t k = 0; k < depth; ++k) dot += src(za, depth * i + k) * src(zb, depth * j + k);
        const bool on = lane_on(snap, pn, eb, i) && lane_on(snap, pm, eb, j);
        if (bits == 32) {
          const uint32_t want = snap.tile_elem<uint32_t>(t, i, j) + (on ? static_cast<uint32_t>(dot) : 0u);
          ok = m.tile_elem<uint32_t>(t, i, j) == want;
        } else {
          const uint64_t want = snap.tile_elem<uint64_t>(t, i, j) + (on ? static_cast<uint64_t>(dot) : 0u);
          ok = m.tile_elem<uint64_t>(t, i, j) == want;
        }
        if (!ok) {
          std::ostringstream os;
          os << "smopa kind " << kind << " tile " << t.index << " (" << i << "," << j << ")";
          fail(r, os.str());
        }
      }
  }
  return r;
}

IsaCheck check_zip(uint64_t cases, uint64_t seed, uint32_t svl_bits) {
  IsaCheck r;
  Rng rng(seed);
  Machine m(MachineConfig{svl_bits, 0});
  const uint32_t vl = svl_bits / 8;
  for (uint64_t n = 0; n < cases; ++n, ++r.cases) {
    const uint32_t eb = 1u << (rng() % 4), lanes = vl / eb;
    const unsigned a = static_cast<unsigned>(rng() % 32), b = static_cast<unsigned>(rng() % 32);
    const unsigned d = static_cast<unsigned>(rng() % 31);
    for (unsigned reg = 0; reg < 32; ++reg) randomize_z(m, reg, rng);
    const std::vector<uint8_t> va(m.z(a).begin(), m.z(a).end()), vb(m.z(b).begin(), m.z(b).end());
    m.zip(d, a, b, eb * 8);
    bool ok = true;
    for (uint32_t k = 0; k < lanes && ok; ++k) {
      // Output lane k of the register pair comes from source lane k/2 of a or b.
      const uint32_t src_lane = k / 2;
      const auto& src = (k % 2 == 0) ? va : vb;
      ok = std::memcmp(m.z(d).data() + k * eb, src.data() + src_lane * eb, eb) == 0 &&
           std::memcmp(m.z(d + 1).data() + k * eb, src.data() + (lanes / 2 + src_lane) * eb, eb) == 0;
    }
    if (!ok) fail(r, "zip eb " + std::to_string(eb));
  }
  return r;
}

IsaCheck check_mova(uint64_t cases, uint64_t seed, uint32_t svl_bits) {
  IsaCheck r;
  Rng rng(seed);
  Machine m(MachineConfig{svl_bits, 0});
  for (uint64_t n = 0; n < cases; ++n, ++r.cases) {
    const uint32_t bits = 8u << (rng() % 4), eb = bits / 8, side = svl_bits / bits;
    const TileView t{bits, static_cast<uint32_t>(rng() % TileView::count(bits))};
    const unsigned count = 1u << (rng() % 3);
    if (count > side) continue;
    const unsigned slice = static_cast<unsigned>(rng() % (side - count + 1));
    const unsigned reg = static_cast<unsigned>(rng() % (32 - count + 1));
    const Orientation o = rng() % 2 ? Orientation::kHorizontal : Orientation::kVertical;
    const bool to_tile = rng() % 2;
    for (auto& b : m.za()) b = static_cast<uint8_t>(rng());
    for (unsigned z = 0; z < 32; ++z) randomize_z(m, z, rng);
    const auto p = random_pred(m, 4, side, bits, rng);
    const Machine snap = m;
    if (to_tile) m.mova_to_tile(t, slice, o, reg, count, p);
    else m.mova_to_regs(t, slice, o, reg, count, p);
    auto elem_off = [&](uint32_t row, uint32_t col) { return (size_t{row} * eb + t.index) * m.vl() + size_t{col} * eb; };
    bool ok = true;
    for (unsigned s = 0; s < count && ok; ++s)
      for (uint32_t k = 0; k < side && ok; ++k) {
        const size_t za_off = o == Orientation::kHorizontal ? elem_off(slice + s, k) : elem_off(k, slice + s);
        const uint8_t* zr = m.z(reg + s).data() + size_t{k} * eb;
        const uint8_t* zr_old = snap.z(reg + s).data() + size_t{k} * eb;
        const uint8_t* zt = m.za().data() + za_off;
        const uint8_t* zt_old = snap.za().data() + za_off;
        const bool on = lane_on(snap, p, eb, k);
        if (to_tile) ok = std::memcmp(zt, on ? zr_old : zt_old, eb) == 0;
        else ok = std::memcmp(zr, on ? zt_old : zr_old, eb) == 0;
      }
    // Nothing outside the moved slices changes.
    if (ok && to_tile) {
      size_t changed = 0;
      for (size_t i = 0; i < m.za().size(); ++i) changed += m.za()[i] != snap.za()[i];
      ok = changed <= size_t{count} * side * eb;
      for (unsigned z = 0; z < 32 && ok; ++z) ok = std::memcmp(m.z(z).data(), snap.z(z).data(), m.vl()) == 0;
    } else if (ok) {
      ok = std::memcmp(m.za().data(), snap.za().data(), m.za().size()) == 0;
      for (unsigned z = 0; z < 32 && ok; ++z)
        if (z < reg || z >= reg + count) ok = std::memcmp(m.z(z).data(), snap.z(z).data(), m.vl()) == 0;
    }
    if (!ok) {
      std::ostringstream os;
      os << "mova " << (to_tile ? "to tile" : "to regs") << " bits " << bits << " slice " << slice << " x" << count;
      fail(r, os.str());
    }
  }
  return r;
}

IsaCheck check_whilelt(uint64_t cases, uint64_t seed, uint32_t svl_bits) {
  IsaCheck r;
  Rng rng(seed);
  Machine m(MachineConfig{svl_bits, 0});
  for (uint64_t n = 0; n < cases; ++n, ++r.cases) {
    const uint32_t bits = 8u << (rng() % 4), eb = bits / 8, lanes = svl_bits / bits;
    const uint64_t start = rng() % 300, end = rng() % 300;
    const unsigned pd = static_cast<unsigned>(rng() % 16);
    const PredicateReg& p = m.whilelt(pd, start, end, bits);
    bool ok = !p.count && p.mask.size() == svl_bits / 8;
    for (uint32_t k = 0; k < lanes && ok; ++k) {
      ok = (p.mask[size_t{k} * eb] != 0) == (start + k < end);
      for (uint32_t g = 1; g < eb && ok; ++g) ok = p.mask[size_t{k} * eb + g] == 0;
    }
    // Counter form spanning a register group.
    const unsigned group = 1u << (rng() % 3);
    const PredicateReg& pc = m.whilelt_pn(8 + static_cast<unsigned>(rng() % 8), start, end, bits, group);
    const uint64_t want = end > start ? std::min<uint64_t>(end - start, uint64_t{lanes} * group) : 0;
    ok = ok && pc.count && *pc.count == want;
    if (!ok) fail(r, "whilelt(" + std::to_string(start) + "," + std::to_string(end) + ") bits " + std::to_string(bits));
  }
  return r;
}

IsaCheck check_ld_st(uint64_t cases, uint64_t seed, uint32_t svl_bits) {
  IsaCheck r;
  Rng rng(seed);
  Machine m(MachineConfig{svl_bits, 0});
  MemoryImage img;
  const uint64_t bytes = 8192;
  const uint64_t base = img.alloc_region("buf", bytes);
  CacheSim cache;
  const MemPort port{&img, &cache};
  const uint32_t vl = svl_bits / 8;
  for (uint64_t n = 0; n < cases; ++n, ++r.cases) {
    const uint32_t bits = 8u << (rng() % 4), eb = bits / 8, lanes = vl / eb;
    const unsigned group = 1u << (rng() % 3);
    const unsigned reg = static_cast<unsigned>(rng() % (32 - group + 1));
    const uint64_t addr = base + (rng() % (bytes - 4 * vl));
    for (uint64_t i = 0; i < bytes; ++i) img.ptr(base)[i] = static_cast<uint8_t>(rng());
    for (unsigned z = 0; z < 32; ++z) randomize_z(m, z, rng);
    std::optional<unsigned> pred;
    uint64_t active_n = uint64_t{group} * lanes;
    if (rng() % 2) {
      const uint64_t s = rng() % 8, e = rng() % (group * lanes + 8);
      m.whilelt_pn(8, s, e, bits, group);
      active_n = e > s ? std::min<uint64_t>(e - s, active_n) : 0;
      pred = 8;
    } else if (group == 1 && rng() % 2) {
      m.whilelt(5, rng() % 4, rng() % (lanes + 4), bits);
      pred = 5;
    }
    const Machine snap = m;
    const std::vector<uint8_t> mem_before(img.ptr(base), img.ptr(base) + bytes);
    const bool store = rng() % 2;
    if (store) m.st_multi(port, addr, group, reg, bits, pred);
    else m.ld_multi(port, addr, group, reg, bits, pred);
    bool ok = true;
    for (unsigned g = 0; g < group && ok; ++g)
      for (uint32_t k = 0; k < lanes && ok; ++k) {
        const uint64_t idx = uint64_t{g} * lanes + k;
        bool on;
        if (!pred) on = true;
        else if (*pred == 8) on = idx < active_n;
        else on = snap.p(5).mask[size_t{k} * eb] != 0;
        const uint8_t* mem = img.ptr(addr) + idx * eb;
        const uint8_t* mem_old = mem_before.data() + (addr - base) + idx * eb;
        const uint8_t* zr = m.z(reg + g).data() + size_t{k} * eb;
        const uint8_t* zr_old = snap.z(reg + g).data() + size_t{k} * eb;
        static const uint8_t zeros[8] = {};
        if (store) ok = std::memcmp(mem, on ? zr_old : mem_old, eb) == 0;
        else ok = std::memcmp(zr, on ? mem_old : zeros, eb) == 0;
      }
    if (!ok) fail(r, std::string(store ? "st" : "ld") + " group " + std::to_string(group) + " bits " + std::to_string(bits));
  }
  return r;
}

}  // namespace smegemm::testing
