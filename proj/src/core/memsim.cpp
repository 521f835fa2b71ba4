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

#include "memsim.hpp"

#include <algorithm>
#include <bit>
#include <sstream>

namespace smegemm {

void CacheConfig::validate() const {
  if (line_bytes == 0 || !std::has_single_bit(line_bytes))
    throw UsageError("cache line size must be a power of two");
  if (associativity == 0) throw UsageError("cache associativity must be >= 1");
  const uint64_t way_bytes = uint64_t{line_bytes} * associativity;
  if (capacity_bytes == 0 || capacity_bytes % way_bytes != 0)
    throw UsageError("cache capacity must be a multiple of line_bytes * associativity");
  if (!std::has_single_bit(set_count()))
    throw UsageError("cache set count must be a power of two");
}

void TlbConfig::validate() const {
  if (page_bytes == 0 || !std::has_single_bit(page_bytes))
    throw UsageError("page size must be a power of two");
  if (entry_count == 0) throw UsageError("TLB needs at least one entry");
}

MemStats& MemStats::operator+=(const MemStats& o) {
  l2_hits += o.l2_hits;
  l2_misses += o.l2_misses;
  tlb_hits += o.tlb_hits;
  tlb_misses += o.tlb_misses;
  bytes_read += o.bytes_read;
  bytes_written += o.bytes_written;
  return *this;
}

MemStats operator-(const MemStats& a, const MemStats& b) {
  return {a.l2_hits - b.l2_hits,       a.l2_misses - b.l2_misses,
          a.tlb_hits - b.tlb_hits,     a.tlb_misses - b.tlb_misses,
          a.bytes_read - b.bytes_read, a.bytes_written - b.bytes_written};
}

CacheSim::CacheSim(CacheConfig cache, TlbConfig tlb) : cache_(cache), tlb_(tlb) {
  cache_.validate();
  tlb_.validate();
  line_shift_ = static_cast<unsigned>(std::countr_zero(cache_.line_bytes));
  page_shift_ = static_cast<unsigned>(std::countr_zero(tlb_.page_bytes));
  set_mask_ = cache_.set_count() - 1;
  ways_.assign(cache_.set_count() * cache_.associativity, 0);
  fill_.assign(cache_.set_count(), 0);
  tlb_map_.reserve(tlb_.entry_count * 2);
}

void CacheSim::flush() {
  std::fill(fill_.begin(), fill_.end(), 0u);
  last_line_ = ~uint64_t{0};
  tlb_lru_.clear();
  tlb_map_.clear();
  last_page_ = ~uint64_t{0};
}

bool CacheSim::touch_line(uint64_t line) {
  // Re-touching the MRU line leaves LRU order unchanged.
  if (line == last_line_) return true;
  last_line_ = line;
  const uint64_t set = line & set_mask_;
  const uint32_t assoc = cache_.associativity;
  uint64_t* w = ways_.data() + set * assoc;
  uint32_t& n = fill_[set];
  for (uint32_t i = 0; i < n; ++i) {
    if (w[i] == line) {
      std::copy_backward(w, w + i, w + i + 1);
      w[0] = line;
      return true;
    }
  }
  const uint32_t keep = std::min(n, assoc - 1);
  std::copy_backward(w, w + keep, w + keep + 1);
  w[0] = line;
  n = keep + 1;
  return false;
}

bool CacheSim::touch_page(uint64_t page) {
  if (page == last_page_) return true;
  last_page_ = page;
  if (auto it = tlb_map_.find(page); it != tlb_map_.end()) {
    tlb_lru_.splice(tlb_lru_.begin(), tlb_lru_, it->second);
    return true;
  }
  if (tlb_lru_.size() == tlb_.entry_count) {
    tlb_map_.erase(tlb_lru_.back());
    tlb_lru_.pop_back();
  }
  tlb_lru_.push_front(page);
  tlb_map_.emplace(page, tlb_lru_.begin());
  return false;
}

void CacheSim::access(uint64_t addr, uint64_t len, AccessKind kind) {
  if (len == 0) return;
  (kind == AccessKind::kRead ? stats_.bytes_read : stats_.bytes_written) += len;
  const uint64_t last = addr + len - 1;
  for (uint64_t page = addr >> page_shift_; page <= last >> page_shift_; ++page)
    ++(touch_page(page) ? stats_.tlb_hits : stats_.tlb_misses);
  for (uint64_t line = addr >> line_shift_; line <= last >> line_shift_; ++line)
    ++(touch_line(line) ? stats_.l2_hits : stats_.l2_misses);
}

std::vector<uint64_t> CacheSim::set_contents(uint64_t set) const {
  const uint64_t* w = ways_.data() + set * cache_.associativity;
  return {w, w + fill_[set]};
}

MemoryImage::MemoryImage(uint64_t limit_bytes) : limit_(limit_bytes) {}

uint64_t MemoryImage::alloc_region(std::string name, uint64_t bytes, uint64_t alignment) {
  if (alignment == 0 || !std::has_single_bit(alignment))
    throw UsageError("region alignment must be a power of two");
  const uint64_t base = round_up(top_, alignment);
  const uint64_t end = base + bytes;
  if (end - kBaseAddress > limit_ || end < base) {
    std::ostringstream msg;
    msg << "allocating " << bytes << " bytes for '" << name << "' exceeds the "
        << limit_ << "-byte memory image";
    throw FaultError(msg.str());
  }
  data_.resize(end - kBaseAddress, 0);
  top_ = end;
  regions_.push_back({std::move(name), base, bytes});
  return base;
}

const Region& MemoryImage::region(std::string_view name) const {
  for (const auto& r : regions_)
    if (r.name == name) return r;
  throw UsageError("no region named '" + std::string(name) + "'");
}

void MemoryImage::release_to(size_t mark) {
  if (mark > regions_.size()) throw UsageError("bad region watermark");
  regions_.resize(mark);
  top_ = regions_.empty() ? kBaseAddress : regions_.back().base + regions_.back().bytes;
  data_.resize(top_ - kBaseAddress);
}

void MemoryImage::check(uint64_t addr, uint64_t len) const {
  if (!in_bounds(addr, len)) {
    std::ostringstream msg;
    msg << "memory fault: [0x" << std::hex << addr << ", +0x" << len
        << ") outside the simulated image";
    throw FaultError(msg.str());
  }
}

void MemoryImage::copy_in(uint64_t addr, std::span<const std::byte> src) {
  check(addr, src.size());
  std::memcpy(ptr(addr), src.data(), src.size());
}

void MemoryImage::copy_out(uint64_t addr, std::span<std::byte> dst) const {
  check(addr, dst.size());
  std::memcpy(dst.data(), ptr(addr), dst.size());
}

}  // namespace smegemm
