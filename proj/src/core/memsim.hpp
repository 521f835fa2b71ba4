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

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <list>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "common.hpp"

namespace smegemm {

/// Set-associative LRU cache geometry.
struct CacheConfig {
  uint64_t capacity_bytes = 16ull << 20;
  uint32_t line_bytes = 128;
  uint32_t associativity = 16;

  void validate() const;
  uint64_t set_count() const { return capacity_bytes / (uint64_t{line_bytes} * associativity); }
};

/// Fully associative LRU TLB.
struct TlbConfig {
  uint32_t entry_count = 256;
  uint64_t page_bytes = 16 << 10;

  void validate() const;
};

struct MemStats {
  uint64_t l2_hits = 0;
  uint64_t l2_misses = 0;
  uint64_t tlb_hits = 0;
  uint64_t tlb_misses = 0;
  uint64_t bytes_read = 0;
  uint64_t bytes_written = 0;

  MemStats& operator+=(const MemStats& o);
  friend MemStats operator+(MemStats a, const MemStats& b) { return a += b; }
  friend MemStats operator-(const MemStats& a, const MemStats& b);
  bool operator==(const MemStats&) const = default;
};

enum class AccessKind : uint8_t { kRead, kWrite };

/// Cache + TLB model of one simulated SME unit's view of memory. Holds no
/// data, only tags.
class CacheSim {
 public:
  CacheSim(CacheConfig cache = {}, TlbConfig tlb = {});

  /// Records one access over [addr, addr + len). Bounds are the caller's job.
  void access(uint64_t addr, uint64_t len, AccessKind kind);

  const MemStats& stats() const { return stats_; }
  MemStats snapshot() const { return stats_; }
  void reset_stats() { stats_ = {}; }
  /// Drops all cached lines and TLB entries (stats untouched).
  void flush();

  const CacheConfig& cache_config() const { return cache_; }
  const TlbConfig& tlb_config() const { return tlb_; }

  /// Tags in the given set, most recently used first. Test hook.
  std::vector<uint64_t> set_contents(uint64_t set) const;

 private:
  bool touch_line(uint64_t line);
  bool touch_page(uint64_t page);

  CacheConfig cache_;
  TlbConfig tlb_;
  unsigned line_shift_;
  unsigned page_shift_;
  uint64_t set_mask_;
  // Per set: `assoc` slots in recency order (index 0 = MRU), plus fill count.
  std::vector<uint64_t> ways_;
  std::vector<uint32_t> fill_;
  uint64_t last_line_ = ~uint64_t{0};

  std::list<uint64_t> tlb_lru_;  // front = MRU
  std::unordered_map<uint64_t, std::list<uint64_t>::iterator> tlb_map_;
  uint64_t last_page_ = ~uint64_t{0};

  MemStats stats_;
};

struct Region {
  std::string name;
  uint64_t base = 0;
  uint64_t bytes = 0;
};

/// Flat byte-addressed memory holding named, disjoint regions. Regions are
/// bump-allocated; `release_to` pops back to an earlier watermark.
class MemoryImage {
 public:
  static constexpr uint64_t kDefaultLimit = 8ull << 30;
  static constexpr uint64_t kBaseAddress = 0x10000;

  explicit MemoryImage(uint64_t limit_bytes = kDefaultLimit);

  uint64_t alloc_region(std::string name, uint64_t bytes, uint64_t alignment = 128);
  const std::vector<Region>& regions() const { return regions_; }
  const Region& region(std::string_view name) const;

  /// Current allocation watermark, for `release_to`.
  size_t mark() const { return regions_.size(); }
  void release_to(size_t mark);

  uint64_t end_address() const { return top_; }
  uint64_t limit() const { return limit_; }
  bool in_bounds(uint64_t addr, uint64_t len) const {
    return addr >= kBaseAddress && len <= data_.size() &&
           addr - kBaseAddress <= data_.size() - len;
  }
  void check(uint64_t addr, uint64_t len) const;

  uint8_t* ptr(uint64_t addr) { return data_.data() + (addr - kBaseAddress); }
  const uint8_t* ptr(uint64_t addr) const { return data_.data() + (addr - kBaseAddress); }

  template <typename T>
  T read(uint64_t addr) const {
    check(addr, sizeof(T));
    T v;
    std::memcpy(&v, ptr(addr), sizeof(T));
    return v;
  }
  template <typename T>
  void write(uint64_t addr, T v) {
    check(addr, sizeof(T));
    std::memcpy(ptr(addr), &v, sizeof(T));
  }

  /// Host <-> simulated bulk copies; no cache accounting.
  void copy_in(uint64_t addr, std::span<const std::byte> src);
  void copy_out(uint64_t addr, std::span<std::byte> dst) const;

 private:
  uint64_t limit_;
  uint64_t top_ = kBaseAddress;
  std::vector<uint8_t> data_;
  std::vector<Region> regions_;
};

/// What one simulated unit sees: the shared image through its own cache.
struct MemPort {
  MemoryImage* image;
  CacheSim* cache;
};

}  // namespace smegemm
