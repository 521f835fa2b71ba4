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

// Randomized brute-force checks of single SME instructions against scalar
// reference semantics. Each returns how many cases ran and how many
// disagreed with the reference.

#include <cstdint>
#include <string>

namespace smegemm::testing {

struct IsaCheck {
  uint64_t cases = 0;
  uint64_t failures = 0;
  std::string first_failure;
};

IsaCheck check_fmopa(uint64_t cases, uint64_t seed, uint32_t svl_bits = 512);
IsaCheck check_smopa(uint64_t cases, uint64_t seed, uint32_t svl_bits = 512);
IsaCheck check_zip(uint64_t cases, uint64_t seed, uint32_t svl_bits = 512);
IsaCheck check_mova(uint64_t cases, uint64_t seed, uint32_t svl_bits = 512);
IsaCheck check_whilelt(uint64_t cases, uint64_t seed, uint32_t svl_bits = 512);
IsaCheck check_ld_st(uint64_t cases, uint64_t seed, uint32_t svl_bits = 512);

}  // namespace smegemm::testing
