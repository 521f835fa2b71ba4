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

// Hardware profile files: one `key = value` per line, '#' starts a comment.
// Integer values may carry a K, M or G suffix (powers of 1024).

#include <string>
#include <string_view>

#include "driver.hpp"

namespace smegemm {

SystemProfile parse_profile(std::string_view text);
SystemProfile load_profile(const std::string& path);
std::string format_profile(const SystemProfile& sys);

}  // namespace smegemm
