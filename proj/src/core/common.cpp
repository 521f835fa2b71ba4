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

#include "common.hpp"

namespace smegemm {

std::string_view to_string(Precision p) {
  switch (p) {
    case Precision::kF32: return "f32";
    case Precision::kF64: return "f64";
    case Precision::kF16F32: return "f16";
    case Precision::kI8I32: return "i8";
  }
  return "?";
}

std::string_view to_string(Layout l) {
  return l == Layout::kRowMajor ? "row" : "col";
}

Precision parse_precision(std::string_view s) {
  if (s == "f32") return Precision::kF32;
  if (s == "f64") return Precision::kF64;
  if (s == "f16" || s == "f16f32") return Precision::kF16F32;
  if (s == "i8" || s == "i8i32") return Precision::kI8I32;
  throw UsageError("unknown precision '" + std::string(s) + "'");
}

Layout parse_layout(std::string_view s) {
  if (s == "row") return Layout::kRowMajor;
  if (s == "col") return Layout::kColMajor;
  throw UsageError("unknown layout '" + std::string(s) + "'");
}

}  // namespace smegemm
