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

// JSON run reports and the human-readable summary table.

#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "workloads.hpp"

namespace smegemm {

nlohmann::json to_json(const TilingParams& t);
nlohmann::json to_json(const MemStats& s);
nlohmann::json to_json(const InstrStats& s);
nlohmann::json to_json(const RunResult& r);
nlohmann::json to_json(const std::vector<RunResult>& rs);

/// Same report with wall-clock fields removed, for determinism checks.
nlohmann::json strip_timing(nlohmann::json j);

/// Fraction of loads issued as four-register groups.
double four_way_fraction(const InstrStats& s);

void print_table(std::ostream& os, const std::vector<RunResult>& rs);

}  // namespace smegemm
