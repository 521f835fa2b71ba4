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

#include "profile.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace smegemm {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

uint64_t parse_size(std::string_view v, std::string_view key, int line) {
  uint64_t shift = 0;
  if (!v.empty()) {
    switch (v.back()) {
      case 'K': case 'k': shift = 10; break;
      case 'M': case 'm': shift = 20; break;
      case 'G': case 'g': shift = 30; break;
      default: break;
    }
    if (shift) v.remove_suffix(1);
  }
  uint64_t x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc{} || p != v.data() + v.size() || v.empty())
    throw UsageError("profile line " + std::to_string(line) + ": bad value for '" +
                     std::string(key) + "'");
  if (shift && x > (UINT64_MAX >> shift))
    throw UsageError("profile line " + std::to_string(line) + ": value overflows");
  return x << shift;
}

uint32_t narrow(uint64_t v, std::string_view key) {
  if (v > UINT32_MAX) throw UsageError("profile value for '" + std::string(key) + "' too large");
  return static_cast<uint32_t>(v);
}

}  // namespace

SystemProfile parse_profile(std::string_view text) {
  SystemProfile s;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw UsageError("profile line " + std::to_string(line_no) + ": expected key = value");
    const std::string_view key = trim(line.substr(0, eq));
    const uint64_t v = parse_size(trim(line.substr(eq + 1)), key, line_no);
    if (key == "l2_capacity_bytes") s.l2.capacity_bytes = v;
    else if (key == "l2_line_bytes") s.l2.line_bytes = narrow(v, key);
    else if (key == "l2_associativity") s.l2.associativity = narrow(v, key);
    else if (key == "tlb_entries") s.tlb.entry_count = narrow(v, key);
    else if (key == "page_bytes") s.tlb.page_bytes = v;
    else if (key == "working_set_bytes") s.working_set_bytes = v;
    else if (key == "unit_count") s.unit_count = narrow(v, key);
    else if (key == "svl_bits") s.svl_bits = narrow(v, key);
    else
      throw UsageError("profile line " + std::to_string(line_no) + ": unknown key '" +
                       std::string(key) + "'");
  }
  s.validate();
  return s;
}

SystemProfile load_profile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open profile '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_profile(ss.str());
}

std::string format_profile(const SystemProfile& s) {
  std::ostringstream os;
  os << "l2_capacity_bytes = " << s.l2.capacity_bytes << '\n'
     << "l2_line_bytes = " << s.l2.line_bytes << '\n'
     << "l2_associativity = " << s.l2.associativity << '\n'
     << "tlb_entries = " << s.tlb.entry_count << '\n'
     << "page_bytes = " << s.tlb.page_bytes << '\n'
     << "working_set_bytes = " << s.working_set_bytes << '\n'
     << "unit_count = " << s.unit_count << '\n'
     << "svl_bits = " << s.svl_bits << '\n';
  return os.str();
}

}  // namespace smegemm
