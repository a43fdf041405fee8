// SPDX-License-Identifier: Apache-2.0
//
// holo-crlb: multi-band holographic-surface positioning simulator and
// beamforming optimizer
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef HOLOCRLB_TOML_LITE_HPP
#define HOLOCRLB_TOML_LITE_HPP

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace holocrlb::toml {

// Minimal TOML subset: [table] headers, key = value lines, '#' comments.
// Values: integers, floats, booleans, quoted strings, and flat arrays of
// numbers. That is the whole configuration surface of this project; no
// maintained C++ TOML parser is vendored here, so the subset is parsed
// in-house with hard errors on anything outside it.

using Value = std::variant<std::int64_t, double, bool, std::string, std::vector<double>>;
using Table = std::map<std::string, Value>;
using Document = std::map<std::string, Table>;

/// Parses the subset described above; throws std::runtime_error with a
/// line number on malformed input.
Document parse(const std::string& text);

/// parse() applied to a file's contents; throws if unreadable.
Document parse_file(const std::string& path);

} // namespace holocrlb::toml

#endif
