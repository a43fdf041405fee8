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

#include "holocrlb/toml_lite.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace holocrlb::toml {

namespace {

[[noreturn]] void fail(int line, const std::string& what)
{
    throw std::runtime_error("config parse error (line " + std::to_string(line) + "): " + what);
}

std::string strip(const std::string& s)
{
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace((unsigned char)s[a])) ++a;
    while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
    return s.substr(a, b - a);
}

// Removes a trailing comment, respecting quoted strings.
std::string strip_comment(const std::string& s)
{
    bool in_str = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') in_str = !in_str;
        else if (s[i] == '#' && !in_str) return s.substr(0, i);
    }
    return s;
}

bool parse_number(const std::string& tok, Value& out)
{
    std::string t;
    t.reserve(tok.size());
    for (char c : tok)
        if (c != '_') t.push_back(c); // TOML allows digit separators
    if (t.empty()) return false;
    const bool floaty = t.find_first_of(".eE") != std::string::npos ||
                        t == "inf" || t == "-inf" || t == "nan";
    if (!floaty) {
        std::int64_t v = 0;
        auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec == std::errc() && p == t.data() + t.size()) {
            out = v;
            return true;
        }
    }
    try {
        std::size_t used = 0;
        const double v = std::stod(t, &used);
        if (used == t.size()) {
            out = v;
            return true;
        }
    } catch (...) {
    }
    return false;
}

Value parse_value(const std::string& raw, int line)
{
    const std::string tok = strip(raw);
    if (tok.empty()) fail(line, "missing value");
    if (tok.front() == '"') {
        if (tok.size() < 2 || tok.back() != '"') fail(line, "unterminated string");
        return tok.substr(1, tok.size() - 2);
    }
    if (tok == "true") return true;
    if (tok == "false") return false;
    if (tok.front() == '[') {
        if (tok.back() != ']') fail(line, "unterminated array");
        std::vector<double> arr;
        std::string body = tok.substr(1, tok.size() - 2);
        std::stringstream ss(body);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = strip(item);
            if (item.empty()) continue;
            Value v;
            if (!parse_number(item, v)) fail(line, "array elements must be numbers");
            arr.push_back(std::holds_alternative<double>(v) ? std::get<double>(v)
                                                            : (double)std::get<std::int64_t>(v));
        }
        return arr;
    }
    Value v;
    if (parse_number(tok, v)) return v;
    fail(line, "unrecognized value '" + tok + "'");
}

} // namespace

Document parse(const std::string& text)
{
    Document doc;
    std::string table; // keys before any [table] land in ""
    std::istringstream in(text);
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string line = strip(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(lineno, "unterminated table header");
            table = strip(line.substr(1, line.size() - 2));
            if (table.empty()) fail(lineno, "empty table name");
            doc[table]; // declare even if empty
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) fail(lineno, "expected 'key = value'");
        const std::string key = strip(line.substr(0, eq));
        if (key.empty()) fail(lineno, "empty key");
        if (doc[table].count(key)) fail(lineno, "duplicate key '" + key + "'");
        doc[table][key] = parse_value(line.substr(eq + 1), lineno);
    }
    return doc;
}

Document parse_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

} // namespace holocrlb::toml
