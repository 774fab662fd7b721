// Copyright 2026 The qkdqcl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qkdqcl/config.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <numbers>
#include <sstream>

namespace qkdqcl {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
        s.remove_prefix(1);
    }
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
        s.remove_suffix(1);
    }
    return s;
}

bool valid_name(std::string_view s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    });
}

/// Accepts plain reals plus "pi", "k*pi" and "pi/k" style angles.
std::optional<double> parse_real(std::string_view s) {
    s = trim(s);
    const auto plain = [](std::string_view t) -> std::optional<double> {
        t = trim(t);
        if (t == "pi") {
            return std::numbers::pi;
        }
        if (t == "-pi") {
            return -std::numbers::pi;
        }
        double v = 0;
        const auto *end = t.data() + t.size();
        auto [ptr, ec] = std::from_chars(t.data(), end, v);
        if (ec != std::errc{} || ptr != end || t.empty()) {
            return std::nullopt;
        }
        return v;
    };
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        auto num = plain(s.substr(0, slash));
        auto den = plain(s.substr(slash + 1));
        if (num && den && *den != 0) {
            return *num / *den;
        }
        return std::nullopt;
    }
    if (const auto star = s.find('*'); star != std::string_view::npos) {
        auto a = plain(s.substr(0, star));
        auto b = plain(s.substr(star + 1));
        if (a && b) {
            return *a * *b;
        }
        return std::nullopt;
    }
    return plain(s);
}

}  // namespace

Config Config::parse(std::string_view text, std::string source) {
    Config cfg;
    cfg.source_ = std::move(source);
    std::string section;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const std::string loc = cfg.source_ + ":" + std::to_string(line_no) + ": ";
        if (line.front() == '[') {
            if (line.back() != ']' || !valid_name(trim(line.substr(1, line.size() - 2)))) {
                throw ConfigError(loc + "malformed section header");
            }
            section = std::string(trim(line.substr(1, line.size() - 2)));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError(loc + "expected 'key = value'");
        }
        const auto key = trim(line.substr(0, eq));
        if (!valid_name(key)) {
            throw ConfigError(loc + "invalid key name");
        }
        if (section.empty()) {
            throw ConfigError(loc + "key outside of any [section]");
        }
        cfg.entries_.push_back({section, std::string(key), std::string(trim(line.substr(eq + 1))), line_no});
    }
    return cfg;
}

Config Config::load(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(path.string() + ": cannot open config file");
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path.string());
}

std::string Config::where(const Entry &e) const {
    return source_ + ":" + std::to_string(e.line) + ": [" + e.section + "] " + e.key;
}

const Config::Entry *Config::single(std::string_view section, std::string_view key) const {
    const Entry *found = nullptr;
    for (const auto &e : entries_) {
        if (e.section == section && e.key == key) {
            if (found) {
                throw ConfigError(where(e) + ": key given more than once");
            }
            found = &e;
        }
    }
    if (found) {
        found->used = true;
    }
    return found;
}

bool Config::has(std::string_view section, std::string_view key) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const Entry &e) { return e.section == section && e.key == key; });
}

std::optional<std::string> Config::get_string(std::string_view section, std::string_view key) const {
    if (const Entry *e = single(section, key)) {
        return e->value;
    }
    return std::nullopt;
}

std::string Config::get_string(std::string_view section, std::string_view key, std::string_view fallback) const {
    return get_string(section, key).value_or(std::string(fallback));
}

double Config::get_double(std::string_view section, std::string_view key, double fallback) const {
    const Entry *e = single(section, key);
    if (!e) {
        return fallback;
    }
    auto v = parse_real(e->value);
    if (!v) {
        throw ConfigError(where(*e) + ": expected a real number, got '" + e->value + "'");
    }
    return *v;
}

std::int64_t Config::get_int(std::string_view section, std::string_view key, std::int64_t fallback) const {
    const Entry *e = single(section, key);
    if (!e) {
        return fallback;
    }
    std::int64_t v = 0;
    const auto *end = e->value.data() + e->value.size();
    auto [ptr, ec] = std::from_chars(e->value.data(), end, v);
    if (ec != std::errc{} || ptr != end || e->value.empty()) {
        throw ConfigError(where(*e) + ": expected an integer, got '" + e->value + "'");
    }
    return v;
}

std::uint64_t Config::get_uint(std::string_view section, std::string_view key, std::uint64_t fallback) const {
    const Entry *e = single(section, key);
    if (!e) {
        return fallback;
    }
    std::uint64_t v = 0;
    const auto *end = e->value.data() + e->value.size();
    auto [ptr, ec] = std::from_chars(e->value.data(), end, v);
    if (ec != std::errc{} || ptr != end || e->value.empty()) {
        throw ConfigError(where(*e) + ": expected a non-negative integer, got '" + e->value + "'");
    }
    return v;
}

bool Config::get_bool(std::string_view section, std::string_view key, bool fallback) const {
    const Entry *e = single(section, key);
    if (!e) {
        return fallback;
    }
    if (e->value == "true" || e->value == "1" || e->value == "yes") {
        return true;
    }
    if (e->value == "false" || e->value == "0" || e->value == "no") {
        return false;
    }
    throw ConfigError(where(*e) + ": expected true or false, got '" + e->value + "'");
}

std::vector<std::string> Config::get_all(std::string_view section, std::string_view key) const {
    std::vector<std::string> out;
    for (const auto &e : entries_) {
        if (e.section == section && e.key == key) {
            e.used = true;
            out.push_back(e.value);
        }
    }
    return out;
}

std::vector<double> Config::get_doubles(std::string_view section, std::string_view key) const {
    const Entry *e = single(section, key);
    if (!e) {
        return {};
    }
    std::vector<double> out;
    std::string token;
    std::istringstream ss(e->value);
    while (ss >> token) {
        std::string_view t = token;
        std::size_t start = 0;
        while (start <= t.size()) {
            const auto comma = t.find(',', start);
            const auto piece = t.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
            if (!piece.empty()) {
                auto v = parse_real(piece);
                if (!v) {
                    throw ConfigError(where(*e) + ": bad list element '" + std::string(piece) + "'");
                }
                out.push_back(*v);
            }
            if (comma == std::string_view::npos) {
                break;
            }
            start = comma + 1;
        }
    }
    return out;
}

std::string Config::location(std::string_view section, std::string_view key, std::size_t occurrence) const {
    for (const auto &e : entries_) {
        if (e.section == section && e.key == key && occurrence-- == 0) {
            return where(e);
        }
    }
    return source_ + ": [" + std::string(section) + "] " + std::string(key);
}

void Config::reject_unused() const {
    for (const auto &e : entries_) {
        if (!e.used) {
            throw ConfigError(where(e) + ": unknown key");
        }
    }
}

std::string Config::snapshot() const {
    std::string out;
    for (const auto &e : entries_) {
        out += "[" + e.section + "] " + e.key + " = " + e.value + "\n";
    }
    return out;
}

}  // namespace qkdqcl
