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

#ifndef QKDQCL_CONFIG_H
#define QKDQCL_CONFIG_H

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace qkdqcl {

/// Parse or lookup failure; the message starts with "<source>:<line>:" when
/// a location is known.
class ConfigError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// Flat key-value configuration with [section] headers.
///
///     # comment
///     [train]
///     n_steps = 100
///     [noise]
///     channel = bit_flip 0.25 before
///     channel = phase_flip 0.1 after
///
/// Keys may repeat; scalar getters reject repeated keys. Every lookup marks
/// the key as consumed so `reject_unused` can report typos.
class Config {
   public:
    Config() = default;
    static Config parse(std::string_view text, std::string source = "<config>");
    static Config load(const std::filesystem::path &path);

    bool has(std::string_view section, std::string_view key) const;

    std::optional<std::string> get_string(std::string_view section, std::string_view key) const;
    std::string get_string(std::string_view section, std::string_view key, std::string_view fallback) const;
    double get_double(std::string_view section, std::string_view key, double fallback) const;
    std::int64_t get_int(std::string_view section, std::string_view key, std::int64_t fallback) const;
    std::uint64_t get_uint(std::string_view section, std::string_view key, std::uint64_t fallback) const;
    bool get_bool(std::string_view section, std::string_view key, bool fallback) const;
    std::vector<std::string> get_all(std::string_view section, std::string_view key) const;
    /// Comma- or space-separated list of reals.
    std::vector<double> get_doubles(std::string_view section, std::string_view key) const;

    /// "<source>:<line>: [section] key" for the given occurrence of a key, for
    /// callers that validate values themselves.
    std::string location(std::string_view section, std::string_view key, std::size_t occurrence = 0) const;

    /// Throws ConfigError naming the first key that no getter asked for.
    void reject_unused() const;

    /// Canonical "[section] key = value" text, in file order.
    std::string snapshot() const;
    const std::string &source() const { return source_; }

   private:
    struct Entry {
        std::string section;
        std::string key;
        std::string value;
        std::size_t line;
        mutable bool used = false;
    };

    const Entry *single(std::string_view section, std::string_view key) const;
    std::string where(const Entry &e) const;

    std::string source_ = "<config>";
    std::vector<Entry> entries_;
};

}  // namespace qkdqcl

#endif
