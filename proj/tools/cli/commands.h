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

#ifndef QKDQCL_TOOLS_CLI_COMMANDS_H
#define QKDQCL_TOOLS_CLI_COMMANDS_H

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qkdqcl/config.h"

namespace qkdqcl::cli {

/// Failure category; each maps to its own exit code.
enum class ErrorKind { Usage = 2, Config = 3, Io = 4, Runtime = 5 };

class CommandError : public std::runtime_error {
   public:
    CommandError(ErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

   private:
    ErrorKind kind_;
};

std::string error_kind_name(ErrorKind kind);

struct CommandContext {
    std::string command;
    Config config;
    std::filesystem::path out;
    std::optional<std::uint64_t> seed;  ///< --seed, overrides the config
    bool quiet = false;
    std::ostream *log = nullptr;  ///< progress lines; null when quiet
};

/// What a command produced, for the run manifest.
struct CommandOutput {
    std::vector<std::filesystem::path> artifacts;
    nlohmann::json seeds = nlohmann::json::object();
    nlohmann::json details = nlohmann::json::object();
    std::string summary;  ///< one line for stdout
};

CommandOutput run_pccm_sweep(const CommandContext &ctx);
CommandOutput run_train_individual(const CommandContext &ctx);
CommandOutput run_train_noisy(const CommandContext &ctx);
CommandOutput run_collective(const CommandContext &ctx);
CommandOutput run_protocol_sim(const CommandContext &ctx);

/// Default output path for a command run without --out.
std::filesystem::path default_out(const std::string &command);

/// Theory curve path written next to the train-noisy results.
std::filesystem::path theory_path(const std::filesystem::path &out);

std::filesystem::path manifest_path(const std::filesystem::path &out);

/// Full command-line entry point. Writes a manifest for every command run,
/// successful or not, and reports failures as a single line
/// "error: <kind>: <message>" on `err`.
int run_cli(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

}  // namespace qkdqcl::cli

#endif
