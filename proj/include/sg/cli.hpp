/*
   Copyright 2026 The sg-glow Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/


#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sg/covariance.hpp"
#include "sg/glow.hpp"
#include "sg/integrate.hpp"
#include "sg/smearing.hpp"

namespace sg::cli {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

inline constexpr int schema_version = 1;

enum ExitCode : int { exit_pass = 0, exit_check_fail = 1, exit_config = 2, exit_numeric = 3 };

struct RunOptions {
    std::optional<std::uint64_t> seed; // overrides the config seed
    int workers = 1;
    std::filesystem::path out = ".";
    bool use_cache = true;
    bool write_files = true;
};

struct Outcome {
    ojson report;
    int exit_code = exit_pass;
    std::vector<std::string> term_lines; // series only
};

// Config pieces. Malformed input raises ConfigError.
SmearingFunction parse_smearing(const json &j);
PlateauCutoff parse_cutoff(const json &j);
// "default", "zero" or {"modes": [{"w": .., "p": [p0, p1]}, ...]}
StatePartW parse_state(const json &j);
std::vector<double> parse_ladder(const json &cfg);
McConfig parse_mc(const json &cfg, const RunOptions &opt);
std::uint64_t effective_seed(const json &cfg, const RunOptions &opt);

ojson to_json(const SmearingFunction &f);
ojson to_json(const PlateauCutoff &g);
ojson to_json(const McEstimate &e);
McEstimate estimate_from_json(const json &j);
ojson to_json(const Mat2 &m);
ojson to_json(const Mat2c &m);

// FNV-1a over the compact dump with any "timestamp" keys removed.
std::string content_hash(const json &j);

// One file per key. Each file stores its payload with a checksum; a file
// that fails to parse or verify counts as a miss and is rewritten.
class ResultCache {
public:
    explicit ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {}
    std::optional<json> load(const std::string &key) const;
    void store(const std::string &key, const json &payload) const;
    std::filesystem::path path_for(const std::string &key) const;
    int corrupt_hits() const { return corrupt_; }

private:
    std::filesystem::path dir_;
    mutable int corrupt_ = 0;
};

// Write-temp-then-rename.
void write_atomic(const std::filesystem::path &path, const std::string &content);

Outcome cmd_correlator(const json &cfg, const RunOptions &opt);
Outcome cmd_series(const json &cfg, const RunOptions &opt);
Outcome cmd_verify(const json &cfg, const RunOptions &opt);
Outcome cmd_conservation(const json &cfg, const RunOptions &opt);

// Dispatch by command name, map exceptions to exit codes and write the
// report files under opt.out. Nothing is written on a config error.
Outcome run_command(const std::string &command, const std::string &config_text,
                    const RunOptions &opt);

// Report dump without the timestamp, for byte comparisons.
std::string canonical_dump(const ojson &report);

} // namespace sg::cli
