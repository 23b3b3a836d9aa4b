// Copyright 2026 The stabex Authors
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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "stabex/extent.hpp"
#include "stabex/stabilizer.hpp"

namespace stabex::cli {

using nlohmann::json;

enum ExitCode : int {
    kOk = 0,
    kNotCertified = 2,
    kInputError = 3,
    kSolverError = 4,
};

/// Malformed state or result file.
class InputError : public std::runtime_error {
   public:
    using std::runtime_error::runtime_error;
};

/// "n=<n> format=relist" followed by 2^n lines "<re> <im>".
StateVector parse_state(std::istream& in, bool allow_unnormalized = false);
StateVector read_state_file(const std::string& path, bool allow_unnormalized = false);
void write_state(std::ostream& out, const StateVector& s);

/// Worker count from STABEX_THREADS, 1 when unset.
int default_threads();

void cmd_count(int n, std::ostream& out);

StateVector cmd_gen(const std::string& kind, int n, std::uint64_t seed);

json cmd_fidelity(const StateVector& b, RealMode real, int threads);

struct ExtentRequest {
    std::optional<std::size_t> init_size;
    std::optional<double> eps;
    std::optional<int> max_iters;
    RealMode real = RealMode::Auto;
    int threads = 1;
    std::vector<std::string> warm_start_files;
};

struct CommandOutcome {
    json document;
    int exit_code = kOk;
};

CommandOutcome cmd_extent(const StateVector& b, const ExtentRequest& req);

json extent_document(const ExtentResult& r, const json& config);
/// Reads back the fields needed for warm starts and verification.
ExtentResult extent_from_document(const json& doc);

struct Check {
    std::string name;
    double measured = 0;
    double tolerance = 0;
    bool pass = false;
};

struct VerifyReport {
    std::vector<Check> checks;
    bool pass() const;
};

/// Re-derives every claim of a result document against its input state.
VerifyReport cmd_verify(const json& doc, const StateVector& b, int threads);

void print_report(const VerifyReport& r, std::ostream& out);

/// Full command line entry point; returns the process exit code.
int run(int argc, char** argv);

}  // namespace stabex::cli
