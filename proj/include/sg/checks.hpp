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

#include <string>
#include <vector>

#include "sg/cli.hpp"

namespace sg::cli {

struct CheckResult {
    ojson report; // {check, inputs, expected, observed, tolerance, pass}
    bool pass = false;
};

// Named numeric checks. Parameters missing from `params` take the defaults
// used by the acceptance run.
CheckResult run_check(const std::string &name, const json &params, const RunOptions &opt);
std::vector<std::string> check_names();

struct Criterion {
    int id;
    std::string check;
    std::string title;
};

const std::vector<Criterion> &acceptance_criteria();

} // namespace sg::cli
