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


// Runs the acceptance criteria and prints one pass/fail line per criterion.
// Usage: acceptance [id ...] [--report path]

#include <chrono>
#include <cstdio>
#include <fstream>
#include <set>
#include <string>
#include <thread>

#include "sg/checks.hpp"

int main(int argc, char **argv)
{
    using namespace sg::cli;
    std::set<int> only;
    std::string report_path = "acceptance_report.json";
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--report" && i + 1 < argc) {
            report_path = argv[++i];
        } else {
            only.insert(std::stoi(a));
        }
    }
    RunOptions opt;
    opt.use_cache = false;
    opt.write_files = false;
    opt.workers = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

    ojson all = ojson::array();
    int failed = 0;
    for (const auto &c : acceptance_criteria()) {
        if (!only.empty() && only.count(c.id) == 0) {
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        bool pass = false;
        ojson rep;
        try {
            CheckResult r = run_check(c.check, json::object(), opt);
            pass = r.pass;
            rep = r.report;
        } catch (const std::exception &e) {
            rep = {{"check", c.check}, {"error", e.what()}};
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep["criterion"] = c.id;
        rep["seconds"] = secs;
        all.push_back(rep);
        failed += pass ? 0 : 1;
        std::printf("criterion %2d: %s  %s (%.1f s)\n", c.id, pass ? "PASS" : "FAIL",
                    c.title.c_str(), secs);
        std::fflush(stdout);
    }
    std::ofstream(report_path) << all.dump(2) << "\n";
    return failed == 0 ? 0 : 1;
}
