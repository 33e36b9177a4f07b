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


#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sg/cli.hpp"

int main(int argc, char **argv)
{
    CLI::App app{"sg-glow: Sine-Gordon Gell-Mann-Low series and checks"};
    app.require_subcommand(1);

    std::string config;
    std::uint64_t seed = 0;
    std::string out = ".";
    int workers = 1;
    bool no_cache = false;

    for (const char *name : {"correlator", "series", "verify", "conservation"}) {
        auto *sub = app.add_subcommand(name);
        sub->add_option("--config", config, "JSON config file")->required();
        sub->add_option("--seed", seed, "override the config seed");
        sub->add_option("--out", out, "output directory");
        sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
        sub->add_flag("--no-cache", no_cache, "ignore and do not write the result cache");
    }
    CLI11_PARSE(app, argc, argv);

    const auto *sub = app.get_subcommands().front();
    sg::cli::RunOptions opt;
    if (sub->count("--seed") > 0) {
        opt.seed = seed;
    }
    opt.out = out;
    opt.workers = workers;
    opt.use_cache = !no_cache;

    std::ifstream in(config);
    if (!in) {
        std::cerr << "sg-glow: cannot read " << config << "\n";
        return sg::cli::exit_config;
    }
    std::stringstream ss;
    ss << in.rdbuf();

    try {
        const auto o = sg::cli::run_command(sub->get_name(), ss.str(), opt);
        std::cout << o.report.dump(2) << "\n";
        return o.exit_code;
    } catch (const std::exception &e) {
        std::cerr << "sg-glow: " << e.what() << "\n";
        return sg::cli::exit_numeric;
    }
}
