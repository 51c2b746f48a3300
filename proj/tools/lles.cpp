// Copyright 2026 The LLES Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// lles: run optimizer experiments and summarize their CSV output.
//
//   lles run [--config FILE] [flags...] [--dump-config] [--jobs N]
//   lles summarize RESULTS.csv [-o SUMMARY.json]
//
// Exit status: 0 success, 1 a run failed, 2 bad configuration or usage.

#include <lles/runner.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

int run(lles::cli::RunFlags &flags) {
    using namespace lles::cli;
    std::vector<RunConfig> configs;
    try {
        configs = parse_config_json(flags_to_json(flags));
    } catch (const lles::ParseError &e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    }
    if (flags.dump_config) {
        json all = json::array();
        for (const auto &c : configs) {
            all.push_back(emit_config(c));
        }
        std::cout << all.dump(2) << '\n';
        return 0;
    }
    const auto result = execute(configs, {flags.jobs});
    for (const auto &e : result.errors) {
        std::cerr << "run failed: " << e << '\n';
    }
    for (const auto &f : result.csv_files) {
        std::cout << f << '\n';
    }
    return result.exit_code;
}

int summarize(const std::string &csv, const std::string &out) {
    lles::cli::json summary;
    try {
        summary = lles::cli::summarize(csv);
    } catch (const lles::ParseError &e) {
        std::cerr << "summarize: " << e.what() << '\n';
        return 2;
    }
    if (out.empty()) {
        std::cout << summary.dump(2) << '\n';
        return 0;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) {
        std::cerr << "summarize: cannot write " << out << '\n';
        return 1;
    }
    f << summary.dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Gradient, learn-to-learn and ES-based learn-to-learn optimizers for variational circuits"};
    app.require_subcommand(1);

    lles::cli::RunFlags flags;
    auto *run_cmd = app.add_subcommand("run", "run experiments and write CSV + JSON summaries");
    lles::cli::add_run_flags(*run_cmd, flags);

    std::string csv, out;
    auto *sum_cmd = app.add_subcommand("summarize", "per-epoch statistics of a results CSV");
    sum_cmd->add_option("csv", csv, "results CSV")->required();
    sum_cmd->add_option("-o,--output", out, "write the summary here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        if (run_cmd->parsed()) {
            return run(flags);
        }
        return summarize(csv, out);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
