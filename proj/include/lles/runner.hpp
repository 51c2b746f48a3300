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
/**
 * @file runner.hpp
 * Experiment runner behind the `lles` command-line tool: run configurations
 * (flags or JSON, with list-valued fields expanded into a cross product),
 * seeded parallel execution, CSV result rows and JSON summaries.
 *
 * CSV schema, one row per (run, seed, epoch), identical for every experiment:
 *
 *   experiment,method,n_qubits,L,T,lr,sigma,noise_lambda,seed,epoch,cost,
 *   accuracy,circuit_executions,gradient_executions,p00,p01,p10,p11
 *
 * Cells that do not apply to a row hold "nan". Bell-noise rows carry the
 * four outcome probabilities and use method "none"; a failed run leaves a
 * marker row with epoch -1.
 */
#pragma once

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "tasks.hpp"

namespace lles::cli {

using json = nlohmann::json;
using tasks::Method;

inline constexpr const char *output_dir_env = "LLES_OUTPUT_DIR";

enum class Experiment { ground_state, binary, mnist, bell_noise };

inline std::string_view to_string(Experiment e) {
    switch (e) {
    case Experiment::ground_state:
        return "ground_state";
    case Experiment::binary:
        return "binary";
    case Experiment::mnist:
        return "mnist";
    case Experiment::bell_noise:
        return "bell_noise";
    }
    return "?";
}

inline std::optional<Experiment> experiment_from_string(std::string_view s) {
    for (auto e : {Experiment::ground_state, Experiment::binary, Experiment::mnist,
                   Experiment::bell_noise}) {
        if (to_string(e) == s) {
            return e;
        }
    }
    return std::nullopt;
}

struct MnistFiles {
    std::string train_images;
    std::string train_labels;
    std::string test_images;
    std::string test_labels;
    std::size_t per_class = 1000;
    std::size_t test_per_class = 100;

    friend bool operator==(const MnistFiles &, const MnistFiles &) = default;
};

struct RunConfig {
    Experiment experiment = Experiment::ground_state;
    Method method = Method::GRAD;
    std::size_t n_qubits = 4;
    std::size_t L = 4;
    std::size_t T = 2;
    std::size_t epochs = 200;
    double lr = 0.1;
    /// Present iff method is LLES.
    std::optional<double> sigma;
    double noise_lambda = 0.0;
    std::vector<std::uint64_t> seeds{0, 1, 2, 3, 4};
    /// Output directory; empty falls back to $LLES_OUTPUT_DIR, then "results".
    std::string output_path;

    std::optional<std::size_t> hidden_size;
    std::optional<std::size_t> n_samples;
    std::vector<double> weights;
    std::size_t batch_size = 10;
    std::size_t n_train = 100;
    std::size_t n_test = 40;
    std::uint64_t data_seed = 0;
    std::optional<std::uint64_t> shots;
    MnistFiles mnist;

    friend bool operator==(const RunConfig &, const RunConfig &) = default;
};

// ---------------------------------------------------------------------------
// Scalar parsing

inline std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace detail {

inline std::optional<double> parse_plain_number(std::string_view s) {
    if (s.empty()) {
        return std::nullopt;
    }
    if (s.front() == '+') {
        s.remove_prefix(1);
    }
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

} // namespace detail

/// Parse "0.1", "pi", "-pi", "pi/24", "2pi/3", "2*pi/3".
inline std::optional<double> parse_angle_expression(std::string_view text) {
    const std::string s = detail::trim(text);
    const auto pos = s.find("pi");
    if (pos == std::string::npos) {
        return detail::parse_plain_number(s);
    }
    std::string_view head(s.data(), pos);
    std::string_view tail(s.data() + pos + 2, s.size() - pos - 2);
    if (!head.empty() && head.back() == '*') {
        head.remove_suffix(1);
    }
    double factor = 1.0;
    if (head == "-") {
        factor = -1.0;
    } else if (!head.empty() && head != "+") {
        const auto f = detail::parse_plain_number(head);
        if (!f) {
            return std::nullopt;
        }
        factor = *f;
    }
    double divisor = 1.0;
    if (!tail.empty()) {
        if (tail.front() != '/') {
            return std::nullopt;
        }
        const auto d = detail::parse_plain_number(tail.substr(1));
        if (!d || *d == 0.0) {
            return std::nullopt;
        }
        divisor = *d;
    }
    return factor * std::numbers::pi / divisor;
}

namespace detail {

inline double to_real(const json &v, const std::string &path) {
    if (v.is_number()) {
        return v.get<double>();
    }
    if (v.is_string()) {
        if (auto d = parse_angle_expression(v.get<std::string>())) {
            return *d;
        }
        throw ParseError(path, "cannot parse '" + v.get<std::string>() + "' as a real number");
    }
    throw ParseError(path, "expected a real number");
}

inline std::uint64_t to_uint(const json &v, const std::string &path) {
    if (v.is_number_unsigned()) {
        return v.get<std::uint64_t>();
    }
    if (v.is_number_integer()) {
        if (v.get<std::int64_t>() < 0) {
            throw ParseError(path, "expected a non-negative integer");
        }
        return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    if (v.is_string()) {
        const auto s = trim(v.get<std::string>());
        std::uint64_t out = 0;
        const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
        if (res.ec == std::errc{} && res.ptr == s.data() + s.size() && !s.empty()) {
            return out;
        }
        throw ParseError(path, "cannot parse '" + s + "' as a non-negative integer");
    }
    throw ParseError(path, "expected a non-negative integer");
}

inline std::string to_str(const json &v, const std::string &path) {
    if (!v.is_string()) {
        throw ParseError(path, "expected a string");
    }
    return v.get<std::string>();
}

/// Scalars become one-element lists; arrays are returned with element paths.
inline std::vector<std::pair<json, std::string>> as_list(const json &v, const std::string &key) {
    std::vector<std::pair<json, std::string>> out;
    if (v.is_array()) {
        if (v.empty()) {
            throw ParseError(key, "list must not be empty");
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            out.emplace_back(v[i], key + "[" + std::to_string(i) + "]");
        }
    } else {
        out.emplace_back(v, key);
    }
    return out;
}

inline const std::set<std::string> &known_keys() {
    static const std::set<std::string> keys{
        "experiment", "method",     "n_qubits",    "layers", "T",       "epochs",
        "lr",         "sigma",      "noise_lambda", "seeds",  "output",  "hidden_size",
        "n_samples",  "weights",    "batch_size",  "n_train", "n_test", "data_seed",
        "shots",      "mnist"};
    return keys;
}

inline void validate(const RunConfig &c, const std::string &where) {
    auto fail = [&](const std::string &key, const std::string &msg) {
        throw ParseError(where.empty() ? key : where + "." + key, msg);
    };
    if (c.n_qubits < 1 || c.n_qubits > qsim::max_qubits) {
        fail("n_qubits", "must be in [1, " + std::to_string(qsim::max_qubits) + "]");
    }
    if ((c.experiment == Experiment::ground_state || c.experiment == Experiment::binary) &&
        c.n_qubits < 2) {
        fail("n_qubits", "must be >= 2");
    }
    if (c.L < 1) {
        fail("layers", "must be >= 1");
    }
    if (c.T < 1) {
        fail("T", "must be >= 1");
    }
    if (!(c.lr > 0.0) || !std::isfinite(c.lr)) {
        fail("lr", "must be positive");
    }
    if (c.method == Method::LLES && (!c.sigma || !(*c.sigma > 0.0))) {
        fail("sigma", "a positive sigma is required when method is LLES");
    }
    if (!(c.noise_lambda >= 0.0 && c.noise_lambda <= 1.0)) {
        fail("noise_lambda", "must lie in [0, 1]");
    }
    if (c.seeds.empty()) {
        fail("seeds", "must not be empty");
    }
    if (c.hidden_size && *c.hidden_size < 1) {
        fail("hidden_size", "must be >= 1");
    }
    if (c.n_samples && *c.n_samples < 1) {
        fail("n_samples", "must be >= 1");
    }
    if (!c.weights.empty() && c.weights.size() != c.T) {
        fail("weights", "must have length T");
    }
    if (c.shots && *c.shots < 1) {
        fail("shots", "must be >= 1");
    }
    if (c.experiment == Experiment::binary) {
        if (c.n_train < 2 || c.n_train % 2 || c.n_test < 2 || c.n_test % 2) {
            fail("n_train", "n_train and n_test must be even and >= 2");
        }
    }
    if (c.experiment == Experiment::mnist) {
        if (c.mnist.train_images.empty() || c.mnist.train_labels.empty() ||
            c.mnist.test_images.empty() || c.mnist.test_labels.empty()) {
            fail("mnist", "train_images, train_labels, test_images and test_labels are required");
        }
        if (c.batch_size < 1) {
            fail("batch_size", "must be >= 1");
        }
    }
}

} // namespace detail

// ---------------------------------------------------------------------------
// Config parsing

/**
 * Expand a JSON run description into validated RunConfigs.
 *
 * List-valued experiment, method, n_qubits, layers, T, lr, sigma and
 * noise_lambda expand to their cross product in that order; sigma only
 * expands for LLES runs and is dropped for GRAD/LL. Real-valued fields
 * accept "pi/N" strings.
 */
inline std::vector<RunConfig> parse_config_json(const json &j) {
    using namespace detail;
    if (!j.is_object()) {
        throw ParseError("", "run configuration must be a JSON object");
    }
    for (const auto &[key, _] : j.items()) {
        if (!known_keys().contains(key)) {
            throw ParseError(key, "unknown key");
        }
    }
    auto axis = [&](const char *key, json fallback) {
        return as_list(j.contains(key) ? j.at(key) : fallback, key);
    };

    RunConfig base;
    if (j.contains("seeds")) {
        base.seeds.clear();
        for (const auto &[v, path] : as_list(j.at("seeds"), "seeds")) {
            base.seeds.push_back(to_uint(v, path));
        }
    }
    if (j.contains("output")) {
        base.output_path = to_str(j.at("output"), "output");
    }
    if (j.contains("hidden_size")) {
        base.hidden_size = to_uint(j.at("hidden_size"), "hidden_size");
    }
    if (j.contains("n_samples")) {
        base.n_samples = to_uint(j.at("n_samples"), "n_samples");
    }
    if (j.contains("weights")) {
        const auto &w = j.at("weights");
        if (!w.is_array()) {
            throw ParseError("weights", "expected a list of reals");
        }
        for (std::size_t i = 0; i < w.size(); ++i) {
            base.weights.push_back(to_real(w[i], "weights[" + std::to_string(i) + "]"));
        }
    }
    if (j.contains("n_train")) {
        base.n_train = to_uint(j.at("n_train"), "n_train");
    }
    if (j.contains("n_test")) {
        base.n_test = to_uint(j.at("n_test"), "n_test");
    }
    if (j.contains("data_seed")) {
        base.data_seed = to_uint(j.at("data_seed"), "data_seed");
    }
    if (j.contains("shots")) {
        base.shots = to_uint(j.at("shots"), "shots");
    }
    if (j.contains("mnist")) {
        const auto &m = j.at("mnist");
        if (!m.is_object()) {
            throw ParseError("mnist", "expected an object");
        }
        for (const auto &[key, v] : m.items()) {
            const std::string path = "mnist." + key;
            if (key == "train_images") {
                base.mnist.train_images = to_str(v, path);
            } else if (key == "train_labels") {
                base.mnist.train_labels = to_str(v, path);
            } else if (key == "test_images") {
                base.mnist.test_images = to_str(v, path);
            } else if (key == "test_labels") {
                base.mnist.test_labels = to_str(v, path);
            } else if (key == "per_class") {
                base.mnist.per_class = to_uint(v, path);
            } else if (key == "test_per_class") {
                base.mnist.test_per_class = to_uint(v, path);
            } else {
                throw ParseError(path, "unknown key");
            }
        }
    }

    std::vector<RunConfig> out;
    for (const auto &[ev, ep] : axis("experiment", "ground_state")) {
        const auto experiment = experiment_from_string(to_str(ev, ep));
        if (!experiment) {
            throw ParseError(ep, "unknown experiment '" + ev.get<std::string>() + "'");
        }
        for (const auto &[mv, mp] : axis("method", "GRAD")) {
            Method method{};
            try {
                method = tasks::parse_method(to_str(mv, mp));
            } catch (const ConfigError &e) {
                throw ParseError(mp, e.what());
            }
            for (const auto &[nv, np] : axis("n_qubits", 4)) {
                for (const auto &[lv, lp] : axis("layers", 4)) {
                    for (const auto &[tv, tp] : axis("T", 2)) {
                        for (const auto &[rv, rp] : axis("lr", 0.1)) {
                            std::vector<std::optional<double>> sigmas{std::nullopt};
                            if (method == Method::LLES && j.contains("sigma")) {
                                sigmas.clear();
                                for (const auto &[sv, sp] : as_list(j.at("sigma"), "sigma")) {
                                    sigmas.emplace_back(to_real(sv, sp));
                                }
                            }
                            for (const auto &sigma : sigmas) {
                                for (const auto &[qv, qp] : axis("noise_lambda", 0.0)) {
                                    RunConfig c = base;
                                    c.experiment = *experiment;
                                    c.method = method;
                                    c.n_qubits = to_uint(nv, np);
                                    c.L = to_uint(lv, lp);
                                    c.T = to_uint(tv, tp);
                                    c.lr = to_real(rv, rp);
                                    c.sigma = sigma;
                                    c.noise_lambda = to_real(qv, qp);
                                    if (c.experiment == Experiment::mnist) {
                                        c.n_qubits = circuits::mnist_qubits;
                                        c.L = circuits::mnist_layers;
                                    } else if (c.experiment == Experiment::bell_noise) {
                                        c.n_qubits = 2;
                                    }
                                    c.epochs = c.experiment == Experiment::ground_state ? 200
                                               : c.experiment == Experiment::bell_noise ? 0
                                                                                        : 50;
                                    if (j.contains("epochs")) {
                                        c.epochs = to_uint(j.at("epochs"), "epochs");
                                    }
                                    c.batch_size = c.experiment == Experiment::mnist ? 32 : 10;
                                    if (j.contains("batch_size")) {
                                        c.batch_size = to_uint(j.at("batch_size"), "batch_size");
                                    }
                                    validate(c, "");
                                    out.push_back(std::move(c));
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    return out;
}

/// Single-run JSON that parse_config_json maps back to exactly `c`.
inline json emit_config(const RunConfig &c) {
    json j;
    j["experiment"] = std::string(to_string(c.experiment));
    j["method"] = std::string(tasks::to_string(c.method));
    j["n_qubits"] = c.n_qubits;
    j["layers"] = c.L;
    j["T"] = c.T;
    j["epochs"] = c.epochs;
    j["lr"] = c.lr;
    if (c.sigma) {
        j["sigma"] = *c.sigma;
    }
    j["noise_lambda"] = c.noise_lambda;
    j["seeds"] = c.seeds;
    j["output"] = c.output_path;
    if (c.hidden_size) {
        j["hidden_size"] = *c.hidden_size;
    }
    if (c.n_samples) {
        j["n_samples"] = *c.n_samples;
    }
    if (!c.weights.empty()) {
        j["weights"] = c.weights;
    }
    j["batch_size"] = c.batch_size;
    j["n_train"] = c.n_train;
    j["n_test"] = c.n_test;
    j["data_seed"] = c.data_seed;
    if (c.shots) {
        j["shots"] = *c.shots;
    }
    if (c.experiment == Experiment::mnist) {
        j["mnist"] = {{"train_images", c.mnist.train_images},
                      {"train_labels", c.mnist.train_labels},
                      {"test_images", c.mnist.test_images},
                      {"test_labels", c.mnist.test_labels},
                      {"per_class", c.mnist.per_class},
                      {"test_per_class", c.mnist.test_per_class}};
    }
    return j;
}

/// Options of `lles run`, as collected from the command line.
struct RunFlags {
    std::string config_path;
    std::map<std::string, std::string> values; // config key -> raw flag text
    bool dump_config = false;
    std::size_t jobs = 0;
};

/// Register `lles run` flags on `app`; values land in `flags`.
inline void add_run_flags(CLI::App &app, RunFlags &flags) {
    app.add_option("--config", flags.config_path, "JSON run configuration file");
    struct FlagSpec {
        const char *flag;
        const char *key;
        const char *help;
    };
    static const FlagSpec specs[] = {
        {"--experiment", "experiment", "ground_state | binary | mnist | bell_noise"},
        {"--method", "method", "GRAD | LL | LLES (comma list for a grid)"},
        {"--n-qubits", "n_qubits", "qubit count"},
        {"--layers,-L", "layers", "ansatz layers"},
        {"-T,--unroll", "T", "LSTM-circuit interactions"},
        {"--epochs", "epochs", "training epochs"},
        {"--lr", "lr", "learning rate (comma list for a grid)"},
        {"--sigma", "sigma", "ES standard deviation, e.g. pi/24 (comma list for a grid)"},
        {"--noise-lambda", "noise_lambda", "correlated damping strength in [0,1]"},
        {"--seeds", "seeds", "comma-separated trial seeds"},
        {"--output,-o", "output", "output directory"},
        {"--hidden-size", "hidden_size", "LSTM hidden width"},
        {"--n-samples", "n_samples", "ES sample count (default round(4 + 3 ln p))"},
        {"--weights", "weights", "comma-separated meta-loss weights"},
        {"--batch-size", "batch_size", "mini-batch size (0 = full batch)"},
        {"--n-train", "n_train", "binary training points"},
        {"--n-test", "n_test", "binary test points"},
        {"--data-seed", "data_seed", "synthetic dataset seed"},
        {"--shots", "shots", "bell_noise: sample this many shots"},
        {"--mnist-train-images", "mnist.train_images", "IDX image file"},
        {"--mnist-train-labels", "mnist.train_labels", "IDX label file"},
        {"--mnist-test-images", "mnist.test_images", "IDX image file"},
        {"--mnist-test-labels", "mnist.test_labels", "IDX label file"},
        {"--mnist-per-class", "mnist.per_class", "training examples per class"},
        {"--mnist-test-per-class", "mnist.test_per_class", "test examples per class"},
    };
    for (const auto &s : specs) {
        app.add_option_function<std::string>(
            s.flag, [&flags, key = std::string(s.key)](const std::string &v) { flags.values[key] = v; },
            s.help);
    }
    app.add_flag("--dump-config", flags.dump_config, "print the expanded configurations and exit");
    app.add_option("--jobs,-j", flags.jobs, "worker threads (default: hardware concurrency)");
}

/// Merge flag values over the config file (if any) into one JSON object.
inline json flags_to_json(const RunFlags &flags) {
    json j = json::object();
    if (!flags.config_path.empty()) {
        std::ifstream in(flags.config_path);
        if (!in) {
            throw ParseError("--config", "cannot open '" + flags.config_path + "'");
        }
        try {
            in >> j;
        } catch (const json::parse_error &e) {
            throw ParseError("--config", e.what());
        }
    }
    static const std::set<std::string> list_keys{"method",       "n_qubits", "layers", "T",
                                                 "lr",           "sigma",    "seeds",  "weights",
                                                 "noise_lambda", "experiment"};
    for (const auto &[key, raw] : flags.values) {
        json value;
        if (list_keys.contains(key) && (raw.find(',') != std::string::npos || key == "seeds" ||
                                        key == "weights")) {
            value = json::array();
            std::stringstream ss(raw);
            std::string item;
            while (std::getline(ss, item, ',')) {
                value.push_back(detail::trim(item));
            }
        } else {
            value = raw;
        }
        if (const auto dot = key.find('.'); dot != std::string::npos) {
            j[key.substr(0, dot)][key.substr(dot + 1)] = value;
        } else {
            j[key] = value;
        }
    }
    return j;
}

/// Parse `run` arguments (without the program and subcommand names).
inline std::vector<RunConfig> parse_config_args(const std::vector<std::string> &args) {
    CLI::App app{"lles run"};
    RunFlags flags;
    add_run_flags(app, flags);
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        throw ParseError("", e.what());
    }
    return parse_config_json(flags_to_json(flags));
}

// ---------------------------------------------------------------------------
// CSV rows

inline const std::vector<std::string> &csv_columns() {
    static const std::vector<std::string> cols{
        "experiment", "method", "n_qubits", "L", "T", "lr", "sigma", "noise_lambda", "seed",
        "epoch", "cost", "accuracy", "circuit_executions", "gradient_executions",
        "p00", "p01", "p10", "p11"};
    return cols;
}

using CsvRow = std::vector<std::string>;

namespace detail {

inline CsvRow config_cells(const RunConfig &c, std::uint64_t seed) {
    const bool bell = c.experiment == Experiment::bell_noise;
    const bool meta = c.method != Method::GRAD;
    const double nan = std::nan("");
    return {std::string(to_string(c.experiment)),
            bell ? "none" : std::string(tasks::to_string(c.method)),
            std::to_string(c.n_qubits),
            bell ? "nan" : std::to_string(c.L),
            (bell || !meta) ? "nan" : std::to_string(c.T),
            bell ? "nan" : format_double(c.lr),
            format_double(c.sigma && !bell ? *c.sigma : nan),
            format_double(c.noise_lambda),
            std::to_string(seed)};
}

inline std::vector<CsvRow> trial_rows(const RunConfig &c, std::uint64_t seed,
                                      const std::vector<tasks::TrialRecord> &records) {
    std::vector<CsvRow> rows;
    for (const auto &r : records) {
        CsvRow row = config_cells(c, seed);
        row.push_back(std::to_string(r.epoch));
        row.push_back(format_double(r.cost));
        row.push_back(format_double(r.accuracy.value_or(std::nan(""))));
        row.push_back(std::to_string(r.circuit_executions));
        row.push_back(std::to_string(r.gradient_executions));
        for (int k = 0; k < 4; ++k) {
            row.push_back("nan");
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

inline CsvRow failure_row(const RunConfig &c, std::uint64_t seed) {
    CsvRow row = config_cells(c, seed);
    row.push_back("-1");
    while (row.size() < csv_columns().size()) {
        row.push_back("nan");
    }
    return row;
}

inline tasks::OptimizerSettings optimizer(const RunConfig &c, std::uint64_t seed) {
    tasks::OptimizerSettings s;
    s.method = c.method;
    s.lr = c.lr;
    s.sigma = c.sigma.value_or(0.0);
    s.T = c.T;
    s.weights = c.weights;
    s.epochs = c.epochs;
    s.seed = seed;
    s.hidden_size = c.hidden_size;
    s.n_samples = c.n_samples;
    return s;
}

struct MnistData {
    tasks::Dataset train;
    tasks::Dataset test;
};

inline std::vector<CsvRow> run_trial(const RunConfig &c, std::uint64_t seed,
                                     const MnistData *mnist) {
    switch (c.experiment) {
    case Experiment::ground_state: {
        tasks::GroundStateTask t;
        t.n_qubits = c.n_qubits;
        t.L = c.L;
        t.noise_lambda = c.noise_lambda;
        t.opt = optimizer(c, seed);
        return trial_rows(c, seed, tasks::run_ground_state(t));
    }
    case Experiment::binary: {
        tasks::BinaryTask t;
        t.n_qubits = c.n_qubits;
        t.n_train = c.n_train;
        t.n_test = c.n_test;
        t.batch_size = c.batch_size;
        t.data_seed = c.data_seed;
        t.noise_lambda = c.noise_lambda;
        t.opt = optimizer(c, seed);
        return trial_rows(c, seed, tasks::run_binary_classification(t));
    }
    case Experiment::mnist: {
        tasks::MulticlassTask t;
        t.batch_size = c.batch_size;
        t.opt = optimizer(c, seed);
        return trial_rows(c, seed, tasks::run_multiclass(t, mnist->train, mnist->test));
    }
    case Experiment::bell_noise: {
        const double lambda = c.noise_lambda;
        const auto rows = tasks::run_noise_bell(std::span<const double>(&lambda, 1), c.shots, seed);
        const auto &r = rows.front();
        const double zz = r.probabilities[0] - r.probabilities[1] - r.probabilities[2] +
                          r.probabilities[3];
        CsvRow row = config_cells(c, seed);
        row.push_back("0");
        row.push_back(format_double(zz));
        row.push_back("nan");
        row.push_back(std::to_string(c.shots.value_or(1)));
        row.push_back("0");
        for (double p : r.probabilities) {
            row.push_back(format_double(p));
        }
        return {row};
    }
    }
    return {};
}

inline std::string join_row(const CsvRow &row) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) {
            line += ',';
        }
        line += row[i];
    }
    return line;
}

inline std::vector<std::string> split_line(const std::string &line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        cells.push_back(cell);
    }
    if (!line.empty() && line.back() == ',') {
        cells.emplace_back();
    }
    return cells;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Summaries

/// Per (config, epoch) mean/min/max across seeds, plus execution totals per method.
inline json summarize_rows(const std::vector<std::vector<std::string>> &rows) {
    struct Stats {
        std::map<std::size_t, std::vector<double>> cost, accuracy;
        std::set<std::string> seeds;
        std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> final_exec; // seed -> (total, grad)
        std::map<std::string, std::size_t> final_epoch;
    };
    std::vector<std::string> order;
    std::map<std::string, std::pair<CsvRow, Stats>> groups;
    std::size_t failures = 0;
    auto num = [](const std::string &s, std::size_t line, const char *col) {
        if (s == "nan") {
            return std::nan("");
        }
        const auto v = detail::parse_plain_number(s);
        if (!v) {
            throw ParseError("line " + std::to_string(line) + "." + col,
                             "malformed number '" + s + "'");
        }
        return *v;
    };
    for (std::size_t li = 0; li < rows.size(); ++li) {
        const auto &r = rows[li];
        const std::size_t line = li + 2;
        if (r.size() != csv_columns().size()) {
            throw ParseError("line " + std::to_string(line),
                             "expected " + std::to_string(csv_columns().size()) + " cells, got " +
                                 std::to_string(r.size()));
        }
        if (r[9] == "-1") {
            ++failures;
            continue;
        }
        CsvRow key_cells(r.begin(), r.begin() + 8);
        const std::string key = detail::join_row(key_cells);
        auto [it, inserted] = groups.try_emplace(key, key_cells, Stats{});
        if (inserted) {
            order.push_back(key);
        }
        auto &st = it->second.second;
        const auto epoch = static_cast<std::size_t>(num(r[9], line, "epoch"));
        st.seeds.insert(r[8]);
        st.cost[epoch].push_back(num(r[10], line, "cost"));
        const double acc = num(r[11], line, "accuracy");
        if (!std::isnan(acc)) {
            st.accuracy[epoch].push_back(acc);
        }
        if (!st.final_epoch.contains(r[8]) || st.final_epoch[r[8]] <= epoch) {
            st.final_epoch[r[8]] = epoch;
            st.final_exec[r[8]] = {static_cast<std::uint64_t>(num(r[12], line, "circuit_executions")),
                                   static_cast<std::uint64_t>(num(r[13], line, "gradient_executions"))};
        }
    }
    auto stats = [](const std::vector<double> &v) {
        double sum = 0.0, lo = v.front(), hi = v.front();
        for (double x : v) {
            sum += x;
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        return json{{"mean", sum / static_cast<double>(v.size())}, {"min", lo}, {"max", hi}};
    };
    json configs = json::array();
    std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> by_method;
    for (const auto &key : order) {
        const auto &[cells, st] = groups.at(key);
        json cfg;
        for (std::size_t k = 0; k < cells.size(); ++k) {
            cfg[csv_columns()[k]] = cells[k];
        }
        cfg["n_seeds"] = st.seeds.size();
        json epochs = json::array();
        for (const auto &[epoch, costs] : st.cost) {
            json e{{"epoch", epoch}, {"cost", stats(costs)}};
            const auto a = st.accuracy.find(epoch);
            e["accuracy"] = a == st.accuracy.end() ? json(nullptr) : stats(a->second);
            epochs.push_back(std::move(e));
        }
        cfg["epochs"] = std::move(epochs);
        std::uint64_t total = 0, gradient = 0;
        for (const auto &[seed, ex] : st.final_exec) {
            total += ex.first;
            gradient += ex.second;
        }
        cfg["circuit_executions"] = total;
        cfg["gradient_executions"] = gradient;
        auto &m = by_method[cells[1]];
        m.first += total;
        m.second += gradient;
        configs.push_back(std::move(cfg));
    }
    json totals = json::object();
    for (const auto &[method, ex] : by_method) {
        totals[method] = {{"circuit_executions", ex.first}, {"gradient_executions", ex.second}};
    }
    return json{{"configs", std::move(configs)}, {"totals_by_method", std::move(totals)},
                {"failures", failures}};
}

inline json summarize(const std::string &csv_path) {
    std::ifstream in(csv_path);
    if (!in) {
        throw ParseError(csv_path, "cannot open CSV");
    }
    std::string line;
    if (!std::getline(in, line) || detail::split_line(line) != csv_columns()) {
        throw ParseError(csv_path, "missing or unexpected CSV header");
    }
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (!line.empty()) {
            rows.push_back(detail::split_line(line));
        }
    }
    return summarize_rows(rows);
}

// ---------------------------------------------------------------------------
// Execution

struct ExecuteOptions {
    /// 0 selects std::thread::hardware_concurrency().
    std::size_t workers = 0;
};

struct ExecuteResult {
    /// 0 success, 1 at least one run failed.
    int exit_code = 0;
    std::vector<std::string> csv_files;
    std::vector<std::string> summary_files;
    std::vector<std::string> errors;
};

inline std::string resolve_output_dir(const RunConfig &c) {
    if (!c.output_path.empty()) {
        return c.output_path;
    }
    if (const char *env = std::getenv(output_dir_env); env != nullptr && *env != '\0') {
        return env;
    }
    return "results";
}

/**
 * Run every (config, seed) trial on a bounded worker pool, then write one
 * CSV and one JSON summary per (output directory, experiment). Rows are
 * written in config order, then seed order, so output bytes do not depend
 * on scheduling.
 */
inline ExecuteResult execute(const std::vector<RunConfig> &configs, ExecuteOptions opts = {}) {
    struct Job {
        std::size_t config;
        std::uint64_t seed;
        std::vector<CsvRow> rows;
        std::optional<std::string> error;
    };
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        if (configs[i].experiment == Experiment::bell_noise) {
            jobs.push_back({i, configs[i].seeds.front(), {}, {}});
            continue;
        }
        for (auto s : configs[i].seeds) {
            jobs.push_back({i, s, {}, {}});
        }
    }

    // Each distinct MNIST file set is loaded once, before the pool starts.
    std::map<std::size_t, std::shared_ptr<detail::MnistData>> mnist;
    std::map<std::size_t, std::string> load_errors;
    for (std::size_t i = 0; i < configs.size(); ++i) {
        const auto &c = configs[i];
        if (c.experiment != Experiment::mnist) {
            continue;
        }
        for (std::size_t k = 0; k < i; ++k) {
            if (configs[k].experiment == Experiment::mnist && configs[k].mnist == c.mnist &&
                mnist.contains(k)) {
                mnist[i] = mnist[k];
                break;
            }
        }
        if (mnist.contains(i)) {
            continue;
        }
        try {
            auto d = std::make_shared<detail::MnistData>();
            d->train = tasks::load_mnist_subset(c.mnist.train_images, c.mnist.train_labels,
                                                {0, 1, 2}, c.mnist.per_class, c.data_seed,
                                                tasks::Split::Train);
            d->test = tasks::load_mnist_subset(c.mnist.test_images, c.mnist.test_labels,
                                               {0, 1, 2}, c.mnist.test_per_class, c.data_seed,
                                               tasks::Split::Test);
            mnist[i] = std::move(d);
        } catch (const std::exception &e) {
            load_errors[i] = e.what();
        }
    }

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k = next++; k < jobs.size(); k = next++) {
            auto &job = jobs[k];
            const auto &c = configs[job.config];
            if (const auto e = load_errors.find(job.config); e != load_errors.end()) {
                job.error = e->second;
                continue;
            }
            try {
                const auto m = mnist.find(job.config);
                job.rows = detail::run_trial(c, job.seed, m == mnist.end() ? nullptr : m->second.get());
            } catch (const std::exception &e) {
                job.error = e.what();
            }
        }
    };
    std::size_t n_workers = opts.workers ? opts.workers : std::thread::hardware_concurrency();
    n_workers = std::clamp<std::size_t>(n_workers, 1, std::max<std::size_t>(jobs.size(), 1));
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 1; w < n_workers; ++w) {
            pool.emplace_back(work);
        }
        work();
    }

    ExecuteResult result;
    std::vector<std::pair<std::string, std::vector<CsvRow>>> files;
    for (const auto &job : jobs) {
        const auto &c = configs[job.config];
        const auto dir = resolve_output_dir(c);
        const auto path =
            (std::filesystem::path(dir) / (std::string(to_string(c.experiment)) + ".csv")).string();
        auto it = std::find_if(files.begin(), files.end(),
                               [&](const auto &f) { return f.first == path; });
        if (it == files.end()) {
            files.emplace_back(path, std::vector<CsvRow>{});
            it = std::prev(files.end());
        }
        if (job.error) {
            it->second.push_back(detail::failure_row(c, job.seed));
            result.errors.push_back(std::string(to_string(c.experiment)) + " seed " +
                                    std::to_string(job.seed) + ": " + *job.error);
            result.exit_code = 1;
        } else {
            it->second.insert(it->second.end(), job.rows.begin(), job.rows.end());
        }
    }
    for (const auto &[path, rows] : files) {
        std::filesystem::create_directories(std::filesystem::path(path).parent_path());
        {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out) {
                throw Error("cannot write '" + path + "'");
            }
            out << detail::join_row(csv_columns()) << '\n';
            for (const auto &row : rows) {
                out << detail::join_row(row) << '\n';
            }
        }
        result.csv_files.push_back(path);
        auto summary_path = std::filesystem::path(path).replace_extension(".summary.json").string();
        std::ofstream js(summary_path, std::ios::binary | std::ios::trunc);
        js << summarize_rows(std::vector<std::vector<std::string>>(rows.begin(), rows.end())).dump(2)
           << '\n';
        result.summary_files.push_back(summary_path);
    }
    return result;
}

} // namespace lles::cli
