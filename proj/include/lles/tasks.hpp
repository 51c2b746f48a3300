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
 * @file tasks.hpp
 * The experiments: ground-state energy (optionally under correlated
 * amplitude damping), binary classification on synthetic 2-D clusters,
 * three-class MNIST, and the Bell-state noise demonstration. Each trainable
 * experiment runs under GRAD, LL or LLES through one shared training loop.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "circuits.hpp"
#include "counter.hpp"
#include "errors.hpp"
#include "grad.hpp"
#include "idx.hpp"
#include "meta.hpp"
#include "qsim.hpp"
#include "rng.hpp"

namespace lles::tasks {

enum class Method { GRAD, LL, LLES };

inline std::string_view to_string(Method m) {
    switch (m) {
    case Method::GRAD:
        return "GRAD";
    case Method::LL:
        return "LL";
    case Method::LLES:
        return "LLES";
    }
    return "?";
}

inline Method parse_method(std::string_view s) {
    if (s == "GRAD") {
        return Method::GRAD;
    }
    if (s == "LL") {
        return Method::LL;
    }
    if (s == "LLES") {
        return Method::LLES;
    }
    throw ConfigError("unknown method '" + std::string(s) + "'");
}

struct TrialRecord {
    std::size_t epoch = 0;
    double cost = 0.0;
    std::optional<double> accuracy;
    /// Cumulative circuit executions spent on optimization (gradient + forward).
    std::uint64_t circuit_executions = 0;
    /// Cumulative gradient-estimation executions only.
    std::uint64_t gradient_executions = 0;
    std::uint64_t seed = 0;
    Method method = Method::GRAD;
    double lr = 0.0;
    double sigma = 0.0;

    friend bool operator==(const TrialRecord &, const TrialRecord &) = default;
};

struct OptimizerSettings {
    Method method = Method::GRAD;
    double lr = 0.1;
    double sigma = std::numbers::pi / 24.0;
    std::size_t T = 2;
    /// Meta-loss weights; empty means w_j = 1.
    std::vector<double> weights;
    std::size_t epochs = 200;
    std::uint64_t seed = 0;
    std::optional<std::size_t> hidden_size;
    std::optional<std::size_t> n_samples;
    bool detach_cost_input = false;

    void validate() const {
        if (!(lr > 0.0) || !std::isfinite(lr)) {
            throw ConfigError("lr must be positive");
        }
        if (method == Method::LLES && !(sigma > 0.0)) {
            throw ConfigError("LLES requires sigma > 0");
        }
        if (method != Method::GRAD) {
            if (T < 1) {
                throw ConfigError("T must be >= 1");
            }
            if (!weights.empty() && weights.size() != T) {
                throw ConfigError("weights must have length T");
            }
        }
        if (hidden_size && *hidden_size < 1) {
            throw ConfigError("hidden_size must be >= 1");
        }
    }
};

/// theta_0 uniform in [0, 2 pi) from the run seed.
inline grad::Vector init_theta(std::size_t p, std::uint64_t seed) {
    auto engine = make_engine(seed, {stream::theta_init});
    std::uniform_real_distribution<double> uniform(0.0, 2.0 * std::numbers::pi);
    grad::Vector theta(p);
    for (auto &t : theta) {
        t = uniform(engine);
    }
    return theta;
}

/// What the shared training loop needs to know about an experiment.
struct TrainingProblem {
    std::size_t p = 0;
    /// Objectives optimized in one epoch, in order; handles charge `counter`.
    std::function<std::vector<grad::ObjectiveHandle>(std::size_t epoch,
                                                     grad::ExecutionCounter &counter)>
        batches;
    /// Cost recorded at epoch 0, before any update.
    std::function<grad::ObjectiveHandle(grad::ExecutionCounter &counter)> initial;
    /// Held-out accuracy at theta, if the task has one. Charges nothing.
    std::function<std::optional<double>(std::span<const double>)> accuracy;
    /// The single batch is the same objective every epoch (and equals `initial`),
    /// so C(theta_0) can be reused across LL/LLES epochs.
    bool stationary = false;
};

/**
 * GRAD:  theta <- theta - lr * parameter_shift_grad, then one forward
 *        evaluation for the recorded cost.
 * LL/LLES: per batch, unroll the LSTM from the fixed theta_0, take the mode's
 *        quantum gradients at each step, BPTT and SGD on the LSTM weights.
 *        The recorded cost is y_T; accuracy uses the last theta_T.
 *
 * Epoch 0 records the initial cost. The record's cost is the batch mean.
 */
inline std::vector<TrialRecord> train(const TrainingProblem &problem,
                                      const OptimizerSettings &s) {
    s.validate();
    grad::ExecutionCounter counter;
    std::vector<TrialRecord> records;
    auto record = [&](std::size_t epoch, double cost, std::span<const double> theta) {
        TrialRecord r;
        r.epoch = epoch;
        r.cost = cost;
        r.accuracy = problem.accuracy ? problem.accuracy(theta) : std::nullopt;
        r.circuit_executions = counter.total();
        r.gradient_executions = counter.gradient();
        r.seed = s.seed;
        r.method = s.method;
        r.lr = s.lr;
        r.sigma = s.method == Method::LLES ? s.sigma : 0.0;
        records.push_back(std::move(r));
    };

    const grad::Vector theta0 = init_theta(problem.p, s.seed);
    const double y0 = problem.initial(counter)(theta0);
    record(0, y0, theta0);

    if (s.method == Method::GRAD) {
        grad::Vector theta = theta0;
        for (std::size_t epoch = 1; epoch <= s.epochs; ++epoch) {
            const auto batches = problem.batches(epoch, counter);
            double sum = 0.0;
            for (const auto &obj : batches) {
                const auto g = grad::parameter_shift_grad(obj, theta);
                for (std::size_t j = 0; j < theta.size(); ++j) {
                    theta[j] -= s.lr * g[j];
                }
                sum += obj(theta);
            }
            record(epoch, sum / static_cast<double>(batches.size()), theta);
        }
        return records;
    }

    meta::UnrollConfig cfg;
    cfg.T = s.T;
    cfg.weights = s.weights.empty() ? std::vector<double>(s.T, 1.0) : s.weights;
    cfg.grad_mode = s.method == Method::LL ? meta::GradMode::ParameterShift
                                           : meta::GradMode::EvolutionStrategy;
    cfg.es.sigma = s.sigma;
    cfg.es.n_samples = s.n_samples;
    cfg.lr = s.lr;
    cfg.detach_cost_input = s.detach_cost_input;

    const std::size_t hidden = s.hidden_size.value_or(meta::default_hidden_size(problem.p));
    auto params = meta::init_params(hidden, problem.p + 1, problem.p,
                                    derive_seed(s.seed, {stream::lstm_init}));
    grad::Vector theta_eval = theta0;
    for (std::size_t epoch = 1; epoch <= s.epochs; ++epoch) {
        const auto batches = problem.batches(epoch, counter);
        double sum = 0.0;
        for (std::size_t b = 0; b < batches.size(); ++b) {
            cfg.es.seed = derive_seed(s.seed, {stream::es, epoch, b});
            const auto y0_b = problem.stationary ? std::optional<double>(y0) : std::nullopt;
            auto r = meta::meta_epoch(params, batches[b], theta0, cfg, y0_b);
            sum += r.forward.trace.steps.back().y;
            theta_eval = r.forward.trace.steps.back().theta;
        }
        record(epoch, sum / static_cast<double>(batches.size()), theta_eval);
    }
    return records;
}

// ---------------------------------------------------------------------------
// Ground state of the tensor product of Pauli Z

struct GroundStateTask {
    std::size_t n_qubits = 4;
    std::size_t L = 4;
    /// 0 is noiseless; otherwise one correlated channel after the circuit.
    double noise_lambda = 0.0;
    OptimizerSettings opt;

    void validate() const {
        if (!(noise_lambda >= 0.0 && noise_lambda <= 1.0)) {
            throw ConfigError("noise_lambda must lie in [0, 1]");
        }
        opt.validate();
    }
};

/// <Z...Z> objective of the ground-state ansatz (pure; no counter attached).
inline grad::ObjectiveHandle ground_state_objective(std::size_t n_qubits, std::size_t L,
                                                    double noise_lambda = 0.0) {
    auto circuit = circuits::ground_state_ansatz(n_qubits, L);
    const auto obs = qsim::Observable::tensor_z(n_qubits);
    std::optional<qsim::KrausChannel> noise;
    if (noise_lambda > 0.0) {
        noise = qsim::KrausChannel::correlated_amplitude_damping(noise_lambda, n_qubits);
    }
    const std::size_t p = circuit.n_params();
    return grad::ObjectiveHandle{
        [circuit = std::move(circuit), obs, noise](std::span<const double> theta) {
            return circuits::evaluate(circuit, theta, obs, noise);
        },
        p};
}

inline std::vector<TrialRecord> run_ground_state(const GroundStateTask &task) {
    task.validate();
    const auto base = ground_state_objective(task.n_qubits, task.L, task.noise_lambda);
    auto attach = [base](grad::ExecutionCounter &c) {
        auto h = base;
        h.counter = &c;
        return h;
    };
    TrainingProblem problem;
    problem.p = base.p;
    problem.initial = attach;
    problem.batches = [attach](std::size_t, grad::ExecutionCounter &c) {
        return std::vector<grad::ObjectiveHandle>{attach(c)};
    };
    problem.stationary = true;
    return train(problem, task.opt);
}

// ---------------------------------------------------------------------------
// Datasets

enum class Split { Train, Test };

struct Dataset {
    std::vector<std::vector<double>> features;
    std::vector<int> labels;
    Split split = Split::Train;

    [[nodiscard]] std::size_t size() const noexcept { return labels.size(); }
};

/**
 * Two isotropic Gaussian clusters (std 0.5) at (-1,-1) -> class 0 and
 * (+1,+1) -> class 1, alternating labels, then each feature mapped affinely
 * onto [0, pi] using the min/max over both splits.
 */
inline std::pair<Dataset, Dataset> generate_binary_dataset(std::size_t n_train,
                                                           std::size_t n_test,
                                                           std::uint64_t seed) {
    if (n_train < 2 || n_test < 2 || n_train % 2 != 0 || n_test % 2 != 0) {
        throw ConfigError("binary dataset sizes must be even and >= 2");
    }
    auto draw = [&](std::size_t n, Split split) {
        auto engine = make_engine(seed, {stream::dataset, static_cast<std::uint64_t>(split)});
        std::normal_distribution<double> normal(0.0, 0.5);
        Dataset d;
        d.split = split;
        for (std::size_t i = 0; i < n; ++i) {
            const int label = static_cast<int>(i % 2);
            const double center = label == 0 ? -1.0 : 1.0;
            const double x0 = center + normal(engine);
            const double x1 = center + normal(engine);
            d.features.push_back({x0, x1});
            d.labels.push_back(label);
        }
        return d;
    };
    Dataset train = draw(n_train, Split::Train);
    Dataset test = draw(n_test, Split::Test);
    for (std::size_t k = 0; k < 2; ++k) {
        double lo = train.features[0][k];
        double hi = lo;
        for (const auto *d : {&train, &test}) {
            for (const auto &f : d->features) {
                lo = std::min(lo, f[k]);
                hi = std::max(hi, f[k]);
            }
        }
        for (auto *d : {&train, &test}) {
            for (auto &f : d->features) {
                f[k] = std::numbers::pi * (f[k] - lo) / (hi - lo);
            }
        }
    }
    return {std::move(train), std::move(test)};
}

/// 1 if <O> >= 0.5, else 0.
inline int threshold_predict(double expectation) { return expectation >= 0.5 ? 1 : 0; }

/// Mean over the batch of (output - label)^2.
inline double mse_cost(std::span<const double> outputs, std::span<const int> labels) {
    if (outputs.size() != labels.size() || outputs.empty()) {
        throw ShapeError("outputs and labels must be non-empty and equal length");
    }
    double sum = 0.0;
    for (std::size_t l = 0; l < outputs.size(); ++l) {
        const double d = outputs[l] - static_cast<double>(labels[l]);
        sum += d * d;
    }
    return sum / static_cast<double>(outputs.size());
}

inline double threshold_accuracy(std::span<const double> outputs, std::span<const int> labels) {
    std::size_t correct = 0;
    for (std::size_t l = 0; l < outputs.size(); ++l) {
        correct += threshold_predict(outputs[l]) == labels[l] ? 1 : 0;
    }
    return static_cast<double>(correct) / static_cast<double>(outputs.size());
}

struct BinaryTask {
    std::size_t n_qubits = 4;
    std::size_t n_train = 100;
    std::size_t n_test = 40;
    /// Mini-batch size with a seeded per-epoch shuffle; 0 means full batch.
    std::size_t batch_size = 10;
    std::uint64_t data_seed = 0;
    double noise_lambda = 0.0;
    OptimizerSettings opt{.epochs = 50};
};

/// Shuffled index batches for one epoch; a single in-order batch when batch_size is 0.
inline std::vector<std::vector<std::size_t>> epoch_batches(std::size_t n, std::size_t batch_size,
                                                           std::uint64_t seed, std::size_t epoch) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) {
        order[i] = i;
    }
    if (batch_size == 0 || batch_size >= n) {
        return {order};
    }
    auto engine = make_engine(seed, {stream::shuffle, epoch});
    std::shuffle(order.begin(), order.end(), engine);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t start = 0; start < n; start += batch_size) {
        const auto first = order.begin() + static_cast<std::ptrdiff_t>(start);
        out.emplace_back(first, first + static_cast<std::ptrdiff_t>(std::min(batch_size, n - start)));
    }
    return out;
}

inline std::vector<TrialRecord> run_binary_classification(const BinaryTask &task) {
    task.opt.validate();
    const auto circuit = circuits::binary_qnn(task.n_qubits);
    auto [train_set, test_set] = generate_binary_dataset(task.n_train, task.n_test, task.data_seed);
    std::optional<qsim::KrausChannel> noise;
    if (task.noise_lambda > 0.0) {
        noise = qsim::KrausChannel::correlated_amplitude_damping(task.noise_lambda, task.n_qubits);
    }
    auto output = [circuit, noise](const std::vector<double> &x, std::span<const double> theta) {
        return circuits::evaluate(circuit, theta, circuit.observables[0], x, noise);
    };
    auto batch_objective = [output, &train_set, p = circuit.n_params()](
                               std::vector<std::size_t> rows, grad::ExecutionCounter &c) {
        const std::uint64_t n = rows.size();
        return grad::ObjectiveHandle{
            [output, &train_set, rows = std::move(rows)](std::span<const double> theta) {
                std::vector<double> out;
                std::vector<int> y;
                for (std::size_t r : rows) {
                    out.push_back(output(train_set.features[r], theta));
                    y.push_back(train_set.labels[r]);
                }
                return mse_cost(out, y);
            },
            p, &c, n};
    };
    const bool full_batch = task.batch_size == 0 || task.batch_size >= train_set.size();
    TrainingProblem problem;
    problem.p = circuit.n_params();
    problem.batches = [&task, &train_set, batch_objective](std::size_t epoch,
                                                           grad::ExecutionCounter &c) {
        std::vector<grad::ObjectiveHandle> out;
        for (auto &rows : epoch_batches(train_set.size(), task.batch_size, task.opt.seed, epoch)) {
            out.push_back(batch_objective(std::move(rows), c));
        }
        return out;
    };
    // Epoch 0 reports the full training cost.
    problem.initial = [&train_set, batch_objective](grad::ExecutionCounter &c) {
        return batch_objective(epoch_batches(train_set.size(), 0, 0, 0).front(), c);
    };
    problem.accuracy = [output, &test_set](std::span<const double> theta) {
        std::vector<double> out;
        for (const auto &x : test_set.features) {
            out.push_back(output(x, theta));
        }
        return std::optional<double>(threshold_accuracy(out, test_set.labels));
    };
    problem.stationary = full_batch;
    return train(problem, task.opt);
}

// ---------------------------------------------------------------------------
// Three-class MNIST

/**
 * Filter an IDX pair to `classes`, shuffle the surviving indices with the
 * seed, keep the first `per_class` of each class in that order and scale
 * pixels to [0, 1].
 */
inline Dataset load_mnist_subset(const idx::Images &images, const idx::Labels &labels,
                                 const std::vector<int> &classes, std::size_t per_class,
                                 std::uint64_t seed, Split split = Split::Train) {
    if (images.count != labels.labels.size()) {
        throw FormatError("image and label counts differ");
    }
    std::vector<std::size_t> order(images.count);
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    auto engine = make_engine(seed, {stream::shuffle});
    std::shuffle(order.begin(), order.end(), engine);

    std::vector<std::size_t> taken(classes.size(), 0);
    Dataset d;
    d.split = split;
    for (std::size_t i : order) {
        const int label = labels.labels[i];
        const auto it = std::find(classes.begin(), classes.end(), label);
        if (it == classes.end()) {
            continue;
        }
        auto &n = taken[static_cast<std::size_t>(it - classes.begin())];
        if (n == per_class) {
            continue;
        }
        ++n;
        const auto px = images.image(i);
        std::vector<double> f(px.size());
        for (std::size_t k = 0; k < px.size(); ++k) {
            f[k] = static_cast<double>(px[k]) / 255.0;
        }
        d.features.push_back(std::move(f));
        d.labels.push_back(label);
    }
    for (std::size_t c = 0; c < classes.size(); ++c) {
        if (taken[c] < per_class) {
            throw InsufficientDataError("class " + std::to_string(classes[c]) + " has only " +
                                        std::to_string(taken[c]) + " examples, " +
                                        std::to_string(per_class) + " requested");
        }
    }
    return d;
}

inline Dataset load_mnist_subset(const std::string &images_path, const std::string &labels_path,
                                 const std::vector<int> &classes, std::size_t per_class,
                                 std::uint64_t seed, Split split = Split::Train) {
    return load_mnist_subset(idx::read_images(images_path), idx::read_labels(labels_path),
                             classes, per_class, seed, split);
}

/// (1/3) sum_p (E_p - y_p)^2 for one example with one-hot target `label_index`.
inline double multiclass_example_cost(std::span<const double> expectations,
                                      std::size_t label_index) {
    double sum = 0.0;
    for (std::size_t q = 0; q < expectations.size(); ++q) {
        const double target = q == label_index ? 1.0 : 0.0;
        const double d = expectations[q] - target;
        sum += d * d;
    }
    return sum / static_cast<double>(expectations.size());
}

/// Mean of multiclass_example_cost over a batch.
inline double multiclass_cost(std::span<const std::vector<double>> expectations,
                              std::span<const std::size_t> label_indices) {
    if (expectations.size() != label_indices.size() || expectations.empty()) {
        throw ShapeError("expectations and labels must be non-empty and equal length");
    }
    double sum = 0.0;
    for (std::size_t l = 0; l < expectations.size(); ++l) {
        sum += multiclass_example_cost(expectations[l], label_indices[l]);
    }
    return sum / static_cast<double>(expectations.size());
}

inline std::size_t argmax_class(std::span<const double> expectations) {
    return static_cast<std::size_t>(
        std::max_element(expectations.begin(), expectations.end()) - expectations.begin());
}

/// Meta-loss weights used for the multiclass experiment at T = 2.
inline std::vector<double> multiclass_weights() { return {1.0 / 11.0, 10.0 / 11.0}; }

struct MulticlassTask {
    std::vector<int> classes{0, 1, 2};
    std::size_t batch_size = 32;
    OptimizerSettings opt{.epochs = 50};
};

inline std::vector<TrialRecord> run_multiclass(const MulticlassTask &task, const Dataset &train_set,
                                               const Dataset &test_set) {
    auto opt = task.opt;
    if (opt.method != Method::GRAD && opt.weights.empty()) {
        if (opt.T != 2) {
            throw ConfigError("multiclass meta-loss weights are defined for T = 2; pass weights");
        }
        opt.weights = multiclass_weights();
    }
    opt.validate();
    if (task.batch_size < 1 || train_set.size() == 0 || test_set.size() == 0) {
        throw ConfigError("multiclass task needs data and a positive batch size");
    }
    const auto circuit = circuits::mnist_qnn();
    if (circuit.observables.size() != task.classes.size()) {
        throw ConfigError("mnist circuit measures exactly three classes");
    }
    auto label_index = [classes = task.classes](int label) {
        const auto it = std::find(classes.begin(), classes.end(), label);
        if (it == classes.end()) {
            throw ConfigError("label outside the configured classes");
        }
        return static_cast<std::size_t>(it - classes.begin());
    };
    auto batch_objective = [circuit, &train_set, label_index](std::vector<std::size_t> rows,
                                                               grad::ExecutionCounter &c) {
        const std::uint64_t n = rows.size();
        return grad::ObjectiveHandle{
            [circuit, &train_set, label_index, rows = std::move(rows)](
                std::span<const double> theta) {
                std::vector<std::vector<double>> e;
                std::vector<std::size_t> y;
                for (std::size_t r : rows) {
                    e.push_back(circuits::evaluate_all(circuit, theta, train_set.features[r]));
                    y.push_back(label_index(train_set.labels[r]));
                }
                return multiclass_cost(e, y);
            },
            circuit.n_params(), &c, n};
    };
    auto batches = [seed = opt.seed, bs = task.batch_size, n = train_set.size(),
                    batch_objective](std::size_t epoch, grad::ExecutionCounter &c) {
        std::vector<grad::ObjectiveHandle> out;
        for (auto &rows : epoch_batches(n, bs, seed, epoch)) {
            out.push_back(batch_objective(std::move(rows), c));
        }
        return out;
    };
    TrainingProblem problem;
    problem.p = circuit.n_params();
    problem.batches = batches;
    // Epoch 0 reports the cost of the first batch of a fixed shuffle.
    problem.initial = [batches](grad::ExecutionCounter &c) { return batches(0, c).front(); };
    problem.accuracy = [circuit, &test_set, label_index](std::span<const double> theta) {
        std::size_t correct = 0;
        for (std::size_t l = 0; l < test_set.size(); ++l) {
            const auto e = circuits::evaluate_all(circuit, theta, test_set.features[l]);
            correct += argmax_class(e) == label_index(test_set.labels[l]) ? 1 : 0;
        }
        return std::optional<double>(static_cast<double>(correct) /
                                     static_cast<double>(test_set.size()));
    };
    return train(problem, opt);
}

// ---------------------------------------------------------------------------
// Bell-state noise demonstration

struct BellNoiseRow {
    double lambda = 0.0;
    /// P(00), P(01), P(10), P(11): exact, or sampled frequencies when shots are set.
    std::vector<double> probabilities;
    std::optional<std::vector<std::uint64_t>> counts;
};

inline std::vector<BellNoiseRow> run_noise_bell(std::span<const double> lambdas,
                                                std::optional<std::uint64_t> shots = std::nullopt,
                                                std::uint64_t seed = 0) {
    const auto circuit = circuits::bell_circuit();
    std::vector<BellNoiseRow> rows;
    for (std::size_t k = 0; k < lambdas.size(); ++k) {
        const auto channel = qsim::KrausChannel::correlated_amplitude_damping(lambdas[k], 2);
        const auto state = circuits::final_state(circuit, {}, channel);
        BellNoiseRow row{lambdas[k], qsim::probabilities(state), std::nullopt};
        if (shots) {
            if (*shots == 0) {
                throw ConfigError("shots must be positive");
            }
            auto engine = make_engine(seed, {stream::shots, k});
            std::vector<double> weights(row.probabilities);
            for (auto &w : weights) {
                w = std::max(w, 0.0);
            }
            std::discrete_distribution<std::size_t> outcome(weights.begin(), weights.end());
            std::vector<std::uint64_t> counts(row.probabilities.size(), 0);
            for (std::uint64_t s = 0; s < *shots; ++s) {
                ++counts[outcome(engine)];
            }
            for (std::size_t i = 0; i < counts.size(); ++i) {
                row.probabilities[i] =
                    static_cast<double>(counts[i]) / static_cast<double>(*shots);
            }
            row.counts = std::move(counts);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace lles::tasks
