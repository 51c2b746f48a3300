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
 * @file grad.hpp
 * Gradient estimators over a black-box objective: the exact parameter-shift
 * rule, canonical and antithetic Gaussian search gradients, and a central
 * finite-difference oracle. Every objective call goes through
 * ObjectiveHandle so circuit executions are charged exactly once.
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "counter.hpp"
#include "errors.hpp"
#include "rng.hpp"

namespace lles::grad {

using Vector = std::vector<double>;

struct ObjectiveHandle {
    std::function<double(std::span<const double>)> eval;
    std::size_t p = 0;
    ExecutionCounter *counter = nullptr;
    /// Circuit executions behind one call (batch size for dataset costs).
    std::uint64_t executions_per_eval = 1;

    double operator()(std::span<const double> theta,
                      EvalPurpose purpose = EvalPurpose::Forward) const {
        if (theta.size() != p) {
            throw ShapeError("objective expects " + std::to_string(p) +
                             " parameters, got " + std::to_string(theta.size()));
        }
        const double v = eval(theta);
        if (counter != nullptr) {
            counter->charge(purpose, executions_per_eval);
        }
        return v;
    }
};

/// round(4 + 3 ln p), halves away from zero.
inline std::size_t es_sample_count(std::size_t p) {
    if (p < 1) {
        throw ConfigError("es_sample_count requires p >= 1");
    }
    return static_cast<std::size_t>(std::lround(4.0 + 3.0 * std::log(static_cast<double>(p))));
}

struct EsConfig {
    double sigma = std::numbers::pi / 24.0;
    /// nullopt selects es_sample_count(p).
    std::optional<std::size_t> n_samples;
    std::uint64_t seed = 0;

    [[nodiscard]] std::size_t samples_for(std::size_t p) const {
        if (!(sigma > 0.0) || !std::isfinite(sigma)) {
            throw ConfigError("ES sigma must be positive and finite");
        }
        if (n_samples) {
            if (*n_samples == 0) {
                throw ConfigError("ES n_samples must be positive");
            }
            return *n_samples;
        }
        return es_sample_count(p);
    }
};

/// Standard-normal direction of sample k: its own child stream of `seed`.
inline Vector es_perturbation(std::uint64_t seed, std::size_t k, std::size_t p) {
    auto engine = make_engine(seed, {static_cast<std::uint64_t>(k)});
    std::normal_distribution<double> normal(0.0, 1.0);
    Vector eps(p);
    for (auto &e : eps) {
        e = normal(engine);
    }
    return eps;
}

/// g_k = (C(theta + pi/2 e_k) - C(theta - pi/2 e_k)) / 2; 2p executions.
inline Vector parameter_shift_grad(const ObjectiveHandle &obj, std::span<const double> theta) {
    const double shift = std::numbers::pi / 2.0;
    Vector shifted(theta.begin(), theta.end());
    Vector g(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
        shifted[k] = theta[k] + shift;
        const double plus = obj(shifted, EvalPurpose::Gradient);
        shifted[k] = theta[k] - shift;
        const double minus = obj(shifted, EvalPurpose::Gradient);
        shifted[k] = theta[k];
        g[k] = 0.5 * (plus - minus);
    }
    return g;
}

/**
 * Antithetic Gaussian search gradient:
 *
 *   (1 / (2 lambda sigma^2)) sum_k [f(z_k) - f(2 theta - z_k)] (z_k - theta),
 *   z_k = theta + sigma eps_k.
 *
 * 2 lambda executions; terms are accumulated in sample order.
 */
inline Vector es_grad_antithetic(const ObjectiveHandle &obj, std::span<const double> theta,
                                 const EsConfig &cfg) {
    const std::size_t p = theta.size();
    const std::size_t lambda = cfg.samples_for(p);
    Vector g(p, 0.0);
    Vector plus(p), minus(p);
    for (std::size_t k = 0; k < lambda; ++k) {
        const Vector eps = es_perturbation(cfg.seed, k, p);
        for (std::size_t j = 0; j < p; ++j) {
            plus[j] = theta[j] + cfg.sigma * eps[j];
            minus[j] = 2.0 * theta[j] - plus[j];
        }
        const double diff = obj(plus, EvalPurpose::Gradient) - obj(minus, EvalPurpose::Gradient);
        for (std::size_t j = 0; j < p; ++j) {
            g[j] += diff * (plus[j] - theta[j]);
        }
    }
    const double scale = 1.0 / (2.0 * static_cast<double>(lambda) * cfg.sigma * cfg.sigma);
    for (auto &v : g) {
        v *= scale;
    }
    return g;
}

/// Score-function form (1/lambda) sum_k f(z_k) (z_k - theta) / sigma^2; lambda executions.
inline Vector es_grad_canonical(const ObjectiveHandle &obj, std::span<const double> theta,
                                const EsConfig &cfg) {
    const std::size_t p = theta.size();
    const std::size_t lambda = cfg.samples_for(p);
    Vector g(p, 0.0);
    Vector z(p);
    for (std::size_t k = 0; k < lambda; ++k) {
        const Vector eps = es_perturbation(cfg.seed, k, p);
        for (std::size_t j = 0; j < p; ++j) {
            z[j] = theta[j] + cfg.sigma * eps[j];
        }
        const double f = obj(z, EvalPurpose::Gradient);
        for (std::size_t j = 0; j < p; ++j) {
            g[j] += f * (z[j] - theta[j]);
        }
    }
    const double scale = 1.0 / (static_cast<double>(lambda) * cfg.sigma * cfg.sigma);
    for (auto &v : g) {
        v *= scale;
    }
    return g;
}

/// Central differences, 2p executions.
inline Vector finite_difference_oracle(const ObjectiveHandle &obj,
                                       std::span<const double> theta, double h) {
    if (!(h > 0.0)) {
        throw ConfigError("finite-difference step must be positive");
    }
    Vector x(theta.begin(), theta.end());
    Vector g(theta.size());
    for (std::size_t k = 0; k < theta.size(); ++k) {
        x[k] = theta[k] + h;
        const double plus = obj(x, EvalPurpose::Gradient);
        x[k] = theta[k] - h;
        const double minus = obj(x, EvalPurpose::Gradient);
        x[k] = theta[k];
        g[k] = (plus - minus) / (2.0 * h);
    }
    return g;
}

} // namespace lles::grad
