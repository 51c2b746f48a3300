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
#include "test_support.hpp"

#include <lles/grad.hpp>
#include <lles/tasks.hpp>

#include <gtest/gtest.h>

#include <numbers>
#include <random>

namespace {

using namespace lles;
using namespace lles::grad;

constexpr double pi = std::numbers::pi;

ObjectiveHandle circuit_objective(const circuits::Circuit &c, ExecutionCounter *counter = nullptr) {
    const auto obs = qsim::Observable::tensor_z(c.n_qubits());
    return ObjectiveHandle{[c, obs](std::span<const double> t) { return circuits::evaluate(c, t, obs); },
                           c.n_params(), counter};
}

TEST(ParameterShift, MatchesFiniteDifferencesOnRandomCircuits) {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<std::size_t> nq(1, 4), depth(1, 3);
    for (int trial = 0; trial < 50; ++trial) {
        const auto c = lles::testing::random_layered_circuit(rng, nq(rng), depth(rng));
        const auto obj = circuit_objective(c);
        const auto theta = lles::testing::random_theta(rng, c.n_params());
        const auto ps = parameter_shift_grad(obj, theta);
        const auto fd = finite_difference_oracle(obj, theta, 1e-5);
        for (std::size_t k = 0; k < ps.size(); ++k) {
            EXPECT_NEAR(ps[k], fd[k], 1e-6) << "trial " << trial << " k " << k;
        }
    }
}

TEST(ParameterShift, TwoQubitExample) {
    // Cost -sin(theta_1); gradient (0, -cos(theta_1)).
    const auto obj = circuit_objective(circuits::ground_state_ansatz(2, 1));
    const std::vector<double> theta{0.4, 1.1};
    const auto g = parameter_shift_grad(obj, theta);
    EXPECT_NEAR(g[0], 0.0, 1e-14);
    EXPECT_NEAR(g[1], -std::cos(1.1), 1e-14);
}

TEST(SampleCount, RoundedLogFormula) {
    EXPECT_EQ(es_sample_count(1), 4u);
    EXPECT_EQ(es_sample_count(2), 6u);   // 4 + 2.079
    EXPECT_EQ(es_sample_count(16), 12u); // 4 + 8.318
    EXPECT_EQ(es_sample_count(64), 16u); // 4 + 12.477
    EXPECT_EQ(es_sample_count(150), 19u);
    EXPECT_THROW(es_sample_count(0), ConfigError);
}

TEST(Perturbation, SeededAndDistinctPerSample) {
    EXPECT_EQ(es_perturbation(5, 0, 4), es_perturbation(5, 0, 4));
    EXPECT_NE(es_perturbation(5, 0, 4), es_perturbation(5, 1, 4));
    EXPECT_NE(es_perturbation(5, 0, 4), es_perturbation(6, 0, 4));
}

TEST(Antithetic, ExactOnLinearPlusQuadratic) {
    // f(t) = a.t + |t|^2: the mirrored difference is 2 sigma (a + 2 theta).eps,
    // so the estimate is (1/lambda) sum_k ((a + 2 theta).eps_k) eps_k for any sigma.
    const std::vector<double> a{0.5, -1.0, 2.0};
    const std::vector<double> theta{0.2, 0.1, -0.3};
    ObjectiveHandle obj{[a](std::span<const double> t) {
                            double s = 0.0;
                            for (std::size_t j = 0; j < t.size(); ++j) {
                                s += a[j] * t[j] + t[j] * t[j];
                            }
                            return s;
                        },
                        3};
    for (double sigma : {pi / 6.0, 0.01}) {
        EsConfig cfg{sigma, 9, 42};
        const auto g = es_grad_antithetic(obj, theta, cfg);
        std::vector<double> expected(3, 0.0);
        for (std::size_t k = 0; k < 9; ++k) {
            const auto eps = es_perturbation(42, k, 3);
            double proj = 0.0;
            for (std::size_t j = 0; j < 3; ++j) {
                proj += (a[j] + 2.0 * theta[j]) * eps[j];
            }
            for (std::size_t j = 0; j < 3; ++j) {
                expected[j] += proj * eps[j] / 9.0;
            }
        }
        for (std::size_t j = 0; j < 3; ++j) {
            EXPECT_NEAR(g[j], expected[j], 1e-10);
        }
    }
}

TEST(Antithetic, ConstantObjectiveGivesZero) {
    ObjectiveHandle obj{[](std::span<const double>) { return 3.0; }, 4};
    const std::vector<double> theta(4, 0.5);
    for (double v : es_grad_antithetic(obj, theta, EsConfig{})) {
        EXPECT_EQ(v, 0.0);
    }
}

TEST(Canonical, UnbiasedOnLinearObjective) {
    const std::vector<double> a{1.0, -2.0};
    ObjectiveHandle obj{[a](std::span<const double> t) { return a[0] * t[0] + a[1] * t[1]; }, 2};
    const std::vector<double> theta{0.0, 0.0};
    const auto g = es_grad_canonical(obj, theta, EsConfig{0.1, 100000, 9});
    // Per-component standard error is |a| / sqrt(1e5) ~ 0.007.
    EXPECT_NEAR(g[0], 1.0, 0.04);
    EXPECT_NEAR(g[1], -2.0, 0.04);
}

TEST(Counting, ExecutionsPerEstimator) {
    ExecutionCounter counter;
    const auto obj = circuit_objective(circuits::ground_state_ansatz(3, 1), &counter);
    const std::vector<double> theta{0.1, 0.2, 0.3};
    parameter_shift_grad(obj, theta);
    EXPECT_EQ(counter.gradient(), 6u);
    counter.reset();
    es_grad_antithetic(obj, theta, EsConfig{pi / 24.0, 16, 0});
    EXPECT_EQ(counter.gradient(), 32u);
    es_grad_canonical(obj, theta, EsConfig{pi / 24.0, 8, 0});
    EXPECT_EQ(counter.gradient(), 40u);
    obj(theta);
    EXPECT_EQ(counter.forward(), 1u);
    EXPECT_EQ(counter.total(), 41u);
    counter.reset();
    es_grad_antithetic(obj, theta, EsConfig{});
    EXPECT_EQ(counter.gradient(), 2u * es_sample_count(3));
}

TEST(Counting, BatchObjectivesChargeTheirSize) {
    ExecutionCounter counter;
    ObjectiveHandle obj{[](std::span<const double>) { return 0.0; }, 2, &counter, 10};
    const std::vector<double> theta{0.0, 0.0};
    parameter_shift_grad(obj, theta);
    EXPECT_EQ(counter.gradient(), 40u);
}

TEST(Errors, ShapesAndConfig) {
    ObjectiveHandle obj{[](std::span<const double>) { return 0.0; }, 2};
    const std::vector<double> wrong{0.0};
    EXPECT_THROW(obj(wrong), ShapeError);
    const std::vector<double> theta{0.0, 0.0};
    EXPECT_THROW(es_grad_antithetic(obj, theta, EsConfig{0.0, 4, 0}), ConfigError);
    EXPECT_THROW(es_grad_antithetic(obj, theta, EsConfig{0.1, 0, 0}), ConfigError);
    EXPECT_THROW(finite_difference_oracle(obj, theta, 0.0), ConfigError);
}

struct EsStats {
    std::vector<double> mean;
    double mse_of_mean = 0.0;
    double mean_per_sample_mse = 0.0;
};

EsStats es_stats(const ObjectiveHandle &obj, std::span<const double> theta,
                 const std::vector<double> &reference, double sigma, std::size_t seeds) {
    EsStats s;
    s.mean.assign(theta.size(), 0.0);
    for (std::size_t seed = 0; seed < seeds; ++seed) {
        const auto g = es_grad_antithetic(obj, theta, EsConfig{sigma, std::nullopt, seed});
        for (std::size_t j = 0; j < g.size(); ++j) {
            s.mean[j] += g[j] / static_cast<double>(seeds);
            s.mean_per_sample_mse += std::pow(g[j] - reference[j], 2) / static_cast<double>(seeds);
        }
    }
    for (std::size_t j = 0; j < theta.size(); ++j) {
        s.mse_of_mean += std::pow(s.mean[j] - reference[j], 2);
    }
    return s;
}

TEST(EsStatistics, AveragedEstimateConvergesAsSigmaShrinks) {
    const auto obj = tasks::ground_state_objective(2, 1);
    const std::vector<double> theta{0.4, 1.1};
    const auto ps = parameter_shift_grad(obj, theta);
    double previous = std::numeric_limits<double>::infinity();
    for (double sigma : {pi / 6.0, pi / 12.0, pi / 24.0}) {
        const auto s = es_stats(obj, theta, ps, sigma, 2000);
        EXPECT_LE(s.mse_of_mean, previous) << "sigma " << sigma;
        previous = s.mse_of_mean;
        if (sigma == pi / 24.0) {
            for (std::size_t j = 0; j < ps.size(); ++j) {
                EXPECT_NEAR(s.mean[j], ps[j], 0.05);
            }
        }
    }
}

TEST(EsStatistics, PerSampleErrorIsVarianceDominated) {
    // For C = -sin(theta_1) the single-estimate variance falls with sigma
    // faster than the bias grows, so per-sample MSE rises as sigma shrinks.
    const auto obj = tasks::ground_state_objective(2, 1);
    const std::vector<double> theta{0.4, 1.1};
    const auto ps = parameter_shift_grad(obj, theta);
    const auto big = es_stats(obj, theta, ps, pi / 6.0, 2000);
    const auto small = es_stats(obj, theta, ps, pi / 24.0, 2000);
    EXPECT_GT(small.mean_per_sample_mse, big.mean_per_sample_mse);
}

TEST(EsStatistics, PointsDownhillOnAverage) {
    std::mt19937_64 rng(77);
    const auto c = lles::testing::random_layered_circuit(rng, 3, 2);
    const auto obj = circuit_objective(c);
    const auto theta = lles::testing::random_theta(rng, c.n_params());
    const auto ps = parameter_shift_grad(obj, theta);
    const auto s = es_stats(obj, theta, ps, pi / 24.0, 300);
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t j = 0; j < ps.size(); ++j) {
        dot += s.mean[j] * ps[j];
        na += s.mean[j] * s.mean[j];
        nb += ps[j] * ps[j];
    }
    EXPECT_GT(dot / std::sqrt(na * nb), 0.9);
}

} // namespace
