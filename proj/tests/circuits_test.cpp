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

#include <lles/circuits.hpp>

#include <gtest/gtest.h>

#include <numbers>

namespace {

using namespace lles;
using namespace lles::circuits;
using qsim::Gate;
using qsim::ParamIndex;

constexpr double pi = std::numbers::pi;

TEST(Ansatz, ParameterCountAndLayout) {
    const auto c = ground_state_ansatz(4, 4);
    EXPECT_EQ(c.n_params(), 16u);
    EXPECT_EQ(c.gates().size(), 4u + 4u * (4u + 3u));
    for (std::size_t q = 0; q < 4; ++q) {
        EXPECT_EQ(c.gates()[q], Gate::ry(q, pi / 2.0));
    }
    EXPECT_EQ(c.gates()[4], Gate::ry(0, ParamIndex{0}));
    EXPECT_EQ(c.gates()[8], Gate::cnot(0, 1));
    EXPECT_EQ(c.gates()[11], Gate::ry(0, ParamIndex{4}));
}

TEST(Ansatz, ZeroAnglesGiveZeroParity) {
    // RY(pi/2) prepares |+>^n, which every CNOT leaves unchanged.
    for (std::size_t n = 2; n <= 5; ++n) {
        const auto c = ground_state_ansatz(n, 3);
        const std::vector<double> theta(c.n_params(), 0.0);
        EXPECT_NEAR(evaluate(c, theta, qsim::Observable::tensor_z(n)), 0.0, 1e-14);
    }
}

TEST(Ansatz, TwoQubitOneLayerClosedForm) {
    // CNOT(0,1) maps Z0 Z1 to Z1, so the cost is cos(pi/2 + theta_1) = -sin(theta_1).
    const auto c = ground_state_ansatz(2, 1);
    for (double t0 : {-1.0, 0.3, 2.0}) {
        for (double t1 : {-2.5, 0.0, 0.7, 1.9}) {
            const std::vector<double> theta{t0, t1};
            EXPECT_NEAR(evaluate(c, theta, qsim::Observable::tensor_z(2)), -std::sin(t1), 1e-14);
        }
    }
}

TEST(Ansatz, Validation) {
    EXPECT_THROW(ground_state_ansatz(1, 2), ConfigError);
    EXPECT_THROW(ground_state_ansatz(3, 0), ConfigError);
    EXPECT_THROW(Circuit(2, {Gate::ry(0, ParamIndex{1})}), ConfigError);
    EXPECT_THROW(Circuit(2, {Gate::ry(2, ParamIndex{0})}), IndexError);
    const auto c = ground_state_ansatz(2, 1);
    const std::vector<double> short_theta{0.1};
    EXPECT_THROW(evaluate(c, short_theta, qsim::Observable::tensor_z(2)), ShapeError);
}

TEST(Qnn, BinaryLayout) {
    const auto c = binary_qnn(4);
    EXPECT_EQ(c.n_params(), 32u);
    EXPECT_EQ(c.input_dim, 2u);
    ASSERT_EQ(c.observables.size(), 1u);
    EXPECT_EQ(c.observables[0], qsim::Observable::projector_zero(4, 3));
    const std::vector<double> x{0.4, 1.3};
    const auto enc = c.encoder_gates(x);
    ASSERT_EQ(enc.size(), 4u);
    EXPECT_EQ(enc[0], Gate::ry(0, 0.4));
    EXPECT_EQ(enc[1], Gate::ry(1, 1.3));
    EXPECT_EQ(enc[2], Gate::ry(2, 0.4));
    EXPECT_EQ(enc[3], Gate::ry(3, 1.3));
    const std::vector<double> bad{0.1, 0.2, 0.3};
    EXPECT_THROW(c.encoder_gates(bad), ShapeError);
}

TEST(Qnn, EncoderOnlyOutputMatchesHandComputation) {
    // Two qubits with zero trainable angles: the body is eight CNOT(0,1)s,
    // which cancel, so P(q1 = 0) = cos^2(x1 / 2).
    const auto c = binary_qnn(2);
    const std::vector<double> theta(c.n_params(), 0.0);
    const std::vector<double> x{0.8, 2.1};
    EXPECT_NEAR(evaluate(c, theta, c.observables[0], x), std::pow(std::cos(1.05), 2), 1e-14);
}

TEST(Qnn, MnistLayout) {
    const auto c = mnist_qnn();
    EXPECT_EQ(c.n_qubits(), 10u);
    EXPECT_EQ(c.n_params(), 150u);
    EXPECT_EQ(c.input_dim, 784u);
    ASSERT_EQ(c.observables.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_EQ(c.observables[k], qsim::Observable::projector_zero(10, 7 + k));
    }
}

TEST(Qnn, EvaluateAllMatchesSingleReadouts) {
    const auto c = mnist_qnn();
    std::mt19937_64 rng(2);
    const auto theta = lles::testing::random_theta(rng, c.n_params());
    std::vector<double> x(784);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (auto &v : x) {
        v = u(rng);
    }
    const auto all = evaluate_all(c, theta, x);
    double sum = 0.0;
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(all[k], evaluate(c, theta, c.observables[k], x), 1e-14);
        EXPECT_GE(all[k], 0.0);
        EXPECT_LE(all[k], 1.0);
        sum += all[k];
    }
    EXPECT_GT(sum, 0.0);
}

TEST(Bell, StateAndNoiseBackend) {
    const auto c = bell_circuit();
    EXPECT_EQ(c.n_params(), 0u);
    const auto clean = final_state(c, {});
    EXPECT_EQ(clean.backend(), qsim::Backend::Statevector);
    EXPECT_NEAR(std::norm(clean.amplitude(0)), 0.5, 1e-15);
    EXPECT_NEAR(std::norm(clean.amplitude(3)), 0.5, 1e-15);
    const auto noisy = final_state(c, {}, qsim::KrausChannel::correlated_amplitude_damping(0.2, 2));
    EXPECT_EQ(noisy.backend(), qsim::Backend::DensityMatrix);
    EXPECT_NEAR(noisy.element(0, 0).real(), 0.6, 1e-12);
}

TEST(Counting, OverloadChargesOnePerCall) {
    const auto c = ground_state_ansatz(2, 1);
    const std::vector<double> theta{0.1, 0.2};
    grad::ExecutionCounter counter;
    const auto obs = qsim::Observable::tensor_z(2);
    const double v = evaluate(c, theta, obs, std::nullopt, counter);
    evaluate(c, theta, obs, std::nullopt, counter, grad::EvalPurpose::Gradient);
    EXPECT_EQ(v, evaluate(c, theta, obs));
    EXPECT_EQ(counter.forward(), 1u);
    EXPECT_EQ(counter.gradient(), 1u);
}

} // namespace
