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

#include <lles/qsim.hpp>

#include <Eigen/Eigenvalues>
#include <gtest/gtest.h>

#include <numbers>
#include <random>

namespace {

using namespace lles;
using namespace lles::qsim;
using lles::testing::DenseMatrix;
using lles::testing::DenseVector;

constexpr double pi = std::numbers::pi;

DenseVector as_dense(const QuantumState &s) {
    DenseVector v(static_cast<Eigen::Index>(s.dim()));
    for (std::size_t i = 0; i < s.dim(); ++i) {
        v[static_cast<Eigen::Index>(i)] = s.amplitude(i);
    }
    return v;
}

DenseMatrix as_dense_rho(const QuantumState &s) {
    const auto d = static_cast<Eigen::Index>(s.dim());
    DenseMatrix m(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        for (Eigen::Index c = 0; c < d; ++c) {
            m(r, c) = s.element(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
        }
    }
    return m;
}

DenseMatrix from_row_major(const std::vector<Complex> &v, std::size_t d) {
    DenseMatrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    for (std::size_t r = 0; r < d; ++r) {
        for (std::size_t c = 0; c < d; ++c) {
            m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[r * d + c];
        }
    }
    return m;
}

TEST(Gates, SingleQubitExamples) {
    auto s = apply_gate(zero_state(1, Backend::Statevector), Gate::ry(0, pi));
    EXPECT_NEAR(std::abs(s.amplitude(0)), 0.0, 1e-15);
    EXPECT_NEAR(s.amplitude(1).real(), 1.0, 1e-15);

    s = apply_gate(zero_state(1, Backend::Statevector), Gate::h(0));
    EXPECT_NEAR(s.amplitude(0).real(), 1.0 / std::sqrt(2.0), 1e-15);
    EXPECT_NEAR(s.amplitude(1).real(), 1.0 / std::sqrt(2.0), 1e-15);

    s = apply_gate(zero_state(1, Backend::Statevector), Gate::rx(0, pi));
    EXPECT_NEAR(s.amplitude(1).imag(), -1.0, 1e-15);
}

TEST(Gates, QubitZeroIsMostSignificant) {
    auto s = apply_gate(zero_state(3, Backend::Statevector), Gate::ry(0, pi));
    EXPECT_NEAR(std::norm(s.amplitude(0b100)), 1.0, 1e-15);
    s = apply_gate(s, Gate::cnot(0, 2));
    EXPECT_NEAR(std::norm(s.amplitude(0b101)), 1.0, 1e-15);
}

TEST(Gates, MatchesKroneckerOracle) {
    std::mt19937_64 rng(7);
    for (std::size_t n = 1; n <= 3; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            std::size_t p = 0;
            const auto gates = lles::testing::random_gates(rng, n, 12, p);
            const auto theta = lles::testing::random_theta(rng, p);
            auto state = zero_state(n, Backend::Statevector);
            DenseVector ref = DenseVector::Zero(static_cast<Eigen::Index>(1 << n));
            ref[0] = 1.0;
            for (const auto &g : gates) {
                const double angle = g.is_rotation() ? resolve_angle(g, theta) : 0.0;
                state.apply(g, theta);
                ref = lles::testing::full_unitary(g, n, angle) * ref;
            }
            EXPECT_LT((as_dense(state) - ref).cwiseAbs().maxCoeff(), 1e-12) << "n=" << n;
        }
    }
}

TEST(Gates, NormPreservedOverLongRandomSequence) {
    std::mt19937_64 rng(11);
    std::size_t p = 0;
    const auto gates = lles::testing::random_gates(rng, 5, 10000, p);
    const auto theta = lles::testing::random_theta(rng, p);
    auto state = zero_state(5, Backend::Statevector);
    for (const auto &g : gates) {
        state.apply(g, theta);
    }
    double norm = 0.0;
    for (auto a : state.data()) {
        norm += std::norm(a);
    }
    EXPECT_NEAR(norm, 1.0, 1e-10);
}

TEST(Backends, DensityMatrixTracksStatevector) {
    std::mt19937_64 rng(3);
    for (std::size_t n = 1; n <= 4; ++n) {
        std::size_t p = 0;
        const auto gates = lles::testing::random_gates(rng, n, 30, p);
        const auto theta = lles::testing::random_theta(rng, p);
        auto sv = zero_state(n, Backend::Statevector);
        auto dm = zero_state(n, Backend::DensityMatrix);
        for (const auto &g : gates) {
            sv.apply(g, theta);
            dm.apply(g, theta);
        }
        const DenseVector psi = as_dense(sv);
        const DenseMatrix expected = psi * psi.adjoint();
        EXPECT_LT((as_dense_rho(dm) - expected).cwiseAbs().maxCoeff(), 1e-12);
        EXPECT_LT((as_dense_rho(sv.to_density_matrix()) - expected).cwiseAbs().maxCoeff(), 1e-15);
        const auto obs = Observable::tensor_z(n);
        EXPECT_NEAR(expectation(sv, obs), expectation(dm, obs), 1e-12);
    }
}

TEST(Observables, Diagonals) {
    const auto z = Observable::tensor_z(3);
    EXPECT_EQ(z.diagonal(0b000), 1.0);
    EXPECT_EQ(z.diagonal(0b111), -1.0);
    EXPECT_EQ(z.diagonal(0b101), 1.0);
    const auto p = Observable::projector_zero(3, 2);
    EXPECT_EQ(p.diagonal(0b110), 1.0);
    EXPECT_EQ(p.diagonal(0b001), 0.0);
    const auto all = Observable::projector_all_zeros(3);
    EXPECT_EQ(all.diagonal(0), 1.0);
    EXPECT_EQ(all.diagonal(4), 0.0);
}

TEST(Observables, PlusStateHasZeroParity) {
    auto s = zero_state(4, Backend::Statevector);
    for (std::size_t q = 0; q < 4; ++q) {
        s.apply(Gate::h(q));
    }
    EXPECT_NEAR(expectation(s, Observable::tensor_z(4)), 0.0, 1e-15);
    EXPECT_NEAR(expectation(s, Observable::projector_zero(4, 1)), 0.5, 1e-15);
    EXPECT_NEAR(expectation(s, Observable::projector_all_zeros(4)), 1.0 / 16.0, 1e-15);
}

TEST(Channel, KrausCompleteness) {
    for (std::size_t n = 1; n <= 4; ++n) {
        for (double lambda : {0.0, 0.1, 0.37, 1.0}) {
            const auto ch = KrausChannel::correlated_amplitude_damping(lambda, n);
            const auto ks = ch.kraus_operators();
            const std::size_t d = std::size_t{1} << n;
            DenseMatrix sum = DenseMatrix::Zero(static_cast<Eigen::Index>(d),
                                                static_cast<Eigen::Index>(d));
            for (const auto &k : ks) {
                const DenseMatrix K = from_row_major(k, d);
                sum += K.adjoint() * K;
            }
            EXPECT_LT((sum - DenseMatrix::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff(),
                      1e-15);
        }
    }
}

TEST(Channel, MatchesDenseKrausSumAndStaysPhysical) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t n = 1; n <= 3; ++n) {
        std::size_t p = 0;
        const auto gates = lles::testing::random_gates(rng, n, 25, p);
        const auto theta = lles::testing::random_theta(rng, p);
        auto rho = zero_state(n, Backend::DensityMatrix);
        for (const auto &g : gates) {
            rho.apply(g, theta);
        }
        const double lambda = u(rng);
        const auto ch = KrausChannel::correlated_amplitude_damping(lambda, n);
        const DenseMatrix before = as_dense_rho(rho);
        DenseMatrix expected = DenseMatrix::Zero(before.rows(), before.cols());
        for (const auto &k : ch.kraus_operators()) {
            const DenseMatrix K = from_row_major(k, rho.dim());
            expected += K * before * K.adjoint();
        }
        const DenseMatrix after = as_dense_rho(apply_channel(rho, ch));
        EXPECT_LT((after - expected).cwiseAbs().maxCoeff(), 1e-14);
        EXPECT_NEAR(after.trace().real(), 1.0, 1e-12);
        EXPECT_LT((after - after.adjoint()).cwiseAbs().maxCoeff(), 1e-15);
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(after);
        EXPECT_GT(es.eigenvalues().minCoeff(), -1e-12);
    }
}

TEST(Channel, BellClosedForm) {
    for (double lambda : {0.0, 0.1, 0.2, 0.5, 1.0}) {
        auto rho = zero_state(2, Backend::DensityMatrix);
        rho.apply(Gate::h(0));
        rho.apply(Gate::cnot(0, 1));
        rho = apply_channel(rho, KrausChannel::correlated_amplitude_damping(lambda, 2));
        const auto p = probabilities(rho);
        EXPECT_NEAR(p[0], 0.5 + lambda / 2.0, 1e-12);
        EXPECT_NEAR(p[1], 0.0, 1e-15);
        EXPECT_NEAR(p[2], 0.0, 1e-15);
        EXPECT_NEAR(p[3], 0.5 * (1.0 - lambda), 1e-12);
        EXPECT_NEAR(std::abs(rho.element(0, 3)), 0.5 * std::sqrt(1.0 - lambda), 1e-12);
    }
}

TEST(Channel, ZeroStrengthIsIdentity) {
    auto rho = zero_state(3, Backend::DensityMatrix);
    rho.apply(Gate::h(0));
    rho.apply(Gate::cnot(0, 2));
    const auto out = apply_channel(rho, KrausChannel::correlated_amplitude_damping(0.0, 3));
    for (std::size_t i = 0; i < rho.data().size(); ++i) {
        EXPECT_EQ(out.data()[i], rho.data()[i]);
    }
}

TEST(Encoding, NormalizesAndPads) {
    const std::vector<double> x{3.0, 4.0};
    const auto s = amplitude_encode(x, 2);
    EXPECT_NEAR(s.amplitude(0).real(), 0.6, 1e-15);
    EXPECT_NEAR(s.amplitude(1).real(), 0.8, 1e-15);
    EXPECT_EQ(s.amplitude(2), Complex(0.0));
    EXPECT_EQ(s.amplitude(3), Complex(0.0));
}

TEST(Errors, AreTyped) {
    EXPECT_THROW(zero_state(0, Backend::Statevector), ConfigError);
    EXPECT_THROW(zero_state(max_qubits + 1, Backend::Statevector), ConfigError);
    auto s = zero_state(2, Backend::Statevector);
    EXPECT_THROW(s.apply(Gate::h(2)), IndexError);
    EXPECT_THROW(Gate::cnot(1, 1), ConfigError);
    const std::vector<double> theta{0.1};
    EXPECT_THROW(s.apply(Gate::ry(0, ParamIndex{3}), theta), IndexError);
    EXPECT_THROW(apply_channel(s, KrausChannel::correlated_amplitude_damping(0.1, 2)),
                 BackendMismatchError);
    EXPECT_THROW(apply_channel(zero_state(3, Backend::DensityMatrix),
                               KrausChannel::correlated_amplitude_damping(0.1, 2)),
                 ShapeError);
    EXPECT_THROW(KrausChannel::correlated_amplitude_damping(1.5, 2), ConfigError);
    EXPECT_THROW(KrausChannel::correlated_amplitude_damping(-0.1, 2), ConfigError);
    EXPECT_THROW(expectation(s, Observable::tensor_z(3)), ShapeError);
    EXPECT_THROW(Observable::projector_zero(2, 2), IndexError);
    EXPECT_THROW((void)s.element(0, 0), BackendMismatchError);
    const std::vector<double> big(5, 1.0), zeros(4, 0.0);
    EXPECT_THROW(amplitude_encode(big, 2), CapacityError);
    EXPECT_THROW(amplitude_encode(zeros, 2), EncodingError);
}

} // namespace
