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
 * @file qsim.hpp
 * Dense n-qubit simulation: statevector and density-matrix backends,
 * rotation/Hadamard/CNOT gates, diagonal observables and the correlated
 * amplitude-damping channel.
 *
 * Qubit 0 is the most significant bit of a computational-basis index, so
 * |10> has index 2. A density matrix is stored row-major; for gate
 * application it is viewed as a 2n-qubit vector whose high n bits index the
 * row, which lets U rho U^dagger reuse the statevector kernels.
 */
#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "errors.hpp"

namespace lles::qsim {

using Complex = std::complex<double>;

inline constexpr std::size_t max_qubits = 14;

enum class Backend { Statevector, DensityMatrix };

enum class GateKind { RX, RY, RZ, H, CNOT };

/// Reference to an entry of the trainable parameter vector.
struct ParamIndex {
    std::size_t index;
    friend bool operator==(const ParamIndex &, const ParamIndex &) = default;
};

/// No angle (H, CNOT), a fixed angle in radians, or a trainable parameter.
using AngleBinding = std::variant<std::monostate, double, ParamIndex>;

struct Gate {
    GateKind kind;
    /// Single-qubit gates use qubits[0]; CNOT is (control, target).
    std::array<std::size_t, 2> qubits{};
    AngleBinding angle{};

    [[nodiscard]] bool is_two_qubit() const noexcept { return kind == GateKind::CNOT; }
    [[nodiscard]] bool is_rotation() const noexcept {
        return kind == GateKind::RX || kind == GateKind::RY || kind == GateKind::RZ;
    }
    [[nodiscard]] bool is_trainable() const noexcept {
        return std::holds_alternative<ParamIndex>(angle);
    }

    static Gate rotation(GateKind kind, std::size_t qubit, AngleBinding angle) {
        if (kind == GateKind::H || kind == GateKind::CNOT) {
            throw ConfigError("rotation gate requires RX, RY or RZ");
        }
        if (std::holds_alternative<std::monostate>(angle)) {
            throw ConfigError("rotation gate requires an angle binding");
        }
        return Gate{kind, {qubit, 0}, angle};
    }
    static Gate rx(std::size_t q, AngleBinding a) { return rotation(GateKind::RX, q, a); }
    static Gate ry(std::size_t q, AngleBinding a) { return rotation(GateKind::RY, q, a); }
    static Gate rz(std::size_t q, AngleBinding a) { return rotation(GateKind::RZ, q, a); }
    static Gate h(std::size_t q) { return Gate{GateKind::H, {q, 0}, {}}; }
    static Gate cnot(std::size_t control, std::size_t target) {
        if (control == target) {
            throw ConfigError("CNOT control and target must differ");
        }
        return Gate{GateKind::CNOT, {control, target}, {}};
    }

    friend bool operator==(const Gate &, const Gate &) = default;
};

using Mat2 = std::array<Complex, 4>; // row-major

/// Matrix of a single-qubit gate; rotations follow R(t) = exp(-i t/2 P).
inline Mat2 single_qubit_matrix(GateKind kind, double angle) {
    const double c = std::cos(angle / 2.0);
    const double s = std::sin(angle / 2.0);
    const Complex i{0.0, 1.0};
    switch (kind) {
    case GateKind::RX:
        return {c, -i * s, -i * s, c};
    case GateKind::RY:
        return {c, -s, s, c};
    case GateKind::RZ:
        return {std::exp(-i * (angle / 2.0)), 0.0, 0.0, std::exp(i * (angle / 2.0))};
    case GateKind::H: {
        const double r = 1.0 / std::sqrt(2.0);
        return {r, r, r, -r};
    }
    case GateKind::CNOT:
        break;
    }
    throw ConfigError("CNOT has no single-qubit matrix");
}

/// Resolve a gate's angle against theta.
inline double resolve_angle(const Gate &gate, std::span<const double> theta) {
    if (const auto *fixed = std::get_if<double>(&gate.angle)) {
        return *fixed;
    }
    if (const auto *p = std::get_if<ParamIndex>(&gate.angle)) {
        if (p->index >= theta.size()) {
            throw IndexError("parameter index " + std::to_string(p->index) +
                             " out of range for theta of length " +
                             std::to_string(theta.size()));
        }
        return theta[p->index];
    }
    return 0.0;
}

namespace detail {

// `stride` is the bit mask of the target qubit inside buf's index.
inline void apply_1q(std::span<Complex> buf, std::size_t stride, const Mat2 &m) {
    const std::size_t size = buf.size();
    for (std::size_t block = 0; block < size; block += 2 * stride) {
        for (std::size_t i = block; i < block + stride; ++i) {
            const Complex a = buf[i];
            const Complex b = buf[i + stride];
            buf[i] = m[0] * a + m[1] * b;
            buf[i + stride] = m[2] * a + m[3] * b;
        }
    }
}

inline void apply_cnot(std::span<Complex> buf, std::size_t control_mask,
                       std::size_t target_mask) {
    for (std::size_t i = 0; i < buf.size(); ++i) {
        if ((i & control_mask) && !(i & target_mask)) {
            std::swap(buf[i], buf[i | target_mask]);
        }
    }
}

inline Mat2 conj(const Mat2 &m) {
    return {std::conj(m[0]), std::conj(m[1]), std::conj(m[2]), std::conj(m[3])};
}

} // namespace detail

class QuantumState {
  public:
    /// |0...0>, or |0...0><0...0| on the density-matrix backend.
    static QuantumState zero(std::size_t n_qubits, Backend backend) {
        check_qubit_count(n_qubits);
        QuantumState s(n_qubits, backend);
        s.data_[0] = 1.0;
        return s;
    }

    /// Statevector from explicit amplitudes; the caller guarantees the norm.
    static QuantumState from_amplitudes(std::vector<Complex> amplitudes) {
        const std::size_t dim = amplitudes.size();
        if (dim < 2 || !std::has_single_bit(dim)) {
            throw ShapeError("amplitude count must be a power of two >= 2");
        }
        const auto n = static_cast<std::size_t>(std::countr_zero(dim));
        check_qubit_count(n);
        QuantumState s(n, Backend::Statevector);
        s.data_ = std::move(amplitudes);
        return s;
    }

    /// Density matrix from a row-major dim x dim buffer.
    static QuantumState from_density_matrix(std::size_t n_qubits,
                                            std::vector<Complex> rho) {
        check_qubit_count(n_qubits);
        const std::size_t dim = std::size_t{1} << n_qubits;
        if (rho.size() != dim * dim) {
            throw ShapeError("density matrix must have dim*dim entries");
        }
        QuantumState s(n_qubits, Backend::DensityMatrix);
        s.data_ = std::move(rho);
        return s;
    }

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_; }
    [[nodiscard]] Backend backend() const noexcept { return backend_; }
    [[nodiscard]] std::size_t dim() const noexcept { return std::size_t{1} << n_; }
    [[nodiscard]] std::span<const Complex> data() const noexcept { return data_; }

    [[nodiscard]] Complex amplitude(std::size_t i) const {
        require(Backend::Statevector);
        return data_.at(i);
    }
    [[nodiscard]] Complex element(std::size_t row, std::size_t col) const {
        require(Backend::DensityMatrix);
        return data_.at(row * dim() + col);
    }

    /// |psi><psi| for a statevector; a copy for a density matrix.
    [[nodiscard]] QuantumState to_density_matrix() const {
        if (backend_ == Backend::DensityMatrix) {
            return *this;
        }
        const std::size_t d = dim();
        QuantumState s(n_, Backend::DensityMatrix);
        for (std::size_t r = 0; r < d; ++r) {
            for (std::size_t c = 0; c < d; ++c) {
                s.data_[r * d + c] = data_[r] * std::conj(data_[c]);
            }
        }
        return s;
    }

    /// In-place gate application.
    void apply(const Gate &gate, std::span<const double> theta = {}) {
        check_target(gate.qubits[0]);
        if (gate.is_two_qubit()) {
            check_target(gate.qubits[1]);
            if (gate.qubits[0] == gate.qubits[1]) {
                throw IndexError("CNOT control and target must differ");
            }
        }
        const std::size_t width = backend_ == Backend::Statevector ? n_ : 2 * n_;
        auto mask = [&](std::size_t virtual_qubit) {
            return std::size_t{1} << (width - 1 - virtual_qubit);
        };
        if (gate.kind == GateKind::CNOT) {
            detail::apply_cnot(data_, mask(gate.qubits[0]), mask(gate.qubits[1]));
            if (backend_ == Backend::DensityMatrix) {
                detail::apply_cnot(data_, mask(n_ + gate.qubits[0]),
                                   mask(n_ + gate.qubits[1]));
            }
            return;
        }
        const Mat2 m = single_qubit_matrix(gate.kind, resolve_angle(gate, theta));
        detail::apply_1q(data_, mask(gate.qubits[0]), m);
        if (backend_ == Backend::DensityMatrix) {
            detail::apply_1q(data_, mask(n_ + gate.qubits[0]), detail::conj(m));
        }
    }

    /// Mutable access for channels; keeps invariants the caller's problem.
    [[nodiscard]] std::span<Complex> mutable_data() noexcept { return data_; }

  private:
    QuantumState(std::size_t n, Backend backend)
        : n_(n), backend_(backend),
          data_(backend == Backend::Statevector ? (std::size_t{1} << n)
                                                : (std::size_t{1} << (2 * n))) {}

    static void check_qubit_count(std::size_t n) {
        if (n < 1 || n > max_qubits) {
            throw ConfigError("n_qubits must be in [1, " + std::to_string(max_qubits) +
                              "], got " + std::to_string(n));
        }
    }
    void check_target(std::size_t q) const {
        if (q >= n_) {
            throw IndexError("qubit " + std::to_string(q) + " out of range for " +
                             std::to_string(n_) + "-qubit state");
        }
    }
    void require(Backend b) const {
        if (backend_ != b) {
            throw BackendMismatchError("operation not available on this backend");
        }
    }

    std::size_t n_;
    Backend backend_;
    std::vector<Complex> data_;
};

inline QuantumState zero_state(std::size_t n_qubits, Backend backend) {
    return QuantumState::zero(n_qubits, backend);
}

inline QuantumState apply_gate(QuantumState state, const Gate &gate,
                               std::span<const double> theta = {}) {
    state.apply(gate, theta);
    return state;
}

// ---------------------------------------------------------------------------
// Observables

enum class ObservableForm { TensorPauliZ, ProjectorZeroOnQubit, ProjectorAllZeros };

/// Observable diagonal in the computational basis.
struct Observable {
    ObservableForm form;
    std::size_t n_qubits;
    std::size_t qubit = 0; // ProjectorZeroOnQubit only

    static Observable tensor_z(std::size_t n) {
        return {ObservableForm::TensorPauliZ, n, 0};
    }
    static Observable projector_zero(std::size_t n, std::size_t q) {
        if (q >= n) {
            throw IndexError("projector qubit out of range");
        }
        return {ObservableForm::ProjectorZeroOnQubit, n, q};
    }
    static Observable projector_all_zeros(std::size_t n) {
        return {ObservableForm::ProjectorAllZeros, n, 0};
    }

    /// Diagonal entry for basis index i.
    [[nodiscard]] double diagonal(std::size_t i) const noexcept {
        switch (form) {
        case ObservableForm::TensorPauliZ:
            return (std::popcount(i) % 2 == 0) ? 1.0 : -1.0;
        case ObservableForm::ProjectorZeroOnQubit:
            return (i >> (n_qubits - 1 - qubit)) & 1U ? 0.0 : 1.0;
        case ObservableForm::ProjectorAllZeros:
            return i == 0 ? 1.0 : 0.0;
        }
        return 0.0;
    }

    friend bool operator==(const Observable &, const Observable &) = default;
};

/// Diagonal readout: |a_i|^2 or rho_ii.
inline std::vector<double> probabilities(const QuantumState &state) {
    const std::size_t d = state.dim();
    const auto data = state.data();
    std::vector<double> p(d);
    if (state.backend() == Backend::Statevector) {
        for (std::size_t i = 0; i < d; ++i) {
            p[i] = std::norm(data[i]);
        }
    } else {
        for (std::size_t i = 0; i < d; ++i) {
            p[i] = data[i * d + i].real();
        }
    }
    return p;
}

inline double expectation(const QuantumState &state, const Observable &obs) {
    if (obs.n_qubits != state.n_qubits()) {
        throw ShapeError("observable acts on " + std::to_string(obs.n_qubits) +
                         " qubits, state has " + std::to_string(state.n_qubits()));
    }
    const auto p = probabilities(state);
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        acc += obs.diagonal(i) * p[i];
    }
    return acc;
}

// ---------------------------------------------------------------------------
// Noise

enum class ChannelKind { CorrelatedAmplitudeDamping };

/**
 * Correlated amplitude damping: |1...1> decays jointly to |0...0> with
 * probability lambda.
 *
 *   K1 = sqrt(lambda) |0...0><1...1|
 *   K0 = I - (1 - sqrt(1 - lambda)) |1...1><1...1|
 */
struct KrausChannel {
    ChannelKind kind = ChannelKind::CorrelatedAmplitudeDamping;
    double lambda = 0.0;
    std::size_t n_qubits = 1;

    static KrausChannel correlated_amplitude_damping(double lambda, std::size_t n) {
        if (!(lambda >= 0.0 && lambda <= 1.0)) {
            throw ConfigError("noise lambda must lie in [0, 1]");
        }
        if (n < 1 || n > max_qubits) {
            throw ConfigError("channel n_qubits out of range");
        }
        return {ChannelKind::CorrelatedAmplitudeDamping, lambda, n};
    }

    /// Dense Kraus operators, row-major dim x dim; meant for verification.
    [[nodiscard]] std::vector<std::vector<Complex>> kraus_operators() const {
        const std::size_t d = std::size_t{1} << n_qubits;
        const std::size_t top = d - 1;
        std::vector<Complex> k0(d * d), k1(d * d);
        for (std::size_t i = 0; i < d; ++i) {
            k0[i * d + i] = 1.0;
        }
        k0[top * d + top] = std::sqrt(1.0 - lambda);
        k1[0 * d + top] = std::sqrt(lambda);
        return {k0, k1};
    }
};

/// rho -> K0 rho K0^dagger + K1 rho K1^dagger, without forming the Kraus matrices.
inline QuantumState apply_channel(QuantumState state, const KrausChannel &channel) {
    if (state.backend() != Backend::DensityMatrix) {
        throw BackendMismatchError("Kraus channels require the density-matrix backend");
    }
    if (channel.n_qubits != state.n_qubits()) {
        throw ShapeError("channel and state qubit counts differ");
    }
    const std::size_t d = state.dim();
    const std::size_t top = d - 1;
    auto rho = state.mutable_data();
    const double keep = std::sqrt(1.0 - channel.lambda);
    const Complex decayed = rho[top * d + top] * channel.lambda;
    // K0 scales row and column `top` by sqrt(1 - lambda).
    for (std::size_t k = 0; k < d; ++k) {
        rho[top * d + k] *= keep;
        rho[k * d + top] *= keep;
    }
    rho[0] += decayed;
    return state;
}

// ---------------------------------------------------------------------------
// Encoding

/// Zero-pad x to 2^n and L2-normalize into a statevector.
inline QuantumState amplitude_encode(std::span<const double> x, std::size_t n_qubits) {
    if (n_qubits < 1 || n_qubits > max_qubits) {
        throw ConfigError("n_qubits out of range");
    }
    const std::size_t d = std::size_t{1} << n_qubits;
    if (x.size() > d) {
        throw CapacityError("feature vector of length " + std::to_string(x.size()) +
                            " does not fit in " + std::to_string(n_qubits) + " qubits");
    }
    double norm2 = 0.0;
    for (double v : x) {
        norm2 += v * v;
    }
    if (norm2 == 0.0 || !std::isfinite(norm2)) {
        throw EncodingError("cannot amplitude-encode a zero or non-finite vector");
    }
    const double inv = 1.0 / std::sqrt(norm2);
    std::vector<Complex> amps(d);
    for (std::size_t i = 0; i < x.size(); ++i) {
        amps[i] = x[i] * inv;
    }
    return QuantumState::from_amplitudes(std::move(amps));
}

} // namespace lles::qsim
