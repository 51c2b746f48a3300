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
 * @file circuits.hpp
 * Parameterized circuit builders and the expectation-value evaluator.
 *
 * Every trainable layer is the same hardware-efficient block: one trainable
 * RY per qubit followed by a linear CNOT chain (i -> i+1).
 */
#pragma once

#include <cmath>
#include <cstddef>
#include <numbers>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "counter.hpp"
#include "errors.hpp"
#include "qsim.hpp"

namespace lles::circuits {

using qsim::Gate;
using qsim::KrausChannel;
using qsim::Observable;
using qsim::ParamIndex;
using qsim::QuantumState;

class Circuit {
  public:
    Circuit(std::size_t n_qubits, std::vector<Gate> gates)
        : n_qubits_(n_qubits), gates_(std::move(gates)) {
        if (n_qubits_ < 1 || n_qubits_ > qsim::max_qubits) {
            throw ConfigError("circuit n_qubits out of range");
        }
        std::set<std::size_t> bound;
        for (const auto &g : gates_) {
            const std::size_t arity = g.is_two_qubit() ? 2 : 1;
            for (std::size_t k = 0; k < arity; ++k) {
                if (g.qubits[k] >= n_qubits_) {
                    throw IndexError("gate target " + std::to_string(g.qubits[k]) +
                                     " out of range");
                }
            }
            if (const auto *p = std::get_if<ParamIndex>(&g.angle)) {
                bound.insert(p->index);
            }
        }
        n_params_ = bound.size();
        if (!bound.empty() && *bound.rbegin() + 1 != n_params_) {
            throw ConfigError("trainable parameter indices must be contiguous from 0");
        }
    }

    [[nodiscard]] std::size_t n_qubits() const noexcept { return n_qubits_; }
    [[nodiscard]] std::size_t n_params() const noexcept { return n_params_; }
    [[nodiscard]] std::span<const Gate> gates() const noexcept { return gates_; }

  private:
    std::size_t n_qubits_;
    std::vector<Gate> gates_;
    std::size_t n_params_ = 0;
};

enum class Encoder { AngleRY, Amplitude };

struct EncodedCircuit {
    Encoder encoder;
    Circuit body;
    std::size_t input_dim;
    /// Measured observables, in output order.
    std::vector<Observable> observables;

    [[nodiscard]] std::size_t n_qubits() const noexcept { return body.n_qubits(); }
    [[nodiscard]] std::size_t n_params() const noexcept { return body.n_params(); }

    /// Fixed-angle encoder gates for AngleRY: qubit q gets RY(x[q mod input_dim]).
    [[nodiscard]] std::vector<Gate> encoder_gates(std::span<const double> x) const {
        if (encoder != Encoder::AngleRY) {
            throw ConfigError("encoder_gates is defined for the angle encoder only");
        }
        check_input(x);
        std::vector<Gate> gates;
        for (std::size_t q = 0; q < n_qubits(); ++q) {
            gates.push_back(Gate::ry(q, x[q % input_dim]));
        }
        return gates;
    }

    void check_input(std::span<const double> x) const {
        if (encoder == Encoder::AngleRY ? x.size() != input_dim : x.size() > input_dim) {
            throw ShapeError("encoder expects " + std::to_string(input_dim) +
                             " features, got " + std::to_string(x.size()));
        }
    }
};

/// Append one trainable layer whose parameters start at `offset`.
inline void append_layer(std::vector<Gate> &gates, std::size_t n_qubits,
                         std::size_t offset) {
    for (std::size_t q = 0; q < n_qubits; ++q) {
        gates.push_back(Gate::ry(q, ParamIndex{offset + q}));
    }
    for (std::size_t q = 0; q + 1 < n_qubits; ++q) {
        gates.push_back(Gate::cnot(q, q + 1));
    }
}

inline std::vector<Gate> layered_body(std::size_t n_qubits, std::size_t layers) {
    std::vector<Gate> gates;
    for (std::size_t l = 0; l < layers; ++l) {
        append_layer(gates, n_qubits, l * n_qubits);
    }
    return gates;
}

/// RY(pi/2) on every qubit, then `layers` trainable layers; p = n * layers.
inline Circuit ground_state_ansatz(std::size_t n_qubits, std::size_t layers) {
    if (n_qubits < 2) {
        throw ConfigError("ground-state ansatz needs at least 2 qubits");
    }
    if (layers < 1) {
        throw ConfigError("ground-state ansatz needs at least 1 layer");
    }
    std::vector<Gate> gates;
    for (std::size_t q = 0; q < n_qubits; ++q) {
        gates.push_back(Gate::ry(q, std::numbers::pi / 2.0));
    }
    auto body = layered_body(n_qubits, layers);
    gates.insert(gates.end(), body.begin(), body.end());
    return Circuit(n_qubits, std::move(gates));
}

inline constexpr std::size_t binary_qnn_layers = 8;

/// Two-feature angle encoder, eight trainable layers, |0><0| on the last qubit.
inline EncodedCircuit binary_qnn(std::size_t n_qubits) {
    if (n_qubits < 2) {
        throw ConfigError("binary QNN needs at least 2 qubits");
    }
    return EncodedCircuit{Encoder::AngleRY,
                          Circuit(n_qubits, layered_body(n_qubits, binary_qnn_layers)),
                          2,
                          {Observable::projector_zero(n_qubits, n_qubits - 1)}};
}

inline constexpr std::size_t mnist_qubits = 10;
inline constexpr std::size_t mnist_layers = 15;
inline constexpr std::size_t mnist_input_dim = 784;

/// Amplitude-encoded 28x28 input, 15 layers, |0><0| on qubits 7, 8 and 9.
inline EncodedCircuit mnist_qnn() {
    std::vector<Observable> obs;
    for (std::size_t q = mnist_qubits - 3; q < mnist_qubits; ++q) {
        obs.push_back(Observable::projector_zero(mnist_qubits, q));
    }
    return EncodedCircuit{Encoder::Amplitude,
                          Circuit(mnist_qubits, layered_body(mnist_qubits, mnist_layers)),
                          mnist_input_dim, std::move(obs)};
}

inline Circuit bell_circuit() {
    return Circuit(2, {Gate::h(0), Gate::cnot(0, 1)});
}

// ---------------------------------------------------------------------------
// Evaluation

namespace detail {

inline void check_theta(const Circuit &c, std::span<const double> theta) {
    if (theta.size() != c.n_params()) {
        throw ShapeError("theta has length " + std::to_string(theta.size()) +
                         ", circuit expects " + std::to_string(c.n_params()));
    }
}

inline QuantumState finish(QuantumState state, const Circuit &body,
                           std::span<const double> theta,
                           const std::optional<KrausChannel> &noise) {
    for (const auto &g : body.gates()) {
        state.apply(g, theta);
    }
    if (noise) {
        state = qsim::apply_channel(std::move(state), *noise);
    }
    return state;
}

} // namespace detail

/// Final state of a plain circuit; density-matrix backend iff noise is given.
inline QuantumState final_state(const Circuit &circuit, std::span<const double> theta,
                                const std::optional<KrausChannel> &noise = std::nullopt) {
    detail::check_theta(circuit, theta);
    auto backend = noise ? qsim::Backend::DensityMatrix : qsim::Backend::Statevector;
    return detail::finish(qsim::zero_state(circuit.n_qubits(), backend), circuit, theta,
                          noise);
}

inline QuantumState final_state(const EncodedCircuit &circuit,
                                std::span<const double> theta,
                                std::span<const double> input,
                                const std::optional<KrausChannel> &noise = std::nullopt) {
    detail::check_theta(circuit.body, theta);
    circuit.check_input(input);
    QuantumState state = [&] {
        if (circuit.encoder == Encoder::Amplitude) {
            return qsim::amplitude_encode(input, circuit.n_qubits());
        }
        auto s = qsim::zero_state(circuit.n_qubits(), qsim::Backend::Statevector);
        for (const auto &g : circuit.encoder_gates(input)) {
            s.apply(g);
        }
        return s;
    }();
    if (noise) {
        state = state.to_density_matrix();
    }
    return detail::finish(std::move(state), circuit.body, theta, noise);
}

/// <obs> after the circuit (and optional noise). Pure; charges nothing.
inline double evaluate(const Circuit &circuit, std::span<const double> theta,
                       const Observable &obs,
                       const std::optional<KrausChannel> &noise = std::nullopt) {
    return qsim::expectation(final_state(circuit, theta, noise), obs);
}

inline double evaluate(const EncodedCircuit &circuit, std::span<const double> theta,
                       const Observable &obs, std::span<const double> input,
                       const std::optional<KrausChannel> &noise = std::nullopt) {
    return qsim::expectation(final_state(circuit, theta, input, noise), obs);
}

/// Counting variant: one circuit execution charged to `counter`.
inline double evaluate(const Circuit &circuit, std::span<const double> theta,
                       const Observable &obs, const std::optional<KrausChannel> &noise,
                       grad::ExecutionCounter &counter,
                       grad::EvalPurpose purpose = grad::EvalPurpose::Forward) {
    const double v = evaluate(circuit, theta, obs, noise);
    counter.charge(purpose);
    return v;
}

/// All measured observables of an encoded circuit from a single execution.
inline std::vector<double> evaluate_all(const EncodedCircuit &circuit,
                                        std::span<const double> theta,
                                        std::span<const double> input,
                                        const std::optional<KrausChannel> &noise = std::nullopt) {
    const auto state = final_state(circuit, theta, input, noise);
    std::vector<double> out;
    out.reserve(circuit.observables.size());
    for (const auto &obs : circuit.observables) {
        out.push_back(qsim::expectation(state, obs));
    }
    return out;
}

} // namespace lles::circuits
