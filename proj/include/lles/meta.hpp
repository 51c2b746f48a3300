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
 * @file meta.hpp
 * LSTM meta-optimizer: cell forward pass, the T-step unrolled loop that
 * proposes circuit parameters, the weighted meta-loss, exact
 * backpropagation through time and plain SGD over the LSTM weights.
 *
 * Step t (1..T):
 *   x_t     = [theta_{t-1}; y_{t-1}]
 *   h_t,C_t = LSTM(x_t, h_{t-1}, C_{t-1})
 *   theta_t = theta_{t-1} + W_out h_t + b_out
 *   y_t     = C(theta_t)
 *   L       = (1/T) sum_t w_t y_t
 *
 * The circuit is a black box: backward() consumes the per-step gradients
 * dC/dtheta at each theta_t and differentiates everything else exactly.
 */
#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "grad.hpp"
#include "rng.hpp"

namespace lles::meta {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct LstmParams {
    std::size_t hidden_size = 0;
    std::size_t input_size = 0;
    std::size_t output_size = 0;

    // input -> gate
    MatrixXd W_ii, W_if, W_ig, W_io;
    // hidden -> gate
    MatrixXd W_hi, W_hf, W_hg, W_ho;
    VectorXd b_ii, b_if, b_ig, b_io;
    VectorXd b_hi, b_hf, b_hg, b_ho;
    // hidden -> theta update
    MatrixXd W_out;
    VectorXd b_out;

    static LstmParams zeros(std::size_t hidden, std::size_t input, std::size_t output) {
        if (hidden < 1 || input < 1 || output < 1) {
            throw ConfigError("LSTM sizes must be >= 1");
        }
        LstmParams p;
        p.hidden_size = hidden;
        p.input_size = input;
        p.output_size = output;
        for (auto *w : {&p.W_ii, &p.W_if, &p.W_ig, &p.W_io}) {
            *w = MatrixXd::Zero(hidden, input);
        }
        for (auto *w : {&p.W_hi, &p.W_hf, &p.W_hg, &p.W_ho}) {
            *w = MatrixXd::Zero(hidden, hidden);
        }
        for (auto *b : {&p.b_ii, &p.b_if, &p.b_ig, &p.b_io, &p.b_hi, &p.b_hf, &p.b_hg,
                        &p.b_ho}) {
            *b = VectorXd::Zero(hidden);
        }
        p.W_out = MatrixXd::Zero(output, hidden);
        p.b_out = VectorXd::Zero(output);
        return p;
    }

    /// Visit every tensor in a fixed order as (name, contiguous data).
    template <typename F> void for_each_tensor(F &&f) {
        visit_impl(*this, f);
    }
    template <typename F> void for_each_tensor(F &&f) const {
        visit_impl(*this, f);
    }

    [[nodiscard]] std::size_t n_entries() const {
        std::size_t n = 0;
        for_each_tensor([&](std::string_view, std::span<const double> v) { n += v.size(); });
        return n;
    }

    [[nodiscard]] bool same_shape(const LstmParams &o) const noexcept {
        return hidden_size == o.hidden_size && input_size == o.input_size &&
               output_size == o.output_size;
    }

  private:
    template <typename Self, typename F> static void visit_impl(Self &s, F &f) {
        auto span_of = [](auto &m) {
            using Elem = std::remove_reference_t<decltype(*m.data())>;
            return std::span<Elem>(m.data(), static_cast<std::size_t>(m.size()));
        };
        f("W_ii", span_of(s.W_ii));
        f("W_hi", span_of(s.W_hi));
        f("b_ii", span_of(s.b_ii));
        f("b_hi", span_of(s.b_hi));
        f("W_if", span_of(s.W_if));
        f("W_hf", span_of(s.W_hf));
        f("b_if", span_of(s.b_if));
        f("b_hf", span_of(s.b_hf));
        f("W_ig", span_of(s.W_ig));
        f("W_hg", span_of(s.W_hg));
        f("b_ig", span_of(s.b_ig));
        f("b_hg", span_of(s.b_hg));
        f("W_io", span_of(s.W_io));
        f("W_ho", span_of(s.W_ho));
        f("b_io", span_of(s.b_io));
        f("b_ho", span_of(s.b_ho));
        f("W_out", span_of(s.W_out));
        f("b_out", span_of(s.b_out));
    }
};

/// Gradient of the meta-loss has the same layout as the parameters.
using LstmGrads = LstmParams;

struct LstmState {
    VectorXd h;
    VectorXd C;

    static LstmState zeros(std::size_t hidden) {
        return {VectorXd::Zero(hidden), VectorXd::Zero(hidden)};
    }
};

/// Everything the backward pass needs from one cell application.
struct GateActivations {
    VectorXd x, h_prev, C_prev;
    VectorXd i, f, g, o;
    VectorXd tanh_C;
};

/// min(p, 8). The SGD step on the output head moves theta by roughly
/// lr * |h|^2 * dL/dtheta, and |h|^2 grows with the hidden width; wider
/// defaults make lr = 0.1 meta-training oscillate.
inline std::size_t default_hidden_size(std::size_t p) { return std::min<std::size_t>(p, 8); }

/// Every entry uniform in [-1/sqrt(hidden), 1/sqrt(hidden)].
inline LstmParams init_params(std::size_t hidden, std::size_t input, std::size_t output,
                              std::uint64_t seed) {
    auto params = LstmParams::zeros(hidden, input, output);
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden));
    auto engine = make_engine(seed);
    std::uniform_real_distribution<double> uniform(-bound, bound);
    params.for_each_tensor([&](std::string_view, std::span<double> v) {
        for (auto &e : v) {
            e = uniform(engine);
        }
    });
    return params;
}

inline double sigmoid(double a) { return 1.0 / (1.0 + std::exp(-a)); }

inline std::pair<LstmState, GateActivations>
lstm_cell_forward(const LstmParams &P, const VectorXd &x, const LstmState &state) {
    if (static_cast<std::size_t>(x.size()) != P.input_size) {
        throw ShapeError("LSTM input has length " + std::to_string(x.size()) +
                         ", expected " + std::to_string(P.input_size));
    }
    if (static_cast<std::size_t>(state.h.size()) != P.hidden_size ||
        static_cast<std::size_t>(state.C.size()) != P.hidden_size) {
        throw ShapeError("LSTM state does not match hidden size");
    }
    auto sig = [](const VectorXd &a) { return a.unaryExpr(&sigmoid).eval(); };
    GateActivations act;
    act.x = x;
    act.h_prev = state.h;
    act.C_prev = state.C;
    act.i = sig(P.W_ii * x + P.b_ii + P.W_hi * state.h + P.b_hi);
    act.f = sig(P.W_if * x + P.b_if + P.W_hf * state.h + P.b_hf);
    act.g = (P.W_ig * x + P.b_ig + P.W_hg * state.h + P.b_hg).array().tanh().matrix();
    act.o = sig(P.W_io * x + P.b_io + P.W_ho * state.h + P.b_ho);
    LstmState next;
    next.C = act.f.cwiseProduct(state.C) + act.i.cwiseProduct(act.g);
    act.tanh_C = next.C.array().tanh().matrix();
    next.h = act.o.cwiseProduct(act.tanh_C);
    return {std::move(next), std::move(act)};
}

enum class GradMode { ParameterShift, EvolutionStrategy };

struct UnrollConfig {
    std::size_t T = 2;
    std::vector<double> weights{1.0, 1.0};
    GradMode grad_mode = GradMode::ParameterShift;
    grad::EsConfig es{};
    double lr = 0.1;
    /// Treat y_{t-1} as a constant LSTM input in the backward pass.
    bool detach_cost_input = false;

    void validate() const {
        if (T < 1) {
            throw ConfigError("T must be >= 1");
        }
        if (weights.size() != T) {
            throw ConfigError("meta-loss weight vector must have length T");
        }
        for (double w : weights) {
            if (!std::isfinite(w)) {
                throw ConfigError("meta-loss weights must be finite");
            }
        }
        if (!(lr > 0.0)) {
            throw ConfigError("learning rate must be positive");
        }
    }
};

struct UnrollStep {
    grad::Vector theta; // theta_t
    double y = 0.0;     // C(theta_t)
    GateActivations act;
    VectorXd h, C;
};

struct UnrollTrace {
    grad::Vector theta0;
    double y0 = 0.0;
    std::vector<UnrollStep> steps;
};

struct UnrollResult {
    UnrollTrace trace;
    double loss = 0.0;
};

inline VectorXd lstm_input(std::span<const double> theta, double y) {
    VectorXd x(static_cast<Eigen::Index>(theta.size() + 1));
    for (std::size_t j = 0; j < theta.size(); ++j) {
        x[static_cast<Eigen::Index>(j)] = theta[j];
    }
    x[static_cast<Eigen::Index>(theta.size())] = y;
    return x;
}

/**
 * Run the T-step loop from theta0. `y0` is C(theta0); when absent it is
 * evaluated here (one forward execution). Each step costs one forward
 * execution for y_t.
 */
inline UnrollResult unroll_forward(const LstmParams &P, const grad::ObjectiveHandle &objective,
                                   std::span<const double> theta0, const UnrollConfig &cfg,
                                   std::optional<double> y0 = std::nullopt) {
    cfg.validate();
    const std::size_t p = theta0.size();
    if (p != objective.p || P.output_size != p || P.input_size != p + 1) {
        throw ShapeError("LSTM sizes do not match the parameter count");
    }
    UnrollResult out;
    out.trace.theta0.assign(theta0.begin(), theta0.end());
    out.trace.y0 = y0 ? *y0 : objective(theta0);

    LstmState state = LstmState::zeros(P.hidden_size);
    grad::Vector theta = out.trace.theta0;
    double y = out.trace.y0;
    for (std::size_t t = 0; t < cfg.T; ++t) {
        auto [next, act] = lstm_cell_forward(P, lstm_input(theta, y), state);
        const VectorXd update = P.W_out * next.h + P.b_out;
        for (std::size_t j = 0; j < p; ++j) {
            theta[j] += update[static_cast<Eigen::Index>(j)];
        }
        y = objective(theta);
        out.loss += cfg.weights[t] * y;
        out.trace.steps.push_back(UnrollStep{theta, y, std::move(act), next.h, next.C});
        state = std::move(next);
    }
    out.loss /= static_cast<double>(cfg.T);
    return out;
}

/**
 * Reverse-mode gradient of the meta-loss with respect to every LSTM tensor.
 *
 * quantum_grads[t] is dC/dtheta evaluated at theta_{t+1}. It enters twice:
 * at the loss node of step t+1 and, unless detach_cost_input is set, through
 * y_{t+1} feeding the next cell's input.
 */
inline LstmGrads unroll_backward(const UnrollTrace &trace, const LstmParams &P,
                                 std::span<const grad::Vector> quantum_grads,
                                 const UnrollConfig &cfg) {
    cfg.validate();
    const std::size_t T = trace.steps.size();
    const std::size_t p = trace.theta0.size();
    if (T != cfg.T || quantum_grads.size() != T) {
        throw ShapeError("trace, config and quantum gradients disagree on T");
    }
    if (P.output_size != p || P.input_size != p + 1) {
        throw ShapeError("trace does not match LSTM parameter shapes");
    }
    for (const auto &q : quantum_grads) {
        if (q.size() != p) {
            throw ShapeError("quantum gradient has wrong length");
        }
    }
    const auto Tn = static_cast<double>(T);
    const auto pi = static_cast<Eigen::Index>(p);

    auto G = LstmParams::zeros(P.hidden_size, P.input_size, P.output_size);
    VectorXd d_theta = VectorXd::Zero(pi); // dL/dtheta_t, accumulated from later steps
    VectorXd d_h = VectorXd::Zero(static_cast<Eigen::Index>(P.hidden_size));
    VectorXd d_C = VectorXd::Zero(static_cast<Eigen::Index>(P.hidden_size));

    auto as_vec = [&](const grad::Vector &v) {
        return Eigen::Map<const VectorXd>(v.data(), pi);
    };

    for (std::size_t s = T; s-- > 0;) {
        const auto &step = trace.steps[s];
        const auto &a = step.act;
        d_theta += (cfg.weights[s] / Tn) * as_vec(quantum_grads[s]);

        // theta_t = theta_{t-1} + W_out h_t + b_out
        G.W_out.noalias() += d_theta * step.h.transpose();
        G.b_out += d_theta;
        d_h += P.W_out.transpose() * d_theta;

        // h_t = o * tanh(C_t)
        const VectorXd d_o = d_h.cwiseProduct(a.tanh_C);
        d_C += d_h.cwiseProduct(a.o).cwiseProduct(
            (1.0 - a.tanh_C.array().square()).matrix());
        const VectorXd d_i = d_C.cwiseProduct(a.g);
        const VectorXd d_g = d_C.cwiseProduct(a.i);
        const VectorXd d_f = d_C.cwiseProduct(a.C_prev);
        const VectorXd d_C_prev = d_C.cwiseProduct(a.f);

        const VectorXd da_i = d_i.cwiseProduct(a.i.cwiseProduct((1.0 - a.i.array()).matrix()));
        const VectorXd da_f = d_f.cwiseProduct(a.f.cwiseProduct((1.0 - a.f.array()).matrix()));
        const VectorXd da_g = d_g.cwiseProduct((1.0 - a.g.array().square()).matrix());
        const VectorXd da_o = d_o.cwiseProduct(a.o.cwiseProduct((1.0 - a.o.array()).matrix()));

        VectorXd d_x = VectorXd::Zero(static_cast<Eigen::Index>(P.input_size));
        VectorXd d_h_prev = VectorXd::Zero(static_cast<Eigen::Index>(P.hidden_size));
        auto accumulate = [&](const VectorXd &da, MatrixXd &gWi, MatrixXd &gWh, VectorXd &gbi,
                              VectorXd &gbh, const MatrixXd &Wi, const MatrixXd &Wh) {
            gWi.noalias() += da * a.x.transpose();
            gWh.noalias() += da * a.h_prev.transpose();
            gbi += da;
            gbh += da;
            d_x.noalias() += Wi.transpose() * da;
            d_h_prev.noalias() += Wh.transpose() * da;
        };
        accumulate(da_i, G.W_ii, G.W_hi, G.b_ii, G.b_hi, P.W_ii, P.W_hi);
        accumulate(da_f, G.W_if, G.W_hf, G.b_if, G.b_hf, P.W_if, P.W_hf);
        accumulate(da_g, G.W_ig, G.W_hg, G.b_ig, G.b_hg, P.W_ig, P.W_hg);
        accumulate(da_o, G.W_io, G.W_ho, G.b_io, G.b_ho, P.W_io, P.W_ho);

        // Flow into theta_{t-1}: the skip connection plus the cell input.
        // theta_0 and y_0 are constants.
        if (s > 0) {
            d_theta += d_x.head(pi);
            if (!cfg.detach_cost_input) {
                d_theta += d_x[pi] * as_vec(quantum_grads[s - 1]);
            }
        }
        d_h = d_h_prev;
        d_C = d_C_prev;
    }
    return G;
}

/// Gradient of C at theta_t for the configured mode. `seed` selects the ES stream.
inline grad::Vector quantum_grads_for_step(const grad::ObjectiveHandle &objective,
                                           std::span<const double> theta_t,
                                           const UnrollConfig &cfg, std::uint64_t seed) {
    if (cfg.grad_mode == GradMode::ParameterShift) {
        return grad::parameter_shift_grad(objective, theta_t);
    }
    grad::EsConfig es = cfg.es;
    es.seed = seed;
    return grad::es_grad_antithetic(objective, theta_t, es);
}

/// v <- v - lr g, entrywise.
inline LstmParams sgd_step(LstmParams params, const LstmGrads &grads, double lr) {
    if (!params.same_shape(grads)) {
        throw ShapeError("gradient shape does not match parameters");
    }
    std::vector<std::span<const double>> g;
    grads.for_each_tensor([&](std::string_view, std::span<const double> v) { g.push_back(v); });
    std::size_t k = 0;
    params.for_each_tensor([&](std::string_view, std::span<double> v) {
        const auto gv = g[k++];
        for (std::size_t j = 0; j < v.size(); ++j) {
            v[j] -= lr * gv[j];
        }
    });
    return params;
}

struct MetaEpochResult {
    UnrollResult forward;
    std::vector<grad::Vector> quantum_grads;
};

/**
 * One meta-training epoch: unroll, one quantum gradient per step, BPTT and
 * an SGD step on `params`. The ES stream of step t is derived from
 * (cfg.es.seed, t).
 */
inline MetaEpochResult meta_epoch(LstmParams &params, const grad::ObjectiveHandle &objective,
                                  std::span<const double> theta0, const UnrollConfig &cfg,
                                  std::optional<double> y0 = std::nullopt) {
    MetaEpochResult r;
    r.forward = unroll_forward(params, objective, theta0, cfg, y0);
    for (std::size_t t = 0; t < cfg.T; ++t) {
        r.quantum_grads.push_back(quantum_grads_for_step(
            objective, r.forward.trace.steps[t].theta, cfg, derive_seed(cfg.es.seed, {t})));
    }
    const auto G = unroll_backward(r.forward.trace, params, r.quantum_grads, cfg);
    params = sgd_step(std::move(params), G, cfg.lr);
    return r;
}

} // namespace lles::meta
