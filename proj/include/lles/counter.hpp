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
#pragma once

#include <atomic>
#include <cstdint>

namespace lles::grad {

/// Why a circuit was executed; optimizer cost comparisons count gradient runs only.
enum class EvalPurpose { Forward, Gradient };

/**
 * Circuit-execution counter.
 *
 * Gradient and forward executions are tallied separately so the gradient
 * subtotal can be compared exactly against the analytic cost of each
 * optimizer. Safe to charge from concurrent evaluations.
 */
class ExecutionCounter {
  public:
    ExecutionCounter() = default;
    ExecutionCounter(const ExecutionCounter &) = delete;
    ExecutionCounter &operator=(const ExecutionCounter &) = delete;

    void charge(EvalPurpose purpose, std::uint64_t n = 1) noexcept {
        (purpose == EvalPurpose::Gradient ? gradient_ : forward_)
            .fetch_add(n, std::memory_order_relaxed);
    }

    [[nodiscard]] std::uint64_t gradient() const noexcept {
        return gradient_.load(std::memory_order_relaxed);
    }
    [[nodiscard]] std::uint64_t forward() const noexcept {
        return forward_.load(std::memory_order_relaxed);
    }
    [[nodiscard]] std::uint64_t total() const noexcept { return gradient() + forward(); }

    /// Only between epochs or runs.
    void reset() noexcept {
        gradient_.store(0, std::memory_order_relaxed);
        forward_.store(0, std::memory_order_relaxed);
    }

  private:
    std::atomic<std::uint64_t> gradient_{0};
    std::atomic<std::uint64_t> forward_{0};
};

} // namespace lles::grad
