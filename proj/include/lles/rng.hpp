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

#include <cstdint>
#include <initializer_list>
#include <random>

namespace lles {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer; used only to decorrelate derived seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/**
 * Derive a child seed from a parent seed and a path of stream labels.
 *
 * Child streams are a pure function of (parent, path): sample k of an
 * estimator call always sees the same numbers regardless of evaluation
 * order or thread scheduling.
 */
constexpr std::uint64_t derive_seed(std::uint64_t parent,
                                    std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t s = mix64(parent);
    for (auto label : path) {
        s = mix64(s ^ mix64(label + 0x632BE59BD9B4E019ULL));
    }
    return s;
}

inline Engine make_engine(std::uint64_t seed) { return Engine{seed}; }

inline Engine make_engine(std::uint64_t parent,
                          std::initializer_list<std::uint64_t> path) {
    return Engine{derive_seed(parent, path)};
}

// Stream labels for the top-level consumers of a run seed.
namespace stream {
inline constexpr std::uint64_t theta_init = 1;
inline constexpr std::uint64_t lstm_init = 2;
inline constexpr std::uint64_t es = 3;
inline constexpr std::uint64_t dataset = 4;
inline constexpr std::uint64_t shuffle = 5;
inline constexpr std::uint64_t shots = 6;
} // namespace stream

} // namespace lles
