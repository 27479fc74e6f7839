// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The simopt Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace simopt {

using Rng = std::mt19937_64;

// Seed for an independent substream: FNV-1a over the purpose tag, mixed with
// the master seed through splitmix64. Stable across releases; do not change.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view purpose)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : purpose) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    std::uint64_t z = master ^ h;
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline Rng make_substream(std::uint64_t master, std::string_view purpose)
{
    return Rng(derive_seed(master, purpose));
}

// Substream tags used throughout the project.
namespace stream {
inline constexpr std::string_view kChannel = "channel";
inline constexpr std::string_view kInit = "init";
inline constexpr std::string_view kExploration = "exploration";
inline constexpr std::string_view kEvaluation = "evaluation";
inline constexpr std::string_view kReplay = "replay";
inline constexpr std::string_view kPhase = "phase";
inline constexpr std::string_view kSmoothing = "smoothing";
}  // namespace stream

}  // namespace simopt
