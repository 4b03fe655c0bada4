// Copyright 2026 The glassbench Authors
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

#include "glassbench/rng.hpp"

#include "glassbench/error.hpp"

namespace glassbench {

std::uint64_t derive_seed(std::uint64_t master, std::span<const std::uint64_t> tags) noexcept {
    std::uint64_t state = mix64(master ^ 0x6a09e667f3bcc909ULL);
    std::uint64_t position = 1;
    for (std::uint64_t tag : tags) {
        state = mix64(state ^ mix64(tag + 0x9e3779b97f4a7c15ULL * position));
        ++position;
    }
    return state;
}

std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> tags) noexcept {
    return derive_seed(master, std::span<const std::uint64_t>(tags.begin(), tags.size()));
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) fail(ErrorCode::InvalidArgument, "Rng::below requires n > 0");
    // Largest multiple of n representable; draws above it are rejected.
    const std::uint64_t limit = std::uint64_t(-1) - (std::uint64_t(-1) % n + 1) % n;
    std::uint64_t x;
    do {
        x = engine_();
    } while (x > limit);
    return x % n;
}

const char* error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::MaskMismatch: return "MaskMismatch";
        case ErrorCode::CountExceeded: return "CountExceeded";
        case ErrorCode::EmptyGraph: return "EmptyGraph";
        case ErrorCode::IncompleteAssignment: return "IncompleteAssignment";
        case ErrorCode::NotFullCube: return "NotFullCube";
        case ErrorCode::CapacityExceeded: return "CapacityExceeded";
        case ErrorCode::WrongFamily: return "WrongFamily";
        case ErrorCode::RangeViolation: return "RangeViolation";
        case ErrorCode::TooLarge: return "TooLarge";
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::EmptyGroup: return "EmptyGroup";
        case ErrorCode::WrongCount: return "WrongCount";
        case ErrorCode::NoOverlap: return "NoOverlap";
        case ErrorCode::Io: return "Io";
        case ErrorCode::Parse: return "Parse";
        case ErrorCode::Config: return "Config";
    }
    return "Unknown";
}

}  // namespace glassbench
