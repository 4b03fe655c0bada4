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

#pragma once

#include <stdexcept>
#include <string>

namespace glassbench {

// Numeric values are shared with the C API status codes in glassbench.h.
enum class ErrorCode : int {
    InvalidArgument = 1,
    MaskMismatch = 2,
    CountExceeded = 3,
    EmptyGraph = 4,
    IncompleteAssignment = 5,
    NotFullCube = 6,
    CapacityExceeded = 7,
    WrongFamily = 8,
    RangeViolation = 9,
    TooLarge = 10,
    DomainError = 11,
    EmptyGroup = 12,
    WrongCount = 13,
    NoOverlap = 14,
    Io = 15,
    Parse = 16,
    Config = 17,
};

const char* error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace glassbench
