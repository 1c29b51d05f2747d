// Copyright 2026 The ddsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ddsim {

enum class ErrorCode {
    InvalidParams,
    DuplicateTime,
    OutOfRange,
    NotSorted,
    ZeroDetuning,
    TangentPole,
    NoConvergence,
    DegenerateFit,
    InvalidConfig,
    Io,
};

constexpr std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::DuplicateTime: return "DuplicateTime";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::NotSorted: return "NotSorted";
        case ErrorCode::ZeroDetuning: return "ZeroDetuning";
        case ErrorCode::TangentPole: return "TangentPole";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::DegenerateFit: return "DegenerateFit";
        case ErrorCode::InvalidConfig: return "InvalidConfig";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

/// Base exception for every failure raised by the library. The code lets
/// callers branch without parsing messages.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ddsim
