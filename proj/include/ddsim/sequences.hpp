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

#include <cstddef>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ddsim/errors.hpp"
#include "ddsim/su2.hpp"

namespace ddsim {

/// Pulse times as fractions of the total time, strictly inside (0, 1) and
/// strictly increasing. An empty list means no pulses. Only constructible
/// through validation, so every instance satisfies the ordering.
template <class Real>
class BasicPulseFractions {
public:
    BasicPulseFractions() = default;

    /// Accepts iff the values are strictly increasing and strictly inside
    /// (0, 1). Range is checked before ordering, element by element.
    static BasicPulseFractions validate(std::vector<Real> raw) {
        for (std::size_t i = 0; i < raw.size(); ++i) {
            if (!(raw[i] > 0 && raw[i] < 1)) {
                throw Error(ErrorCode::OutOfRange,
                            "pulse fraction #" + std::to_string(i + 1) + " is not strictly inside (0, 1)");
            }
            if (i > 0 && raw[i] == raw[i - 1]) {
                throw Error(ErrorCode::DuplicateTime, "pulse fractions #" + std::to_string(i) + " and #" +
                                                          std::to_string(i + 1) + " coincide");
            }
            if (i > 0 && raw[i] < raw[i - 1]) {
                throw Error(ErrorCode::NotSorted, "pulse fraction #" + std::to_string(i + 1) +
                                                      " is smaller than its predecessor");
            }
        }
        BasicPulseFractions out;
        out.fractions_ = std::move(raw);
        return out;
    }

    const std::vector<Real> &values() const noexcept { return fractions_; }
    std::size_t size() const noexcept { return fractions_.size(); }
    bool empty() const noexcept { return fractions_.empty(); }
    const Real &operator[](std::size_t i) const { return fractions_[i]; }
    auto begin() const noexcept { return fractions_.begin(); }
    auto end() const noexcept { return fractions_.end(); }

    template <class Other>
    BasicPulseFractions<Other> cast() const {
        std::vector<Other> v;
        v.reserve(fractions_.size());
        for (const auto &f : fractions_) v.push_back(static_cast<Other>(f));
        return BasicPulseFractions<Other>::validate(std::move(v));
    }

    friend bool operator==(const BasicPulseFractions &, const BasicPulseFractions &) = default;

private:
    std::vector<Real> fractions_;
};

/// Durations between consecutive pulses, N + 1 entries for N pulses.
template <class Real>
struct BasicIntervals {
    std::vector<Real> durations;
    Real total{};

    std::size_t size() const noexcept { return durations.size(); }
};

template <class Real = double>
BasicPulseFractions<Real> equidistant(std::size_t n) {
    std::vector<Real> v;
    v.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) v.push_back(Real(i) / Real(n + 1));
    return BasicPulseFractions<Real>::validate(std::move(v));
}

/// Uhrig timing, delta_i = sin^2(pi i / (2n + 2)). The upper half is filled
/// by reflection so that delta_i + delta_{n+1-i} = 1 holds to rounding.
template <class Real = double>
BasicPulseFractions<Real> udd(std::size_t n) {
    using std::sin;
    std::vector<Real> v(n);
    const Real step = pi<Real>() / Real(2 * n + 2);
    for (std::size_t i = 1; i <= n; ++i) {
        const std::size_t mirror = n + 1 - i;
        if (mirror < i) {
            v[i - 1] = Real(1) - v[mirror - 1];
        } else if (mirror == i) {
            v[i - 1] = Real(1) / Real(2);
        } else {
            const Real s = sin(step * Real(i));
            v[i - 1] = s * s;
        }
    }
    return BasicPulseFractions<Real>::validate(std::move(v));
}

template <class Real>
BasicIntervals<Real> to_intervals(const BasicPulseFractions<Real> &frac, const Real &total_time) {
    if (!(total_time > 0)) throw Error(ErrorCode::InvalidParams, "total time must be positive");
    BasicIntervals<Real> iv;
    iv.total = total_time;
    iv.durations.reserve(frac.size() + 1);
    Real prev = 0;
    for (const auto &d : frac) {
        iv.durations.push_back(total_time * (d - prev));
        prev = d;
    }
    iv.durations.push_back(total_time * (Real(1) - prev));
    return iv;
}

/// Reads one fraction per line. Blank lines and text after '#' are ignored.
inline BasicPulseFractions<double> read_sequence(std::istream &in) {
    std::vector<double> raw;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        double value;
        if (!(ls >> value)) {
            std::string rest;
            if (std::istringstream(line) >> rest) {
                throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(lineno) + ": not a number");
            }
            continue;
        }
        std::string trailing;
        if (ls >> trailing) {
            throw Error(ErrorCode::InvalidConfig, "line " + std::to_string(lineno) + ": unexpected text after value");
        }
        raw.push_back(value);
    }
    return BasicPulseFractions<double>::validate(std::move(raw));
}

inline BasicPulseFractions<double> load_sequence_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open sequence file '" + path + "'");
    return read_sequence(in);
}

using PulseFractions = BasicPulseFractions<double>;
using Intervals = BasicIntervals<double>;

}  // namespace ddsim
