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
#include <vector>

#include "ddsim/errors.hpp"
#include "ddsim/sequences.hpp"
#include "ddsim/su2.hpp"

namespace ddsim {

enum class PulseEdge { None, Pre, Post };

template <class Real>
struct BasicTrajectoryPoint {
    Real time{};
    BasicComplex<Real> c_e;
    BasicComplex<Real> c_g;
    Real p_e{};
    Real p_g{};
    PulseEdge pulse_edge = PulseEdge::None;
};

/// Full N-pulse propagator M(tau_{N+1}) Pi M(tau_N) ... Pi M(tau_1).
template <class Real>
BasicMat2<Real> sequence_propagator(const BasicSystemParams<Real> &params, const BasicPulseFractions<Real> &seq) {
    validate(params);
    if (params.total_time == 0) return BasicMat2<Real>::identity();
    const auto iv = to_intervals(seq, params.total_time);
    const auto pulse = pulse_operator<Real>();
    BasicMat2<Real> total = rotating_propagator(params, iv.durations.front());
    for (std::size_t k = 1; k < iv.size(); ++k) {
        total = rotating_propagator(params, iv.durations[k]) * (pulse * total);
    }
    return total;
}

/// Final state after the sequence. Intervals are applied in time order to
/// the state directly, interval one first.
template <class Real>
BasicState2<Real> evolve_final(const BasicSystemParams<Real> &params, const BasicPulseFractions<Real> &seq,
                               const BasicState2<Real> &initial) {
    validate(params);
    if (params.total_time == 0) return initial;
    const auto iv = to_intervals(seq, params.total_time);
    const auto pulse = pulse_operator<Real>();
    BasicState2<Real> state = apply(rotating_propagator(params, iv.durations.front()), initial);
    for (std::size_t k = 1; k < iv.size(); ++k) {
        state = apply(rotating_propagator(params, iv.durations[k]), apply(pulse, state));
    }
    return state;
}

/// |c_e(T)|^2 starting from the ground state.
template <class Real>
Real transition_probability(const BasicSystemParams<Real> &params, const BasicPulseFractions<Real> &seq) {
    return evolve_final(params, seq, BasicState2<Real>::ground()).p_e();
}

/// Time-resolved evolution. Emits the initial point, then samples_per_interval
/// evenly spaced points per interval (the last one on the interval end). A
/// pulse yields two points with the same time stamp, tagged Pre and Post.
template <class Real>
std::vector<BasicTrajectoryPoint<Real>> trajectory(const BasicSystemParams<Real> &params,
                                                   const BasicPulseFractions<Real> &seq,
                                                   const BasicState2<Real> &initial,
                                                   std::size_t samples_per_interval) {
    validate(params);
    if (samples_per_interval < 1) throw Error(ErrorCode::InvalidConfig, "samples_per_interval must be >= 1");

    std::vector<BasicTrajectoryPoint<Real>> out;
    auto emit = [&](const Real &t, const BasicState2<Real> &s, PulseEdge edge) {
        out.push_back({t, s.c_e, s.c_g, s.p_e(), s.p_g(), edge});
    };
    emit(Real(0), initial, PulseEdge::None);
    if (params.total_time == 0) return out;

    const auto iv = to_intervals(seq, params.total_time);
    out.reserve(1 + iv.size() * samples_per_interval + seq.size());
    const auto pulse = pulse_operator<Real>();
    BasicState2<Real> entry = initial;
    Real start = 0;
    for (std::size_t k = 0; k < iv.size(); ++k) {
        const Real tau = iv.durations[k];
        const bool pulse_follows = k + 1 < iv.size();
        for (std::size_t j = 1; j <= samples_per_interval; ++j) {
            const bool last = j == samples_per_interval;
            const Real dt = last ? tau : tau * Real(j) / Real(samples_per_interval);
            // the interval end sits on the pulse time itself, not start + tau
            const Real t = last ? (pulse_follows ? params.total_time * seq[k] : params.total_time) : start + dt;
            const auto s = apply(rotating_propagator(params, dt), entry);
            if (last) {
                if (pulse_follows) {
                    emit(t, s, PulseEdge::Pre);
                    entry = apply(pulse, s);
                    emit(t, entry, PulseEdge::Post);
                } else {
                    emit(t, s, PulseEdge::None);
                }
            } else {
                emit(t, s, PulseEdge::None);
            }
        }
        if (pulse_follows) start = params.total_time * seq[k];
    }
    return out;
}

using TrajectoryPoint = BasicTrajectoryPoint<double>;

}  // namespace ddsim
