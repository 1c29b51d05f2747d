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

#include <cmath>
#include <cstddef>

#include "ddsim/errors.hpp"
#include "ddsim/sequences.hpp"
#include "ddsim/su2.hpp"

// Closed-form and first-order expressions for the driven two-level system
// under ideal phase kicks. They serve as independent cross-checks of the
// exact transfer-matrix evolution.

namespace ddsim {

/// Filter sum y(x) = 1 + (-1)^{N+1} e^{ix} + 2 sum_p (-1)^p e^{i x delta_p}.
template <class Real>
struct BasicFilterValue {
    BasicComplex<Real> value;
};

/// Alternating interval sum Theta_{N+1}; only |theta| is physically meaningful.
template <class Real>
struct BasicThetaValue {
    Real theta{};
};

template <class Real>
struct BasicPopulations {
    Real p_g{};
    Real p_e{};
};

namespace detail {

inline int alternating_sign(std::size_t k) { return (k % 2 == 0) ? 1 : -1; }

template <class Real>
void require_detuning(const Real &detuning) {
    if (detuning == 0) throw Error(ErrorCode::ZeroDetuning, "first-order expressions divide by the detuning");
}

}  // namespace detail

/// First-order interaction-picture amplitude summed interval by interval,
/// c_e(T) = -(Omega/2Delta) sum_p (-1)^p (e^{i Delta tau_{p+1}} - 1) e^{i Delta t_p}.
template <class Real>
BasicComplex<Real> perturbative_amplitude_tau(const Real &rabi_frequency, const Real &detuning,
                                              const BasicIntervals<Real> &iv) {
    detail::require_detuning(detuning);
    using C = BasicComplex<Real>;
    C sum;
    Real elapsed = 0;
    for (std::size_t p = 0; p < iv.size(); ++p) {
        const C term = (C::polar_unit(detuning * iv.durations[p]) - C(Real(1))) * C::polar_unit(detuning * elapsed);
        if (p % 2 == 0) sum += term; else sum -= term;
        elapsed += iv.durations[p];
    }
    return (-rabi_frequency / (2 * detuning)) * sum;
}

template <class Real>
BasicFilterValue<Real> filter_sum(const Real &x, const BasicPulseFractions<Real> &frac) {
    using C = BasicComplex<Real>;
    const std::size_t n = frac.size();
    C y(Real(1));
    const C edge = C::polar_unit(x);
    if ((n + 1) % 2 == 0) y += edge; else y -= edge;
    C inner;
    for (std::size_t p = 1; p <= n; ++p) {
        const C term = C::polar_unit(x * frac[p - 1]);
        if (p % 2 == 0) inner += term; else inner -= term;
    }
    return {y + Real(2) * inner};
}

/// |(Omega / 2 Delta) y(Delta T)|^2.
template <class Real>
Real perturbative_probability(const Real &rabi_frequency, const Real &detuning, const Real &total_time,
                              const BasicPulseFractions<Real> &frac) {
    detail::require_detuning(detuning);
    const Real scale = rabi_frequency / (2 * detuning);
    return scale * scale * filter_sum(detuning * total_time, frac).value.norm();
}

/// First-order probability for n equidistant pulses,
/// (Omega/Delta)^2 tan^2(Delta T / (2n+2)) times cos^2(Delta T/2) for even n
/// or sin^2(Delta T/2) for odd n. Throws TangentPole where the tangent
/// diverges; the filter-sum form stays finite there and should be used.
template <class Real>
Real equidistant_closed_form(const Real &rabi_frequency, const Real &detuning, const Real &total_time,
                             std::size_t n) {
    using std::cos;
    using std::sin;
    using std::abs;
    detail::require_detuning(detuning);
    const Real x = detuning * total_time;
    const Real arg = x / Real(2 * n + 2);
    const Real c = cos(arg);
    if (abs(c) <= Real(1e-12)) {
        throw Error(ErrorCode::TangentPole, "Delta T / (2n+2) is an odd multiple of pi/2");
    }
    const Real t = sin(arg) / c;
    const Real parity = (n % 2 == 0) ? cos(x / 2) : sin(x / 2);
    const Real ratio = rabi_frequency / detuning;
    return ratio * ratio * t * t * parity * parity;
}

/// First-order probability for udd(n) as a resummed cosine series,
/// |(Omega/2Delta) sum_{j=-n-1}^{n} (-1)^j e^{(i Delta T/2) cos(pi j/(n+1))}|^2.
template <class Real>
Real udd_closed_sum(const Real &rabi_frequency, const Real &detuning, const Real &total_time, std::size_t n) {
    using std::cos;
    detail::require_detuning(detuning);
    using C = BasicComplex<Real>;
    const long long m = static_cast<long long>(n) + 1;
    const Real half_x = detuning * total_time / 2;
    const Real step = pi<Real>() / Real(m);
    C sum;
    for (long long j = -m; j <= m - 1; ++j) {
        const C term = C::polar_unit(half_x * cos(step * Real(j)));
        if (j % 2 == 0) sum += term; else sum -= term;
    }
    const Real scale = rabi_frequency / (2 * detuning);
    return scale * scale * sum.norm();
}

/// Leading Bessel-term approximation of udd_closed_sum,
/// (4 Omega^2 / Delta^2) (n+1)^2 J_{n+1}^2(Delta T / 2). Meant for Delta T < 2n + 2.
inline double udd_bessel_approx(double rabi_frequency, double detuning, double total_time, std::size_t n) {
    detail::require_detuning(detuning);
    const double order = static_cast<double>(n + 1);
    const double j = std::cyl_bessel_j(order, detuning * total_time / 2);
    const double ratio = rabi_frequency / detuning;
    return 4 * ratio * ratio * order * order * j * j;
}

/// Theta_{N+1} = tau_{N+1} - tau_N + ... +- tau_1.
template <class Real>
BasicThetaValue<Real> theta_from_intervals(const BasicIntervals<Real> &iv) {
    Real theta = 0;
    const std::size_t last = iv.size() - 1;
    for (std::size_t k = 0; k < iv.size(); ++k) {
        if ((last - k) % 2 == 0) theta += iv.durations[k]; else theta -= iv.durations[k];
    }
    return {theta};
}

/// Theta_{N+1} = T (1 + 2 (-1)^{N+1} sum_k (-1)^k delta_k).
template <class Real>
BasicThetaValue<Real> theta_from_fractions(const Real &total_time, const BasicPulseFractions<Real> &frac) {
    const std::size_t n = frac.size();
    Real alt = 0;
    for (std::size_t k = 1; k <= n; ++k) {
        if (k % 2 == 0) alt += frac[k - 1]; else alt -= frac[k - 1];
    }
    const Real sign = ((n + 1) % 2 == 0) ? Real(1) : Real(-1);
    return {total_time * (Real(1) + Real(2) * sign * alt)};
}

/// Resonant populations after any sequence with alternating sum theta:
///   p_g = |c_g(0)|^2 cos^2(Omega theta/2) + |c_e(0)|^2 sin^2(Omega theta/2)
/// and symmetrically for p_e. The incoherent form is exact when
/// c_g(0) conj(c_e(0)) is real, which covers both basis states.
template <class Real>
BasicPopulations<Real> zero_detuning_probabilities(const Real &rabi_frequency, const BasicThetaValue<Real> &theta,
                                                   const BasicState2<Real> &initial) {
    using std::cos;
    using std::sin;
    const Real half = rabi_frequency * theta.theta / 2;
    const Real c2 = cos(half) * cos(half);
    const Real s2 = sin(half) * sin(half);
    return {initial.p_g() * c2 + initial.p_e() * s2, initial.p_e() * c2 + initial.p_g() * s2};
}

/// Same pulse sequence evolved with the resonant interaction-picture
/// transfer matrices instead of the rotating-frame ones.
template <class Real>
BasicState2<Real> zero_detuning_evolve(const Real &rabi_frequency, const Real &total_time,
                                       const BasicPulseFractions<Real> &frac, const BasicState2<Real> &initial) {
    const auto iv = to_intervals(frac, total_time);
    const auto pulse = pulse_operator<Real>();
    BasicState2<Real> state = apply(zero_detuning_propagator(rabi_frequency, iv.durations.front()), initial);
    for (std::size_t k = 1; k < iv.size(); ++k) {
        state = apply(zero_detuning_propagator(rabi_frequency, iv.durations[k]), apply(pulse, state));
    }
    return state;
}

using FilterValue = BasicFilterValue<double>;
using ThetaValue = BasicThetaValue<double>;
using Populations = BasicPopulations<double>;

}  // namespace ddsim
