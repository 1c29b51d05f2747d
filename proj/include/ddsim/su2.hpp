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

#include <algorithm>
#include <cmath>
#include <complex>

#include "ddsim/errors.hpp"

namespace ddsim {

template <class Real>
Real pi() {
    using std::acos;
    return acos(Real(-1));
}

/// Complex number over an arbitrary real scalar. std::complex<T> is only
/// specified for the built-in floating types; the slope fits need
/// multiprecision amplitudes, so the kernel carries its own.
template <class Real>
struct BasicComplex {
    Real re{};
    Real im{};

    constexpr BasicComplex() = default;
    constexpr BasicComplex(Real r) : re(r), im(0) {}
    constexpr BasicComplex(Real r, Real i) : re(r), im(i) {}

    static BasicComplex polar_unit(const Real &phase) {
        using std::cos;
        using std::sin;
        return {cos(phase), sin(phase)};
    }

    BasicComplex conj() const { return {re, -im}; }
    Real norm() const { return re * re + im * im; }
    Real abs() const {
        using std::sqrt;
        return sqrt(norm());
    }

    BasicComplex &operator+=(const BasicComplex &o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    BasicComplex &operator-=(const BasicComplex &o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }

    friend BasicComplex operator+(BasicComplex a, const BasicComplex &b) { return a += b; }
    friend BasicComplex operator-(BasicComplex a, const BasicComplex &b) { return a -= b; }
    friend BasicComplex operator-(const BasicComplex &a) { return {-a.re, -a.im}; }
    friend BasicComplex operator*(const BasicComplex &a, const BasicComplex &b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    friend BasicComplex operator*(const Real &s, const BasicComplex &a) { return {s * a.re, s * a.im}; }
    friend BasicComplex operator*(const BasicComplex &a, const Real &s) { return {s * a.re, s * a.im}; }
    friend bool operator==(const BasicComplex &a, const BasicComplex &b) { return a.re == b.re && a.im == b.im; }

    std::complex<double> to_std() const { return {static_cast<double>(re), static_cast<double>(im)}; }
};

/// 2x2 complex matrix, row-major entries.
template <class Real>
struct BasicMat2 {
    using complex_type = BasicComplex<Real>;
    complex_type a11, a12, a21, a22;

    static BasicMat2 identity() { return {Real(1), Real(0), Real(0), Real(1)}; }

    BasicMat2 adjoint() const { return {a11.conj(), a21.conj(), a12.conj(), a22.conj()}; }

    friend BasicMat2 operator*(const BasicMat2 &a, const BasicMat2 &b) {
        return {a.a11 * b.a11 + a.a12 * b.a21, a.a11 * b.a12 + a.a12 * b.a22,
                a.a21 * b.a11 + a.a22 * b.a21, a.a21 * b.a12 + a.a22 * b.a22};
    }
    friend BasicMat2 operator-(const BasicMat2 &a, const BasicMat2 &b) {
        return {a.a11 - b.a11, a.a12 - b.a12, a.a21 - b.a21, a.a22 - b.a22};
    }
    friend BasicMat2 operator*(const Real &s, const BasicMat2 &a) {
        return {s * a.a11, s * a.a12, s * a.a21, s * a.a22};
    }
};

/// Amplitudes in the (excited, ground) basis order.
template <class Real>
struct BasicState2 {
    BasicComplex<Real> c_e;
    BasicComplex<Real> c_g;

    static BasicState2 ground() { return {Real(0), Real(1)}; }
    static BasicState2 excited() { return {Real(1), Real(0)}; }

    Real p_e() const { return c_e.norm(); }
    Real p_g() const { return c_g.norm(); }
    Real norm_squared() const { return p_e() + p_g(); }
};

/// Drive parameters: Rabi frequency, detuning (transition minus drive
/// frequency) and total evolution time.
template <class Real>
struct BasicSystemParams {
    Real rabi_frequency{1};
    Real detuning{0};
    Real total_time{0};

    Real generalized_rabi() const {
        using std::sqrt;
        return sqrt(detuning * detuning + rabi_frequency * rabi_frequency);
    }
};

template <class Real>
void validate(const BasicSystemParams<Real> &p) {
    using std::isfinite;
    const bool finite = isfinite(p.rabi_frequency) && isfinite(p.detuning) && isfinite(p.total_time);
    if (!finite || !(p.rabi_frequency > 0) || !(p.total_time >= 0)) {
        throw Error(ErrorCode::InvalidParams, "require finite values, rabi_frequency > 0 and total_time >= 0");
    }
}

template <class Real>
BasicMat2<Real> mat_mul(const BasicMat2<Real> &a, const BasicMat2<Real> &b) {
    return a * b;
}

template <class Real>
BasicState2<Real> apply(const BasicMat2<Real> &m, const BasicState2<Real> &s) {
    return {m.a11 * s.c_e + m.a12 * s.c_g, m.a21 * s.c_e + m.a22 * s.c_g};
}

/// Largest entry modulus of a matrix.
template <class Real>
Real max_abs(const BasicMat2<Real> &m) {
    using std::max;
    return max({m.a11.abs(), m.a12.abs(), m.a21.abs(), m.a22.abs()});
}

template <class Real>
bool is_unitary(const BasicMat2<Real> &m, const Real &tol) {
    return max_abs(m.adjoint() * m - BasicMat2<Real>::identity()) <= tol;
}

/// Rotating-frame transfer matrix for a free interval of length t. Exact
/// exponential of the time-independent rotating-frame generator; obeys
/// M(t1) M(t2) = M(t1 + t2).
template <class Real>
BasicMat2<Real> rotating_propagator(const BasicSystemParams<Real> &params, const Real &t) {
    using std::cos;
    using std::sin;
    const Real omega_r = params.generalized_rabi();
    const Real half = omega_r * t / 2;
    const Real c = cos(half);
    const Real s = sin(half);
    const Real diag_im = params.detuning / omega_r * s;
    const Real off_im = params.rabi_frequency / omega_r * s;
    return {{c, -diag_im}, {Real(0), off_im}, {Real(0), off_im}, {c, diag_im}};
}

/// Ideal instantaneous phase kick: sign flip of the ground amplitude.
template <class Real = double>
BasicMat2<Real> pulse_operator() {
    return {Real(1), Real(0), Real(0), Real(-1)};
}

/// Resonant interaction-picture transfer matrix. Its off-diagonal carries
/// -i sin where the rotating-frame matrix carries +i sin; the two are
/// related by conjugation with the pulse operator.
template <class Real>
BasicMat2<Real> zero_detuning_propagator(const Real &rabi_frequency, const Real &t) {
    using std::cos;
    using std::sin;
    const Real half = rabi_frequency * t / 2;
    const Real c = cos(half);
    const Real s = sin(half);
    return {{c, Real(0)}, {Real(0), -s}, {Real(0), -s}, {c, Real(0)}};
}

using Complex = BasicComplex<double>;
using Mat2 = BasicMat2<double>;
using State2 = BasicState2<double>;
using SystemParams = BasicSystemParams<double>;

inline constexpr double unitarity_tol = 1e-12;

}  // namespace ddsim
