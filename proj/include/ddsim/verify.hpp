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
#include <cstddef>
#include <functional>
#include <ostream>
#include <random>
#include <string>
#include <vector>

#include "ddsim/analytic.hpp"
#include "ddsim/evolution.hpp"
#include "ddsim/experiment.hpp"
#include "ddsim/optimizer.hpp"
#include "ddsim/sequences.hpp"
#include "ddsim/su2.hpp"

namespace ddsim {

struct CheckResult {
    std::string name;
    double measured = 0;
    double tolerance = 0;
    bool passed = false;
    std::string error;
};

struct VerifyReport {
    std::vector<CheckResult> checks;

    bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.passed; });
    }
};

namespace detail {

/// Runs one check; an exception marks it failed instead of aborting.
inline CheckResult run_check(const std::string &name, double tolerance, const std::function<double()> &measure) {
    CheckResult r{name, 0, tolerance, false, {}};
    try {
        r.measured = measure();
        r.passed = std::isfinite(r.measured) && r.measured <= tolerance;
    } catch (const std::exception &e) {
        r.error = e.what();
    }
    return r;
}

}  // namespace detail

/// Cross-module invariant suite. Every check reports the worst deviation it
/// saw next to its tolerance.
inline VerifyReport run_verify(std::uint64_t seed = 0) {
    VerifyReport report;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    auto random_fractions = [&](std::size_t n) {
        std::vector<double> v(n);
        for (auto &x : v) x = 0.02 + 0.96 * unit(rng);
        std::sort(v.begin(), v.end());
        return PulseFractions::validate(v);
    };
    auto add = [&](const std::string &name, double tol, const std::function<double()> &f) {
        report.checks.push_back(detail::run_check(name, tol, f));
    };

    add("unitarity of rotating propagator", unitarity_tol, [&] {
        double worst = 0;
        for (int i = 0; i < 2000; ++i) {
            const SystemParams p{0.1 + 5 * unit(rng), 20 * (unit(rng) - 0.5), 0};
            const double t = 100 / p.rabi_frequency * unit(rng);
            const auto m = rotating_propagator(p, t);
            worst = std::max(worst, max_abs(m.adjoint() * m - Mat2::identity()));
        }
        return worst;
    });

    add("group property M(t1)M(t2) = M(t1+t2)", 1e-12, [&] {
        double worst = 0;
        for (int i = 0; i < 2000; ++i) {
            const SystemParams p{0.1 + 5 * unit(rng), 20 * (unit(rng) - 0.5), 0};
            const double t1 = 10 * unit(rng), t2 = 10 * unit(rng);
            worst = std::max(worst, max_abs(rotating_propagator(p, t1) * rotating_propagator(p, t2) -
                                            rotating_propagator(p, t1 + t2)));
        }
        return worst;
    });

    add("norm preservation over 1000-step chains", 1e-10, [&] {
        double worst = 0;
        for (int trial = 0; trial < 20; ++trial) {
            const SystemParams p{0.1 + 5 * unit(rng), 20 * (unit(rng) - 0.5), 0};
            State2 s{{0.6, 0.0}, {0.0, 0.8}};
            for (int k = 0; k < 1000; ++k) {
                s = apply(rotating_propagator(p, unit(rng)), s);
                if (k % 3 == 0) s = apply(pulse_operator(), s);
            }
            worst = std::max(worst, std::abs(s.norm_squared() - 1));
        }
        return worst;
    });

    add("resonant interaction-picture matrix vs rotating frame", 1e-14, [&] {
        double worst = 0;
        const auto z = pulse_operator();
        for (double t : {0.1, 1.0, 10.0}) {
            const auto rot = rotating_propagator(SystemParams{1.0, 0.0, 0}, t);
            worst = std::max(worst, max_abs(zero_detuning_propagator(1.0, t) - z * rot * z));
        }
        return worst;
    });

    add("udd symmetry delta_i + delta_{n+1-i} = 1, n <= 64", 1e-15, [] {
        double worst = 0;
        for (std::size_t n = 1; n <= 64; ++n) {
            const auto s = udd(n);
            for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(s[i] + s[n - 1 - i] - 1));
        }
        return worst;
    });

    add("udd alternating sum equals (-1)^n / 2", 1e-12, [] {
        double worst = 0;
        for (std::size_t n = 1; n <= 64; ++n) {
            const auto s = udd(n);
            double alt = 0;
            for (std::size_t k = 1; k <= n; ++k) alt += (k % 2 == 0 ? 1.0 : -1.0) * s[k - 1];
            worst = std::max(worst, std::abs(alt - (n % 2 == 0 ? 0.5 : -0.5)));
        }
        return worst;
    });

    add("zero detuning parity results", 1e-12, [] {
        double worst = 0;
        for (double omega_t : {0.7, 3.0, 12.5, 40.0}) {
            const SystemParams p{1.0, 0.0, omega_t};
            for (std::size_t n = 1; n <= 10; ++n) {
                worst = std::max(worst, transition_probability(p, udd(n)));
                const double eq = transition_probability(p, equidistant(n));
                if (n % 2 == 1) {
                    worst = std::max(worst, eq);
                } else {
                    const double s = std::sin(omega_t / (2.0 * static_cast<double>(n + 1)));
                    worst = std::max(worst, std::abs(eq - s * s));
                }
            }
        }
        return worst;
    });

    add("Newton solve vs udd timing, n <= 8", 1e-8, [] {
        double worst = 0;
        for (std::size_t n = 1; n <= 8; ++n) {
            const auto sol = solve_derivative_conditions(n);
            const auto ref = udd(n);
            for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(sol.fractions[i] - ref[i]));
        }
        return worst;
    });

    add("first-order forms agree (relative)", 1e-10, [&] {
        double worst = 0;
        for (int trial = 0; trial < 200; ++trial) {
            const std::size_t n = 1 + static_cast<std::size_t>(unit(rng) * 8);
            const double x = static_cast<double>(n + 1) * (1 + 3 * unit(rng));
            const double delta = 1 + 10 * unit(rng);
            const double t = x / delta;
            const auto frac = random_fractions(n);
            const double a = perturbative_amplitude_tau(1.0, delta, to_intervals(frac, t)).norm();
            const double b = perturbative_probability(1.0, delta, t, frac);
            worst = std::max(worst, std::abs(a - b) / b);
            const double e9 = perturbative_probability(1.0, delta, t, equidistant(n));
            worst = std::max(worst, std::abs(equidistant_closed_form(1.0, delta, t, n) - e9) / e9);
            const double u9 = perturbative_probability(1.0, delta, t, udd(n));
            if (u9 > 1e-8) worst = std::max(worst, std::abs(udd_closed_sum(1.0, delta, t, n) - u9) / u9);
        }
        return worst;
    });

    add("first order vs exact, error / (Omega/Delta)^2", 10, [&] {
        double worst = 0;
        for (double ratio : {20.0, 50.0, 100.0}) {
            for (int trial = 0; trial < 100; ++trial) {
                const std::size_t n = static_cast<std::size_t>(unit(rng) * 7);
                const auto frac = random_fractions(n);
                const double t = (0.5 + (pi<double>() - 0.5) * unit(rng)) / ratio;
                const double exact = transition_probability(SystemParams{1.0, ratio, t}, frac);
                const double approx = perturbative_probability(1.0, ratio, t, frac);
                worst = std::max(worst, std::abs(approx - exact) / exact * ratio * ratio);
            }
        }
        return worst;
    });

    return report;
}

inline void print_report(std::ostream &os, const VerifyReport &report) {
    for (const auto &c : report.checks) {
        os << (c.passed ? "PASS " : "FAIL ") << c.name << ": measured " << format_real(c.measured) << " tol "
           << format_real(c.tolerance);
        if (!c.error.empty()) os << " error: " << c.error;
        os << '\n';
    }
}

}  // namespace ddsim
