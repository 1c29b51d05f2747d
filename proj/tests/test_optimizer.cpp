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

#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <random>

#include "ddsim/analytic.hpp"
#include "ddsim/optimizer.hpp"
#include "oracles.hpp"

namespace ddsim {
namespace {

using Quad = boost::multiprecision::cpp_bin_float_quad;

TEST(PowerSumResiduals, UddSatisfiesAllConditions) {
    for (std::size_t n = 1; n <= 10; ++n) {
        const auto r = power_sum_residuals(udd(n));
        ASSERT_EQ(r.residuals.size(), n);
        EXPECT_LE(r.max_abs(), 1e-10) << "n=" << n;
    }
}

TEST(PowerSumResiduals, EquidistantFirstCondition) {
    for (std::size_t n = 1; n <= 15; ++n) {
        const double r1 = power_sum_residuals(equidistant(n)).residuals.front();
        if (n % 2 == 0) {
            EXPECT_NEAR(r1, -1.0 / double(n + 1), 1e-14) << "n=" << n;
        } else {
            EXPECT_NEAR(r1, 0.0, 1e-14) << "n=" << n;
        }
    }
}

// r_j equals the j-th derivative of the filter sum at zero divided by i^j.
// Central differences are taken in quad precision so a small step is usable.
TEST(PowerSumResiduals, MatchFiniteDifferencesOfFilterSum) {
    std::mt19937_64 rng(31);
    const Quad h("1e-6");
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = 4 + trial % 5;
        const auto raw = testing::random_fractions(rng, n);
        const auto frac = PulseFractions::validate(raw);
        const auto fq = frac.cast<Quad>();
        auto y = [&](int k) { return filter_sum(Quad(k) * h, fq).value; };
        const auto ym2 = y(-2), ym1 = y(-1), y0 = y(0), yp1 = y(1), yp2 = y(2);
        using C = BasicComplex<Quad>;
        const C d1 = (Quad(1) / (2 * h)) * (yp1 - ym1);
        const C d2 = (Quad(1) / (h * h)) * (yp1 - Quad(2) * y0 + ym1);
        const C d3 = (Quad(1) / (2 * h * h * h)) * (yp2 - Quad(2) * yp1 + Quad(2) * ym1 - ym2);
        const C d4 = (Quad(1) / (h * h * h * h)) * (yp2 - Quad(4) * yp1 + Quad(6) * y0 - Quad(4) * ym1 + ym2);
        // divide by i, -1, -i, 1
        const double fd[4] = {static_cast<double>(d1.im), static_cast<double>(-d2.re), static_cast<double>(-d3.im),
                              static_cast<double>(d4.re)};
        const auto r = power_sum_residuals(frac).residuals;
        for (int j = 0; j < 4; ++j) EXPECT_NEAR(r[static_cast<std::size_t>(j)], fd[j], 1e-6) << "j=" << j + 1;
    }
}

TEST(SolveDerivativeConditions, SmallCases) {
    const auto one = solve_derivative_conditions(1);
    ASSERT_EQ(one.fractions.size(), 1u);
    EXPECT_NEAR(one.fractions[0], 0.5, 1e-15);
    EXPECT_TRUE(one.converged);

    const auto two = solve_derivative_conditions(2);
    EXPECT_NEAR(two.fractions[0], 0.25, 1e-12);
    EXPECT_NEAR(two.fractions[1], 0.75, 1e-12);
}

TEST(SolveDerivativeConditions, RecoversUddUpToTwelvePulses) {
    for (std::size_t n = 1; n <= max_newton_pulses; ++n) {
        const auto sol = solve_derivative_conditions(n);
        EXPECT_TRUE(sol.converged);
        EXPECT_LE(power_sum_residuals(sol.fractions).max_abs(), condition_tol);
        const auto ref = udd(n);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(sol.fractions[i], ref[i], 1e-8) << "n=" << n << " i=" << i;
    }
}

TEST(SolveDerivativeConditions, RejectsUnsupportedSizes) {
    for (std::size_t n : {0u, 13u}) {
        try {
            solve_derivative_conditions(n);
            FAIL() << "n=" << n;
        } catch (const Error &e) {
            EXPECT_EQ(e.code(), ErrorCode::InvalidConfig);
        }
    }
}

TEST(SolveDerivativeConditions, MultiStartLandsOnOneSolution) {
    std::mt19937_64 rng(8);
    for (std::size_t n = 1; n <= 8; ++n) {
        const auto ref = udd(n);
        int converged = 0;
        for (int start = 0; start < 20; ++start) {
            const auto init = PulseFractions::validate(testing::random_fractions(rng, n, 0.02));
            try {
                const auto sol = solve_derivative_conditions(init);
                ++converged;
                for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(sol.fractions[i], ref[i], 1e-6) << "n=" << n;
            } catch (const NoConvergenceError &e) {
                EXPECT_GT(e.best().objective_value, condition_tol);
            }
        }
        EXPECT_GT(converged, 0) << "n=" << n;
    }
}

TEST(MinimizeTransition, SinglePulseOnResonance) {
    const auto r = minimize_transition(SystemParams{1, 0, 2.0}, 1, 4);
    EXPECT_TRUE(r.converged);
    EXPECT_NEAR(r.fractions[0], 0.5, 1e-6);
    EXPECT_LE(r.objective_value, 1e-12);
}

TEST(MinimizeTransition, NeverWorseThanUddAtHalfRabiCycle) {
    const SystemParams p{1, 1, M_PI / std::sqrt(2.0)};
    const auto r = minimize_transition(p, 2, 8);
    EXPECT_LE(r.objective_value, transition_probability(p, udd(2)) + 1e-10);
    EXPECT_NEAR(transition_probability(p, r.fractions), r.objective_value, 1e-15);
}

TEST(MinimizeTransition, ResonantOptimumMatchesUdd) {
    for (std::size_t n = 2; n <= 6; ++n) {
        const SystemParams p{1, 0, M_PI};
        const auto r = minimize_transition(p, n, 8);
        EXPECT_GE(r.objective_value, transition_probability(p, udd(n)) - 1e-10) << "n=" << n;
    }
}

TEST(MinimizeTransition, DeterministicForFixedSeed) {
    const SystemParams p{1, 3, 1.3};
    MinimizeOptions opt;
    opt.seed = 42;
    const auto a = minimize_transition(p, 3, 6, opt);
    const auto b = minimize_transition(p, 3, 6, opt);
    EXPECT_EQ(a.fractions, b.fractions);
    EXPECT_EQ(a.objective_value, b.objective_value);
    EXPECT_EQ(a.iterations, b.iterations);
}

TEST(MinimizeTransition, Errors) {
    EXPECT_THROW(minimize_transition(SystemParams{1, 0, 1}, 0, 4), Error);
    EXPECT_THROW(minimize_transition(SystemParams{1, 0, 1}, 2, 0), Error);
    EXPECT_THROW(minimize_transition(SystemParams{0, 0, 1}, 2, 2), Error);
}

TEST(MinimizeTransition, ReportsNoConvergenceWithBestPoint) {
    MinimizeOptions opt;
    opt.max_iterations_per_dim = 1;
    opt.polish_rounds = 0;
    try {
        minimize_transition(SystemParams{1, 1, 2}, 3, 2, opt);
        FAIL();
    } catch (const NoConvergenceError &e) {
        EXPECT_EQ(e.code(), ErrorCode::NoConvergence);
        EXPECT_EQ(e.best().fractions.size(), 3u);
        EXPECT_TRUE(std::isfinite(e.best().objective_value));
    }
}

TEST(SuppressionOrder, Examples) {
    EXPECT_NEAR(suppression_order(udd<Quad>(3), Quad(1)), 8.0, 0.1);
    EXPECT_LE(suppression_order(equidistant<Quad>(4), Quad(1)), 4.0);
    EXPECT_NEAR(suppression_order(PulseFractions{}, 1.0), 2.0, 0.05);
}

TEST(SuppressionOrder, StrictlyIncreasingForUdd) {
    double prev = 0;
    for (std::size_t n = 0; n <= 6; ++n) {
        const double order = suppression_order(udd<Quad>(n), Quad(1));
        EXPECT_NEAR(order, 2.0 * double(n + 1), 0.1) << "n=" << n;
        EXPECT_GT(order, prev);
        prev = order;
    }
}

TEST(SuppressionOrder, DegenerateWhenProbabilityVanishes) {
    try {
        suppression_order(PulseFractions::validate({0.5}), 0.0);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::DegenerateFit);
    }
}

}  // namespace
}  // namespace ddsim
