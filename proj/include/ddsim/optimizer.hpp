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
#include <cstdint>
#include <functional>
#include <future>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ddsim/errors.hpp"
#include "ddsim/evolution.hpp"
#include "ddsim/sequences.hpp"
#include "ddsim/su2.hpp"

namespace ddsim {

/// r_j = (-1)^{N+1} + 2 sum_p (-1)^p delta_p^j for j = 1..N. r_j vanishes iff
/// the j-th derivative of the filter sum at zero does.
template <class Real>
struct BasicDerivativeResidual {
    std::vector<Real> residuals;

    Real max_abs() const {
        using std::abs;
        Real m = 0;
        for (const auto &r : residuals) m = std::max<Real>(m, abs(r));
        return m;
    }
};

template <class Real>
BasicDerivativeResidual<Real> power_sum_residuals(const BasicPulseFractions<Real> &frac) {
    const std::size_t n = frac.size();
    const Real lead = (n % 2 == 0) ? Real(-1) : Real(1);
    BasicDerivativeResidual<Real> out;
    out.residuals.assign(n, lead);
    for (std::size_t p = 1; p <= n; ++p) {
        const Real sign = (p % 2 == 0) ? Real(2) : Real(-2);
        Real power = 1;
        for (std::size_t j = 1; j <= n; ++j) {
            power *= frac[p - 1];
            out.residuals[j - 1] += sign * power;
        }
    }
    return out;
}

struct OptimizationResult {
    PulseFractions fractions;
    double objective_value = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    bool converged = false;
};

/// Raised when no run met its stopping rule; carries the best point found.
class NoConvergenceError : public Error {
public:
    NoConvergenceError(const std::string &what, OptimizationResult best)
        : Error(ErrorCode::NoConvergence, what), best_(std::move(best)) {}

    const OptimizationResult &best() const noexcept { return best_; }

private:
    OptimizationResult best_;
};

inline constexpr std::size_t max_newton_pulses = 12;
inline constexpr double condition_tol = 1e-10;

/// Newton iteration on the power-sum residuals from an explicit starting
/// sequence. Steps are halved until the residual norm drops and the
/// ordering stays valid.
inline OptimizationResult solve_derivative_conditions(const PulseFractions &initial, std::size_t max_iterations = 200) {
    const std::size_t n = initial.size();
    if (n < 1 || n > max_newton_pulses) {
        throw Error(ErrorCode::InvalidConfig, "Newton solve supports 1 <= n <= " + std::to_string(max_newton_pulses));
    }
    using Vec = Eigen::VectorXd;
    auto residual = [](const PulseFractions &f) {
        const auto r = power_sum_residuals(f).residuals;
        return Vec(Eigen::Map<const Vec>(r.data(), static_cast<Eigen::Index>(r.size())));
    };
    auto try_make = [](const Vec &v) -> std::optional<PulseFractions> {
        try {
            return PulseFractions::validate(std::vector<double>(v.data(), v.data() + v.size()));
        } catch (const Error &) {
            return std::nullopt;
        }
    };

    PulseFractions current = initial;
    Vec r = residual(current);
    OptimizationResult result{current, r.lpNorm<Eigen::Infinity>(), 0, false};
    for (std::size_t it = 0; it < max_iterations; ++it) {
        result.iterations = it;
        if (r.lpNorm<Eigen::Infinity>() <= 1e-13) break;

        const auto nn = static_cast<Eigen::Index>(n);
        Eigen::MatrixXd jac(nn, nn);
        for (Eigen::Index p = 0; p < nn; ++p) {
            const double sign = ((p + 1) % 2 == 0) ? 2.0 : -2.0;
            double power = 1;  // delta_p^{j-1}
            for (Eigen::Index j = 0; j < nn; ++j) {
                jac(j, p) = sign * static_cast<double>(j + 1) * power;
                power *= current[static_cast<std::size_t>(p)];
            }
        }
        const Vec step = jac.partialPivLu().solve(-r);
        const Vec x = Eigen::Map<const Vec>(current.values().data(), nn);

        double lambda = 1;
        bool accepted = false;
        while (lambda > 1e-12) {
            if (auto trial = try_make(x + lambda * step)) {
                const Vec rt = residual(*trial);
                if (rt.norm() < (1 - 1e-4 * lambda) * r.norm()) {
                    current = std::move(*trial);
                    r = rt;
                    accepted = true;
                    break;
                }
            }
            lambda /= 2;
        }
        result.fractions = current;
        result.objective_value = r.lpNorm<Eigen::Infinity>();
        result.iterations = it + 1;
        if (!accepted) break;
    }
    result.fractions = current;
    result.objective_value = r.lpNorm<Eigen::Infinity>();
    result.converged = result.objective_value <= condition_tol;
    if (!result.converged) {
        throw NoConvergenceError("power-sum residual stalled at " + std::to_string(result.objective_value),
                                 std::move(result));
    }
    return result;
}

/// Solves the first-n-derivative conditions starting from equidistant timing.
inline OptimizationResult solve_derivative_conditions(std::size_t n) {
    if (n < 1 || n > max_newton_pulses) {
        throw Error(ErrorCode::InvalidConfig, "Newton solve supports 1 <= n <= " + std::to_string(max_newton_pulses));
    }
    return solve_derivative_conditions(equidistant(n));
}

namespace detail {

struct SimplexResult {
    std::vector<double> point;
    double value = std::numeric_limits<double>::infinity();
    std::size_t iterations = 0;
    bool converged = false;
};

/// Nelder-Mead with the standard coefficients (1, 2, 1/2, 1/2). Stops when
/// both the spread of vertex values and the simplex diameter fall under
/// their tolerances.
inline SimplexResult nelder_mead(const std::function<double(const std::vector<double> &)> &f,
                                 std::vector<double> start, double initial_step, double ftol, double xtol,
                                 std::size_t max_iterations) {
    const std::size_t dim = start.size();
    std::vector<std::vector<double>> pts(dim + 1, start);
    for (std::size_t i = 0; i < dim; ++i) pts[i + 1][i] += initial_step;
    std::vector<double> vals(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) vals[i] = f(pts[i]);

    std::vector<std::size_t> order(dim + 1);
    SimplexResult res;
    auto combine = [&](const std::vector<double> &c, const std::vector<double> &w, double t) {
        std::vector<double> out(dim);
        for (std::size_t k = 0; k < dim; ++k) out[k] = c[k] + t * (w[k] - c[k]);
        return out;
    };

    std::size_t it = 0;
    for (; it < max_iterations; ++it) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second = order[dim - 1];

        double diameter = 0;
        for (std::size_t i = 0; i <= dim; ++i) {
            for (std::size_t k = 0; k < dim; ++k) diameter = std::max(diameter, std::abs(pts[i][k] - pts[best][k]));
        }
        if (vals[worst] - vals[best] <= ftol && diameter <= xtol) {
            res.converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += pts[i][k] / static_cast<double>(dim);
        }

        auto reflected = combine(centroid, pts[worst], -1.0);
        const double fr = f(reflected);
        if (fr < vals[best]) {
            auto expanded = combine(centroid, pts[worst], -2.0);
            const double fe = f(expanded);
            if (fe < fr) {
                pts[worst] = std::move(expanded);
                vals[worst] = fe;
            } else {
                pts[worst] = std::move(reflected);
                vals[worst] = fr;
            }
            continue;
        }
        if (fr < vals[second]) {
            pts[worst] = std::move(reflected);
            vals[worst] = fr;
            continue;
        }
        const bool outside = fr < vals[worst];
        auto contracted = outside ? combine(centroid, reflected, 0.5) : combine(centroid, pts[worst], 0.5);
        const double fc = f(contracted);
        if (fc < std::min(fr, vals[worst])) {
            pts[worst] = std::move(contracted);
            vals[worst] = fc;
            continue;
        }
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == best) continue;
            pts[i] = combine(pts[best], pts[i], 0.5);
            vals[i] = f(pts[i]);
        }
    }
    const auto best_it = std::min_element(vals.begin(), vals.end());
    res.point = pts[static_cast<std::size_t>(best_it - vals.begin())];
    res.value = *best_it;
    res.iterations = it;
    return res;
}

/// Order-preserving map from unconstrained coordinates to pulse fractions:
/// increments exp(z_1), ..., exp(z_n), 1 normalised to sum one, then
/// cumulated. Returns nothing when rounding collapses two pulses.
inline std::optional<PulseFractions> fractions_from_coordinates(const std::vector<double> &z) {
    std::vector<double> w(z.size() + 1, 1.0);
    for (std::size_t k = 0; k < z.size(); ++k) w[k] = std::exp(std::clamp(z[k], -40.0, 40.0));
    const double total = std::accumulate(w.begin(), w.end(), 0.0);
    std::vector<double> frac(z.size());
    double acc = 0;
    for (std::size_t k = 0; k < z.size(); ++k) {
        acc += w[k];
        frac[k] = acc / total;
    }
    try {
        return PulseFractions::validate(std::move(frac));
    } catch (const Error &) {
        return std::nullopt;
    }
}

}  // namespace detail

struct MinimizeOptions {
    std::uint64_t seed = 0;
    double ftol = 1e-16;
    double xtol = 1e-9;
    std::size_t max_iterations_per_dim = 4000;
    /// Nelder-Mead is restarted from its own optimum this many times.
    std::size_t polish_rounds = 3;
};

/// Multi-start derivative-free minimisation of the exact transition
/// probability over n ordered pulse fractions. Restart 0 begins at
/// equidistant timing, the others at seeded random points. Restarts are
/// independent and run concurrently; results are merged in restart order.
inline OptimizationResult minimize_transition(const SystemParams &params, std::size_t n, std::size_t restarts,
                                              const MinimizeOptions &opt = {}) {
    validate(params);
    if (n < 1) throw Error(ErrorCode::InvalidConfig, "minimize_transition needs n >= 1");
    if (restarts < 1) throw Error(ErrorCode::InvalidConfig, "minimize_transition needs restarts >= 1");

    auto objective = [params](const std::vector<double> &z) {
        const auto frac = detail::fractions_from_coordinates(z);
        if (!frac) return std::numeric_limits<double>::infinity();
        return transition_probability(params, *frac);
    };

    std::vector<std::vector<double>> starts;
    std::mt19937_64 rng(opt.seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t r = 0; r < restarts; ++r) {
        std::vector<double> z(n, 0.0);
        if (r > 0) {
            for (auto &v : z) v = normal(rng);
        }
        starts.push_back(std::move(z));
    }

    auto run = [&](std::vector<double> z) {
        detail::SimplexResult total;
        double step = 0.5;
        for (std::size_t round = 0; round <= opt.polish_rounds; ++round) {
            auto r = detail::nelder_mead(objective, z, step, opt.ftol, opt.xtol, opt.max_iterations_per_dim * n);
            total.iterations += r.iterations;
            const bool improved = r.value < total.value;
            if (improved || total.point.empty()) {
                total.point = r.point;
                total.value = r.value;
            }
            total.converged = r.converged;
            z = total.point;
            step = 0.05;
            if (r.converged && !improved) break;
        }
        return total;
    };

    std::vector<std::future<detail::SimplexResult>> jobs;
    jobs.reserve(restarts);
    for (auto &s : starts) jobs.push_back(std::async(std::launch::async, run, s));

    OptimizationResult best;
    bool any_converged = false;
    std::size_t total_iterations = 0;
    for (auto &job : jobs) {
        const auto r = job.get();
        total_iterations += r.iterations;
        any_converged = any_converged || r.converged;
        if (r.value < best.objective_value) {
            best.objective_value = r.value;
            best.fractions = *detail::fractions_from_coordinates(r.point);
            best.converged = r.converged;
        }
    }
    best.iterations = total_iterations;
    if (!any_converged) {
        throw NoConvergenceError("no restart met the simplex stopping rule", std::move(best));
    }
    best.converged = true;
    return best;
}

/// Small-time power law of the exact transition probability: least-squares
/// slope of log |c_e(T)|^2 against log(Omega T) on a log grid over
/// [1e-3, 1e-2], Omega = 1. The arithmetic runs in Real; pass quad-precision
/// fractions for sequences whose probability falls below double resolution.
template <class Real>
double suppression_order(const BasicPulseFractions<Real> &frac, const Real &delta_over_omega,
                         std::size_t points = 11) {
    using std::log;
    using std::pow;
    using std::isfinite;
    if (points < 2) throw Error(ErrorCode::InvalidConfig, "need at least two fit points");
    std::vector<double> xs, ys;
    const Real lo = log(Real(1e-3));
    const Real hi = log(Real(1e-2));
    for (std::size_t i = 0; i < points; ++i) {
        using std::exp;
        const Real lt = lo + (hi - lo) * Real(i) / Real(points - 1);
        const BasicSystemParams<Real> params{Real(1), delta_over_omega, exp(lt)};
        const Real p = transition_probability(params, frac);
        if (!(p > 0) || !isfinite(p)) {
            throw Error(ErrorCode::DegenerateFit, "transition probability underflows at Omega T = " +
                                                      std::to_string(static_cast<double>(exp(lt))));
        }
        xs.push_back(static_cast<double>(lt));
        ys.push_back(static_cast<double>(log(p)));
    }
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(points);
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(points);
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < points; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    return sxy / sxx;
}

using DerivativeResidual = BasicDerivativeResidual<double>;

}  // namespace ddsim
