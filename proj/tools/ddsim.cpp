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

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ddsim/ddsim.hpp"

namespace {

enum ExitCode { kOk = 0, kConfigError = 1, kVerifyFailed = 2, kIoError = 3 };

/// Sends text to --out when given, otherwise to stdout.
void emit(const std::string &path, const std::string &text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out || !(out << text)) throw ddsim::Error(ddsim::ErrorCode::Io, "cannot write '" + path + "'");
}

int run(const ddsim::ExperimentConfig &cfg) {
    using namespace ddsim;
    switch (cfg.mode) {
        case Mode::SweepN:
        case Mode::SweepDetuning: {
            std::ostringstream os;
            write_sweep_csv(os, run_sweep(cfg));
            emit(cfg.output_path, os.str());
            return kOk;
        }
        case Mode::Trajectory: {
            std::ostringstream os;
            run_trajectory(cfg, os);
            emit(cfg.output_path, os.str());
            return kOk;
        }
        case Mode::Optimize: {
            validate_config(cfg);
            const double ratio = cfg.delta_over_omega.front();
            const SystemParams params{1.0, ratio, cfg.time.resolve(ratio)};
            MinimizeOptions opt;
            opt.seed = cfg.seed;
            const auto best = minimize_transition(params, *cfg.n_pulses, cfg.restarts, opt);
            const auto reference = udd(*cfg.n_pulses);
            const double udd_objective = transition_probability(params, reference);

            std::ostringstream os;
            os << "# minimized transition probability " << format_real(best.objective_value) << '\n'
               << "# delta_over_omega " << format_real(ratio) << " omega_t " << format_real(params.total_time) << '\n';
            for (double f : best.fractions) os << format_real(f) << '\n';
            emit(cfg.output_path, os.str());

            nlohmann::json summary = {
                {"n", *cfg.n_pulses},
                {"delta_over_omega", ratio},
                {"omega_t", params.total_time},
                {"seed", cfg.seed},
                {"restarts", cfg.restarts},
                {"objective", best.objective_value},
                {"udd_objective", udd_objective},
                {"iterations", best.iterations},
                {"converged", best.converged},
                {"fractions", best.fractions.values()},
            };
            (cfg.output_path.empty() ? std::cerr : std::cout) << summary.dump(2) << '\n';
            return kOk;
        }
        case Mode::Verify: {
            const auto report = run_verify(cfg.seed);
            print_report(std::cout, report);
            if (!cfg.output_path.empty()) {
                nlohmann::json checks = nlohmann::json::array();
                for (const auto &c : report.checks) {
                    checks.push_back({{"name", c.name},
                                      {"measured", c.measured},
                                      {"tolerance", c.tolerance},
                                      {"passed", c.passed},
                                      {"error", c.error}});
                }
                emit(cfg.output_path, nlohmann::json{{"passed", report.all_passed()}, {"checks", checks}}.dump(2) + "\n");
            }
            return report.all_passed() ? kOk : kVerifyFailed;
        }
        case Mode::Preset: {
            validate_config(cfg);
            const auto out = run_preset(cfg.preset, cfg.output_path.empty() ? "." : cfg.output_path,
                                        cfg.samples_per_interval);
            for (const auto &f : out.files) std::cout << "wrote " << f.string() << '\n';
            for (const auto &s : out.summary) std::cout << s << '\n';
            return kOk;
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Phase-kick pulse sequences for a driven two-level system: exact evolution, "
                 "first-order models and timing optimisation"};

    std::string mode = "sweep-n", detuning = "0", omega_t = "half-rabi-cycle", sequence = "udd";
    std::string n_range, sequence_file, out, preset;
    std::optional<std::size_t> n;
    std::size_t samples = 50, restarts = 8;
    std::uint64_t seed = 0;

    app.add_option("--mode", mode, "trajectory | sweep-n | sweep-detuning | optimize | verify | preset")
        ->capture_default_str();
    app.add_option("--n", n, "number of pulses");
    app.add_option("--n-range", n_range, "pulse-count range A..B for sweep-n");
    app.add_option("--detuning-ratio", detuning, "Delta/Omega, comma-separated list for sweep-detuning")
        ->capture_default_str();
    app.add_option("--omega-t", omega_t, "Omega T, or half-rabi-cycle for T = pi/Omega_R")->capture_default_str();
    app.add_option("--sequence", sequence, "none | equidistant | udd | file, comma-separated for several")
        ->capture_default_str();
    app.add_option("--sequence-file", sequence_file, "plain-text pulse fractions, one per line");
    app.add_option("--samples", samples, "trajectory samples per interval")->capture_default_str();
    app.add_option("--seed", seed, "seed for optimizer restarts and verify sampling")->capture_default_str();
    app.add_option("--restarts", restarts, "optimizer restarts")->capture_default_str();
    app.add_option("--out", out, "output file (directory for presets); stdout when omitted");
    app.add_option("--preset", preset, "fig3 | fig4 | fig5 (implies --mode preset)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        ddsim::ExperimentConfig cfg;
        cfg.mode = ddsim::parse_mode(mode);
        if (!preset.empty()) {
            if (app.count("--mode") > 0 && cfg.mode != ddsim::Mode::Preset) {
                throw ddsim::Error(ddsim::ErrorCode::InvalidConfig, "--preset conflicts with --mode " + mode);
            }
            cfg.mode = ddsim::Mode::Preset;
        }
        cfg.preset = preset;
        cfg.delta_over_omega = ddsim::parse_detuning_list(detuning);
        cfg.time = ddsim::parse_omega_t(omega_t);
        cfg.n_pulses = n;
        if (!n_range.empty()) cfg.n_range = ddsim::parse_n_range(n_range);
        cfg.sequences = ddsim::parse_sequence_kinds(sequence);
        if (!sequence_file.empty()) cfg.sequence_file = sequence_file;
        cfg.samples_per_interval = samples;
        cfg.seed = seed;
        cfg.restarts = restarts;
        cfg.output_path = out;
        return run(cfg);
    } catch (const ddsim::Error &e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == ddsim::ErrorCode::Io ? kIoError : kConfigError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kConfigError;
    }
}
