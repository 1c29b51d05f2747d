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
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ddsim/analytic.hpp"
#include "ddsim/errors.hpp"
#include "ddsim/evolution.hpp"
#include "ddsim/sequences.hpp"
#include "ddsim/su2.hpp"

// Experiment harness behind the command-line tool. All inputs are
// dimensionless: Omega is fixed to 1, detuning is given as Delta/Omega and
// time as Omega T.

namespace ddsim {

enum class Mode { Trajectory, SweepN, SweepDetuning, Optimize, Verify, Preset };
enum class SequenceKind { None, Equidistant, Udd, File };

inline std::string_view to_string(SequenceKind k) {
    switch (k) {
        case SequenceKind::None: return "none";
        case SequenceKind::Equidistant: return "equidistant";
        case SequenceKind::Udd: return "udd";
        case SequenceKind::File: return "file";
    }
    return "none";
}

inline std::string_view to_string(PulseEdge e) {
    switch (e) {
        case PulseEdge::None: return "none";
        case PulseEdge::Pre: return "pre";
        case PulseEdge::Post: return "post";
    }
    return "none";
}

/// Either a fixed Omega T or the half-Rabi-cycle rule T = pi / Omega_R.
struct TimeSpec {
    bool half_rabi_cycle = true;
    double omega_t = 0;

    double resolve(double delta_over_omega) const {
        if (half_rabi_cycle) return pi<double>() / std::sqrt(1 + delta_over_omega * delta_over_omega);
        return omega_t;
    }
};

struct NRange {
    std::size_t first = 0;
    std::size_t last = 0;
};

struct ExperimentConfig {
    Mode mode = Mode::SweepN;
    std::vector<double> delta_over_omega{0.0};
    TimeSpec time;
    std::optional<std::size_t> n_pulses;
    std::optional<NRange> n_range;
    std::vector<SequenceKind> sequences{SequenceKind::Udd};
    std::optional<std::string> sequence_file;
    std::size_t samples_per_interval = 50;
    std::uint64_t seed = 0;
    std::size_t restarts = 8;
    std::string output_path;
    std::string preset;
};

inline Mode parse_mode(std::string_view s) {
    if (s == "trajectory") return Mode::Trajectory;
    if (s == "sweep-n") return Mode::SweepN;
    if (s == "sweep-detuning") return Mode::SweepDetuning;
    if (s == "optimize") return Mode::Optimize;
    if (s == "verify") return Mode::Verify;
    if (s == "preset") return Mode::Preset;
    throw Error(ErrorCode::InvalidConfig,
                "unknown mode '" + std::string(s) +
                    "' (expected trajectory, sweep-n, sweep-detuning, optimize, verify or preset)");
}

inline std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

inline std::vector<SequenceKind> parse_sequence_kinds(std::string_view s) {
    std::vector<SequenceKind> out;
    for (const auto &item : split_list(s)) {
        SequenceKind k;
        if (item == "none") k = SequenceKind::None;
        else if (item == "equidistant") k = SequenceKind::Equidistant;
        else if (item == "udd") k = SequenceKind::Udd;
        else if (item == "file") k = SequenceKind::File;
        else
            throw Error(ErrorCode::InvalidConfig,
                        "unknown sequence '" + item + "' (expected none, equidistant, udd or file)");
        if (std::find(out.begin(), out.end(), k) != out.end()) {
            throw Error(ErrorCode::InvalidConfig, "sequence '" + item + "' listed twice");
        }
        out.push_back(k);
    }
    return out;
}

inline double parse_real(const std::string &s, std::string_view what) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception &) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) {
        throw Error(ErrorCode::InvalidConfig, std::string(what) + ": '" + s + "' is not a finite number");
    }
    return v;
}

inline std::vector<double> parse_detuning_list(std::string_view s) {
    std::vector<double> out;
    for (const auto &item : split_list(s)) out.push_back(parse_real(item, "--detuning-ratio"));
    return out;
}

inline TimeSpec parse_omega_t(std::string_view s) {
    if (s == "half-rabi-cycle") return {true, 0};
    const double v = parse_real(std::string(s), "--omega-t");
    if (!(v > 0)) throw Error(ErrorCode::InvalidConfig, "--omega-t must be positive or 'half-rabi-cycle'");
    return {false, v};
}

inline NRange parse_n_range(std::string_view s) {
    const auto dots = s.find("..");
    if (dots == std::string_view::npos) {
        throw Error(ErrorCode::InvalidConfig, "--n-range expects A..B, got '" + std::string(s) + "'");
    }
    auto parse_count = [&](std::string_view part) -> std::size_t {
        const std::string p(part);
        if (p.empty() || p.find_first_not_of("0123456789") != std::string::npos) {
            throw Error(ErrorCode::InvalidConfig, "--n-range bound '" + p + "' is not a non-negative integer");
        }
        return static_cast<std::size_t>(std::stoull(p));
    };
    NRange r{parse_count(s.substr(0, dots)), parse_count(s.substr(dots + 2))};
    if (r.last < r.first) throw Error(ErrorCode::InvalidConfig, "--n-range must be increasing (A <= B)");
    return r;
}

inline void validate_config(const ExperimentConfig &c) {
    auto fail = [](const std::string &msg) { throw Error(ErrorCode::InvalidConfig, msg); };
    if (c.delta_over_omega.empty()) fail("at least one --detuning-ratio is required");
    if (c.sequences.empty()) fail("--sequence must name at least one sequence kind");
    const bool wants_file = std::find(c.sequences.begin(), c.sequences.end(), SequenceKind::File) != c.sequences.end();
    if (wants_file && !c.sequence_file) fail("--sequence file requires --sequence-file <path>");
    if (!wants_file && c.sequence_file) fail("--sequence-file given but 'file' is not among --sequence kinds");
    if (c.n_pulses && c.n_range) fail("give either --n or --n-range, not both");
    if (c.samples_per_interval < 1) fail("--samples must be >= 1");
    switch (c.mode) {
        case Mode::SweepN:
            if (!c.n_range) fail("sweep-n requires --n-range A..B");
            if (wants_file) fail("sweep-n cannot sweep a fixed sequence file");
            if (c.delta_over_omega.size() != 1) fail("sweep-n takes a single --detuning-ratio");
            break;
        case Mode::SweepDetuning:
            if (c.n_range) fail("sweep-detuning takes --n, not --n-range");
            break;
        case Mode::Trajectory:
            if (c.n_range) fail("trajectory takes --n, not --n-range");
            if (c.delta_over_omega.size() != 1) fail("trajectory takes a single --detuning-ratio");
            break;
        case Mode::Optimize:
            if (!c.n_pulses || *c.n_pulses < 1) fail("optimize requires --n >= 1");
            if (c.delta_over_omega.size() != 1) fail("optimize takes a single --detuning-ratio");
            if (c.restarts < 1) fail("--restarts must be >= 1");
            break;
        case Mode::Preset:
            if (c.preset != "fig3" && c.preset != "fig4" && c.preset != "fig5") {
                fail("--preset must be fig3, fig4 or fig5");
            }
            break;
        case Mode::Verify: break;
    }
    const bool needs_n = std::any_of(c.sequences.begin(), c.sequences.end(), [](SequenceKind k) {
        return k == SequenceKind::Equidistant || k == SequenceKind::Udd;
    });
    if ((c.mode == Mode::Trajectory || c.mode == Mode::SweepDetuning) && needs_n && !c.n_pulses) {
        fail("equidistant and udd sequences need --n");
    }
}

inline PulseFractions make_sequence(SequenceKind kind, std::size_t n, const PulseFractions *file) {
    switch (kind) {
        case SequenceKind::None: return {};
        case SequenceKind::Equidistant: return equidistant(n);
        case SequenceKind::Udd: return udd(n);
        case SequenceKind::File:
            if (!file) throw Error(ErrorCode::InvalidConfig, "no sequence file loaded");
            return *file;
    }
    return {};
}

/// 17 significant digits, enough to round-trip any double.
inline std::string format_real(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

struct SweepRow {
    std::size_t n = 0;
    double delta_over_omega = 0;
    double omega_t = 0;
    SequenceKind sequence = SequenceKind::None;
    double probability = 0;
};

inline constexpr std::string_view sweep_header = "n,delta_over_omega,omega_t,sequence,probability";
inline constexpr std::string_view trajectory_header = "time,sequence,p_g,p_e,pulse_edge";

inline void write_sweep_csv(std::ostream &os, const std::vector<SweepRow> &rows) {
    os << sweep_header << '\n';
    for (const auto &r : rows) {
        os << r.n << ',' << format_real(r.delta_over_omega) << ',' << format_real(r.omega_t) << ','
           << to_string(r.sequence) << ',' << format_real(r.probability) << '\n';
    }
}

/// Evaluates fn(i) for i in [0, count) on a few worker threads; results land
/// at their own index so the order never depends on scheduling.
template <class T, class Fn>
std::vector<T> parallel_map(std::size_t count, Fn fn) {
    std::vector<T> out(count);
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(count, std::thread::hardware_concurrency()));
    std::vector<std::future<void>> jobs;
    for (std::size_t w = 0; w < workers; ++w) {
        jobs.push_back(std::async(std::launch::async, [&, w] {
            for (std::size_t i = w; i < count; i += workers) out[i] = fn(i);
        }));
    }
    for (auto &j : jobs) j.get();
    return out;
}

/// Grid for sweep-n and sweep-detuning, outer loop over the swept variable,
/// inner loop over sequence kinds in the order given.
inline std::vector<SweepRow> run_sweep(const ExperimentConfig &c) {
    validate_config(c);
    if (c.mode != Mode::SweepN && c.mode != Mode::SweepDetuning) {
        throw Error(ErrorCode::InvalidConfig, "run_sweep needs mode sweep-n or sweep-detuning");
    }
    std::optional<PulseFractions> file;
    if (c.sequence_file) file = load_sequence_file(*c.sequence_file);

    std::vector<SweepRow> grid;
    auto add = [&](std::size_t n, double ratio) {
        for (auto kind : c.sequences) {
            const std::size_t rows_n = kind == SequenceKind::File ? file->size() : n;
            grid.push_back({rows_n, ratio, c.time.resolve(ratio), kind, 0.0});
        }
    };
    if (c.mode == Mode::SweepN) {
        for (std::size_t n = c.n_range->first; n <= c.n_range->last; ++n) add(n, c.delta_over_omega.front());
    } else {
        for (double ratio : c.delta_over_omega) add(c.n_pulses.value_or(0), ratio);
    }

    const PulseFractions *file_ptr = file ? &*file : nullptr;
    auto probs = parallel_map<double>(grid.size(), [&](std::size_t i) {
        const auto &row = grid[i];
        const SystemParams params{1.0, row.delta_over_omega, row.omega_t};
        return transition_probability(params, make_sequence(row.sequence, row.n, file_ptr));
    });
    for (std::size_t i = 0; i < grid.size(); ++i) grid[i].probability = probs[i];
    return grid;
}

inline void write_trajectory_csv(std::ostream &os, SequenceKind kind, const std::vector<TrajectoryPoint> &points,
                                 bool header = true) {
    if (header) os << trajectory_header << '\n';
    for (const auto &p : points) {
        os << format_real(p.time) << ',' << to_string(kind) << ',' << format_real(p.p_g) << ','
           << format_real(p.p_e) << ',' << to_string(p.pulse_edge) << '\n';
    }
}

/// One trajectory per requested sequence kind, ground-state start, written
/// one after another under a single header.
inline void run_trajectory(const ExperimentConfig &c, std::ostream &os) {
    validate_config(c);
    std::optional<PulseFractions> file;
    if (c.sequence_file) file = load_sequence_file(*c.sequence_file);
    const double ratio = c.delta_over_omega.front();
    const SystemParams params{1.0, ratio, c.time.resolve(ratio)};
    os << trajectory_header << '\n';
    for (auto kind : c.sequences) {
        const auto seq = make_sequence(kind, c.n_pulses.value_or(0), file ? &*file : nullptr);
        write_trajectory_csv(os, kind, trajectory(params, seq, State2::ground(), c.samples_per_interval), false);
    }
}

inline std::ofstream open_output(const std::filesystem::path &path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    return out;
}

struct PresetOutput {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> summary;
};

inline constexpr double fig3_omega_t = 6 * 3.141592653589793;  // three full Rabi cycles without pulses
inline constexpr std::size_t fig3_pulses = 8;
inline constexpr std::size_t fig4_pulses = 5;
inline constexpr double fig4_detuning_ratio = 10;
inline constexpr double fig5_detuning_ratio = 1;

/// Writes the CSV files behind one of the three figure presets into dir.
/// Probabilities are raw; no cosmetic rescaling is applied.
inline PresetOutput run_preset(std::string_view name, const std::filesystem::path &dir,
                               std::size_t samples_per_interval = 50) {
    PresetOutput out;
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create output directory '" + dir.string() + "'");

    if (name == "fig3") {
        ExperimentConfig c;
        c.mode = Mode::Trajectory;
        c.delta_over_omega = {0.0};
        c.time = {false, fig3_omega_t};
        c.n_pulses = fig3_pulses;
        c.sequences = {SequenceKind::Equidistant, SequenceKind::Udd};
        c.samples_per_interval = samples_per_interval;
        const auto path = dir / "fig3_trajectory.csv";
        auto os = open_output(path);
        run_trajectory(c, os);
        out.files.push_back(path);
        const SystemParams params{1.0, 0.0, fig3_omega_t};
        out.summary.push_back("final p_g equidistant(8) = " +
                              format_real(1 - transition_probability(params, equidistant(fig3_pulses))));
        out.summary.push_back("final p_g udd(8) = " + format_real(1 - transition_probability(params, udd(fig3_pulses))));
    } else if (name == "fig4") {
        ExperimentConfig c;
        c.mode = Mode::Trajectory;
        c.delta_over_omega = {fig4_detuning_ratio};
        c.time = {true, 0};
        c.n_pulses = fig4_pulses;
        c.sequences = {SequenceKind::None, SequenceKind::Equidistant, SequenceKind::Udd};
        c.samples_per_interval = samples_per_interval;
        const auto path = dir / "fig4_trajectory.csv";
        auto os = open_output(path);
        run_trajectory(c, os);
        out.files.push_back(path);
        const SystemParams params{1.0, fig4_detuning_ratio, c.time.resolve(fig4_detuning_ratio)};
        const double none = transition_probability(params, PulseFractions{});
        out.summary.push_back("suppression equidistant(5) = " +
                              format_real(none / transition_probability(params, equidistant(fig4_pulses))));
        out.summary.push_back("suppression udd(5) = " +
                              format_real(none / transition_probability(params, udd(fig4_pulses))));
    } else if (name == "fig5") {
        ExperimentConfig c;
        c.mode = Mode::SweepN;
        c.delta_over_omega = {fig5_detuning_ratio};
        c.time = {true, 0};
        c.n_range = NRange{2, 11};
        c.sequences = {SequenceKind::None, SequenceKind::Equidistant, SequenceKind::Udd};
        const auto rows = run_sweep(c);
        const auto path = dir / "fig5_sweep.csv";
        auto os = open_output(path);
        write_sweep_csv(os, rows);
        out.files.push_back(path);

        // first-order closed forms on the same grid
        std::vector<SweepRow> analytic;
        const double omega_t = c.time.resolve(fig5_detuning_ratio);
        for (std::size_t n = 2; n <= 11; ++n) {
            analytic.push_back({n, fig5_detuning_ratio, omega_t, SequenceKind::Equidistant,
                                equidistant_closed_form(1.0, fig5_detuning_ratio, omega_t, n)});
            analytic.push_back({n, fig5_detuning_ratio, omega_t, SequenceKind::Udd,
                                udd_closed_sum(1.0, fig5_detuning_ratio, omega_t, n)});
        }
        const auto apath = dir / "fig5_analytic.csv";
        auto aos = open_output(apath);
        write_sweep_csv(aos, analytic);
        out.files.push_back(apath);
        for (const auto &r : rows) {
            if (r.sequence == SequenceKind::Udd && (r.n == 2 || r.n == 4 || r.n == 6 || r.n == 8)) {
                out.summary.push_back("udd(" + std::to_string(r.n) + ") = " + format_real(r.probability));
            }
        }
    } else {
        throw Error(ErrorCode::InvalidConfig, "unknown preset '" + std::string(name) + "'");
    }
    return out;
}

}  // namespace ddsim
