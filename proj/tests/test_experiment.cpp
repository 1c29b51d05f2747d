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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "ddsim/experiment.hpp"
#include "ddsim/verify.hpp"

namespace ddsim {
namespace {

namespace fs = std::filesystem;

ErrorCode ConfigErrorOf(const ExperimentConfig &c) {
    try {
        validate_config(c);
    } catch (const Error &e) {
        return e.code();
    }
    ADD_FAILURE() << "config accepted";
    return ErrorCode::Io;
}

std::vector<std::vector<std::string>> ReadCsv(const fs::path &p) {
    std::ifstream in(p);
    std::vector<std::vector<std::string>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::stringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

fs::path ScratchDir(const std::string &name) {
    auto dir = fs::temp_directory_path() / ("ddsim_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

TEST(Parsing, Flags) {
    EXPECT_EQ(parse_mode("sweep-detuning"), Mode::SweepDetuning);
    EXPECT_THROW(parse_mode("sweep"), Error);

    const auto r = parse_n_range("2..11");
    EXPECT_EQ(r.first, 2u);
    EXPECT_EQ(r.last, 11u);
    EXPECT_THROW(parse_n_range("5..2"), Error);
    EXPECT_THROW(parse_n_range("2-5"), Error);
    EXPECT_THROW(parse_n_range("a..3"), Error);

    EXPECT_TRUE(parse_omega_t("half-rabi-cycle").half_rabi_cycle);
    EXPECT_DOUBLE_EQ(parse_omega_t("2.5").omega_t, 2.5);
    EXPECT_THROW(parse_omega_t("-1"), Error);
    EXPECT_THROW(parse_omega_t("fast"), Error);

    const auto kinds = parse_sequence_kinds("equidistant,udd");
    ASSERT_EQ(kinds.size(), 2u);
    EXPECT_EQ(kinds[1], SequenceKind::Udd);
    EXPECT_THROW(parse_sequence_kinds("udd,udd"), Error);
    EXPECT_THROW(parse_sequence_kinds("cdd"), Error);

    const auto det = parse_detuning_list("0, 1,10");
    EXPECT_EQ(det, (std::vector<double>{0, 1, 10}));
    EXPECT_THROW(parse_detuning_list("1,x"), Error);
}

TEST(Parsing, HalfRabiCycle) {
    EXPECT_DOUBLE_EQ(TimeSpec{}.resolve(0), M_PI);
    EXPECT_DOUBLE_EQ(TimeSpec{}.resolve(1), M_PI / std::sqrt(2.0));
    EXPECT_DOUBLE_EQ((TimeSpec{false, 3.0}).resolve(10), 3.0);
}

TEST(Config, Validation) {
    ExperimentConfig c;
    c.mode = Mode::SweepN;
    EXPECT_EQ(ConfigErrorOf(c), ErrorCode::InvalidConfig);  // no range
    c.n_range = NRange{2, 4};
    EXPECT_NO_THROW(validate_config(c));
    c.sequences = {SequenceKind::File};
    EXPECT_EQ(ConfigErrorOf(c), ErrorCode::InvalidConfig);  // file without path
    c.sequence_file = "x.txt";
    EXPECT_EQ(ConfigErrorOf(c), ErrorCode::InvalidConfig);  // sweep-n cannot use a file

    ExperimentConfig t;
    t.mode = Mode::Trajectory;
    t.sequences = {SequenceKind::Udd};
    EXPECT_EQ(ConfigErrorOf(t), ErrorCode::InvalidConfig);  // udd needs --n
    t.n_pulses = 3;
    EXPECT_NO_THROW(validate_config(t));
    t.sequence_file = "x.txt";
    EXPECT_EQ(ConfigErrorOf(t), ErrorCode::InvalidConfig);  // two sequence sources

    ExperimentConfig o;
    o.mode = Mode::Optimize;
    EXPECT_EQ(ConfigErrorOf(o), ErrorCode::InvalidConfig);
    o.n_pulses = 2;
    EXPECT_NO_THROW(validate_config(o));

    ExperimentConfig p;
    p.mode = Mode::Preset;
    p.preset = "fig6";
    EXPECT_EQ(ConfigErrorOf(p), ErrorCode::InvalidConfig);
}

TEST(Sweep, UddDecreasesWithPulseCount) {
    ExperimentConfig c;
    c.mode = Mode::SweepN;
    c.n_range = NRange{2, 11};
    c.delta_over_omega = {1.0};
    c.sequences = {SequenceKind::Udd};
    const auto rows = run_sweep(c);
    ASSERT_EQ(rows.size(), 10u);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].n, rows[i - 1].n + 1);
        EXPECT_LT(rows[i].probability, rows[i - 1].probability);
        EXPECT_DOUBLE_EQ(rows[i].omega_t, M_PI / std::sqrt(2.0));
    }
}

TEST(Sweep, UddNeverAboveEquidistantAcrossDetunings) {
    ExperimentConfig c;
    c.mode = Mode::SweepDetuning;
    c.n_pulses = 5;
    c.delta_over_omega = {0, 1, 10};
    c.sequences = {SequenceKind::Equidistant, SequenceKind::Udd};
    const auto rows = run_sweep(c);
    ASSERT_EQ(rows.size(), 6u);
    for (std::size_t i = 0; i < rows.size(); i += 2) {
        EXPECT_EQ(rows[i].sequence, SequenceKind::Equidistant);
        EXPECT_EQ(rows[i + 1].sequence, SequenceKind::Udd);
        EXPECT_LE(rows[i + 1].probability, rows[i].probability + 1e-15) << rows[i].delta_over_omega;
    }
}

TEST(Sweep, SinglePulseSequencesCoincide) {
    ExperimentConfig c;
    c.mode = Mode::SweepDetuning;
    c.n_pulses = 1;
    c.delta_over_omega = {0, 0.5, 1, 3, 10};
    c.sequences = {SequenceKind::Equidistant, SequenceKind::Udd};
    const auto rows = run_sweep(c);
    for (std::size_t i = 0; i < rows.size(); i += 2) EXPECT_EQ(rows[i].probability, rows[i + 1].probability);
}

TEST(Sweep, SequenceFileRows) {
    const auto dir = ScratchDir("seqfile");
    {
        std::ofstream f(dir / "seq.txt");
        f << "# three pulses\n0.2\n0.5\n0.8\n";
    }
    ExperimentConfig c;
    c.mode = Mode::SweepDetuning;
    c.delta_over_omega = {0.5, 2};
    c.time = {false, 2.0};
    c.sequences = {SequenceKind::File};
    c.sequence_file = (dir / "seq.txt").string();
    const auto rows = run_sweep(c);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].n, 3u);
    const auto frac = PulseFractions::validate({0.2, 0.5, 0.8});
    EXPECT_EQ(rows[1].probability, transition_probability(SystemParams{1, 2, 2.0}, frac));

    c.sequence_file = (dir / "missing.txt").string();
    try {
        run_sweep(c);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::Io);
    }
}

TEST(Csv, SweepSchemaAndPrecision) {
    std::ostringstream os;
    write_sweep_csv(os, {{3, 1.0, 2.2214414690791831, SequenceKind::Udd, 0.1}});
    EXPECT_EQ(os.str(), "n,delta_over_omega,omega_t,sequence,probability\n3,1,2.2214414690791831,udd,0.10000000000000001\n");
}

TEST(Csv, OutputIsDeterministic) {
    ExperimentConfig c;
    c.mode = Mode::SweepN;
    c.n_range = NRange{0, 14};
    c.delta_over_omega = {2.5};
    c.sequences = {SequenceKind::None, SequenceKind::Equidistant, SequenceKind::Udd};
    std::ostringstream a, b;
    write_sweep_csv(a, run_sweep(c));
    write_sweep_csv(b, run_sweep(c));
    EXPECT_EQ(a.str(), b.str());

    ExperimentConfig t;
    t.mode = Mode::Trajectory;
    t.n_pulses = 6;
    t.delta_over_omega = {3};
    t.sequences = {SequenceKind::Equidistant, SequenceKind::Udd};
    std::ostringstream ta, tb;
    run_trajectory(t, ta);
    run_trajectory(t, tb);
    EXPECT_EQ(ta.str(), tb.str());
}

TEST(Trajectory, CsvLayout) {
    ExperimentConfig t;
    t.mode = Mode::Trajectory;
    t.n_pulses = 2;
    t.delta_over_omega = {0};
    t.samples_per_interval = 3;
    t.sequences = {SequenceKind::None, SequenceKind::Udd};
    std::ostringstream os;
    run_trajectory(t, os);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "time,sequence,p_g,p_e,pulse_edge");
    int none_rows = 0, udd_rows = 0, pre = 0, post = 0;
    while (std::getline(in, line)) {
        if (line.find(",none,") != std::string::npos) ++none_rows;
        if (line.find(",udd,") != std::string::npos) ++udd_rows;
        if (line.ends_with(",pre")) ++pre;
        if (line.ends_with(",post")) ++post;
    }
    EXPECT_EQ(none_rows, 1 + 3);
    EXPECT_EQ(udd_rows, 1 + 3 * 3 + 2);
    EXPECT_EQ(pre, 2);
    EXPECT_EQ(post, 2);
}

TEST(Preset, Fig3UddReturnsToGround) {
    const auto dir = ScratchDir("fig3");
    const auto out = run_preset("fig3", dir);
    ASSERT_EQ(out.files.size(), 1u);
    const auto rows = ReadCsv(out.files[0]);
    ASSERT_GT(rows.size(), 2u);
    EXPECT_EQ(rows[0], (std::vector<std::string>{"time", "sequence", "p_g", "p_e", "pulse_edge"}));
    std::string last_udd_pg, last_eq_pg;
    for (const auto &r : rows) {
        if (r[1] == "udd") last_udd_pg = r[2];
        if (r[1] == "equidistant") last_eq_pg = r[2];
    }
    EXPECT_NEAR(std::stod(last_udd_pg), 1.0, 1e-10);
    EXPECT_LT(std::stod(last_eq_pg), 0.5);
}

TEST(Preset, Fig4SuppressionFactors) {
    const auto dir = ScratchDir("fig4");
    const auto out = run_preset("fig4", dir);
    const auto rows = ReadCsv(out.files.at(0));
    double none = 0, eq = 0, ud = 0;
    for (const auto &r : rows) {
        if (r[1] == "none") none = std::stod(r[3]);
        if (r[1] == "equidistant") eq = std::stod(r[3]);
        if (r[1] == "udd") ud = std::stod(r[3]);
    }
    EXPECT_GT(none / eq, 10);
    EXPECT_LT(none / eq, 1e3);
    EXPECT_GT(none / ud, 1e4);
    EXPECT_LT(none / ud, 1e6);
}

TEST(Preset, Fig5Rows) {
    const auto dir = ScratchDir("fig5");
    const auto out = run_preset("fig5", dir);
    ASSERT_EQ(out.files.size(), 2u);
    const auto rows = ReadCsv(out.files[0]);
    ASSERT_EQ(rows.size(), 1u + 10 * 3);
    const std::map<std::string, double> target{{"2", 1e-2}, {"4", 1e-5}, {"6", 1e-10}, {"8", 1e-14}};
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i][3] == "udd" && target.count(rows[i][0])) {
            const double p = std::stod(rows[i][4]);
            EXPECT_LE(std::abs(std::log10(p / target.at(rows[i][0]))), 1.0) << "n=" << rows[i][0];
        }
    }
    const auto analytic = ReadCsv(out.files[1]);
    EXPECT_EQ(analytic.size(), 1u + 10 * 2);
}

TEST(Preset, UnknownNameAndUnwritableDirectory) {
    EXPECT_THROW(run_preset("fig9", ScratchDir("bad")), Error);
    try {
        run_preset("fig5", "/proc/ddsim_cannot_write_here");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.code(), ErrorCode::Io);
    }
}

TEST(Verify, FreshBuildPassesEveryCheck) {
    const auto report = run_verify();
    std::ostringstream os;
    print_report(os, report);
    EXPECT_TRUE(report.all_passed()) << os.str();
    for (const auto &c : report.checks) {
        if (c.name.find("unitarity") != std::string::npos) {
            EXPECT_LE(c.measured, 1e-12);
        }
        if (c.name.find("Newton") != std::string::npos) {
            EXPECT_LE(c.measured, 1e-8);
        }
    }
}

}  // namespace
}  // namespace ddsim
