#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "xbarvmm/crossbar.hpp"
#include "xbarvmm/errors.hpp"

using namespace xbarvmm;

namespace {

ResistanceDistribution zero_sigma() {
    ResistanceDistribution d;
    d.sigma_lrs = 0.0;
    d.sigma_hrs = 0.0;
    return d;
}

CrossbarConfig test_config(int rows, int cols) {
    CrossbarConfig cfg;
    cfg.rows = rows;
    cfg.cols = cols;
    cfg.r_f_ohm = 1e6;
    cfg.rail_voltage = 1e9;  // keep reads linear unless a test wants clipping
    return cfg;
}

}  // namespace

TEST_CASE("init_crossbar: all cells HRS") {
    Rng rng(3);
    SUBCASE("zero variance: exact HRS median everywhere") {
        CrossbarState xbar = init_crossbar(8, 8, zero_sigma(), rng);
        REQUIRE(xbar.cells.size() == 64);
        for (const DeviceCell& c : xbar.cells) {
            CHECK(c.state == DeviceState::Hrs);
            CHECK(c.resistance_mohm == 50.0);
            CHECK(c.program_count == 1);
        }
    }
    SUBCASE("default distribution: states all HRS") {
        CrossbarState xbar = init_crossbar(8, 8, ResistanceDistribution{}, rng);
        for (const DeviceCell& c : xbar.cells) CHECK(c.state == DeviceState::Hrs);
    }
    SUBCASE("single cell crossbar is valid") {
        CrossbarState xbar = init_crossbar(1, 1, ResistanceDistribution{}, rng);
        CHECK(xbar.cells.size() == 1);
    }
    SUBCASE("zero dimensions rejected") {
        CHECK_THROWS_AS(init_crossbar(0, 8, ResistanceDistribution{}, rng), ParamError);
        CHECK_THROWS_AS(init_crossbar(8, 0, ResistanceDistribution{}, rng), ParamError);
    }
}

TEST_CASE("program_cell: verify loop") {
    Rng rng(17);
    SUBCASE("zero variance with a window containing the median: one attempt") {
        CrossbarConfig cfg = test_config(2, 2);
        cfg.dist = zero_sigma();
        CrossbarState xbar = make_crossbar(cfg, rng);
        const VerifyWindow w = VerifyWindow::for_state(DeviceState::Lrs, cfg.dist);
        const ProgramOutcome out = program_cell(xbar, 0, 0, DeviceState::Lrs, w, 10, rng);
        CHECK(out.in_window);
        CHECK(out.attempts == 1);
        CHECK(out.final_resistance_mohm == 2.0);
        CHECK(xbar.at(0, 0).state == DeviceState::Lrs);
    }
    SUBCASE("window excluding the median with zero variance: exhausts attempts") {
        CrossbarConfig cfg = test_config(2, 2);
        cfg.dist = zero_sigma();
        CrossbarState xbar = make_crossbar(cfg, rng);
        const VerifyWindow w{2.5, 3.0};
        const ProgramOutcome out = program_cell(xbar, 1, 1, DeviceState::Lrs, w, 10, rng);
        CHECK_FALSE(out.in_window);
        CHECK(out.attempts == 10);
        CHECK(xbar.at(1, 1).program_count == 11);  // init pulse + 10 attempts
    }
    SUBCASE("single-attempt success rate matches the sampler's in-window mass") {
        CrossbarConfig cfg = test_config(1, 1);
        cfg.dist.sigma_lrs = 0.5;
        cfg.dist.sigma_hrs = 0.5;
        cfg.dist.separation_threshold = 1.0;
        const VerifyWindow w{2.0 / 1.2, 2.0 * 1.2};

        Rng sample_rng = Rng::substream(100, "mass-oracle");
        int in_mass = 0;
        const int mass_draws = 100000;
        for (int i = 0; i < mass_draws; ++i)
            if (w.contains(sample_resistance_mohm(DeviceState::Lrs, cfg.dist, sample_rng)))
                ++in_mass;
        const double mass = static_cast<double>(in_mass) / mass_draws;

        Rng prog_rng = Rng::substream(100, "program");
        int successes = 0;
        const int trials = 10000;
        for (int i = 0; i < trials; ++i) {
            CrossbarState xbar = make_crossbar(cfg, prog_rng);
            if (program_cell(xbar, 0, 0, DeviceState::Lrs, w, 1, prog_rng).in_window)
                ++successes;
        }
        const double rate = static_cast<double>(successes) / trials;
        CHECK(rate == doctest::Approx(mass).epsilon(0.02));
    }
    SUBCASE("out-of-bounds rejected") {
        CrossbarConfig cfg = test_config(2, 2);
        CrossbarState xbar = make_crossbar(cfg, rng);
        const VerifyWindow w{1.0, 3.0};
        CHECK_THROWS_AS(program_cell(xbar, 2, 0, DeviceState::Lrs, w, 1, rng), ParamError);
    }
}

TEST_CASE("ideal_read_row: Ohm's law and the dot-product oracle") {
    Rng rng(23);
    SUBCASE("all zero voltages give zero current") {
        CrossbarState xbar = make_crossbar(test_config(4, 4), rng);
        const std::vector<double> v(4, 0.0);
        const RowRead read = ideal_read_row(xbar, 2, v);
        CHECK(read.current_amps == 0.0);
        CHECK(read.tia_voltage == 0.0);
    }
    SUBCASE("1x1 single element: 0.8 V across 2 MΩ through r_f = 1 MΩ") {
        CrossbarConfig cfg = test_config(1, 1);
        cfg.dist = zero_sigma();
        CrossbarState xbar = make_crossbar(cfg, rng);
        const VerifyWindow w = VerifyWindow::for_state(DeviceState::Lrs, cfg.dist);
        program_cell(xbar, 0, 0, DeviceState::Lrs, w, 1, rng);
        const std::vector<double> v{0.8};
        const RowRead read = ideal_read_row(xbar, 0, v);
        CHECK(read.current_amps == doctest::Approx(0.4e-6).epsilon(1e-12));
        CHECK(read.tia_voltage == doctest::Approx(0.4).epsilon(1e-12));
    }
    SUBCASE("1x4 mixed voltages equal the dense dot product") {
        CrossbarConfig cfg = test_config(1, 4);
        CrossbarState xbar = make_crossbar(cfg, rng);
        const std::vector<double> v{0.8, 0.0, 0.4, 0.2};
        double expect = 0.0;
        for (int c = 0; c < 4; ++c) expect += v[c] * xbar.conductance(0, c);
        const RowRead read = ideal_read_row(xbar, 0, v);
        CHECK(read.current_amps == doctest::Approx(expect).epsilon(1e-12));
    }
    SUBCASE("linearity of reads") {
        CrossbarState xbar = make_crossbar(test_config(6, 6), rng);
        Rng vr(5);
        std::vector<double> v1(6), v2(6), mix(6);
        for (int c = 0; c < 6; ++c) {
            v1[c] = vr.uniform(-1.0, 1.0);
            v2[c] = vr.uniform(-1.0, 1.0);
            mix[c] = 2.0 * v1[c] - 3.0 * v2[c];
        }
        const double lhs = ideal_read_row(xbar, 3, mix).current_amps;
        const double rhs = 2.0 * ideal_read_row(xbar, 3, v1).current_amps -
                           3.0 * ideal_read_row(xbar, 3, v2).current_amps;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
    SUBCASE("random crossbars up to 64x64 match the oracle") {
        Rng dims(9);
        for (int rep = 0; rep < 10; ++rep) {
            const int rows = 1 + static_cast<int>(dims.bounded(64));
            const int cols = 1 + static_cast<int>(dims.bounded(64));
            CrossbarState xbar = make_crossbar(test_config(rows, cols), dims);
            std::vector<double> v(cols);
            for (double& x : v) x = dims.uniform(0.0, 0.8);
            const int row = static_cast<int>(dims.bounded(rows));
            double expect = 0.0;
            for (int c = 0; c < cols; ++c) expect += v[c] * xbar.conductance(row, c);
            CHECK(ideal_read_row(xbar, row, v).current_amps ==
                  doctest::Approx(expect).epsilon(1e-12));
        }
    }
    SUBCASE("argmax is invariant under r_f scaling") {
        CrossbarConfig cfg = test_config(4, 4);
        Rng xr = Rng::substream(3, "x");
        CrossbarState xbar = make_crossbar(cfg, xr);
        const std::vector<double> v{0.8, 0.8, 0.0, 0.4};
        const double a = ideal_read_row(xbar, 0, v).tia_voltage;
        const double b = ideal_read_row(xbar, 1, v).tia_voltage;
        CrossbarState scaled = xbar;
        scaled.config.r_f_ohm = 7.5e6;
        const double as = ideal_read_row(scaled, 0, v).tia_voltage;
        const double bs = ideal_read_row(scaled, 1, v).tia_voltage;
        CHECK(as == doctest::Approx(7.5 * a).epsilon(1e-12));
        CHECK(bs == doctest::Approx(7.5 * b).epsilon(1e-12));
        CHECK((a > b) == (as > bs));
    }
}

TEST_CASE("tia clipping at the rails is reported") {
    Rng rng(31);
    CrossbarConfig cfg = test_config(1, 1);
    cfg.dist = zero_sigma();
    cfg.rail_voltage = 0.3;  // below the 0.4 V unclipped output
    CrossbarState xbar = make_crossbar(cfg, rng);
    const VerifyWindow w = VerifyWindow::for_state(DeviceState::Lrs, cfg.dist);
    program_cell(xbar, 0, 0, DeviceState::Lrs, w, 1, rng);
    const std::vector<double> v{0.8};
    const RowRead read = ideal_read_row(xbar, 0, v);
    CHECK(read.clipped);
    CHECK(read.tia_voltage == 0.3);

    ReadDiag diag;
    read_row(xbar, 0, v, ReadMode::ideal(), &diag);
    CHECK(diag.clipped_cycles == 1);
}

TEST_CASE("adc quantization snaps the sensed voltage to the converter grid") {
    Rng rng(46);
    CrossbarConfig cfg = test_config(1, 1);
    cfg.dist = zero_sigma();
    cfg.rail_voltage = 3.3;
    CrossbarState xbar = make_crossbar(cfg, rng);
    const VerifyWindow w = VerifyWindow::for_state(DeviceState::Lrs, cfg.dist);
    program_cell(xbar, 0, 0, DeviceState::Lrs, w, 1, rng);
    const std::vector<double> v{0.8};  // 0.4 V at the TIA

    CHECK(ideal_read_row(xbar, 0, v).tia_voltage == doctest::Approx(0.4).epsilon(1e-12));
    xbar.config.adc_bits = 4;  // lsb = 6.6 / 16 = 0.4125
    CHECK(ideal_read_row(xbar, 0, v).tia_voltage == doctest::Approx(0.4125).epsilon(1e-12));
    xbar.config.adc_bits = 12;
    const double lsb = 6.6 / 4096.0;
    CHECK(std::abs(ideal_read_row(xbar, 0, v).tia_voltage - 0.4) <= 0.5 * lsb);

    xbar.config.adc_bits = -1;
    CHECK_THROWS_AS(xbar.config.validate(), ParamError);
}

TEST_CASE("auto r_f puts full-scale current at 90% of the rail") {
    CrossbarConfig cfg;
    cfg.rows = 8;
    cfg.cols = 8;
    cfg.dist = zero_sigma();
    const double r_f = cfg.feedback_ohm();
    const double full_scale = 8 * 0.8 * (1e-6 / 2.0);
    CHECK(r_f * full_scale == doctest::Approx(0.9 * 3.3).epsilon(1e-12));
}

TEST_CASE("read_row: sneak-path dispatch") {
    Rng rng(37);
    SUBCASE("one-row crossbar: no alternate paths, equals ideal") {
        CrossbarConfig cfg = test_config(1, 6);
        CrossbarState xbar = make_crossbar(cfg, rng);
        std::vector<double> v(6, 0.8);
        const double ideal = read_row(xbar, 0, v, ReadMode::ideal());
        const double sneak = read_row(xbar, 0, v, ReadMode::sneak());
        CHECK(sneak == doctest::Approx(ideal).epsilon(1e-12));
    }
    SUBCASE("all-HRS crossbar: near-zero current in both modes") {
        CrossbarConfig cfg = test_config(4, 4);
        cfg.dist = zero_sigma();
        CrossbarState xbar = make_crossbar(cfg, rng);
        std::vector<double> v(4, 0.8);
        const double full_lrs_scale = 0.8 * 4 * (1e-6 / 2.0) * 1e6;
        CHECK(std::abs(read_row(xbar, 1, v, ReadMode::ideal())) < 0.05 * full_lrs_scale);
        CHECK(std::abs(read_row(xbar, 1, v, ReadMode::sneak())) < 0.05 * full_lrs_scale);
    }
    SUBCASE("4x4 all-LRS with line resistance: sneak current strictly below ideal") {
        CrossbarConfig cfg = test_config(4, 4);
        cfg.dist = zero_sigma();
        cfg.line_resistance_ohm = 10e3;
        CrossbarState xbar = make_crossbar(cfg, rng);
        const VerifyWindow w = VerifyWindow::for_state(DeviceState::Lrs, cfg.dist);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) program_cell(xbar, r, c, DeviceState::Lrs, w, 1, rng);
        std::vector<double> v(4, 0.8);
        const double ideal = read_row(xbar, 1, v, ReadMode::ideal());
        const double sneak = read_row(xbar, 1, v, ReadMode::sneak());
        CHECK(sneak < ideal);
        CHECK(sneak > 0.0);
        // cross-check the mesh against the independently stamped oracle
        const double expect = oracle::mesh_sensed_current(xbar, v, 1, FloatingRowPolicy::Floating);
        CHECK(sneak == doctest::Approx(1e6 * expect).epsilon(1e-9));
    }
}

TEST_CASE("sneak-path sensed current never exceeds the ideal read under uniform drive") {
    // With every column at the same voltage, line resistance and floating-row
    // leakage can only sag the network below the drive level, so the sensed
    // current stays at or below the ideal read. (Mixed drive levels can
    // genuinely exceed ideal: a floating row lifts a grounded column's line
    // above 0 V and feeds the sensed row through it.)
    Rng rng(45);
    for (int rep = 0; rep < 50; ++rep) {
        const int rows = 2 + static_cast<int>(rng.bounded(7));
        const int cols = 1 + static_cast<int>(rng.bounded(8));
        CrossbarConfig cfg = test_config(rows, cols);
        cfg.line_resistance_ohm = 1e3 * std::pow(10.0, rng.uniform(0.0, 3.0));
        CrossbarState xbar = make_crossbar(cfg, rng);
        for (DeviceCell& cell : xbar.cells)
            cell.resistance_mohm = 0.2 * std::pow(10.0, rng.uniform(0.0, 3.0));
        const std::vector<double> v(cols, 0.8);
        const int row = static_cast<int>(rng.bounded(rows));
        const double ideal = read_row(xbar, row, v, ReadMode::ideal());
        const double sneak = read_row(xbar, row, v, ReadMode::sneak());
        CHECK(std::abs(sneak) <= std::abs(ideal) * (1.0 + 1e-9));
    }
}

TEST_CASE("device-to-device variability freezes per-device resistances") {
    CrossbarConfig cfg = test_config(2, 2);
    cfg.variability = VariabilityMode::DeviceToDevice;
    Rng rng(41);
    CrossbarState xbar = make_crossbar(cfg, rng);
    const VerifyWindow w{0.0, 1e9};
    program_cell(xbar, 0, 0, DeviceState::Lrs, w, 1, rng);
    const double first = xbar.at(0, 0).resistance_mohm;
    program_cell(xbar, 0, 0, DeviceState::Hrs, w, 1, rng);
    program_cell(xbar, 0, 0, DeviceState::Lrs, w, 1, rng);
    CHECK(xbar.at(0, 0).resistance_mohm == first);

    CrossbarConfig c2c = test_config(2, 2);
    Rng rng2(41);
    CrossbarState xbar2 = make_crossbar(c2c, rng2);
    program_cell(xbar2, 0, 0, DeviceState::Lrs, w, 1, rng2);
    const double a = xbar2.at(0, 0).resistance_mohm;
    program_cell(xbar2, 0, 0, DeviceState::Lrs, w, 1, rng2);
    CHECK(xbar2.at(0, 0).resistance_mohm != a);
}
