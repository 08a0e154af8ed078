#include <doctest.h>

#include <cmath>
#include <vector>

#include "xbarvmm/encoder.hpp"
#include "xbarvmm/errors.hpp"
#include "xbarvmm/solver.hpp"

using namespace xbarvmm;

TEST_CASE("fit_normalization: per-feature extrema over the training split") {
    SUBCASE("single sample has min == max") {
        Matrix x(1, 3);
        x(0, 0) = 1.0; x(0, 1) = -2.0; x(0, 2) = 0.5;
        const NormalizationStats s = fit_normalization(x);
        for (int f = 0; f < 3; ++f) {
            CHECK(s.min[f] == x(0, f));
            CHECK(s.max[f] == x(0, f));
        }
    }
    SUBCASE("two samples") {
        Matrix x(2, 1);
        x(0, 0) = 0.0; x(1, 0) = 10.0;
        const NormalizationStats s = fit_normalization(x);
        CHECK(s.min[0] == 0.0);
        CHECK(s.max[0] == 10.0);
    }
    SUBCASE("empty input rejected") {
        CHECK_THROWS_AS(fit_normalization(Matrix(0, 3)), ParamError);
    }
}

TEST_CASE("quantize: Algorithm-1 rounding and clamping") {
    NormalizationStats s;
    s.min = {0.0, 0.0, 5.0};
    s.max = {10.0, 0.0, 5.0};  // features 1 and 2 are constant

    SUBCASE("min maps to 0, max maps to 255") {
        const std::vector<double> at_min{0.0, 0.0, 5.0};
        const std::vector<double> at_max{10.0, 0.0, 5.0};
        CHECK(quantize(at_min, s).values == std::vector<std::uint8_t>{0, 0, 0});
        CHECK(quantize(at_max, s).values == std::vector<std::uint8_t>{255, 0, 0});
    }
    SUBCASE("midpoint rounds half away from zero: 127.5 -> 128") {
        const std::vector<double> mid{5.0, 0.0, 5.0};
        CHECK(quantize(mid, s).values[0] == 128);
    }
    SUBCASE("out-of-range test values clamp") {
        const std::vector<double> low{-3.0, 1.0, 4.0};
        const std::vector<double> high{42.0, -1.0, 6.0};
        CHECK(quantize(low, s).values == std::vector<std::uint8_t>{0, 0, 0});
        CHECK(quantize(high, s).values == std::vector<std::uint8_t>{255, 0, 0});
    }
    SUBCASE("idempotent on in-range grid points") {
        NormalizationStats grid;
        grid.min = {0.0};
        grid.max = {255.0};
        Rng rng(70);
        for (int rep = 0; rep < 50; ++rep) {
            const double v = static_cast<double>(rng.bounded(256));
            const std::vector<double> x{v};
            CHECK(quantize(x, grid).values[0] == static_cast<std::uint8_t>(v));
        }
    }
}

TEST_CASE("pwm_expand: thermometer code over 255 cycles") {
    QuantizedSample q;
    q.values = {0, 255, 100};
    const PwmTrace t = pwm_expand(q, 0.8);

    SUBCASE("cycle sums recover the quantized values") {
        for (int f = 0; f < 3; ++f) {
            int sum = 0;
            for (int c = 0; c < kPwmCycles; ++c) sum += t.active(c, f) ? 1 : 0;
            CHECK(sum == q.values[f]);
        }
    }
    SUBCASE("value 100 activates exactly cycles 0..99") {
        CHECK(t.active(0, 2));
        CHECK(t.active(99, 2));
        CHECK_FALSE(t.active(100, 2));
    }
    SUBCASE("monotone: smaller value's cycles are a subset") {
        Rng rng(71);
        for (int rep = 0; rep < 30; ++rep) {
            const std::uint8_t a = static_cast<std::uint8_t>(rng.bounded(256));
            const std::uint8_t b = static_cast<std::uint8_t>(rng.bounded(256));
            QuantizedSample qq;
            qq.values = {std::min(a, b), std::max(a, b)};
            const PwmTrace tt = pwm_expand(qq, 0.8);
            for (int c = 0; c < kPwmCycles; ++c)
                if (tt.active(c, 0)) CHECK(tt.active(c, 1));
        }
    }
}

TEST_CASE("pwm segments: grouped patterns equal the cycle-by-cycle expansion") {
    Rng rng(72);
    for (int rep = 0; rep < 20; ++rep) {
        const int f_count = 1 + static_cast<int>(rng.bounded(8));
        QuantizedSample q;
        q.values.resize(f_count);
        for (auto& v : q.values) v = static_cast<std::uint8_t>(rng.bounded(256));
        const PwmTrace t = pwm_expand(q, 0.8);
        const auto segs = t.segments();
        CHECK(static_cast<int>(segs.size()) <= f_count + 1);

        // reassemble per-feature active-cycle counts from the segments
        std::vector<int> counts(f_count, 0);
        int total_cycles = 0;
        for (const auto& seg : segs) {
            total_cycles += seg.cycles;
            for (int f = 0; f < f_count; ++f)
                if (seg.column_voltages[f] != 0.0) counts[f] += seg.cycles;
        }
        CHECK(total_cycles <= kPwmCycles);
        for (int f = 0; f < f_count; ++f) CHECK(counts[f] == q.values[f]);
    }
}

namespace {

CrossbarConfig linear_config(int rows, int cols) {
    CrossbarConfig cfg;
    cfg.rows = rows;
    cfg.cols = cols;
    cfg.r_f_ohm = 1e6;
    cfg.rail_voltage = 1e9;
    return cfg;
}

}  // namespace

TEST_CASE("pwm_accumulate: ideal mode equals the integer dot product") {
    Rng rng(73);
    SUBCASE("all-zero trace accumulates to zero") {
        CrossbarState xbar = make_crossbar(linear_config(4, 4), rng);
        QuantizedSample q;
        q.values = {0, 0, 0, 0};
        CHECK(pwm_accumulate(xbar, 1, pwm_expand(q, 0.8), ReadMode::ideal()) == 0.0);
    }
    SUBCASE("random 8x8 crossbars match pulse_voltage × r_f × (values · G)") {
        for (int rep = 0; rep < 50; ++rep) {
            CrossbarState xbar = make_crossbar(linear_config(8, 8), rng);
            QuantizedSample q;
            q.values.resize(8);
            for (auto& v : q.values) v = static_cast<std::uint8_t>(rng.bounded(256));
            const int row = static_cast<int>(rng.bounded(8));
            double dot = 0.0;
            for (int f = 0; f < 8; ++f) dot += q.values[f] * xbar.conductance(row, f);
            const double expect = 0.8 * 1e6 * dot;
            const double got = pwm_accumulate(xbar, row, pwm_expand(q, 0.8), ReadMode::ideal());
            CHECK(got == doctest::Approx(expect).epsilon(1e-9));
        }
    }
    SUBCASE("sneak mode on a 1-row crossbar equals ideal accumulation") {
        CrossbarState xbar = make_crossbar(linear_config(1, 6), rng);
        QuantizedSample q;
        q.values = {10, 255, 0, 128, 3, 77};
        const PwmTrace t = pwm_expand(q, 0.8);
        const double ideal = pwm_accumulate(xbar, 0, t, ReadMode::ideal());
        const double sneak = pwm_accumulate(xbar, 0, t, ReadMode::sneak());
        CHECK(sneak == doctest::Approx(ideal).epsilon(1e-12));
    }
    SUBCASE("feature count must match the crossbar") {
        CrossbarState xbar = make_crossbar(linear_config(2, 3), rng);
        QuantizedSample q;
        q.values = {1, 2};
        CHECK_THROWS_AS(pwm_accumulate(xbar, 0, pwm_expand(q, 0.8), ReadMode::ideal()),
                        ParamError);
    }
}

TEST_CASE("pwm_accumulate: sneak mode equals a cycle-by-cycle reference") {
    Rng rng(74);
    CrossbarConfig cfg = linear_config(3, 4);
    cfg.line_resistance_ohm = 25e3;
    CrossbarState xbar = make_crossbar(cfg, rng);
    for (DeviceCell& cell : xbar.cells)
        cell.resistance_mohm = 0.5 * std::pow(10.0, rng.uniform(0.0, 2.0));
    QuantizedSample q;
    q.values = {200, 13, 13, 77};
    const PwmTrace t = pwm_expand(q, 0.8);
    const double grouped = pwm_accumulate(xbar, 0, t, ReadMode::sneak());

    double reference = 0.0;  // literal 255 single-cycle reads
    for (int c = 0; c < kPwmCycles; ++c) {
        std::vector<double> v(4, 0.0);
        for (int f = 0; f < 4; ++f) v[f] = t.active(c, f) ? 0.8 : 0.0;
        reference += read_row(xbar, 0, v, ReadMode::sneak());
    }
    CHECK(grouped == doctest::Approx(reference).epsilon(1e-9));
}
