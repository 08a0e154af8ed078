#include <doctest.h>

#include <cmath>
#include <map>
#include <vector>

#include "xbarvmm/errors.hpp"
#include "xbarvmm/mapper.hpp"
#include "xbarvmm/trainer.hpp"

using namespace xbarvmm;

namespace {

Matrix weights_from(const std::vector<std::vector<int>>& w) {
    Matrix m(static_cast<int>(w.size()), static_cast<int>(w[0].size()));
    for (std::size_t k = 0; k < w.size(); ++k)
        for (std::size_t f = 0; f < w[k].size(); ++f)
            m(static_cast<int>(k), static_cast<int>(f)) = w[k][f];
    return m;
}

DeviceState target_at(const MappingPlan& plan, int phase, int row, int col) {
    for (const WeightSlot& s : plan.slots)
        if (s.phase == phase && s.row == row && s.col == col) return s.target;
    return DeviceState::Hrs;  // unused cells stay at the HRS initialization
}

CrossbarConfig linear_config(int rows, int cols, double sigma = 0.15) {
    CrossbarConfig cfg;
    cfg.rows = rows;
    cfg.cols = cols;
    cfg.r_f_ohm = 1e6;
    cfg.rail_voltage = 1e9;
    cfg.dist.sigma_lrs = sigma;
    cfg.dist.sigma_hrs = sigma;
    return cfg;
}

}  // namespace

TEST_CASE("plan_mapping: complementary pair layout of the reference 4x4 case") {
    const Matrix w = weights_from({{-1, 1, 1, -1}, {1, 1, -1, -1}});
    const MappingPlan plan = plan_mapping(w, 4, 4);
    CHECK(plan.n_partitions == 1);
    CHECK(plan.phases == 1);
    CHECK(plan.slots.size() == 16);

    using S = DeviceState;
    const std::vector<std::vector<S>> expect{
        {S::Hrs, S::Lrs, S::Lrs, S::Hrs},   // class 0, W+
        {S::Lrs, S::Hrs, S::Hrs, S::Lrs},   // class 0, W−
        {S::Lrs, S::Lrs, S::Hrs, S::Hrs},   // class 1, W+
        {S::Hrs, S::Hrs, S::Lrs, S::Lrs}};  // class 1, W−
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) CHECK(target_at(plan, 0, r, c) == expect[r][c]);
}

TEST_CASE("plan_mapping: 30x2 network on an 8x8 crossbar") {
    Matrix w(2, 30, 1.0);
    const MappingPlan plan = plan_mapping(w, 8, 8);
    CHECK(plan.n_partitions == 4);
    CHECK(plan.partition_widths == std::vector<int>{8, 8, 8, 6});
    CHECK(plan.phases == 2);
    CHECK(plan.slots.size() == 2u * 2 * 30);
}

TEST_CASE("plan_mapping: minimal and error cases") {
    Matrix w(1, 1, 1.0);
    const MappingPlan plan = plan_mapping(w, 2, 1);
    CHECK(plan.slots.size() == 2);
    CHECK(plan.phases == 1);

    CHECK_THROWS_AS(plan_mapping(w, 1, 1), ParamError);
    Matrix bad(1, 1, 0.5);
    CHECK_THROWS_AS(plan_mapping(bad, 2, 1), ParamError);
}

TEST_CASE("plan_mapping: properties over random shapes") {
    Rng rng(90);
    for (int rep = 0; rep < 40; ++rep) {
        const int k = 1 + static_cast<int>(rng.bounded(4));
        const int f = 1 + static_cast<int>(rng.bounded(40));
        const int rows = 2 + static_cast<int>(rng.bounded(15));
        const int cols = 1 + static_cast<int>(rng.bounded(16));
        Matrix w(k, f);
        for (double& v : w.data) v = rng.bounded(2) ? 1.0 : -1.0;
        const MappingPlan plan = plan_mapping(w, rows, cols);

        // phase-count formula
        const int pairs = k * ((f + cols - 1) / cols);
        CHECK(plan.phases == (pairs + rows / 2 - 1) / (rows / 2));
        // two device slots per logical weight
        CHECK(plan.slots.size() == static_cast<std::size_t>(2 * k * f));

        // complementary invariant: exactly one LRS per (class, feature) pair
        std::map<std::pair<int, int>, int> lrs_count;
        for (const WeightSlot& s : plan.slots) {
            CHECK(s.row < rows);
            CHECK(s.col < cols);
            CHECK(s.phase < plan.phases);
            if (s.target == DeviceState::Lrs) lrs_count[{s.class_k, s.feature}] += 1;
            // plus/minus rows are consecutive, plus on the even row
            if (s.polarity == Polarity::Plus) CHECK(s.row % 2 == 0);
            if (s.polarity == Polarity::Minus) CHECK(s.row % 2 == 1);
        }
        for (int kk = 0; kk < k; ++kk)
            for (int ff = 0; ff < f; ++ff) CHECK(lrs_count[{kk, ff}] == 1);
    }
}

TEST_CASE("program_plan: zero-variance programming reproduces the target states exactly") {
    const Matrix w = weights_from({{-1, 1, 1, -1}, {1, 1, -1, -1}});
    const MappingPlan plan = plan_mapping(w, 4, 4);
    CrossbarConfig cfg = linear_config(4, 4, 0.0);
    Rng rng(91);
    const ProgrammedArray arr = program_plan(plan, cfg, VerifyParams{},
                                             ProgramFailurePolicy::Abort, rng);
    REQUIRE(arr.phase_states.size() == 1);
    const CrossbarState& xbar = arr.phase_states[0];
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const DeviceState want = target_at(plan, 0, r, c);
            CHECK(xbar.at(r, c).state == want);
            CHECK(xbar.at(r, c).resistance_mohm == (want == DeviceState::Lrs ? 2.0 : 50.0));
        }
    CHECK(arr.report.failures == 0);
    // only the 8 LRS targets needed pulses beyond initialization
    CHECK(arr.report.cells.size() == 8);
}

TEST_CASE("program_plan: empty plan leaves the crossbar all-HRS") {
    MappingPlan plan;
    plan.classes = 1;
    plan.features = 1;
    plan.rows = 2;
    plan.cols = 2;
    plan.n_partitions = 1;
    plan.phases = 1;
    plan.partition_widths = {1};
    CrossbarConfig cfg = linear_config(2, 2, 0.0);
    Rng rng(92);
    const ProgrammedArray arr =
        program_plan(plan, cfg, VerifyParams{}, ProgramFailurePolicy::Abort, rng);
    for (const DeviceCell& cell : arr.phase_states[0].cells) {
        CHECK(cell.state == DeviceState::Hrs);
        CHECK(cell.program_count == 1);
    }
}

TEST_CASE("program_plan: default distribution lands in-window or is logged") {
    Matrix w(2, 8);
    Rng wr(93);
    for (double& v : w.data) v = wr.bounded(2) ? 1.0 : -1.0;
    const MappingPlan plan = plan_mapping(w, 8, 8);
    CrossbarConfig cfg = linear_config(8, 8);
    Rng rng(94);
    const ProgrammedArray arr =
        program_plan(plan, cfg, VerifyParams{}, ProgramFailurePolicy::AcceptAndLog, rng);
    const VerifyWindow window = VerifyWindow::for_state(DeviceState::Lrs, cfg.dist);
    int logged_failures = 0;
    for (const CellProgram& c : arr.report.cells) {
        if (!c.in_window) {
            ++logged_failures;
            CHECK_FALSE(window.contains(c.final_resistance_mohm));
        } else {
            CHECK(window.contains(c.final_resistance_mohm));
        }
    }
    CHECK(logged_failures == arr.report.failures);
}

TEST_CASE("schedule_inference: zero input ties every class to zero, decision 0") {
    const Matrix w = weights_from({{-1, 1, 1, -1}, {1, 1, -1, -1}});
    const MappingPlan plan = plan_mapping(w, 4, 4);
    CrossbarConfig cfg = linear_config(4, 4, 0.0);
    Rng rng(95);
    const ProgrammedArray arr =
        program_plan(plan, cfg, VerifyParams{}, ProgramFailurePolicy::Abort, rng);
    QuantizedSample q;
    q.values = {0, 0, 0, 0};
    const ClassScore score = schedule_inference(plan, arr.phase_states, q, ReadMode::ideal());
    CHECK(score.scores[0] == 0.0);
    CHECK(score.scores[1] == 0.0);
    CHECK(score.decision == 0);
}

TEST_CASE("schedule_inference: single +1 weight at input 255 gives the closed-form score") {
    Matrix w(1, 1, 1.0);
    const MappingPlan plan = plan_mapping(w, 2, 1);
    CrossbarConfig cfg = linear_config(2, 1, 0.0);
    Rng rng(96);
    const ProgrammedArray arr =
        program_plan(plan, cfg, VerifyParams{}, ProgramFailurePolicy::Abort, rng);
    QuantizedSample q;
    q.values = {255};
    const ClassScore score = schedule_inference(plan, arr.phase_states, q, ReadMode::ideal());
    const double g_lrs = 1e-6 / 2.0, g_hrs = 1e-6 / 50.0;
    const double expect = 255.0 * 0.8 * 1e6 * (g_lrs - g_hrs);
    CHECK(score.scores[0] == doctest::Approx(expect).epsilon(1e-9));
}

TEST_CASE("schedule_inference: ideal zero-variance decisions equal the software argmax") {
    Rng rng(97);
    for (int rep = 0; rep < 30; ++rep) {
        const int k = 2 + static_cast<int>(rng.bounded(3));
        const int f = 1 + static_cast<int>(rng.bounded(20));
        const int rows = 2 * (1 + static_cast<int>(rng.bounded(8)));
        const int cols = 1 + static_cast<int>(rng.bounded(16));
        Matrix w(k, f);
        for (double& v : w.data) v = rng.bounded(2) ? 1.0 : -1.0;
        const MappingPlan plan = plan_mapping(w, rows, cols);
        CrossbarConfig cfg;  // default rail + auto r_f: clip-free at sigma 0
        cfg.rows = rows;
        cfg.cols = cols;
        cfg.dist.sigma_lrs = 0.0;
        cfg.dist.sigma_hrs = 0.0;
        const ProgrammedArray arr =
            program_plan(plan, cfg, VerifyParams{}, ProgramFailurePolicy::Abort, rng);

        Matrix x(1, f);
        QuantizedSample q;
        q.values.resize(f);
        for (int i = 0; i < f; ++i) {
            q.values[i] = static_cast<std::uint8_t>(rng.bounded(256));
            x(0, i) = q.values[i];
        }
        const Matrix scores = forward(x, w);
        const int software = decide(scores.row(0));
        const ClassScore hw = schedule_inference(plan, arr.phase_states, q, ReadMode::ideal());
        CHECK(hw.decision == software);
    }
}

TEST_CASE("schedule_inference: negating every weight negates the scores") {
    Rng rng(98);
    Matrix w(2, 10);
    for (double& v : w.data) v = rng.bounded(2) ? 1.0 : -1.0;
    Matrix w_neg = w;
    for (double& v : w_neg.data) v = -v;

    CrossbarConfig cfg = linear_config(4, 4, 0.0);
    const MappingPlan plan = plan_mapping(w, 4, 4);
    const MappingPlan plan_neg = plan_mapping(w_neg, 4, 4);
    Rng r1(7), r2(7);
    const ProgrammedArray a = program_plan(plan, cfg, VerifyParams{},
                                           ProgramFailurePolicy::Abort, r1);
    const ProgrammedArray b = program_plan(plan_neg, cfg, VerifyParams{},
                                           ProgramFailurePolicy::Abort, r2);
    QuantizedSample q;
    q.values.resize(10);
    for (auto& v : q.values) v = static_cast<std::uint8_t>(rng.bounded(256));
    const ClassScore sa = schedule_inference(plan, a.phase_states, q, ReadMode::ideal());
    const ClassScore sb = schedule_inference(plan_neg, b.phase_states, q, ReadMode::ideal());
    for (int k = 0; k < 2; ++k) CHECK(sa.scores[k] == -sb.scores[k]);
}

TEST_CASE("hardware_forward_dataset: ideal zero-variance accuracy equals software evaluate") {
    Rng rng(99);
    const int n = 80;
    Matrix x(n, 6);
    std::vector<int> y(n);
    for (int i = 0; i < n; ++i) {
        for (int f = 0; f < 6; ++f) x(i, f) = rng.uniform(0.0, 1.0);
        y[i] = x(i, 0) + x(i, 1) > x(i, 2) + x(i, 3) ? 0 : 1;
    }
    TrainerConfig tcfg;
    tcfg.epochs = 10;
    const TrainedModel model = train(x, y, 2, tcfg, 3);

    CrossbarConfig cfg;
    cfg.rows = 4;
    cfg.cols = 4;
    cfg.dist.sigma_lrs = 0.0;
    cfg.dist.sigma_hrs = 0.0;
    const MappingPlan plan = plan_mapping(model.binary_weights, 4, 4);
    Rng prng(11);
    const ProgrammedArray arr =
        program_plan(plan, cfg, VerifyParams{}, ProgramFailurePolicy::Abort, prng);
    const Matrix xq = model_inputs(model, x);
    const HardwareEval eval = hardware_forward_dataset(plan, arr.phase_states, xq,
                                                       ReadMode::ideal());
    int correct = 0;
    for (int i = 0; i < n; ++i)
        if (eval.predictions[i] == y[i]) ++correct;
    CHECK(static_cast<double>(correct) / n == evaluate(model, x, y));
}
