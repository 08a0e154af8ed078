#include "xbarvmm/mapper.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "xbarvmm/errors.hpp"
#include "xbarvmm/solver.hpp"
#include "xbarvmm/trainer.hpp"

namespace xbarvmm {

MappingPlan::PairLocation MappingPlan::pair_location(int class_k, int partition) const {
    const int pairs_per_phase = rows / 2;
    const int pair_index = class_k * n_partitions + partition;
    return {pair_index / pairs_per_phase, 2 * (pair_index % pairs_per_phase)};
}

MappingPlan plan_mapping(const Matrix& binary_weights, int rows, int cols) {
    if (rows < 2) throw ParamError("plan_mapping: need at least 2 rows for a device pair");
    if (cols < 1) throw ParamError("plan_mapping: need at least 1 column");
    if (binary_weights.rows < 1 || binary_weights.cols < 1)
        throw ParamError("plan_mapping: empty weight matrix");
    for (double w : binary_weights.data)
        if (w != 1.0 && w != -1.0)
            throw ParamError("plan_mapping: weights must be ±1");

    MappingPlan plan;
    plan.classes = binary_weights.rows;
    plan.features = binary_weights.cols;
    plan.rows = rows;
    plan.cols = cols;
    plan.n_partitions = (plan.features + cols - 1) / cols;
    const int pairs = plan.classes * plan.n_partitions;
    const int pairs_per_phase = rows / 2;
    plan.phases = (pairs + pairs_per_phase - 1) / pairs_per_phase;

    plan.partition_widths.resize(plan.n_partitions);
    for (int p = 0; p < plan.n_partitions; ++p)
        plan.partition_widths[p] = std::min(cols, plan.features - p * cols);

    for (int k = 0; k < plan.classes; ++k)
        for (int p = 0; p < plan.n_partitions; ++p) {
            const MappingPlan::PairLocation loc = plan.pair_location(k, p);
            for (int c = 0; c < plan.partition_widths[p]; ++c) {
                const int feature = p * cols + c;
                const int w = binary_weights(k, feature) > 0 ? 1 : -1;
                for (Polarity pol : {Polarity::Plus, Polarity::Minus}) {
                    WeightSlot slot;
                    slot.class_k = k;
                    slot.polarity = pol;
                    slot.partition = p;
                    slot.feature = feature;
                    slot.phase = loc.phase;
                    slot.row = loc.row + (pol == Polarity::Minus ? 1 : 0);
                    slot.col = c;
                    slot.logical_weight = w;
                    // +1 → (LRS, HRS); −1 → (HRS, LRS)
                    const bool lrs = (w > 0) == (pol == Polarity::Plus);
                    slot.target = lrs ? DeviceState::Lrs : DeviceState::Hrs;
                    plan.slots.push_back(slot);
                }
            }
        }
    return plan;
}

ProgrammedArray program_plan(const MappingPlan& plan, const CrossbarConfig& config,
                             const VerifyParams& verify, ProgramFailurePolicy policy,
                             Rng& rng) {
    if (config.rows != plan.rows || config.cols != plan.cols)
        throw ParamError("program_plan: crossbar dimensions do not match the plan");

    ProgrammedArray out;
    out.phase_states.reserve(plan.phases);
    for (int ph = 0; ph < plan.phases; ++ph)
        out.phase_states.push_back(make_crossbar(config, rng));

    const VerifyWindow lrs_window =
        VerifyWindow::for_state(DeviceState::Lrs, config.dist, verify.window_factor);

    for (const WeightSlot& slot : plan.slots) {
        // the all-HRS initialization already realizes HRS targets
        if (slot.target != DeviceState::Lrs) continue;
        ProgramOutcome res = program_cell(out.phase_states[slot.phase], slot.row, slot.col,
                                          DeviceState::Lrs, lrs_window, verify.max_attempts,
                                          rng);
        CellProgram record;
        record.phase = slot.phase;
        record.row = slot.row;
        record.col = slot.col;
        record.target = DeviceState::Lrs;
        record.attempts = res.attempts;
        record.in_window = res.in_window;
        record.final_resistance_mohm = res.final_resistance_mohm;
        out.report.cells.push_back(record);
        out.report.total_attempts += res.attempts;
        if (!res.in_window) {
            out.report.failures += 1;
            if (policy == ProgramFailurePolicy::Abort)
                throw ProgramFailure("programming failed at phase " +
                                         std::to_string(slot.phase) + " cell (" +
                                         std::to_string(slot.row) + ", " +
                                         std::to_string(slot.col) + ")",
                                     res.final_resistance_mohm);
            // accept-and-log: the stuck device keeps its last sampled state
        }
    }
    return out;
}

namespace {

// solvers[phase][row] when present (SneakPath runs over many samples)
ClassScore infer_one(const MappingPlan& plan, const std::vector<CrossbarState>& phase_states,
                     const QuantizedSample& q, ReadMode mode, ReadDiag* diag, Rng* sense_rng,
                     const std::vector<std::vector<RowReadSolver>>* solvers) {
    ClassScore result;
    result.partials_plus = Matrix(plan.classes, plan.n_partitions);
    result.partials_minus = Matrix(plan.classes, plan.n_partitions);

    for (int k = 0; k < plan.classes; ++k)
        for (int p = 0; p < plan.n_partitions; ++p) {
            const MappingPlan::PairLocation loc = plan.pair_location(k, p);
            const CrossbarState& xbar = phase_states[loc.phase];
            // partition slice, zero-padded to the crossbar width
            QuantizedSample slice;
            slice.values.assign(plan.cols, 0);
            const int off = plan.partition_offset(p);
            for (int c = 0; c < plan.partition_widths[p]; ++c)
                slice.values[c] = q.values[off + c];
            const PwmTrace trace = pwm_expand(slice, xbar.config.read_voltage);
            const RowReadSolver* plus_solver =
                solvers ? &(*solvers)[loc.phase][loc.row] : nullptr;
            const RowReadSolver* minus_solver =
                solvers ? &(*solvers)[loc.phase][loc.row + 1] : nullptr;
            result.partials_plus(k, p) =
                pwm_accumulate(xbar, loc.row, trace, mode, diag, sense_rng, plus_solver);
            result.partials_minus(k, p) =
                pwm_accumulate(xbar, loc.row + 1, trace, mode, diag, sense_rng, minus_solver);
        }

    result.plus_sums.assign(plan.classes, 0.0);
    result.minus_sums.assign(plan.classes, 0.0);
    result.scores.assign(plan.classes, 0.0);
    for (int k = 0; k < plan.classes; ++k) {
        for (int p = 0; p < plan.n_partitions; ++p) {
            result.plus_sums[k] += result.partials_plus(k, p);
            result.minus_sums[k] += result.partials_minus(k, p);
        }
        result.scores[k] = result.plus_sums[k] - result.minus_sums[k];
    }
    result.decision = decide(result.scores);
    return result;
}

}  // namespace

ClassScore schedule_inference(const MappingPlan& plan,
                              const std::vector<CrossbarState>& phase_states,
                              const QuantizedSample& q, ReadMode mode, ReadDiag* diag,
                              Rng* sense_rng) {
    if (q.features() != plan.features)
        throw ParamError("schedule_inference: input feature count does not match the plan");
    if (static_cast<int>(phase_states.size()) != plan.phases)
        throw ParamError("schedule_inference: phase crossbar count does not match the plan");
    return infer_one(plan, phase_states, q, mode, diag, sense_rng, nullptr);
}

HardwareEval hardware_forward_dataset(const MappingPlan& plan,
                                      const std::vector<CrossbarState>& phase_states,
                                      const Matrix& x_quantized, ReadMode mode,
                                      Rng* sense_rng) {
    if (x_quantized.cols != plan.features)
        throw ParamError("hardware_forward_dataset: feature count mismatch");
    if (static_cast<int>(phase_states.size()) != plan.phases)
        throw ParamError("hardware_forward_dataset: phase crossbar count mismatch");

    // factor each row's network once; reused for every sample
    std::vector<std::vector<RowReadSolver>> solvers;
    if (mode.is_sneak()) {
        solvers.resize(plan.phases);
        for (int ph = 0; ph < plan.phases; ++ph)
            for (int r = 0; r < plan.rows; ++r)
                solvers[ph].emplace_back(phase_states[ph], r, mode.floating_rows);
    }

    HardwareEval eval;
    eval.predictions.reserve(x_quantized.rows);
    eval.scores.reserve(x_quantized.rows);

    for (int s = 0; s < x_quantized.rows; ++s) {
        QuantizedSample q;
        q.values.resize(plan.features);
        for (int f = 0; f < plan.features; ++f)
            q.values[f] = static_cast<std::uint8_t>(x_quantized(s, f));
        ClassScore score = infer_one(plan, phase_states, q, mode, &eval.diag, sense_rng,
                                     mode.is_sneak() ? &solvers : nullptr);
        eval.predictions.push_back(score.decision);
        eval.scores.push_back(std::move(score));
    }
    return eval;
}

}  // namespace xbarvmm
