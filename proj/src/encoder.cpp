#include "xbarvmm/encoder.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "xbarvmm/errors.hpp"
#include "xbarvmm/solver.hpp"

namespace xbarvmm {

NormalizationStats fit_normalization(const Matrix& x_train) {
    if (x_train.rows < 1) throw ParamError("fit_normalization: need at least one sample");
    NormalizationStats stats;
    stats.min.assign(x_train.cols, 0.0);
    stats.max.assign(x_train.cols, 0.0);
    for (int f = 0; f < x_train.cols; ++f) {
        double lo = x_train(0, f), hi = x_train(0, f);
        for (int s = 1; s < x_train.rows; ++s) {
            lo = std::min(lo, x_train(s, f));
            hi = std::max(hi, x_train(s, f));
        }
        stats.min[f] = lo;
        stats.max[f] = hi;
    }
    return stats;
}

QuantizedSample quantize(std::span<const double> x, const NormalizationStats& stats) {
    if (static_cast<int>(x.size()) != stats.features())
        throw ParamError("quantize: feature count mismatch");
    QuantizedSample q;
    q.values.resize(x.size());
    for (std::size_t f = 0; f < x.size(); ++f) {
        const double range = stats.max[f] - stats.min[f];
        if (range <= 0.0) {
            q.values[f] = 0;  // constant feature carries no information
            continue;
        }
        double xn = (x[f] - stats.min[f]) / range;
        xn = std::clamp(xn, 0.0, 1.0);  // test values outside the training range clamp
        // round half away from zero; xn*255 is non-negative here
        q.values[f] = static_cast<std::uint8_t>(std::round(xn * 255.0));
    }
    return q;
}

Matrix quantize_all(const Matrix& x, const NormalizationStats& stats) {
    Matrix out(x.rows, x.cols);
    for (int s = 0; s < x.rows; ++s) {
        QuantizedSample q = quantize(x.row(s), stats);
        for (int f = 0; f < x.cols; ++f) out(s, f) = q.values[f];
    }
    return out;
}

PwmTrace pwm_expand(const QuantizedSample& q, double pulse_voltage) {
    PwmTrace trace;
    trace.values = q.values;
    trace.pulse_voltage = pulse_voltage;
    return trace;
}

std::vector<PwmTrace::Segment> PwmTrace::segments() const {
    // sorted distinct nonzero values; cycles in [u_{i-1}, u_i) share the
    // activation set {f : values[f] >= u_i}
    std::vector<std::uint8_t> uniq = values;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());

    std::vector<Segment> segs;
    int prev = 0;
    for (std::uint8_t u : uniq) {
        if (u == 0) continue;
        Segment seg;
        seg.cycles = u - prev;
        seg.column_voltages.resize(values.size());
        for (std::size_t f = 0; f < values.size(); ++f)
            seg.column_voltages[f] = values[f] >= u ? pulse_voltage : 0.0;
        segs.push_back(std::move(seg));
        prev = u;
    }
    // remaining cycles up to 255 drive every column at 0 V and contribute
    // nothing; they are not emitted
    return segs;
}

double pwm_accumulate(const CrossbarState& xbar, int row, const PwmTrace& trace,
                      ReadMode mode, ReadDiag* diag, Rng* sense_rng,
                      const RowReadSolver* solver) {
    if (trace.features() != xbar.cols())
        throw ParamError("pwm_accumulate: trace feature count must equal crossbar columns");

    std::unique_ptr<RowReadSolver> local;
    if (mode.is_sneak() && !solver) {
        local = std::make_unique<RowReadSolver>(xbar, row, mode.floating_rows);
        solver = local.get();
    }

    double total = 0.0;
    for (const PwmTrace::Segment& seg : trace.segments()) {
        double tia;
        if (!mode.is_sneak()) {
            RowRead read = ideal_read_row(xbar, row, seg.column_voltages);
            if (diag) {
                diag->solves += 1;
                if (read.clipped) diag->clipped_cycles += seg.cycles;
            }
            tia = read.tia_voltage;
        } else {
            NodalSolution sol = solver->solve(seg.column_voltages);
            RowRead read = tia_sense(xbar.config, sol.sensed_row_current);
            if (diag) {
                diag->solves += 1;
                diag->max_kcl_residual = std::max(diag->max_kcl_residual, sol.kcl_residual);
                if (read.clipped) diag->clipped_cycles += seg.cycles;
            }
            tia = read.tia_voltage;
        }
        total += seg.cycles * tia;
        // independent per-cycle sense noise integrates to sigma·sqrt(cycles)
        if (sense_rng && xbar.config.sense_noise_sigma > 0.0)
            total += xbar.config.sense_noise_sigma * std::sqrt(double(seg.cycles)) *
                     sense_rng->normal01();
    }
    return total;
}

}  // namespace xbarvmm
