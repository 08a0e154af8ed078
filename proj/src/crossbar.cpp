#include "xbarvmm/crossbar.hpp"

#include <algorithm>
#include <cmath>

#include "xbarvmm/errors.hpp"
#include "xbarvmm/solver.hpp"

namespace xbarvmm {

double CrossbarConfig::feedback_ohm() const {
    if (r_f_ohm > 0.0) return r_f_ohm;
    // full-scale row current: every column at read_voltage through a
    // median-LRS cell; place it at 90% of the rail
    const double g_lrs = 1e-6 / dist.median_lrs_mohm;
    const double full_scale = cols * read_voltage * g_lrs;
    return 0.9 * rail_voltage / full_scale;
}

void CrossbarConfig::validate() const {
    if (rows < 1 || cols < 1) throw ParamError("crossbar dimensions must be >= 1");
    dist.validate();
    if (line_resistance_ohm < 0.0) throw ParamError("line_resistance_ohm must be >= 0");
    if (!(read_voltage > 0.0)) throw ParamError("read_voltage must be > 0");
    if (!(rail_voltage > 0.0)) throw ParamError("rail_voltage must be > 0");
    if (r_f_ohm < 0.0) throw ParamError("r_f_ohm must be >= 0 (0 = auto)");
    if (sense_noise_sigma < 0.0) throw ParamError("sense_noise_sigma must be >= 0");
    if (adc_bits < 0 || adc_bits > 30) throw ParamError("adc_bits must be in [0, 30]");
}

CrossbarState make_crossbar(const CrossbarConfig& config, Rng& rng) {
    config.validate();
    CrossbarState xbar;
    xbar.config = config;
    const std::size_t n = static_cast<std::size_t>(config.rows) * config.cols;
    xbar.cells.resize(n);
    if (config.variability == VariabilityMode::DeviceToDevice) {
        xbar.frozen_lrs_mohm.resize(n);
        xbar.frozen_hrs_mohm.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            xbar.frozen_lrs_mohm[i] = sample_resistance_mohm(DeviceState::Lrs, config.dist, rng);
            xbar.frozen_hrs_mohm[i] = sample_resistance_mohm(DeviceState::Hrs, config.dist, rng);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        DeviceCell cell;
        cell.state = DeviceState::Hrs;
        cell.resistance_mohm = xbar.frozen_hrs_mohm.empty()
                                   ? sample_resistance_mohm(DeviceState::Hrs, config.dist, rng)
                                   : xbar.frozen_hrs_mohm[i];
        cell.program_count = 1;
        xbar.cells[i] = cell;
    }
    return xbar;
}

CrossbarState init_crossbar(int rows, int cols, const ResistanceDistribution& dist, Rng& rng) {
    CrossbarConfig config;
    config.rows = rows;
    config.cols = cols;
    config.dist = dist;
    return make_crossbar(config, rng);
}

namespace {

void pulse(CrossbarState& xbar, int row, int col, DeviceState target, Rng& rng) {
    const std::size_t i = static_cast<std::size_t>(row) * xbar.cols() + col;
    DeviceCell& cell = xbar.cells[i];
    if (xbar.config.variability == VariabilityMode::DeviceToDevice) {
        cell.state = target;
        cell.resistance_mohm = target == DeviceState::Lrs ? xbar.frozen_lrs_mohm[i]
                                                          : xbar.frozen_hrs_mohm[i];
        cell.program_count += 1;
    } else {
        cell = transition(cell, target, xbar.config.dist, rng);
    }
}

}  // namespace

ProgramOutcome program_cell(CrossbarState& xbar, int row, int col, DeviceState target,
                            const VerifyWindow& window, int max_attempts, Rng& rng) {
    if (row < 0 || row >= xbar.rows() || col < 0 || col >= xbar.cols())
        throw ParamError("program_cell: cell index out of bounds");
    if (max_attempts < 1) throw ParamError("program_cell: max_attempts must be >= 1");

    ProgramOutcome out;
    for (int attempt = 1; attempt <= max_attempts; ++attempt) {
        pulse(xbar, row, col, target, rng);
        out.attempts = attempt;
        out.final_resistance_mohm = xbar.at(row, col).resistance_mohm;
        if (window.contains(out.final_resistance_mohm)) {
            out.in_window = true;
            break;
        }
    }
    return out;
}

RowRead ideal_read_row(const CrossbarState& xbar, int row,
                       std::span<const double> column_voltages) {
    if (row < 0 || row >= xbar.rows()) throw ParamError("ideal_read_row: row out of bounds");
    if (static_cast<int>(column_voltages.size()) != xbar.cols())
        throw ParamError("ideal_read_row: column voltage count mismatch");

    double current = 0.0;
    for (int c = 0; c < xbar.cols(); ++c)
        current += column_voltages[c] * xbar.conductance(row, c);
    return tia_sense(xbar.config, current);
}

double read_row(const CrossbarState& xbar, int row, std::span<const double> column_voltages,
                ReadMode mode, ReadDiag* diag, Rng* sense_rng) {
    RowRead read;
    if (!mode.is_sneak()) {
        read = ideal_read_row(xbar, row, column_voltages);
        if (diag) diag->solves += 1;
    } else {
        ReadBoundaryConditions bc;
        bc.column_voltages.assign(column_voltages.begin(), column_voltages.end());
        bc.sensed_row = row;
        bc.policy = mode.floating_rows;
        NodalSolution sol = xbar.config.line_resistance_ohm > 0.0
                                ? solve_read_with_line_resistance(xbar, bc)
                                : solve_read(xbar, bc);
        read = tia_sense(xbar.config, sol.sensed_row_current);
        if (diag) {
            diag->solves += 1;
            diag->max_kcl_residual = std::max(diag->max_kcl_residual, sol.kcl_residual);
        }
    }
    if (diag && read.clipped) diag->clipped_cycles += 1;
    if (sense_rng && xbar.config.sense_noise_sigma > 0.0)
        read.tia_voltage += xbar.config.sense_noise_sigma * sense_rng->normal01();
    return read.tia_voltage;
}

}  // namespace xbarvmm
