#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "xbarvmm/device.hpp"
#include "xbarvmm/rng.hpp"

namespace xbarvmm {

// Electrical state of rows that are not being sensed during a read.
// Floating models the selector-free crossbar of record; Grounded represents
// an all-TIA readout and doubles as a solver oracle (it reduces to the ideal read).
enum class FloatingRowPolicy { Floating, Grounded };

struct ReadMode {
    enum class Kind { Ideal, SneakPath };
    Kind kind = Kind::Ideal;
    FloatingRowPolicy floating_rows = FloatingRowPolicy::Floating;

    static ReadMode ideal() { return {Kind::Ideal, FloatingRowPolicy::Floating}; }
    static ReadMode sneak(FloatingRowPolicy p = FloatingRowPolicy::Floating) {
        return {Kind::SneakPath, p};
    }
    bool is_sneak() const { return kind == Kind::SneakPath; }
};

// Whether programming pulses re-sample resistance every pulse (cycle-to-cycle)
// or each device keeps one frozen draw per state (device-to-device only).
enum class VariabilityMode { CycleToCycle, DeviceToDevice };

struct CrossbarConfig {
    int rows = 8;
    int cols = 8;
    ResistanceDistribution dist;
    double line_resistance_ohm = 0.0;  // per line segment; 0 = ideal wires/drivers
    double read_voltage = 0.8;         // pulse magnitude in volts (sign realized by
                                       // electrode swap on the testbench; magnitude here)
    double r_f_ohm = 0.0;              // TIA feedback resistance; 0 = auto (see feedback_ohm)
    double rail_voltage = 3.3;         // TIA output clips at ±rail
    double sense_noise_sigma = 0.0;    // additive gaussian on the TIA output, volts; 0 = off
    int adc_bits = 0;                  // per-read quantization over ±rail; 0 = ideal sensing
    VariabilityMode variability = VariabilityMode::CycleToCycle;

    // Auto r_f puts the full-scale row current (all columns driven at
    // read_voltage through median-LRS cells) at 0.9 × rail.
    double feedback_ohm() const;
    void validate() const;
};

struct CrossbarState {
    CrossbarConfig config;
    std::vector<DeviceCell> cells;  // row-major, rows × cols
    // device-to-device mode: per-cell resistance frozen per state at build time
    std::vector<double> frozen_lrs_mohm;
    std::vector<double> frozen_hrs_mohm;

    int rows() const { return config.rows; }
    int cols() const { return config.cols; }
    DeviceCell& at(int r, int c) { return cells[static_cast<std::size_t>(r) * config.cols + c]; }
    const DeviceCell& at(int r, int c) const {
        return cells[static_cast<std::size_t>(r) * config.cols + c];
    }
    double conductance(int r, int c) const { return at(r, c).conductance_siemens(); }
};

// Programming verify window, in MΩ.
struct VerifyWindow {
    double lo_mohm = 0.0;
    double hi_mohm = 0.0;
    static VerifyWindow for_state(DeviceState s, const ResistanceDistribution& dist,
                                  double factor = 1.5) {
        const double m = dist.median_mohm(s);
        return {m / factor, m * factor};
    }
    bool contains(double r_mohm) const { return r_mohm >= lo_mohm && r_mohm <= hi_mohm; }
};

struct VerifyParams {
    double window_factor = 1.5;
    int max_attempts = 10;
};

struct ProgramOutcome {
    bool in_window = false;
    int attempts = 0;
    double final_resistance_mohm = 0.0;
};

// Read diagnostics accumulated across cycles/rows/samples.
struct ReadDiag {
    long solves = 0;          // solver or ideal-read invocations
    long clipped_cycles = 0;  // PWM cycles whose TIA output hit a rail
    double max_kcl_residual = 0.0;

    void merge(const ReadDiag& o) {
        solves += o.solves;
        clipped_cycles += o.clipped_cycles;
        if (o.max_kcl_residual > max_kcl_residual) max_kcl_residual = o.max_kcl_residual;
    }
};

struct RowRead {
    double current_amps = 0.0;
    double tia_voltage = 0.0;
    bool clipped = false;
};

// Apply TIA gain, rail clipping and optional ADC quantization to a sensed
// row current.
inline RowRead tia_sense(const CrossbarConfig& config, double current_amps) {
    RowRead read;
    read.current_amps = current_amps;
    read.tia_voltage = config.feedback_ohm() * current_amps;
    const double rail = config.rail_voltage;
    if (read.tia_voltage > rail) {
        read.tia_voltage = rail;
        read.clipped = true;
    } else if (read.tia_voltage < -rail) {
        read.tia_voltage = -rail;
        read.clipped = true;
    }
    if (config.adc_bits > 0) {
        // mid-tread converter over [-rail, +rail]
        const double lsb = 2.0 * rail / static_cast<double>(1LL << config.adc_bits);
        read.tia_voltage = lsb * std::round(read.tia_voltage / lsb);
    }
    return read;
}

// Fresh crossbar with every cell initialized to HRS (program_count = 1),
// matching the all-HRS initialization protocol used before weight mapping.
CrossbarState make_crossbar(const CrossbarConfig& config, Rng& rng);
CrossbarState init_crossbar(int rows, int cols, const ResistanceDistribution& dist, Rng& rng);

// Program-and-verify: pulse until the sampled resistance lands inside the
// window or attempts run out. Never throws; the caller decides what a
// failed verify means (accept-and-log vs abort).
ProgramOutcome program_cell(CrossbarState& xbar, int row, int col, DeviceState target,
                            const VerifyWindow& window, int max_attempts, Rng& rng);

// Eq.-style ideal read: row current = Σ_c V_c · G[row][c], TIA voltage
// = r_f × current clipped at ±rail. The TIA pins the sensed row to 0 V.
RowRead ideal_read_row(const CrossbarState& xbar, int row,
                       std::span<const double> column_voltages);

// Mode dispatch: Ideal → ideal_read_row; SneakPath → nodal solve (with the
// line-resistance mesh when line_resistance_ohm > 0). Returns the sensed TIA
// voltage after clipping and optional sense noise.
double read_row(const CrossbarState& xbar, int row, std::span<const double> column_voltages,
                ReadMode mode, ReadDiag* diag = nullptr, Rng* sense_rng = nullptr);

}  // namespace xbarvmm
