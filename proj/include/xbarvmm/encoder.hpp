#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "xbarvmm/crossbar.hpp"
#include "xbarvmm/matrix.hpp"

namespace xbarvmm {

class RowReadSolver;

inline constexpr int kPwmCycles = 255;
inline constexpr double kPwmCyclePeriodMs = 17.0;  // reporting only; no effect on numerics

struct NormalizationStats {
    std::vector<double> min;
    std::vector<double> max;
    int features() const { return static_cast<int>(min.size()); }
};

// 8-bit positive inputs, one per feature.
struct QuantizedSample {
    std::vector<std::uint8_t> values;
    int features() const { return static_cast<int>(values.size()); }
};

// Thermometer-coded PWM drive: feature f is active for the first values[f]
// of the 255 cycles. Stored as the per-feature cycle counts; the full
// 255 × F matrix is available through active().
struct PwmTrace {
    std::vector<std::uint8_t> values;
    double pulse_voltage = 0.8;

    int features() const { return static_cast<int>(values.size()); }
    bool active(int cycle, int feature) const { return cycle < values[feature]; }

    // Consecutive cycles sharing a column-activation pattern, grouped.
    // Thermometer coding gives at most one pattern per distinct nonzero
    // value, so SneakPath accumulation costs O(F) solves instead of 255.
    struct Segment {
        int cycles = 0;
        std::vector<double> column_voltages;
    };
    std::vector<Segment> segments() const;
};

NormalizationStats fit_normalization(const Matrix& x_train);

// values[f] = round(clamp((x-min)/(max-min), 0, 1) × 255), rounding half away
// from zero. Constant features (max == min) encode to 0.
QuantizedSample quantize(std::span<const double> x, const NormalizationStats& stats);

// Per-row convenience: quantizes every sample, returned as doubles 0..255.
Matrix quantize_all(const Matrix& x, const NormalizationStats& stats);

PwmTrace pwm_expand(const QuantizedSample& q, double pulse_voltage = 0.8);

// Integrates read_row over the 255 PWM cycles (via pattern segments).
// In Ideal mode with no clipping this equals
// pulse_voltage × r_f × Σ_f values[f] · G[row][f].
// SneakPath mode factors the network once per call; callers reading the same
// row many times can pass a prebuilt solver to reuse the factorization.
double pwm_accumulate(const CrossbarState& xbar, int row, const PwmTrace& trace,
                      ReadMode mode, ReadDiag* diag = nullptr, Rng* sense_rng = nullptr,
                      const RowReadSolver* solver = nullptr);

}  // namespace xbarvmm
