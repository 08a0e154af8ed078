#pragma once

#include <vector>

#include "xbarvmm/crossbar.hpp"
#include "xbarvmm/encoder.hpp"
#include "xbarvmm/matrix.hpp"

namespace xbarvmm {

enum class Polarity { Plus, Minus };

// One physical device assignment. A logical ±1 weight always owns two slots:
// the Plus and Minus rows of its pair, programmed to complementary states
// (+1 → LRS/HRS, −1 → HRS/LRS).
struct WeightSlot {
    int class_k = 0;
    Polarity polarity = Polarity::Plus;
    int partition = 0;
    int feature = 0;  // index into the logical weight vector
    int phase = 0;
    int row = 0;
    int col = 0;
    int logical_weight = 0;  // ±1
    DeviceState target = DeviceState::Hrs;
};

struct MappingPlan {
    int classes = 0;
    int features = 0;
    int rows = 0;
    int cols = 0;
    int n_partitions = 0;
    int phases = 0;
    std::vector<int> partition_widths;  // left-packed; last may be narrower
    std::vector<WeightSlot> slots;

    int partition_offset(int p) const { return p * cols; }
    // first row of the (class, partition) pair and its phase
    struct PairLocation {
        int phase = 0;
        int row = 0;
    };
    PairLocation pair_location(int class_k, int partition) const;
};

// Complementary-pair placement: each (class, partition) consumes one pair of
// consecutive rows; pairs pack class-major / partition-minor into phases of
// floor(rows/2) pairs. One phase = one full reprogramming of the physical
// crossbar.
MappingPlan plan_mapping(const Matrix& binary_weights, int rows, int cols);

enum class ProgramFailurePolicy { AcceptAndLog, Abort };

struct CellProgram {
    int phase = 0;
    int row = 0;
    int col = 0;
    DeviceState target = DeviceState::Hrs;
    int attempts = 0;
    bool in_window = false;
    double final_resistance_mohm = 0.0;
};

struct ProgrammingReport {
    std::vector<CellProgram> cells;
    long total_attempts = 0;
    int failures = 0;
};

struct ProgrammedArray {
    std::vector<CrossbarState> phase_states;
    ProgrammingReport report;
};

// Per phase: initialize the whole crossbar to HRS, then program-and-verify
// only the slots whose target is LRS (HRS targets keep the initialized state).
// Unused cells stay HRS and still participate in sneak-path solves.
ProgrammedArray program_plan(const MappingPlan& plan, const CrossbarConfig& config,
                             const VerifyParams& verify, ProgramFailurePolicy policy,
                             Rng& rng);

struct ClassScore {
    Matrix partials_plus;   // K × n_partitions, V^{k,+}_{o,p}
    Matrix partials_minus;  // K × n_partitions, V^{k,−}_{o,p}
    std::vector<double> plus_sums;   // Σ_p partials, per class
    std::vector<double> minus_sums;
    std::vector<double> scores;      // plus − minus
    int decision = 0;
};

// Runs the read schedule for one sample: per phase, per resident row, slice
// the input to the partition's columns, PWM-accumulate, then assemble
// polarity sums, class scores and the argmax decision.
ClassScore schedule_inference(const MappingPlan& plan,
                              const std::vector<CrossbarState>& phase_states,
                              const QuantizedSample& q, ReadMode mode,
                              ReadDiag* diag = nullptr, Rng* sense_rng = nullptr);

struct HardwareEval {
    std::vector<int> predictions;
    std::vector<ClassScore> scores;
    ReadDiag diag;
};

// Batch wrapper: crossbars are programmed once and reused across samples.
// x_quantized holds 0..255 values as doubles, one sample per row.
HardwareEval hardware_forward_dataset(const MappingPlan& plan,
                                      const std::vector<CrossbarState>& phase_states,
                                      const Matrix& x_quantized, ReadMode mode,
                                      Rng* sense_rng = nullptr);

}  // namespace xbarvmm
