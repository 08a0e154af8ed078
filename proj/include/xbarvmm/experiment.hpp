#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "xbarvmm/dataset.hpp"
#include "xbarvmm/mapper.hpp"
#include "xbarvmm/trainer.hpp"

namespace xbarvmm {

struct ExperimentConfig {
    std::uint64_t seed = 1;
    int trials = 10;
    double split_fraction = 0.8;
    TrainerConfig trainer;
    CrossbarConfig crossbar;
    ReadMode::Kind read_mode = ReadMode::Kind::SneakPath;
    FloatingRowPolicy floating_rows = FloatingRowPolicy::Floating;
    VerifyParams verify;
    ProgramFailurePolicy failure_policy = ProgramFailurePolicy::AcceptAndLog;
    std::string dataset_path = "data/wdbc.csv";

    ExperimentConfig() {
        // The experiment of record models the testbench read path: the
        // crossbar is selector-free with the non-sensed rows left floating,
        // and the lumped driver/switch/wire impedance is what lets sneak
        // paths diminish the sensed current. 250 kΩ reproduces the reported
        // accuracy gap; the engine-level default stays 0 (ideal drivers).
        crossbar.line_resistance_ohm = 250e3;
    }

    ReadMode mode() const { return {read_mode, floating_rows}; }
    void validate() const;
};

struct TrialResult {
    std::uint64_t trial_seed = 0;
    double software_train_accuracy = 0.0;
    double software_test_accuracy = 0.0;
    double hardware_train_accuracy = 0.0;
    double hardware_test_accuracy = 0.0;
    long programming_attempts = 0;
    int programming_failures = 0;
    ReadDiag read_diag;
};

struct Aggregate {
    double software_train_mean = 0.0, software_train_std = 0.0;
    double software_test_mean = 0.0, software_test_std = 0.0;
    double hardware_train_mean = 0.0, hardware_train_std = 0.0;
    double hardware_test_mean = 0.0, hardware_test_std = 0.0;
};

struct ExperimentResult {
    ExperimentConfig config;
    std::vector<TrialResult> trials;
    Aggregate aggregate;
};

// Per trial: split → train → software evaluate → plan → program → hardware
// forward in the configured mode → hardware evaluate. Fully determined by
// (config, dataset).
ExperimentResult run_experiment(const ExperimentConfig& config, const Dataset& data);

enum class SweepKnob { Sigma, MedianRatio, LineResistance, FloatingPolicy };

SweepKnob sweep_knob_from_name(const std::string& name);
std::string sweep_knob_name(SweepKnob knob);

struct SweepPoint {
    std::string value;
    Aggregate aggregate;
};

struct SweepResult {
    SweepKnob knob = SweepKnob::Sigma;
    std::vector<SweepPoint> points;
};

// Runs run_experiment once per knob value. Values are parsed per knob:
// sigma / line_resistance / median_ratio take reals, floating_policy takes
// "floating" or "grounded".
SweepResult sweep(const ExperimentConfig& config, SweepKnob knob,
                  const std::vector<std::string>& values, const Dataset& data);

// Applies one knob value to a copy of the config (also used by the CLI).
ExperimentConfig apply_knob(const ExperimentConfig& config, SweepKnob knob,
                            const std::string& value);

}  // namespace xbarvmm
