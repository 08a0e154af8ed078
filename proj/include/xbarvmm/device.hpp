#pragma once

#include "xbarvmm/rng.hpp"

namespace xbarvmm {

// Logical state of a binary OxRAM device. There is nothing in between:
// analog multi-level states are out of scope.
enum class DeviceState { Hrs, Lrs };

// Lognormal resistance statistics for the two states. Medians are in MΩ,
// sigmas are log-domain standard deviations (dimensionless).
struct ResistanceDistribution {
    double median_lrs_mohm = 2.0;
    double median_hrs_mohm = 50.0;
    double sigma_lrs = 0.15;
    double sigma_hrs = 0.15;
    // maximum tolerated P(LRS draw > HRS draw); states must stay separable
    double separation_threshold = 1e-3;

    double median_mohm(DeviceState s) const {
        return s == DeviceState::Lrs ? median_lrs_mohm : median_hrs_mohm;
    }
    double sigma(DeviceState s) const {
        return s == DeviceState::Lrs ? sigma_lrs : sigma_hrs;
    }

    // P(LRS draw > HRS draw) for independent lognormal draws
    double state_overlap() const;

    void validate() const;  // throws ParamError
};

struct DeviceCell {
    DeviceState state = DeviceState::Hrs;
    double resistance_mohm = 0.0;
    int program_count = 0;

    // The only place resistances in MΩ become conductances in siemens:
    // G [S] = 1e-6 / R [MΩ]. HRS is large but finite, so this is always defined.
    double conductance_siemens() const { return 1e-6 / resistance_mohm; }
};

// One lognormal draw around the requested state's median. sigma = 0 yields
// exactly the median. Deterministic for a given rng stream position.
double sample_resistance_mohm(DeviceState state, const ResistanceDistribution& dist, Rng& rng);

// Applies one programming pulse: switches to the target state and re-samples
// the resistance. program_count increments even when target equals the current
// state — every pulse re-samples (cycle-to-cycle variability).
DeviceCell transition(DeviceCell cell, DeviceState target,
                      const ResistanceDistribution& dist, Rng& rng);

}  // namespace xbarvmm
