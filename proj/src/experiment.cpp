#include "xbarvmm/experiment.hpp"

#include <cmath>
#include <stdexcept>

#include "xbarvmm/errors.hpp"

namespace xbarvmm {

void ExperimentConfig::validate() const {
    if (trials < 1) throw ParamError("trials must be >= 1");
    if (!(split_fraction > 0.0 && split_fraction < 1.0))
        throw ParamError("split_fraction must be in (0, 1)");
    crossbar.validate();
    if (verify.max_attempts < 1) throw ParamError("verify_max_attempts must be >= 1");
    if (!(verify.window_factor > 1.0)) throw ParamError("verify_window_factor must be > 1");
}

namespace {

struct Stats {
    double mean = 0.0;
    double stddev = 0.0;
};

template <typename Get>
Stats stats_over(const std::vector<TrialResult>& trials, Get get) {
    Stats s;
    if (trials.empty()) return s;
    for (const TrialResult& t : trials) s.mean += get(t);
    s.mean /= static_cast<double>(trials.size());
    double var = 0.0;
    for (const TrialResult& t : trials) {
        const double d = get(t) - s.mean;
        var += d * d;
    }
    s.stddev = std::sqrt(var / static_cast<double>(trials.size()));
    return s;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, const Dataset& data) {
    config.validate();

    ExperimentResult result;
    result.config = config;
    result.trials.reserve(config.trials);

    for (int trial = 0; trial < config.trials; ++trial) {
        try {
            const std::uint64_t trial_seed =
                Rng::substream(config.seed, "trial", static_cast<std::uint64_t>(trial))
                    .next_u64();
            TrialResult tr;
            tr.trial_seed = trial_seed;

            Rng split_rng = Rng::substream(trial_seed, "split");
            const Split split = split_dataset(data, config.split_fraction, split_rng);

            const TrainedModel model =
                train(split.train.features, split.train.labels, 2, config.trainer, trial_seed);
            tr.software_train_accuracy = evaluate(model, split.train.features, split.train.labels);
            tr.software_test_accuracy = evaluate(model, split.test.features, split.test.labels);

            const MappingPlan plan =
                plan_mapping(model.binary_weights, config.crossbar.rows, config.crossbar.cols);
            Rng device_rng = Rng::substream(trial_seed, "device-sampling");
            const ProgrammedArray programmed = program_plan(plan, config.crossbar, config.verify,
                                                            config.failure_policy, device_rng);
            tr.programming_attempts = programmed.report.total_attempts;
            tr.programming_failures = programmed.report.failures;

            Rng sense_rng = Rng::substream(trial_seed, "sense-noise");
            Rng* sense = config.crossbar.sense_noise_sigma > 0.0 ? &sense_rng : nullptr;
            const Matrix train_q = model_inputs(model, split.train.features);
            const Matrix test_q = model_inputs(model, split.test.features);

            const HardwareEval hw_train = hardware_forward_dataset(plan, programmed.phase_states,
                                                                   train_q, config.mode(), sense);
            const HardwareEval hw_test = hardware_forward_dataset(plan, programmed.phase_states,
                                                                  test_q, config.mode(), sense);
            int correct = 0;
            for (std::size_t i = 0; i < hw_train.predictions.size(); ++i)
                if (hw_train.predictions[i] == split.train.labels[i]) ++correct;
            tr.hardware_train_accuracy = static_cast<double>(correct) / split.train.samples();
            correct = 0;
            for (std::size_t i = 0; i < hw_test.predictions.size(); ++i)
                if (hw_test.predictions[i] == split.test.labels[i]) ++correct;
            tr.hardware_test_accuracy = static_cast<double>(correct) / split.test.samples();

            tr.read_diag = hw_train.diag;
            tr.read_diag.merge(hw_test.diag);
            result.trials.push_back(tr);
        } catch (const std::exception& e) {
            throw std::runtime_error("trial " + std::to_string(trial) + ": " + e.what());
        }
    }

    const Stats sw_tr = stats_over(result.trials, [](auto& t) { return t.software_train_accuracy; });
    const Stats sw_te = stats_over(result.trials, [](auto& t) { return t.software_test_accuracy; });
    const Stats hw_tr = stats_over(result.trials, [](auto& t) { return t.hardware_train_accuracy; });
    const Stats hw_te = stats_over(result.trials, [](auto& t) { return t.hardware_test_accuracy; });
    result.aggregate = {sw_tr.mean, sw_tr.stddev, sw_te.mean, sw_te.stddev,
                        hw_tr.mean, hw_tr.stddev, hw_te.mean, hw_te.stddev};
    return result;
}

SweepKnob sweep_knob_from_name(const std::string& name) {
    if (name == "sigma") return SweepKnob::Sigma;
    if (name == "median_ratio") return SweepKnob::MedianRatio;
    if (name == "line_resistance") return SweepKnob::LineResistance;
    if (name == "floating_policy") return SweepKnob::FloatingPolicy;
    throw ParamError("unknown sweep knob: " + name);
}

std::string sweep_knob_name(SweepKnob knob) {
    switch (knob) {
        case SweepKnob::Sigma: return "sigma";
        case SweepKnob::MedianRatio: return "median_ratio";
        case SweepKnob::LineResistance: return "line_resistance";
        case SweepKnob::FloatingPolicy: return "floating_policy";
    }
    return "?";
}

ExperimentConfig apply_knob(const ExperimentConfig& config, SweepKnob knob,
                            const std::string& value) {
    ExperimentConfig out = config;
    auto parse_real = [&](const std::string& s) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(s, &pos);
            if (pos != s.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ParamError("sweep value is not a real number: '" + s + "'");
        }
    };
    switch (knob) {
        case SweepKnob::Sigma: {
            const double v = parse_real(value);
            out.crossbar.dist.sigma_lrs = v;
            out.crossbar.dist.sigma_hrs = v;
            break;
        }
        case SweepKnob::MedianRatio: {
            // HRS/LRS ratio with the LRS median fixed
            const double v = parse_real(value);
            out.crossbar.dist.median_hrs_mohm = out.crossbar.dist.median_lrs_mohm * v;
            break;
        }
        case SweepKnob::LineResistance:
            out.crossbar.line_resistance_ohm = parse_real(value);
            break;
        case SweepKnob::FloatingPolicy:
            if (value == "floating")
                out.floating_rows = FloatingRowPolicy::Floating;
            else if (value == "grounded")
                out.floating_rows = FloatingRowPolicy::Grounded;
            else
                throw ParamError("floating_policy value must be 'floating' or 'grounded'");
            break;
    }
    return out;
}

SweepResult sweep(const ExperimentConfig& config, SweepKnob knob,
                  const std::vector<std::string>& values, const Dataset& data) {
    if (values.empty()) throw ParamError("sweep: no values given");
    SweepResult result;
    result.knob = knob;
    for (const std::string& v : values) {
        const ExperimentConfig point = apply_knob(config, knob, v);
        const ExperimentResult run = run_experiment(point, data);
        result.points.push_back({v, run.aggregate});
    }
    return result;
}

}  // namespace xbarvmm
