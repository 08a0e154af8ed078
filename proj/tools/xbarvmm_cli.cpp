#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "xbarvmm/artifacts.hpp"
#include "xbarvmm/dataset.hpp"
#include "xbarvmm/errors.hpp"
#include "xbarvmm/experiment.hpp"

namespace fs = std::filesystem;
using namespace xbarvmm;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string data_path;
    std::string out_dir = ".";
    std::string mode;
    std::uint64_t seed = 0;
    bool seed_set = false;
};

ExperimentConfig resolve_config(const CommonOpts& opts) {
    ExperimentConfig config;
    if (!opts.config_path.empty()) config = load_config(opts.config_path);
    if (opts.seed_set) config.seed = opts.seed;
    if (!opts.data_path.empty()) config.dataset_path = opts.data_path;
    if (!opts.mode.empty()) {
        if (opts.mode == "ideal")
            config.read_mode = ReadMode::Kind::Ideal;
        else if (opts.mode == "sneak")
            config.read_mode = ReadMode::Kind::SneakPath;
        else
            throw ParamError("--mode must be 'ideal' or 'sneak'");
    }
    return config;
}

std::string out_path(const CommonOpts& opts, const std::string& name) {
    fs::create_directories(opts.out_dir);
    return (fs::path(opts.out_dir) / name).string();
}

void print_aggregate(const Aggregate& a) {
    std::printf("%-22s %8s %8s\n", "", "train", "test");
    std::printf("%-22s %7.2f%% %7.2f%%\n", "software accuracy", 100.0 * a.software_train_mean,
                100.0 * a.software_test_mean);
    std::printf("%-22s %7.2f%% %7.2f%%\n", "hardware accuracy", 100.0 * a.hardware_train_mean,
                100.0 * a.hardware_test_mean);
}

int run_train(const CommonOpts& opts) {
    ExperimentConfig config = resolve_config(opts);
    const Dataset data = load_wdbc(config.dataset_path);
    Rng split_rng = Rng::substream(config.seed, "split");
    const Split split = split_dataset(data, config.split_fraction, split_rng);
    TrainedModel model =
        train(split.train.features, split.train.labels, 2, config.trainer, config.seed);
    const double train_acc = evaluate(model, split.train.features, split.train.labels);
    const double test_acc = evaluate(model, split.test.features, split.test.labels);
    model.metrics["train_accuracy"] = train_acc;
    model.metrics["test_accuracy"] = test_acc;
    std::printf("train accuracy %.4f  test accuracy %.4f\n", train_acc, test_acc);
    const std::string path = out_path(opts, "model.json");
    save_artifact(to_json(model), path);
    std::printf("model written to %s\n", path.c_str());
    return 0;
}

int run_map(const CommonOpts& opts, const std::string& model_path) {
    ExperimentConfig config = resolve_config(opts);
    const TrainedModel model = model_from_json(load_artifact(model_path, "trained_model"));
    const MappingPlan plan =
        plan_mapping(model.binary_weights, config.crossbar.rows, config.crossbar.cols);
    std::printf("plan: %d classes x %d features -> %d partitions, %d phases, %zu slots\n",
                plan.classes, plan.features, plan.n_partitions, plan.phases, plan.slots.size());
    const std::string path = out_path(opts, "plan.json");
    save_artifact(to_json(plan), path);
    std::printf("plan written to %s\n", path.c_str());
    return 0;
}

int run_program(const CommonOpts& opts, const std::string& plan_path) {
    ExperimentConfig config = resolve_config(opts);
    const MappingPlan plan = plan_from_json(load_artifact(plan_path, "mapping_plan"));
    Rng device_rng = Rng::substream(config.seed, "device-sampling");
    const ProgrammedArray programmed =
        program_plan(plan, config.crossbar, config.verify, config.failure_policy, device_rng);
    for (int ph = 0; ph < plan.phases; ++ph) {
        const std::string path = out_path(opts, "crossbar_phase" + std::to_string(ph) + ".json");
        save_artifact(to_json(programmed.phase_states[ph]), path);
        std::printf("phase %d crossbar written to %s\n", ph, path.c_str());
    }
    const std::string report_path = out_path(opts, "programming_report.json");
    save_artifact(to_json(programmed.report), report_path);
    std::printf("programmed %zu cells, %ld attempts, %d verify failures\n",
                programmed.report.cells.size(), programmed.report.total_attempts,
                programmed.report.failures);
    return 0;
}

int run_infer(const CommonOpts& opts, const std::string& model_path,
              const std::string& plan_path, const std::string& crossbar_dir) {
    ExperimentConfig config = resolve_config(opts);
    const TrainedModel model = model_from_json(load_artifact(model_path, "trained_model"));
    const MappingPlan plan = plan_from_json(load_artifact(plan_path, "mapping_plan"));
    std::vector<CrossbarState> phases;
    for (int ph = 0; ph < plan.phases; ++ph) {
        const fs::path path = fs::path(crossbar_dir) / ("crossbar_phase" + std::to_string(ph) + ".json");
        phases.push_back(crossbar_from_json(load_artifact(path.string(), "crossbar")));
    }
    const Dataset data = load_wdbc(config.dataset_path);
    const Matrix xq = model_inputs(model, data.features);
    Rng sense_rng = Rng::substream(config.seed, "sense-noise");
    Rng* sense = config.crossbar.sense_noise_sigma > 0.0 ? &sense_rng : nullptr;
    const HardwareEval eval = hardware_forward_dataset(plan, phases, xq, config.mode(), sense);
    int correct = 0;
    for (std::size_t i = 0; i < eval.predictions.size(); ++i)
        if (eval.predictions[i] == data.labels[i]) ++correct;
    std::printf("hardware accuracy %.4f over %zu samples (%ld solves, %ld clipped cycles)\n",
                static_cast<double>(correct) / data.samples(), eval.predictions.size(),
                eval.diag.solves, eval.diag.clipped_cycles);
    std::printf("per-sample integration: %d PWM cycles x %.0f ms x %d phase(s) = %.2f s\n",
                kPwmCycles, kPwmCyclePeriodMs, plan.phases,
                kPwmCycles * kPwmCyclePeriodMs * plan.phases / 1000.0);
    ojson out = ojson::object();
    out["schema_version"] = kSchemaVersion;
    out["kind"] = "predictions";
    out["predictions"] = eval.predictions;
    const std::string path = out_path(opts, "predictions.json");
    save_artifact(out, path);
    std::printf("predictions written to %s\n", path.c_str());
    return 0;
}

int run_experiment_cmd(const CommonOpts& opts, int trials_override) {
    ExperimentConfig config = resolve_config(opts);
    if (trials_override > 0) config.trials = trials_override;
    const Dataset data = load_wdbc(config.dataset_path);
    const ExperimentResult result = run_experiment(config, data);
    print_aggregate(result.aggregate);
    const std::string path = out_path(opts, "result.json");
    save_artifact(to_json(result), path);
    std::printf("result written to %s\n", path.c_str());
    return 0;
}

int run_sweep(const CommonOpts& opts, const std::string& knob_name,
              const std::vector<std::string>& values, int trials_override) {
    ExperimentConfig config = resolve_config(opts);
    if (trials_override > 0) config.trials = trials_override;
    const Dataset data = load_wdbc(config.dataset_path);
    const SweepKnob knob = sweep_knob_from_name(knob_name);
    const SweepResult result = sweep(config, knob, values, data);
    std::printf("%-16s %-14s %-14s\n", knob_name.c_str(), "sw_test_mean", "hw_test_mean");
    for (const SweepPoint& p : result.points)
        std::printf("%-16s %-14.4f %-14.4f\n", p.value.c_str(),
                    p.aggregate.software_test_mean, p.aggregate.hardware_test_mean);
    const std::string path = out_path(opts, "sweep.json");
    save_artifact(to_json(result), path);
    std::printf("sweep written to %s\n", path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"binary RRAM crossbar VMM simulator and binarized-ADALINE toolkit"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string model_path, plan_path, crossbar_dir, knob;
    std::string values_csv;
    int trials_override = 0;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "experiment config file (JSON)");
        cmd->add_option("--data", opts.data_path, "WDBC CSV path (overrides config)");
        cmd->add_option("--out", opts.out_dir, "output directory");
        cmd->add_option("--mode", opts.mode, "read mode: ideal | sneak")
            ->check(CLI::IsMember({"ideal", "sneak"}));
        cmd->add_option_function<std::uint64_t>(
            "--seed", [&](std::uint64_t s) { opts.seed = s; opts.seed_set = true; },
            "root seed (overrides config)");
    };

    CLI::App* cmd_train = app.add_subcommand("train", "train the binarized-ADALINE on one split");
    add_common(cmd_train);

    CLI::App* cmd_map = app.add_subcommand("map", "map binary weights onto crossbar row pairs");
    add_common(cmd_map);
    cmd_map->add_option("--model", model_path, "trained model artifact")->required();

    CLI::App* cmd_program = app.add_subcommand("program", "program a mapping plan onto crossbars");
    add_common(cmd_program);
    cmd_program->add_option("--plan", plan_path, "mapping plan artifact")->required();

    CLI::App* cmd_infer = app.add_subcommand("infer", "run hardware inference on a dataset");
    add_common(cmd_infer);
    cmd_infer->add_option("--model", model_path, "trained model artifact")->required();
    cmd_infer->add_option("--plan", plan_path, "mapping plan artifact")->required();
    cmd_infer->add_option("--crossbars", crossbar_dir, "directory with crossbar_phase*.json")
        ->required();

    CLI::App* cmd_exp = app.add_subcommand("experiment", "full train/map/program/infer trials");
    add_common(cmd_exp);
    cmd_exp->add_option("--trials", trials_override, "trial count (overrides config)");

    CLI::App* cmd_sweep = app.add_subcommand("sweep", "run the experiment across a knob");
    add_common(cmd_sweep);
    cmd_sweep->add_option("--knob", knob, "sigma | median_ratio | line_resistance | floating_policy")
        ->required();
    cmd_sweep->add_option("--values", values_csv, "comma-separated knob values")->required();
    cmd_sweep->add_option("--trials", trials_override, "trial count (overrides config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(cmd_train)) return run_train(opts);
        if (app.got_subcommand(cmd_map)) return run_map(opts, model_path);
        if (app.got_subcommand(cmd_program)) return run_program(opts, plan_path);
        if (app.got_subcommand(cmd_infer)) return run_infer(opts, model_path, plan_path, crossbar_dir);
        if (app.got_subcommand(cmd_exp)) return run_experiment_cmd(opts, trials_override);
        if (app.got_subcommand(cmd_sweep)) {
            std::vector<std::string> values;
            std::string v;
            std::stringstream ss(values_csv);
            while (std::getline(ss, v, ',')) values.push_back(v);
            return run_sweep(opts, knob, values, trials_override);
        }
    } catch (const ParamError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "experiment failed: " << e.what() << "\n";
        return 3;
    }
    return 1;
}
