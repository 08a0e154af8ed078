#include "xbarvmm/artifacts.hpp"

#include <fstream>
#include <iostream>
#include <set>
#include <string>

#include "xbarvmm/errors.hpp"

namespace xbarvmm {

namespace {

const ojson& require(const ojson& j, const char* field, const char* context) {
    auto it = j.find(field);
    if (it == j.end())
        throw DataError(std::string("missing field '") + field + "' in " + context);
    return *it;
}

void warn_unknown(const ojson& j, const std::set<std::string>& known, const char* context) {
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!known.count(it.key()))
            std::cerr << "warning: ignoring unknown field '" << it.key() << "' in " << context
                      << "\n";
}

ojson matrix_to_json(const Matrix& m) {
    ojson rows = ojson::array();
    for (int r = 0; r < m.rows; ++r) {
        ojson row = ojson::array();
        for (int c = 0; c < m.cols; ++c) row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const ojson& j, const char* context) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw DataError(std::string("expected a 2-d array in ") + context);
    Matrix m(static_cast<int>(j.size()), static_cast<int>(j[0].size()));
    for (int r = 0; r < m.rows; ++r) {
        if (static_cast<int>(j[r].size()) != m.cols)
            throw DataError(std::string("ragged matrix rows in ") + context);
        for (int c = 0; c < m.cols; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
}

const char* state_name(DeviceState s) { return s == DeviceState::Lrs ? "LRS" : "HRS"; }

DeviceState state_from_name(const std::string& s, const char* context) {
    if (s == "LRS") return DeviceState::Lrs;
    if (s == "HRS") return DeviceState::Hrs;
    throw DataError("unknown device state '" + s + "' in " + context);
}

ojson dist_to_json(const ResistanceDistribution& d) {
    ojson j;
    j["median_lrs_mohm"] = d.median_lrs_mohm;
    j["median_hrs_mohm"] = d.median_hrs_mohm;
    j["sigma_lrs"] = d.sigma_lrs;
    j["sigma_hrs"] = d.sigma_hrs;
    j["separation_threshold"] = d.separation_threshold;
    return j;
}

ResistanceDistribution dist_from_json(const ojson& j) {
    ResistanceDistribution d;
    d.median_lrs_mohm = require(j, "median_lrs_mohm", "dist").get<double>();
    d.median_hrs_mohm = require(j, "median_hrs_mohm", "dist").get<double>();
    d.sigma_lrs = require(j, "sigma_lrs", "dist").get<double>();
    d.sigma_hrs = require(j, "sigma_hrs", "dist").get<double>();
    d.separation_threshold = require(j, "separation_threshold", "dist").get<double>();
    return d;
}

ojson header(const char* kind) {
    ojson j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = kind;
    return j;
}

}  // namespace

ojson to_json(const TrainedModel& model) {
    ojson j = header("trained_model");
    j["classes"] = model.classes;
    j["features"] = model.features_in();
    j["seed"] = model.seed;
    ojson hyper;
    hyper["epochs"] = model.hyper.epochs;
    hyper["batch"] = model.hyper.batch;
    hyper["learning_rate"] = model.hyper.learning_rate;
    hyper["beta1"] = model.hyper.beta1;
    hyper["beta2"] = model.hyper.beta2;
    hyper["epsilon"] = model.hyper.epsilon;
    hyper["init_range"] = model.hyper.init_range;
    hyper["bias"] = model.hyper.bias;
    j["hyper"] = std::move(hyper);
    ojson stats;
    stats["min"] = model.stats.min;
    stats["max"] = model.stats.max;
    j["stats"] = std::move(stats);
    j["latent_weights"] = matrix_to_json(model.latent_weights);
    j["binary_weights"] = matrix_to_json(model.binary_weights);
    j["metrics"] = model.metrics;
    return j;
}

TrainedModel model_from_json(const ojson& j) {
    warn_unknown(j,
                 {"schema_version", "kind", "classes", "features", "seed", "hyper", "stats",
                  "latent_weights", "binary_weights", "metrics"},
                 "trained_model");
    TrainedModel m;
    m.classes = require(j, "classes", "trained_model").get<int>();
    m.seed = require(j, "seed", "trained_model").get<std::uint64_t>();
    const ojson& hyper = require(j, "hyper", "trained_model");
    m.hyper.epochs = require(hyper, "epochs", "trained_model.hyper").get<int>();
    m.hyper.batch = require(hyper, "batch", "trained_model.hyper").get<int>();
    m.hyper.learning_rate = require(hyper, "learning_rate", "trained_model.hyper").get<double>();
    m.hyper.beta1 = require(hyper, "beta1", "trained_model.hyper").get<double>();
    m.hyper.beta2 = require(hyper, "beta2", "trained_model.hyper").get<double>();
    m.hyper.epsilon = require(hyper, "epsilon", "trained_model.hyper").get<double>();
    m.hyper.init_range = require(hyper, "init_range", "trained_model.hyper").get<double>();
    m.hyper.bias = require(hyper, "bias", "trained_model.hyper").get<bool>();
    m.bias = m.hyper.bias;
    const ojson& stats = require(j, "stats", "trained_model");
    m.stats.min = require(stats, "min", "trained_model.stats").get<std::vector<double>>();
    m.stats.max = require(stats, "max", "trained_model.stats").get<std::vector<double>>();
    m.latent_weights = matrix_from_json(require(j, "latent_weights", "trained_model"),
                                        "trained_model.latent_weights");
    m.binary_weights = matrix_from_json(require(j, "binary_weights", "trained_model"),
                                        "trained_model.binary_weights");
    m.metrics = require(j, "metrics", "trained_model").get<std::map<std::string, double>>();
    const int features = require(j, "features", "trained_model").get<int>();
    if (features != m.stats.features())
        throw DataError("trained_model: features field disagrees with stats length");
    return m;
}

ojson to_json(const CrossbarState& xbar) {
    ojson j = header("crossbar");
    j["rows"] = xbar.rows();
    j["cols"] = xbar.cols();
    j["line_resistance_ohm"] = xbar.config.line_resistance_ohm;
    j["read_voltage"] = xbar.config.read_voltage;
    j["r_f_ohm"] = xbar.config.r_f_ohm;
    j["rail_voltage"] = xbar.config.rail_voltage;
    j["sense_noise_sigma"] = xbar.config.sense_noise_sigma;
    j["adc_bits"] = xbar.config.adc_bits;
    j["variability"] =
        xbar.config.variability == VariabilityMode::CycleToCycle ? "cycle" : "device";
    j["dist"] = dist_to_json(xbar.config.dist);
    ojson cells = ojson::array();
    for (int r = 0; r < xbar.rows(); ++r)
        for (int c = 0; c < xbar.cols(); ++c) {
            const DeviceCell& cell = xbar.at(r, c);
            ojson jc;
            jc["row"] = r;
            jc["col"] = c;
            jc["state"] = state_name(cell.state);
            jc["resistance_mohm"] = cell.resistance_mohm;
            jc["program_count"] = cell.program_count;
            cells.push_back(std::move(jc));
        }
    j["cells"] = std::move(cells);
    if (xbar.config.variability == VariabilityMode::DeviceToDevice) {
        j["frozen_lrs_mohm"] = xbar.frozen_lrs_mohm;
        j["frozen_hrs_mohm"] = xbar.frozen_hrs_mohm;
    }
    return j;
}

CrossbarState crossbar_from_json(const ojson& j) {
    warn_unknown(j,
                 {"schema_version", "kind", "rows", "cols", "line_resistance_ohm",
                  "read_voltage", "r_f_ohm", "rail_voltage", "sense_noise_sigma", "adc_bits",
                  "variability", "dist", "cells", "frozen_lrs_mohm", "frozen_hrs_mohm"},
                 "crossbar");
    CrossbarState xbar;
    xbar.config.rows = require(j, "rows", "crossbar").get<int>();
    xbar.config.cols = require(j, "cols", "crossbar").get<int>();
    xbar.config.line_resistance_ohm = require(j, "line_resistance_ohm", "crossbar").get<double>();
    xbar.config.read_voltage = require(j, "read_voltage", "crossbar").get<double>();
    xbar.config.r_f_ohm = require(j, "r_f_ohm", "crossbar").get<double>();
    xbar.config.rail_voltage = require(j, "rail_voltage", "crossbar").get<double>();
    xbar.config.sense_noise_sigma = require(j, "sense_noise_sigma", "crossbar").get<double>();
    xbar.config.adc_bits = require(j, "adc_bits", "crossbar").get<int>();
    const std::string var = require(j, "variability", "crossbar").get<std::string>();
    if (var == "cycle")
        xbar.config.variability = VariabilityMode::CycleToCycle;
    else if (var == "device")
        xbar.config.variability = VariabilityMode::DeviceToDevice;
    else
        throw DataError("crossbar: unknown variability mode '" + var + "'");
    xbar.config.dist = dist_from_json(require(j, "dist", "crossbar"));

    const ojson& cells = require(j, "cells", "crossbar");
    const std::size_t expect = static_cast<std::size_t>(xbar.config.rows) * xbar.config.cols;
    if (cells.size() != expect)
        throw DataError("crossbar: expected " + std::to_string(expect) + " cells, got " +
                        std::to_string(cells.size()));
    xbar.cells.resize(expect);
    for (const ojson& jc : cells) {
        const int r = require(jc, "row", "crossbar.cells").get<int>();
        const int c = require(jc, "col", "crossbar.cells").get<int>();
        if (r < 0 || r >= xbar.config.rows || c < 0 || c >= xbar.config.cols)
            throw DataError("crossbar: cell index out of bounds");
        DeviceCell cell;
        cell.state = state_from_name(require(jc, "state", "crossbar.cells").get<std::string>(),
                                     "crossbar.cells");
        cell.resistance_mohm = require(jc, "resistance_mohm", "crossbar.cells").get<double>();
        cell.program_count = require(jc, "program_count", "crossbar.cells").get<int>();
        xbar.cells[static_cast<std::size_t>(r) * xbar.config.cols + c] = cell;
    }
    if (xbar.config.variability == VariabilityMode::DeviceToDevice) {
        xbar.frozen_lrs_mohm =
            require(j, "frozen_lrs_mohm", "crossbar").get<std::vector<double>>();
        xbar.frozen_hrs_mohm =
            require(j, "frozen_hrs_mohm", "crossbar").get<std::vector<double>>();
        if (xbar.frozen_lrs_mohm.size() != expect || xbar.frozen_hrs_mohm.size() != expect)
            throw DataError("crossbar: frozen resistance arrays have wrong length");
    }
    return xbar;
}

ojson to_json(const MappingPlan& plan) {
    ojson j = header("mapping_plan");
    j["classes"] = plan.classes;
    j["features"] = plan.features;
    j["rows"] = plan.rows;
    j["cols"] = plan.cols;
    j["n_partitions"] = plan.n_partitions;
    j["phases"] = plan.phases;
    j["partition_widths"] = plan.partition_widths;
    ojson slots = ojson::array();
    for (const WeightSlot& s : plan.slots) {
        ojson js;
        js["class"] = s.class_k;
        js["polarity"] = s.polarity == Polarity::Plus ? "plus" : "minus";
        js["partition"] = s.partition;
        js["feature"] = s.feature;
        js["phase"] = s.phase;
        js["row"] = s.row;
        js["col"] = s.col;
        js["weight"] = s.logical_weight;
        js["target"] = state_name(s.target);
        slots.push_back(std::move(js));
    }
    j["slots"] = std::move(slots);
    return j;
}

MappingPlan plan_from_json(const ojson& j) {
    warn_unknown(j,
                 {"schema_version", "kind", "classes", "features", "rows", "cols",
                  "n_partitions", "phases", "partition_widths", "slots"},
                 "mapping_plan");
    MappingPlan plan;
    plan.classes = require(j, "classes", "mapping_plan").get<int>();
    plan.features = require(j, "features", "mapping_plan").get<int>();
    plan.rows = require(j, "rows", "mapping_plan").get<int>();
    plan.cols = require(j, "cols", "mapping_plan").get<int>();
    plan.n_partitions = require(j, "n_partitions", "mapping_plan").get<int>();
    plan.phases = require(j, "phases", "mapping_plan").get<int>();
    plan.partition_widths =
        require(j, "partition_widths", "mapping_plan").get<std::vector<int>>();
    for (const ojson& js : require(j, "slots", "mapping_plan")) {
        WeightSlot s;
        s.class_k = require(js, "class", "mapping_plan.slots").get<int>();
        const std::string pol = require(js, "polarity", "mapping_plan.slots").get<std::string>();
        if (pol == "plus")
            s.polarity = Polarity::Plus;
        else if (pol == "minus")
            s.polarity = Polarity::Minus;
        else
            throw DataError("mapping_plan: unknown polarity '" + pol + "'");
        s.partition = require(js, "partition", "mapping_plan.slots").get<int>();
        s.feature = require(js, "feature", "mapping_plan.slots").get<int>();
        s.phase = require(js, "phase", "mapping_plan.slots").get<int>();
        s.row = require(js, "row", "mapping_plan.slots").get<int>();
        s.col = require(js, "col", "mapping_plan.slots").get<int>();
        s.logical_weight = require(js, "weight", "mapping_plan.slots").get<int>();
        s.target = state_from_name(require(js, "target", "mapping_plan.slots").get<std::string>(),
                                   "mapping_plan.slots");
        plan.slots.push_back(s);
    }
    return plan;
}

ojson to_json(const ProgrammingReport& report) {
    ojson j = header("programming_report");
    j["total_attempts"] = report.total_attempts;
    j["failures"] = report.failures;
    ojson cells = ojson::array();
    for (const CellProgram& c : report.cells) {
        ojson jc;
        jc["phase"] = c.phase;
        jc["row"] = c.row;
        jc["col"] = c.col;
        jc["target"] = state_name(c.target);
        jc["attempts"] = c.attempts;
        jc["in_window"] = c.in_window;
        jc["final_resistance_mohm"] = c.final_resistance_mohm;
        cells.push_back(std::move(jc));
    }
    j["cells"] = std::move(cells);
    return j;
}

ojson to_json(const ExperimentConfig& config) {
    ojson j;
    j["seed"] = config.seed;
    j["trials"] = config.trials;
    j["split_fraction"] = config.split_fraction;
    j["epochs"] = config.trainer.epochs;
    j["batch"] = config.trainer.batch;
    j["learning_rate"] = config.trainer.learning_rate;
    j["beta1"] = config.trainer.beta1;
    j["beta2"] = config.trainer.beta2;
    j["epsilon"] = config.trainer.epsilon;
    j["init_range"] = config.trainer.init_range;
    j["bias"] = config.trainer.bias;
    j["rows"] = config.crossbar.rows;
    j["cols"] = config.crossbar.cols;
    j["median_lrs_mohm"] = config.crossbar.dist.median_lrs_mohm;
    j["median_hrs_mohm"] = config.crossbar.dist.median_hrs_mohm;
    j["sigma_lrs"] = config.crossbar.dist.sigma_lrs;
    j["sigma_hrs"] = config.crossbar.dist.sigma_hrs;
    j["separation_threshold"] = config.crossbar.dist.separation_threshold;
    j["variability"] =
        config.crossbar.variability == VariabilityMode::CycleToCycle ? "cycle" : "device";
    j["line_resistance_ohm"] = config.crossbar.line_resistance_ohm;
    j["read_voltage"] = config.crossbar.read_voltage;
    j["r_f_ohm"] = config.crossbar.r_f_ohm;
    j["rail_voltage"] = config.crossbar.rail_voltage;
    j["sense_noise_sigma"] = config.crossbar.sense_noise_sigma;
    j["adc_bits"] = config.crossbar.adc_bits;
    j["read_mode"] = config.read_mode == ReadMode::Kind::Ideal ? "ideal" : "sneak";
    j["floating_rows"] =
        config.floating_rows == FloatingRowPolicy::Floating ? "floating" : "grounded";
    j["verify_window_factor"] = config.verify.window_factor;
    j["verify_max_attempts"] = config.verify.max_attempts;
    j["program_failure_policy"] =
        config.failure_policy == ProgramFailurePolicy::AcceptAndLog ? "accept" : "abort";
    j["dataset"] = config.dataset_path;
    return j;
}

ExperimentConfig config_from_json(const ojson& j) {
    warn_unknown(j,
                 {"seed", "trials", "split_fraction", "epochs", "batch", "learning_rate",
                  "beta1", "beta2", "epsilon", "init_range", "bias", "rows", "cols",
                  "median_lrs_mohm", "median_hrs_mohm", "sigma_lrs", "sigma_hrs",
                  "separation_threshold", "variability", "line_resistance_ohm", "read_voltage",
                  "r_f_ohm", "rail_voltage", "sense_noise_sigma", "adc_bits", "read_mode",
                  "floating_rows",
                  "verify_window_factor", "verify_max_attempts", "program_failure_policy",
                  "dataset"},
                 "experiment config");
    ExperimentConfig c;
    auto get = [&](const char* field, auto& target) {
        auto it = j.find(field);
        if (it != j.end()) target = it->get<std::decay_t<decltype(target)>>();
    };
    get("seed", c.seed);
    get("trials", c.trials);
    get("split_fraction", c.split_fraction);
    get("epochs", c.trainer.epochs);
    get("batch", c.trainer.batch);
    get("learning_rate", c.trainer.learning_rate);
    get("beta1", c.trainer.beta1);
    get("beta2", c.trainer.beta2);
    get("epsilon", c.trainer.epsilon);
    get("init_range", c.trainer.init_range);
    get("bias", c.trainer.bias);
    get("rows", c.crossbar.rows);
    get("cols", c.crossbar.cols);
    get("median_lrs_mohm", c.crossbar.dist.median_lrs_mohm);
    get("median_hrs_mohm", c.crossbar.dist.median_hrs_mohm);
    get("sigma_lrs", c.crossbar.dist.sigma_lrs);
    get("sigma_hrs", c.crossbar.dist.sigma_hrs);
    get("separation_threshold", c.crossbar.dist.separation_threshold);
    get("line_resistance_ohm", c.crossbar.line_resistance_ohm);
    get("read_voltage", c.crossbar.read_voltage);
    get("r_f_ohm", c.crossbar.r_f_ohm);
    get("rail_voltage", c.crossbar.rail_voltage);
    get("sense_noise_sigma", c.crossbar.sense_noise_sigma);
    get("adc_bits", c.crossbar.adc_bits);
    get("verify_window_factor", c.verify.window_factor);
    get("verify_max_attempts", c.verify.max_attempts);
    get("dataset", c.dataset_path);
    if (auto it = j.find("variability"); it != j.end()) {
        const std::string v = it->get<std::string>();
        if (v == "cycle")
            c.crossbar.variability = VariabilityMode::CycleToCycle;
        else if (v == "device")
            c.crossbar.variability = VariabilityMode::DeviceToDevice;
        else
            throw DataError("config: unknown variability '" + v + "'");
    }
    if (auto it = j.find("read_mode"); it != j.end()) {
        const std::string v = it->get<std::string>();
        if (v == "ideal")
            c.read_mode = ReadMode::Kind::Ideal;
        else if (v == "sneak")
            c.read_mode = ReadMode::Kind::SneakPath;
        else
            throw DataError("config: unknown read_mode '" + v + "'");
    }
    if (auto it = j.find("floating_rows"); it != j.end()) {
        const std::string v = it->get<std::string>();
        if (v == "floating")
            c.floating_rows = FloatingRowPolicy::Floating;
        else if (v == "grounded")
            c.floating_rows = FloatingRowPolicy::Grounded;
        else
            throw DataError("config: unknown floating_rows policy '" + v + "'");
    }
    if (auto it = j.find("program_failure_policy"); it != j.end()) {
        const std::string v = it->get<std::string>();
        if (v == "accept")
            c.failure_policy = ProgramFailurePolicy::AcceptAndLog;
        else if (v == "abort")
            c.failure_policy = ProgramFailurePolicy::Abort;
        else
            throw DataError("config: unknown program_failure_policy '" + v + "'");
    }
    return c;
}

namespace {

ojson trial_to_json(const TrialResult& t) {
    ojson j;
    j["seed"] = t.trial_seed;
    j["software_train_accuracy"] = t.software_train_accuracy;
    j["software_test_accuracy"] = t.software_test_accuracy;
    j["hardware_train_accuracy"] = t.hardware_train_accuracy;
    j["hardware_test_accuracy"] = t.hardware_test_accuracy;
    j["programming_attempts"] = t.programming_attempts;
    j["programming_failures"] = t.programming_failures;
    j["solves"] = t.read_diag.solves;
    j["clipped_cycles"] = t.read_diag.clipped_cycles;
    j["max_kcl_residual"] = t.read_diag.max_kcl_residual;
    return j;
}

TrialResult trial_from_json(const ojson& j) {
    TrialResult t;
    t.trial_seed = require(j, "seed", "result.trials").get<std::uint64_t>();
    t.software_train_accuracy =
        require(j, "software_train_accuracy", "result.trials").get<double>();
    t.software_test_accuracy =
        require(j, "software_test_accuracy", "result.trials").get<double>();
    t.hardware_train_accuracy =
        require(j, "hardware_train_accuracy", "result.trials").get<double>();
    t.hardware_test_accuracy =
        require(j, "hardware_test_accuracy", "result.trials").get<double>();
    t.programming_attempts = require(j, "programming_attempts", "result.trials").get<long>();
    t.programming_failures = require(j, "programming_failures", "result.trials").get<int>();
    t.read_diag.solves = require(j, "solves", "result.trials").get<long>();
    t.read_diag.clipped_cycles = require(j, "clipped_cycles", "result.trials").get<long>();
    t.read_diag.max_kcl_residual = require(j, "max_kcl_residual", "result.trials").get<double>();
    return t;
}

}  // namespace

ojson to_json(const ExperimentResult& result) {
    ojson j = header("experiment_result");
    j["config"] = to_json(result.config);
    ojson trials = ojson::array();
    for (const TrialResult& t : result.trials) trials.push_back(trial_to_json(t));
    j["trials"] = std::move(trials);
    ojson agg;
    agg["software_train_mean"] = result.aggregate.software_train_mean;
    agg["software_train_std"] = result.aggregate.software_train_std;
    agg["software_test_mean"] = result.aggregate.software_test_mean;
    agg["software_test_std"] = result.aggregate.software_test_std;
    agg["hardware_train_mean"] = result.aggregate.hardware_train_mean;
    agg["hardware_train_std"] = result.aggregate.hardware_train_std;
    agg["hardware_test_mean"] = result.aggregate.hardware_test_mean;
    agg["hardware_test_std"] = result.aggregate.hardware_test_std;
    j["aggregate"] = std::move(agg);
    return j;
}

ExperimentResult result_from_json(const ojson& j) {
    warn_unknown(j, {"schema_version", "kind", "config", "trials", "aggregate"},
                 "experiment_result");
    ExperimentResult r;
    r.config = config_from_json(require(j, "config", "experiment_result"));
    for (const ojson& jt : require(j, "trials", "experiment_result"))
        r.trials.push_back(trial_from_json(jt));
    const ojson& agg = require(j, "aggregate", "experiment_result");
    r.aggregate.software_train_mean = require(agg, "software_train_mean", "aggregate").get<double>();
    r.aggregate.software_train_std = require(agg, "software_train_std", "aggregate").get<double>();
    r.aggregate.software_test_mean = require(agg, "software_test_mean", "aggregate").get<double>();
    r.aggregate.software_test_std = require(agg, "software_test_std", "aggregate").get<double>();
    r.aggregate.hardware_train_mean = require(agg, "hardware_train_mean", "aggregate").get<double>();
    r.aggregate.hardware_train_std = require(agg, "hardware_train_std", "aggregate").get<double>();
    r.aggregate.hardware_test_mean = require(agg, "hardware_test_mean", "aggregate").get<double>();
    r.aggregate.hardware_test_std = require(agg, "hardware_test_std", "aggregate").get<double>();
    return r;
}

ojson to_json(const SweepResult& result) {
    ojson j = header("sweep_result");
    j["knob"] = sweep_knob_name(result.knob);
    ojson points = ojson::array();
    for (const SweepPoint& p : result.points) {
        ojson jp;
        jp["value"] = p.value;
        jp["software_train_mean"] = p.aggregate.software_train_mean;
        jp["software_test_mean"] = p.aggregate.software_test_mean;
        jp["hardware_train_mean"] = p.aggregate.hardware_train_mean;
        jp["hardware_test_mean"] = p.aggregate.hardware_test_mean;
        jp["hardware_test_std"] = p.aggregate.hardware_test_std;
        points.push_back(std::move(jp));
    }
    j["points"] = std::move(points);
    return j;
}

void save_artifact(const ojson& j, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open for writing: " + path);
    out << j.dump(2) << "\n";
    if (!out) throw DataError("write failed: " + path);
}

ojson load_artifact(const std::string& path, const std::string& expected_kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open artifact: " + path);
    ojson j;
    try {
        j = ojson::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("malformed JSON in " + path + ": " + e.what());
    }
    const int version = require(j, "schema_version", "artifact").get<int>();
    if (version != kSchemaVersion)
        throw DataError("unsupported schema_version " + std::to_string(version) + " in " + path +
                        " (expected " + std::to_string(kSchemaVersion) + ")");
    const std::string kind = require(j, "kind", "artifact").get<std::string>();
    if (kind != expected_kind)
        throw DataError("artifact kind mismatch in " + path + ": expected '" + expected_kind +
                        "', got '" + kind + "'");
    return j;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open config: " + path);
    ojson j;
    try {
        j = ojson::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("malformed JSON in " + path + ": " + e.what());
    }
    return config_from_json(j);
}

}  // namespace xbarvmm
