#pragma once

#include <string>

#include <json.hpp>

#include "xbarvmm/crossbar.hpp"
#include "xbarvmm/experiment.hpp"
#include "xbarvmm/mapper.hpp"
#include "xbarvmm/trainer.hpp"

namespace xbarvmm {

// All artifacts are JSON with a schema_version and a kind tag. Serialization
// uses insertion-ordered objects and shortest-round-trip doubles, so the same
// in-memory value always produces byte-identical text and resistances survive
// a round trip exactly.
using ojson = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

ojson to_json(const TrainedModel& model);
ojson to_json(const CrossbarState& xbar);
ojson to_json(const MappingPlan& plan);
ojson to_json(const ProgrammingReport& report);
ojson to_json(const ExperimentConfig& config);
ojson to_json(const ExperimentResult& result);
ojson to_json(const SweepResult& result);

TrainedModel model_from_json(const ojson& j);
CrossbarState crossbar_from_json(const ojson& j);
MappingPlan plan_from_json(const ojson& j);
ExperimentConfig config_from_json(const ojson& j);
ExperimentResult result_from_json(const ojson& j);

void save_artifact(const ojson& j, const std::string& path);

// Loads and checks schema_version and kind. Missing required fields raise
// DataError naming the field; unknown extra fields are accepted with a
// warning on stderr (forward-compat rule).
ojson load_artifact(const std::string& path, const std::string& expected_kind);

// Experiment config files are flat JSON mirroring ExperimentConfig field
// names; absent fields keep their defaults.
ExperimentConfig load_config(const std::string& path);

}  // namespace xbarvmm
