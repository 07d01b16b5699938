#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "driftwatch/event.hpp"
#include "driftwatch/monitor.hpp"

namespace driftwatch {

/// Parametric score profile on [0, 1]: a beta-family bump with mean
/// `location` and `concentration` controlling how tightly scores cluster
/// around it (alpha = location * concentration, beta = the complement).
struct ModelProfile {
    double location = 0.5;       // in (0, 1)
    double concentration = 8.0;  // > 0

    void validate() const;
};

/// One scenario phase: a run of windows with fixed cohort size and
/// (optionally) per-model profile overrides relative to the base profiles.
struct PhaseSpec {
    int window_count = 1;
    std::uint32_t studies_per_window = 1;
    std::map<std::string, ModelProfile> overrides;
};

/// Seeded multi-model stream scenario. Models are ordered: the first entry
/// is the main model of the derived replay config.
struct ScenarioSpec {
    std::uint64_t seed = 42;
    Timestamp origin{};
    Duration window_duration{std::chrono::days{30}};
    std::string class_label = "consolidation";
    std::vector<std::pair<std::string, ModelProfile>> models;
    std::vector<PhaseSpec> phases;

    void validate() const;
};

/// Generates the full event stream: timestamps advance monotonically through
/// each phase's windows and every study gets one event per model. Identical
/// spec (including seed) yields an identical stream.
std::vector<PredictionEvent> generate(const ScenarioSpec& spec);

/// Six checkpoints with cohort sizes 969, 489, 646, 543, 352, 994: five
/// stable windows, then a final window where every model's profile shifts
/// (each differently), so all temporal readings cross 0.10 and at least one
/// predictive pair crosses 0.20.
ScenarioSpec paper_shaped_scenario(std::uint64_t seed = 42);

/// Replay config matching a scenario: first model is main, same windowing,
/// defaults elsewhere.
MonitorConfig scenario_config(const ScenarioSpec& spec);

ScenarioSpec scenario_from_json(const nlohmann::json& doc);
nlohmann::json scenario_to_json(const ScenarioSpec& spec);

}  // namespace driftwatch
