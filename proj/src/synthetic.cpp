#include "driftwatch/synthetic.hpp"

#include <cstdio>
#include <random>
#include <set>

#include "driftwatch/errors.hpp"

namespace driftwatch {

void ModelProfile::validate() const {
    if (!(location > 0.0) || !(location < 1.0)) {
        throw ConfigError("profile location must lie strictly inside (0, 1), got " +
                          std::to_string(location));
    }
    if (!(concentration > 0.0)) {
        throw ConfigError("profile concentration must be positive");
    }
}

void ScenarioSpec::validate() const {
    if (models.empty()) throw ConfigError("scenario needs at least one model");
    if (phases.empty()) throw ConfigError("scenario needs at least one phase");
    if (window_duration.count() <= 0) throw ConfigError("scenario window duration must be positive");

    std::set<std::string> ids;
    for (const auto& [id, profile] : models) {
        if (!ids.insert(id).second) throw ConfigError("duplicate model id '" + id + "'");
        profile.validate();
    }
    for (const auto& phase : phases) {
        if (phase.window_count < 1) throw ConfigError("phase window_count must be >= 1");
        if (phase.studies_per_window < 1) throw ConfigError("phase needs at least one study per window");
        for (const auto& [id, profile] : phase.overrides) {
            if (ids.find(id) == ids.end()) {
                throw ConfigError("phase override for unknown model '" + id + "'");
            }
            profile.validate();
        }
    }
}

namespace {

double sample_profile(const ModelProfile& profile, std::mt19937_64& rng) {
    double alpha = profile.location * profile.concentration;
    double beta = (1.0 - profile.location) * profile.concentration;
    std::gamma_distribution<double> ga(alpha, 1.0);
    std::gamma_distribution<double> gb(beta, 1.0);
    double x = ga(rng);
    double y = gb(rng);
    if (x + y == 0.0) return profile.location;  // both underflowed
    return x / (x + y);
}

}  // namespace

std::vector<PredictionEvent> generate(const ScenarioSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);

    std::vector<PredictionEvent> events;
    std::int64_t window_index = 0;
    for (const auto& phase : spec.phases) {
        // Resolve this phase's effective profile per model.
        std::vector<std::pair<std::string, ModelProfile>> profiles = spec.models;
        for (auto& [id, profile] : profiles) {
            auto it = phase.overrides.find(id);
            if (it != phase.overrides.end()) profile = it->second;
        }

        for (int w = 0; w < phase.window_count; ++w, ++window_index) {
            Timestamp window_start = spec.origin + spec.window_duration * window_index;
            Duration stride{spec.window_duration.count() /
                            static_cast<std::int64_t>(phase.studies_per_window)};
            for (std::uint32_t s = 0; s < phase.studies_per_window; ++s) {
                char study[32];
                std::snprintf(study, sizeof study, "w%02lld-s%04u",
                              static_cast<long long>(window_index), s);
                Timestamp at = window_start + stride * s;
                for (const auto& [model, profile] : profiles) {
                    events.push_back(
                        {study, at, model, spec.class_label, sample_profile(profile, rng)});
                }
            }
        }
    }
    return events;
}

ScenarioSpec paper_shaped_scenario(std::uint64_t seed) {
    ScenarioSpec spec;
    spec.seed = seed;
    spec.origin = *parse_iso8601("2019-08-01T00:00:00Z");
    spec.window_duration = Duration{std::chrono::days{30}};
    spec.models = {
        {"AI1", {0.30, 12.0}},
        {"AI2", {0.33, 12.0}},
        {"AI3", {0.40, 9.0}},
    };

    // Five stable checkpoints, then a shifted regime: each model moves by a
    // different amount, so the models also diverge from one another.
    const std::vector<std::uint32_t> sizes{969, 489, 646, 543, 352, 994};
    for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
        spec.phases.push_back({1, sizes[i], {}});
    }
    PhaseSpec shifted;
    shifted.window_count = 1;
    shifted.studies_per_window = sizes.back();
    shifted.overrides = {
        {"AI1", {0.62, 12.0}},
        {"AI2", {0.55, 10.0}},
        {"AI3", {0.22, 14.0}},
    };
    spec.phases.push_back(std::move(shifted));
    return spec;
}

MonitorConfig scenario_config(const ScenarioSpec& spec) {
    spec.validate();
    MonitorConfig cfg;
    cfg.main_model = spec.models.front().first;
    for (std::size_t i = 1; i < spec.models.size(); ++i) {
        cfg.support_models.push_back(spec.models[i].first);
    }
    cfg.window.duration = spec.window_duration;
    cfg.window.origin = spec.origin;
    return cfg;
}

namespace {

ModelProfile profile_from_json(const nlohmann::json& j) {
    ModelProfile p;
    p.location = j.at("location").get<double>();
    p.concentration = j.at("concentration").get<double>();
    return p;
}

nlohmann::json profile_to_json(const ModelProfile& p) {
    return {{"location", p.location}, {"concentration", p.concentration}};
}

}  // namespace

ScenarioSpec scenario_from_json(const nlohmann::json& doc) {
    ScenarioSpec spec;
    try {
        spec.seed = doc.at("seed").get<std::uint64_t>();
        auto origin = parse_iso8601(doc.at("origin").get<std::string>());
        if (!origin) throw ConfigError("scenario: unparsable origin");
        spec.origin = *origin;

        const auto& dur = doc.at("window_duration");
        if (dur.is_number_integer()) {
            spec.window_duration = Duration{dur.get<std::int64_t>()};
        } else {
            auto parsed = parse_duration(dur.get<std::string>());
            if (!parsed) throw ConfigError("scenario: unparsable window_duration");
            spec.window_duration = *parsed;
        }

        if (doc.contains("class_label")) {
            spec.class_label = doc["class_label"].get<std::string>();
        }
        for (const auto& m : doc.at("models")) {
            spec.models.emplace_back(m.at("id").get<std::string>(), profile_from_json(m));
        }
        for (const auto& ph : doc.at("phases")) {
            PhaseSpec phase;
            phase.window_count = ph.value("windows", 1);
            phase.studies_per_window = ph.at("studies_per_window").get<std::uint32_t>();
            if (ph.contains("overrides")) {
                for (const auto& [id, pj] : ph["overrides"].items()) {
                    phase.overrides.emplace(id, profile_from_json(pj));
                }
            }
            spec.phases.push_back(std::move(phase));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("scenario: ") + e.what());
    }
    spec.validate();
    return spec;
}

nlohmann::json scenario_to_json(const ScenarioSpec& spec) {
    nlohmann::json models = nlohmann::json::array();
    for (const auto& [id, profile] : spec.models) {
        nlohmann::json m = profile_to_json(profile);
        m["id"] = id;
        models.push_back(std::move(m));
    }
    nlohmann::json phases = nlohmann::json::array();
    for (const auto& phase : spec.phases) {
        nlohmann::json overrides = nlohmann::json::object();
        for (const auto& [id, profile] : phase.overrides) {
            overrides[id] = profile_to_json(profile);
        }
        phases.push_back({{"windows", phase.window_count},
                          {"studies_per_window", phase.studies_per_window},
                          {"overrides", overrides}});
    }
    return {{"seed", spec.seed},
            {"origin", format_iso8601(spec.origin)},
            {"window_duration", spec.window_duration.count()},
            {"class_label", spec.class_label},
            {"models", models},
            {"phases", phases}};
}

}  // namespace driftwatch
