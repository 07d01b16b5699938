#include "driftwatch/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>

namespace driftwatch {

namespace {

const std::set<std::string> kKnownKeys{
    "main_model",       "support_models",     "predictive_threshold",
    "temporal_threshold", "baseline_mode",    "baseline_depth",
    "bin_count",        "window_duration",    "window_origin",
    "min_samples",      "kl_smoothing",
};

[[noreturn]] void bad(const std::string& message) { throw ConfigError("config: " + message); }

}  // namespace

MonitorConfig config_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) bad("document must be a JSON object");
    for (const auto& [key, _] : doc.items()) {
        if (kKnownKeys.find(key) == kKnownKeys.end()) bad("unknown key '" + key + "'");
    }

    MonitorConfig cfg;
    try {
        cfg.main_model = doc.at("main_model").get<std::string>();
        cfg.support_models = doc.at("support_models").get<std::vector<std::string>>();

        if (doc.contains("predictive_threshold")) {
            cfg.predictive_threshold = doc["predictive_threshold"].get<double>();
        }
        if (doc.contains("temporal_threshold")) {
            cfg.temporal_threshold = doc["temporal_threshold"].get<double>();
        }

        if (doc.contains("baseline_mode")) {
            std::string mode = doc["baseline_mode"].get<std::string>();
            if (mode == "previous_window") {
                cfg.baseline.mode = BaselineSpec::Mode::PreviousWindow;
            } else if (mode == "moving_average") {
                cfg.baseline.mode = BaselineSpec::Mode::MovingAverage;
            } else {
                bad("baseline_mode must be 'previous_window' or 'moving_average'");
            }
        }
        if (doc.contains("baseline_depth")) {
            cfg.baseline.depth = doc["baseline_depth"].get<std::uint32_t>();
        }

        if (doc.contains("bin_count")) cfg.binning.bin_count = doc["bin_count"].get<int>();

        const auto& dur = doc.at("window_duration");
        if (dur.is_number_integer()) {
            cfg.window.duration = Duration{dur.get<std::int64_t>()};
        } else if (dur.is_string()) {
            auto parsed = parse_duration(dur.get<std::string>());
            if (!parsed) bad("unparsable window_duration '" + dur.get<std::string>() + "'");
            cfg.window.duration = *parsed;
        } else {
            bad("window_duration must be a number of seconds or a string like '30d'");
        }

        std::string origin = doc.at("window_origin").get<std::string>();
        auto parsed_origin = parse_iso8601(origin);
        if (!parsed_origin) bad("unparsable window_origin '" + origin + "'");
        cfg.window.origin = *parsed_origin;

        if (doc.contains("min_samples")) {
            cfg.window.min_samples = doc["min_samples"].get<std::uint64_t>();
        }
        if (doc.contains("kl_smoothing") && !doc["kl_smoothing"].is_null()) {
            cfg.kl_smoothing = doc["kl_smoothing"].get<double>();
        }
    } catch (const nlohmann::json::exception& e) {
        bad(e.what());
    }

    cfg.validate();
    return cfg;
}

MonitorConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        bad(std::string("invalid JSON in '") + path + "': " + e.what());
    }
    return config_from_json(doc);
}

nlohmann::json config_to_json(const MonitorConfig& config) {
    nlohmann::json doc;
    doc["main_model"] = config.main_model;
    doc["support_models"] = config.support_models;
    doc["predictive_threshold"] = config.predictive_threshold;
    doc["temporal_threshold"] = config.temporal_threshold;
    doc["baseline_mode"] = config.baseline.mode == BaselineSpec::Mode::PreviousWindow
                               ? "previous_window"
                               : "moving_average";
    doc["baseline_depth"] = config.baseline.depth;
    doc["bin_count"] = config.binning.bin_count;
    doc["window_duration"] = config.window.duration.count();
    doc["window_origin"] = format_iso8601(config.window.origin);
    doc["min_samples"] = config.window.min_samples;
    if (config.kl_smoothing) {
        doc["kl_smoothing"] = *config.kl_smoothing;
    } else {
        doc["kl_smoothing"] = nullptr;
    }
    return doc;
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string config_digest(const MonitorConfig& config) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a64(config_to_json(config).dump())));
    return buf;
}

}  // namespace driftwatch
