#include "driftwatch/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace driftwatch {

namespace {

std::string fixed(double v, int decimals) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

double round6(double v) { return std::round(v * 1e6) / 1e6; }

ReportBundle::LabelSection& section_for(ReportBundle& bundle, const std::string& label,
                                        const MonitorConfig& config) {
    for (auto& s : bundle.sections) {
        if (s.class_label == label) return s;
    }
    ReportBundle::LabelSection s;
    s.class_label = label;
    s.model_ids = config.all_models();
    for (std::size_t i = 0; i < s.model_ids.size(); ++i) {
        for (std::size_t j = i + 1; j < s.model_ids.size(); ++j) {
            s.pair_keys.push_back(s.model_ids[i] + "-" + s.model_ids[j]);
        }
    }
    bundle.sections.push_back(std::move(s));
    return bundle.sections.back();
}

}  // namespace

ReportBundle build_report(const MonitorEngine& engine) {
    ReportBundle bundle;
    bundle.diagnostics = engine.diagnostics();

    for (const auto& record : engine.evaluations()) {
        ReportBundle::LabelSection& section =
            section_for(bundle, record.class_label, engine.config());
        const std::string& wlabel = record.evaluation.window.label;
        section.window_labels.push_back(wlabel);
        section.counts[wlabel] = record.model_counts;

        for (const auto& reading : record.evaluation.readings) {
            if (reading.metric == MetricKind::Predictive) {
                section.predictive[wlabel][reading.pair_key()] = reading.value.value;
            } else {
                section.temporal[wlabel][reading.model_a] = reading.value.value;
            }
        }
        for (const auto& alert : record.evaluation.alerts) {
            bundle.alerts.emplace_back(record.class_label, alert);
        }
        for (const auto& note : record.evaluation.coverage_notes) {
            bundle.coverage_notes.push_back(note);
        }
    }

    for (const auto& [key, value] : engine.predictive_baseline()) {
        // Key layout is "<label>/<pair>".
        std::size_t slash = key.find('/');
        std::string label = key.substr(0, slash);
        std::string pair = key.substr(slash + 1);
        section_for(bundle, label, engine.config()).baseline[pair] = value;
    }
    return bundle;
}

nlohmann::json reading_to_display_json(const DivergenceReading& reading,
                                       const std::string& class_label) {
    return {{"window_label", reading.window.label},
            {"window_start", format_iso8601(reading.window.start)},
            {"metric", to_string(reading.metric)},
            {"model_a", reading.model_a},
            {"model_b", reading.model_b},
            {"kind", reading.value.kind == DivergenceKind::KL ? "KL" : "JS"},
            {"value", reading.value.value},
            {"smoothed", reading.value.smoothed},
            {"class_label", class_label}};
}

nlohmann::json alert_to_display_json(const Alert& alert, const std::string& class_label) {
    nlohmann::json j;
    j["window_label"] = alert.window.label;
    j["metric"] = to_string(alert.metric);
    double worst = 0.0;
    if (alert.metric == MetricKind::Predictive) {
        nlohmann::json pairs = nlohmann::json::array();
        for (const auto& r : alert.readings) {
            pairs.push_back({{"model_a", r.model_a},
                             {"model_b", r.model_b},
                             {"value", round6(r.value.value)}});
            worst = std::max(worst, r.value.value);
        }
        j["pairs"] = std::move(pairs);
    } else {
        j["model"] = alert.readings.front().model_a;
        worst = alert.readings.front().value.value;
    }
    j["value"] = round6(worst);
    j["threshold"] = alert.threshold;
    j["suspect"] = alert.suspect;
    j["severity"] = to_string(alert.severity);
    j["timestamp"] = format_iso8601(alert.emitted_at);
    j["class_label"] = class_label;
    return j;
}

void write_readings_json(std::ostream& out, const MonitorEngine& engine) {
    nlohmann::json windows = nlohmann::json::array();
    nlohmann::json readings = nlohmann::json::array();
    nlohmann::json coverage = nlohmann::json::array();

    for (const auto& record : engine.evaluations()) {
        const TimeWindow& w = record.evaluation.window;
        windows.push_back({{"label", w.label},
                           {"index", w.index},
                           {"start", format_iso8601(w.start)},
                           {"end", format_iso8601(w.end)},
                           {"class_label", record.class_label},
                           {"model_counts", record.model_counts},
                           {"insufficient", record.insufficient}});
        for (const auto& reading : record.evaluation.readings) {
            readings.push_back(reading_to_display_json(reading, record.class_label));
        }
        for (const auto& note : record.evaluation.coverage_notes) coverage.push_back(note);
    }

    const Diagnostics& d = engine.diagnostics();
    nlohmann::json doc = {{"windows", windows},
                          {"readings", readings},
                          {"coverage_notes", coverage},
                          {"diagnostics",
                           {{"accepted", d.accepted},
                            {"duplicates", d.duplicates},
                            {"late_events", d.late_events},
                            {"pre_epoch", d.pre_epoch},
                            {"unregistered_model", d.unregistered_model},
                            {"out_of_domain", d.out_of_domain}}}};
    out << doc.dump(2) << '\n';
}

void write_alerts_jsonl(std::ostream& out, const MonitorEngine& engine) {
    for (const auto& record : engine.evaluations()) {
        for (const auto& alert : record.evaluation.alerts) {
            out << alert_to_display_json(alert, record.class_label).dump() << '\n';
        }
    }
}

void write_report_md(std::ostream& out, const MonitorEngine& engine) {
    ReportBundle bundle = build_report(engine);
    const MonitorConfig& config = engine.config();

    out << "# Model monitoring report\n\n";
    out << "Main model: `" << config.main_model << "`; support models:";
    for (const auto& m : config.support_models) out << " `" << m << "`";
    out << "\n\nThresholds: predictive " << fixed(config.predictive_threshold, 2) << ", temporal "
        << fixed(config.temporal_threshold, 2) << " (JS divergence, bits). Baseline: "
        << (config.baseline.mode == BaselineSpec::Mode::PreviousWindow
                ? "previous window"
                : "moving average of " + std::to_string(config.baseline.depth) + " windows")
        << ".\n";
    if (bundle.sections.size() == 1) {
        out << "\nClass label: " << bundle.sections.front().class_label << "\n";
    }

    for (const auto& section : bundle.sections) {
        if (bundle.sections.size() > 1) {
            out << "\n## Class label: " << section.class_label << "\n";
        }

        out << "\n## Windows\n\n| Window |";
        for (const auto& m : section.model_ids) out << " " << m << " |";
        out << "\n|---|";
        for (std::size_t i = 0; i < section.model_ids.size(); ++i) out << "---|";
        out << "\n";
        for (const auto& wlabel : section.window_labels) {
            out << "| " << wlabel << " |";
            auto counts = section.counts.find(wlabel);
            for (const auto& m : section.model_ids) {
                std::uint64_t n = 0;
                if (counts != section.counts.end()) {
                    auto it = counts->second.find(m);
                    if (it != counts->second.end()) n = it->second;
                }
                out << " " << n << " |";
            }
            out << "\n";
        }

        out << "\n## Predictive divergence (pairwise JS)\n\n| Window |";
        for (const auto& pair : section.pair_keys) out << " " << pair << " |";
        out << "\n|---|";
        for (std::size_t i = 0; i < section.pair_keys.size(); ++i) out << "---|";
        out << "\n";
        for (const auto& wlabel : section.window_labels) {
            out << "| " << wlabel << " |";
            auto row = section.predictive.find(wlabel);
            for (const auto& pair : section.pair_keys) {
                if (row != section.predictive.end() && row->second.count(pair)) {
                    out << " " << fixed(row->second.at(pair), 3) << " |";
                } else {
                    out << " - |";
                }
            }
            out << "\n";
        }

        if (!section.baseline.empty()) {
            out << "\nDelta from reference window (positive = more divergent than at "
                   "baseline):\n\n| Window |";
            for (const auto& pair : section.pair_keys) out << " " << pair << " |";
            out << "\n|---|";
            for (std::size_t i = 0; i < section.pair_keys.size(); ++i) out << "---|";
            out << "\n";
            for (const auto& wlabel : section.window_labels) {
                out << "| " << wlabel << " |";
                auto row = section.predictive.find(wlabel);
                for (const auto& pair : section.pair_keys) {
                    auto base = section.baseline.find(pair);
                    if (row != section.predictive.end() && row->second.count(pair) &&
                        base != section.baseline.end()) {
                        double delta = row->second.at(pair) - base->second;
                        out << " " << (delta >= 0 ? "+" : "") << fixed(delta, 3) << " |";
                    } else {
                        out << " - |";
                    }
                }
                out << "\n";
            }
        }

        out << "\n## Temporal stability (JS vs baseline)\n\n| Model |";
        std::vector<std::string> temporal_windows;
        for (const auto& wlabel : section.window_labels) {
            if (section.temporal.count(wlabel)) temporal_windows.push_back(wlabel);
        }
        for (const auto& wlabel : temporal_windows) out << " " << wlabel << " |";
        out << "\n|---|";
        for (std::size_t i = 0; i < temporal_windows.size(); ++i) out << "---|";
        out << "\n";
        for (const auto& m : section.model_ids) {
            out << "| " << m << " |";
            for (const auto& wlabel : temporal_windows) {
                const auto& row = section.temporal.at(wlabel);
                auto it = row.find(m);
                if (it != row.end()) {
                    out << " " << fixed(it->second, 3) << " |";
                } else {
                    out << " - |";
                }
            }
            out << "\n";
        }
    }

    out << "\n## Alerts\n\n";
    if (bundle.alerts.empty()) {
        out << "No alerts.\n";
    } else {
        for (const auto& [label, alert] : bundle.alerts) {
            out << "- **" << to_string(alert.severity) << "** " << to_string(alert.metric)
                << " in " << alert.window.label << " (threshold "
                << fixed(alert.threshold, 2) << ", suspect " << alert.suspect << "):";
            for (const auto& r : alert.readings) {
                out << " " << (alert.metric == MetricKind::Predictive ? r.pair_key() : r.model_a)
                    << "=" << fixed(r.value.value, 3);
            }
            out << "\n";
        }
    }

    if (!bundle.coverage_notes.empty()) {
        out << "\n## Coverage notes\n\n";
        for (const auto& note : bundle.coverage_notes) out << "- " << note << "\n";
    }

    const Diagnostics& d = bundle.diagnostics;
    out << "\n## Ingestion diagnostics\n\n"
        << "accepted " << d.accepted << ", duplicates " << d.duplicates << ", late "
        << d.late_events << ", pre-epoch " << d.pre_epoch << ", unregistered "
        << d.unregistered_model << ", out-of-domain " << d.out_of_domain << "\n";
}

namespace {

void write_long_csv(std::ostream& out,
                    const std::vector<ReportBundle::LabelSection>& sections,
                    bool predictive, bool qualify_series) {
    out << "window,series,value\n";
    for (const auto& section : sections) {
        const auto& matrix = predictive ? section.predictive : section.temporal;
        const std::vector<std::string>& series_order =
            predictive ? section.pair_keys : section.model_ids;
        for (const auto& wlabel : section.window_labels) {
            auto row = matrix.find(wlabel);
            if (row == matrix.end()) continue;
            for (const auto& series : series_order) {
                auto it = row->second.find(series);
                if (it == row->second.end()) continue;
                out << wlabel << ',';
                if (qualify_series) out << section.class_label << ':';
                out << series << ',' << fixed(it->second, 9) << '\n';
            }
        }
    }
}

}  // namespace

void write_predictive_csv(std::ostream& out, const ReportBundle& bundle) {
    write_long_csv(out, bundle.sections, true, bundle.sections.size() > 1);
}

void write_temporal_csv(std::ostream& out, const ReportBundle& bundle) {
    write_long_csv(out, bundle.sections, false, bundle.sections.size() > 1);
}

}  // namespace driftwatch
