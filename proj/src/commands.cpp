#include "driftwatch/commands.hpp"

#include <atomic>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

#include <httplib.h>

#include "driftwatch/config.hpp"
#include "driftwatch/csv.hpp"
#include "driftwatch/engine.hpp"
#include "driftwatch/report.hpp"
#include "driftwatch/service.hpp"
#include "driftwatch/synthetic.hpp"

namespace driftwatch {

namespace {

namespace fs = std::filesystem;

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& writer) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    writer(out);
    if (!out.good()) throw Error("short write to '" + path.string() + "'");
}

}  // namespace

int cmd_replay(const ReplayOptions& options) {
    try {
        MonitorConfig config = load_config_file(options.config_path);

        std::ifstream in(options.input_csv);
        if (!in) {
            std::cerr << "error: cannot open input CSV '" << options.input_csv << "'\n";
            return kExitError;
        }
        CsvParseResult parsed = parse_event_csv(in, options.csv_error_budget);
        if (parsed.events.empty()) {
            std::cerr << "error: no events in '" << options.input_csv << "'\n";
            return kExitError;
        }
        for (const auto& e : parsed.errors) {
            std::cerr << "warning: line " << e.line << ": " << e.message << "\n";
        }

        MonitorEngine engine(config);
        for (const auto& event : parsed.events) engine.ingest(event);
        engine.finalize();

        fs::create_directories(options.out_dir);
        fs::path out(options.out_dir);
        write_file(out / "readings.json",
                   [&](std::ostream& o) { write_readings_json(o, engine); });
        write_file(out / "alerts.jsonl",
                   [&](std::ostream& o) { write_alerts_jsonl(o, engine); });
        write_file(out / "report.md", [&](std::ostream& o) { write_report_md(o, engine); });
        ReportBundle bundle = build_report(engine);
        write_file(out / "predictive.csv",
                   [&](std::ostream& o) { write_predictive_csv(o, bundle); });
        write_file(out / "temporal.csv",
                   [&](std::ostream& o) { write_temporal_csv(o, bundle); });

        std::uint64_t alerts = engine.total_alerts();
        std::cout << "replayed " << engine.diagnostics().accepted << " events into "
                  << engine.evaluations().size() << " windows, " << alerts << " alert"
                  << (alerts == 1 ? "" : "s") << "\n";
        return engine.has_critical_alert() ? kExitCritical : kExitOk;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}

int cmd_generate(const GenerateOptions& options) {
    try {
        ScenarioSpec spec;
        if (options.paper_shaped) {
            spec = paper_shaped_scenario(options.seed.value_or(42));
        } else if (options.spec_path) {
            std::ifstream in(*options.spec_path);
            if (!in) {
                std::cerr << "error: cannot open scenario '" << *options.spec_path << "'\n";
                return kExitError;
            }
            nlohmann::json doc;
            try {
                in >> doc;
            } catch (const nlohmann::json::exception& e) {
                std::cerr << "error: invalid scenario JSON: " << e.what() << "\n";
                return kExitError;
            }
            spec = scenario_from_json(doc);
            if (options.seed) spec.seed = *options.seed;
        } else {
            std::cerr << "error: generate needs --paper-shaped or --spec <path>\n";
            return kExitError;
        }

        std::vector<PredictionEvent> events = generate(spec);

        fs::create_directories(options.out_dir);
        fs::path out(options.out_dir);
        write_file(out / "events.csv", [&](std::ostream& o) { write_event_csv(o, events); });
        write_file(out / "scenario.json",
                   [&](std::ostream& o) { o << scenario_to_json(spec).dump(2) << '\n'; });
        write_file(out / "config.json", [&](std::ostream& o) {
            o << config_to_json(scenario_config(spec)).dump(2) << '\n';
        });

        std::cout << "generated " << events.size() << " events into "
                  << (out / "events.csv").string() << "\n";
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}

namespace {

std::atomic<httplib::Server*> g_running_server{nullptr};

void handle_shutdown_signal(int) {
    if (auto* server = g_running_server.load()) server->stop();
}

}  // namespace

int cmd_serve(const ServeOptions& options) {
    try {
        std::string host = options.listen;
        int port = 8080;
        if (auto colon = options.listen.rfind(':'); colon != std::string::npos) {
            host = options.listen.substr(0, colon);
            port = std::atoi(options.listen.c_str() + colon + 1);
        }
        if (host.empty() || port <= 0 || port > 65535) {
            std::cerr << "error: bad listen address '" << options.listen << "'\n";
            return kExitError;
        }

        MonitorService::Options service_options;
        service_options.config = load_config_file(options.config_path);
        service_options.out_dir = options.out_dir;
        service_options.snapshot_path = options.snapshot_path;
        service_options.fresh = options.fresh;
        MonitorService service(std::move(service_options));

        if (!service.http().bind_to_port(host, port)) {
            std::cerr << "error: cannot bind " << host << ":" << port << "\n";
            return kExitError;
        }

        g_running_server.store(&service.http());
        std::signal(SIGINT, handle_shutdown_signal);
        std::signal(SIGTERM, handle_shutdown_signal);

        std::cout << "listening on " << host << ":" << port << "\n";
        service.http().listen_after_bind();
        g_running_server.store(nullptr);

        service.persist();
        std::cout << "shut down cleanly\n";
        return kExitOk;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}

}  // namespace driftwatch
