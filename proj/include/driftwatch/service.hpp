#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "driftwatch/engine.hpp"

namespace httplib {
class Server;
}

namespace driftwatch {

/// HTTP ingestion front-end around a MonitorEngine.
///
///   POST /v1/predictions   one JSON event or an array; 202 on accept,
///                          400 with positioned errors (whole batch rejected)
///   GET  /v1/status        open windows, per-model counts, diagnostics
///   GET  /v1/readings      readings JSON, ?window=<label> filters
///   GET  /v1/alerts        alert log as JSON lines
///
/// Requests may arrive concurrently; events are applied to the engine under
/// one lock, so the monitor sees a single total order by arrival. Alerts
/// are appended to <out_dir>/alerts.jsonl as windows close.
class MonitorService {
public:
    struct Options {
        MonitorConfig config;
        std::string out_dir = ".";
        std::optional<std::string> snapshot_path;
        bool fresh = false;  // ignore an existing snapshot instead of restoring
    };

    explicit MonitorService(Options options);
    ~MonitorService();

    MonitorService(const MonitorService&) = delete;
    MonitorService& operator=(const MonitorService&) = delete;

    httplib::Server& http() { return *server_; }

    /// Writes the state snapshot (when a path is configured). Called on
    /// clean shutdown; callable any time between requests.
    void persist();

    /// Direct engine access for tests and the shutdown path. Take lock()
    /// while the HTTP server is running.
    MonitorEngine& engine() { return *engine_; }
    std::unique_lock<std::mutex> lock() { return std::unique_lock<std::mutex>(mutex_); }

private:
    void install_routes();
    void append_new_alerts_locked();
    std::string alerts_path() const;

    Options options_;
    std::unique_ptr<MonitorEngine> engine_;
    std::unique_ptr<httplib::Server> server_;
    std::mutex mutex_;
};

}  // namespace driftwatch
