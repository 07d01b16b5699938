#include "driftwatch/snapshot.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "driftwatch/config.hpp"

namespace driftwatch {

namespace {

std::string checksum_hex(const std::string& payload) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(payload)));
    return buf;
}

}  // namespace

void write_snapshot_file(const std::string& path, const MonitorEngine& engine) {
    nlohmann::json state = engine.state_to_json();
    std::string payload = state.dump();

    nlohmann::json envelope;
    envelope["magic"] = kSnapshotMagic;
    envelope["version"] = kSnapshotVersion;
    envelope["config_digest"] = config_digest(engine.config());
    envelope["checksum"] = checksum_hex(payload);
    envelope["state"] = std::move(state);

    // Write-then-rename so a crash mid-write leaves the previous snapshot
    // intact instead of a truncated file.
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw SnapshotError("cannot write snapshot to '" + tmp + "'");
        out << envelope.dump(2) << '\n';
        out.flush();
        if (!out.good()) throw SnapshotError("short write while saving snapshot to '" + tmp + "'");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw SnapshotError("cannot move snapshot into place: " + ec.message());
}

MonitorEngine read_snapshot_file(const std::string& path, const MonitorConfig& config) {
    std::ifstream in(path);
    if (!in) throw SnapshotError("cannot open snapshot '" + path + "'");
    nlohmann::json envelope;
    try {
        in >> envelope;
    } catch (const nlohmann::json::exception& e) {
        throw SnapshotError(std::string("corrupt snapshot: ") + e.what());
    }

    if (!envelope.is_object() || envelope.value("magic", "") != kSnapshotMagic) {
        throw SnapshotError("not a snapshot file: bad magic in '" + path + "'");
    }
    if (envelope.value("version", -1) != kSnapshotVersion) {
        throw SnapshotError("unsupported snapshot version " +
                            envelope.value("version", nlohmann::json{}).dump());
    }

    const nlohmann::json& state = envelope.at("state");
    if (checksum_hex(state.dump()) != envelope.value("checksum", "")) {
        throw SnapshotError("snapshot checksum mismatch: file is corrupt");
    }

    std::string expected = config_digest(config);
    std::string recorded = envelope.value("config_digest", "");
    if (recorded != expected) {
        throw SnapshotError("config digest mismatch: snapshot was written under " + recorded +
                            ", current config is " + expected);
    }

    return MonitorEngine::state_from_json(state, config);
}

}  // namespace driftwatch
