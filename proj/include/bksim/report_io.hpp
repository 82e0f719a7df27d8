#pragma once

// Report writers. Output is a pure function of the report contents: doubles
// are printed in shortest round-trip form, map iteration orders are fixed,
// and no timestamps or hostnames appear in file bodies, so equal inputs
// yield byte-identical files.

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <system_error>

#include <json.hpp>

#include "bksim/engine.hpp"

namespace bksim {

inline std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline std::string csv_field(const std::string& s)
{
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    out += '"';
    return out;
}

// Writes via a temporary file in the target directory plus an atomic rename,
// so a crash never leaves a truncated report behind.
inline void write_atomic(const std::filesystem::path& path, const std::string& content)
{
    const auto dir = path.parent_path();
    if (!dir.empty()) {
        std::filesystem::create_directories(dir);
    }
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        }
        out << content;
        out.flush();
        if (!out) {
            throw std::runtime_error("write failed for '" + tmp.string() + "'");
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename '" + tmp.string() + "' to '" + path.string() +
                                 "': " + ec.message());
    }
}

inline std::string report_to_csv(const SimReport& r)
{
    std::string out;
    out += "# bksim report v1\n";
    out += "# scenario=" + r.scenario_id + " seed=" + std::to_string(r.seed) +
           " window=" + std::to_string(r.window_size) + "\n";
    out += "time,receiver_id,channel_hz,snr_db,ber,prr,event\n";
    const std::size_t n_windows = r.aggregate_rows.size();
    const std::size_t per_window = n_windows ? r.rows.size() / n_windows : 0;
    const auto emit = [&out](const WindowRow& row) {
        out += format_double(row.time);
        out += ',';
        out += csv_field(row.receiver_id);
        out += ',';
        out += format_double(row.channel_hz);
        out += ',';
        out += format_double(row.snr_db);
        out += ',';
        out += format_double(row.ber);
        out += ',';
        out += format_double(row.prr);
        out += ',';
        out += csv_field(row.event);
        out += '\n';
    };
    for (std::size_t w = 0; w < n_windows; ++w) {
        for (std::size_t i = 0; i < per_window; ++i) {
            emit(r.rows[w * per_window + i]);
        }
        emit(r.aggregate_rows[w]);
    }
    return out;
}

inline nlohmann::ordered_json report_to_json(const SimReport& r)
{
    nlohmann::ordered_json doc;
    doc["schema_version"] = 1;
    doc["scenario_id"] = r.scenario_id;
    doc["seed"] = r.seed;
    doc["window_size"] = r.window_size;
    nlohmann::ordered_json prr = nlohmann::ordered_json::object();
    for (const auto& [id, v] : r.mean_prr) {
        prr[id] = v;
    }
    doc["mean_prr"] = prr;
    doc["windows"] = nlohmann::ordered_json::array();
    const std::size_t n_windows = r.aggregate_rows.size();
    const std::size_t per_window = n_windows ? r.rows.size() / n_windows : 0;
    const auto window_json = [](const WindowRow& row) {
        nlohmann::ordered_json j;
        j["time"] = row.time;
        j["receiver_id"] = row.receiver_id;
        j["channel_hz"] = row.channel_hz;
        j["snr_db"] = row.snr_db;
        j["ber"] = row.ber;
        j["prr"] = row.prr;
        j["event"] = row.event;
        return j;
    };
    for (std::size_t w = 0; w < n_windows; ++w) {
        for (std::size_t i = 0; i < per_window; ++i) {
            doc["windows"].push_back(window_json(r.rows[w * per_window + i]));
        }
        doc["windows"].push_back(window_json(r.aggregate_rows[w]));
    }
    doc["events"] = nlohmann::ordered_json::array();
    for (const auto& e : r.events) {
        nlohmann::ordered_json j;
        j["t"] = e.t;
        j["kind"] = e.kind;
        j["detail"] = e.detail;
        doc["events"].push_back(j);
    }
    return doc;
}

inline std::string serialize_report_json(const SimReport& r)
{
    return report_to_json(r).dump(2) + "\n";
}

} // namespace bksim
