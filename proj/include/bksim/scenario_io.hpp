#pragma once

// JSON form of a Scenario. The schema is strict: unknown fields, duplicate
// node ids and out-of-range values are rejected with a diagnostic that names
// the offending path. All defaults are resolved at load time; serialization
// writes the fully resolved form so that serialize -> load round-trips to an
// equal Scenario.

#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "bksim/scenario.hpp"

namespace bksim {

// Scenario or input that fails schema/semantic validation. The CLI maps
// this to exit code 1; anything else non-zero is a runtime failure (2).
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

[[noreturn]] inline void fail(const std::string& path, const std::string& msg)
{
    throw ValidationError(path + ": " + msg);
}

// Tracks which keys of an object were consumed so that leftovers can be
// reported as unknown fields.
class Cursor {
public:
    Cursor(const json& j, std::string path) : j_(j), path_(std::move(path))
    {
        if (!j_.is_object()) fail(path_, "expected an object");
    }

    const std::string& path() const { return path_; }

    bool has(const std::string& key) const { return j_.contains(key); }

    const json* get(const std::string& key)
    {
        seen_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    const json& require(const std::string& key)
    {
        const json* v = get(key);
        if (!v) fail(path_, "missing required field '" + key + "'");
        return *v;
    }

    double number(const std::string& key)
    {
        const json& v = require(key);
        if (!v.is_number()) fail(path_ + "." + key, "expected a number");
        return v.get<double>();
    }

    double number_or(const std::string& key, double def)
    {
        const json* v = get(key);
        if (!v) return def;
        if (!v->is_number()) fail(path_ + "." + key, "expected a number");
        return v->get<double>();
    }

    std::int64_t integer(const std::string& key)
    {
        const json& v = require(key);
        if (!v.is_number_integer()) fail(path_ + "." + key, "expected an integer");
        return v.get<std::int64_t>();
    }

    std::int64_t integer_or(const std::string& key, std::int64_t def)
    {
        const json* v = get(key);
        if (!v) return def;
        if (!v->is_number_integer()) fail(path_ + "." + key, "expected an integer");
        return v->get<std::int64_t>();
    }

    std::string string(const std::string& key)
    {
        const json& v = require(key);
        if (!v.is_string()) fail(path_ + "." + key, "expected a string");
        return v.get<std::string>();
    }

    std::string string_or(const std::string& key, const std::string& def)
    {
        const json* v = get(key);
        if (!v) return def;
        if (!v->is_string()) fail(path_ + "." + key, "expected a string");
        return v->get<std::string>();
    }

    void finish() const
    {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) {
                fail(path_ + "." + it.key(), "unknown field");
            }
        }
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

inline Vec3 parse_position(const json& v, const std::string& path)
{
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
        !v[2].is_number()) {
        fail(path, "expected a position array [x, y, z]");
    }
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

inline std::vector<std::pair<double, double>> parse_intervals(const json& v,
                                                              const std::string& path)
{
    if (!v.is_array()) fail(path, "expected an array of [t_start, t_end] pairs");
    std::vector<std::pair<double, double>> out;
    double prev_end = -1.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        const json& e = v[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            fail(p, "expected [t_start, t_end]");
        }
        const double t0 = e[0].get<double>(), t1 = e[1].get<double>();
        if (!(t0 >= 0.0) || !(t1 > t0)) fail(p, "intervals must satisfy 0 <= t_start < t_end");
        if (t0 < prev_end) fail(p, "intervals must be sorted and non-overlapping");
        prev_end = t1;
        out.emplace_back(t0, t1);
    }
    return out;
}

inline Band parse_band(const json& v, const std::string& path)
{
    if (v.is_string()) {
        auto b = band_preset(v.get<std::string>());
        if (!b) fail(path, "unknown band preset '" + v.get<std::string>() + "'");
        return *b;
    }
    Cursor c(v, path);
    Band b{{c.number("low_hz")}, {c.number("high_hz")}};
    c.finish();
    if (!(b.high.hz > b.low.hz)) fail(path, "band must have high_hz > low_hz");
    return b;
}

inline RejectionCurve parse_rejection(const json& v, const std::string& path)
{
    if (!v.is_array()) fail(path, "expected an array of [offset_hz, rejection_db] pairs");
    RejectionCurve curve;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const std::string p = path + "[" + std::to_string(i) + "]";
        const json& e = v[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            fail(p, "expected [offset_hz, rejection_db]");
        }
        curve.points.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    try {
        curve.validate();
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    return curve;
}

inline bool band_is_sub_ghz(const Band& b) { return b.low.hz < 1.0e9; }

inline RadioProfile default_profile_for(const Band& band)
{
    return band_is_sub_ghz(band) ? profile_lorea_868() : profile_lorea_24();
}

inline RadioProfile parse_profile(const json& v, const std::string& path, const Band& band)
{
    if (v.is_string()) {
        auto p = radio_profile_preset(v.get<std::string>());
        if (!p) fail(path, "unknown radio profile preset '" + v.get<std::string>() + "'");
        return *p;
    }
    RadioProfile base = default_profile_for(band);
    Cursor c(v, path);
    RadioProfile p;
    p.name = c.string_or("name", "custom");
    p.delta_f.hz = c.number_or("delta_f_hz", base.delta_f.hz);
    p.fsk_deviation.hz = c.number_or("fsk_deviation_hz", base.fsk_deviation.hz);
    p.bitrate_bps = c.number_or("bitrate_bps", base.bitrate_bps);
    p.rx_bandwidth.hz = c.number_or("rx_bandwidth_hz", base.rx_bandwidth.hz);
    p.sensitivity.dbm = c.number_or("sensitivity_dbm", base.sensitivity.dbm);
    p.noise_figure_db = c.number_or("noise_figure_db", base.noise_figure_db);
    if (const json* rej = c.get("rejection")) {
        p.rejection = parse_rejection(*rej, path + ".rejection");
    } else {
        p.rejection = base.rejection;
    }
    c.finish();
    try {
        p.validate();
    } catch (const std::invalid_argument& e) {
        fail(path, e.what());
    }
    return p;
}

inline Scenario scenario_from_json(const json& doc)
{
    Cursor top(doc, "$");
    Scenario s;

    const std::int64_t version = top.integer("schema_version");
    if (version != 1) fail("$.schema_version", "unsupported schema version");
    s.schema_version = 1;
    s.id = top.string_or("id", "scenario");
    s.description = top.string_or("description", "");
    if (const json* b = top.get("band")) {
        s.band = parse_band(*b, "$.band");
    } else {
        s.band = band_ism24();
    }
    s.path_loss_exponent = top.number_or("path_loss_exponent", 2.0);
    if (!(s.path_loss_exponent > 0.0)) fail("$.path_loss_exponent", "must be > 0");
    s.duration_s = top.number_or("duration_s", 20.0);
    s.time_step_s = top.number_or("time_step_s", 1.0);
    if (!(s.time_step_s > 0.0)) fail("$.time_step_s", "must be > 0");
    if (!(s.duration_s >= s.time_step_s)) fail("$.duration_s", "must be >= time_step_s");
    {
        const std::int64_t seed = top.integer_or("seed", 1);
        if (seed < 0) fail("$.seed", "must be >= 0");
        s.seed = static_cast<std::uint64_t>(seed);
    }
    if (const json* ps = top.get("packet_spec")) {
        Cursor c(*ps, "$.packet_spec");
        s.packet_spec.payload_bytes = static_cast<int>(c.integer_or("payload_bytes", 64));
        s.packet_spec.inter_packet_gap_s = c.number_or("inter_packet_gap_s", 0.25);
        c.finish();
    }
    if (s.packet_spec.payload_bytes < 1) fail("$.packet_spec.payload_bytes", "must be >= 1");
    if (!(s.packet_spec.inter_packet_gap_s > 0.0)) {
        fail("$.packet_spec.inter_packet_gap_s", "must be > 0");
    }

    const bool sub_ghz = band_is_sub_ghz(s.band);
    const double default_delta_f = sub_ghz ? 100.0e3 : 2.0e6;
    const double default_deviation = sub_ghz ? 13.0e3 : 190.0e3;
    const double default_draw = sub_ghz ? 70.0 : 650.0;

    // node ids must be unique across all roles; remember where each id was
    // declared so duplicates can name both locations.
    std::map<std::string, std::string> id_paths;
    std::vector<std::string> receivers_missing_tuned;

    const json& nodes = top.require("nodes");
    if (!nodes.is_array()) fail("$.nodes", "expected an array");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string path = "$.nodes[" + std::to_string(i) + "]";
        Cursor c(nodes[i], path);
        const std::string id = c.string("id");
        if (id.empty()) fail(path + ".id", "must not be empty");
        auto [it, inserted] = id_paths.emplace(id, path);
        if (!inserted) {
            fail(path + ".id",
                 "duplicate node id '" + id + "' (already declared at " + it->second + ".id)");
        }
        const std::string role = c.string("role");
        const Vec3 pos = parse_position(c.require("position"), path + ".position");

        if (role == "carrier_generator") {
            CarrierGenerator cg;
            cg.id = id;
            cg.position = pos;
            cg.tx_power.dbm = c.number("tx_power_dbm");
            cg.center.hz = c.number("center_hz");
            if (!(cg.center.hz > 0.0)) fail(path + ".center_hz", "must be > 0");
            cg.antenna_gain.db = c.number_or("antenna_gain_dbi", 0.0);
            if (const json* iv = c.get("on_intervals")) {
                cg.on_intervals = parse_intervals(*iv, path + ".on_intervals");
            }
            s.carriers.push_back(std::move(cg));
        } else if (role == "tag") {
            Tag t;
            t.id = id;
            t.position = pos;
            t.delta_f.hz = c.number_or("delta_f_hz", default_delta_f);
            if (!(t.delta_f.hz > 0.0)) fail(path + ".delta_f_hz", "must be > 0");
            t.k_factor.db = c.number_or("k_factor_db", -3.0);
            t.fsk_deviation.hz = c.number_or("fsk_deviation_hz", default_deviation);
            if (!(t.fsk_deviation.hz > 0.0)) fail(path + ".fsk_deviation_hz", "must be > 0");
            t.bitrate_bps = c.number_or("bitrate_bps", 2900.0);
            if (!(t.bitrate_bps > 0.0)) fail(path + ".bitrate_bps", "must be > 0");
            t.power_draw_uw = c.number_or("power_draw_uw", default_draw);
            t.excess_loss.db = c.number_or("excess_loss_db", 30.0);
            if (t.excess_loss.db < 0.0) fail(path + ".excess_loss_db", "must be >= 0");
            t.per_product_loss.db = c.number_or("per_product_loss_db", 3.0);
            if (t.per_product_loss.db < 0.0) fail(path + ".per_product_loss_db", "must be >= 0");
            s.tags.push_back(std::move(t));
        } else if (role == "receiver") {
            Receiver r;
            r.id = id;
            r.position = pos;
            if (const json* prof = c.get("profile")) {
                r.profile = parse_profile(*prof, path + ".profile", s.band);
            } else {
                r.profile = default_profile_for(s.band);
            }
            if (c.has("tuned_hz")) {
                r.tuned.hz = c.number("tuned_hz");
                if (!(r.tuned.hz > 0.0)) fail(path + ".tuned_hz", "must be > 0");
            } else {
                receivers_missing_tuned.push_back(id);
            }
            r.antenna_gain.db = c.number_or("antenna_gain_dbi", 0.0);
            s.receivers.push_back(std::move(r));
        } else if (role == "interferer") {
            Interferer f;
            f.id = id;
            f.position = pos;
            f.tx_power.dbm = c.number("tx_power_dbm");
            f.center.hz = c.number("center_hz");
            if (!(f.center.hz > 0.0)) fail(path + ".center_hz", "must be > 0");
            f.bandwidth.hz = c.number_or("bandwidth_hz", 0.0);
            if (f.bandwidth.hz < 0.0) fail(path + ".bandwidth_hz", "must be >= 0");
            f.duty_cycle = c.number_or("duty_cycle", 1.0);
            if (!(f.duty_cycle >= 0.0 && f.duty_cycle <= 1.0)) {
                fail(path + ".duty_cycle", "must be in [0, 1]");
            }
            if (const json* hs = c.get("hop_schedule")) {
                const std::string hp = path + ".hop_schedule";
                if (!hs->is_array()) fail(hp, "expected an array of [t, center_hz] pairs");
                double prev = -1.0;
                for (std::size_t k = 0; k < hs->size(); ++k) {
                    const std::string ep = hp + "[" + std::to_string(k) + "]";
                    const json& e = (*hs)[k];
                    if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
                        !e[1].is_number()) {
                        fail(ep, "expected [t, center_hz]");
                    }
                    const double t = e[0].get<double>(), hz = e[1].get<double>();
                    if (t < 0.0) fail(ep, "hop time must be >= 0");
                    if (t <= prev) fail(ep, "hop times must be strictly increasing");
                    if (!(hz > 0.0)) fail(ep, "hop frequency must be > 0");
                    prev = t;
                    f.hop_schedule.emplace_back(t, FrequencyHz{hz});
                }
            }
            s.interferers.push_back(std::move(f));
        } else {
            fail(path + ".role", "unknown role '" + role + "'");
        }
        c.finish();
    }

    if (const json* obs = top.get("obstacles")) {
        if (!obs->is_array()) fail("$.obstacles", "expected an array");
        for (std::size_t i = 0; i < obs->size(); ++i) {
            const std::string path = "$.obstacles[" + std::to_string(i) + "]";
            Cursor c((*obs)[i], path);
            Obstacle o;
            const std::string kind = c.string("kind");
            if (kind == "wall") {
                o.kind = ObstacleKind::Wall;
                o.attenuation.db = c.number_or("attenuation_db", default_wall_attenuation_db);
                o.x1 = c.number("x1");
                o.y1 = c.number("y1");
                o.x2 = c.number("x2");
                o.y2 = c.number("y2");
                o.z_min = c.number_or("z_min", 0.0);
                o.z_max = c.number_or("z_max", 3.0);
                if (!(o.z_max > o.z_min)) fail(path + ".z_max", "must be > z_min");
                if (o.x1 == o.x2 && o.y1 == o.y2) fail(path, "wall footprint is degenerate");
            } else if (kind == "floor") {
                o.kind = ObstacleKind::Floor;
                o.attenuation.db = c.number_or("attenuation_db", default_floor_attenuation_db);
                o.z = c.number("z");
            } else {
                fail(path + ".kind", "unknown obstacle kind '" + kind + "'");
            }
            if (o.attenuation.db < 0.0) fail(path + ".attenuation_db", "must be >= 0");
            c.finish();
            s.obstacles.push_back(o);
        }
    }

    if (const json* av = top.get("avoidance")) {
        Cursor c(*av, "$.avoidance");
        AvoidanceConfig a;
        a.window_size = static_cast<int>(c.integer_or("window_size", 20));
        if (a.window_size < 1) fail("$.avoidance.window_size", "must be >= 1");
        a.prr_threshold = c.number_or("prr_threshold", 0.5);
        if (!(a.prr_threshold >= 0.0 && a.prr_threshold <= 1.0)) {
            fail("$.avoidance.prr_threshold", "must be in [0, 1]");
        }
        const json& ch = c.require("channel_list_hz");
        if (!ch.is_array() || ch.empty()) {
            fail("$.avoidance.channel_list_hz", "expected a non-empty array of frequencies");
        }
        for (std::size_t k = 0; k < ch.size(); ++k) {
            if (!ch[k].is_number() || !(ch[k].get<double>() > 0.0)) {
                fail("$.avoidance.channel_list_hz[" + std::to_string(k) + "]",
                     "expected a frequency > 0");
            }
            a.channel_list.push_back({ch[k].get<double>()});
        }
        a.hop_latency_windows = static_cast<int>(c.integer_or("hop_latency_windows", 1));
        if (a.hop_latency_windows < 0) fail("$.avoidance.hop_latency_windows", "must be >= 0");
        a.carrier_id = c.string_or("carrier_id", "");
        a.receiver_id = c.string_or("receiver_id", "");
        c.finish();
        if (!a.carrier_id.empty() && !id_paths.count(a.carrier_id)) {
            fail("$.avoidance.carrier_id", "no node with id '" + a.carrier_id + "'");
        }
        if (!a.receiver_id.empty() && !id_paths.count(a.receiver_id)) {
            fail("$.avoidance.receiver_id", "no node with id '" + a.receiver_id + "'");
        }
        s.avoidance = std::move(a);
    }
    top.finish();

    // resolve default receiver tuning: first carrier plus the first tag's
    // tuning offset (falling back to the profile offset without a tag).
    for (const std::string& rid : receivers_missing_tuned) {
        for (auto& r : s.receivers) {
            if (r.id != rid) continue;
            if (s.carriers.empty()) {
                fail("$.nodes", "receiver '" + rid +
                                    "' needs tuned_hz (no carrier generator to derive it from)");
            }
            const double offset =
                s.tags.empty() ? r.profile.delta_f.hz : s.tags.front().delta_f.hz;
            r.tuned.hz = s.carriers.front().center.hz + offset;
        }
    }

    // packets must fit into their slot
    for (std::size_t i = 0; i < s.tags.size(); ++i) {
        const double tx_time = s.packet_spec.payload_bytes * 8.0 / s.tags[i].bitrate_bps;
        if (tx_time > s.packet_spec.inter_packet_gap_s) {
            fail("$.packet_spec.inter_packet_gap_s",
                 "slot shorter than the packet airtime of tag '" + s.tags[i].id + "' (" +
                     std::to_string(tx_time) + " s)");
        }
    }

    return s;
}

inline ordered_json profile_to_json(const RadioProfile& p)
{
    ordered_json j;
    j["name"] = p.name;
    j["delta_f_hz"] = p.delta_f.hz;
    j["fsk_deviation_hz"] = p.fsk_deviation.hz;
    j["bitrate_bps"] = p.bitrate_bps;
    j["rx_bandwidth_hz"] = p.rx_bandwidth.hz;
    j["sensitivity_dbm"] = p.sensitivity.dbm;
    j["noise_figure_db"] = p.noise_figure_db;
    ordered_json rej = ordered_json::array();
    for (const auto& [off, db] : p.rejection.points) rej.push_back({off, db});
    j["rejection"] = std::move(rej);
    return j;
}

inline ordered_json scenario_to_json(const Scenario& s)
{
    ordered_json doc;
    doc["schema_version"] = s.schema_version;
    doc["id"] = s.id;
    doc["description"] = s.description;
    doc["band"] = {{"low_hz", s.band.low.hz}, {"high_hz", s.band.high.hz}};
    doc["path_loss_exponent"] = s.path_loss_exponent;
    doc["duration_s"] = s.duration_s;
    doc["time_step_s"] = s.time_step_s;
    doc["seed"] = s.seed;
    doc["packet_spec"] = {{"payload_bytes", s.packet_spec.payload_bytes},
                          {"inter_packet_gap_s", s.packet_spec.inter_packet_gap_s}};
    ordered_json nodes = ordered_json::array();
    for (const auto& cg : s.carriers) {
        ordered_json n;
        n["id"] = cg.id;
        n["role"] = "carrier_generator";
        n["position"] = {cg.position.x, cg.position.y, cg.position.z};
        n["tx_power_dbm"] = cg.tx_power.dbm;
        n["center_hz"] = cg.center.hz;
        n["antenna_gain_dbi"] = cg.antenna_gain.db;
        ordered_json iv = ordered_json::array();
        for (const auto& [t0, t1] : cg.on_intervals) iv.push_back({t0, t1});
        n["on_intervals"] = std::move(iv);
        nodes.push_back(std::move(n));
    }
    for (const auto& t : s.tags) {
        ordered_json n;
        n["id"] = t.id;
        n["role"] = "tag";
        n["position"] = {t.position.x, t.position.y, t.position.z};
        n["delta_f_hz"] = t.delta_f.hz;
        n["k_factor_db"] = t.k_factor.db;
        n["fsk_deviation_hz"] = t.fsk_deviation.hz;
        n["bitrate_bps"] = t.bitrate_bps;
        n["power_draw_uw"] = t.power_draw_uw;
        n["excess_loss_db"] = t.excess_loss.db;
        n["per_product_loss_db"] = t.per_product_loss.db;
        nodes.push_back(std::move(n));
    }
    for (const auto& r : s.receivers) {
        ordered_json n;
        n["id"] = r.id;
        n["role"] = "receiver";
        n["position"] = {r.position.x, r.position.y, r.position.z};
        n["profile"] = profile_to_json(r.profile);
        n["tuned_hz"] = r.tuned.hz;
        n["antenna_gain_dbi"] = r.antenna_gain.db;
        nodes.push_back(std::move(n));
    }
    for (const auto& f : s.interferers) {
        ordered_json n;
        n["id"] = f.id;
        n["role"] = "interferer";
        n["position"] = {f.position.x, f.position.y, f.position.z};
        n["tx_power_dbm"] = f.tx_power.dbm;
        n["center_hz"] = f.center.hz;
        n["bandwidth_hz"] = f.bandwidth.hz;
        n["duty_cycle"] = f.duty_cycle;
        ordered_json hs = ordered_json::array();
        for (const auto& [t, hz] : f.hop_schedule) hs.push_back({t, hz.hz});
        n["hop_schedule"] = std::move(hs);
        nodes.push_back(std::move(n));
    }
    doc["nodes"] = std::move(nodes);
    ordered_json obstacles = ordered_json::array();
    for (const auto& o : s.obstacles) {
        ordered_json j;
        if (o.kind == ObstacleKind::Wall) {
            j["kind"] = "wall";
            j["attenuation_db"] = o.attenuation.db;
            j["x1"] = o.x1;
            j["y1"] = o.y1;
            j["x2"] = o.x2;
            j["y2"] = o.y2;
            j["z_min"] = o.z_min;
            j["z_max"] = o.z_max;
        } else {
            j["kind"] = "floor";
            j["attenuation_db"] = o.attenuation.db;
            j["z"] = o.z;
        }
        obstacles.push_back(std::move(j));
    }
    doc["obstacles"] = std::move(obstacles);
    if (s.avoidance) {
        const auto& a = *s.avoidance;
        ordered_json j;
        j["window_size"] = a.window_size;
        j["prr_threshold"] = a.prr_threshold;
        ordered_json ch = ordered_json::array();
        for (const auto& f : a.channel_list) ch.push_back(f.hz);
        j["channel_list_hz"] = std::move(ch);
        j["hop_latency_windows"] = a.hop_latency_windows;
        j["carrier_id"] = a.carrier_id;
        j["receiver_id"] = a.receiver_id;
        doc["avoidance"] = std::move(j);
    }
    return doc;
}

} // namespace detail

inline Scenario load_scenario(const std::string& json_text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("invalid JSON: ") + e.what());
    }
    return detail::scenario_from_json(doc);
}

inline Scenario load_scenario_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str());
}

inline std::string serialize_scenario(const Scenario& s)
{
    return detail::scenario_to_json(s).dump(2) + "\n";
}

// Applies a single "dotted.path[3].key=value" assignment to a raw scenario
// document. The path must reach an existing container; the final key may be
// created if the schema allows it (validation still runs afterwards).
// Values are parsed as JSON scalars with a bare-string fallback.
inline void apply_override(nlohmann::json& doc, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw ValidationError("override '" + assignment + "' must look like path=value");
    }
    const std::string path = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);

    // tokenize: key, .key, [index]
    std::vector<std::pair<bool, std::string>> tokens; // (is_index, text)
    std::size_t i = 0;
    while (i < path.size()) {
        if (path[i] == '.') {
            ++i;
            continue;
        }
        if (path[i] == '[') {
            const auto close = path.find(']', i);
            if (close == std::string::npos) {
                throw ValidationError("override path '" + path + "': unterminated '['");
            }
            tokens.emplace_back(true, path.substr(i + 1, close - i - 1));
            i = close + 1;
        } else {
            std::size_t j = i;
            while (j < path.size() && path[j] != '.' && path[j] != '[') ++j;
            tokens.emplace_back(false, path.substr(i, j - i));
            i = j;
        }
    }
    if (tokens.empty()) throw ValidationError("override path '" + path + "' is empty");

    nlohmann::json* cur = &doc;
    for (std::size_t k = 0; k < tokens.size(); ++k) {
        const auto& [is_index, text] = tokens[k];
        const bool last = (k + 1 == tokens.size());
        if (is_index) {
            if (!cur->is_array()) {
                throw ValidationError("override path '" + path + "': '[" + text +
                                      "]' applied to a non-array");
            }
            std::size_t idx = 0;
            try {
                idx = static_cast<std::size_t>(std::stoul(text));
            } catch (...) {
                throw ValidationError("override path '" + path + "': bad index '" + text + "'");
            }
            if (idx >= cur->size()) {
                throw ValidationError("override path '" + path + "': index " + text +
                                      " out of range (size " + std::to_string(cur->size()) + ")");
            }
            cur = &(*cur)[idx];
        } else {
            if (!cur->is_object()) {
                throw ValidationError("override path '" + path + "': '" + text +
                                      "' applied to a non-object");
            }
            if (!last && !cur->contains(text)) {
                throw ValidationError("override path '" + path + "': no such field '" + text +
                                      "'");
            }
            cur = &(*cur)[text];
        }
        if (last) {
            nlohmann::json value;
            try {
                value = nlohmann::json::parse(raw);
            } catch (const nlohmann::json::parse_error&) {
                value = raw; // bare string
            }
            *cur = std::move(value);
        }
    }
}

} // namespace bksim
