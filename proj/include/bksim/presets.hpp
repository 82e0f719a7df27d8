#pragma once

// Shipped scenario presets. The same JSON text is embedded here and stored
// under presets/ in the source tree; a test keeps the two byte-identical.
// Geometry notes: indoor deployments keep the tag 0.16 m from the carrier
// generator (the measured spacing the deployments used); outdoor links use
// 1 m. Where a terrain is only loosely described, the preset approximates
// it with free space plus the path-loss exponent and says so in its
// description.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bksim/scenario.hpp"
#include "bksim/scenario_io.hpp"

namespace bksim {

namespace presets {

inline constexpr const char* fig3_mono_bi = R"json({
  "schema_version": 1,
  "id": "fig3-mono-bi",
  "description": "Carrier, tag and receiver on a 20 m line with the tag at the midpoint. Base geometry for the received-power profile along the line and for equidistant (d1 = d2) range searches.",
  "band": "SRD-868",
  "nodes": [
    { "id": "carrier", "role": "carrier_generator", "position": [0.0, 0.0, 1.5], "tx_power_dbm": 28.0, "center_hz": 868000000.0 },
    { "id": "tag", "role": "tag", "position": [10.0, 0.0, 1.5] },
    { "id": "rx", "role": "receiver", "position": [20.0, 0.0, 1.5], "profile": "LoRea-868" }
  ]
})json";

inline constexpr const char* fig7_outdoor_24 = R"json({
  "schema_version": 1,
  "id": "fig7-outdoor-24",
  "description": "2.4 GHz outdoor line-of-sight link: tag 1 m from the carrier generator, receiver 20 m further along the line. Base scenario for low-rate range searches and distance sweeps.",
  "band": "ISM-2.4",
  "nodes": [
    { "id": "carrier", "role": "carrier_generator", "position": [0.0, 0.0, 1.5], "tx_power_dbm": 26.0, "center_hz": 2450000000.0 },
    { "id": "tag", "role": "tag", "position": [1.0, 0.0, 1.5] },
    { "id": "rx", "role": "receiver", "position": [21.0, 0.0, 1.5], "profile": "LoRea-2.4" }
  ]
})json";

inline constexpr const char* fig5_throughwall = R"json({
  "schema_version": 1,
  "id": "fig5-throughwall",
  "description": "Office corridor at 2.4 GHz: eight plasterboard walls at 5 m room spacing between the tag and a receiver 40 m away. Wall attenuation uses the calibrated default.",
  "band": "ISM-2.4",
  "nodes": [
    { "id": "carrier", "role": "carrier_generator", "position": [0.0, 0.0, 1.5], "tx_power_dbm": 26.0, "center_hz": 2450000000.0 },
    { "id": "tag", "role": "tag", "position": [0.16, 0.0, 1.5] },
    { "id": "rx", "role": "receiver", "position": [40.0, 0.0, 1.5], "profile": "LoRea-2.4" }
  ],
  "obstacles": [
    { "kind": "wall", "x1": 2.5, "y1": -10.0, "x2": 2.5, "y2": 10.0 },
    { "kind": "wall", "x1": 7.5, "y1": -10.0, "x2": 7.5, "y2": 10.0 },
    { "kind": "wall", "x1": 12.5, "y1": -10.0, "x2": 12.5, "y2": 10.0 },
    { "kind": "wall", "x1": 17.5, "y1": -10.0, "x2": 17.5, "y2": 10.0 },
    { "kind": "wall", "x1": 22.5, "y1": -10.0, "x2": 22.5, "y2": 10.0 },
    { "kind": "wall", "x1": 27.5, "y1": -10.0, "x2": 27.5, "y2": 10.0 },
    { "kind": "wall", "x1": 32.5, "y1": -10.0, "x2": 32.5, "y2": 10.0 },
    { "kind": "wall", "x1": 37.5, "y1": -10.0, "x2": 37.5, "y2": 10.0 }
  ]
})json";

inline constexpr const char* fig6_roomtoroom = R"json({
  "schema_version": 1,
  "id": "fig6-roomtoroom",
  "description": "Room-to-room 2.4 GHz link: carrier and tag in one room, receiver two walls away at 10 m.",
  "band": "ISM-2.4",
  "nodes": [
    { "id": "carrier", "role": "carrier_generator", "position": [0.0, 0.0, 1.5], "tx_power_dbm": 26.0, "center_hz": 2450000000.0 },
    { "id": "tag", "role": "tag", "position": [0.16, 0.0, 1.5] },
    { "id": "rx", "role": "receiver", "position": [10.0, 0.0, 1.5], "profile": "LoRea-2.4" }
  ],
  "obstacles": [
    { "kind": "wall", "x1": 2.5, "y1": -5.0, "x2": 2.5, "y2": 5.0 },
    { "kind": "wall", "x1": 7.5, "y1": -5.0, "x2": 7.5, "y2": 5.0 }
  ]
})json";

inline constexpr const char* fig8_fast = R"json({
  "schema_version": 1,
  "id": "fig8-fast",
  "description": "High-rate variant of the 2.4 GHz outdoor link: 197 kbps through the wide-bandwidth profile, identical geometry to fig7-outdoor-24 for range comparisons.",
  "band": "ISM-2.4",
  "nodes": [
    { "id": "carrier", "role": "carrier_generator", "position": [0.0, 0.0, 1.5], "tx_power_dbm": 26.0, "center_hz": 2450000000.0 },
    { "id": "tag", "role": "tag", "position": [1.0, 0.0, 1.5], "bitrate_bps": 197000.0 },
    { "id": "rx", "role": "receiver", "position": [21.0, 0.0, 1.5], "profile": "LoRea-2.4-fast" }
  ]
})json";

inline constexpr const char* fig10_river_868 = R"json({
  "schema_version": 1,
  "id": "fig10-river-868",
  "description": "Long-range 868 MHz crossing over open water, approximated as free space: tag 1 m from the 28 dBm carrier generator, receiver on the far bank at 500 m. Range searches extend the receiver distance to the sensitivity limit.",
  "band": "SRD-868",
  "nodes": [
    { "id": "carrier", "role": "carrier_generator", "position": [0.0, 0.0, 2.0], "tx_power_dbm": 28.0, "center_hz": 868000000.0 },
    { "id": "tag", "role": "tag", "position": [1.0, 0.0, 2.0] },
    { "id": "rx", "role": "receiver", "position": [500.0, 0.0, 2.0], "profile": "LoRea-868" }
  ]
})json";

inline constexpr const char* fig11_floors_868 = R"json({
  "schema_version": 1,
  "id": "fig11-floors-868",
  "description": "Vertical 868 MHz link through four reinforced-concrete floors at 2.8 m storey height; the receiver sits four storeys above the tag. Adding a fifth floor takes the link below sensitivity.",
  "band": "SRD-868",
  "nodes": [
    { "id": "carrier", "role": "carrier_generator", "position": [0.0, 0.0, 1.2], "tx_power_dbm": 28.0, "center_hz": 868000000.0 },
    { "id": "tag", "role": "tag", "position": [0.16, 0.0, 1.2] },
    { "id": "rx", "role": "receiver", "position": [0.16, 0.0, 12.4], "profile": "LoRea-868" }
  ],
  "obstacles": [
    { "kind": "floor", "z": 2.8 },
    { "kind": "floor", "z": 5.6 },
    { "kind": "floor", "z": 8.4 },
    { "kind": "floor", "z": 11.2 }
  ]
})json";

inline constexpr const char* fig12_unison = R"json({
  "schema_version": 1,
  "id": "fig12-unison",
  "description": "Three carrier generators on distinct 2.4 GHz channels around one tag, three co-located receivers each tuned to one backscatter product, and a wideband interferer parked on the middle channel. Reception succeeds if any receiver decodes the packet.",
  "band": "ISM-2.4",
  "nodes": [
    { "id": "carrier-1", "role": "carrier_generator", "position": [0.16, 0.0, 1.0], "tx_power_dbm": 26.0, "center_hz": 2412000000.0 },
    { "id": "carrier-2", "role": "carrier_generator", "position": [0.0, 0.16, 1.0], "tx_power_dbm": 26.0, "center_hz": 2442000000.0 },
    { "id": "carrier-3", "role": "carrier_generator", "position": [-0.16, 0.0, 1.0], "tx_power_dbm": 26.0, "center_hz": 2467000000.0 },
    { "id": "tag", "role": "tag", "position": [0.0, 0.0, 1.0] },
    { "id": "rx-1", "role": "receiver", "position": [4.0, 0.0, 1.0], "tuned_hz": 2414000000.0, "profile": "LoRea-2.4" },
    { "id": "rx-2", "role": "receiver", "position": [4.0, 0.0, 1.0], "tuned_hz": 2444000000.0, "profile": "LoRea-2.4" },
    { "id": "rx-3", "role": "receiver", "position": [4.0, 0.0, 1.0], "tuned_hz": 2469000000.0, "profile": "LoRea-2.4" },
    { "id": "wifi", "role": "interferer", "position": [3.0, 1.0, 1.0], "tx_power_dbm": 20.0, "center_hz": 2442000000.0, "bandwidth_hz": 20000000.0 }
  ]
})json";

inline constexpr const char* fig13_avoidance = R"json({
  "schema_version": 1,
  "id": "fig13-avoidance",
  "description": "Interference avoidance at 2.4 GHz: a wideband interferer sweeps across three channels every 30 s while the receiver-side monitor commands the carrier generator to hop away whenever the 20-packet window PRR falls below 0.5.",
  "band": "ISM-2.4",
  "duration_s": 90.0,
  "nodes": [
    { "id": "carrier", "role": "carrier_generator", "position": [0.0, 0.0, 1.0], "tx_power_dbm": 26.0, "center_hz": 2412000000.0 },
    { "id": "tag", "role": "tag", "position": [0.16, 0.0, 1.0] },
    { "id": "rx", "role": "receiver", "position": [4.0, 0.0, 1.0], "tuned_hz": 2414000000.0, "profile": "LoRea-2.4" },
    { "id": "wifi", "role": "interferer", "position": [3.0, 1.0, 1.0], "tx_power_dbm": 20.0, "center_hz": 2412000000.0, "bandwidth_hz": 20000000.0, "hop_schedule": [[30.0, 2442000000.0], [60.0, 2467000000.0]] }
  ],
  "avoidance": {
    "window_size": 20,
    "prr_threshold": 0.5,
    "channel_list_hz": [2412000000.0, 2442000000.0, 2467000000.0],
    "hop_latency_windows": 1,
    "carrier_id": "carrier",
    "receiver_id": "rx"
  }
})json";

inline constexpr const char* parking_mobile_reader = R"json({
  "schema_version": 1,
  "id": "parking-mobile-reader",
  "description": "Parking-deck occupancy snapshot: a kerbside carrier generator illuminates a tag on a parking spot while a vehicle-mounted receiver passes 12 m away. Deck structure is approximated as free space.",
  "band": "ISM-2.4",
  "nodes": [
    { "id": "kerb-carrier", "role": "carrier_generator", "position": [0.0, 0.0, 1.0], "tx_power_dbm": 26.0, "center_hz": 2450000000.0 },
    { "id": "spot-tag", "role": "tag", "position": [1.0, 0.0, 0.5] },
    { "id": "car-rx", "role": "receiver", "position": [12.0, 2.0, 1.5], "profile": "LoRea-2.4" }
  ]
})json";

inline constexpr const char* concrete_embedded = R"json({
  "schema_version": 1,
  "id": "concrete-embedded",
  "description": "Structure-health reading at 868 MHz: the tag is cast behind a 10 dB concrete slab, interrogated by an external carrier generator and a handheld receiver 8 m away.",
  "band": "SRD-868",
  "nodes": [
    { "id": "carrier", "role": "carrier_generator", "position": [0.0, 0.0, 1.0], "tx_power_dbm": 28.0, "center_hz": 868000000.0 },
    { "id": "tag", "role": "tag", "position": [0.3, 0.0, 0.2] },
    { "id": "rx", "role": "receiver", "position": [8.0, 0.0, 1.0], "profile": "LoRea-868" }
  ],
  "obstacles": [
    { "kind": "wall", "attenuation_db": 10.0, "x1": 1.0, "y1": -3.0, "x2": 1.0, "y2": 3.0, "z_min": 0.0, "z_max": 2.0 }
  ]
})json";

} // namespace presets

inline const std::vector<std::pair<std::string, const char*>>& preset_table()
{
    static const std::vector<std::pair<std::string, const char*>> table = {
        {"fig3-mono-bi", presets::fig3_mono_bi},
        {"fig7-outdoor-24", presets::fig7_outdoor_24},
        {"fig5-throughwall", presets::fig5_throughwall},
        {"fig6-roomtoroom", presets::fig6_roomtoroom},
        {"fig8-fast", presets::fig8_fast},
        {"fig10-river-868", presets::fig10_river_868},
        {"fig11-floors-868", presets::fig11_floors_868},
        {"fig12-unison", presets::fig12_unison},
        {"fig13-avoidance", presets::fig13_avoidance},
        {"parking-mobile-reader", presets::parking_mobile_reader},
        {"concrete-embedded", presets::concrete_embedded},
    };
    return table;
}

// Aliases accepted for historical preset names.
inline const std::map<std::string, std::string>& preset_aliases()
{
    static const std::map<std::string, std::string> aliases = {
        {"fig7-outdoor-868", "fig10-river-868"},
        {"fig13-unison", "fig12-unison"},
        {"fig14-avoidance", "fig13-avoidance"},
    };
    return aliases;
}

inline std::optional<std::string> preset_text(const std::string& id)
{
    std::string key = id;
    if (auto it = preset_aliases().find(key); it != preset_aliases().end()) {
        key = it->second;
    }
    for (const auto& [name, text] : preset_table()) {
        if (name == key) return std::string(text);
    }
    return std::nullopt;
}

inline Scenario preset_scenario(const std::string& id)
{
    auto text = preset_text(id);
    if (!text) {
        throw ValidationError("unknown preset '" + id + "'");
    }
    return load_scenario(*text);
}

inline std::vector<std::string> preset_ids()
{
    std::vector<std::string> ids;
    for (const auto& [name, text] : preset_table()) ids.push_back(name);
    return ids;
}

} // namespace bksim
