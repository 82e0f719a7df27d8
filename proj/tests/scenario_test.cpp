#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "bksim/scenario_io.hpp"

using namespace bksim;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

const char* minimal_24 = R"({
  "schema_version": 1,
  "id": "mini",
  "nodes": [
    { "id": "cg", "role": "carrier_generator", "position": [0, 0, 1],
      "tx_power_dbm": 26.0, "center_hz": 2450e6 },
    { "id": "tag", "role": "tag", "position": [1, 0, 1] },
    { "id": "rx", "role": "receiver", "position": [10, 0, 1] }
  ]
})";

const char* minimal_868 = R"({
  "schema_version": 1,
  "id": "mini868",
  "band": "SRD-868",
  "nodes": [
    { "id": "cg", "role": "carrier_generator", "position": [0, 0, 1],
      "tx_power_dbm": 28.0, "center_hz": 868e6 },
    { "id": "tag", "role": "tag", "position": [1, 0, 1] },
    { "id": "rx", "role": "receiver", "position": [10, 0, 1] }
  ]
})";

} // namespace

TEST_CASE("minimal 2.4 GHz document fills band-appropriate defaults")
{
    const Scenario s = load_scenario(minimal_24);
    REQUIRE(s.id == "mini");
    REQUIRE(s.band == band_ism24());
    REQUIRE(s.path_loss_exponent == 2.0);
    REQUIRE(s.duration_s == 20.0);
    REQUIRE(s.time_step_s == 1.0);
    REQUIRE(s.seed == 1);
    REQUIRE(s.packet_spec.payload_bytes == 64);
    REQUIRE(s.packet_spec.inter_packet_gap_s == 0.25);

    REQUIRE(s.tags.size() == 1);
    const Tag& t = s.tags.front();
    REQUIRE(t.delta_f.hz == Approx(2.0e6));
    REQUIRE(t.fsk_deviation.hz == Approx(190.0e3));
    REQUIRE(t.bitrate_bps == Approx(2900.0));
    REQUIRE(t.power_draw_uw == Approx(650.0));
    REQUIRE(t.k_factor.db == Approx(-3.0));
    REQUIRE(t.excess_loss.db == Approx(30.0));
    REQUIRE(t.per_product_loss.db == Approx(3.0));

    REQUIRE(s.receivers.size() == 1);
    const Receiver& r = s.receivers.front();
    REQUIRE(r.profile.name == "LoRea-2.4");
    // default tuning: first carrier plus the first tag's offset
    REQUIRE(r.tuned.hz == Approx(2452.0e6));
}

TEST_CASE("minimal 868 MHz document picks the sub-GHz defaults")
{
    const Scenario s = load_scenario(minimal_868);
    REQUIRE(s.band == band_srd868());
    REQUIRE(s.tags.front().delta_f.hz == Approx(100.0e3));
    REQUIRE(s.tags.front().fsk_deviation.hz == Approx(13.0e3));
    REQUIRE(s.tags.front().power_draw_uw == Approx(70.0));
    REQUIRE(s.receivers.front().profile.name == "LoRea-868");
    REQUIRE(s.receivers.front().tuned.hz == Approx(868.1e6));
}

TEST_CASE("duplicate node ids are rejected with both declaration sites")
{
    const std::string doc = R"({
      "schema_version": 1,
      "nodes": [
        { "id": "cg", "role": "carrier_generator", "position": [0,0,1],
          "tx_power_dbm": 26.0, "center_hz": 2450e6 },
        { "id": "tag", "role": "tag", "position": [1,0,1] },
        { "id": "cg", "role": "receiver", "position": [10,0,1] }
      ]
    })";
    REQUIRE_THROWS_MATCHES(load_scenario(doc), ValidationError,
                           Catch::Matchers::MessageMatches(
                               ContainsSubstring("$.nodes[2].id") &&
                               ContainsSubstring("$.nodes[0].id") &&
                               ContainsSubstring("duplicate")));
}

TEST_CASE("unknown fields are rejected, not ignored")
{
    SECTION("top level")
    {
        const std::string doc = R"({
          "schema_version": 1,
          "carrier_power": 30.0,
          "nodes": [
            { "id": "cg", "role": "carrier_generator", "position": [0,0,1],
              "tx_power_dbm": 26.0, "center_hz": 2450e6 },
            { "id": "tag", "role": "tag", "position": [1,0,1] },
            { "id": "rx", "role": "receiver", "position": [10,0,1] }
          ]
        })";
        REQUIRE_THROWS_MATCHES(
            load_scenario(doc), ValidationError,
            Catch::Matchers::MessageMatches(ContainsSubstring("carrier_power")));
    }
    SECTION("inside a node")
    {
        const std::string doc = R"({
          "schema_version": 1,
          "nodes": [
            { "id": "cg", "role": "carrier_generator", "position": [0,0,1],
              "tx_power_dbm": 26.0, "center_hz": 2450e6, "freq_hz": 1.0 },
            { "id": "tag", "role": "tag", "position": [1,0,1] },
            { "id": "rx", "role": "receiver", "position": [10,0,1] }
          ]
        })";
        REQUIRE_THROWS_MATCHES(
            load_scenario(doc), ValidationError,
            Catch::Matchers::MessageMatches(ContainsSubstring("freq_hz")));
    }
}

TEST_CASE("schema version is mandatory and checked")
{
    REQUIRE_THROWS_AS(load_scenario(R"({"nodes": []})"), ValidationError);
    REQUIRE_THROWS_MATCHES(
        load_scenario(R"({"schema_version": 2, "nodes": []})"), ValidationError,
        Catch::Matchers::MessageMatches(ContainsSubstring("schema version")));
    REQUIRE_THROWS_AS(load_scenario("not json at all"), ValidationError);
}

TEST_CASE("obstacle defaults and accumulation")
{
    std::string doc = R"({
      "schema_version": 1,
      "nodes": [
        { "id": "cg", "role": "carrier_generator", "position": [0,0,1.5],
          "tx_power_dbm": 26.0, "center_hz": 2450e6 },
        { "id": "tag", "role": "tag", "position": [0.16,0,1.5] },
        { "id": "rx", "role": "receiver", "position": [40,0,1.5] }
      ],
      "obstacles": [)";
    for (int k = 0; k < 8; ++k) {
        const double x = 2.5 + 5.0 * k;
        doc += (k ? "," : "");
        doc += "{\"kind\":\"wall\",\"x1\":" + std::to_string(x) +
               ",\"y1\":-10,\"x2\":" + std::to_string(x) + ",\"y2\":10}";
    }
    doc += "]}";

    const Scenario s = load_scenario(doc);
    REQUIRE(s.obstacles.size() == 8);
    for (const auto& o : s.obstacles) {
        REQUIRE(o.attenuation.db == Approx(default_wall_attenuation_db));
    }
    const Vec3 a = s.tags.front().position;
    const Vec3 b = s.receivers.front().position;
    REQUIRE(crossings(a, b, s.obstacles) == 8);
    REQUIRE(obstacle_loss(a, b, s.obstacles).db == Approx(8 * 3.0));
    // the carrier-to-tag hop stays inside the first room
    REQUIRE(crossings(s.carriers.front().position, a, s.obstacles) == 0);
}

TEST_CASE("floor stack accumulates per crossing")
{
    std::vector<Obstacle> floors;
    for (double z : {2.8, 5.6, 8.4, 11.2}) {
        Obstacle f;
        f.kind = ObstacleKind::Floor;
        f.attenuation.db = default_floor_attenuation_db;
        f.z = z;
        floors.push_back(f);
    }
    const Vec3 bottom{0.16, 0.0, 1.2}, top{0.16, 0.0, 12.4};
    REQUIRE(crossings(bottom, top, floors) == 4);
    REQUIRE(obstacle_loss(bottom, top, floors).db == Approx(60.0));
    REQUIRE(crossings(top, bottom, floors) == 4); // direction-independent
}

TEST_CASE("crossing boundary semantics")
{
    Obstacle wall;
    wall.kind = ObstacleKind::Wall;
    wall.attenuation.db = 3.0;
    wall.x1 = 0.0;
    wall.y1 = -1.0;
    wall.x2 = 0.0;
    wall.y2 = 1.0;
    wall.z_min = 0.0;
    wall.z_max = 3.0;
    const std::vector<Obstacle> obs{wall};

    SECTION("plain crossing counts in both directions")
    {
        REQUIRE(crossings({-1, 0, 1}, {1, 0, 1}, obs) == 1);
        REQUIRE(crossings({1, 0, 1}, {-1, 0, 1}, obs) == 1);
    }
    SECTION("footprint interval is closed at the near end, open at the far end")
    {
        REQUIRE(crossings({-1, -1, 1}, {1, -1, 1}, obs) == 1); // u = 0
        REQUIRE(crossings({-1, 1, 1}, {1, 1, 1}, obs) == 0);   // u = 1
    }
    SECTION("height interval is closed at z_min, open at z_max")
    {
        REQUIRE(crossings({-1, 0, 0}, {1, 0, 0}, obs) == 1);
        REQUIRE(crossings({-1, 0, 3}, {1, 0, 3}, obs) == 0);
        REQUIRE(crossings({-1, 0, 4}, {1, 0, 4}, obs) == 0);
    }
    SECTION("paths parallel to the wall never cross")
    {
        REQUIRE(crossings({-1, -5, 1}, {-1, 5, 1}, obs) == 0);
        REQUIRE(crossings({0, -5, 1}, {0, 5, 1}, obs) == 0); // collinear
    }

    Obstacle floor;
    floor.kind = ObstacleKind::Floor;
    floor.attenuation.db = 15.0;
    floor.z = 2.0;
    const std::vector<Obstacle> fl{floor};
    SECTION("floor plane: closed from below, open from above")
    {
        REQUIRE(crossings({0, 0, 2}, {0, 0, 5}, fl) == 1);
        REQUIRE(crossings({0, 0, 0}, {0, 0, 2}, fl) == 0);
        REQUIRE(crossings({0, 0, 1}, {0, 0, 3}, fl) == 1);
        REQUIRE(crossings({0, 0, 3}, {0, 0, 1}, fl) == 1); // symmetric
    }
}

TEST_CASE("serialization round trip is lossless")
{
    const std::string doc = R"({
      "schema_version": 1,
      "id": "rt",
      "description": "round trip",
      "band": "SRD-868",
      "duration_s": 30.0,
      "seed": 9,
      "nodes": [
        { "id": "cg", "role": "carrier_generator", "position": [0,0,1.5],
          "tx_power_dbm": 28.0, "center_hz": 868e6,
          "on_intervals": [[0, 10], [20, 30]] },
        { "id": "tag", "role": "tag", "position": [1,0,1.5], "delta_f_hz": 100e3 },
        { "id": "rx", "role": "receiver", "position": [10,0,1.5], "antenna_gain_dbi": 2.0 },
        { "id": "jam", "role": "interferer", "position": [5,5,1.5],
          "tx_power_dbm": 20.0, "center_hz": 868.05e6, "bandwidth_hz": 200e3,
          "duty_cycle": 0.5, "hop_schedule": [[10, 868.2e6]] }
      ],
      "obstacles": [
        { "kind": "wall", "x1": 3, "y1": -4, "x2": 3, "y2": 4 },
        { "kind": "floor", "z": 3.1, "attenuation_db": 12.0 }
      ],
      "avoidance": {
        "channel_list_hz": [868e6, 868.2e6],
        "carrier_id": "cg", "receiver_id": "rx"
      }
    })";
    const Scenario s1 = load_scenario(doc);
    const std::string text1 = serialize_scenario(s1);
    const Scenario s2 = load_scenario(text1);
    REQUIRE(s1 == s2);
    REQUIRE(serialize_scenario(s2) == text1);
}

TEST_CASE("override assignments")
{
    nlohmann::json doc = nlohmann::json::parse(minimal_24);

    SECTION("scalar replacement")
    {
        apply_override(doc, "nodes[0].tx_power_dbm=20");
        REQUIRE(doc["nodes"][0]["tx_power_dbm"].get<double>() == Approx(20.0));
        REQUIRE_NOTHROW(detail::scenario_from_json(doc));
    }
    SECTION("array value")
    {
        apply_override(doc, "nodes[2].position=[0,0,2]");
        const Scenario s = detail::scenario_from_json(doc);
        REQUIRE(s.receivers.front().position == Vec3{0.0, 0.0, 2.0});
    }
    SECTION("creating a field the schema accepts")
    {
        apply_override(doc, "duration_s=40");
        const Scenario s = detail::scenario_from_json(doc);
        REQUIRE(s.duration_s == Approx(40.0));
    }
    SECTION("strings fall back to bare text")
    {
        apply_override(doc, "description=hello world");
        REQUIRE(doc["description"].get<std::string>() == "hello world");
    }
    SECTION("bad paths fail loudly")
    {
        REQUIRE_THROWS_AS(apply_override(doc, "nodes[9].id=x"), ValidationError);
        REQUIRE_THROWS_AS(apply_override(doc, "nodes[0.id=x"), ValidationError);
        REQUIRE_THROWS_AS(apply_override(doc, "=5"), ValidationError);
        REQUIRE_THROWS_AS(apply_override(doc, "no_equals_sign"), ValidationError);
    }
    SECTION("an override that breaks validation is caught downstream")
    {
        apply_override(doc, "nodes[0].center_hz=-1");
        REQUIRE_THROWS_AS(detail::scenario_from_json(doc), ValidationError);
    }
}

TEST_CASE("packet airtime must fit the slot")
{
    const std::string doc = R"({
      "schema_version": 1,
      "packet_spec": { "payload_bytes": 256, "inter_packet_gap_s": 0.25 },
      "nodes": [
        { "id": "cg", "role": "carrier_generator", "position": [0,0,1],
          "tx_power_dbm": 26.0, "center_hz": 2450e6 },
        { "id": "tag", "role": "tag", "position": [1,0,1] },
        { "id": "rx", "role": "receiver", "position": [10,0,1] }
      ]
    })";
    // 2048 bits at 2.9 kbps is ~0.7 s of airtime, longer than the slot
    REQUIRE_THROWS_MATCHES(
        load_scenario(doc), ValidationError,
        Catch::Matchers::MessageMatches(ContainsSubstring("airtime")));
}

TEST_CASE("interferer schedule helpers")
{
    Interferer f;
    f.center.hz = 2412.0e6;
    f.hop_schedule = {{30.0, {2442.0e6}}, {60.0, {2467.0e6}}};
    REQUIRE(f.center_at(0.0).hz == Approx(2412.0e6));
    REQUIRE(f.center_at(29.999).hz == Approx(2412.0e6));
    REQUIRE(f.center_at(30.0).hz == Approx(2442.0e6));
    REQUIRE(f.center_at(59.0).hz == Approx(2442.0e6));
    REQUIRE(f.center_at(60.0).hz == Approx(2467.0e6));
    REQUIRE(f.center_at(1.0e4).hz == Approx(2467.0e6));

    f.duty_cycle = 0.25;
    REQUIRE(f.active_at(0.0, 1.0));
    REQUIRE(f.active_at(0.24, 1.0));
    REQUIRE_FALSE(f.active_at(0.25, 1.0));
    REQUIRE_FALSE(f.active_at(0.9, 1.0));
    REQUIRE(f.active_at(1.1, 1.0)); // next period
    f.duty_cycle = 0.0;
    REQUIRE_FALSE(f.active_at(0.0, 1.0));
    f.duty_cycle = 1.0;
    REQUIRE(f.active_at(0.99, 1.0));
}

TEST_CASE("carrier on intervals")
{
    CarrierGenerator cg;
    REQUIRE(cg.active_at(123.0)); // empty schedule = always on
    cg.on_intervals = {{0.0, 10.0}, {20.0, 30.0}};
    REQUIRE(cg.active_at(0.0));
    REQUIRE(cg.active_at(9.999));
    REQUIRE_FALSE(cg.active_at(10.0)); // half-open
    REQUIRE_FALSE(cg.active_at(15.0));
    REQUIRE(cg.active_at(20.0));
    REQUIRE_FALSE(cg.active_at(30.0));
}
