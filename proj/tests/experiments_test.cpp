#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "bksim/experiments.hpp"
#include "bksim/presets.hpp"

using namespace bksim;
using Catch::Approx;

TEST_CASE("range search brackets the sensitivity boundary")
{
    const Scenario base = preset_scenario("fig7-outdoor-24");
    const RangeResult r = max_range_search(base, RangeMode::ReceiverOnly);
    REQUIRE(r.max_range_m > 0.0);

    // the reported distance decodes, one resolution step beyond it does not
    const Scenario at = detail::at_distance(base, RangeMode::ReceiverOnly, 0, r.max_range_m);
    REQUIRE(expected_link(at).above_sensitivity);
    const Scenario beyond = detail::at_distance(base, RangeMode::ReceiverOnly, 0,
                                                r.max_range_m + 2.0 * r.resolution_m);
    REQUIRE_FALSE(expected_link(beyond).above_sensitivity);
}

TEST_CASE("range search agrees with the closed-form budget")
{
    // At max range the product d1*d2 satisfies the sensitivity equality, so
    // d2 = product_limit / d1 with d1 = 1 m.
    const Scenario base = preset_scenario("fig7-outdoor-24");
    const Tag& tag = base.tags.front();
    const CarrierGenerator& cg = base.carriers.front();
    const double budget = cg.tx_power.dbm + tag.k_factor.db - tag.excess_loss.db -
                          tag.per_product_loss.db -
                          base.receivers.front().profile.sensitivity.dbm;
    const double radar_const = 30.0 * std::log10(4.0 * M_PI) +
                               20.0 * std::log10(cg.center.hz / speed_of_light);
    const double product_limit = std::pow(10.0, (budget - radar_const) / 20.0);
    const double d1 = distance(cg.position, tag.position).m;

    const RangeResult r = max_range_search(base, RangeMode::ReceiverOnly);
    REQUIRE(r.max_range_m == Approx(product_limit / d1).margin(2.0 * r.resolution_m));
}

TEST_CASE("equidistant range search keeps the tag midway")
{
    const Scenario base = preset_scenario("fig3-mono-bi");
    const Scenario at = detail::at_distance(base, RangeMode::Equidistant, 0, 25.0);
    const double d1 = distance(at.carriers.front().position, at.tags.front().position).m;
    const double d2 = distance(at.tags.front().position, at.receivers.front().position).m;
    REQUIRE(d1 == Approx(25.0));
    REQUIRE(d2 == Approx(25.0));
}

TEST_CASE("line profile dips at the midpoint and is symmetric")
{
    const Scenario base = preset_scenario("fig3-mono-bi");
    const auto profile = line_profile(base, 101);
    REQUIRE(profile.size() == 101);

    std::size_t min_index = 0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        if (profile[i].second < profile[min_index].second) min_index = i;
    }
    REQUIRE(min_index == 50);
    REQUIRE(profile[50].first == Approx(10.0)); // midpoint of the 20 m baseline

    SECTION("mirror positions receive equal power")
    {
        for (std::size_t i = 0; i < 50; ++i) {
            REQUIRE(profile[i].second == Approx(profile[100 - i].second).margin(1e-9));
        }
    }
    SECTION("edges beat the midpoint by the d1*d2 product ratio")
    {
        const double span = 20.0;
        const double t0 = span * 1.0 / 102.0;
        const double expected =
            20.0 * std::log10((span / 2.0) * (span / 2.0) / (t0 * (span - t0)));
        const double measured = profile.front().second - profile[50].second;
        REQUIRE(measured == Approx(expected).margin(1e-9));
        REQUIRE(measured >= 10.0);
    }
}

TEST_CASE("tag distance helper moves only the tag")
{
    const Scenario base = preset_scenario("fig7-outdoor-24");
    const Scenario moved = with_tag_distance(base, 6.0);
    REQUIRE(distance(moved.carriers.front().position, moved.tags.front().position).m ==
            Approx(6.0));
    REQUIRE(moved.receivers.front().position == base.receivers.front().position);
    REQUIRE(moved.carriers.front().position == base.carriers.front().position);
}

TEST_CASE("profile swap helper")
{
    const Scenario base = preset_scenario("fig3-mono-bi");
    const Scenario swapped = with_profile(base, "rfid-mono");
    REQUIRE(swapped.receivers.front().profile.name == "rfid-mono");
    REQUIRE(swapped.receivers.front().profile.sensitivity.dbm == Approx(-84.0));
    REQUIRE_THROWS_AS(with_profile(base, "no-such-profile"), ValidationError);
}

TEST_CASE("sweep evaluates the grid and the optional monte carlo runs")
{
    const Scenario base = preset_scenario("fig7-outdoor-24");
    SweepSpec spec;
    spec.parameter = "nodes[0].tx_power_dbm";
    spec.values = {26.0, 10.0, -20.0};
    spec.seeds = {1, 2};

    const auto points = run_sweep(base, spec);
    REQUIRE(points.size() == 3);
    REQUIRE(points[0].signal_dbm > points[1].signal_dbm);
    REQUIRE(points[1].signal_dbm > points[2].signal_dbm);
    // 16 dB less carrier power shifts the product by exactly 16 dB
    REQUIRE(points[0].signal_dbm - points[1].signal_dbm == Approx(16.0).margin(1e-9));

    REQUIRE(points[0].above_sensitivity);
    REQUIRE(points[0].success);
    REQUIRE(points[0].mean_prr == Approx(1.0));
    REQUIRE(points[0].std_prr == Approx(0.0).margin(1e-12));

    // -20 dBm carrier cannot close a 20 m link
    REQUIRE_FALSE(points[2].above_sensitivity);
    REQUIRE(points[2].ber == 0.5);
    REQUIRE(points[2].per == 1.0);
    REQUIRE(points[2].mean_prr == Approx(0.0).margin(1e-12));
}

TEST_CASE("sweep rejects an empty parameter path")
{
    const Scenario base = preset_scenario("fig7-outdoor-24");
    REQUIRE_THROWS_AS(run_sweep(base, SweepSpec{}), ValidationError);
}

TEST_CASE("avoidance analysis on a synthetic report")
{
    SimReport rep;
    rep.window_size = 20;
    const auto add_window = [&](double t_end, double prr) {
        WindowRow row;
        row.time = t_end;
        row.receiver_id = "rx";
        row.prr = prr;
        rep.rows.push_back(row);
    };
    // clean, onset, pending, recovered, clean
    add_window(5.0, 1.0);
    add_window(10.0, 0.1);
    add_window(15.0, 0.0);
    add_window(20.0, 1.0);
    add_window(25.0, 1.0);
    rep.events.push_back({10.0, "hop_command", "a->b"});
    rep.events.push_back({15.0, "retune", "a->b"});

    const AvoidanceAnalysis a = analyze_avoidance(rep, "rx");
    REQUIRE(a.onset_times.size() == 1);
    REQUIRE(a.onset_times.front() == Approx(5.0));
    REQUIRE(a.command_times == std::vector<double>{10.0});
    REQUIRE(a.retune_times == std::vector<double>{15.0});
    REQUIRE(a.one_command_per_onset);
    REQUIRE(a.recovered_after_each_retune);
    REQUIRE(a.pass);

    SECTION("a second command for one onset fails the check")
    {
        rep.events.push_back({12.5, "hop_command", "b->c"});
        const AvoidanceAnalysis b = analyze_avoidance(rep, "rx");
        REQUIRE_FALSE(b.one_command_per_onset);
        REQUIRE_FALSE(b.pass);
    }
    SECTION("late recovery fails the check")
    {
        rep.rows[3].prr = 0.2; // still jammed two windows after the retune
        rep.rows[4].prr = 0.2;
        const AvoidanceAnalysis b = analyze_avoidance(rep, "rx");
        REQUIRE_FALSE(b.recovered_after_each_retune);
    }
}

TEST_CASE("experiment registry covers every preset")
{
    for (const auto& id : preset_ids()) {
        INFO(id);
        REQUIRE_NOTHROW(preset_scenario(id));
    }
    REQUIRE_THROWS_AS(run_experiment("not-a-preset"), ValidationError);
}

TEST_CASE("through-wall experiment verdicts")
{
    const ExperimentResult r = run_experiment("fig5-throughwall");
    REQUIRE(r.all_pass);
    REQUIRE(r.csv.rfind("series,value,signal_dbm", 0) == 0);
    bool saw_range = false;
    for (const auto& v : r.verdicts) {
        if (v.name == "max_range_m") {
            saw_range = true;
            REQUIRE(v.value >= v.low);
            REQUIRE(v.value <= v.high);
        }
    }
    REQUIRE(saw_range);
    REQUIRE(r.summary["preset"] == "fig5-throughwall");
    REQUIRE(r.summary["pass"] == true);
}

TEST_CASE("floor-stack experiment closes at four floors and fails at five")
{
    const ExperimentResult r = run_experiment("fig11-floors-868");
    REQUIRE(r.verdicts.size() == 2);
    for (const auto& v : r.verdicts) {
        INFO(v.name);
        REQUIRE(v.pass);
    }
}
