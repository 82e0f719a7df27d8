// Command-line frontend: validate and run scenarios, sweep parameters and
// run the shipped experiments. Exit codes: 0 success, 1 validation error
// (bad scenario, unknown preset, bad override), 2 runtime failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bksim/engine.hpp"
#include "bksim/experiments.hpp"
#include "bksim/presets.hpp"
#include "bksim/report_io.hpp"
#include "bksim/scenario_io.hpp"

namespace {

// Timestamps appear in file names only; file contents stay reproducible.
std::string utc_stamp()
{
    const std::time_t now =
        std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y%m%dT%H%M%SZ", &tm);
    return buf;
}

std::string scenario_json_text(const std::string& ref)
{
    if (std::filesystem::exists(ref)) {
        std::ifstream in(ref, std::ios::binary);
        if (!in) throw bksim::ValidationError("cannot open scenario file '" + ref + "'");
        std::ostringstream buf;
        buf << in.rdbuf();
        return buf.str();
    }
    if (auto text = bksim::preset_text(ref)) {
        return *text;
    }
    throw bksim::ValidationError("'" + ref + "' is neither a scenario file nor a preset id");
}

bksim::Scenario load_with_overrides(const std::string& ref,
                                    const std::vector<std::string>& overrides)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(scenario_json_text(ref));
    } catch (const nlohmann::json::parse_error& e) {
        throw bksim::ValidationError(std::string("invalid JSON: ") + e.what());
    }
    for (const auto& assignment : overrides) {
        bksim::apply_override(doc, assignment);
    }
    return bksim::detail::scenario_from_json(doc);
}

std::string output_dir(const std::string& flag_value)
{
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("BKSIM_OUT_DIR"); env && *env) return env;
    return ".";
}

std::vector<double> parse_value_list(const std::string& csv)
{
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (...) {
            throw bksim::ValidationError("bad value '" + item + "' in --values");
        }
    }
    if (out.empty()) throw bksim::ValidationError("--values must name at least one value");
    return out;
}

std::vector<std::uint64_t> parse_seed_list(const std::string& csv)
{
    std::vector<std::uint64_t> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stoull(item));
        } catch (...) {
            throw bksim::ValidationError("bad seed '" + item + "' in --seeds");
        }
    }
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"bksim: frequency-domain backscatter link and network simulator"};
    app.require_subcommand(1);

    std::string scenario_ref, out_flag, format = "both";
    std::vector<std::string> overrides;
    std::int64_t seed_flag = -1;

    auto add_common = [&](CLI::App* cmd, bool with_format) {
        cmd->add_option("scenario", scenario_ref, "scenario file or preset id")->required();
        cmd->add_option("--set", overrides,
                        "override a scenario field, e.g. --set nodes[2].position=[0,0,2]");
        cmd->add_option("--seed", seed_flag, "override the scenario seed");
        cmd->add_option("--out", out_flag, "output directory (default $BKSIM_OUT_DIR or .)");
        if (with_format) {
            cmd->add_option("--format", format, "report format: csv, json or both")
                ->check(CLI::IsMember({"csv", "json", "both"}));
        }
    };

    auto* validate = app.add_subcommand("validate", "parse a scenario and print it resolved");
    add_common(validate, false);

    auto* run = app.add_subcommand("run", "simulate a scenario and write a report");
    add_common(run, true);

    auto* sweep = app.add_subcommand("sweep", "sweep one parameter over a value grid");
    add_common(sweep, false);
    std::string sweep_param, sweep_values, sweep_seeds;
    double ber_threshold = 1.0e-2;
    sweep->add_option("--param", sweep_param, "dotted override path to sweep")->required();
    sweep->add_option("--values", sweep_values, "comma separated grid values")->required();
    sweep->add_option("--seeds", sweep_seeds, "comma separated seeds for per-point runs");
    sweep->add_option("--ber-threshold", ber_threshold, "success criterion (default 1e-2)");

    auto* experiment = app.add_subcommand("experiment", "run the shipped preset experiment");
    std::string exp_preset, exp_seeds = "1,2,3", exp_out;
    experiment->add_option("preset", exp_preset, "preset id")->required();
    experiment->add_option("--seeds", exp_seeds, "comma separated seeds (default 1,2,3)");
    experiment->add_option("--out", exp_out, "output directory");

    auto* list = app.add_subcommand("list-presets", "list shipped scenario presets");
    (void)list;

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("list-presets")) {
            for (const auto& id : bksim::preset_ids()) {
                const bksim::Scenario s = bksim::preset_scenario(id);
                std::printf("%-24s %s\n", id.c_str(), s.description.c_str());
            }
            return 0;
        }

        if (app.got_subcommand("validate")) {
            bksim::Scenario s = load_with_overrides(scenario_ref, overrides);
            if (seed_flag >= 0) s.seed = static_cast<std::uint64_t>(seed_flag);
            std::fputs(bksim::serialize_scenario(s).c_str(), stdout);
            return 0;
        }

        if (app.got_subcommand("run")) {
            bksim::Scenario s = load_with_overrides(scenario_ref, overrides);
            if (seed_flag >= 0) s.seed = static_cast<std::uint64_t>(seed_flag);
            const bksim::SimReport report = bksim::simulate(s);
            const std::filesystem::path dir = output_dir(out_flag);
            const std::string stem =
                s.id + "-" + utc_stamp() + "-" + std::to_string(s.seed);
            if (format == "csv" || format == "both") {
                const auto path = dir / (stem + ".csv");
                bksim::write_atomic(path, bksim::report_to_csv(report));
                std::printf("wrote %s\n", path.c_str());
            }
            if (format == "json" || format == "both") {
                const auto path = dir / (stem + ".json");
                bksim::write_atomic(path, bksim::serialize_report_json(report));
                std::printf("wrote %s\n", path.c_str());
            }
            for (const auto& [id, prr] : report.mean_prr) {
                std::printf("mean_prr %-12s %.4f\n", id.c_str(), prr);
            }
            return 0;
        }

        if (app.got_subcommand("sweep")) {
            bksim::Scenario s = load_with_overrides(scenario_ref, overrides);
            if (seed_flag >= 0) s.seed = static_cast<std::uint64_t>(seed_flag);
            bksim::SweepSpec spec;
            spec.parameter = sweep_param;
            spec.values = parse_value_list(sweep_values);
            spec.seeds = parse_seed_list(sweep_seeds);
            spec.ber_threshold = ber_threshold;
            const auto points = bksim::run_sweep(s, spec);
            std::string csv =
                "value,signal_dbm,sinr_db,ber,per,above_sensitivity,success,mean_prr,std_prr\n";
            for (const auto& p : points) {
                csv += bksim::format_double(p.value) + ',' +
                       bksim::format_double(p.signal_dbm) + ',' +
                       bksim::format_double(p.sinr_db) + ',' + bksim::format_double(p.ber) +
                       ',' + bksim::format_double(p.per) + ',' +
                       (p.above_sensitivity ? "1" : "0") + ',' + (p.success ? "1" : "0") +
                       ',' + bksim::format_double(p.mean_prr) + ',' +
                       bksim::format_double(p.std_prr) + '\n';
            }
            const std::filesystem::path dir = output_dir(out_flag);
            const std::uint64_t seed0 = spec.seeds.empty() ? s.seed : spec.seeds.front();
            const auto path =
                dir / (s.id + "-sweep-" + utc_stamp() + "-" + std::to_string(seed0) + ".csv");
            bksim::write_atomic(path, csv);
            std::printf("wrote %s\n", path.c_str());
            return 0;
        }

        if (app.got_subcommand("experiment")) {
            const auto seeds = parse_seed_list(exp_seeds);
            const auto result = bksim::run_experiment(
                exp_preset, seeds.empty() ? std::vector<std::uint64_t>{1, 2, 3} : seeds);
            const std::filesystem::path dir = output_dir(exp_out);
            const std::uint64_t seed0 = seeds.empty() ? 1 : seeds.front();
            const std::string stem =
                result.preset + "-" + utc_stamp() + "-" + std::to_string(seed0);
            const auto csv_path = dir / (stem + ".csv");
            const auto json_path = dir / (stem + "-summary.json");
            bksim::write_atomic(csv_path, result.csv);
            bksim::write_atomic(json_path, result.summary.dump(2) + "\n");
            std::printf("wrote %s\n", csv_path.c_str());
            std::printf("wrote %s\n", json_path.c_str());
            for (const auto& v : result.verdicts) {
                std::printf("%-40s %12.4f in [%g, %g]  %s\n", v.name.c_str(), v.value, v.low,
                            v.high, v.pass ? "pass" : "FAIL");
            }
            return 0;
        }
    } catch (const bksim::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
