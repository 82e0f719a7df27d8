#pragma once

// Discrete-time simulation core. Time advances in packet slots (one packet
// per inter_packet_gap); for every slot the engine rebuilds the spectral
// environment seen by each receiver, derives per-link SINR and BER, and
// draws packet outcomes from the resulting packet error rate with a seeded
// deterministic generator. Identical (scenario, seed) pairs produce
// bit-identical reports.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bksim/phy.hpp"
#include "bksim/rfmath.hpp"
#include "bksim/scenario.hpp"
#include "bksim/scenario_io.hpp"

namespace bksim {

inline constexpr double power_floor_dbm = -999.0; // reporting sentinel for "no power"

using BerModel = std::function<double(double)>; // SNR per bit (linear) -> BER

struct LinkState {
    std::string tag_id;
    std::string receiver_id;
    std::string carrier_id;
    PowerDbm signal{power_floor_dbm};
    PowerDbm residual_carrier{power_floor_dbm};
    PowerDbm interference{power_floor_dbm};
    PowerDbm noise{power_floor_dbm};
    double sinr_db = power_floor_dbm;
    double ber = 0.5;
};

namespace detail {

// Frequency overrides while an avoidance controller is retuning nodes.
struct TuningState {
    std::map<std::string, double> carrier_center_hz;
    std::map<std::string, double> receiver_tuned_hz;

    double carrier_center(const CarrierGenerator& cg) const
    {
        auto it = carrier_center_hz.find(cg.id);
        return it == carrier_center_hz.end() ? cg.center.hz : it->second;
    }

    double receiver_tuned(const Receiver& r) const
    {
        auto it = receiver_tuned_hz.find(r.id);
        return it == receiver_tuned_hz.end() ? r.tuned.hz : it->second;
    }
};

inline double path_gain_db(const Scenario& s, const Vec3& from, const Vec3& to, double f_hz)
{
    // n-th power spreading referenced to the free-space wavelength term
    const Distance d = distance(from, to);
    const double lambda = speed_of_light / f_hz;
    const double fspl_1m = 20.0 * std::log10(4.0 * M_PI / lambda);
    const double spreading = 10.0 * s.path_loss_exponent * std::log10(std::max(d.m, 1e-9));
    return -(fspl_1m + spreading) - obstacle_loss(from, to, s.obstacles).db;
}

inline std::vector<SpectralComponent> receiver_environment(const Scenario& s,
                                                           const Receiver& rx, double t,
                                                           const TuningState& tuning)
{
    std::vector<SpectralComponent> components;
    for (const auto& cg : s.carriers) {
        if (!cg.active_at(t)) continue;
        const double f_c = tuning.carrier_center(cg);
        // direct carrier leakage into the receiver
        SpectralComponent direct;
        direct.center.hz = f_c;
        direct.bandwidth.hz = 0.0;
        direct.power.dbm = cg.tx_power.dbm + cg.antenna_gain.db + rx.antenna_gain.db +
                           path_gain_db(s, cg.position, rx.position, f_c);
        direct.origin = ComponentOrigin::Carrier;
        direct.source_id = cg.id;
        components.push_back(direct);

        // two mixing products per (carrier, tag) pair
        for (const auto& tag : s.tags) {
            const Distance d1 = distance(cg.position, tag.position);
            const Distance d2 = distance(tag.position, rx.position);
            double base = bistatic_received_power(cg.tx_power, cg.antenna_gain,
                                                  rx.antenna_gain, tag.k_factor, {f_c}, d1, d2,
                                                  s.path_loss_exponent)
                              .dbm;
            base -= tag.excess_loss.db;
            base -= obstacle_loss(cg.position, tag.position, s.obstacles).db;
            base -= obstacle_loss(tag.position, rx.position, s.obstacles).db;
            SpectralComponent at_tag;
            at_tag.center.hz = f_c;
            at_tag.bandwidth.hz = 0.0;
            at_tag.power.dbm = base;
            at_tag.origin = ComponentOrigin::Carrier;
            at_tag.source_id = tag.id + ":" + cg.id;
            auto [upper, lower] = mixing_products(at_tag, tag.delta_f, tag.per_product_loss);
            components.push_back(upper);
            components.push_back(lower);
        }
    }
    for (const auto& intf : s.interferers) {
        if (!intf.active_at(t, s.time_step_s)) continue;
        const double f_i = intf.center_at(t).hz;
        SpectralComponent c;
        c.center.hz = f_i;
        c.bandwidth.hz = intf.bandwidth.hz;
        c.power.dbm = intf.tx_power.dbm + rx.antenna_gain.db +
                      path_gain_db(s, intf.position, rx.position, f_i);
        c.origin = ComponentOrigin::Interference;
        c.source_id = intf.id;
        components.push_back(c);
    }
    return components;
}

// Fraction of a component's occupancy that falls inside the receiver
// passband [tuned - bw/2, tuned + bw/2].
inline double passband_overlap(const SpectralComponent& c, double tuned_hz, double rx_bw_hz)
{
    const double lo_rx = tuned_hz - rx_bw_hz / 2.0;
    const double hi_rx = tuned_hz + rx_bw_hz / 2.0;
    if (c.bandwidth.hz <= 0.0) {
        return (c.center.hz >= lo_rx && c.center.hz <= hi_rx) ? 1.0 : 0.0;
    }
    const double lo = c.center.hz - c.bandwidth.hz / 2.0;
    const double hi = c.center.hz + c.bandwidth.hz / 2.0;
    const double overlap = std::max(0.0, std::min(hi, hi_rx) - std::max(lo, lo_rx));
    return overlap / c.bandwidth.hz;
}

inline double dbm_or_floor(double mw)
{
    return mw > 0.0 ? 10.0 * std::log10(mw) : power_floor_dbm;
}

} // namespace detail

// Spectral environment per receiver at time t, with the scenario's static
// tuning. Components: one per active carrier (direct leakage), two mixing
// products per (carrier, tag) pair, one per active interferer. Backscatter
// products carry source_id "tag:carrier".
inline std::map<std::string, std::vector<SpectralComponent>>
spectral_environment(const Scenario& s, double t)
{
    std::map<std::string, std::vector<SpectralComponent>> envs;
    for (const auto& rx : s.receivers) {
        envs[rx.id] = detail::receiver_environment(s, rx, t, {});
    }
    return envs;
}

// SINR and BER of the strongest decodable backscatter product at the
// receiver's tuned frequency.
//
// Signal: upper mixing products whose centre lies inside the passband.
// Everything else contributes P * (w + (1 - w) * rejection(|centre - tuned|))
// where w is the fraction of the component's occupancy inside the passband:
// energy already inside the passband cannot be rejected by the front end,
// while fully off-tune (tone-like) components see exactly the measured
// rejection curve. The mirror product is not decoded and counts as
// interference like any other off-tune component.
inline LinkState sinr(const std::vector<SpectralComponent>& components, const Receiver& rx,
                      const BerModel& ber_model = fsk_ber)
{
    const double tuned = rx.tuned.hz;
    const double rx_bw = rx.profile.rx_bandwidth.hz;

    double signal_mw = 0.0;
    double residual_mw = 0.0;
    double interference_mw = 0.0;
    double best_signal_dbm = power_floor_dbm;
    std::string best_source;

    for (const auto& c : components) {
        const double w = detail::passband_overlap(c, tuned, rx_bw);
        if (c.origin == ComponentOrigin::BackscatterUpper &&
            std::abs(c.center.hz - tuned) <= rx_bw / 2.0) {
            signal_mw += dbm_to_mw(c.power).mw;
            if (c.power.dbm > best_signal_dbm) {
                best_signal_dbm = c.power.dbm;
                best_source = c.source_id;
            }
            continue;
        }
        const double rej_db =
            carrier_rejection(rx.profile.rejection, {std::abs(c.center.hz - tuned)}).db;
        const double contribution =
            dbm_to_mw(c.power).mw * (w + (1.0 - w) * db_to_linear(-rej_db));
        if (c.origin == ComponentOrigin::Carrier) {
            residual_mw += contribution;
        } else {
            interference_mw += contribution;
        }
    }

    LinkState link;
    link.receiver_id = rx.id;
    if (const auto colon = best_source.find(':'); colon != std::string::npos) {
        link.tag_id = best_source.substr(0, colon);
        link.carrier_id = best_source.substr(colon + 1);
    }
    link.noise = noise_floor(rx.profile.rx_bandwidth, rx.profile.noise_figure_db);
    link.signal.dbm = detail::dbm_or_floor(signal_mw);
    link.residual_carrier.dbm = detail::dbm_or_floor(residual_mw);
    link.interference.dbm = detail::dbm_or_floor(interference_mw);
    if (signal_mw <= 0.0) {
        link.sinr_db = power_floor_dbm;
        link.ber = 0.5;
        return link;
    }
    const double denom_mw = dbm_to_mw(link.noise).mw + residual_mw + interference_mw;
    const double sinr_lin = signal_mw / denom_mw;
    link.sinr_db = 10.0 * std::log10(sinr_lin);
    // SNR per bit via the bandwidth/bitrate processing gain
    const double gamma = sinr_lin * rx.profile.rx_bandwidth.hz / rx.profile.bitrate_bps;
    link.ber = ber_model(gamma);
    return link;
}

// Per-slot OR combination of co-located receivers decoding the same stream.
inline std::vector<char> unison_aggregate(const std::vector<std::vector<char>>& per_receiver)
{
    if (per_receiver.empty()) return {};
    std::vector<char> combined(per_receiver.front().size(), 0);
    for (const auto& series : per_receiver) {
        for (std::size_t i = 0; i < combined.size() && i < series.size(); ++i) {
            combined[i] = combined[i] || series[i];
        }
    }
    return combined;
}

// PRR per window of `window` slots; the final window may be partial.
inline std::vector<double> window_prr(const std::vector<char>& successes, int window)
{
    std::vector<double> out;
    int count = 0, ok = 0;
    for (char s : successes) {
        ok += s ? 1 : 0;
        if (++count == window) {
            out.push_back(static_cast<double>(ok) / count);
            count = ok = 0;
        }
    }
    if (count > 0) out.push_back(static_cast<double>(ok) / count);
    return out;
}

struct HopCommand {
    FrequencyHz from;
    FrequencyHz to;
};

// Interference-avoidance controller: a receiver-side PRR monitor asks the
// carrier generator to hop to the next channel in a round-robin list when a
// window's PRR drops below the threshold. The notification travels over a
// reliable out-of-band control channel; its delay is absorbed into
// hop_latency (measured in whole windows). While a hop is pending no second
// command is issued.
struct AvoidanceState {
    int window_size = 20;
    double prr_threshold = 0.5;
    std::vector<FrequencyHz> channel_list;
    int current_index = 0;
    bool pending_hop = false;
    int hop_latency = 1; // windows between command and retune
    int latency_left = 0;
};

inline std::pair<AvoidanceState, std::optional<HopCommand>> avoidance_step(AvoidanceState s,
                                                                           double prr)
{
    if (s.pending_hop) {
        if (--s.latency_left <= 0) {
            s.current_index = static_cast<int>((s.current_index + 1) % s.channel_list.size());
            s.pending_hop = false;
        }
        return {s, std::nullopt};
    }
    if (prr < s.prr_threshold) {
        const int next = static_cast<int>((s.current_index + 1) % s.channel_list.size());
        HopCommand cmd{s.channel_list[s.current_index], s.channel_list[next]};
        if (s.hop_latency <= 0) {
            s.current_index = next;
        } else {
            s.pending_hop = true;
            s.latency_left = s.hop_latency;
        }
        return {s, cmd};
    }
    return {s, std::nullopt};
}

struct WindowRow {
    double time = 0.0;       // window end [s]
    std::string receiver_id; // "aggregate" for the combined series
    double channel_hz = 0.0; // tuned frequency during the window
    double snr_db = 0.0;     // mean per-slot SINR over the window
    double ber = 0.0;        // mean per-slot BER over the window
    double prr = 0.0;
    std::string event; // protocol events issued at this window boundary
};

struct SimEvent {
    double t = 0.0;
    std::string kind;   // "hop_command" | "retune"
    std::string detail; // "<from_hz>-><to_hz>"
};

struct SimReport {
    std::string scenario_id;
    std::uint64_t seed = 0;
    int window_size = 20;
    std::vector<WindowRow> rows;           // per receiver, window-major order
    std::vector<WindowRow> aggregate_rows; // combined any-receiver series
    std::vector<SimEvent> events;
    std::map<std::string, double> mean_prr; // per receiver plus "aggregate"
};

struct SimOptions {
    bool per_bit = false; // draw individual bits instead of one PER draw
    BerModel ber_model = fsk_ber;
};

inline SimReport simulate(const Scenario& s, const SimOptions& options = {})
{
    if (s.tags.empty() || s.receivers.empty()) {
        throw ValidationError("simulation requires at least one tag and one receiver");
    }
    const int payload_bits = s.packet_spec.payload_bytes * 8;
    const double gap = s.packet_spec.inter_packet_gap_s;
    const int n_slots = static_cast<int>(std::floor(s.duration_s / gap + 1e-9));
    const int n_rx = static_cast<int>(s.receivers.size());

    // avoidance setup
    std::optional<AvoidanceState> av;
    int av_carrier = 0, av_receiver = 0;
    double av_offset = 0.0; // receiver tuning offset preserved across hops
    if (s.avoidance) {
        const auto& cfg = *s.avoidance;
        if (s.carriers.empty()) {
            throw ValidationError("avoidance requires a carrier generator");
        }
        for (std::size_t i = 0; i < s.carriers.size(); ++i) {
            if (cfg.carrier_id.empty() || s.carriers[i].id == cfg.carrier_id) {
                av_carrier = static_cast<int>(i);
                break;
            }
        }
        for (std::size_t i = 0; i < s.receivers.size(); ++i) {
            if (cfg.receiver_id.empty() || s.receivers[i].id == cfg.receiver_id) {
                av_receiver = static_cast<int>(i);
                break;
            }
        }
        AvoidanceState st;
        st.window_size = cfg.window_size;
        st.prr_threshold = cfg.prr_threshold;
        st.channel_list = cfg.channel_list;
        st.hop_latency = cfg.hop_latency_windows;
        st.current_index = -1;
        for (std::size_t i = 0; i < cfg.channel_list.size(); ++i) {
            if (cfg.channel_list[i].hz == s.carriers[av_carrier].center.hz) {
                st.current_index = static_cast<int>(i);
                break;
            }
        }
        if (st.current_index < 0) {
            throw ValidationError("avoidance: carrier '" + s.carriers[av_carrier].id +
                                  "' does not start on a channel_list_hz entry");
        }
        av_offset = s.receivers[av_receiver].tuned.hz - s.carriers[av_carrier].center.hz;
        av = st;
    }
    const int window = av ? av->window_size : 20;

    std::mt19937_64 rng(s.seed);
    const auto next_u = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53; // uniform in [0, 1)
    };

    SimReport report;
    report.scenario_id = s.id;
    report.seed = s.seed;
    report.window_size = window;

    std::vector<std::vector<char>> successes(n_rx); // per receiver, per slot
    std::vector<double> win_snr(n_rx, 0.0), win_ber(n_rx, 0.0);
    std::vector<int> win_ok(n_rx, 0);
    int win_count = 0, win_index = 0, agg_ok = 0;
    std::vector<long> total_ok(n_rx, 0);
    long total_agg_ok = 0;

    const auto flush_window = [&](double t_end, const detail::TuningState& tuning,
                                  const std::string& event) {
        if (win_count == 0) return;
        for (int i = 0; i < n_rx; ++i) {
            WindowRow row;
            row.time = t_end;
            row.receiver_id = s.receivers[i].id;
            row.channel_hz = tuning.receiver_tuned(s.receivers[i]);
            row.snr_db = std::max(win_snr[i] / win_count, power_floor_dbm);
            row.ber = win_ber[i] / win_count;
            row.prr = static_cast<double>(win_ok[i]) / win_count;
            if (av && i == av_receiver) row.event = event;
            report.rows.push_back(std::move(row));
        }
        WindowRow agg;
        agg.time = t_end;
        agg.receiver_id = "aggregate";
        agg.channel_hz = 0.0;
        agg.snr_db = 0.0;
        agg.ber = 0.0;
        agg.prr = static_cast<double>(agg_ok) / win_count;
        agg.event = event;
        report.aggregate_rows.push_back(std::move(agg));
        std::fill(win_snr.begin(), win_snr.end(), 0.0);
        std::fill(win_ber.begin(), win_ber.end(), 0.0);
        std::fill(win_ok.begin(), win_ok.end(), 0);
        win_count = 0;
        agg_ok = 0;
        ++win_index;
    };

    detail::TuningState tuning;
    for (int slot = 0; slot < n_slots; ++slot) {
        const double t = slot * gap;
        if (av) {
            const double channel = av->channel_list[av->current_index].hz;
            tuning.carrier_center_hz[s.carriers[av_carrier].id] = channel;
            tuning.receiver_tuned_hz[s.receivers[av_receiver].id] = channel + av_offset;
        }

        std::vector<char> slot_success(n_rx, 0);
        for (int i = 0; i < n_rx; ++i) {
            Receiver rx = s.receivers[i];
            rx.tuned.hz = tuning.receiver_tuned(rx);
            const auto env = detail::receiver_environment(s, rx, t, tuning);
            const LinkState link = sinr(env, rx, options.ber_model);
            const bool decodable =
                snr_to_sensitivity_check(link.signal, rx.profile.sensitivity);
            bool ok = false;
            if (options.per_bit) {
                bool bit_error = false;
                for (int b = 0; b < payload_bits; ++b) {
                    if (next_u() < link.ber) bit_error = true;
                }
                ok = decodable && !bit_error;
            } else {
                const double per =
                    decodable ? packet_error_rate(link.ber, payload_bits) : 1.0;
                const double u = next_u(); // drawn unconditionally, stable stream
                ok = decodable && u >= per;
            }
            slot_success[i] = ok ? 1 : 0;
            successes[i].push_back(slot_success[i]);
            win_snr[i] += std::max(link.sinr_db, power_floor_dbm);
            win_ber[i] += link.ber;
            win_ok[i] += ok ? 1 : 0;
            total_ok[i] += ok ? 1 : 0;
        }
        const bool any = std::any_of(slot_success.begin(), slot_success.end(),
                                     [](char c) { return c != 0; });
        agg_ok += any ? 1 : 0;
        total_agg_ok += any ? 1 : 0;
        ++win_count;

        if (win_count == window) {
            std::string event;
            const double t_end = (slot + 1) * gap;
            if (av) {
                const int before = av->current_index;
                const double prr_window =
                    static_cast<double>(win_ok[av_receiver]) / win_count;
                auto [next_state, cmd] = avoidance_step(*av, prr_window);
                *av = next_state;
                if (cmd) {
                    report.events.push_back(
                        {t_end, "hop_command",
                         std::to_string(static_cast<long long>(cmd->from.hz)) + "->" +
                             std::to_string(static_cast<long long>(cmd->to.hz))});
                    event = "hop_command:" + report.events.back().detail;
                }
                if (av->current_index != before) {
                    report.events.push_back(
                        {t_end, "retune",
                         std::to_string(static_cast<long long>(
                             av->channel_list[before].hz)) +
                             "->" +
                             std::to_string(static_cast<long long>(
                                 av->channel_list[av->current_index].hz))});
                    if (!event.empty()) event += ";";
                    event += "retune:" + report.events.back().detail;
                }
            }
            flush_window(t_end, tuning, event);
        }
    }
    flush_window(n_slots * gap, tuning, "");

    for (int i = 0; i < n_rx; ++i) {
        report.mean_prr[s.receivers[i].id] =
            n_slots > 0 ? static_cast<double>(total_ok[i]) / n_slots : 0.0;
    }
    report.mean_prr["aggregate"] =
        n_slots > 0 ? static_cast<double>(total_agg_ok) / n_slots : 0.0;
    return report;
}

// Deterministic single-point link expectation used by the analytic sweeps:
// expected BER gated on sensitivity (an undecodable signal reads as
// coin-flip bits) and the matching expected packet success probability.
struct LinkExpectation {
    LinkState link;
    bool above_sensitivity = false;
    double ber_gated = 0.5;
    double packet_success = 0.0;
};

inline LinkExpectation expected_link(const Scenario& s, const std::string& receiver_id = "",
                                     double t = 0.0, const BerModel& ber_model = fsk_ber)
{
    if (s.receivers.empty()) {
        throw ValidationError("expected_link requires at least one receiver");
    }
    const Receiver* rx = &s.receivers.front();
    if (!receiver_id.empty()) {
        const auto it = std::find_if(s.receivers.begin(), s.receivers.end(),
                                     [&](const Receiver& r) { return r.id == receiver_id; });
        if (it == s.receivers.end()) {
            throw ValidationError("no receiver with id '" + receiver_id + "'");
        }
        rx = &*it;
    }
    LinkExpectation e;
    const auto env = detail::receiver_environment(s, *rx, t, {});
    e.link = sinr(env, *rx, ber_model);
    e.above_sensitivity = snr_to_sensitivity_check(e.link.signal, rx->profile.sensitivity);
    e.ber_gated = e.above_sensitivity ? e.link.ber : 0.5;
    e.packet_success = e.above_sensitivity
                           ? 1.0 - packet_error_rate(e.link.ber, s.packet_spec.payload_bytes * 8)
                           : 0.0;
    return e;
}

} // namespace bksim
