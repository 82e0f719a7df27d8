#pragma once

// Unit-safe dB/linear power arithmetic and the bistatic backscatter link
// budget. All dB math is carried out in linear units internally; dB values
// only exist at the interfaces.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

namespace bksim {

inline constexpr double speed_of_light = 299792458.0; // [m/s]

struct PowerDbm {
    double dbm = 0.0; // [dBm]

    friend bool operator==(const PowerDbm&, const PowerDbm&) = default;
};

struct PowerMw {
    double mw = 0.0; // [mW]

    friend bool operator==(const PowerMw&, const PowerMw&) = default;
};

struct Gain {
    double db = 0.0; // [dB], negative values are losses

    friend bool operator==(const Gain&, const Gain&) = default;
};

struct FrequencyHz {
    double hz = 0.0; // [Hz]

    friend bool operator==(const FrequencyHz&, const FrequencyHz&) = default;
};

struct Distance {
    double m = 0.0; // [m]

    friend bool operator==(const Distance&, const Distance&) = default;
};

inline PowerMw dbm_to_mw(PowerDbm p)
{
    return {std::pow(10.0, p.dbm / 10.0)};
}

inline PowerDbm mw_to_dbm(PowerMw p)
{
    if (!(p.mw > 0.0)) {
        throw std::domain_error("mw_to_dbm: power must be > 0 mW");
    }
    return {10.0 * std::log10(p.mw)};
}

inline double db_to_linear(double db)
{
    return std::pow(10.0, db / 10.0);
}

// Free-space path loss 20*log10(4*pi*d*f/c), positive dB.
inline Gain free_space_path_loss(Distance d, FrequencyHz f)
{
    if (!(d.m > 0.0) || !(f.hz > 0.0)) {
        throw std::domain_error("free_space_path_loss: d and f must be > 0");
    }
    return {20.0 * std::log10(4.0 * M_PI * d.m * f.hz / speed_of_light)};
}

// Received power of a backscattered carrier over the two-segment path
// carrier generator -> tag (d1) -> receiver (d2):
//
//   P_r = P_t * G_t / (4*pi*d1^n) * K * lambda^2 * G_r / (4*pi*d2^n * 4*pi)
//
// K lumps the tag's radar cross section, its antenna gains and the measured
// return loss into one configurable gain. The path-loss exponent n replaces
// the square-law spreading on both segments; n = 2 is free space, larger
// values are scenario calibration and are never applied silently.
inline PowerDbm bistatic_received_power(PowerDbm tx, Gain g_tx, Gain g_rx, Gain k,
                                        FrequencyHz f, Distance d1, Distance d2,
                                        double path_loss_exponent = 2.0)
{
    if (!(d1.m > 0.0) || !(d2.m > 0.0)) {
        throw std::domain_error("bistatic_received_power: distances must be > 0");
    }
    if (!(f.hz > 0.0)) {
        throw std::domain_error("bistatic_received_power: frequency must be > 0");
    }
    if (!(path_loss_exponent > 0.0)) {
        throw std::domain_error("bistatic_received_power: exponent must be > 0");
    }
    const double lambda = speed_of_light / f.hz;            // [m]
    const double spread = std::pow(d1.m, path_loss_exponent) *
                          std::pow(d2.m, path_loss_exponent); // [m^2n]
    const double four_pi = 4.0 * M_PI;
    const double rx_mw = dbm_to_mw(tx).mw * db_to_linear(g_tx.db) *
                         db_to_linear(k.db) * db_to_linear(g_rx.db) *
                         lambda * lambda / (four_pi * four_pi * four_pi * spread);
    return mw_to_dbm({rx_mw});
}

// Receiver selectivity against off-tuned signals, measured as attenuation vs
// frequency offset. Piecewise linear between sample points; offsets beyond
// the last point clamp to the last rejection value.
struct RejectionCurve {
    // (offset [Hz], rejection [dB]) pairs; offsets strictly increasing
    // starting at exactly (0, 0), rejections non-decreasing.
    std::vector<std::pair<double, double>> points;

    void validate() const
    {
        if (points.empty() || points.front().first != 0.0 || points.front().second != 0.0) {
            throw std::invalid_argument("RejectionCurve: first point must be (0 Hz, 0 dB)");
        }
        for (std::size_t i = 1; i < points.size(); ++i) {
            if (!(points[i].first > points[i - 1].first)) {
                throw std::invalid_argument("RejectionCurve: offsets must be strictly increasing");
            }
            if (points[i].second < points[i - 1].second) {
                throw std::invalid_argument("RejectionCurve: rejection must be non-decreasing");
            }
        }
    }

    friend bool operator==(const RejectionCurve&, const RejectionCurve&) = default;
};

// Attenuation applied to a signal |offset| away from the tuned frequency.
inline Gain carrier_rejection(const RejectionCurve& curve, FrequencyHz offset)
{
    if (offset.hz < 0.0) {
        throw std::domain_error("carrier_rejection: offset must be >= 0");
    }
    curve.validate();
    const auto& pts = curve.points;
    if (offset.hz >= pts.back().first) {
        return {pts.back().second}; // clamp past the last measured offset
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (offset.hz <= pts[i].first) {
            const double t = (offset.hz - pts[i - 1].first) /
                             (pts[i].first - pts[i - 1].first);
            return {pts[i - 1].second + t * (pts[i].second - pts[i - 1].second)};
        }
    }
    return {pts.back().second};
}

// Thermal noise floor -174 dBm/Hz + 10*log10(B) + NF.
inline PowerDbm noise_floor(FrequencyHz bandwidth, double noise_figure_db)
{
    if (!(bandwidth.hz > 0.0)) {
        throw std::domain_error("noise_floor: bandwidth must be > 0");
    }
    if (noise_figure_db < 0.0) {
        throw std::domain_error("noise_floor: noise figure must be >= 0");
    }
    return {-174.0 + 10.0 * std::log10(bandwidth.hz) + noise_figure_db};
}

} // namespace bksim
