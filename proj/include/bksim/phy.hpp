#pragma once

// Physical-layer building blocks: spectral bookkeeping of backscatter mixing
// products, radio profiles of the narrowband receivers, and the FSK error
// model. A tag toggling its antenna at delta_f multiplies the incident
// carrier by a square wave, which in the power spectrum places two products
// at f_c +/- delta_f of equal strength; the receiver front end cannot remove
// the mirror image, only attenuate it with its selectivity curve.

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "bksim/rfmath.hpp"

namespace bksim {

enum class ComponentOrigin {
    Carrier,                // unmodulated carrier leaking into the receiver
    BackscatterUpper,       // tag product at f_c + delta_f (decoded)
    BackscatterLowerMirror, // tag product at f_c - delta_f (not decoded)
    Interference,           // active transmitter, e.g. WiFi traffic
    ShiftedAmbient,         // ambient transmission re-centred by the tag
};

struct SpectralComponent {
    FrequencyHz center;
    FrequencyHz bandwidth;  // 0 for tone-like components
    PowerDbm power;         // total power as seen at the receiver input
    ComponentOrigin origin = ComponentOrigin::Carrier;
    std::string source_id;  // node that produced the component

    friend bool operator==(const SpectralComponent&, const SpectralComponent&) = default;
};

struct Band {
    FrequencyHz low;
    FrequencyHz high;

    friend bool operator==(const Band&, const Band&) = default;
};

// 2.4 GHz ISM band.
inline Band band_ism24() { return {{2400.0e6}, {2483.5e6}}; }
// European 868 MHz SRD band.
inline Band band_srd868() { return {{863.0e6}, {870.0e6}}; }

inline std::optional<Band> band_preset(const std::string& name)
{
    if (name == "ISM-2.4") return band_ism24();
    if (name == "SRD-868") return band_srd868();
    return std::nullopt;
}

// Splits a carrier component into the two mixing products at center +/-
// delta_f. Both products carry the same power, per_product_loss below the
// input component; any tag gain factor is expected to be applied by the
// caller through the link budget.
inline std::pair<SpectralComponent, SpectralComponent>
mixing_products(const SpectralComponent& carrier, FrequencyHz delta_f, Gain per_product_loss)
{
    if (!(delta_f.hz > 0.0)) {
        throw std::domain_error("mixing_products: delta_f must be > 0");
    }
    SpectralComponent upper = carrier;
    upper.center.hz = carrier.center.hz + delta_f.hz;
    upper.power.dbm = carrier.power.dbm - per_product_loss.db;
    upper.origin = ComponentOrigin::BackscatterUpper;
    SpectralComponent lower = upper;
    lower.center.hz = carrier.center.hz - delta_f.hz;
    lower.origin = ComponentOrigin::BackscatterLowerMirror;
    return {upper, lower};
}

// An ambient transmission scattered off the tag appears re-centred at
// +/- delta_f with its bandwidth preserved.
inline std::pair<SpectralComponent, SpectralComponent>
shifted_ambient(const SpectralComponent& ambient, FrequencyHz delta_f)
{
    if (!(delta_f.hz > 0.0)) {
        throw std::domain_error("shifted_ambient: delta_f must be > 0");
    }
    SpectralComponent upper = ambient;
    upper.center.hz = ambient.center.hz + delta_f.hz;
    upper.origin = ComponentOrigin::ShiftedAmbient;
    SpectralComponent lower = ambient;
    lower.center.hz = ambient.center.hz - delta_f.hz;
    lower.origin = ComponentOrigin::ShiftedAmbient;
    return {upper, lower};
}

// Fraction of a component's (uniform-PSD) occupancy that falls outside the
// band. Zero-bandwidth components are point masses: fraction is 0 or 1.
inline double out_of_band_fraction(const SpectralComponent& c, const Band& band)
{
    if (!(band.high.hz > band.low.hz)) {
        throw std::domain_error("out_of_band_fraction: band must have high > low");
    }
    if (c.bandwidth.hz < 0.0) {
        throw std::domain_error("out_of_band_fraction: bandwidth must be >= 0");
    }
    if (c.bandwidth.hz == 0.0) {
        return (c.center.hz >= band.low.hz && c.center.hz <= band.high.hz) ? 0.0 : 1.0;
    }
    const double lo = c.center.hz - c.bandwidth.hz / 2.0;
    const double hi = c.center.hz + c.bandwidth.hz / 2.0;
    const double inside = std::max(0.0, std::min(hi, band.high.hz) - std::max(lo, band.low.hz));
    return 1.0 - inside / c.bandwidth.hz;
}

// Noncoherent binary FSK bit error rate, BER = 1/2 * exp(-gamma/2), where
// gamma is the SNR per bit in linear units. Swap in coherent_fsk_ber for a
// Q-function based model.
inline double fsk_ber(double snr_per_bit_linear)
{
    if (snr_per_bit_linear < 0.0) {
        throw std::domain_error("fsk_ber: SNR per bit must be >= 0");
    }
    return 0.5 * std::exp(-snr_per_bit_linear / 2.0);
}

inline double coherent_fsk_ber(double snr_per_bit_linear)
{
    if (snr_per_bit_linear < 0.0) {
        throw std::domain_error("coherent_fsk_ber: SNR per bit must be >= 0");
    }
    return 0.5 * std::erfc(std::sqrt(snr_per_bit_linear / 2.0));
}

// Packet error rate under independent bit errors.
inline double packet_error_rate(double ber, int payload_bits)
{
    if (!(ber >= 0.0 && ber <= 0.5)) {
        throw std::domain_error("packet_error_rate: ber must be in [0, 0.5]");
    }
    if (payload_bits < 1) {
        throw std::domain_error("packet_error_rate: payload must be >= 1 bit");
    }
    return 1.0 - std::pow(1.0 - ber, payload_bits);
}

// Decode feasibility against the radio's sensitivity; the boundary is
// closed (a signal exactly at sensitivity decodes).
inline bool snr_to_sensitivity_check(PowerDbm received, PowerDbm sensitivity)
{
    return received.dbm >= sensitivity.dbm;
}

// Measured front-end selectivity of the 2.4 GHz narrowband receiver:
// a tone 2 MHz off tune is attenuated by ~50 dB, with little further
// improvement at larger offsets.
inline RejectionCurve rejection_curve_cc2500()
{
    return {{{0.0, 0.0},
             {250.0e3, 10.0},
             {500.0e3, 20.0},
             {1.0e6, 35.0},
             {2.0e6, 52.0},
             {4.0e6, 55.0},
             {10.0e6, 58.0}}};
}

// Selectivity of the 868 MHz receiver: ~50 dB at 100 kHz offset.
inline RejectionCurve rejection_curve_cc1310()
{
    return {{{0.0, 0.0},
             {25.0e3, 15.0},
             {50.0e3, 33.0},
             {100.0e3, 52.0},
             {200.0e3, 56.0},
             {1.0e6, 58.0}}};
}

// Receiver configuration bundle. delta_f is the tuning offset the receiver
// expects between the carrier and the decoded backscatter product.
struct RadioProfile {
    std::string name;
    FrequencyHz delta_f;
    FrequencyHz fsk_deviation;
    double bitrate_bps = 0.0;
    FrequencyHz rx_bandwidth;
    PowerDbm sensitivity;
    double noise_figure_db = 0.0;
    RejectionCurve rejection;

    void validate() const
    {
        if (!(delta_f.hz > 0.0)) {
            throw std::invalid_argument("RadioProfile " + name + ": delta_f must be > 0");
        }
        if (!(bitrate_bps > 0.0)) {
            throw std::invalid_argument("RadioProfile " + name + ": bitrate must be > 0");
        }
        if (!(rx_bandwidth.hz > 0.0)) {
            throw std::invalid_argument("RadioProfile " + name + ": rx_bandwidth must be > 0");
        }
        if (!(fsk_deviation.hz > 0.0) || fsk_deviation.hz >= rx_bandwidth.hz) {
            throw std::invalid_argument("RadioProfile " + name +
                                        ": fsk_deviation must be in (0, rx_bandwidth)");
        }
        rejection.validate();
    }

    friend bool operator==(const RadioProfile&, const RadioProfile&) = default;
};

// 868 MHz long-range profile: 100 kHz tuning offset, 2.9 kbps, 58 kHz
// receive bandwidth, -124 dBm sensitivity.
inline RadioProfile profile_lorea_868()
{
    return {"LoRea-868", {100.0e3}, {13.0e3}, 2900.0, {58.0e3}, {-124.0}, 5.0,
            rejection_curve_cc1310()};
}

// 2.4 GHz profile: 2 MHz tuning offset, 2.9 kbps, 812 kHz receive
// bandwidth, -104 dBm sensitivity.
inline RadioProfile profile_lorea_24()
{
    return {"LoRea-2.4", {2.0e6}, {190.0e3}, 2900.0, {812.0e3}, {-104.0}, 10.0,
            rejection_curve_cc2500()};
}

// High-rate 2.4 GHz profile: 197 kbps with a wider receive bandwidth and
// correspondingly reduced sensitivity.
inline RadioProfile profile_lorea_24_fast()
{
    return {"LoRea-2.4-fast", {2.0e6}, {190.0e3}, 197.0e3, {1.2e6}, {-101.0}, 10.0,
            rejection_curve_cc2500()};
}

// Monostatic commodity-reader baseline; its poor sensitivity is dominated by
// self-interference from the co-located carrier.
inline RadioProfile profile_rfid_mono()
{
    return {"rfid-mono", {100.0e3}, {13.0e3}, 2900.0, {58.0e3}, {-84.0}, 5.0,
            rejection_curve_cc1310()};
}

inline std::optional<RadioProfile> radio_profile_preset(const std::string& name)
{
    if (name == "LoRea-868") return profile_lorea_868();
    if (name == "LoRea-2.4") return profile_lorea_24();
    if (name == "LoRea-2.4-fast") return profile_lorea_24_fast();
    if (name == "rfid-mono") return profile_rfid_mono();
    return std::nullopt;
}

} // namespace bksim
