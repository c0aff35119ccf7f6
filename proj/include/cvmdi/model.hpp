#pragma once

#include <string>

#include "cvmdi/errors.hpp"

// Domain types and channel-parameter algebra. All variances are in
// shot-noise units (vacuum quadrature variance = 1) and all excess
// noises are referred to the channel input.

namespace cvmdi {

// Parameter-validation tolerance used throughout the library.
inline constexpr double kValidationTol = 1e-12;

enum class Direction { direct, reverse };

std::string to_string(Direction d);

// One Markovian Gaussian channel: transmission T and input-referred
// excess noise epsilon. Equivalent to an entangling cloner of
// beam-splitter transmission T fed with an EPR pair of variance
// N = 1 + T*eps/(1-T).
struct ChannelParams {
    double transmission = 1.0;
    double excess_noise = 0.0;

    void validate() const;
};

// EPR variance N of the cloner that reproduces the channel.
// Lossless channels (T = 1, eps = 0) map to N = 1: the cloner ancilla
// is vacuum and decoupled.
double epr_variance(const ChannelParams& ch);

// Inverse map eps = (1-T)(N-1)/T, for round-trip checks and for
// building channels from cloner parameters.
double excess_noise_from_epr(double transmission, double epr_variance);

struct ProtocolParams {
    double modulation_variance = 0.0; // V_S
    double beta = 1.0;                // reconciliation efficiency
    Direction direction = Direction::reverse;
    double detector_efficiency = 1.0; // eta of the relay's BHDs
    double electronic_noise = 0.0;    // v_el, shot-noise units

    // Total variance V = V_S + 1 of each sender's mode.
    double total_variance() const { return modulation_variance + 1.0; }

    void validate() const;
};

struct FiberModel {
    double attenuation_db_per_km = 0.2;
    double distance_km = 0.0;
};

// T(d) = 10^(-attenuation * d / 10).
double fiber_transmission(const FiberModel& f);

// Fold detector efficiency and electronic noise of the relay into an
// effective channel: T' = eta*T, eps' = eps + v_el/(eta*T).
ChannelParams absorb_detector(const ChannelParams& ch, double eta, double v_el);

// Decomposed rate result. key_rate = beta*mutual_info_ab - eve_shannon
// - eve_holevo holds exactly by construction.
struct KeyRatePoint {
    double mutual_info_ab = 0.0;
    double eve_shannon = 0.0;
    double eve_holevo = 0.0;
    double key_rate = 0.0;

    static KeyRatePoint assemble(double beta, double mutual_info_ab,
                                 double eve_shannon, double eve_holevo);
};

} // namespace cvmdi
