#include "cvmdi/model.hpp"

#include <cmath>

namespace cvmdi {

std::string to_string(Direction d) {
    return d == Direction::direct ? "dr" : "rr";
}

void ChannelParams::validate() const {
    if (!(transmission >= 0.0 && transmission <= 1.0 + kValidationTol))
        throw invalid_parameters("channel transmission must lie in [0,1], got " +
                                 std::to_string(transmission));
    if (!(excess_noise >= -kValidationTol))
        throw invalid_parameters("channel excess noise must be >= 0, got " +
                                 std::to_string(excess_noise));
}

double epr_variance(const ChannelParams& ch) {
    ch.validate();
    const double t = ch.transmission;
    if (t <= kValidationTol)
        throw invalid_parameters("degenerate channel: transmission is zero, no signal reaches the relay");
    if (t >= 1.0 - kValidationTol) {
        if (ch.excess_noise > kValidationTol)
            throw invalid_parameters("unphysical parameters: lossless channel cannot carry excess noise");
        return 1.0; // noiseless convention, cloner ancilla decoupled
    }
    return 1.0 + t * ch.excess_noise / (1.0 - t);
}

double excess_noise_from_epr(double transmission, double epr_variance) {
    if (transmission <= kValidationTol)
        throw invalid_parameters("degenerate channel: transmission is zero");
    return (1.0 - transmission) * (epr_variance - 1.0) / transmission;
}

void ProtocolParams::validate() const {
    if (!(modulation_variance >= -kValidationTol))
        throw invalid_parameters("modulation variance must be >= 0");
    if (!(beta > 0.0 && beta <= 1.0 + kValidationTol))
        throw invalid_parameters("reconciliation efficiency must lie in (0,1]");
    if (!(detector_efficiency > 0.0 && detector_efficiency <= 1.0 + kValidationTol))
        throw invalid_parameters("detector efficiency must lie in (0,1]");
    if (!(electronic_noise >= -kValidationTol))
        throw invalid_parameters("electronic noise must be >= 0");
}

double fiber_transmission(const FiberModel& f) {
    if (f.distance_km < 0.0)
        throw invalid_parameters("fiber distance must be >= 0");
    if (!(f.attenuation_db_per_km > 0.0))
        throw invalid_parameters("fiber attenuation must be > 0");
    return std::pow(10.0, -f.attenuation_db_per_km * f.distance_km / 10.0);
}

ChannelParams absorb_detector(const ChannelParams& ch, double eta, double v_el) {
    ch.validate();
    if (!(eta > 0.0 && eta <= 1.0 + kValidationTol))
        throw invalid_parameters("detector efficiency must lie in (0,1]");
    if (!(v_el >= -kValidationTol))
        throw invalid_parameters("electronic noise must be >= 0");
    if (ch.transmission <= kValidationTol)
        throw invalid_parameters("degenerate channel: transmission is zero");
    ChannelParams out;
    out.transmission = eta * ch.transmission;
    out.excess_noise = ch.excess_noise + v_el / out.transmission;
    return out;
}

KeyRatePoint KeyRatePoint::assemble(double beta, double mutual_info_ab,
                                    double eve_shannon, double eve_holevo) {
    KeyRatePoint p;
    p.mutual_info_ab = mutual_info_ab;
    p.eve_shannon = eve_shannon;
    p.eve_holevo = eve_holevo;
    p.key_rate = beta * mutual_info_ab - eve_shannon - eve_holevo;
    return p;
}

} // namespace cvmdi
