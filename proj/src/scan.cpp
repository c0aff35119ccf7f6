#include "cvmdi/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace cvmdi {

namespace {

constexpr double kVsMin = 1e-2;
constexpr double kVsMax = 1e4;
constexpr int kCoarseProbes = 33;
constexpr double kLogVTol = 1e-4;       // relative tolerance on V
constexpr double kAsymptoticV = 1e8;    // stand-in for V -> infinity
constexpr double kCutoffMaxKm = 500.0;
constexpr double kCutoffRateTol = 1e-8; // bits/pulse
constexpr double kCutoffDistTol = 1e-3; // km (1 m)

std::string join_flag(std::string flags, const std::string& token) {
    if (!flags.empty())
        flags += ';';
    return flags + token;
}

} // namespace

std::string to_string(GeometryKind k) {
    switch (k) {
        case GeometryKind::symmetric: return "symmetric";
        case GeometryKind::relay_near_alice: return "near-alice";
        case GeometryKind::relay_near_bob: return "near-bob";
        case GeometryKind::custom: return "custom";
    }
    return "?";
}

std::string to_string(VPolicy p) {
    switch (p) {
        case VPolicy::fixed: return "fixed";
        case VPolicy::optimal: return "optimal";
        case VPolicy::asymptotic: return "asymptotic";
    }
    return "?";
}

Geometry Geometry::custom(double leg_a, double leg_b) {
    if (leg_a < 0.0 || leg_b < 0.0 || leg_a + leg_b <= 0.0)
        throw invalid_parameters("custom geometry needs nonnegative legs with a positive sum");
    return {GeometryKind::custom, leg_a, leg_b};
}

std::pair<double, double> Geometry::split(double d_total_km) const {
    if (d_total_km < 0.0)
        throw invalid_parameters("distance must be >= 0");
    switch (kind) {
        case GeometryKind::symmetric:
            return {d_total_km / 2.0, d_total_km / 2.0};
        case GeometryKind::relay_near_alice: {
            const double a = std::min(kRelayOffsetKm, d_total_km);
            return {a, d_total_km - a};
        }
        case GeometryKind::relay_near_bob: {
            const double b = std::min(kRelayOffsetKm, d_total_km);
            return {d_total_km - b, b};
        }
        case GeometryKind::custom: {
            const double frac = custom_leg_a / (custom_leg_a + custom_leg_b);
            return {d_total_km * frac, d_total_km * (1.0 - frac)};
        }
    }
    throw invalid_parameters("unknown geometry");
}

void ScanSpec::validate() const {
    if (distance_grid.empty())
        throw invalid_parameters("scan distance grid is empty");
    for (std::size_t i = 0; i < distance_grid.size(); ++i) {
        if (distance_grid[i] < 0.0)
            throw invalid_parameters("scan distances must be >= 0");
        if (i > 0 && distance_grid[i] <= distance_grid[i - 1])
            throw invalid_parameters("scan distance grid must be strictly increasing");
    }
    if (excess_noise_list.empty())
        throw invalid_parameters("scan excess-noise list is empty");
    for (double e : excess_noise_list)
        if (e < 0.0)
            throw invalid_parameters("excess noise must be >= 0");
    if (v_policy == VPolicy::fixed && !(fixed_v > 1.0))
        throw invalid_parameters("fixed modulation policy needs total variance V > 1");
}

LineSpec ScanSpec::line(double eps) const {
    LineSpec l;
    l.geometry = geometry;
    l.excess_noise = eps;
    l.beta = beta;
    l.v_policy = v_policy;
    l.fixed_v = fixed_v;
    l.direction = direction;
    l.attenuation_db_per_km = attenuation_db_per_km;
    l.detector_efficiency = detector_efficiency;
    l.electronic_noise = electronic_noise;
    return l;
}

ModulationOptimum maximize_over_modulation(const std::function<double(double)>& rate_of_v) {
    const double x_lo = std::log(kVsMin);
    const double x_hi = std::log(kVsMax);
    double best_x = x_lo;
    double best_k = -std::numeric_limits<double>::infinity();

    auto eval = [&](double x) {
        const double k = rate_of_v(std::exp(x) + 1.0);
        if (k > best_k) {
            best_k = k;
            best_x = x;
        }
        return k;
    };

    int best_i = 0;
    double best_probe = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < kCoarseProbes; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / (kCoarseProbes - 1);
        const double k = eval(x);
        if (k > best_probe) {
            best_probe = k;
            best_i = i;
        }
    }

    const double step = (x_hi - x_lo) / (kCoarseProbes - 1);
    double lo = std::max(x_lo, x_lo + step * (best_i - 1));
    double hi = std::min(x_hi, x_lo + step * (best_i + 1));

    // Golden-section refinement of the bracketed maximum.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = hi - inv_phi * (hi - lo);
    double d = lo + inv_phi * (hi - lo);
    double fc = eval(c);
    double fd = eval(d);
    while (hi - lo > kLogVTol) {
        if (fc > fd) {
            hi = d;
            d = c;
            fd = fc;
            c = hi - inv_phi * (hi - lo);
            fc = eval(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + inv_phi * (hi - lo);
            fd = eval(d);
        }
    }

    ModulationOptimum out;
    out.v_opt = std::exp(best_x) + 1.0;
    out.key_rate = best_k;
    out.boundary = best_i == 0 || best_i == kCoarseProbes - 1;
    out.no_positive_rate = !(best_k > 0.0);
    return out;
}

ModulationOptimum optimize_modulation(const ScenarioSpec& scenario_template, RrHolevoMode rr_mode) {
    ScenarioSpec s = scenario_template;
    return maximize_over_modulation([&](double v_total) {
        s.protocol.modulation_variance = v_total - 1.0;
        return key_rate(s, rr_mode).key_rate;
    });
}

ScenarioSpec line_scenario(const LineSpec& line, double d_total_km, double v_total) {
    const auto [d_a, d_b] = line.geometry.split(d_total_km);
    ScenarioSpec s;
    s.channel_a = {fiber_transmission({line.attenuation_db_per_km, d_a}), line.excess_noise};
    s.channel_b = {fiber_transmission({line.attenuation_db_per_km, d_b}), line.excess_noise};
    s.protocol.modulation_variance = v_total - 1.0;
    s.protocol.beta = line.v_policy == VPolicy::asymptotic ? 1.0 : line.beta;
    s.protocol.direction = line.direction;
    s.protocol.detector_efficiency = line.detector_efficiency;
    s.protocol.electronic_noise = line.electronic_noise;
    return absorb_detector_into_channels(s);
}

KeyRatePoint evaluate_line_at(const LineSpec& line, double d_total_km,
                              double* v_used, std::string* flags) {
    switch (line.v_policy) {
        case VPolicy::fixed: {
            const ScenarioSpec s = line_scenario(line, d_total_km, line.fixed_v);
            if (v_used) *v_used = line.fixed_v;
            return key_rate(s);
        }
        case VPolicy::optimal: {
            const ModulationOptimum opt = maximize_over_modulation([&](double v_total) {
                return key_rate(line_scenario(line, d_total_km, v_total)).key_rate;
            });
            if (v_used) *v_used = opt.v_opt;
            if (flags) {
                if (opt.boundary) *flags = join_flag(*flags, "boundary_optimal");
                if (opt.no_positive_rate) *flags = join_flag(*flags, "no_positive_rate");
            }
            const ScenarioSpec s = line_scenario(line, d_total_km, opt.v_opt);
            return key_rate(s);
        }
        case VPolicy::asymptotic: {
            const ScenarioSpec s = line_scenario(line, d_total_km, kAsymptoticV);
            if (v_used) *v_used = kAsymptoticV;
            return key_rate(s, RrHolevoMode::asymptotic);
        }
    }
    throw invalid_parameters("unknown modulation policy");
}

ScanResult run_scan(const ScanSpec& spec) {
    spec.validate();
    ScanResult result;
    result.rows.reserve(spec.distance_grid.size() * spec.excess_noise_list.size());
    for (double eps : spec.excess_noise_list) {
        const LineSpec line = spec.line(eps);
        for (double d : spec.distance_grid) {
            ScanRow row;
            row.d_total_km = d;
            std::tie(row.d_a_km, row.d_b_km) = spec.geometry.split(d);
            row.eps_a = eps;
            row.eps_b = eps;
            try {
                row.rate = evaluate_line_at(line, d, &row.v_used, &row.flags);
            } catch (const std::exception& ex) {
                row.failed = true;
                row.flags = join_flag(row.flags, std::string("error:") + ex.what());
                row.rate = KeyRatePoint{};
                row.v_used = 0.0;
            }
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

CutoffResult find_cutoff(const LineSpec& line) {
    // d = 0 means lossless channels, which only admit zero excess noise
    // and no asymptotic route; start one bracket step in for those lines.
    const bool skip_zero = line.excess_noise > 0.0 || line.electronic_noise > 0.0 ||
                           line.v_policy == VPolicy::asymptotic;
    const double d_start = skip_zero ? kCutoffDistTol : 0.0;

    auto rate_at = [&](double d) { return evaluate_line_at(line, d).key_rate; };

    CutoffResult res;
    if (!(rate_at(d_start) > 0.0)) {
        res.status = CutoffResult::Status::never_secure;
        res.distance_km = d_start;
        return res;
    }

    double lo = d_start;
    double hi = 1.0;
    while (hi < kCutoffMaxKm && rate_at(hi) > 0.0) {
        lo = hi;
        hi = std::min(kCutoffMaxKm, hi * 2.0);
    }
    if (hi >= kCutoffMaxKm && rate_at(kCutoffMaxKm) > 0.0) {
        res.status = CutoffResult::Status::secure_throughout;
        res.distance_km = kCutoffMaxKm;
        return res;
    }

    double mid = 0.5 * (lo + hi);
    while (hi - lo > kCutoffDistTol) {
        mid = 0.5 * (lo + hi);
        const double k = rate_at(mid);
        if (std::abs(k) < kCutoffRateTol)
            break;
        (k > 0.0 ? lo : hi) = mid;
    }
    res.status = CutoffResult::Status::crossed;
    res.distance_km = mid;
    return res;
}

} // namespace cvmdi
