#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cvmdi/bounds.hpp"

// Parameter sweeps and optimization: key rate vs distance curves,
// optimal modulation-variance search, cutoff-distance location.
//
// Distance convention: grids and results carry the TOTAL distance
// d_A + d_B between the two stations, with the per-leg split decided
// by the geometry; per-leg columns are always emitted alongside.

namespace cvmdi {

// Relay offset used by the near-alice / near-bob geometries (10 m).
inline constexpr double kRelayOffsetKm = 0.01;

enum class GeometryKind { symmetric, relay_near_alice, relay_near_bob, custom };

struct Geometry {
    GeometryKind kind = GeometryKind::symmetric;
    // Leg proportions for custom geometry; the legs scale as
    // d_a : d_b = custom_leg_a : custom_leg_b.
    double custom_leg_a = 1.0;
    double custom_leg_b = 1.0;

    static Geometry symmetric() { return {}; }
    static Geometry near_alice() { return {GeometryKind::relay_near_alice, 1.0, 1.0}; }
    static Geometry near_bob() { return {GeometryKind::relay_near_bob, 1.0, 1.0}; }
    static Geometry custom(double leg_a, double leg_b);

    // Split a total distance into (d_a, d_b).
    std::pair<double, double> split(double d_total_km) const;
};

enum class VPolicy { fixed, optimal, asymptotic };

std::string to_string(GeometryKind k);
std::string to_string(VPolicy p);

// One key-rate-vs-distance curve.
struct LineSpec {
    Geometry geometry;
    double excess_noise = 0.0; // applied to both channels
    double beta = 0.95;
    VPolicy v_policy = VPolicy::optimal;
    double fixed_v = 0.0; // total variance V when v_policy == fixed
    Direction direction = Direction::reverse;
    double attenuation_db_per_km = 0.2;
    double detector_efficiency = 1.0;
    double electronic_noise = 0.0;
};

struct ScanSpec {
    Geometry geometry;
    std::vector<double> distance_grid;      // total km, strictly increasing
    std::vector<double> excess_noise_list;  // one curve per entry
    double beta = 0.95;
    VPolicy v_policy = VPolicy::optimal;
    double fixed_v = 0.0;
    Direction direction = Direction::reverse;
    double attenuation_db_per_km = 0.2;
    double detector_efficiency = 1.0;
    double electronic_noise = 0.0;

    void validate() const;
    LineSpec line(double excess_noise) const;
};

struct ScanRow {
    double d_total_km = 0.0;
    double d_a_km = 0.0;
    double d_b_km = 0.0;
    double eps_a = 0.0;
    double eps_b = 0.0;
    double v_used = 0.0;
    KeyRatePoint rate;
    std::string flags; // semicolon-joined markers; "error:..." for failed rows
    bool failed = false;
};

struct ScanResult {
    std::vector<ScanRow> rows;
};

// Result of the modulation-variance search. v_opt is the total
// variance V = V_S + 1.
struct ModulationOptimum {
    double v_opt = 0.0;
    double key_rate = 0.0;
    bool boundary = false;         // argmax pinned at a search-domain edge
    bool no_positive_rate = false; // every probe was <= 0
};

// Maximize rate(V) over V_S in [1e-2, 1e4]: 33 log-spaced coarse probes
// bracket the optimum, then golden-section search on log V_S refines it
// to 1e-4 relative tolerance on V. Returns the best point ever
// evaluated, so the result dominates every probe.
ModulationOptimum maximize_over_modulation(const std::function<double(double)>& rate_of_v);

// Same, with rate(V) = key rate of the scenario template at total
// variance V (direction and RR mode from the template/arguments).
ModulationOptimum optimize_modulation(const ScenarioSpec& scenario_template,
                                      RrHolevoMode rr_mode = RrHolevoMode::exact);

// Build the scenario for one point of a line. Asymptotic policy pins
// V = 1e8 and beta = 1.
ScenarioSpec line_scenario(const LineSpec& line, double d_total_km, double v_total);

// Key rate at one distance of a line; v_used and flags report the
// modulation choice.
KeyRatePoint evaluate_line_at(const LineSpec& line, double d_total_km,
                              double* v_used = nullptr, std::string* flags = nullptr);

ScanResult run_scan(const ScanSpec& spec);

struct CutoffResult {
    enum class Status { crossed, secure_throughout, never_secure };
    Status status = Status::never_secure;
    double distance_km = 0.0; // zero crossing of the total distance when crossed
};

// Bisection on total distance for the line's key rate, over (0, 500] km,
// to |K| < 1e-8 bits/pulse or a bracket below 1 m.
CutoffResult find_cutoff(const LineSpec& line);

} // namespace cvmdi
