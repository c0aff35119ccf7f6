#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "cvmdi/bounds.hpp"

// Monte Carlo emulation of the protocol under the two-cloner attack:
// Gaussian preparation, beam-splitter channels, the relay's
// double-quadrature Bell measurement, Bob's recasting, and empirical
// channel estimation. Also the LO phase-difference calibration
// arithmetic.

namespace cvmdi {

// Deterministic Gaussian stream: mt19937_64 (fully specified by the
// standard) mapped to uniforms via the top 53 bits, then Box-Muller.
// Cross-platform runs match in distribution and, up to libm rounding,
// in stream.
class GaussianSampler {
public:
    explicit GaussianSampler(std::uint64_t seed) : eng_(seed) {}

    double uniform(); // (0, 1)
    double normal();  // standard normal

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// splitmix64 of (seed, index): sub-seed derivation for independent
// sample chunks.
std::uint64_t derive_subseed(std::uint64_t seed, std::uint64_t index);

// One EPR quadrature pair with covariance [[n, c], [c, n]],
// c = sqrt(n^2 - 1); the P-type pair uses -c.
struct EprDraw {
    double kept = 0.0;   // mode entering the channel beam splitter
    double stored = 0.0; // mode kept in the attacker's memory
};

EprDraw draw_epr_pair(GaussianSampler& rng, double n, bool conjugate);

// Per-pulse record of a simulated run. All arrays have length count.
struct SampleBatch {
    std::size_t count = 0;
    std::uint64_t rng_seed = 0;
    double true_t2 = 1.0; // transmission used for the recast step

    std::vector<double> q_enc_a, p_enc_a; // Alice's encodings
    std::vector<double> q_enc_b, p_enc_b; // Bob's encodings
    std::vector<double> q_broadcast, p_broadcast;
    std::vector<double> q_recast_b, p_recast_b;
};

// Simulate `count` pulses. The broadcast is the sqrt(2)-rescaled
// homodyne outcome, so Q_hat = in_A - in_B and P_hat = in_A + in_B
// hold literally; the recast uses the true channel transmission.
SampleBatch simulate_protocol(const ScenarioSpec& s, std::size_t count, std::uint64_t seed);

// Redo the recast step with an alternative transmission estimate
// (quantifies the penalty of recasting with estimated parameters).
SampleBatch recast_with_transmission(const SampleBatch& batch, double t2);

struct EstimatedChannel {
    double t_hat = 0.0;
    double t_std_error = 0.0;
    double eps_hat = 0.0;
    double eps_std_error = 0.0;
    bool eps_resolved = false; // false: only the pooled total is identified
};

struct ChannelEstimates {
    EstimatedChannel alice;
    EstimatedChannel bob;
    // T1*eps_A + T2*eps_B, the total excess noise visible in the
    // broadcast residual; always identified.
    double pooled_excess = 0.0;
    double pooled_excess_std_error = 0.0;
};

// Covariance-based estimation from the broadcast: T_i from
// (Cov(X_hat, X_enc)/V_S)^2 pooled over both quadratures, the excess
// total from the regression residual minus the two-vacuum floor.
// Per-channel excess noises are only separable under a declared
// symmetric-noise assumption (eps_A = eps_B); otherwise the pooled
// total is reported and the per-channel fields stay unresolved.
// Standard errors come from splitting the batch into 10 sub-batches.
// Requires count >= 100.
ChannelEstimates estimate_channels(const SampleBatch& batch, double declared_v_s,
                                   bool symmetric_noise);

// LO phase calibration: photodetector outputs of the two interference
// beam splitters, |b1|^2 = I*(1 + cos(dtheta)), |b2|^2 = I*(1 + sin(dtheta)).
struct InterferenceOutputs {
    double bs1 = 0.0;
    double bs2 = 0.0;
};

InterferenceOutputs lo_interference_outputs(double theta_a, double theta_b, double intensity);

// Exact inverse of lo_interference_outputs; returns dtheta in [0, 2*pi).
double recover_phase_difference(double bs1, double bs2, double intensity);

// (phi_b + dtheta) mod 2*pi: Bob's modulation phase moved into Alice's
// reference frame.
double apply_reference_correction(double phi_b, double delta_theta);

} // namespace cvmdi
