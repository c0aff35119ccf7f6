#pragma once

#include <Eigen/Dense>

#include "cvmdi/model.hpp"
#include "cvmdi/symplectic.hpp"

// Analytic security bounds for the two-entangling-cloner one-mode
// attack: Alice-Bob mutual information, the eavesdropper's Shannon
// information from the relay's broadcast, her Holevo information from
// the stored cloner modes, and the resulting secret key rates for
// direct and reverse reconciliation.
//
// Convention: channel_a carries the encoder whose data is the raw key
// reference ("Alice"); channel_b carries the party that subtracts its
// encodings from the broadcast ("Bob"). Swapping the two channels
// together with the recasting role is a pure relabeling.

namespace cvmdi {

struct ScenarioSpec {
    ChannelParams channel_a; // Alice -> relay
    ChannelParams channel_b; // Bob -> relay
    ProtocolParams protocol;

    void validate() const;
};

// Folds the relay's detector efficiency and electronic noise into both
// channels and returns a scenario with ideal detectors.
ScenarioSpec absorb_detector_into_channels(const ScenarioSpec& s);

// Variance of Bob's recast data and its conditional variance on
// Alice's encodings (b_v and b_0):
//   b_v = T1*V + (1-T1)*N1 + T2 + (1-T2)*N2, b_0 = b_v with V -> 1.
struct RecastVariances {
    double total = 0.0;       // b_v
    double conditional = 0.0; // b_0
};

RecastVariances recast_variances(const ScenarioSpec& s);

// I_AB' = log2(b_v / b_0); both quadratures are used, so no 1/2.
double mutual_info_ab(const ScenarioSpec& s);

// Eve's Shannon information about Alice's encodings from the broadcast,
// with her stored ancillas sharpening the broadcast variance:
//   I_AE3 = log2(V_E3|E'' / V_E3|A,E'').
double eve_shannon_dr(const ScenarioSpec& s);

// Holevo bound on Eve's cloner modes of the Alice channel:
// chi = S(E_A) - S(E_A|A), both entropies from the two-mode closed
// form. Zero for a lossless Alice channel.
double eve_holevo_dr(const ScenarioSpec& s);

KeyRatePoint key_rate_dr(const ScenarioSpec& s);

// Eve's Shannon information about Bob's recast data from the broadcast:
//   I_B'E3 = log2(V_E3 / (T2 * V_S)).
// Diverges as V_S -> 0; raises divergent_information below 1e-9.
double eve_shannon_rr(const ScenarioSpec& s);

enum class RrHolevoMode { exact, asymptotic };

// chi_B'E = S(E) - S(E|B') with the conditional entropy from the full
// four-mode conditional covariance matrix (spectral route). Channels
// with T = 1 decouple and their modes are dropped.
double eve_holevo_rr_exact(const ScenarioSpec& s);

// Large-modulation form: the two finite eigenvalues are taken as N1 and
// N2 and the growing pair enters only through det of the conditional
// matrix, S(E|B') = G((N1-1)/2) + G((N2-1)/2) + log2(e^2 nu3 nu4 / 4)
// with (nu3 nu4)^2 = Delta4 / (N1 N2)^2. Requires 0 < T < 1 on both
// channels.
double eve_holevo_rr_asymptotic(const ScenarioSpec& s);

KeyRatePoint key_rate_rr(const ScenarioSpec& s, RrHolevoMode mode = RrHolevoMode::exact);

// Dispatch on protocol.direction.
KeyRatePoint key_rate(const ScenarioSpec& s, RrHolevoMode rr_mode = RrHolevoMode::exact);

// Covariance builders, exposed for the dual-route consistency checks.

// Eve's pair (E'_1, E''_1) for the Alice channel with the encoder
// variance slot set to v_arg (V unconditioned, 1 conditioned on the
// encodings).
CovMatrix dr_eve_cov(const ScenarioSpec& s, double v_arg);

// Block-diagonal covariance of Eve's four stored modes
// (E'_1, E''_1, E'_2, E''_2).
CovMatrix rr_eve_cov(const ScenarioSpec& s);

// Cross covariance (8x2) of those modes with Bob's recast pair.
Eigen::MatrixXd rr_recast_cross(const ScenarioSpec& s);

// Conditional covariance given the recast pair: generic Moore-Penrose
// route and the closed-form entries, which must agree entrywise.
CovMatrix rr_eve_cov_conditional(const ScenarioSpec& s);
CovMatrix rr_eve_cov_conditional_explicit(const ScenarioSpec& s);

} // namespace cvmdi
