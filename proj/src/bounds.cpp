#include "cvmdi/bounds.hpp"

#include <cmath>

namespace cvmdi {

namespace {

// Per-channel cloner quantities entering the covariance blocks.
struct CloneSide {
    double t = 1.0;          // beam-splitter transmission
    double n = 1.0;          // EPR variance
    double kept_var = 1.0;   // e_v = (1-t)*signal_var + t*n, variance of E'
    double kept_cross = 0.0; // sqrt(t(n^2-1)), <E' E''> within the pair
    double leak_cross = 0.0; // sqrt((1-t)(n^2-1)), <E'' B'> magnitude
    double xi = 0.0;         // sqrt(t(1-t)) * (n - signal_var), <E' B'> magnitude
    bool lossy = false;      // t < 1, cloner actually coupled
};

// signal_var is the variance of the sender mode surviving in the recast
// data: V for the Alice side, 1 (vacuum only) for the Bob side.
CloneSide make_side(const ChannelParams& ch, double v, double signal_var) {
    CloneSide s;
    s.t = ch.transmission;
    s.n = epr_variance(ch);
    s.lossy = s.t < 1.0 - kValidationTol;
    s.kept_var = (1.0 - s.t) * v + s.t * s.n;
    s.kept_cross = std::sqrt(std::max(0.0, s.t * (s.n * s.n - 1.0)));
    s.leak_cross = std::sqrt(std::max(0.0, (1.0 - s.t) * (s.n * s.n - 1.0)));
    s.xi = std::sqrt(std::max(0.0, s.t * (1.0 - s.t))) * (s.n - signal_var);
    return s;
}

CloneSide side_a(const ScenarioSpec& s) {
    return make_side(s.channel_a, s.protocol.total_variance(), s.protocol.total_variance());
}

CloneSide side_b(const ScenarioSpec& s) {
    return make_side(s.channel_b, s.protocol.total_variance(), 1.0);
}

// Entropy of one cloner pair from the two-mode closed form.
double side_entropy(const CloneSide& side) {
    auto spec = symplectic_eigenvalues_two_mode(side.kept_var, side.n, side.kept_cross);
    return entropy_from_spectrum(spec);
}

void put_block(Eigen::MatrixXd& m, int row, int col, double diag, double off_sign) {
    m(row, col) = diag;
    m(row + 1, col + 1) = off_sign;
}

// 2x2 blocks: scalar * I or scalar * sigma_z.
void put_i(Eigen::MatrixXd& m, int r, int c, double v) { put_block(m, r, c, v, v); }
void put_sz(Eigen::MatrixXd& m, int r, int c, double v) { put_block(m, r, c, v, -v); }

Eigen::MatrixXd eve_cov_matrix(const CloneSide& a, const CloneSide& b) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(8, 8);
    put_i(m, 0, 0, a.kept_var);
    put_sz(m, 0, 2, a.kept_cross);
    put_sz(m, 2, 0, a.kept_cross);
    put_i(m, 2, 2, a.n);
    put_i(m, 4, 4, b.kept_var);
    put_sz(m, 4, 6, b.kept_cross);
    put_sz(m, 6, 4, b.kept_cross);
    put_i(m, 6, 6, b.n);
    return m;
}

// Cross covariance of (E'_1, E''_1, E'_2, E''_2) with (Q_B', P_B'):
// blocks xi1*I, phi1*sz, -xi2*sz, -phi2*I.
Eigen::MatrixXd recast_cross_matrix(const CloneSide& a, const CloneSide& b) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(8, 2);
    put_i(m, 0, 0, a.xi);
    put_sz(m, 2, 0, a.leak_cross);
    put_sz(m, 4, 0, -b.xi);
    put_i(m, 6, 0, -b.leak_cross);
    return m;
}

} // namespace

void ScenarioSpec::validate() const {
    channel_a.validate();
    channel_b.validate();
    protocol.validate();
    // Zero-transmission channels leave no signal at the relay; the
    // cloner parameterization (and every bound) degenerates.
    epr_variance(channel_a);
    epr_variance(channel_b);
}

ScenarioSpec absorb_detector_into_channels(const ScenarioSpec& s) {
    const double eta = s.protocol.detector_efficiency;
    const double v_el = s.protocol.electronic_noise;
    if (eta >= 1.0 - kValidationTol && v_el <= kValidationTol)
        return s;
    ScenarioSpec out = s;
    out.channel_a = absorb_detector(s.channel_a, eta, v_el);
    out.channel_b = absorb_detector(s.channel_b, eta, v_el);
    out.protocol.detector_efficiency = 1.0;
    out.protocol.electronic_noise = 0.0;
    return out;
}

RecastVariances recast_variances(const ScenarioSpec& s) {
    s.validate();
    const double v = s.protocol.total_variance();
    const double t1 = s.channel_a.transmission;
    const double t2 = s.channel_b.transmission;
    const double n1 = epr_variance(s.channel_a);
    const double n2 = epr_variance(s.channel_b);
    RecastVariances rv;
    rv.total = t1 * v + (1.0 - t1) * n1 + t2 + (1.0 - t2) * n2;
    rv.conditional = t1 + (1.0 - t1) * n1 + t2 + (1.0 - t2) * n2;
    return rv;
}

double mutual_info_ab(const ScenarioSpec& s) {
    const RecastVariances rv = recast_variances(s);
    return std::log2(rv.total / rv.conditional);
}

double eve_shannon_dr(const ScenarioSpec& s) {
    s.validate();
    const double v = s.protocol.total_variance();
    const double t1 = s.channel_a.transmission;
    const double t2 = s.channel_b.transmission;
    const double n1 = epr_variance(s.channel_a);
    const double n2 = epr_variance(s.channel_b);
    // Eve's stored pair halves sharpen the broadcast: the cloner output
    // variance drops from N to 1/N once conditioned on E''.
    const double common = (1.0 - t1) / n1 + t2 * v + (1.0 - t2) / n2;
    const double unconditioned = t1 * v + common;
    const double conditioned = t1 + common;
    return std::log2(unconditioned / conditioned);
}

double eve_holevo_dr(const ScenarioSpec& s) {
    s.validate();
    const CloneSide a = side_a(s);
    if (!a.lossy)
        return 0.0; // cloner decoupled, no modes stored
    const double s_e = side_entropy(a);
    CloneSide cond = a;
    cond.kept_var = (1.0 - a.t) * 1.0 + a.t * a.n; // encoder variance slot -> 1
    const double s_cond = side_entropy(cond);
    return s_e - s_cond;
}

KeyRatePoint key_rate_dr(const ScenarioSpec& s) {
    return KeyRatePoint::assemble(s.protocol.beta, mutual_info_ab(s),
                                  eve_shannon_dr(s), eve_holevo_dr(s));
}

double eve_shannon_rr(const ScenarioSpec& s) {
    s.validate();
    const double v_s = s.protocol.modulation_variance;
    const double t2 = s.channel_b.transmission;
    if (v_s < 1e-9)
        throw divergent_information("I_B'E3 diverges without modulation (V_S -> 0)");
    if (t2 < 1e-9)
        throw divergent_information("I_B'E3 diverges for vanishing Bob-channel transmission");
    const double v = s.protocol.total_variance();
    const double t1 = s.channel_a.transmission;
    const double n1 = epr_variance(s.channel_a);
    const double n2 = epr_variance(s.channel_b);
    const double v_e3 = t1 * v + (1.0 - t1) * n1 + t2 * v + (1.0 - t2) * n2;
    return std::log2(v_e3 / (t2 * v_s));
}

CovMatrix dr_eve_cov(const ScenarioSpec& s, double v_arg) {
    s.validate();
    const CloneSide a = side_a(s);
    const double kept = (1.0 - a.t) * v_arg + a.t * a.n;
    return CovMatrix::two_mode_standard(kept, a.n, a.kept_cross);
}

CovMatrix rr_eve_cov(const ScenarioSpec& s) {
    s.validate();
    return CovMatrix(eve_cov_matrix(side_a(s), side_b(s)));
}

Eigen::MatrixXd rr_recast_cross(const ScenarioSpec& s) {
    s.validate();
    return recast_cross_matrix(side_a(s), side_b(s));
}

CovMatrix rr_eve_cov_conditional(const ScenarioSpec& s) {
    const double b_v = recast_variances(s).total;
    return condition_on_modes(rr_eve_cov(s), rr_recast_cross(s),
                              b_v * Eigen::MatrixXd::Identity(2, 2));
}

CovMatrix rr_eve_cov_conditional_explicit(const ScenarioSpec& s) {
    const CloneSide a = side_a(s);
    const CloneSide b = side_b(s);
    const double b_v = recast_variances(s).total;

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(8, 8);
    put_i(m, 0, 0, a.kept_var - a.xi * a.xi / b_v);
    put_sz(m, 0, 2, a.kept_cross - a.xi * a.leak_cross / b_v);
    put_sz(m, 0, 4, a.xi * b.xi / b_v);
    put_i(m, 0, 6, a.xi * b.leak_cross / b_v);
    put_i(m, 2, 2, a.n - a.leak_cross * a.leak_cross / b_v);
    put_i(m, 2, 4, b.xi * a.leak_cross / b_v);
    put_sz(m, 2, 6, a.leak_cross * b.leak_cross / b_v);
    put_i(m, 4, 4, b.kept_var - b.xi * b.xi / b_v);
    put_sz(m, 4, 6, b.kept_cross - b.xi * b.leak_cross / b_v);
    put_i(m, 6, 6, b.n - b.leak_cross * b.leak_cross / b_v);

    Eigen::MatrixXd sym = m.selfadjointView<Eigen::Upper>();
    return CovMatrix(std::move(sym));
}

double eve_holevo_rr_exact(const ScenarioSpec& s) {
    s.validate();
    const CloneSide a = side_a(s);
    const CloneSide b = side_b(s);

    // Lossless channels leave the corresponding cloner pair in a pure
    // decoupled state: drop those modes instead of carrying vacuum
    // blocks through the eigensolves.
    if (!a.lossy && !b.lossy)
        return 0.0;

    double s_e = 0.0;
    std::vector<int> offsets; // row offsets of active pairs in the full 8x8
    if (a.lossy) {
        s_e += side_entropy(a);
        offsets.push_back(0);
    }
    if (b.lossy) {
        s_e += side_entropy(b);
        offsets.push_back(4);
    }

    const double b_v = recast_variances(s).total;
    const int dim = 4 * static_cast<int>(offsets.size());
    const Eigen::MatrixXd full_cov = eve_cov_matrix(a, b);
    const Eigen::MatrixXd full_cross = recast_cross_matrix(a, b);
    Eigen::MatrixXd cov(dim, dim);
    Eigen::MatrixXd cross(dim, 2);
    for (std::size_t bi = 0; bi < offsets.size(); ++bi) {
        cross.block(4 * bi, 0, 4, 2) = full_cross.block(offsets[bi], 0, 4, 2);
        for (std::size_t bj = 0; bj < offsets.size(); ++bj)
            cov.block(4 * bi, 4 * bj, 4, 4) = full_cov.block(offsets[bi], offsets[bj], 4, 4);
    }

    const CovMatrix conditional = condition_on_modes(
        CovMatrix(std::move(cov)), cross, b_v * Eigen::MatrixXd::Identity(2, 2));
    const double scale = conditional.data().cwiseAbs().maxCoeff();
    const double s_cond =
        entropy_from_spectrum(symplectic_eigenvalues_spectral(conditional), scale);
    return s_e - s_cond;
}

double eve_holevo_rr_asymptotic(const ScenarioSpec& s) {
    s.validate();
    const CloneSide a = side_a(s);
    const CloneSide b = side_b(s);
    if (!a.lossy || !b.lossy || a.t < kValidationTol || b.t < kValidationTol)
        throw invalid_parameters("asymptotic Holevo route requires 0 < T < 1 on both channels");

    const double s_e = side_entropy(a) + side_entropy(b);
    const double det4 = rr_eve_cov_conditional_explicit(s).data().determinant();
    if (det4 <= 0.0)
        throw unphysical_matrix("conditional covariance determinant is nonpositive");
    const double nu34 = std::sqrt(det4) / (a.n * b.n);
    const double e = std::exp(1.0);
    const double s_cond = g_entropy((a.n - 1.0) / 2.0) + g_entropy((b.n - 1.0) / 2.0) +
                          std::log2(e * e * nu34 / 4.0);
    return s_e - s_cond;
}

KeyRatePoint key_rate_rr(const ScenarioSpec& s, RrHolevoMode mode) {
    const double chi = mode == RrHolevoMode::exact ? eve_holevo_rr_exact(s)
                                                   : eve_holevo_rr_asymptotic(s);
    return KeyRatePoint::assemble(s.protocol.beta, mutual_info_ab(s), eve_shannon_rr(s), chi);
}

KeyRatePoint key_rate(const ScenarioSpec& s, RrHolevoMode rr_mode) {
    return s.protocol.direction == Direction::direct ? key_rate_dr(s)
                                                     : key_rate_rr(s, rr_mode);
}

} // namespace cvmdi
