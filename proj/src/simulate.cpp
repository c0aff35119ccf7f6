#include "cvmdi/simulate.hpp"

#include <cmath>
#include <numeric>

namespace cvmdi {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr std::size_t kChunkPulses = 1u << 16;

double mean(const std::vector<double>& x, std::size_t lo, std::size_t hi) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += x[i];
    return s / static_cast<double>(hi - lo);
}

double covariance(const std::vector<double>& x, const std::vector<double>& y,
                  std::size_t lo, std::size_t hi) {
    const double mx = mean(x, lo, hi);
    const double my = mean(y, lo, hi);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += (x[i] - mx) * (y[i] - my);
    return s / static_cast<double>(hi - lo - 1);
}

double variance(const std::vector<double>& x, std::size_t lo, std::size_t hi) {
    return covariance(x, x, lo, hi);
}

// Residual variance of y after OLS regression on two regressors.
double residual_variance(const std::vector<double>& y, const std::vector<double>& r1,
                         const std::vector<double>& r2, std::size_t lo, std::size_t hi) {
    const double v1 = variance(r1, lo, hi);
    const double v2 = variance(r2, lo, hi);
    const double c12 = covariance(r1, r2, lo, hi);
    const double cy1 = covariance(y, r1, lo, hi);
    const double cy2 = covariance(y, r2, lo, hi);
    const double det = v1 * v2 - c12 * c12;
    double explained = 0.0;
    if (std::abs(det) > 0.0) {
        const double b1 = (v2 * cy1 - c12 * cy2) / det;
        const double b2 = (v1 * cy2 - c12 * cy1) / det;
        explained = b1 * cy1 + b2 * cy2;
    }
    return variance(y, lo, hi) - explained;
}

struct RangeEstimate {
    double t1 = 0.0;
    double t2 = 0.0;
    double pooled_excess = 0.0;
    double eps_sym = 0.0;
};

RangeEstimate estimate_range(const SampleBatch& b, double v_s, std::size_t lo, std::size_t hi) {
    RangeEstimate e;
    const double amp_a_q = covariance(b.q_broadcast, b.q_enc_a, lo, hi) / v_s;
    const double amp_a_p = covariance(b.p_broadcast, b.p_enc_a, lo, hi) / v_s;
    const double amp_b_q = covariance(b.q_broadcast, b.q_enc_b, lo, hi) / v_s;
    const double amp_b_p = covariance(b.p_broadcast, b.p_enc_b, lo, hi) / v_s;
    e.t1 = 0.5 * (amp_a_q * amp_a_q + amp_a_p * amp_a_p);
    e.t2 = 0.5 * (amp_b_q * amp_b_q + amp_b_p * amp_b_p);

    const double resid_q = residual_variance(b.q_broadcast, b.q_enc_a, b.q_enc_b, lo, hi);
    const double resid_p = residual_variance(b.p_broadcast, b.p_enc_a, b.p_enc_b, lo, hi);
    // Residual = T1 eps_A + T2 eps_B + 2 (two vacuum units).
    e.pooled_excess = 0.5 * (resid_q + resid_p) - 2.0;
    e.eps_sym = e.pooled_excess / (e.t1 + e.t2);
    return e;
}

double std_error(const std::vector<double>& sub_estimates) {
    const std::size_t n = sub_estimates.size();
    const double m = std::accumulate(sub_estimates.begin(), sub_estimates.end(), 0.0) /
                     static_cast<double>(n);
    double ss = 0.0;
    for (double v : sub_estimates) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
}

} // namespace

double GaussianSampler::uniform() {
    // Top 53 bits, offset to stay strictly inside (0, 1).
    return (static_cast<double>(eng_() >> 11) + 0.5) * 0x1.0p-53;
}

double GaussianSampler::normal() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double phi = kTwoPi * uniform();
    spare_ = r * std::sin(phi);
    have_spare_ = true;
    return r * std::cos(phi);
}

std::uint64_t derive_subseed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

EprDraw draw_epr_pair(GaussianSampler& rng, double n, bool conjugate) {
    const double c = std::sqrt(std::max(0.0, n * n - 1.0)) * (conjugate ? -1.0 : 1.0);
    const double sqrt_n = std::sqrt(n);
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    EprDraw d;
    d.kept = sqrt_n * z1;
    d.stored = (c * z1 + z2) / sqrt_n;
    return d;
}

SampleBatch simulate_protocol(const ScenarioSpec& s, std::size_t count, std::uint64_t seed) {
    s.validate();
    if (count < 1)
        throw insufficient_data("simulation needs at least one pulse");

    const double t1 = s.channel_a.transmission;
    const double t2 = s.channel_b.transmission;
    const double n1 = epr_variance(s.channel_a);
    const double n2 = epr_variance(s.channel_b);
    const double sig = std::sqrt(s.protocol.modulation_variance);
    const double st1 = std::sqrt(t1), sr1 = std::sqrt(1.0 - t1);
    const double st2 = std::sqrt(t2), sr2 = std::sqrt(1.0 - t2);

    SampleBatch b;
    b.count = count;
    b.rng_seed = seed;
    b.true_t2 = t2;
    for (auto* v : {&b.q_enc_a, &b.p_enc_a, &b.q_enc_b, &b.p_enc_b,
                    &b.q_broadcast, &b.p_broadcast, &b.q_recast_b, &b.p_recast_b})
        v->resize(count);

    for (std::size_t chunk = 0; chunk * kChunkPulses < count; ++chunk) {
        GaussianSampler rng(derive_subseed(seed, chunk));
        const std::size_t lo = chunk * kChunkPulses;
        const std::size_t hi = std::min(count, lo + kChunkPulses);
        for (std::size_t i = lo; i < hi; ++i) {
            // Fixed draw order per pulse: encodings, vacua, EPR pairs.
            const double qa_s = sig * rng.normal();
            const double pa_s = sig * rng.normal();
            const double qb_s = sig * rng.normal();
            const double pb_s = sig * rng.normal();
            const double qa_n = rng.normal();
            const double pa_n = rng.normal();
            const double qb_n = rng.normal();
            const double pb_n = rng.normal();
            const EprDraw e1q = draw_epr_pair(rng, n1, false);
            const EprDraw e1p = draw_epr_pair(rng, n1, true);
            const EprDraw e2q = draw_epr_pair(rng, n2, false);
            const EprDraw e2p = draw_epr_pair(rng, n2, true);

            const double in_a_q = st1 * (qa_s + qa_n) + sr1 * e1q.kept;
            const double in_a_p = st1 * (pa_s + pa_n) + sr1 * e1p.kept;
            const double in_b_q = st2 * (qb_s + qb_n) + sr2 * e2q.kept;
            const double in_b_p = st2 * (pb_s + pb_n) + sr2 * e2p.kept;

            // BSM outcome, already rescaled by sqrt(2) (the splitter's
            // 1/sqrt(2) is incorporated into the broadcast convention).
            const double q_hat = in_a_q - in_b_q;
            const double p_hat = in_a_p + in_b_p;

            b.q_enc_a[i] = qa_s;
            b.p_enc_a[i] = pa_s;
            b.q_enc_b[i] = qb_s;
            b.p_enc_b[i] = pb_s;
            b.q_broadcast[i] = q_hat;
            b.p_broadcast[i] = p_hat;
            b.q_recast_b[i] = q_hat + st2 * qb_s;
            b.p_recast_b[i] = p_hat - st2 * pb_s;
        }
    }
    return b;
}

SampleBatch recast_with_transmission(const SampleBatch& batch, double t2) {
    if (!(t2 >= 0.0 && t2 <= 1.0 + kValidationTol))
        throw invalid_parameters("recast transmission must lie in [0,1]");
    SampleBatch out = batch;
    const double st2 = std::sqrt(t2);
    out.true_t2 = t2;
    for (std::size_t i = 0; i < batch.count; ++i) {
        out.q_recast_b[i] = batch.q_broadcast[i] + st2 * batch.q_enc_b[i];
        out.p_recast_b[i] = batch.p_broadcast[i] - st2 * batch.p_enc_b[i];
    }
    return out;
}

ChannelEstimates estimate_channels(const SampleBatch& batch, double declared_v_s,
                                   bool symmetric_noise) {
    if (batch.count < 100)
        throw insufficient_data("channel estimation needs at least 100 pulses, got " +
                                std::to_string(batch.count));
    if (!(declared_v_s > kValidationTol))
        throw invalid_parameters("channel estimation needs nonzero modulation variance");

    const RangeEstimate full = estimate_range(batch, declared_v_s, 0, batch.count);

    const std::size_t n_sub = 10;
    const std::size_t sub = batch.count / n_sub;
    std::vector<double> t1s, t2s, pooled, eps;
    for (std::size_t k = 0; k < n_sub; ++k) {
        const RangeEstimate e = estimate_range(batch, declared_v_s, k * sub, (k + 1) * sub);
        t1s.push_back(e.t1);
        t2s.push_back(e.t2);
        pooled.push_back(e.pooled_excess);
        eps.push_back(e.eps_sym);
    }

    ChannelEstimates out;
    out.alice.t_hat = full.t1;
    out.alice.t_std_error = std_error(t1s);
    out.bob.t_hat = full.t2;
    out.bob.t_std_error = std_error(t2s);
    out.pooled_excess = full.pooled_excess;
    out.pooled_excess_std_error = std_error(pooled);
    if (symmetric_noise) {
        // eps_A = eps_B declared: the pooled total T1 e + T2 e identifies
        // e = pooled / (T1 + T2), the same for both channels.
        const double se = std_error(eps);
        out.alice.eps_hat = out.bob.eps_hat = full.eps_sym;
        out.alice.eps_std_error = out.bob.eps_std_error = se;
        out.alice.eps_resolved = out.bob.eps_resolved = true;
    }
    return out;
}

InterferenceOutputs lo_interference_outputs(double theta_a, double theta_b, double intensity) {
    if (!(intensity > 0.0))
        throw invalid_parameters("LO intensity must be > 0");
    InterferenceOutputs o;
    o.bs1 = intensity * (1.0 + std::cos(theta_a - theta_b));
    o.bs2 = intensity * (1.0 + std::sin(theta_a - theta_b));
    return o;
}

double recover_phase_difference(double bs1, double bs2, double intensity) {
    if (!(intensity > 0.0))
        throw invalid_parameters("LO intensity must be > 0");
    const double tol = 1e-9 * intensity;
    if (bs1 < -tol || bs1 > 2.0 * intensity + tol || bs2 < -tol || bs2 > 2.0 * intensity + tol)
        throw invalid_parameters("interference outputs outside [0, 2*intensity]");
    const double x = bs1 / intensity - 1.0; // cos(dtheta)
    const double y = bs2 / intensity - 1.0; // sin(dtheta)
    if (std::abs(x) < 1e-9 && std::abs(y) < 1e-9)
        throw indeterminate_phase("both interference contrasts vanish");
    double dtheta = std::atan2(y, x);
    if (dtheta < 0.0)
        dtheta += kTwoPi;
    return dtheta;
}

double apply_reference_correction(double phi_b, double delta_theta) {
    double corrected = std::fmod(phi_b + delta_theta, kTwoPi);
    if (corrected < 0.0)
        corrected += kTwoPi;
    return corrected;
}

} // namespace cvmdi
