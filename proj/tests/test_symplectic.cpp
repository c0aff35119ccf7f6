#include "doctest.h"

#include <cmath>
#include <random>

#include "cvmdi/symplectic.hpp"
#include "test_helpers.hpp"

using namespace cvmdi;

namespace {

// Independent route to G(x): Shannon entropy of the thermal photon
// distribution p_k = x^k / (x+1)^(k+1) with mean photon number x.
double g_series_oracle(double x) {
    if (x <= 0.0)
        return 0.0;
    double s = 0.0;
    double p = 1.0 / (x + 1.0);
    const double ratio = x / (x + 1.0);
    for (int k = 0; k < 100000 && p > 1e-18; ++k) {
        s -= p * std::log2(p);
        p *= ratio;
    }
    return s;
}

} // namespace

TEST_CASE("g_entropy values and series oracle") {
    CHECK(g_entropy(0.0) == 0.0);
    CHECK(g_entropy(1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(g_entropy(0.5) == doctest::Approx(1.377443751081734).epsilon(1e-12));

    for (double x : {1e-6, 0.01, 0.1, 0.5, 1.0, 2.5, 4.0}) {
        CHECK(g_entropy(x) == doctest::Approx(g_series_oracle(x)).epsilon(1e-10));
    }

    CHECK_THROWS_AS(g_entropy(-0.1), invalid_parameters);
    CHECK(g_entropy(-1e-13) == 0.0); // within validation tolerance
}

TEST_CASE("g_entropy is monotone increasing and concave") {
    const double h = 1e-4;
    double prev = -1.0;
    double prev_slope = 1e300;
    for (double x = 0.05; x <= 20.0; x += 0.05) {
        const double g = g_entropy(x);
        CHECK(g > prev);
        const double slope = (g_entropy(x + h) - g_entropy(x - h)) / (2.0 * h);
        CHECK(slope < prev_slope);
        prev = g;
        prev_slope = slope;
    }
}

TEST_CASE("covariance matrix constructor validates shape and symmetry") {
    CHECK_THROWS_AS(CovMatrix(Eigen::MatrixXd::Identity(3, 3)), invalid_matrix);
    Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(4, 4);
    bad(0, 1) = 0.5; // not mirrored
    CHECK_THROWS_AS(CovMatrix(bad), invalid_matrix);
}

TEST_CASE("spectral route on reference states") {
    const auto vac = symplectic_eigenvalues_spectral(CovMatrix::identity(2));
    CHECK(vac.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(vac.values[1] == doctest::Approx(1.0).epsilon(1e-12));

    for (double n : {1.0, 1.5, 4.0, 30.0}) {
        const auto e = symplectic_eigenvalues_spectral(CovMatrix::epr(n));
        CHECK(e.values[0] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(e.values[1] == doctest::Approx(1.0).epsilon(1e-9));
    }

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
    m.diagonal() << 5.0, 5.0, 2.0, 2.0;
    const auto th = symplectic_eigenvalues_spectral(CovMatrix(m));
    CHECK(th.values[0] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(th.values[1] == doctest::Approx(5.0).epsilon(1e-12));

    CHECK_THROWS_AS(symplectic_eigenvalues_spectral(CovMatrix(
                        (-1.0 * Eigen::MatrixXd::Identity(4, 4)).eval())),
                    invalid_matrix);
}

TEST_CASE("spectral route recovers known spectra of random states") {
    std::mt19937_64 rng(314159);
    for (int modes : {1, 2, 3, 4}) {
        for (int rep = 0; rep < 40; ++rep) {
            const auto st = testutil::random_state(modes, rng);
            const auto spec = symplectic_eigenvalues_spectral(st.cov);
            REQUIRE(spec.values.size() == st.spectrum.size());
            for (std::size_t k = 0; k < st.spectrum.size(); ++k)
                CHECK(spec.values[k] == doctest::Approx(st.spectrum[k]).epsilon(1e-9));
            // det identity
            CHECK(spec.product_squared() ==
                  doctest::Approx(st.cov.data().determinant()).epsilon(1e-8));
        }
    }
}

TEST_CASE("purity of symplectic transforms of vacuum") {
    std::mt19937_64 rng(2718);
    for (int modes : {1, 2, 4}) {
        for (int rep = 0; rep < 30; ++rep) {
            const auto st = testutil::random_state(modes, rng, /*pure=*/true);
            const auto spec = symplectic_eigenvalues_spectral(st.cov);
            for (double nu : spec.values)
                CHECK(nu == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("two-mode closed form matches the spectral route") {
    // pure EPR
    for (double n : {1.0, 2.0, 10.0}) {
        const auto s = symplectic_eigenvalues_two_mode(CovMatrix::epr(n));
        CHECK(s.values[0] == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(s.values[1] == doctest::Approx(1.0).epsilon(1e-9));
    }

    // frozen case: a = 3.5, b = 2, c^2 = 1.5; product must be |ab - c^2| = 5.5
    const auto f = symplectic_eigenvalues_two_mode(3.5, 2.0, std::sqrt(1.5));
    CHECK(f.values[0] == doctest::Approx(1.71221).epsilon(1e-4));
    CHECK(f.values[1] == doctest::Approx(3.21221).epsilon(1e-4));
    CHECK(f.values[0] * f.values[1] == doctest::Approx(5.5).epsilon(1e-12));
    const auto fs = symplectic_eigenvalues_spectral(CovMatrix::two_mode_standard(3.5, 2.0, std::sqrt(1.5)));
    CHECK(f.values[0] == doctest::Approx(fs.values[0]).epsilon(1e-10));
    CHECK(f.values[1] == doctest::Approx(fs.values[1]).epsilon(1e-10));

    // decoupled modes
    const auto d = symplectic_eigenvalues_two_mode(5.0, 2.0, 0.0);
    CHECK(d.values[0] == 2.0);
    CHECK(d.values[1] == 5.0);

    // non-standard form is rejected
    std::mt19937_64 rng(99);
    const auto generic = testutil::random_state(2, rng);
    CHECK_THROWS_AS(symplectic_eigenvalues_two_mode(generic.cov), invalid_matrix);
}

TEST_CASE("two-mode closed form agrees with spectral over the cloner parameter grid") {
    double worst = 0.0;
    for (double t : {0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99}) {
        for (double n : {1.0, 1.01, 1.5, 2.0, 5.0, 20.0}) {
            for (double v : {1.0, 2.0, 10.0, 1e2, 1e4}) {
                const double a = (1.0 - t) * v + t * n;
                const double c = std::sqrt(t * (n * n - 1.0));
                const auto closed = symplectic_eigenvalues_two_mode(a, n, c);
                const auto spectral =
                    symplectic_eigenvalues_spectral(CovMatrix::two_mode_standard(a, n, c));
                worst = std::max(worst, std::abs(closed.values[0] - spectral.values[0]));
                worst = std::max(worst, std::abs(closed.values[1] - spectral.values[1]));
            }
        }
    }
    CHECK(worst < 1e-9);
}

TEST_CASE("principal minors on diagonal states") {
    const auto id = principal_minors(CovMatrix::identity(4));
    CHECK(id.delta1 == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(id.delta2 == doctest::Approx(6.0).epsilon(1e-12));
    CHECK(id.delta3 == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(id.delta4 == doctest::Approx(1.0).epsilon(1e-12));

    const double a = 1.3, b = 2.7, c = 1.05, d = 4.2;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(8, 8);
    m.diagonal() << a, a, b, b, c, c, d, d;
    const auto pm = principal_minors(CovMatrix(m));
    CHECK(pm.delta1 == doctest::Approx(a * a + b * b + c * c + d * d).epsilon(1e-12));
    CHECK(pm.delta4 == doctest::Approx(std::pow(a * b * c * d, 2)).epsilon(1e-12));

    CHECK_THROWS_AS(principal_minors(CovMatrix::identity(2)), invalid_matrix);
}

TEST_CASE("principal minors match the characteristic-polynomial oracle") {
    std::mt19937_64 rng(555);
    for (int rep = 0; rep < 50; ++rep) {
        const auto st = testutil::random_state(4, rng);
        const auto pm = principal_minors(st.cov);
        const auto coeff =
            testutil::faddeev_leverrier(symplectic_form(4) * st.cov.data());
        // odd coefficients vanish for the symplectic product
        CHECK(std::abs(coeff[1]) < 1e-9 * (1.0 + std::abs(pm.delta1)));
        CHECK(std::abs(coeff[3]) < 1e-8 * (1.0 + std::abs(pm.delta2)));
        CHECK(pm.delta1 == doctest::Approx(-coeff[2]).epsilon(1e-9));
        CHECK(pm.delta2 == doctest::Approx(-coeff[4]).epsilon(1e-9));
        CHECK(pm.delta3 == doctest::Approx(-coeff[6]).epsilon(1e-9));
        CHECK(pm.delta4 == doctest::Approx(-coeff[8]).epsilon(1e-9));
        CHECK(pm.delta4 == doctest::Approx(st.cov.data().determinant()).epsilon(1e-9));
    }
}

TEST_CASE("minor route reproduces the spectral route") {
    const auto id = symplectic_eigenvalues_minor_route(CovMatrix::identity(4));
    for (double nu : id.values)
        CHECK(nu == doctest::Approx(1.0).epsilon(1e-9));

    // block-diagonal pair of pure EPR states
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(8, 8);
    m.block(0, 0, 4, 4) = CovMatrix::epr(3.0).data();
    m.block(4, 4, 4, 4) = CovMatrix::epr(1.7).data();
    const auto pure = symplectic_eigenvalues_minor_route(CovMatrix(m));
    for (double nu : pure.values)
        CHECK(nu == doctest::Approx(1.0).epsilon(1e-7));

    std::mt19937_64 rng(777);
    double worst = 0.0;
    for (int rep = 0; rep < 200; ++rep) {
        const auto st = testutil::random_state(4, rng);
        const auto a = symplectic_eigenvalues_spectral(st.cov);
        const auto b = symplectic_eigenvalues_minor_route(st.cov);
        for (int k = 0; k < 4; ++k)
            worst = std::max(worst, std::abs(a.values[k] - b.values[k]));
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("conditioning on uncorrelated modes is the identity") {
    std::mt19937_64 rng(31337);
    const auto st = testutil::random_state(3, rng);
    const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(6, 2);
    const auto out = condition_on_modes(st.cov, zero, 4.0 * Eigen::MatrixXd::Identity(2, 2));
    CHECK((out.data() - st.cov.data()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("conditioning reduces a single mode by the scalar rule") {
    // V(X|Y) = V(X) - |<XY>|^2 / V(Y), applied per quadrature.
    const double v = 3.0, w = 2.0, c = 1.1;
    const CovMatrix gamma(Eigen::MatrixXd(v * Eigen::MatrixXd::Identity(2, 2)));
    const Eigen::MatrixXd cross = c * Eigen::MatrixXd::Identity(2, 2);
    const auto out = condition_on_modes(gamma, cross, w * Eigen::MatrixXd::Identity(2, 2));
    CHECK(out(0, 0) == doctest::Approx(v - c * c / w).epsilon(1e-12));
    CHECK(out(1, 1) == doctest::Approx(v - c * c / w).epsilon(1e-12));
    CHECK(out(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("conditioning rejects inconsistent dimensions") {
    const CovMatrix gamma = CovMatrix::identity(2);
    CHECK_THROWS_AS(condition_on_modes(gamma, Eigen::MatrixXd::Zero(3, 2),
                                       Eigen::MatrixXd::Identity(2, 2)),
                    invalid_matrix);
    CHECK_THROWS_AS(condition_on_modes(gamma, Eigen::MatrixXd::Zero(4, 3),
                                       Eigen::MatrixXd::Identity(2, 2)),
                    invalid_matrix);
}

TEST_CASE("minor route flags matrices with complex quartic roots") {
    // A symmetric matrix that is no valid four-mode state: strong
    // off-diagonal coupling pushes the quartic roots off the real axis.
    Eigen::MatrixXd m = Eigen::MatrixXd::Identity(8, 8);
    m(0, 3) = m(3, 0) = 2.5;
    m(1, 2) = m(2, 1) = -2.5;
    m(4, 7) = m(7, 4) = 1.9;
    CHECK_THROWS_AS(symplectic_eigenvalues_minor_route(CovMatrix(m)), unphysical_matrix);
}
