#include "cvmdi/symplectic.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "cvmdi/model.hpp"

namespace cvmdi {

namespace {

constexpr double kPinvCutoff = 1e-12;

double matrix_scale(const Eigen::MatrixXd& m) {
    return std::max(1.0, m.cwiseAbs().maxCoeff());
}

} // namespace

Eigen::MatrixXd symplectic_form(int modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * modes, 2 * modes);
    for (int k = 0; k < modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

CovMatrix::CovMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0 || m_.rows() % 2 != 0)
        throw invalid_matrix("covariance matrix must be square with even dimension");
    const double tol = kSymmetryTol * matrix_scale(m_);
    if ((m_ - m_.transpose()).cwiseAbs().maxCoeff() > tol)
        throw invalid_matrix("covariance matrix must be symmetric");
    m_ = 0.5 * (m_ + m_.transpose().eval());
}

CovMatrix CovMatrix::identity(int modes) {
    return CovMatrix(Eigen::MatrixXd::Identity(2 * modes, 2 * modes));
}

CovMatrix CovMatrix::two_mode_standard(double a, double b, double c) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(4, 4);
    m(0, 0) = m(1, 1) = a;
    m(2, 2) = m(3, 3) = b;
    m(0, 2) = m(2, 0) = c;
    m(1, 3) = m(3, 1) = -c;
    return CovMatrix(std::move(m));
}

CovMatrix CovMatrix::epr(double n) {
    if (n < 1.0)
        throw invalid_matrix("EPR variance must be >= 1");
    return two_mode_standard(n, n, std::sqrt(n * n - 1.0));
}

double SymplecticSpectrum::min() const {
    return values.empty() ? 0.0 : values.front();
}

double SymplecticSpectrum::product_squared() const {
    double p = 1.0;
    for (double v : values) p *= v * v;
    return p;
}

bool SymplecticSpectrum::physical(double tol) const {
    return !values.empty() && values.front() >= 1.0 - tol;
}

double g_entropy(double x) {
    if (x < -kValidationTol)
        throw invalid_parameters("g_entropy requires x >= 0, got " + std::to_string(x));
    if (x <= 0.0)
        return 0.0;
    return (x + 1.0) * std::log2(x + 1.0) - x * std::log2(x);
}

double entropy_from_spectrum(const SymplecticSpectrum& spectrum, double scale) {
    const double floor_tol = kPhysicalityTol * std::max(1.0, scale);
    double s = 0.0;
    for (double nu : spectrum.values) {
        if (nu < 1.0 - floor_tol)
            throw unphysical_matrix("symplectic eigenvalue below 1: " + std::to_string(nu));
        s += g_entropy(std::max(0.0, (nu - 1.0) / 2.0));
    }
    return s;
}

SymplecticSpectrum symplectic_eigenvalues_spectral(const CovMatrix& gamma) {
    const Eigen::MatrixXd& m = gamma.data();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    if (es.info() != Eigen::Success)
        throw invalid_matrix("eigendecomposition of covariance matrix failed");
    const double scale = es.eigenvalues().cwiseAbs().maxCoeff();
    if (es.eigenvalues().minCoeff() <= kPinvCutoff * scale)
        throw invalid_matrix("covariance matrix must be positive definite");

    // S = gamma^(1/2); S*Omega*S is antisymmetric with eigenvalues
    // +-i*nu_k, so its singular values are the nu_k, each twice.
    const Eigen::MatrixXd sqrt_m =
        es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
    const Eigen::MatrixXd core = sqrt_m * symplectic_form(gamma.modes()) * sqrt_m;
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(core);
    const auto& sv = svd.singularValues(); // descending

    SymplecticSpectrum spec;
    spec.values.reserve(gamma.modes());
    for (int k = 0; k < gamma.modes(); ++k)
        spec.values.push_back(0.5 * (sv(2 * k) + sv(2 * k + 1)));
    std::sort(spec.values.begin(), spec.values.end());
    return spec;
}

SymplecticSpectrum symplectic_eigenvalues_two_mode(double a, double b, double c) {
    const double delta = a * a + b * b - 2.0 * c * c;
    const double dsqrt = std::abs(a * b - c * c); // sqrt(D)
    double disc = delta * delta - 4.0 * dsqrt * dsqrt;
    const double scale = std::max(1.0, delta * delta);
    if (disc < -1e-12 * scale)
        throw unphysical_matrix("two-mode form has complex symplectic eigenvalues");
    disc = std::max(0.0, disc);
    const double big_sq = 0.5 * (delta + std::sqrt(disc));
    if (big_sq <= 0.0)
        throw unphysical_matrix("two-mode form has nonpositive squared eigenvalues");
    const double nu_big = std::sqrt(big_sq);
    const double nu_small = dsqrt / nu_big; // stable conjugate of the small root
    SymplecticSpectrum spec;
    spec.values = {nu_small, nu_big};
    return spec;
}

SymplecticSpectrum symplectic_eigenvalues_two_mode(const CovMatrix& gamma) {
    if (gamma.modes() != 2)
        throw invalid_matrix("two-mode route requires a 4x4 covariance matrix");
    const Eigen::MatrixXd& m = gamma.data();
    const double a = m(0, 0);
    const double b = m(2, 2);
    const double c = m(0, 2);
    const double tol = kSymmetryTol * matrix_scale(m);
    Eigen::MatrixXd expected = CovMatrix::two_mode_standard(a, b, c).data();
    if ((m - expected).cwiseAbs().maxCoeff() > tol)
        throw invalid_matrix("matrix is not in the standard two-mode form (a*I, b*I, c*sigma_z)");
    return symplectic_eigenvalues_two_mode(a, b, c);
}

// The invariants below are the coefficients of det(x*I - Omega*gamma)
// = prod_k (x^2 + nu_k^2): summing the principal minors of order 2j of
// Omega*gamma yields the elementary symmetric polynomial e_j(nu^2).
// Summing minors of gamma itself does not (any correlated state is a
// counterexample), so the enumeration runs over Omega*gamma.
PrincipalMinors principal_minors(const CovMatrix& gamma) {
    if (gamma.modes() != 4)
        throw invalid_matrix("principal minors are defined here for four-mode (8x8) matrices");
    const Eigen::MatrixXd og = symplectic_form(4) * gamma.data();
    const int n = 8;

    double sums[4] = {0.0, 0.0, 0.0, 0.0};
    // Enumerate index subsets of size 2j via bitmasks.
    for (unsigned mask = 1; mask < (1u << n); ++mask) {
        const int sz = __builtin_popcount(mask);
        if (sz % 2 != 0)
            continue;
        int idx[8], k = 0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) idx[k++] = i;
        Eigen::MatrixXd sub(sz, sz);
        for (int r = 0; r < sz; ++r)
            for (int cl = 0; cl < sz; ++cl)
                sub(r, cl) = og(idx[r], idx[cl]);
        sums[sz / 2 - 1] += sub.determinant();
    }
    return PrincipalMinors{sums[0], sums[1], sums[2], sums[3]};
}

SymplecticSpectrum symplectic_eigenvalues_minor_route(const CovMatrix& gamma) {
    const PrincipalMinors pm = principal_minors(gamma);

    // Companion matrix of x^4 - d1 x^3 + d2 x^2 - d3 x + d4.
    Eigen::Matrix4d comp = Eigen::Matrix4d::Zero();
    comp(1, 0) = comp(2, 1) = comp(3, 2) = 1.0;
    comp(0, 3) = -pm.delta4;
    comp(1, 3) = pm.delta3;
    comp(2, 3) = -pm.delta2;
    comp(3, 3) = pm.delta1;

    Eigen::EigenSolver<Eigen::Matrix4d> es(comp);
    if (es.info() != Eigen::Success)
        throw invalid_matrix("companion-matrix eigensolve failed");

    const double imag_tol = 1e-7 * (1.0 + std::abs(pm.delta1));
    SymplecticSpectrum spec;
    spec.values.reserve(4);
    for (int i = 0; i < 4; ++i) {
        const std::complex<double> root = es.eigenvalues()(i);
        if (std::abs(root.imag()) > imag_tol)
            throw unphysical_matrix("quartic in nu^2 has a complex root");
        if (root.real() <= 0.0)
            throw unphysical_matrix("quartic in nu^2 has a nonpositive root");
        spec.values.push_back(std::sqrt(root.real()));
    }
    std::sort(spec.values.begin(), spec.values.end());
    return spec;
}

CovMatrix condition_on_modes(const CovMatrix& gamma,
                             const Eigen::MatrixXd& cross,
                             const Eigen::MatrixXd& measured) {
    if (measured.rows() != measured.cols())
        throw invalid_matrix("measured-mode covariance must be square");
    if (cross.rows() != gamma.dim() || cross.cols() != measured.rows())
        throw invalid_matrix("cross-covariance block has inconsistent dimensions");
    if (cross.isZero(0.0))
        return gamma;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(measured, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = kPinvCutoff * (sv.size() > 0 ? sv(0) : 0.0);
    Eigen::VectorXd inv_sv(sv.size());
    for (int i = 0; i < sv.size(); ++i)
        inv_sv(i) = sv(i) > cutoff ? 1.0 / sv(i) : 0.0;
    const Eigen::MatrixXd pinv = svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().transpose();

    Eigen::MatrixXd out = gamma.data() - cross * pinv * cross.transpose();
    out = 0.5 * (out + out.transpose().eval());
    return CovMatrix(std::move(out));
}

} // namespace cvmdi
