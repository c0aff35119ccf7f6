#pragma once

#include <vector>

#include <Eigen/Dense>

#include "cvmdi/errors.hpp"

// Gaussian-state algebra: quadrature covariance matrices, symplectic
// eigenvalues by independent routes, Gaussian conditioning, and the
// thermal entropy function G.
//
// Quadrature ordering is (Q1, P1, Q2, P2, ...): mode k owns rows/cols
// 2k and 2k+1. All entries are in shot-noise units.

namespace cvmdi {

inline constexpr double kSymmetryTol = 1e-10;
inline constexpr double kPhysicalityTol = 1e-9;

// Block-diagonal symplectic form: n copies of [[0,1],[-1,0]].
Eigen::MatrixXd symplectic_form(int modes);

// Real symmetric 2n x 2n quadrature covariance matrix.
class CovMatrix {
public:
    // Validates even dimension and symmetry (to kSymmetryTol, relative
    // to the largest entry).
    explicit CovMatrix(Eigen::MatrixXd m);

    static CovMatrix identity(int modes);

    // [[a*I, c*sz], [c*sz, b*I]] with sz = diag(1,-1); the standard
    // two-mode form produced by a beam-split EPR pair.
    static CovMatrix two_mode_standard(double a, double b, double c);

    // Two-mode squeezed vacuum of variance n: two_mode_standard with
    // a = b = n, c = sqrt(n^2 - 1).
    static CovMatrix epr(double n);

    int modes() const { return static_cast<int>(m_.rows()) / 2; }
    int dim() const { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXd& data() const { return m_; }
    double operator()(int i, int j) const { return m_(i, j); }

private:
    Eigen::MatrixXd m_;
};

// Symplectic eigenvalues, ascending. For a physical state every value
// is >= 1 and the product of the squared values equals det(gamma).
struct SymplecticSpectrum {
    std::vector<double> values;

    double min() const;
    // prod nu_k^2; equals det(gamma) of the source matrix.
    double product_squared() const;
    bool physical(double tol = kPhysicalityTol) const;
};

// Thermal entropy G(x) = (x+1)log2(x+1) - x log2 x, the von Neumann
// entropy of a thermal state with mean photon number x. G(0) = 0 by
// continuous extension; inputs within kValidationTol below zero are
// treated as zero.
double g_entropy(double x);

// sum_k G((nu_k - 1)/2): entropy of a Gaussian state from its spectrum.
// Eigensolver roundoff is absolute in the matrix norm, so values within
// kPhysicalityTol * max(1, scale) below 1 are clamped to 1, where scale
// is the source matrix's largest entry; deeper violations throw.
double entropy_from_spectrum(const SymplecticSpectrum& spectrum, double scale = 1.0);

// General-purpose route: the eigenvalues of Omega*gamma come in pairs
// +-i*nu; equivalently the singular values of S*Omega*S with
// S = gamma^(1/2) pair up as {nu, nu}. Requires gamma positive
// definite.
SymplecticSpectrum symplectic_eigenvalues_spectral(const CovMatrix& gamma);

// Closed form for the standard two-mode form: with
// Delta = a^2 + b^2 - 2c^2 and D = (ab - c^2)^2,
//   nu_{1,2}^2 = (Delta -+ sqrt(Delta^2 - 4D)) / 2.
// The small root is evaluated as sqrt(D)/nu_2 to avoid cancellation.
// Throws invalid_matrix if gamma is not in standard form.
SymplecticSpectrum symplectic_eigenvalues_two_mode(const CovMatrix& gamma);
SymplecticSpectrum symplectic_eigenvalues_two_mode(double a, double b, double c);

// Symplectic invariants of a four-mode state: Delta_j equals the
// elementary symmetric polynomial of degree j in the squared
// symplectic eigenvalues, obtained as the sum of all principal minors
// of order 2j of Omega*gamma (the minors of the covariance matrix
// itself carry no symplectic meaning; see principal_minors notes in
// the implementation). Delta_4 = det(gamma).
struct PrincipalMinors {
    double delta1 = 0.0;
    double delta2 = 0.0;
    double delta3 = 0.0;
    double delta4 = 0.0;
};

PrincipalMinors principal_minors(const CovMatrix& gamma);

// Solves x^4 - Delta1 x^3 + Delta2 x^2 - Delta3 x + Delta4 = 0 for
// x = nu^2 via the companion matrix of the quartic. Roots with
// imaginary part above 1e-7*(1+|Delta1|), or nonpositive real parts,
// raise unphysical_matrix.
SymplecticSpectrum symplectic_eigenvalues_minor_route(const CovMatrix& gamma);

// Gaussian conditioning on a double-quadrature (heterodyne-like)
// measurement of external modes:
//   gamma' = gamma - cross * pinv(measured) * cross^T,
// with the Moore-Penrose inverse truncating singular values below
// 1e-12 of the largest. cross has one row per row of gamma and one
// column per row of measured. The result is re-symmetrized.
CovMatrix condition_on_modes(const CovMatrix& gamma,
                             const Eigen::MatrixXd& cross,
                             const Eigen::MatrixXd& measured);

} // namespace cvmdi
