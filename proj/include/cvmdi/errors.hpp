#pragma once

#include <stdexcept>
#include <string>

namespace cvmdi {

// Channel/protocol parameters outside their physical domain
// (negative noise, transmission out of [0,1], lossless channel with
// excess noise, zero-transmission channel, ...).
class invalid_parameters : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Matrix input that is not a usable covariance matrix: wrong shape,
// not symmetric, not positive definite, or not in the expected
// structural form for a closed-form routine.
class invalid_matrix : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Covariance data whose symplectic spectrum violates the uncertainty
// principle beyond numerical tolerance.
class unphysical_matrix : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Information quantity diverges for the requested parameters
// (e.g. conditional variance collapses to zero).
class divergent_information : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// Too few samples for the requested estimator.
class insufficient_data : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Phase recovery called with degenerate interference outputs.
class indeterminate_phase : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

} // namespace cvmdi
