#pragma once

#include <stdexcept>
#include <string>

namespace gmalab {

// Thrown when a Hermitian pencil (A, omega) cannot be reduced because omega is
// not positive definite (Cholesky breakdown).
class PencilError : public std::runtime_error {
public:
    explicit PencilError(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a spectrum is too degenerate for the requested operator value to
// be defined (e.g. a vanishing Monge-Ampere density S_n, or every admissible
// index tuple having a vanishing denominator).
class DegenerateSpectrum : public std::runtime_error {
public:
    explicit DegenerateSpectrum(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a Lagrangian phase value sits inside the guard band around 0 or
// pi, where the cotangent is not usable.
class PhaseSingularity : public std::runtime_error {
public:
    explicit PhaseSingularity(const std::string& what) : std::runtime_error(what) {}
};

// Thrown by field-level operations (densities, energies, flow right-hand
// sides) on pointwise positivity or phase loss.  For path quadratures the
// failing path parameter t in [0,1] is recorded; otherwise it is negative.
class DegenerateField : public std::runtime_error {
public:
    explicit DegenerateField(const std::string& what, double failing_t = -1.0)
        : std::runtime_error(what), failing_t_(failing_t) {}
    double failing_t() const { return failing_t_; }

private:
    double failing_t_;
};

// Thrown when a mollifier radius is below the grid spacing (the kernel would
// not be resolvable on the lattice).
class ResolutionError : public std::runtime_error {
public:
    explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gmalab
