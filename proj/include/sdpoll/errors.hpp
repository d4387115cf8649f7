#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sdpoll {

// Raised when a model instance breaks one of its structural invariants
// (bad row sums, non-positive rates, inconsistent moments, parse failures).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// Base class for failures of the analytical machinery on a structurally
// valid instance.
struct SolveError : std::runtime_error {
    explicit SolveError(const std::string& what) : std::runtime_error(what) {}
};

// The traffic index is too close to 1; the linear rewrite of the balance
// equations divides by (1 - rho_hat).
struct DegenerateTraffic final : SolveError {
    explicit DegenerateTraffic(double rho_hat)
        : SolveError("degenerate traffic index rho_hat = " + std::to_string(rho_hat) +
                     " (solver requires rho_hat != 1)"),
          rho_hat(rho_hat) {}
    double rho_hat;
};

// The empty-station routing matrix is reducible; the server position system
// loses rank. Carries the class structure and the per-class compatibility
// residuals so callers can report why the instance is out of scope.
struct MultipleEssentialClasses final : SolveError {
    MultipleEssentialClasses(std::vector<std::vector<int>> classes_,
                             std::vector<double> residuals_);
    std::vector<std::vector<int>> classes;
    std::vector<double> residuals;
};

struct SingularSystem final : SolveError {
    explicit SingularSystem(const std::string& what) : SolveError(what) {}
};

// Offered load at or beyond saturation where a closed form requires
// stability (N*alpha >= 1 and friends).
struct UnstableRegime final : SolveError {
    explicit UnstableRegime(const std::string& what) : SolveError(what) {}
};

// A formula that must produce a real number came back with a significant
// imaginary part; almost always means a symmetry assumption was violated
// upstream of the call.
struct ComplexResidual final : SolveError {
    ComplexResidual(const std::string& where, double imag_part)
        : SolveError(where + ": imaginary residual " + std::to_string(imag_part) +
                     " exceeds tolerance"),
          imag_part(imag_part) {}
    double imag_part;
};

// An eigenvalue sum would divide by 1 - mu with mu too close to 1.
struct DegenerateEigenvalue final : SolveError {
    explicit DegenerateEigenvalue(const std::string& what) : SolveError(what) {}
};

// The Lyapunov construction could not be validated. Carries the face and
// coordinate where the first requirement broke.
struct CertificateFailed final : SolveError {
    CertificateFailed(const std::string& what, std::vector<int> face_, int coordinate_)
        : SolveError(what), face(std::move(face_)), coordinate(coordinate_) {}
    std::vector<int> face;
    int coordinate;  // 1-based station, 0 when the failure is not per-coordinate
};

struct StateSpaceTooLarge final : SolveError {
    explicit StateSpaceTooLarge(const std::string& what) : SolveError(what) {}
};

struct UnsupportedLaw final : SolveError {
    explicit UnsupportedLaw(const std::string& what) : SolveError(what) {}
};

// Guard against exhaustive face enumeration blowing up.
struct FaceLimitExceeded final : SolveError {
    explicit FaceLimitExceeded(const std::string& what) : SolveError(what) {}
};

}  // namespace sdpoll
