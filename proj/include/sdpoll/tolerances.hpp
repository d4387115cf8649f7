#pragma once

namespace sdpoll::tol {

// Stochasticity of routing rows. Violations are reported, never repaired.
inline constexpr double row_sum = 1e-12;

// Agreement required when rho_hat is recomputed from scratch.
inline constexpr double rho_recompute = 1e-14;

// Residual ceiling for the linear solves (flow balance, induced chains).
inline constexpr double solver_residual = 1e-10;

// Band around a strict inequality inside which no verdict is issued.
inline constexpr double strict_margin = 1e-9;

// |rho_hat - 1| below this is treated as a degenerate instance.
inline constexpr double degenerate_traffic = 1e-12;

// Largest spread allowed across stations for a model to count as
// rotationally symmetric.
inline constexpr double a1_spread = 1e-12;

// Max-norm ceiling on the routing commutation defect.
inline constexpr double a3_commutation = 1e-12;

// Minimum distance of mu_tilde_k from 1 before the closed forms divide by ~0.
inline constexpr double eigen_margin = 1e-9;

// Imaginary residual allowed on formulas that must be real, relative to
// 1 + |real part|.
inline constexpr double imag_rel = 1e-9;

// Same, for the eigenvalue sums (absolute).
inline constexpr double imag_eigen_sum = 1e-10;

// Condition number beyond which the solver flags the instance.
inline constexpr double condition_warn = 1e12;

// Entries at or below this are treated as absent transitions when
// extracting communicating classes.
inline constexpr double closed_class_leak = 1e-15;

// Hard cap for exhaustive face enumeration (2^N - 1 faces).
inline constexpr int max_face_stations = 20;

}  // namespace sdpoll::tol
