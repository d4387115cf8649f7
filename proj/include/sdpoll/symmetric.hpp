#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sdpoll/model.hpp"

namespace sdpoll {

// Rotationally symmetric instance reduced to distance coordinates.
// p_dist(d-1) is the probability of moving d positions forward, d = 1..N
// (d = N is staying put). alpha / alpha_tilde are the mean arrivals per
// station over one inter-poll interval after a service / after an empty
// find; alpha2 / alpha_tilde2 the matching second-derivative moments by
// unsigned distance. mu / mu_tilde hold the routing eigenvalues ordered
// k = 1..N (so the last entry is 1). alpha_bar / alpha_bar2 are the
// empty-probability mixtures of the two families.
struct SymmetricProfile {
    int n = 0;
    Eigen::VectorXd p_dist;
    Eigen::VectorXd p_tilde_dist;
    double alpha = 0.0;
    double alpha_tilde = 0.0;
    Eigen::VectorXd alpha2;
    Eigen::VectorXd alpha_tilde2;
    Eigen::VectorXcd mu;
    Eigen::VectorXcd mu_tilde;
    double alpha_bar = 0.0;
    Eigen::VectorXd alpha_bar2;
};

struct AssumptionCheck {
    bool pass = false;
    // diagnostic magnitude: a deviation for a1/a3 (small passes), the
    // spectral margin for a2 (large passes)
    double defect = 0.0;
    std::string detail;
};

// a1: rotational symmetry (circulant routing, constant rates and moments).
// a2: no empty-routing eigenvalue at 1 except the trivial one.
// a3: the commutation identity tying the two routing matrices together.
struct AssumptionReport {
    AssumptionCheck a1;
    AssumptionCheck a2;
    AssumptionCheck a3;
    [[nodiscard]] bool all() const { return a1.pass && a2.pass && a3.pass; }
};

[[nodiscard]] AssumptionReport check_assumptions(const PollingModel& m);

// Eigenvalues of the circulant matrix with forward-distance weights
// coeffs(d-1), d = 1..N: entry k-1 holds sum_d coeffs_d omega_k^d.
[[nodiscard]] Eigen::VectorXcd circulant_eigenvalues(const Eigen::VectorXd& coeffs);

// omega(k-1) = exp(2*pi*i*k/N); column k-1 of v has components
// omega_k^{-i} and is a left eigenvector (v^T C = mu_k v^T) of every
// circulant C of size N, matching the row-measure use throughout.
struct CirculantBasis {
    Eigen::VectorXcd omega;
    Eigen::MatrixXcd v;
};

[[nodiscard]] CirculantBasis circulant_basis(int n);

// Second-moment scalars of a compound-Poisson station: the values that
// the profile carries for each unsigned distance.
struct SymmetricMoments {
    double alpha = 0.0;
    double alpha_tilde = 0.0;
    Eigen::VectorXd alpha2;
    Eigen::VectorXd alpha_tilde2;
};

// Assembles a profile from distance distributions and moment arrays,
// validating lengths, row sums and the unsigned-distance symmetry.
// Needs N*alpha < 1 to form the mixture fields.
[[nodiscard]] SymmetricProfile make_profile(int n, const Eigen::VectorXd& p_dist,
                                            const Eigen::VectorXd& p_tilde_dist,
                                            const SymmetricMoments& moments);

// Extracts the profile of a model that satisfies the rotational-symmetry
// assumption, deriving the moment arrays from the model's inter-poll
// second moments and batch law. Throws ValidationError when the model is
// not symmetric or lacks second moments.
[[nodiscard]] SymmetricProfile symmetric_profile(const PollingModel& m);

// Probability that the server finds its station empty.
[[nodiscard]] double empty_probability(const SymmetricProfile& prof);

// Mean queue length at the polled station, and at an arbitrary fixed
// station, both at polling instants.
[[nodiscard]] double mean_queue_at_polling(const SymmetricProfile& prof);
[[nodiscard]] double mean_queue_arbitrary(const SymmetricProfile& prof);

// sum over k < N of 1/(1 - mu_k), checked to be essentially real.
[[nodiscard]] double eigen_sum(const Eigen::VectorXcd& mu);

}  // namespace sdpoll
