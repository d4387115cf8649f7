#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sdpoll/symmetric.hpp"

namespace sdpoll {

// Scalar data of a symmetric compound-Poisson station. Batches of mean b
// and second moment b2 arrive at rate lambda_hat; tau/tau2 are the
// inter-poll moments after a service, tau_tilde/tau_tilde2 after an empty
// find. w/sigma carry the switchover and service moments used by the
// named strategy formulas.
struct CompoundPoissonSpec {
    double lambda_hat = 0.0;
    double b = 1.0;
    double b2 = 1.0;
    double tau = 0.0;
    double tau2 = 0.0;
    double tau_tilde = 0.0;
    double tau_tilde2 = 0.0;
    double w = 0.0;
    double w2 = 0.0;
    double sigma = 0.0;
    double sigma2 = 0.0;

    [[nodiscard]] double lambda() const { return lambda_hat * b; }
};

// Input whose inter-poll moments come from one switchover plus one service
// (the same routing after service and after an empty find).
[[nodiscard]] CompoundPoissonSpec state_independent_spec(double lambda_hat, double b,
                                                         double b2, double w, double w2,
                                                         double sigma, double sigma2);

// Per-distance arrival moments of the given input, ready for a profile.
[[nodiscard]] SymmetricMoments compound_poisson_moments(const CompoundPoissonSpec& spec,
                                                        int n);

// Mean stationary waiting time from the general closed form; mu and
// mu_tilde are the routing eigenvalues ordered k = 1..N.
[[nodiscard]] double mean_wait(const CompoundPoissonSpec& spec,
                               const Eigen::VectorXcd& mu,
                               const Eigen::VectorXcd& mu_tilde);

// Specialization for matched routing with tau = w + sigma, tau_tilde = w.
[[nodiscard]] double mean_wait_state_independent(const CompoundPoissonSpec& spec,
                                                 const Eigen::VectorXcd& mu);

// Bernoulli schedule: after a service the server stays put with
// probability 1-pi and routes by the empty-station matrix with
// probability pi. Simple Poisson arrivals only (b = 1). pi = 0 is the
// exhaustive limit, pi = 1 the 1-limited one.
[[nodiscard]] double mean_wait_bernoulli(const CompoundPoissonSpec& spec,
                                         const Eigen::VectorXd& p_tilde_dist,
                                         double pi);

struct StrategyResult {
    std::string name;
    Eigen::VectorXd dist;
    double wait = 0.0;
};

struct StrategyComparison {
    std::vector<StrategyResult> ranked;  // ascending mean wait
    bool cyclic_present = false;         // some candidate is a co-prime pure shift
    bool cyclic_minimal = false;         // and it attains the minimum
};

struct RoutingCandidate {
    std::string name;
    Eigen::VectorXd dist;
};

// Evaluates matched-routing candidates driven by the same arrival and
// duration scalars and ranks them by mean wait.
[[nodiscard]] StrategyComparison strategy_compare(
    const CompoundPoissonSpec& spec, const std::vector<RoutingCandidate>& candidates);

}  // namespace sdpoll
