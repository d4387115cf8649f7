#pragma once

#include <Eigen/Dense>

#include "sdpoll/model.hpp"

namespace sdpoll {

// Stationary law of the server position. f(j) = P(S = j), f_tilde(j) =
// P(S = j, station j empty), tau_bar the stationary mean time between two
// polling instants, cycle(j) the mean time between consecutive visits to j.
struct ServerDistribution {
    Eigen::VectorXd f;
    Eigen::VectorXd f_tilde;
    Eigen::VectorXd cycle;
    double tau_bar = 0.0;
    double rho_hat = 0.0;
    double condition = 0.0;       // condition number of the solved system
    bool condition_warning = false;
};

struct FlowResiduals {
    double proba = 0.0;  // max-norm defect of F'[I-P] = Ft'[Pt-P]
    double flux = 0.0;   // max-norm defect of F'[I-A] = Ft'[I-A+At]
};

struct StationCondition {
    bool pass = false;
    double margin = 0.0;  // F_j - lambda_j tau_bar
};

// Necessary-condition report: rho_hat < 1, lambda_j tau_bar < F_j for all
// j, and 1 - sum lambda_j tau_j > 0.
struct NecessaryConditions {
    bool rho_pass = false;
    double rho_margin = 0.0;  // 1 - rho_hat
    std::vector<StationCondition> flux;
    bool flux_pass = false;
    bool sup_pass = false;
    double sup_margin = 0.0;  // 1 - sum lambda_j tau_j
    [[nodiscard]] bool all() const { return rho_pass && flux_pass && sup_pass; }
};

// Solves the (N+1)-unknown linear system in (F, tau_bar), with the
// normalization row replacing the redundant balance row. Requires a unique
// essential class of p_tilde and rho_hat away from 1.
[[nodiscard]] ServerDistribution solve_server_distribution(const PollingModel& m);

[[nodiscard]] FlowResiduals flow_residuals(const PollingModel& m, const ServerDistribution& d);

[[nodiscard]] NecessaryConditions necessary_conditions(const PollingModel& m,
                                                       const ServerDistribution& d);

}  // namespace sdpoll
