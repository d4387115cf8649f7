#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "sdpoll/model.hpp"

namespace sdpoll {

// Shape of a travel-time law; Auto picks the shape whose first two
// moments match the model's. TwoPoint matches any valid (mean, m2) pair
// exactly.
enum class TravelKind { Auto, Deterministic, Exponential, TwoPoint };

// Batch-size law; Auto resolves from the model's (b, b2).
enum class BatchKind { Auto, Deterministic, Geometric };

struct SimConfig {
    long long horizon = 100000;      // polling events per replication
    double warmup_fraction = 0.1;    // leading fraction discarded
    std::uint64_t seed = 1;
    int replications = 10;
    TravelKind travel_law = TravelKind::Auto;
    TravelKind travel_law_tilde = TravelKind::Auto;
    BatchKind batch_law = BatchKind::Auto;
};

// One replication's post-warmup averages.
struct ReplicationEstimate {
    Eigen::VectorXd f;
    Eigen::VectorXd f_tilde;
    Eigen::VectorXd queue_at_own_poll;   // E[X_i | S=i]
    Eigen::VectorXd queue_at_poll;       // E[X_i] at polling instants
    Eigen::VectorXd empty_given_polled;  // P(X_i=0 | S=i)
    Eigen::VectorXd cycle;               // mean time between visits to i
    double wait = 0.0;
    double tau_bar = 0.0;
    long long polls = 0;
    long long served = 0;
    bool unstable = false;
};

// Point estimates are means across replications; each se is the standard
// error of that mean. f sums to 1 exactly within every replication.
struct SimulationEstimate {
    Eigen::VectorXd f, f_se;
    Eigen::VectorXd f_tilde, f_tilde_se;
    Eigen::VectorXd queue_at_own_poll, queue_at_own_poll_se;
    Eigen::VectorXd queue_at_poll, queue_at_poll_se;
    Eigen::VectorXd empty_given_polled, empty_given_polled_se;
    Eigen::VectorXd cycle, cycle_se;
    double wait = 0.0, wait_se = 0.0;
    double tau_bar = 0.0, tau_bar_se = 0.0;
    bool unstable_detected = false;
    std::vector<ReplicationEstimate> reps;
};

// Event-driven run of the embedded polling chain: serve at most one
// customer per visit, route by p or p_tilde, draw the travel time and the
// compound-Poisson arrivals over it. Deterministic for a fixed
// (model, config) pair.
[[nodiscard]] SimulationEstimate simulate(const PollingModel& m, const SimConfig& cfg);

// Empirical defect of the stationary transform identity at one z point.
struct ResidualPoint {
    Eigen::VectorXcd z;
    double residual = 0.0;
    double se = 0.0;                // bootstrap standard error over replications
    double control_residual = 0.0;  // same defect with stations permuted
};

[[nodiscard]] std::vector<ResidualPoint> functional_residual(
    const PollingModel& m, const SimConfig& cfg,
    const std::vector<Eigen::VectorXcd>& z_points);

// Stationary law of the embedded chain with per-queue capacity cap and
// arrival overflow clipped into the cap state. tail_bound adds the
// stationary boundary-shell mass and the expected clipped probability per
// step; it is the honest error budget for every reported figure.
struct OracleResult {
    Eigen::VectorXd f;
    Eigen::VectorXd f_tilde;
    Eigen::VectorXd queue_at_own_poll;
    Eigen::VectorXd queue_at_poll;
    double tau_bar = 0.0;
    double tail_bound = 0.0;
    long long states = 0;
    int iterations = 0;
};

[[nodiscard]] OracleResult truncated_chain_oracle(const PollingModel& m, int cap);

}  // namespace sdpoll
