#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "sdpoll/errors.hpp"
#include "sdpoll/tolerances.hpp"

namespace sdpoll {

// Batch-arrival summary for compound Poisson input: batches of mean size b
// and second moment b2 arrive at each station at Poisson epochs. When
// lambda_hat > 0 the model is in the symmetric compound-Poisson mode and
// the per-station customer rate must equal lambda_hat * b.
struct BatchLaw {
    double b = 1.0;
    double b2 = 1.0;
    double lambda_hat = 0.0;
};

// One polling instance: a single server visiting n stations, serving at
// most one customer per visit. After serving at i it moves to j with
// probability p(i,j); after finding i empty it moves with p_tilde(i,j).
// tau / tau_tilde are the mean times from the polling instant at i to the
// next polling instant in the served / empty case. Stations are numbered
// 1..n in every report; storage is 0-based.
struct PollingModel {
    int n = 0;
    Eigen::MatrixXd p;
    Eigen::MatrixXd p_tilde;
    Eigen::VectorXd lambda;
    Eigen::VectorXd tau;
    Eigen::VectorXd tau_tilde;
    std::optional<Eigen::VectorXd> tau2;
    std::optional<Eigen::VectorXd> tau_tilde2;
    std::optional<BatchLaw> batch;

    [[nodiscard]] double batch_mean() const { return batch ? batch->b : 1.0; }
    [[nodiscard]] double batch_second_moment() const { return batch ? batch->b2 : 1.0; }
};

struct TrafficSummary {
    double rho_hat = 0.0;
    double load_sum = 0.0;   // sum_j lambda_j * tau_j
    bool degenerate = false; // |rho_hat - 1| <= tol::degenerate_traffic
};

// alpha(i,q) = lambda_q * tau_i: mean arrivals at q over an interval that
// started with a service at i. Rank one by construction.
struct ArrivalMatrices {
    Eigen::MatrixXd a_mat;
    Eigen::MatrixXd a_tilde_mat;
};

struct Violation {
    std::string field;
    std::string message;
    double defect = 0.0;
};

// Checks every structural invariant and reports all violations; an empty
// report means the instance is usable.
[[nodiscard]] std::vector<Violation> validate_model(const PollingModel& m);

// Throws ValidationError with a combined message when the report is nonempty.
void require_valid(const PollingModel& m);

// Closed communicating classes of a stochastic matrix, each a sorted list
// of 1-based stations; classes ordered by smallest member. Entries at or
// below tol::closed_class_leak count as absent edges.
[[nodiscard]] std::vector<std::vector<int>> essential_classes(const Eigen::MatrixXd& p_tilde);

// For each class E, the net routing drift sum_{j in E} sum_i lambda_i *
// (p(i,j) - p_tilde(i,j)). A reducible p_tilde can only support a steady
// state when every residual vanishes.
[[nodiscard]] std::vector<double> compatibility_check(const PollingModel& m,
                                                      const std::vector<std::vector<int>>& classes);

[[nodiscard]] TrafficSummary traffic_summary(const PollingModel& m);

[[nodiscard]] ArrivalMatrices arrival_matrices(const PollingModel& m);

}  // namespace sdpoll
