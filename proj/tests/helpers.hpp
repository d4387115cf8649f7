#pragma once

// Shared instance factories and random generators for the test suite.

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "sdpoll/model.hpp"
#include "sdpoll/rng.hpp"

namespace sdpoll::test {

// Circulant matrix from forward-distance weights: dist(d-1) is the chance
// of moving d positions, d = 1..n (d = n lands back on the start).
inline Eigen::MatrixXd circulant(const Eigen::VectorXd& dist) {
    const int n = static_cast<int>(dist.size());
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        for (int d = 1; d <= n; ++d) {
            p(i, (i + d) % n) += dist(d - 1);
        }
    }
    return p;
}

inline Eigen::VectorXd unit_distance(int n, int d) {
    Eigen::VectorXd dist = Eigen::VectorXd::Zero(n);
    dist(d - 1) = 1.0;
    return dist;
}

// The asymmetric two-station workhorse: served customers send the server
// across, an empty stand flips a fair coin. Known stationary law
// F = (9/17, 8/17) with tau_bar = 10/17.
inline PollingModel two_station_split() {
    PollingModel m;
    m.n = 2;
    m.p.resize(2, 2);
    m.p << 0.0, 1.0, 1.0, 0.0;
    m.p_tilde.resize(2, 2);
    m.p_tilde << 0.5, 0.5, 0.5, 0.5;
    m.lambda.resize(2);
    m.lambda << 0.1, 0.2;
    m.tau = Eigen::VectorXd::Constant(2, 1.0);
    m.tau_tilde = Eigen::VectorXd::Constant(2, 0.5);
    m.tau2 = Eigen::VectorXd::Constant(2, 1.0);
    m.tau_tilde2 = Eigen::VectorXd::Constant(2, 0.25);
    return m;
}

// Cyclic ring with matched routing, deterministic walk w and service sigma:
// tau = w + sigma after a service, tau_tilde = w on an empty find.
inline PollingModel ring(int n, double lambda, double w, double sigma) {
    PollingModel m;
    m.n = n;
    m.p = circulant(unit_distance(n, 1));
    m.p_tilde = m.p;
    m.lambda = Eigen::VectorXd::Constant(n, lambda);
    const double tau = w + sigma;
    m.tau = Eigen::VectorXd::Constant(n, tau);
    m.tau_tilde = Eigen::VectorXd::Constant(n, w);
    m.tau2 = Eigen::VectorXd::Constant(n, tau * tau);
    m.tau_tilde2 = Eigen::VectorXd::Constant(n, w * w);
    return m;
}

// Symmetric model from two distance distributions and shared scalars,
// with deterministic-law second moments.
inline PollingModel circulant_model(const Eigen::VectorXd& p_dist,
                                    const Eigen::VectorXd& pt_dist, double lambda,
                                    double tau, double tau_tilde) {
    const int n = static_cast<int>(p_dist.size());
    PollingModel m;
    m.n = n;
    m.p = circulant(p_dist);
    m.p_tilde = circulant(pt_dist);
    m.lambda = Eigen::VectorXd::Constant(n, lambda);
    m.tau = Eigen::VectorXd::Constant(n, tau);
    m.tau_tilde = Eigen::VectorXd::Constant(n, tau_tilde);
    m.tau2 = Eigen::VectorXd::Constant(n, tau * tau);
    m.tau_tilde2 = Eigen::VectorXd::Constant(n, tau_tilde * tau_tilde);
    return m;
}

inline Eigen::MatrixXd random_stochastic(std::mt19937_64& g, int n) {
    std::exponential_distribution<double> exp1(1.0);
    Eigen::MatrixXd p(n, n);
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            p(i, j) = exp1(g) + 1e-3;  // dense positive rows: one closed class
            row += p(i, j);
        }
        p.row(i) /= row;
    }
    return p;
}

inline Eigen::VectorXd random_distance(std::mt19937_64& g, int n) {
    std::exponential_distribution<double> exp1(1.0);
    Eigen::VectorXd dist(n);
    double sum = 0.0;
    for (int d = 0; d < n; ++d) {
        dist(d) = exp1(g) + 1e-3;
        sum += dist(d);
    }
    return dist / sum;
}

// Distance distribution with dist(d) = dist(n-d): the resulting circulant
// has a real spectrum, which makes the commutation identity exact.
inline Eigen::VectorXd random_symmetric_distance(std::mt19937_64& g, int n) {
    Eigen::VectorXd dist = random_distance(g, n);
    for (int d = 1; d < n; ++d) {
        const double avg = 0.5 * (dist(d - 1) + dist(n - d - 1));
        dist(d - 1) = avg;
        dist(n - d - 1) = avg;
    }
    return dist / dist.sum();
}

// Random dense instance with one essential class and rho_hat away from 1.
inline PollingModel random_model(std::mt19937_64& g, int n) {
    std::uniform_real_distribution<double> lam(0.01, 0.3);
    std::uniform_real_distribution<double> trav(0.2, 2.0);
    for (;;) {
        PollingModel m;
        m.n = n;
        m.p = random_stochastic(g, n);
        m.p_tilde = random_stochastic(g, n);
        m.lambda.resize(n);
        m.tau.resize(n);
        m.tau_tilde.resize(n);
        for (int i = 0; i < n; ++i) {
            m.lambda(i) = lam(g);
            m.tau(i) = trav(g);
            m.tau_tilde(i) = trav(g);
        }
        const TrafficSummary t = traffic_summary(m);
        if (std::abs(t.rho_hat - 1.0) > 0.05) {
            return m;
        }
    }
}

// Matched-routing variant: p == p_tilde, still dense.
inline PollingModel random_matched_model(std::mt19937_64& g, int n) {
    PollingModel m = random_model(g, n);
    m.p_tilde = m.p;
    return m;
}

}  // namespace sdpoll::test
