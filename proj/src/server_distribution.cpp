#include "sdpoll/server_distribution.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <string>

#include "sdpoll/errors.hpp"
#include "sdpoll/tolerances.hpp"

namespace sdpoll {

namespace {

// Right-hand side of the station balance rows: sum_i lambda_i (p_{i,j} - pt_{i,j}).
Eigen::VectorXd net_switch_rate(const PollingModel& m) {
    return (m.p - m.p_tilde).transpose() * m.lambda;
}

}  // namespace

ServerDistribution solve_server_distribution(const PollingModel& m) {
    require_valid(m);

    const auto classes = essential_classes(m.p_tilde);
    if (classes.size() > 1) {
        throw MultipleEssentialClasses(classes, compatibility_check(m, classes));
    }

    const TrafficSummary traffic = traffic_summary(m);
    if (traffic.degenerate) {
        throw DegenerateTraffic(traffic.rho_hat);
    }

    const int n = m.n;
    const Eigen::VectorXd r = net_switch_rate(m);

    // Unknowns x = (F_1..F_n, tau_bar). Station balance for j = 1..n-1,
    // then the normalization row, then the cycle-length row.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 1, n + 1);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
    for (int j = 0; j + 1 < n; ++j) {
        for (int i = 0; i < n; ++i) {
            a(j, i) = (i == j ? 1.0 : 0.0) - m.p_tilde(i, j);
        }
        a(j, n) = -r(j);
    }
    a.row(n - 1).head(n).setOnes();
    b(n - 1) = 1.0;
    for (int j = 0; j < n; ++j) {
        a(n, j) = -m.tau_tilde(j);
    }
    a(n, n) = 1.0 - traffic.rho_hat;

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
    const double smin = svd.singularValues()(n);
    const double smax = svd.singularValues()(0);
    if (smin <= 0.0 || !std::isfinite(smax / smin)) {
        throw SingularSystem("server distribution system is singular");
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::VectorXd x = lu.solve(b);

    ServerDistribution d;
    d.f = x.head(n);
    d.tau_bar = x(n);
    d.rho_hat = traffic.rho_hat;
    d.condition = smax / smin;
    d.condition_warning = d.condition > tol::condition_warn;
    d.f_tilde = d.f - m.lambda * d.tau_bar;

    // Verify every balance row, including the one replaced by the
    // normalization, plus the two flow identities.
    double defect = (a * x - b).cwiseAbs().maxCoeff();
    const Eigen::VectorXd balance =
        d.f - m.p_tilde.transpose() * d.f - d.tau_bar * r;
    defect = std::max(defect, balance.cwiseAbs().maxCoeff());
    const FlowResiduals flows = flow_residuals(m, d);
    defect = std::max(defect, std::max(flows.proba, flows.flux));
    if (!(defect <= tol::solver_residual)) {
        throw SolveError("server distribution residual " + std::to_string(defect) +
                         " exceeds tolerance");
    }

    d.cycle.resize(n);
    for (int j = 0; j < n; ++j) {
        d.cycle(j) = d.f(j) > 0.0 ? d.tau_bar / d.f(j)
                                  : std::numeric_limits<double>::infinity();
    }
    return d;
}

FlowResiduals flow_residuals(const PollingModel& m, const ServerDistribution& d) {
    FlowResiduals out;
    const Eigen::RowVectorXd f = d.f.transpose();
    const Eigen::RowVectorXd ft = d.f_tilde.transpose();
    const int n = m.n;
    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);

    const Eigen::RowVectorXd proba =
        f * (eye - m.p) - ft * (m.p_tilde - m.p);
    out.proba = proba.cwiseAbs().maxCoeff();

    const ArrivalMatrices am = arrival_matrices(m);
    const Eigen::RowVectorXd flux =
        f * (eye - am.a_mat) - ft * (eye - am.a_mat + am.a_tilde_mat);
    out.flux = flux.cwiseAbs().maxCoeff();
    return out;
}

NecessaryConditions necessary_conditions(const PollingModel& m,
                                         const ServerDistribution& d) {
    NecessaryConditions nc;
    nc.rho_margin = 1.0 - d.rho_hat;
    nc.rho_pass = nc.rho_margin > 0.0;
    nc.flux.resize(static_cast<std::size_t>(m.n));
    nc.flux_pass = true;
    for (int j = 0; j < m.n; ++j) {
        auto& c = nc.flux[static_cast<std::size_t>(j)];
        c.margin = d.f(j) - m.lambda(j) * d.tau_bar;
        c.pass = c.margin > 0.0;
        nc.flux_pass = nc.flux_pass && c.pass;
    }
    nc.sup_margin = 1.0 - m.lambda.dot(m.tau);
    nc.sup_pass = nc.sup_margin > 0.0;
    return nc;
}

}  // namespace sdpoll
