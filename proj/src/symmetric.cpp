#include "sdpoll/symmetric.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

#include "sdpoll/errors.hpp"
#include "sdpoll/tolerances.hpp"

namespace sdpoll {

namespace {

using cd = std::complex<double>;

// Distance coefficients of a circulant matrix, read off row 1: entry d-1
// is the weight of a forward move by d positions, entry n-1 the weight of
// staying put.
Eigen::VectorXd first_row_distances(const Eigen::MatrixXd& mat) {
    const int n = static_cast<int>(mat.rows());
    Eigen::VectorXd dist(n);
    for (int d = 1; d <= n; ++d) {
        dist(d - 1) = mat(0, d % n);
    }
    return dist;
}

double circulant_defect(const Eigen::MatrixXd& mat, const Eigen::VectorXd& dist) {
    const int n = static_cast<int>(mat.rows());
    double defect = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int d = (j - i + n) % n;  // 0 means a full loop
            const double want = dist(d == 0 ? n - 1 : d - 1);
            defect = std::max(defect, std::abs(mat(i, j) - want));
        }
    }
    return defect;
}

double spread(const Eigen::VectorXd& v) {
    return v.maxCoeff() - v.minCoeff();
}

double empty_probability_from(double n_alpha, double n_alpha_tilde) {
    if (!(n_alpha < 1.0)) {
        throw UnstableRegime("offered load N*alpha = " + std::to_string(n_alpha) +
                             " must stay below 1");
    }
    return (1.0 - n_alpha) / (1.0 - n_alpha + n_alpha_tilde);
}

void guard_mu_tilde(const Eigen::VectorXcd& mu_tilde) {
    const int n = static_cast<int>(mu_tilde.size());
    for (int l = 1; l < n; ++l) {
        if (std::abs(1.0 - mu_tilde(l - 1)) <= tol::eigen_margin) {
            throw DegenerateEigenvalue("empty-routing eigenvalue " + std::to_string(l) +
                                       " of " + std::to_string(n) + " is within margin of 1");
        }
    }
}

double require_real(const std::string& where, cd value) {
    if (std::abs(value.imag()) > tol::imag_rel * (1.0 + std::abs(value.real()))) {
        throw ComplexResidual(where, value.imag());
    }
    return value.real();
}

}  // namespace

Eigen::VectorXcd circulant_eigenvalues(const Eigen::VectorXd& coeffs) {
    const int n = static_cast<int>(coeffs.size());
    Eigen::VectorXcd mu(n);
    for (int k = 1; k <= n; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / n;
        const cd omega_k = std::polar(1.0, angle);
        cd sum = 0.0;
        cd power = 1.0;
        for (int d = 1; d <= n; ++d) {
            power *= omega_k;
            sum += coeffs(d - 1) * power;
        }
        mu(k - 1) = sum;
    }
    return mu;
}

CirculantBasis circulant_basis(int n) {
    CirculantBasis basis;
    basis.omega.resize(n);
    basis.v.resize(n, n);
    for (int k = 1; k <= n; ++k) {
        const double angle = 2.0 * std::numbers::pi * k / n;
        basis.omega(k - 1) = std::polar(1.0, angle);
        for (int i = 1; i <= n; ++i) {
            basis.v(i - 1, k - 1) = std::polar(1.0, -angle * i);
        }
    }
    return basis;
}

AssumptionReport check_assumptions(const PollingModel& m) {
    require_valid(m);
    AssumptionReport rep;

    const Eigen::VectorXd p_dist = first_row_distances(m.p);
    const Eigen::VectorXd pt_dist = first_row_distances(m.p_tilde);
    double a1 = std::max(circulant_defect(m.p, p_dist),
                         circulant_defect(m.p_tilde, pt_dist));
    a1 = std::max({a1, spread(m.lambda), spread(m.tau), spread(m.tau_tilde)});
    if (m.tau2) a1 = std::max(a1, spread(*m.tau2));
    if (m.tau_tilde2) a1 = std::max(a1, spread(*m.tau_tilde2));
    rep.a1.defect = a1;
    rep.a1.pass = a1 <= tol::a1_spread;
    rep.a1.detail = rep.a1.pass ? "rotationally symmetric"
                                : "row or rate data varies across stations";

    const Eigen::VectorXcd mu_tilde = circulant_eigenvalues(pt_dist);
    double closest = std::numeric_limits<double>::infinity();
    int which = 0;
    for (int l = 1; l < m.n; ++l) {
        const double d = std::abs(1.0 - mu_tilde(l - 1));
        if (d < closest) {
            closest = d;
            which = l;
        }
    }
    rep.a2.defect = closest;
    rep.a2.pass = closest > tol::eigen_margin;
    {
        std::ostringstream os;
        os << "min |1 - mu_tilde_k| = " << closest << " at k = " << which;
        rep.a2.detail = os.str();
    }

    const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(m.n, m.n);
    const Eigen::MatrixXd lhs = (eye - m.p) * (eye - m.p_tilde.transpose());
    const Eigen::MatrixXd rhs = (eye - m.p.transpose()) * (eye - m.p_tilde);
    rep.a3.defect = (lhs - rhs).cwiseAbs().maxCoeff();
    rep.a3.pass = rep.a3.defect <= tol::a3_commutation;
    rep.a3.detail = rep.a3.pass ? "routing matrices commute as required"
                                : "commutation defect above tolerance";
    return rep;
}

SymmetricProfile make_profile(int n, const Eigen::VectorXd& p_dist,
                              const Eigen::VectorXd& p_tilde_dist,
                              const SymmetricMoments& moments) {
    if (n < 2) {
        throw ValidationError("profile needs at least 2 stations");
    }
    for (const auto* dist : {&p_dist, &p_tilde_dist}) {
        if (static_cast<int>(dist->size()) != n) {
            throw ValidationError("distance distribution must have length n");
        }
        if (dist->minCoeff() < 0.0) {
            throw ValidationError("distance distribution entries must be nonnegative");
        }
        if (std::abs(dist->sum() - 1.0) > tol::row_sum) {
            throw ValidationError("distance distribution must sum to 1");
        }
    }
    for (const auto* m2 : {&moments.alpha2, &moments.alpha_tilde2}) {
        if (static_cast<int>(m2->size()) != n) {
            throw ValidationError("moment arrays must have length n");
        }
        for (int d = 1; d < n; ++d) {
            if (std::abs((*m2)(d - 1) - (*m2)(n - d - 1)) > tol::a1_spread) {
                throw ValidationError(
                    "second-moment array must be symmetric in the unsigned distance");
            }
        }
    }

    SymmetricProfile prof;
    prof.n = n;
    prof.p_dist = p_dist;
    prof.p_tilde_dist = p_tilde_dist;
    prof.alpha = moments.alpha;
    prof.alpha_tilde = moments.alpha_tilde;
    prof.alpha2 = moments.alpha2;
    prof.alpha_tilde2 = moments.alpha_tilde2;
    prof.mu = circulant_eigenvalues(p_dist);
    prof.mu_tilde = circulant_eigenvalues(p_tilde_dist);

    const double e = empty_probability_from(n * prof.alpha, n * prof.alpha_tilde);
    prof.alpha_bar = (1.0 - e) * prof.alpha + e * prof.alpha_tilde;
    prof.alpha_bar2 = (1.0 - e) * prof.alpha2 + e * prof.alpha_tilde2;
    return prof;
}

SymmetricProfile symmetric_profile(const PollingModel& m) {
    const AssumptionReport rep = check_assumptions(m);
    if (!rep.a1.pass) {
        throw ValidationError("model is not rotationally symmetric (defect " +
                              std::to_string(rep.a1.defect) + ")");
    }
    if (!m.tau2 || !m.tau_tilde2) {
        throw ValidationError("tau2 and tau_tilde2 are required for queue-length "
                              "and waiting-time formulas");
    }

    const double lambda = m.lambda(0);
    const double tau = m.tau(0);
    const double tau_tilde = m.tau_tilde(0);
    const double tau2 = (*m.tau2)(0);
    const double tau_tilde2 = (*m.tau_tilde2)(0);
    const double b = m.batch_mean();
    const double b2 = m.batch_second_moment();
    const double lambda_hat = (m.batch && m.batch->lambda_hat > 0.0)
                                  ? m.batch->lambda_hat
                                  : lambda / b;

    SymmetricMoments mom;
    mom.alpha = lambda * tau;
    mom.alpha_tilde = lambda * tau_tilde;
    mom.alpha2 = Eigen::VectorXd::Constant(m.n, lambda * lambda * tau2);
    mom.alpha_tilde2 = Eigen::VectorXd::Constant(m.n, lambda * lambda * tau_tilde2);
    mom.alpha2(m.n - 1) += lambda_hat * (b2 - b) * tau;
    mom.alpha_tilde2(m.n - 1) += lambda_hat * (b2 - b) * tau_tilde;

    return make_profile(m.n, first_row_distances(m.p), first_row_distances(m.p_tilde),
                        mom);
}

double empty_probability(const SymmetricProfile& prof) {
    return empty_probability_from(prof.n * prof.alpha, prof.n * prof.alpha_tilde);
}

namespace {

// Shared core of the two queue-length formulas. The two entry points
// differ only in the first two terms and in the coefficient in front of
// the spectral correction sum.
double queue_length_formula(const SymmetricProfile& prof, bool at_polled_station,
                            const char* where) {
    const int n = prof.n;
    const double n_alpha = n * prof.alpha;
    const double n_alpha_tilde = n * prof.alpha_tilde;
    if (!(n_alpha < 1.0)) {
        throw UnstableRegime("offered load N*alpha = " + std::to_string(n_alpha) +
                             " must stay below 1");
    }
    guard_mu_tilde(prof.mu_tilde);

    cd tilde_sum = 0.0;   // sum over l < N of 1/(1 - mu_tilde_l)
    cd spectral = 0.0;    // sum over l < N of the weighted moment transform
    for (int l = 1; l < n; ++l) {
        const cd denom = 1.0 - prof.mu_tilde(l - 1);
        tilde_sum += 1.0 / denom;
        const double angle = 2.0 * std::numbers::pi * l / n;
        cd moment = 0.0;
        for (int d = 1; d <= n; ++d) {
            moment += prof.alpha_bar2(d - 1) * std::polar(1.0, angle * d);
        }
        spectral += (prof.mu(l - 1) - prof.mu_tilde(l - 1)) / denom * 0.5 * moment;
    }

    const double sum_bar2 = prof.alpha_bar2.sum();
    const double denom = 1.0 - n_alpha;
    cd total;
    if (at_polled_station) {
        total = n * prof.alpha_bar
              + n_alpha_tilde * prof.alpha_bar / denom * tilde_sum
              + (1.0 - n_alpha + n_alpha_tilde) / denom * (n / 2.0) * prof.alpha_bar2(n - 1)
              + (n_alpha - n_alpha_tilde) / denom * 0.5 * sum_bar2
              - n_alpha_tilde / denom * spectral;
    } else {
        total = prof.alpha_bar
              + prof.alpha_tilde / denom * tilde_sum
              + (1.0 - n_alpha + n_alpha_tilde) / denom * (n / 2.0) * prof.alpha_bar2(n - 1)
              + (n_alpha - n_alpha_tilde) / denom * 0.5 * sum_bar2
              - (1.0 - n_alpha + n_alpha_tilde) / denom * spectral;
    }
    return require_real(where, total);
}

}  // namespace

double mean_queue_at_polling(const SymmetricProfile& prof) {
    return queue_length_formula(prof, true, "mean_queue_at_polling");
}

double mean_queue_arbitrary(const SymmetricProfile& prof) {
    return queue_length_formula(prof, false, "mean_queue_arbitrary");
}

double eigen_sum(const Eigen::VectorXcd& mu) {
    const int n = static_cast<int>(mu.size());
    cd sum = 0.0;
    for (int l = 1; l < n; ++l) {
        const cd denom = 1.0 - mu(l - 1);
        if (std::abs(denom) <= tol::eigen_margin) {
            throw DegenerateEigenvalue("eigenvalue " + std::to_string(l) +
                                       " too close to 1 for the spectral sum");
        }
        sum += 1.0 / denom;
    }
    if (std::abs(sum.imag()) > tol::imag_eigen_sum) {
        throw ComplexResidual("eigen_sum", sum.imag());
    }
    return sum.real();
}

}  // namespace sdpoll
