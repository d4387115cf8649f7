#include "sdpoll/waiting_time.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "sdpoll/errors.hpp"
#include "sdpoll/tolerances.hpp"

namespace sdpoll {

namespace {

using cd = std::complex<double>;

void validate_spec(const CompoundPoissonSpec& spec) {
    if (!(spec.lambda_hat >= 0.0)) {
        throw ValidationError("lambda_hat must be nonnegative");
    }
    if (!(spec.b >= 1.0) || !(spec.b2 >= spec.b)) {
        throw ValidationError("batch moments need b >= 1 and b2 >= b");
    }
    if (!(spec.tau > 0.0) || !(spec.tau_tilde > 0.0)) {
        throw ValidationError("inter-poll means must be positive");
    }
    const double slack = 1e-12;
    if (spec.tau2 + slack * (1.0 + spec.tau2) < spec.tau * spec.tau ||
        spec.tau_tilde2 + slack * (1.0 + spec.tau_tilde2) <
            spec.tau_tilde * spec.tau_tilde) {
        throw ValidationError("second moments must dominate squared means");
    }
}

void check_stable(double n_lambda_tau) {
    if (!(n_lambda_tau < 1.0)) {
        throw UnstableRegime("offered load N*lambda*tau = " +
                             std::to_string(n_lambda_tau) + " must stay below 1");
    }
}

cd guarded_denom(const Eigen::VectorXcd& mu_tilde, int l) {
    const cd denom = 1.0 - mu_tilde(l - 1);
    if (std::abs(denom) <= tol::eigen_margin) {
        throw DegenerateEigenvalue("empty-routing eigenvalue " + std::to_string(l) +
                                   " is within margin of 1");
    }
    return denom;
}

double require_real(const char* where, cd value) {
    if (std::abs(value.imag()) > tol::imag_rel * (1.0 + std::abs(value.real()))) {
        throw ComplexResidual(where, value.imag());
    }
    return value.real();
}

bool coprime_pure_shift(const Eigen::VectorXd& dist) {
    const int n = static_cast<int>(dist.size());
    for (int d = 1; d <= n; ++d) {
        if (std::abs(dist(d - 1) - 1.0) <= 1e-12) {
            return std::gcd(d, n) == 1;
        }
    }
    return false;
}

}  // namespace

CompoundPoissonSpec state_independent_spec(double lambda_hat, double b, double b2,
                                           double w, double w2, double sigma,
                                           double sigma2) {
    CompoundPoissonSpec spec;
    spec.lambda_hat = lambda_hat;
    spec.b = b;
    spec.b2 = b2;
    spec.w = w;
    spec.w2 = w2;
    spec.sigma = sigma;
    spec.sigma2 = sigma2;
    spec.tau = w + sigma;
    spec.tau2 = w2 + 2.0 * w * sigma + sigma2;
    spec.tau_tilde = w;
    spec.tau_tilde2 = w2;
    return spec;
}

SymmetricMoments compound_poisson_moments(const CompoundPoissonSpec& spec, int n) {
    validate_spec(spec);
    const double lambda = spec.lambda();
    SymmetricMoments mom;
    mom.alpha = lambda * spec.tau;
    mom.alpha_tilde = lambda * spec.tau_tilde;
    mom.alpha2 = Eigen::VectorXd::Constant(n, lambda * lambda * spec.tau2);
    mom.alpha_tilde2 = Eigen::VectorXd::Constant(n, lambda * lambda * spec.tau_tilde2);
    mom.alpha2(n - 1) += spec.lambda_hat * (spec.b2 - spec.b) * spec.tau;
    mom.alpha_tilde2(n - 1) += spec.lambda_hat * (spec.b2 - spec.b) * spec.tau_tilde;
    return mom;
}

double mean_wait(const CompoundPoissonSpec& spec, const Eigen::VectorXcd& mu,
                 const Eigen::VectorXcd& mu_tilde) {
    validate_spec(spec);
    const int n = static_cast<int>(mu.size());
    if (n < 2 || mu_tilde.size() != n) {
        throw ValidationError("eigenvalue vectors must share a length of at least 2");
    }
    const double lambda = spec.lambda();
    const double load = n * lambda * spec.tau;
    check_stable(load);

    cd tilde_sum = 0.0;
    cd cross_sum = 0.0;
    for (int l = 1; l < n; ++l) {
        const cd denom = guarded_denom(mu_tilde, l);
        tilde_sum += 1.0 / denom;
        cross_sum += (mu(l - 1) - mu_tilde(l - 1)) / denom;
    }

    const double denom = 1.0 - load;
    cd total = spec.tau_tilde / denom * tilde_sum
             + n * lambda * spec.tau2 / (2.0 * denom)
             + spec.tau_tilde2 / (2.0 * spec.tau_tilde)
             + (spec.b2 - spec.b) / (2.0 * spec.b) *
                   ((spec.tau + (n - 1) * spec.tau_tilde) / denom -
                    spec.tau_tilde / denom * cross_sum);
    return require_real("mean_wait", total);
}

double mean_wait_state_independent(const CompoundPoissonSpec& spec,
                                   const Eigen::VectorXcd& mu) {
    const int n = static_cast<int>(mu.size());
    if (n < 2) {
        throw ValidationError("eigenvalue vector must have length at least 2");
    }
    const double lambda = spec.lambda();
    const double load = n * lambda * (spec.w + spec.sigma);
    check_stable(load);
    if (!(spec.w > 0.0)) {
        throw ValidationError("switchover mean w must be positive");
    }

    cd sum = 0.0;
    for (int l = 1; l < n; ++l) {
        sum += 1.0 / guarded_denom(mu, l);
    }
    const double denom = 1.0 - load;
    const double tau2 = spec.w2 + 2.0 * spec.w * spec.sigma + spec.sigma2;
    cd total = spec.w / denom * sum
             + n * lambda * tau2 / (2.0 * denom)
             + spec.w2 / (2.0 * spec.w)
             + (spec.b2 - spec.b) / (2.0 * spec.b) * (n * spec.w + spec.sigma) / denom;
    return require_real("mean_wait_state_independent", total);
}

double mean_wait_bernoulli(const CompoundPoissonSpec& spec,
                           const Eigen::VectorXd& p_tilde_dist, double pi) {
    if (!(pi >= 0.0 && pi <= 1.0)) {
        throw ValidationError("pi must lie in [0, 1]");
    }
    if (std::abs(spec.b - 1.0) > 1e-12 || std::abs(spec.b2 - 1.0) > 1e-12) {
        throw ValidationError("Bernoulli schedule closed form needs simple Poisson "
                              "arrivals (b = b2 = 1)");
    }
    if (!(spec.w > 0.0)) {
        throw ValidationError("switchover mean w must be positive");
    }
    const int n = static_cast<int>(p_tilde_dist.size());
    if (n < 2) {
        throw ValidationError("distance distribution must have length at least 2");
    }
    const double lambda = spec.lambda();
    const double tau = pi * spec.w + spec.sigma;
    const double tau2 = pi * spec.w2 + 2.0 * pi * spec.w * spec.sigma + spec.sigma2;
    const double load = n * lambda * tau;
    check_stable(load);

    const Eigen::VectorXcd mu_tilde = circulant_eigenvalues(p_tilde_dist);
    cd sum = 0.0;
    for (int l = 1; l < n; ++l) {
        sum += 1.0 / guarded_denom(mu_tilde, l);
    }
    const double denom = 1.0 - load;
    cd total = spec.w / denom * sum
             + n * lambda * tau2 / (2.0 * denom)
             + spec.w2 / (2.0 * spec.w);
    return require_real("mean_wait_bernoulli", total);
}

StrategyComparison strategy_compare(const CompoundPoissonSpec& spec,
                                    const std::vector<RoutingCandidate>& candidates) {
    if (candidates.empty()) {
        throw ValidationError("strategy comparison needs at least one candidate");
    }
    StrategyComparison cmp;
    cmp.ranked.reserve(candidates.size());
    for (const RoutingCandidate& cand : candidates) {
        const Eigen::VectorXcd mu = circulant_eigenvalues(cand.dist);
        StrategyResult row;
        row.name = cand.name;
        row.dist = cand.dist;
        row.wait = mean_wait(spec, mu, mu);
        cmp.ranked.push_back(std::move(row));
    }
    std::stable_sort(cmp.ranked.begin(), cmp.ranked.end(),
                     [](const StrategyResult& a, const StrategyResult& b) {
                         return a.wait < b.wait;
                     });
    const double best = cmp.ranked.front().wait;
    for (const StrategyResult& row : cmp.ranked) {
        if (coprime_pure_shift(row.dist)) {
            cmp.cyclic_present = true;
            if (row.wait <= best + 1e-12) {
                cmp.cyclic_minimal = true;
            }
            break;
        }
    }
    return cmp;
}

}  // namespace sdpoll
