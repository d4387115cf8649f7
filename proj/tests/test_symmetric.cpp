#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include <Eigen/Eigenvalues>

#include "helpers.hpp"
#include "sdpoll/errors.hpp"
#include "sdpoll/server_distribution.hpp"
#include "sdpoll/symmetric.hpp"

using namespace sdpoll;
using cd = std::complex<double>;

TEST_CASE("circulant eigenvalues and eigenvectors satisfy the eigen relation") {
    std::mt19937_64 g = make_stream(60, 0);
    for (int n : {2, 3, 5, 8}) {
        const Eigen::VectorXd dist = test::random_distance(g, n);
        const Eigen::MatrixXd c = test::circulant(dist);
        const Eigen::VectorXcd mu = circulant_eigenvalues(dist);
        const CirculantBasis basis = circulant_basis(n);
        for (int k = 0; k < n; ++k) {
            // v_k is a left eigenvector: v_k^T C = mu_k v_k^T
            const Eigen::VectorXcd lhs = c.transpose().cast<cd>() * basis.v.col(k);
            const Eigen::VectorXcd rhs = mu(k) * basis.v.col(k);
            CAPTURE(n);
            CAPTURE(k);
            CHECK((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10);
        }
        CHECK(std::abs(mu(n - 1) - 1.0) <= 1e-12);  // row sums make mu_N = 1
    }
}

TEST_CASE("the shared eigenvectors are orthogonal and reconstruct the unit vectors") {
    const int n = 6;
    const CirculantBasis basis = circulant_basis(n);
    for (int k = 0; k < n; ++k) {
        for (int l = 0; l < n; ++l) {
            const cd dot = basis.v.col(k).dot(basis.v.col(l));
            CHECK(std::abs(dot - (k == l ? cd(n) : cd(0))) <= 1e-10);
        }
    }
    for (int i = 0; i < n; ++i) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
        for (int k = 0; k < n; ++k) {
            e += std::pow(basis.omega(k), i + 1) * basis.v.col(k) / double(n);
        }
        Eigen::VectorXcd want = Eigen::VectorXcd::Zero(n);
        want(i) = 1.0;
        CHECK((e - want).cwiseAbs().maxCoeff() <= 1e-12);
    }
}

TEST_CASE("the ring model passes all three symmetry assumptions") {
    const PollingModel m = test::ring(3, 0.05, 0.5, 1.0);
    const AssumptionReport rep = check_assumptions(m);
    CHECK(rep.a1.pass);
    CHECK(rep.a2.pass);
    CHECK(rep.a3.pass);
    CHECK(rep.all());
}

TEST_CASE("uneven rates break rotational symmetry with the right defect") {
    PollingModel m = test::ring(3, 0.05, 0.5, 1.0);
    m.lambda(1) += 0.01;
    const AssumptionReport rep = check_assumptions(m);
    CHECK_FALSE(rep.a1.pass);
    CHECK(rep.a1.defect == doctest::Approx(0.01));
}

TEST_CASE("an empty-routing eigenvalue at one fails the spectrum assumption") {
    // staying put on an empty find: identity routing, every eigenvalue is 1
    PollingModel m = test::ring(3, 0.05, 0.5, 1.0);
    m.p_tilde = Eigen::MatrixXd::Identity(3, 3);
    const AssumptionReport rep = check_assumptions(m);
    CHECK(rep.a1.pass);
    CHECK_FALSE(rep.a2.pass);
}

TEST_CASE("two different pure shifts violate the commutation assumption") {
    const PollingModel m = test::circulant_model(
        test::unit_distance(4, 1), test::unit_distance(4, 2), 0.05, 1.0, 0.5);
    const AssumptionReport rep = check_assumptions(m);
    CHECK(rep.a1.pass);
    CHECK_FALSE(rep.a3.pass);
}

TEST_CASE("distance-symmetric circulants always commute") {
    std::mt19937_64 g = make_stream(61, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + static_cast<int>(g() % 4);
        const PollingModel m =
            test::circulant_model(test::random_symmetric_distance(g, n),
                                  test::random_symmetric_distance(g, n), 0.05, 1.0, 0.5);
        const AssumptionReport rep = check_assumptions(m);
        CAPTURE(trial);
        CHECK(rep.a3.pass);
    }
}

TEST_CASE("the ring profile carries the frozen scalar values") {
    const PollingModel m = test::ring(3, 0.05, 0.5, 1.0);
    const SymmetricProfile prof = symmetric_profile(m);
    CHECK(prof.alpha == doctest::Approx(0.075).epsilon(1e-12));
    CHECK(prof.alpha_tilde == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(prof.alpha2(0) == doctest::Approx(0.005625).epsilon(1e-12));
    CHECK(prof.alpha_tilde2(2) == doctest::Approx(0.000625).epsilon(1e-12));
    const double e = empty_probability(prof);
    CHECK(e == doctest::Approx(0.775 / 0.85).epsilon(1e-12));
    CHECK(prof.alpha_bar == doctest::Approx((1 - e) * 0.075 + e * 0.025).epsilon(1e-12));
}

TEST_CASE("queue-length formulas reproduce the hand-computed ring values") {
    const PollingModel m = test::ring(3, 0.05, 0.5, 1.0);
    const SymmetricProfile prof = symmetric_profile(m);
    CHECK(mean_queue_at_polling(prof) == doctest::Approx(0.0931452).epsilon(1e-5));
    CHECK(mean_queue_arbitrary(prof) == doctest::Approx(0.0637334).epsilon(1e-5));
}

TEST_CASE("the empty probability equals the conditional of the position solver") {
    for (double lambda : {0.02, 0.05, 0.1}) {
        const PollingModel m = test::ring(4, lambda, 0.5, 1.0);
        const SymmetricProfile prof = symmetric_profile(m);
        const ServerDistribution d = solve_server_distribution(m);
        CAPTURE(lambda);
        CHECK(empty_probability(prof) ==
              doctest::Approx(d.f_tilde(0) / d.f(0)).epsilon(1e-10));
        CHECK(d.f(0) == doctest::Approx(1.0 / 4.0).epsilon(1e-10));
    }
}

TEST_CASE("saturated load is refused by the closed forms") {
    const PollingModel m = test::ring(2, 0.6, 0.5, 1.0);  // N*alpha = 1.8
    CHECK_THROWS_AS((void)symmetric_profile(m), UnstableRegime);
}

TEST_CASE("eigen sums of the two reference strategies match their closed forms") {
    for (int n = 2; n <= 12; ++n) {
        const Eigen::VectorXcd mu_cyc = circulant_eigenvalues(test::unit_distance(n, 1));
        CHECK(eigen_sum(mu_cyc) == doctest::Approx((n - 1) / 2.0).epsilon(1e-10));
        const Eigen::VectorXcd mu_uni =
            circulant_eigenvalues(Eigen::VectorXd::Constant(n, 1.0 / n));
        CHECK(eigen_sum(mu_uni) == doctest::Approx(n - 1.0).epsilon(1e-10));
    }
}

TEST_CASE("the eigen sum dominates the cyclic value on random distributions") {
    std::mt19937_64 g = make_stream(62, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(g() % 9);
        const Eigen::VectorXd dist = test::random_distance(g, n);
        const double sum = eigen_sum(circulant_eigenvalues(dist));
        CAPTURE(trial);
        CHECK(sum >= (n - 1) / 2.0 - 1e-9);
    }
}

TEST_CASE("the eigen sum agrees with a dense eigenvalue solver") {
    std::mt19937_64 g = make_stream(63, 0);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 3 + static_cast<int>(g() % 5);
        const Eigen::VectorXd dist = test::random_distance(g, n);
        const double fast = eigen_sum(circulant_eigenvalues(dist));

        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(
            test::circulant(dist).cast<cd>());
        // drop the eigenvalue nearest 1 and sum over the rest
        int drop = 0;
        double best = 1e30;
        for (int k = 0; k < n; ++k) {
            const double d = std::abs(es.eigenvalues()(k) - 1.0);
            if (d < best) {
                best = d;
                drop = k;
            }
        }
        cd slow = 0.0;
        for (int k = 0; k < n; ++k) {
            if (k != drop) {
                slow += 1.0 / (1.0 - es.eigenvalues()(k));
            }
        }
        CAPTURE(trial);
        CHECK(fast == doctest::Approx(slow.real()).epsilon(1e-9));
        CHECK(std::abs(slow.imag()) <= 1e-9);
    }
}

TEST_CASE("the eigen sum refuses a second eigenvalue at one") {
    // two disjoint 2-cycles: distance distribution on {2} with n = 4
    const Eigen::VectorXcd mu = circulant_eigenvalues(test::unit_distance(4, 2));
    CHECK_THROWS_AS((void)eigen_sum(mu), DegenerateEigenvalue);
}

TEST_CASE("profiles reject malformed inputs") {
    SymmetricMoments mom;
    mom.alpha = 0.1;
    mom.alpha_tilde = 0.05;
    mom.alpha2 = Eigen::VectorXd::Constant(3, 0.01);
    mom.alpha_tilde2 = Eigen::VectorXd::Constant(3, 0.01);

    Eigen::VectorXd good = Eigen::VectorXd::Constant(3, 1.0 / 3.0);
    Eigen::VectorXd bad_sum = good;
    bad_sum(0) += 0.1;
    CHECK_THROWS_AS((void)make_profile(3, bad_sum, good, mom), ValidationError);

    Eigen::VectorXd negative = good;
    negative(0) = -0.1;
    negative(1) = 0.7 + 1.0 / 30.0;
    CHECK_THROWS_AS((void)make_profile(3, negative, good, mom), ValidationError);

    SymmetricMoments lopsided = mom;
    lopsided.alpha2 = Eigen::VectorXd::Zero(3);
    lopsided.alpha2 << 0.01, 0.02, 0.01;  // distance 1 and 2 must match for n=3
    CHECK_THROWS_AS((void)make_profile(3, good, good, lopsided), ValidationError);
}

TEST_CASE("batch arrivals only shift the full-loop moment entry") {
    PollingModel m = test::ring(3, 0.2, 0.5, 1.0);
    m.batch = BatchLaw{2.0, 6.0, 0.1};
    const SymmetricProfile prof = symmetric_profile(m);
    // lambda^2 tau2 = 0.04*2.25 = 0.09 at d < N, plus 0.1*(6-2)*1.5 at d = N
    CHECK(prof.alpha2(0) == doctest::Approx(0.09).epsilon(1e-12));
    CHECK(prof.alpha2(1) == doctest::Approx(0.09).epsilon(1e-12));
    CHECK(prof.alpha2(2) == doctest::Approx(0.09 + 0.6).epsilon(1e-12));
    CHECK(prof.alpha_tilde2(2) ==
          doctest::Approx(0.04 * 0.25 + 0.1 * 4.0 * 0.5).epsilon(1e-12));
}
