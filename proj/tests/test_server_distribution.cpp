#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "helpers.hpp"
#include "sdpoll/errors.hpp"
#include "sdpoll/server_distribution.hpp"

using namespace sdpoll;

TEST_CASE("the two-station split instance reproduces its known stationary law") {
    const PollingModel m = test::two_station_split();
    const ServerDistribution d = solve_server_distribution(m);
    CHECK(d.f(0) == doctest::Approx(9.0 / 17.0).epsilon(1e-12));
    CHECK(d.f(1) == doctest::Approx(8.0 / 17.0).epsilon(1e-12));
    CHECK(d.tau_bar == doctest::Approx(10.0 / 17.0).epsilon(1e-12));
    CHECK(d.rho_hat == doctest::Approx(0.15).epsilon(1e-14));
    CHECK(d.f_tilde(0) == doctest::Approx(8.0 / 17.0).epsilon(1e-12));
    CHECK(d.f_tilde(1) == doctest::Approx(6.0 / 17.0).epsilon(1e-12));
    CHECK(d.cycle(0) == doctest::Approx(10.0 / 9.0).epsilon(1e-12));
    CHECK(d.cycle(1) == doctest::Approx(10.0 / 8.0).epsilon(1e-12));
    CHECK_FALSE(d.condition_warning);
}

TEST_CASE("random instances satisfy every flow identity") {
    std::mt19937_64 g = make_stream(42, 1);
    std::uniform_int_distribution<int> size(2, 6);
    for (int trial = 0; trial < 100; ++trial) {
        const PollingModel m = test::random_model(g, size(g));
        const ServerDistribution d = solve_server_distribution(m);
        CAPTURE(trial);
        CHECK(std::abs(d.f.sum() - 1.0) <= 1e-12);
        const FlowResiduals res = flow_residuals(m, d);
        CHECK(res.proba <= 1e-10);
        CHECK(res.flux <= 1e-10);
        const Eigen::VectorXd ft = d.f - m.lambda * d.tau_bar;
        CHECK((d.f_tilde - ft).cwiseAbs().maxCoeff() <= 1e-12);
        for (int j = 0; j < m.n; ++j) {
            if (d.f(j) > 0.0) {
                CHECK(d.cycle(j) * d.f(j) == doctest::Approx(d.tau_bar).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("relabeling stations permutes the solution") {
    std::mt19937_64 g = make_stream(43, 2);
    const PollingModel m = test::random_model(g, 4);
    const ServerDistribution d = solve_server_distribution(m);

    // send station i to sigma(i)
    std::vector<int> sigma{2, 0, 3, 1};
    PollingModel pm;
    pm.n = m.n;
    pm.p.resize(m.n, m.n);
    pm.p_tilde.resize(m.n, m.n);
    pm.lambda.resize(m.n);
    pm.tau.resize(m.n);
    pm.tau_tilde.resize(m.n);
    for (int i = 0; i < m.n; ++i) {
        pm.lambda(sigma[static_cast<std::size_t>(i)]) = m.lambda(i);
        pm.tau(sigma[static_cast<std::size_t>(i)]) = m.tau(i);
        pm.tau_tilde(sigma[static_cast<std::size_t>(i)]) = m.tau_tilde(i);
        for (int j = 0; j < m.n; ++j) {
            pm.p(sigma[static_cast<std::size_t>(i)], sigma[static_cast<std::size_t>(j)]) =
                m.p(i, j);
            pm.p_tilde(sigma[static_cast<std::size_t>(i)],
                       sigma[static_cast<std::size_t>(j)]) = m.p_tilde(i, j);
        }
    }
    const ServerDistribution pd = solve_server_distribution(pm);
    CHECK(pd.tau_bar == doctest::Approx(d.tau_bar).epsilon(1e-12));
    for (int i = 0; i < m.n; ++i) {
        CHECK(pd.f(sigma[static_cast<std::size_t>(i)]) ==
              doctest::Approx(d.f(i)).epsilon(1e-12));
    }
}

TEST_CASE("rescaling time leaves the position law alone and scales tau_bar") {
    std::mt19937_64 g = make_stream(44, 3);
    const PollingModel m = test::random_model(g, 3);
    const ServerDistribution d = solve_server_distribution(m);
    PollingModel scaled = m;
    const double c = 3.5;
    scaled.tau *= c;
    scaled.tau_tilde *= c;
    scaled.lambda /= c;
    const ServerDistribution sd = solve_server_distribution(scaled);
    CHECK((sd.f - d.f).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK(sd.tau_bar == doctest::Approx(c * d.tau_bar).epsilon(1e-12));
    CHECK(sd.rho_hat == doctest::Approx(d.rho_hat).epsilon(1e-12));
}

TEST_CASE("matched routing pins the position law to the stationary law of p") {
    std::mt19937_64 g = make_stream(45, 4);
    const PollingModel m = test::random_matched_model(g, 5);
    const ServerDistribution d = solve_server_distribution(m);
    // stationary law of p: f' p = f'
    const Eigen::VectorXd defect = d.f - m.p.transpose() * d.f;
    CHECK(defect.cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("traffic index pinned at one is refused with the degenerate error") {
    PollingModel m = test::two_station_split();
    m.lambda << 1.0, 1.0;
    m.tau << 1.5, 1.5;
    m.tau_tilde << 1.0, 1.0;  // rho_hat = 1 exactly
    m.tau2 = Eigen::VectorXd::Constant(2, 2.25);
    m.tau_tilde2 = Eigen::VectorXd::Constant(2, 1.0);
    CHECK_THROWS_AS((void)solve_server_distribution(m), DegenerateTraffic);
}

TEST_CASE("a supercritical index still solves when away from one") {
    PollingModel m = test::two_station_split();
    m.lambda << 1.0, 1.0;
    m.tau << 3.0, 3.0;
    m.tau_tilde << 1.0, 1.0;  // rho_hat = 4
    m.tau2 = Eigen::VectorXd::Constant(2, 9.0);
    m.tau_tilde2 = Eigen::VectorXd::Constant(2, 1.0);
    const ServerDistribution d = solve_server_distribution(m);
    CHECK(std::abs(d.f.sum() - 1.0) <= 1e-12);
    CHECK(d.tau_bar < 0.0);  // no stationary regime: the formal solution flips sign
}

TEST_CASE("reducible empty-routing with a drift imbalance names the obstruction") {
    PollingModel m = test::two_station_split();
    m.p_tilde = Eigen::MatrixXd::Identity(2, 2);
    CHECK_THROWS_WITH_AS((void)solve_server_distribution(m),
                         doctest::Contains("never ergodic unless"),
                         MultipleEssentialClasses);
}

TEST_CASE("reducible empty-routing with balanced drift is still rank deficient") {
    PollingModel m = test::two_station_split();
    m.p = Eigen::MatrixXd::Identity(2, 2);
    m.p_tilde = m.p;
    try {
        (void)solve_server_distribution(m);
        FAIL("expected the essential-class error");
    } catch (const MultipleEssentialClasses& e) {
        CHECK(e.classes.size() == 2);
        CHECK(std::string(e.what()).find("never ergodic unless") == std::string::npos);
    }
}

TEST_CASE("necessary conditions report margins, not just booleans") {
    const PollingModel m = test::two_station_split();
    const ServerDistribution d = solve_server_distribution(m);
    const NecessaryConditions nec = necessary_conditions(m, d);
    CHECK(nec.all());
    CHECK(nec.rho_margin == doctest::Approx(0.85).epsilon(1e-12));
    CHECK(nec.sup_margin == doctest::Approx(0.7).epsilon(1e-12));
    REQUIRE(nec.flux.size() == 2);
    CHECK(nec.flux[0].margin ==
          doctest::Approx(9.0 / 17.0 - 0.1 * 10.0 / 17.0).epsilon(1e-12));
    CHECK(nec.flux[1].margin ==
          doctest::Approx(8.0 / 17.0 - 0.2 * 10.0 / 17.0).epsilon(1e-12));
}

TEST_CASE("a station starved by the flux condition fails it with a negative margin") {
    // swap routing with tau = tau_tilde = 1: F = 1/2, tau_bar = 1
    const PollingModel m =
        test::circulant_model(test::unit_distance(2, 1), test::unit_distance(2, 1),
                              0.55, 1.0, 1.0);
    const ServerDistribution d = solve_server_distribution(m);
    CHECK(d.tau_bar == doctest::Approx(1.0).epsilon(1e-12));
    const NecessaryConditions nec = necessary_conditions(m, d);
    CHECK_FALSE(nec.flux_pass);
    CHECK(nec.flux[0].margin == doctest::Approx(-0.05).epsilon(1e-10));
}
