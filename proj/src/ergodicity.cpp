#include "sdpoll/ergodicity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "sdpoll/errors.hpp"
#include "sdpoll/tolerances.hpp"

namespace sdpoll {

namespace {

std::vector<bool> face_mask(const PollingModel& m, const Face& face) {
    std::vector<bool> in(static_cast<std::size_t>(m.n), false);
    int prev = 0;
    for (int s : face) {
        if (s < 1 || s > m.n) {
            throw ValidationError("face station " + std::to_string(s) + " out of range");
        }
        if (s <= prev) {
            throw ValidationError("face stations must be sorted and distinct");
        }
        in[static_cast<std::size_t>(s - 1)] = true;
        prev = s;
    }
    return in;
}

std::string face_label(const Face& face) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < face.size(); ++i) {
        if (i > 0) os << ',';
        os << face[i];
    }
    os << '}';
    return os.str();
}

// Kernel of the chain where the stations flagged in `in` never empty:
// rows of p for saturated stations, rows of p_tilde for the rest.
Eigen::MatrixXd mixed_kernel(const PollingModel& m, const std::vector<bool>& in) {
    Eigen::MatrixXd q = m.p_tilde;
    for (int s = 0; s < m.n; ++s) {
        if (in[static_cast<std::size_t>(s)]) {
            q.row(s) = m.p.row(s);
        }
    }
    return q;
}

bool same_routing(const PollingModel& m) {
    return (m.p - m.p_tilde).cwiseAbs().maxCoeff() <= tol::row_sum;
}

// f(x) = sum_i u_i f_i(x) with f_i(x) = x_i + lambda_i/(1-rho_hat) *
// sum_j x_j (tau_j - tau_tilde_j); linear, so only two dot products.
double drift_value(const Eigen::VectorXd& u, const PollingModel& m, double rho_hat,
                   const Eigen::VectorXd& x) {
    const double carried = x.dot(m.tau - m.tau_tilde) / (1.0 - rho_hat);
    return u.dot(x) + u.dot(m.lambda) * carried;
}

}  // namespace

InducedChain solve_induced_chain(const PollingModel& m, const Face& face) {
    require_valid(m);
    const std::vector<bool> in = face_mask(m, face);
    const int n = m.n;

    InducedChain ic;
    ic.face = face;
    double rho = 0.0;
    for (int s = 0; s < n; ++s) {
        if (!in[static_cast<std::size_t>(s)]) {
            rho += m.lambda(s) * (m.tau(s) - m.tau_tilde(s));
        }
    }
    ic.rho_hat_face = rho;
    if (std::abs(1.0 - rho) <= tol::degenerate_traffic) {
        throw DegenerateTraffic(rho);
    }

    const Eigen::MatrixXd q = mixed_kernel(m, in);
    const auto classes = essential_classes(q);
    if (classes.size() > 1) {
        throw MultipleEssentialClasses(classes, std::vector<double>{});
    }

    // Unknowns x = (pi_1..pi_n, tau_bar_face): station balance for
    // t = 1..n-1, the normalization row, then the inter-poll time row.
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 1, n + 1);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
    for (int t = 0; t + 1 < n; ++t) {
        for (int s = 0; s < n; ++s) {
            a(t, s) = (s == t ? 1.0 : 0.0) - q(s, t);
        }
        double r = 0.0;
        for (int s = 0; s < n; ++s) {
            if (!in[static_cast<std::size_t>(s)]) {
                r += m.lambda(s) * (m.p(s, t) - m.p_tilde(s, t));
            }
        }
        a(t, n) = -r;
    }
    a.row(n - 1).head(n).setOnes();
    b(n - 1) = 1.0;
    for (int s = 0; s < n; ++s) {
        a(n, s) = in[static_cast<std::size_t>(s)] ? -m.tau(s) : -m.tau_tilde(s);
    }
    a(n, n) = 1.0 - rho;

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const Eigen::VectorXd x = lu.solve(b);
    ic.pi = x.head(n);
    ic.tau_bar_face = x(n);

    // Verify all rows including the one the normalization replaced.
    double defect = (a * x - b).cwiseAbs().maxCoeff();
    Eigen::VectorXd full = ic.pi - q.transpose() * ic.pi;
    for (int t = 0; t < n; ++t) {
        double r = 0.0;
        for (int s = 0; s < n; ++s) {
            if (!in[static_cast<std::size_t>(s)]) {
                r += m.lambda(s) * (m.p(s, t) - m.p_tilde(s, t));
            }
        }
        full(t) -= ic.tau_bar_face * r;
    }
    defect = std::max(defect, full.cwiseAbs().maxCoeff());
    if (!(defect <= tol::solver_residual)) {
        throw SolveError("induced chain " + face_label(face) + " residual " +
                         std::to_string(defect) + " exceeds tolerance");
    }

    ic.v = Eigen::VectorXd::Zero(n);
    for (int s : face) {
        ic.v(s - 1) = m.lambda(s - 1) * ic.tau_bar_face - ic.pi(s - 1);
    }

    ic.worst_margin = std::numeric_limits<double>::infinity();
    for (int s = 0; s < n; ++s) {
        if (!in[static_cast<std::size_t>(s)]) {
            ic.worst_margin =
                std::min(ic.worst_margin, ic.pi(s) - m.lambda(s) * ic.tau_bar_face);
        }
    }
    if (ic.worst_margin > tol::strict_margin) {
        ic.ergodic = 1;
    } else if (ic.worst_margin < -tol::strict_margin) {
        ic.ergodic = -1;
    } else {
        ic.ergodic = 0;
    }
    return ic;
}

LyapunovCertificate lyapunov_certificate(const PollingModel& m,
                                         const std::vector<InducedChain>& faces) {
    require_valid(m);
    const TrafficSummary traffic = traffic_summary(m);
    if (!(traffic.rho_hat < 1.0)) {
        throw UnstableRegime("drift certificate requires rho_hat < 1");
    }

    const Eigen::VectorXd gap = m.tau_tilde - m.tau;
    double eps0 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m.n; ++i) {
        if (gap(i) > 0.0) {
            eps0 = std::min(eps0, gap(i));
        }
    }
    eps0 = std::isfinite(eps0) ? 1e-3 * eps0 : 1e-6;

    std::string fail_what;
    Face fail_face;
    int fail_coord = 0;

    for (double eps = eps0; eps >= 1e-12; eps /= 10.0) {
        LyapunovCertificate cert;
        cert.epsilon = eps;
        cert.u = gap.cwiseMax(eps);
        cert.unit_values.resize(m.n);
        const double carried_rate = cert.u.dot(m.lambda) / (1.0 - traffic.rho_hat);
        bool ok = true;
        for (int i = 0; i < m.n; ++i) {
            cert.unit_values(i) = cert.u(i) + carried_rate * (m.tau(i) - m.tau_tilde(i));
            if (ok && !(cert.unit_values(i) > 0.0)) {
                ok = false;
                fail_what = "drift functional not increasing in direction " +
                            std::to_string(i + 1);
                fail_face.clear();
                fail_coord = i + 1;
            }
        }
        cert.face_drift.reserve(faces.size());
        for (const InducedChain& ic : faces) {
            const double d = drift_value(cert.u, m, traffic.rho_hat, ic.v);
            cert.face_drift.push_back(d);
            if (ok && !(d < 0.0)) {
                ok = false;
                fail_what = "drift not negative on face " + face_label(ic.face);
                fail_face = ic.face;
                fail_coord = 0;
            }
        }
        if (ok) {
            cert.valid = true;
            return cert;
        }
    }
    throw CertificateFailed(fail_what, fail_face, fail_coord);
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Ergodic: return "Ergodic";
        case Verdict::Transient: return "Transient";
        case Verdict::NotErgodic: return "NotErgodic";
        case Verdict::Inconclusive: return "Inconclusive";
    }
    return "Inconclusive";
}

Classification classify(const PollingModel& m, std::int64_t max_faces) {
    require_valid(m);
    Classification c;

    const auto classes = essential_classes(m.p_tilde);
    if (classes.size() > 1) {
        c.verdict = Verdict::NotErgodic;
        c.evidence = "empty-station routing has " + std::to_string(classes.size()) +
                     " closed classes; with independent batch arrivals the chain "
                     "cannot be ergodic";
        return c;
    }

    ServerDistribution base;
    try {
        base = solve_server_distribution(m);
    } catch (const DegenerateTraffic& e) {
        c.verdict = Verdict::Inconclusive;
        c.evidence = "rho_hat = " + std::to_string(e.rho_hat) +
                     " inside the decision band around 1";
        return c;
    }
    c.base = base;
    c.nec = necessary_conditions(m, base);
    const bool matched = same_routing(m);

    double worst = c.nec.rho_margin;
    std::string worst_name = "1 - rho_hat";
    for (int j = 0; j < m.n; ++j) {
        const double mj = c.nec.flux[static_cast<std::size_t>(j)].margin;
        if (mj < worst) {
            worst = mj;
            worst_name = "station " + std::to_string(j + 1) +
                         " margin F_j - lambda_j*tau_bar";
        }
    }
    if (worst < -tol::strict_margin) {
        c.verdict = matched ? Verdict::Transient : Verdict::NotErgodic;
        c.evidence = worst_name + " = " + std::to_string(worst) + " < 0";
        return c;
    }
    if (worst <= tol::strict_margin) {
        c.verdict = Verdict::Inconclusive;
        c.evidence = worst_name + " = " + std::to_string(worst) +
                     " inside the decision band";
        return c;
    }

    if (m.n > tol::max_face_stations) {
        throw FaceLimitExceeded("face enumeration over " + std::to_string(m.n) +
                                " stations exceeds the station limit " +
                                std::to_string(tol::max_face_stations));
    }
    const std::int64_t total = (std::int64_t{1} << m.n) - 1;
    if (total > max_faces) {
        throw FaceLimitExceeded(std::to_string(total) + " faces exceed the cap " +
                                std::to_string(max_faces) +
                                "; raise the cap to force enumeration");
    }

    bool ambiguous = false;
    std::string ambiguous_where;
    for (std::int64_t mask = 1; mask <= total; ++mask) {
        Face face;
        for (int s = 0; s < m.n; ++s) {
            if (mask & (std::int64_t{1} << s)) {
                face.push_back(s + 1);
            }
        }
        try {
            c.faces.push_back(solve_induced_chain(m, face));
        } catch (const SolveError&) {
            // Saturated chain with no usable stationary law: cannot be an
            // ergodic face, but also cannot be certified against.
            if (!ambiguous) {
                ambiguous = true;
                ambiguous_where = "face " + face_label(face) + " has no tractable "
                                  "stationary law";
            }
            continue;
        }
        if (c.faces.back().ergodic == 0 && !ambiguous) {
            ambiguous = true;
            ambiguous_where = "face " + face_label(face) + " margin " +
                              std::to_string(c.faces.back().worst_margin) +
                              " inside the decision band";
        }
    }
    if (ambiguous) {
        c.verdict = Verdict::Inconclusive;
        c.evidence = ambiguous_where;
        return c;
    }

    std::vector<InducedChain> ergodic_faces;
    for (const InducedChain& ic : c.faces) {
        if (ic.ergodic > 0) {
            ergodic_faces.push_back(ic);
        }
    }
    try {
        c.certificate = lyapunov_certificate(m, ergodic_faces);
    } catch (const CertificateFailed& e) {
        c.verdict = Verdict::Inconclusive;
        c.evidence = std::string("certificate construction failed: ") + e.what();
        return c;
    }
    c.verdict = Verdict::Ergodic;
    c.conjecture_based = !matched;
    c.evidence = "drift functional negative on all " +
                 std::to_string(ergodic_faces.size()) + " expanding faces";
    return c;
}

TransienceSweep transience_sweep(const PollingModel& m) {
    require_valid(m);
    if (!same_routing(m)) {
        throw ValidationError("saturation walk requires the two routing matrices "
                              "to coincide");
    }

    TransienceSweep sweep;
    const TrafficSummary traffic = traffic_summary(m);
    if (traffic.rho_hat - 1.0 > tol::strict_margin) {
        sweep.verdict = Verdict::Transient;
        sweep.note = "rho_hat = " + std::to_string(traffic.rho_hat) + " > 1";
        return sweep;
    }
    if (std::abs(traffic.rho_hat - 1.0) <= tol::strict_margin) {
        sweep.verdict = Verdict::Inconclusive;
        sweep.note = "rho_hat inside the decision band around 1";
        return sweep;
    }

    // Under matched routing the server-position law of every saturated
    // chain equals the stationary law of p; take it from the full face.
    Face full(static_cast<std::size_t>(m.n));
    std::iota(full.begin(), full.end(), 1);
    const InducedChain top = solve_induced_chain(m, full);
    const Eigen::VectorXd& f = top.pi;

    std::vector<int> idx(static_cast<std::size_t>(m.n));
    std::iota(idx.begin(), idx.end(), 0);
    auto ratio = [&](int i) {
        return f(i) > 0.0 ? m.lambda(i) / f(i) : std::numeric_limits<double>::infinity();
    };
    std::stable_sort(idx.begin(), idx.end(),
                     [&](int a, int b) { return ratio(a) < ratio(b); });
    for (std::size_t k = 0; k + 1 < idx.size(); ++k) {
        const double ra = ratio(idx[k]);
        const double rb = ratio(idx[k + 1]);
        if (ra == rb || std::abs(ra - rb) <= 1e-12 * std::max(1.0, std::abs(ra))) {
            sweep.had_tie = true;
        }
    }
    sweep.order.reserve(idx.size());
    for (int i : idx) {
        sweep.order.push_back(i + 1);
    }

    // Peel stations off the full face in order; the drift sign of the
    // station just examined decides between continuing and stopping.
    for (std::size_t k = 0; k < idx.size(); ++k) {
        Face face(sweep.order.begin() + static_cast<std::ptrdiff_t>(k),
                  sweep.order.end());
        std::sort(face.begin(), face.end());
        InducedChain ic;
        try {
            ic = solve_induced_chain(m, face);
        } catch (const SolveError& e) {
            sweep.verdict = Verdict::Inconclusive;
            sweep.note = std::string("face ") + face_label(face) +
                         " not solvable: " + e.what();
            return sweep;
        }
        const int station = sweep.order[k];
        const double v = ic.v(station - 1);
        sweep.steps.push_back({station, face, v});
        if (v > tol::strict_margin) {
            sweep.verdict = Verdict::Transient;
            sweep.note = "station " + std::to_string(station) + " drifts outward on " +
                         face_label(face);
            return sweep;
        }
        if (!(v < -tol::strict_margin)) {
            sweep.verdict = Verdict::Inconclusive;
            sweep.note = "station " + std::to_string(station) +
                         " drift inside the decision band on " + face_label(face);
            return sweep;
        }
    }
    sweep.verdict = Verdict::Ergodic;
    sweep.note = "every station drifts inward along the walk";
    return sweep;
}

}  // namespace sdpoll
