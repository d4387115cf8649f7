#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sdpoll/model.hpp"
#include "sdpoll/server_distribution.hpp"

namespace sdpoll {

// A face is the set of stations treated as saturated. Stations are 1-based
// and kept sorted. The empty face reproduces the base system.
using Face = std::vector<int>;

// Server-position law of the chain in which the stations of `face` never
// empty. pi is its stationary law, tau_bar_face the stationary mean
// inter-poll time, v the outgoing drift direction on the face (zero on
// coordinates outside it). ergodic is a tri-state sign: +1 when every
// station outside the face satisfies lambda_j * tau_bar_face < pi_j with
// margin, -1 when some station violates it with margin, 0 when the worst
// margin sits inside the decision band.
struct InducedChain {
    Face face;
    Eigen::VectorXd pi;
    double rho_hat_face = 0.0;
    double tau_bar_face = 0.0;
    Eigen::VectorXd v;
    int ergodic = 0;
    double worst_margin = 0.0;  // min over j outside of pi_j - lambda_j tau_bar_face
};

[[nodiscard]] InducedChain solve_induced_chain(const PollingModel& m, const Face& face);

// Linear drift functional built from the station weights u_i. valid means
// the functional is negative on the supplied face drifts and positive on
// every unit direction.
struct LyapunovCertificate {
    Eigen::VectorXd u;
    double epsilon = 0.0;
    std::vector<double> face_drift;
    Eigen::VectorXd unit_values;
    bool valid = false;
};

// Builds the certificate over the supplied (ergodic) faces, lowering the
// weight floor epsilon geometrically until the sign conditions hold.
// Throws CertificateFailed when no floor in the schedule works.
[[nodiscard]] LyapunovCertificate lyapunov_certificate(
    const PollingModel& m, const std::vector<InducedChain>& faces);

enum class Verdict { Ergodic, Transient, NotErgodic, Inconclusive };

[[nodiscard]] const char* to_string(Verdict v);

struct Classification {
    Verdict verdict = Verdict::Inconclusive;
    bool conjecture_based = false;
    std::string evidence;
    std::optional<ServerDistribution> base;
    NecessaryConditions nec;
    std::vector<InducedChain> faces;
    std::optional<LyapunovCertificate> certificate;
};

// Full stability classification: necessary conditions first, then the
// drift certificate over every face whose induced chain passes the
// saturation test. Verdicts derived from that test carry the
// conjecture_based flag whenever the two routing matrices differ.
[[nodiscard]] Classification classify(const PollingModel& m,
                                      std::int64_t max_faces = std::int64_t{1} << 20);

// One step of the saturation walk: the station whose drift sign was
// examined, the face it was examined on, and the drift value.
struct SweepStep {
    int station = 0;
    Face face;
    double v = 0.0;
};

struct TransienceSweep {
    std::vector<int> order;  // stations sorted by lambda_i / F_i, 1-based
    bool had_tie = false;
    std::vector<SweepStep> steps;
    Verdict verdict = Verdict::Inconclusive;
    std::string note;
};

// Saturation walk for models whose two routing matrices coincide: peel
// stations off the full face in increasing lambda_i / F_i order and follow
// the drift signs. Decides between Ergodic and Transient up to the margin
// band. Throws ValidationError when the routing matrices differ.
[[nodiscard]] TransienceSweep transience_sweep(const PollingModel& m);

}  // namespace sdpoll
