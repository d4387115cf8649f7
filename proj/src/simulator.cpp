#include "sdpoll/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <optional>
#include <random>
#include <utility>

#include "sdpoll/errors.hpp"
#include "sdpoll/rng.hpp"
#include "sdpoll/tolerances.hpp"

namespace sdpoll {

namespace {

using cd = std::complex<double>;

constexpr double kMomentMatch = 1e-9;

bool close_rel(double a, double b) {
    return std::abs(a - b) <= kMomentMatch * (1.0 + std::abs(b));
}

struct TravelLaw {
    TravelKind kind = TravelKind::Deterministic;
    double mean = 0.0;
    double m2 = 0.0;
    double lo = 0.0, hi = 0.0, p_lo = 0.0;  // two-point support and weight

    double sample(std::mt19937_64& g) const {
        switch (kind) {
            case TravelKind::Deterministic:
                return mean;
            case TravelKind::Exponential:
                return std::exponential_distribution<double>(1.0 / mean)(g);
            case TravelKind::TwoPoint:
                return std::uniform_real_distribution<double>(0.0, 1.0)(g) < p_lo ? lo
                                                                                  : hi;
            case TravelKind::Auto:
                break;
        }
        throw SolveError("travel law left unresolved");
    }

    // E[exp(-s * T)] for complex s.
    cd transform(cd s) const {
        switch (kind) {
            case TravelKind::Deterministic:
                return std::exp(-s * mean);
            case TravelKind::Exponential:
                return 1.0 / (1.0 + mean * s);
            case TravelKind::TwoPoint:
                return p_lo * std::exp(-s * lo) + (1.0 - p_lo) * std::exp(-s * hi);
            case TravelKind::Auto:
                break;
        }
        throw SolveError("travel law left unresolved");
    }
};

TravelLaw resolve_travel_law(TravelKind kind, double mean, std::optional<double> m2,
                             const std::string& what) {
    TravelLaw law;
    law.mean = mean;
    const double sq = mean * mean;
    if (kind == TravelKind::Auto) {
        if (!m2 || close_rel(*m2, sq)) {
            kind = TravelKind::Deterministic;
        } else if (close_rel(*m2, 2.0 * sq)) {
            kind = TravelKind::Exponential;
        } else {
            kind = TravelKind::TwoPoint;
        }
    }
    law.kind = kind;
    switch (kind) {
        case TravelKind::Deterministic:
            if (m2 && !close_rel(*m2, sq)) {
                throw ValidationError(what + ": deterministic law cannot match the "
                                      "requested second moment");
            }
            law.m2 = sq;
            break;
        case TravelKind::Exponential:
            if (m2 && !close_rel(*m2, 2.0 * sq)) {
                throw ValidationError(what + ": exponential law cannot match the "
                                      "requested second moment");
            }
            law.m2 = 2.0 * sq;
            break;
        case TravelKind::TwoPoint: {
            if (!m2) {
                throw ValidationError(what + ": two-point law needs a second moment");
            }
            law.m2 = *m2;
            const double var = *m2 - sq;
            if (var < -kMomentMatch * (1.0 + *m2)) {
                throw ValidationError(what + ": second moment below squared mean");
            }
            const double s = std::sqrt(std::max(var, 0.0));
            if (mean >= s) {
                law.lo = mean - s;
                law.hi = mean + s;
                law.p_lo = 0.5;
            } else {
                // support {0, m2/mean} keeps the atoms nonnegative
                law.lo = 0.0;
                law.hi = *m2 / mean;
                law.p_lo = 1.0 - sq / *m2;
            }
            break;
        }
        case TravelKind::Auto:
            break;
    }
    return law;
}

struct BatchSampler {
    BatchKind kind = BatchKind::Deterministic;
    long long size = 1;
    double p = 1.0;  // geometric success parameter 1/b

    long long sample(std::mt19937_64& g) const {
        if (kind == BatchKind::Geometric) {
            return 1 + std::geometric_distribution<long long>(p)(g);
        }
        return size;
    }

    // E[z^B] on the unit disc.
    cd pgf(cd z) const {
        if (kind == BatchKind::Geometric) {
            return p * z / (1.0 - (1.0 - p) * z);
        }
        cd out = 1.0;
        for (long long k = 0; k < size; ++k) {
            out *= z;
        }
        return out;
    }
};

BatchSampler resolve_batch_law(BatchKind kind, const PollingModel& m) {
    const double b = m.batch_mean();
    const double b2 = m.batch_second_moment();
    BatchSampler out;
    if (kind == BatchKind::Auto) {
        if (close_rel(b, 1.0) && close_rel(b2, 1.0)) {
            kind = BatchKind::Deterministic;
        } else if (close_rel(b2, 2.0 * b * b - b)) {
            kind = BatchKind::Geometric;
        } else if (close_rel(b, std::round(b)) && close_rel(b2, b * b)) {
            kind = BatchKind::Deterministic;
        } else {
            throw UnsupportedLaw("no built-in batch law matches b = " + std::to_string(b) +
                                 ", b2 = " + std::to_string(b2));
        }
    }
    if (kind == BatchKind::Deterministic) {
        if (!close_rel(b, std::round(b)) || !close_rel(b2, b * b)) {
            throw UnsupportedLaw("deterministic batch law needs an integer mean with "
                                 "b2 = b^2");
        }
        out.kind = BatchKind::Deterministic;
        out.size = static_cast<long long>(std::llround(b));
    } else {
        if (!close_rel(b2, 2.0 * b * b - b)) {
            throw UnsupportedLaw("geometric batch law needs b2 = 2b^2 - b");
        }
        out.kind = BatchKind::Geometric;
        out.p = 1.0 / b;
    }
    return out;
}

struct ResolvedLaws {
    std::vector<TravelLaw> served;
    std::vector<TravelLaw> empty;
    BatchSampler batch;
    Eigen::VectorXd lambda_hat;  // batch-epoch rate per station
};

ResolvedLaws resolve_laws(const PollingModel& m, const SimConfig& cfg) {
    ResolvedLaws laws;
    const double b = m.batch_mean();
    laws.batch = resolve_batch_law(cfg.batch_law, m);
    laws.lambda_hat = m.lambda / b;
    laws.served.reserve(static_cast<std::size_t>(m.n));
    laws.empty.reserve(static_cast<std::size_t>(m.n));
    for (int i = 0; i < m.n; ++i) {
        std::optional<double> m2;
        if (m.tau2) m2 = (*m.tau2)(i);
        laws.served.push_back(resolve_travel_law(
            cfg.travel_law, m.tau(i), m2, "station " + std::to_string(i + 1)));
        std::optional<double> mt2;
        if (m.tau_tilde2) mt2 = (*m.tau_tilde2)(i);
        laws.empty.push_back(resolve_travel_law(
            cfg.travel_law_tilde, m.tau_tilde(i), mt2,
            "station " + std::to_string(i + 1) + " (empty)"));
    }
    return laws;
}

void validate_config(const SimConfig& cfg) {
    if (cfg.horizon < 10000) {
        throw ValidationError("horizon must be at least 10000 polling events");
    }
    if (!(cfg.warmup_fraction >= 0.0 && cfg.warmup_fraction < 1.0)) {
        throw ValidationError("warmup_fraction must lie in [0, 1)");
    }
    if (cfg.replications < 1) {
        throw ValidationError("at least one replication is required");
    }
}

int sample_row(const Eigen::MatrixXd& mat, int row, std::mt19937_64& g) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(g);
    double acc = 0.0;
    const int n = static_cast<int>(mat.cols());
    for (int j = 0; j < n; ++j) {
        acc += mat(row, j);
        if (u < acc) {
            return j;
        }
    }
    return n - 1;
}

// Core event loop shared by simulate and the transform-residual runner.
// Visit is called once per counted polling event, before any service,
// with the current station and queue sizes.
template <typename Visit>
ReplicationEstimate run_replication(const PollingModel& m, const SimConfig& cfg,
                                    const ResolvedLaws& laws, int rep, Visit&& visit) {
    const int n = m.n;
    std::mt19937_64 g = make_stream(cfg.seed, static_cast<std::uint64_t>(rep));
    std::vector<std::deque<double>> queues(static_cast<std::size_t>(n));
    std::vector<long long> sizes(static_cast<std::size_t>(n), 0);

    const long long warmup =
        static_cast<long long>(static_cast<double>(cfg.horizon) * cfg.warmup_fraction);
    const long long counted_events = cfg.horizon - warmup;

    std::vector<long long> polls_at(static_cast<std::size_t>(n), 0);
    std::vector<long long> empty_at(static_cast<std::size_t>(n), 0);
    std::vector<double> queue_own_sum(static_cast<std::size_t>(n), 0.0);
    std::vector<double> queue_all_sum(static_cast<std::size_t>(n), 0.0);
    std::vector<double> cycle_sum(static_cast<std::size_t>(n), 0.0);
    std::vector<long long> cycle_cnt(static_cast<std::size_t>(n), 0);
    std::vector<double> last_poll(static_cast<std::size_t>(n), 0.0);
    std::vector<char> last_counted(static_cast<std::size_t>(n), 0);
    double wait_sum = 0.0;
    long long served = 0;
    double travel_sum = 0.0;
    double half_sum[2] = {0.0, 0.0};
    long long half_cnt[2] = {0, 0};

    int s = 0;
    double t = 0.0;
    std::vector<std::pair<double, long long>> pending;
    for (long long event = 0; event < cfg.horizon; ++event) {
        const bool counted = event >= warmup;
        const bool busy = sizes[static_cast<std::size_t>(s)] > 0;
        if (counted) {
            polls_at[static_cast<std::size_t>(s)]++;
            long long total = 0;
            for (int q = 0; q < n; ++q) {
                queue_all_sum[static_cast<std::size_t>(q)] +=
                    static_cast<double>(sizes[static_cast<std::size_t>(q)]);
                total += sizes[static_cast<std::size_t>(q)];
            }
            queue_own_sum[static_cast<std::size_t>(s)] +=
                static_cast<double>(sizes[static_cast<std::size_t>(s)]);
            if (!busy) {
                empty_at[static_cast<std::size_t>(s)]++;
            }
            if (last_counted[static_cast<std::size_t>(s)]) {
                cycle_sum[static_cast<std::size_t>(s)] +=
                    t - last_poll[static_cast<std::size_t>(s)];
                cycle_cnt[static_cast<std::size_t>(s)]++;
            }
            const int half = (event - warmup) * 2 < counted_events ? 0 : 1;
            half_sum[half] += static_cast<double>(total);
            half_cnt[half]++;
            visit(s, sizes);
        }
        last_poll[static_cast<std::size_t>(s)] = t;
        last_counted[static_cast<std::size_t>(s)] = counted ? 1 : 0;

        if (busy) {
            const double arrival = queues[static_cast<std::size_t>(s)].front();
            queues[static_cast<std::size_t>(s)].pop_front();
            sizes[static_cast<std::size_t>(s)]--;
            if (counted) {
                wait_sum += t - arrival;
                served++;
            }
        }
        const int next = sample_row(busy ? m.p : m.p_tilde, s, g);
        const TravelLaw& law = busy ? laws.served[static_cast<std::size_t>(s)]
                                    : laws.empty[static_cast<std::size_t>(s)];
        const double d = law.sample(g);
        if (counted) {
            travel_sum += d;
        }

        for (int q = 0; q < n; ++q) {
            const double rate = laws.lambda_hat(q) * d;
            long long k = 0;
            if (rate > 0.0) {
                k = std::poisson_distribution<long long>(rate)(g);
            }
            if (k == 0) {
                continue;
            }
            pending.clear();
            pending.reserve(static_cast<std::size_t>(k));
            std::uniform_real_distribution<double> in_travel(0.0, d);
            for (long long e = 0; e < k; ++e) {
                pending.emplace_back(t + in_travel(g), laws.batch.sample(g));
            }
            std::sort(pending.begin(), pending.end());
            for (const auto& [epoch, size] : pending) {
                for (long long c = 0; c < size; ++c) {
                    queues[static_cast<std::size_t>(q)].push_back(epoch);
                }
                sizes[static_cast<std::size_t>(q)] += size;
            }
        }
        t += d;
        s = next;
    }

    ReplicationEstimate est;
    est.polls = counted_events;
    est.served = served;
    const double total_polls = static_cast<double>(counted_events);
    est.f.resize(n);
    est.f_tilde.resize(n);
    est.queue_at_own_poll.resize(n);
    est.queue_at_poll.resize(n);
    est.empty_given_polled.resize(n);
    est.cycle.resize(n);
    for (int q = 0; q < n; ++q) {
        const auto uq = static_cast<std::size_t>(q);
        est.f(q) = static_cast<double>(polls_at[uq]) / total_polls;
        est.f_tilde(q) = static_cast<double>(empty_at[uq]) / total_polls;
        est.queue_at_own_poll(q) =
            polls_at[uq] > 0 ? queue_own_sum[uq] / static_cast<double>(polls_at[uq])
                             : std::numeric_limits<double>::quiet_NaN();
        est.queue_at_poll(q) = queue_all_sum[uq] / total_polls;
        est.empty_given_polled(q) =
            polls_at[uq] > 0
                ? static_cast<double>(empty_at[uq]) / static_cast<double>(polls_at[uq])
                : std::numeric_limits<double>::quiet_NaN();
        est.cycle(q) = cycle_cnt[uq] > 0
                           ? cycle_sum[uq] / static_cast<double>(cycle_cnt[uq])
                           : std::numeric_limits<double>::quiet_NaN();
    }
    est.wait = served > 0 ? wait_sum / static_cast<double>(served)
                          : std::numeric_limits<double>::quiet_NaN();
    est.tau_bar = travel_sum / total_polls;
    const double m1 = half_cnt[0] > 0 ? half_sum[0] / static_cast<double>(half_cnt[0]) : 0.0;
    const double m2 = half_cnt[1] > 0 ? half_sum[1] / static_cast<double>(half_cnt[1]) : 0.0;
    est.unstable = m2 > 2.0 * m1 + 10.0;
    return est;
}

void mean_se(const std::vector<Eigen::VectorXd>& rows, Eigen::VectorXd& mean,
             Eigen::VectorXd& se) {
    const int r = static_cast<int>(rows.size());
    const int n = static_cast<int>(rows.front().size());
    mean = Eigen::VectorXd::Zero(n);
    for (const auto& row : rows) {
        mean += row;
    }
    mean /= static_cast<double>(r);
    se = Eigen::VectorXd::Zero(n);
    if (r < 2) {
        return;
    }
    for (const auto& row : rows) {
        se += (row - mean).cwiseAbs2();
    }
    se = (se / static_cast<double>(r - 1) / static_cast<double>(r)).cwiseSqrt();
}

void mean_se(const std::vector<double>& vals, double& mean, double& se) {
    const int r = static_cast<int>(vals.size());
    mean = 0.0;
    for (double v : vals) {
        mean += v;
    }
    mean /= static_cast<double>(r);
    se = 0.0;
    if (r < 2) {
        return;
    }
    for (double v : vals) {
        se += (v - mean) * (v - mean);
    }
    se = std::sqrt(se / static_cast<double>(r - 1) / static_cast<double>(r));
}

}  // namespace

SimulationEstimate simulate(const PollingModel& m, const SimConfig& cfg) {
    require_valid(m);
    validate_config(cfg);
    const ResolvedLaws laws = resolve_laws(m, cfg);

    SimulationEstimate out;
    out.reps.reserve(static_cast<std::size_t>(cfg.replications));
    for (int rep = 0; rep < cfg.replications; ++rep) {
        out.reps.push_back(
            run_replication(m, cfg, laws, rep, [](int, const std::vector<long long>&) {}));
        out.unstable_detected = out.unstable_detected || out.reps.back().unstable;
    }

    auto collect = [&](auto field) {
        std::vector<Eigen::VectorXd> rows;
        rows.reserve(out.reps.size());
        for (const auto& rep : out.reps) {
            rows.push_back(rep.*field);
        }
        return rows;
    };
    mean_se(collect(&ReplicationEstimate::f), out.f, out.f_se);
    mean_se(collect(&ReplicationEstimate::f_tilde), out.f_tilde, out.f_tilde_se);
    mean_se(collect(&ReplicationEstimate::queue_at_own_poll), out.queue_at_own_poll,
            out.queue_at_own_poll_se);
    mean_se(collect(&ReplicationEstimate::queue_at_poll), out.queue_at_poll,
            out.queue_at_poll_se);
    mean_se(collect(&ReplicationEstimate::empty_given_polled), out.empty_given_polled,
            out.empty_given_polled_se);
    mean_se(collect(&ReplicationEstimate::cycle), out.cycle, out.cycle_se);

    std::vector<double> waits, taus;
    for (const auto& rep : out.reps) {
        waits.push_back(rep.wait);
        taus.push_back(rep.tau_bar);
    }
    mean_se(waits, out.wait, out.wait_se);
    mean_se(taus, out.tau_bar, out.tau_bar_se);
    return out;
}

namespace {

cd ipow(cd base, long long e) {
    cd out = 1.0;
    while (e > 0) {
        if (e & 1) {
            out *= base;
        }
        base *= base;
        e >>= 1;
    }
    return out;
}

double transform_defect(const PollingModel& m, const ResolvedLaws& laws,
                        const Eigen::VectorXcd& z, const Eigen::VectorXcd& f_hat,
                        const Eigen::VectorXcd& ft_hat) {
    const int n = m.n;
    cd s = 0.0;
    for (int q = 0; q < n; ++q) {
        s += laws.lambda_hat(q) * (1.0 - laws.batch.pgf(z(q)));
    }
    Eigen::MatrixXcd a(n, n);
    Eigen::MatrixXcd at(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            // row i, column j: movement j -> i weighted by the transform of
            // the arrivals generated on the way
            a(i, j) = m.p(j, i) * laws.served[static_cast<std::size_t>(j)].transform(s);
            at(i, j) =
                m.p_tilde(j, i) * laws.empty[static_cast<std::size_t>(j)].transform(s);
        }
    }
    Eigen::MatrixXcd a_delta = a;
    for (int j = 0; j < n; ++j) {
        a_delta.col(j) /= z(j);
    }
    const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::VectorXcd defect = (eye - a_delta) * f_hat - (at - a_delta) * ft_hat;
    return defect.norm();
}

}  // namespace

std::vector<ResidualPoint> functional_residual(
    const PollingModel& m, const SimConfig& cfg,
    const std::vector<Eigen::VectorXcd>& z_points) {
    require_valid(m);
    validate_config(cfg);
    const ResolvedLaws laws = resolve_laws(m, cfg);
    const int n = m.n;
    for (const auto& z : z_points) {
        if (static_cast<int>(z.size()) != n) {
            throw ValidationError("every z point must have one entry per station");
        }
        for (int q = 0; q < n; ++q) {
            const double mag = std::abs(z(q));
            if (!(mag > 0.0 && mag <= 1.0)) {
                throw ValidationError("z entries must lie in the punctured unit disc");
            }
        }
    }

    const std::size_t points = z_points.size();
    // per point, per replication: empirical transforms
    std::vector<std::vector<Eigen::VectorXcd>> f_rep(points);
    std::vector<std::vector<Eigen::VectorXcd>> ft_rep(points);
    for (int rep = 0; rep < cfg.replications; ++rep) {
        std::vector<Eigen::VectorXcd> f_acc(points, Eigen::VectorXcd::Zero(n));
        std::vector<Eigen::VectorXcd> ft_acc(points, Eigen::VectorXcd::Zero(n));
        const ReplicationEstimate est = run_replication(
            m, cfg, laws, rep,
            [&](int s, const std::vector<long long>& sizes) {
                for (std::size_t pt = 0; pt < points; ++pt) {
                    cd w = 1.0;
                    for (int q = 0; q < n; ++q) {
                        w *= ipow(z_points[pt](q), sizes[static_cast<std::size_t>(q)]);
                    }
                    f_acc[pt](s) += w;
                    if (sizes[static_cast<std::size_t>(s)] == 0) {
                        ft_acc[pt](s) += w;
                    }
                }
            });
        const double total = static_cast<double>(est.polls);
        for (std::size_t pt = 0; pt < points; ++pt) {
            f_rep[pt].push_back(f_acc[pt] / total);
            ft_rep[pt].push_back(ft_acc[pt] / total);
        }
    }

    std::mt19937_64 boot = make_stream(cfg.seed, 0x626f6f74ull);
    std::uniform_int_distribution<int> pick(0, cfg.replications - 1);
    constexpr int kBootstrap = 200;

    std::vector<ResidualPoint> out;
    out.reserve(points);
    for (std::size_t pt = 0; pt < points; ++pt) {
        Eigen::VectorXcd f_bar = Eigen::VectorXcd::Zero(n);
        Eigen::VectorXcd ft_bar = Eigen::VectorXcd::Zero(n);
        for (int rep = 0; rep < cfg.replications; ++rep) {
            f_bar += f_rep[pt][static_cast<std::size_t>(rep)];
            ft_bar += ft_rep[pt][static_cast<std::size_t>(rep)];
        }
        f_bar /= static_cast<double>(cfg.replications);
        ft_bar /= static_cast<double>(cfg.replications);

        ResidualPoint point;
        point.z = z_points[pt];
        point.residual = transform_defect(m, laws, z_points[pt], f_bar, ft_bar);

        double acc = 0.0, acc2 = 0.0;
        for (int bs = 0; bs < kBootstrap; ++bs) {
            Eigen::VectorXcd fb = Eigen::VectorXcd::Zero(n);
            Eigen::VectorXcd ftb = Eigen::VectorXcd::Zero(n);
            for (int rep = 0; rep < cfg.replications; ++rep) {
                const int idx = pick(boot);
                fb += f_rep[pt][static_cast<std::size_t>(idx)];
                ftb += ft_rep[pt][static_cast<std::size_t>(idx)];
            }
            fb /= static_cast<double>(cfg.replications);
            ftb /= static_cast<double>(cfg.replications);
            const double r = transform_defect(m, laws, z_points[pt], fb, ftb);
            acc += r;
            acc2 += r * r;
        }
        const double mean = acc / kBootstrap;
        point.se = std::sqrt(std::max(acc2 / kBootstrap - mean * mean, 0.0));

        Eigen::VectorXcd f_swap = f_bar.reverse();
        Eigen::VectorXcd ft_swap = ft_bar.reverse();
        point.control_residual =
            transform_defect(m, laws, z_points[pt], f_swap, ft_swap);
        out.push_back(std::move(point));
    }
    return out;
}

}  // namespace sdpoll
