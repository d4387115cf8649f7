#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "sdpoll/errors.hpp"
#include "sdpoll/simulator.hpp"

namespace sdpoll {

namespace {

// Probability mass function of the number of batch epochs accumulated over
// one travel period, evaluated for counts 0..kmax, plus the leftover tail.
struct CountLaw {
    std::vector<double> pmf;
    double tail = 0.0;
};

void add_poisson(CountLaw& law, double weight, double rate, int kmax) {
    double pk = weight * std::exp(-rate);
    double used = 0.0;
    for (int k = 0; k <= kmax; ++k) {
        law.pmf[static_cast<std::size_t>(k)] += pk;
        used += pk;
        pk *= rate / static_cast<double>(k + 1);
    }
    law.tail += weight - used;
}

void add_geometric_counts(CountLaw& law, double weight, double rate, int kmax) {
    // Poisson epochs over an exponential duration collapse to a geometric
    // count: P(K = k) = (1 / (1 + r)) (r / (1 + r))^k with r = rate * mean.
    const double q = rate / (1.0 + rate);
    double pk = weight / (1.0 + rate);
    double used = 0.0;
    for (int k = 0; k <= kmax; ++k) {
        law.pmf[static_cast<std::size_t>(k)] += pk;
        used += pk;
        pk *= q;
    }
    law.tail += weight - used;
}

CountLaw count_law(double lambda_hat, double mean, double m2, int kmax) {
    CountLaw law;
    law.pmf.assign(static_cast<std::size_t>(kmax) + 1, 0.0);
    if (lambda_hat <= 0.0) {
        law.pmf[0] = 1.0;
        return law;
    }
    const double sq = mean * mean;
    const double tol = 1e-9 * (1.0 + std::abs(m2));
    if (std::abs(m2 - sq) <= tol) {
        add_poisson(law, 1.0, lambda_hat * mean, kmax);
    } else if (std::abs(m2 - 2.0 * sq) <= tol) {
        add_geometric_counts(law, 1.0, lambda_hat * mean, kmax);
    } else {
        const double var = m2 - sq;
        if (var < -tol) {
            throw ValidationError("travel second moment below squared mean");
        }
        const double s = std::sqrt(std::max(var, 0.0));
        double lo, hi, p_lo;
        if (mean >= s) {
            lo = mean - s;
            hi = mean + s;
            p_lo = 0.5;
        } else {
            lo = 0.0;
            hi = m2 / mean;
            p_lo = 1.0 - sq / m2;
        }
        add_poisson(law, p_lo, lambda_hat * lo, kmax);
        add_poisson(law, 1.0 - p_lo, lambda_hat * hi, kmax);
    }
    return law;
}

// Arrival mass in customers (batch count times batch size) restricted to
// 0..cap; suffix[d] = P(arrivals >= d), suffix[cap + 1] = tail beyond cap.
struct ArrivalLaw {
    std::vector<double> pmf;
    std::vector<double> suffix_ge;
    double overflow = 0.0;
};

ArrivalLaw arrival_law(const CountLaw& counts, long long batch, int cap) {
    ArrivalLaw law;
    law.pmf.assign(static_cast<std::size_t>(cap) + 1, 0.0);
    double used = 0.0;
    for (int k = 0; static_cast<long long>(k) * batch <= cap &&
                    k < static_cast<int>(counts.pmf.size());
         ++k) {
        const auto j = static_cast<std::size_t>(static_cast<long long>(k) * batch);
        law.pmf[j] += counts.pmf[static_cast<std::size_t>(k)];
        used += counts.pmf[static_cast<std::size_t>(k)];
    }
    law.overflow = std::max(1.0 - used, 0.0);
    law.suffix_ge.assign(static_cast<std::size_t>(cap) + 2, 0.0);
    law.suffix_ge[static_cast<std::size_t>(cap) + 1] = law.overflow;
    for (int d = cap; d >= 0; --d) {
        law.suffix_ge[static_cast<std::size_t>(d)] =
            law.suffix_ge[static_cast<std::size_t>(d) + 1] +
            law.pmf[static_cast<std::size_t>(d)];
    }
    return law;
}

}  // namespace

OracleResult truncated_chain_oracle(const PollingModel& m, int cap) {
    require_valid(m);
    if (cap < 1) {
        throw ValidationError("queue cap must be positive");
    }
    if (m.n > 3) {
        throw StateSpaceTooLarge("exhaustive chain limited to three stations");
    }
    const int n = m.n;
    const long long axis = static_cast<long long>(cap) + 1;
    long long cells = 1;
    for (int q = 0; q < n; ++q) {
        cells *= axis;
        if (cells * n > 2000000) {
            throw StateSpaceTooLarge("state grid exceeds two million entries");
        }
    }

    const double b = m.batch_mean();
    const double b2 = m.batch_second_moment();
    if (std::abs(b - std::round(b)) > 1e-9 || std::abs(b2 - b * b) > 1e-9 * (1.0 + b * b)) {
        throw UnsupportedLaw("exhaustive chain needs a fixed integer batch size");
    }
    const long long batch = std::llround(b);
    const int kmax = static_cast<int>(cap / std::max(batch, 1ll));

    // Arrival laws per origin station, service flag, and destination queue.
    std::vector<ArrivalLaw> arrivals(static_cast<std::size_t>(n * 2 * n));
    auto law_at = [&](int origin, int served_flag, int q) -> ArrivalLaw& {
        return arrivals[static_cast<std::size_t>((origin * 2 + served_flag) * n + q)];
    };
    for (int i = 0; i < n; ++i) {
        const double t2 = m.tau2 ? (*m.tau2)(i) : m.tau(i) * m.tau(i);
        const double tt2 =
            m.tau_tilde2 ? (*m.tau_tilde2)(i) : m.tau_tilde(i) * m.tau_tilde(i);
        for (int q = 0; q < n; ++q) {
            const double rate = m.lambda(q) / b;
            law_at(i, 1, q) = arrival_law(count_law(rate, m.tau(i), t2, kmax), batch, cap);
            law_at(i, 0, q) =
                arrival_law(count_law(rate, m.tau_tilde(i), tt2, kmax), batch, cap);
        }
    }

    const auto ucells = static_cast<std::size_t>(cells);
    std::vector<double> pi(static_cast<std::size_t>(n) * ucells, 0.0);
    pi[0] = 1.0;  // server at station 1 with all queues empty
    std::vector<double> next(pi.size(), 0.0);
    std::vector<double> grid(ucells, 0.0);
    std::vector<double> scratch(ucells, 0.0);

    std::vector<long long> stride(static_cast<std::size_t>(n), 1);
    for (int q = 1; q < n; ++q) {
        stride[static_cast<std::size_t>(q)] = stride[static_cast<std::size_t>(q) - 1] * axis;
    }

    double clip_rate = 0.0;
    int iterations = 0;
    const int max_iterations = 200000;
    for (; iterations < max_iterations; ++iterations) {
        std::fill(next.begin(), next.end(), 0.0);
        double clip_step = 0.0;
        for (int s = 0; s < n; ++s) {
            const double* block = pi.data() + static_cast<std::size_t>(s) * ucells;
            for (int flag = 0; flag < 2; ++flag) {
                // Gather mass into the post-service grid: served stations
                // drop one customer at the polled queue.
                std::fill(grid.begin(), grid.end(), 0.0);
                const long long step = stride[static_cast<std::size_t>(s)];
                double gathered = 0.0;
                for (long long idx = 0; idx < cells; ++idx) {
                    const long long xs = (idx / step) % axis;
                    if ((xs > 0) != (flag == 1)) {
                        continue;
                    }
                    const double mass = block[static_cast<std::size_t>(idx)];
                    if (mass == 0.0) {
                        continue;
                    }
                    const long long target = flag == 1 ? idx - step : idx;
                    grid[static_cast<std::size_t>(target)] += mass;
                    gathered += mass;
                }
                if (gathered == 0.0) {
                    continue;
                }
                // Convolve each axis with the matching arrival law.
                for (int q = 0; q < n; ++q) {
                    const ArrivalLaw& law = law_at(s, flag, q);
                    const long long st = stride[static_cast<std::size_t>(q)];
                    std::fill(scratch.begin(), scratch.end(), 0.0);
                    for (long long base = 0; base < cells; ++base) {
                        const long long xq = (base / st) % axis;
                        if (xq != 0) {
                            continue;
                        }
                        // one line along axis q starting at base
                        for (long long x = 0; x <= cap; ++x) {
                            const double mass =
                                grid[static_cast<std::size_t>(base + x * st)];
                            if (mass == 0.0) {
                                continue;
                            }
                            const long long room = cap - x;
                            for (long long j = 0; j < room; ++j) {
                                scratch[static_cast<std::size_t>(base + (x + j) * st)] +=
                                    mass * law.pmf[static_cast<std::size_t>(j)];
                            }
                            scratch[static_cast<std::size_t>(base + cap * st)] +=
                                mass * law.suffix_ge[static_cast<std::size_t>(room)];
                            clip_step +=
                                mass * law.suffix_ge[static_cast<std::size_t>(room) + 1];
                        }
                    }
                    grid.swap(scratch);
                }
                // Route the server.
                for (int j = 0; j < n; ++j) {
                    const double prob = flag == 1 ? m.p(s, j) : m.p_tilde(s, j);
                    if (prob == 0.0) {
                        continue;
                    }
                    double* dest = next.data() + static_cast<std::size_t>(j) * ucells;
                    for (long long idx = 0; idx < cells; ++idx) {
                        dest[static_cast<std::size_t>(idx)] +=
                            prob * grid[static_cast<std::size_t>(idx)];
                    }
                }
            }
        }
        // Lazy step removes periodicity without changing the fixed point.
        double delta = 0.0;
        for (std::size_t idx = 0; idx < pi.size(); ++idx) {
            const double mixed = 0.5 * pi[idx] + 0.5 * next[idx];
            delta += std::abs(mixed - pi[idx]);
            pi[idx] = mixed;
        }
        clip_rate = clip_step;
        if (delta < 1e-14) {
            ++iterations;
            break;
        }
    }
    if (iterations >= max_iterations) {
        throw SolveError("stationary iteration did not converge");
    }

    OracleResult out;
    out.states = static_cast<long long>(pi.size());
    out.iterations = iterations;
    out.f.setZero(n);
    out.f_tilde.setZero(n);
    out.queue_at_own_poll.setZero(n);
    out.queue_at_poll.setZero(n);
    out.tau_bar = 0.0;
    double shell = 0.0;
    for (int s = 0; s < n; ++s) {
        const double* block = pi.data() + static_cast<std::size_t>(s) * ucells;
        for (long long idx = 0; idx < cells; ++idx) {
            const double mass = block[static_cast<std::size_t>(idx)];
            if (mass == 0.0) {
                continue;
            }
            bool at_cap = false;
            long long rem = idx;
            long long xs = 0;
            for (int q = 0; q < n; ++q) {
                const long long xq = rem % axis;
                rem /= axis;
                if (q == s) {
                    xs = xq;
                }
                if (xq == cap) {
                    at_cap = true;
                }
                out.queue_at_poll(q) += mass * static_cast<double>(xq);
            }
            out.f(s) += mass;
            out.queue_at_own_poll(s) += mass * static_cast<double>(xs);
            if (xs == 0) {
                out.f_tilde(s) += mass;
                out.tau_bar += mass * m.tau_tilde(s);
            } else {
                out.tau_bar += mass * m.tau(s);
            }
            if (at_cap) {
                shell += mass;
            }
        }
    }
    for (int s = 0; s < n; ++s) {
        if (out.f(s) > 0.0) {
            out.queue_at_own_poll(s) /= out.f(s);
        }
    }
    out.tail_bound = shell + clip_rate;
    return out;
}

}  // namespace sdpoll
