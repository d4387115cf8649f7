// Command-line front end: loads a model file, dispatches one analysis verb,
// renders a human-readable table and (optionally) a machine-readable CSV.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>

#include "sdpoll/ergodicity.hpp"
#include "sdpoll/errors.hpp"
#include "sdpoll/model.hpp"
#include "sdpoll/model_io.hpp"
#include "sdpoll/server_distribution.hpp"
#include "sdpoll/simulator.hpp"
#include "sdpoll/symmetric.hpp"
#include "sdpoll/waiting_time.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string pad(const std::string& s, int width) {
    if (static_cast<int>(s.size()) >= width) {
        return s;
    }
    return std::string(static_cast<std::size_t>(width) - s.size(), ' ') + s;
}

// Options resolved for the run; echoed into every output so a result can be
// reproduced from its own header.
struct Manifest {
    std::string command;
    std::string input;
    std::uint64_t seed = 1;
    std::vector<std::pair<std::string, std::string>> options;

    void print(std::ostream& os) const {
        os << "# command: " << command << "\n";
        os << "# input: " << input << "\n";
        os << "# version: " << kVersion << "\n";
        os << "# seed: " << seed << "\n";
        for (const auto& [k, v] : options) {
            os << "# " << k << ": " << v << "\n";
        }
    }
};

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

void write_csv(const std::string& path, const Manifest& man, const CsvTable& table) {
    std::ofstream os(path);
    if (!os) {
        throw sdpoll::ValidationError("cannot open csv output file " + path);
    }
    man.print(os);
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        os << (c ? "," : "") << table.header[c];
    }
    os << "\n";
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            os << (c ? "," : "") << row[c];
        }
        os << "\n";
    }
}

std::string face_name(const sdpoll::Face& face) {
    std::string out = "{";
    for (std::size_t i = 0; i < face.size(); ++i) {
        if (i) {
            out += ",";
        }
        out += std::to_string(face[i]);
    }
    return out + "}";
}

struct CommonOpts {
    std::string file;
    std::string csv;
    std::uint64_t seed = 1;
    bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& opt) {
    cmd->add_option("file", opt.file, "model file (json)")->required();
    cmd->add_option("--csv", opt.csv, "write machine-readable csv to this path");
    cmd->add_option("--seed", opt.seed, "seed for randomized work");
    cmd->add_flag("--quiet", opt.quiet, "suppress the run header and commentary");
}

// ---------------------------------------------------------------- solve ----

int cmd_solve(const CommonOpts& opt) {
    const sdpoll::PollingModel m = sdpoll::load_model(opt.file);
    const sdpoll::ServerDistribution d = sdpoll::solve_server_distribution(m);
    const sdpoll::FlowResiduals res = sdpoll::flow_residuals(m, d);
    const sdpoll::NecessaryConditions nec = sdpoll::necessary_conditions(m, d);

    Manifest man{"solve", opt.file, opt.seed, {}};
    if (!opt.quiet) {
        man.print(std::cout);
    }
    std::cout << pad("station", 8) << pad("F", 13) << pad("F_empty", 13)
              << pad("cycle", 13) << pad("flux margin", 13) << "\n";
    for (int j = 0; j < m.n; ++j) {
        std::cout << pad(std::to_string(j + 1), 8) << pad(fmt6(d.f(j)), 13)
                  << pad(fmt6(d.f_tilde(j)), 13) << pad(fmt6(d.cycle(j)), 13)
                  << pad(fmt6(nec.flux[static_cast<std::size_t>(j)].margin), 13) << "\n";
    }
    std::cout << "sum F = " << fmt6(d.f.sum()) << "\n";
    std::cout << "tau_bar = " << fmt6(d.tau_bar) << "  rho_hat = " << fmt6(d.rho_hat)
              << "\n";
    if (!opt.quiet) {
        std::cout << "flow residuals: balance " << fmt6(res.proba) << ", flux "
                  << fmt6(res.flux) << "\n";
        std::cout << "stability necessary conditions: rho_hat<1 "
                  << (nec.rho_pass ? "pass" : "FAIL") << " (margin "
                  << fmt6(nec.rho_margin) << "), station flux "
                  << (nec.flux_pass ? "pass" : "FAIL") << ", offered load "
                  << (nec.sup_pass ? "pass" : "FAIL") << " (margin "
                  << fmt6(nec.sup_margin) << ")\n";
        if (d.condition_warning) {
            std::cout << "warning: system condition number " << fmt6(d.condition)
                      << " is large; trust margins accordingly\n";
        }
    }
    if (!opt.csv.empty()) {
        CsvTable table;
        table.header = {"station", "f", "f_empty", "cycle", "flux_margin",
                        "tau_bar", "rho_hat"};
        for (int j = 0; j < m.n; ++j) {
            table.rows.push_back({std::to_string(j + 1), fmt17(d.f(j)),
                                  fmt17(d.f_tilde(j)), fmt17(d.cycle(j)),
                                  fmt17(nec.flux[static_cast<std::size_t>(j)].margin),
                                  fmt17(d.tau_bar), fmt17(d.rho_hat)});
        }
        write_csv(opt.csv, man, table);
    }
    return 0;
}

// -------------------------------------------------------------- classify ----

int cmd_classify(const CommonOpts& opt, std::int64_t max_faces) {
    const sdpoll::PollingModel m = sdpoll::load_model(opt.file);
    const sdpoll::Classification c = sdpoll::classify(m, max_faces);

    Manifest man{"classify", opt.file, opt.seed, {}};
    man.options.emplace_back("max-faces", std::to_string(max_faces));
    if (!opt.quiet) {
        man.print(std::cout);
    }
    std::cout << "verdict: " << sdpoll::to_string(c.verdict)
              << (c.conjecture_based ? " [conjecture]" : "") << "\n";
    std::cout << "evidence: " << c.evidence << "\n";
    if (c.base) {
        std::cout << "rho_hat = " << fmt6(c.base->rho_hat)
                  << "  tau_bar = " << fmt6(c.base->tau_bar) << "\n";
    }
    if (!c.faces.empty()) {
        std::cout << pad("face", 12) << pad("rho_hat", 13) << pad("tau_bar", 13)
                  << pad("worst margin", 14) << pad("drift sign", 12) << "\n";
        for (const auto& face : c.faces) {
            const char* sign = face.ergodic > 0   ? "inward"
                               : face.ergodic < 0 ? "outward"
                                                  : "ambiguous";
            std::cout << pad(face_name(face.face), 12) << pad(fmt6(face.rho_hat_face), 13)
                      << pad(fmt6(face.tau_bar_face), 13)
                      << pad(fmt6(face.worst_margin), 14) << pad(sign, 12) << "\n";
        }
    }
    if (c.certificate) {
        std::cout << "drift certificate: epsilon = " << fmt6(c.certificate->epsilon)
                  << ", weights (";
        for (int i = 0; i < c.certificate->u.size(); ++i) {
            std::cout << (i ? ", " : "") << fmt6(c.certificate->u(i));
        }
        std::cout << "), worst face drift = ";
        double worst = -std::numeric_limits<double>::infinity();
        for (double v : c.certificate->face_drift) {
            worst = std::max(worst, v);
        }
        std::cout << fmt6(worst) << "\n";
    }
    if (!opt.csv.empty()) {
        CsvTable table;
        table.header = {"face", "rho_hat_face", "tau_bar_face", "worst_margin",
                        "drift_sign", "verdict", "conjecture"};
        for (const auto& face : c.faces) {
            table.rows.push_back({face_name(face.face), fmt17(face.rho_hat_face),
                                  fmt17(face.tau_bar_face), fmt17(face.worst_margin),
                                  std::to_string(face.ergodic),
                                  sdpoll::to_string(c.verdict),
                                  c.conjecture_based ? "1" : "0"});
        }
        if (c.faces.empty()) {
            table.rows.push_back({"{}", "", "", "", "", sdpoll::to_string(c.verdict),
                                  c.conjecture_based ? "1" : "0"});
        }
        write_csv(opt.csv, man, table);
    }
    return 0;
}

// ------------------------------------------------------------- symmetric ----

void print_assumptions(const sdpoll::AssumptionReport& rep) {
    auto line = [](const char* name, const char* kind,
                   const sdpoll::AssumptionCheck& c) {
        std::cout << name << ": " << (c.pass ? "pass" : "FAIL") << " (" << kind
                  << ' ' << fmt6(c.defect) << ") " << c.detail << "\n";
    };
    line("rotational symmetry", "defect", rep.a1);
    line("empty-routing spectrum", "margin", rep.a2);
    line("routing commutation", "defect", rep.a3);
}

int cmd_symmetric(const CommonOpts& opt) {
    const sdpoll::PollingModel m = sdpoll::load_model(opt.file);
    const sdpoll::AssumptionReport rep = sdpoll::check_assumptions(m);

    Manifest man{"symmetric", opt.file, opt.seed, {}};
    if (!opt.quiet) {
        man.print(std::cout);
    }
    print_assumptions(rep);
    if (!rep.all()) {
        throw sdpoll::ValidationError("symmetry assumptions fail; see report above");
    }
    const sdpoll::SymmetricProfile prof = sdpoll::symmetric_profile(m);
    const double e = sdpoll::empty_probability(prof);
    const double queue_polled = sdpoll::mean_queue_at_polling(prof);
    const double queue_any = sdpoll::mean_queue_arbitrary(prof);

    std::cout << "stations = " << prof.n << "  F_i = " << fmt6(1.0 / prof.n)
              << " each\n";
    std::cout << "empty probability P(X=0 | polled) = " << fmt6(e) << "\n";
    std::cout << "mean queue at polled station = " << fmt6(queue_polled) << "\n";
    std::cout << "mean queue at fixed station  = " << fmt6(queue_any) << "\n";
    std::cout << "eigen sum (serve routing)  = " << fmt6(sdpoll::eigen_sum(prof.mu))
              << "\n";
    std::cout << "eigen sum (empty routing)  = "
              << fmt6(sdpoll::eigen_sum(prof.mu_tilde)) << "\n";
    if (!opt.quiet && prof.alpha_tilde == 0.0) {
        std::cout << "note: no arrivals accrue over empty-station travel; the "
                     "system is trivially empty\n";
    }
    if (!opt.csv.empty()) {
        CsvTable table;
        table.header = {"k", "mu_re", "mu_im", "mu_tilde_re", "mu_tilde_im",
                        "empty_prob", "queue_polled", "queue_fixed"};
        for (int k = 0; k < prof.n; ++k) {
            table.rows.push_back({std::to_string(k + 1), fmt17(prof.mu(k).real()),
                                  fmt17(prof.mu(k).imag()),
                                  fmt17(prof.mu_tilde(k).real()),
                                  fmt17(prof.mu_tilde(k).imag()), fmt17(e),
                                  fmt17(queue_polled), fmt17(queue_any)});
        }
        write_csv(opt.csv, man, table);
    }
    return 0;
}

// ------------------------------------------------------------------ wait ----

sdpoll::CompoundPoissonSpec spec_from_model(const sdpoll::PollingModel& m,
                                            const sdpoll::SymmetricProfile& prof) {
    if (!m.tau2 || !m.tau_tilde2) {
        throw sdpoll::ValidationError(
            "waiting-time analysis needs tau2 and tau_tilde2");
    }
    sdpoll::CompoundPoissonSpec spec;
    spec.b = m.batch_mean();
    spec.b2 = m.batch_second_moment();
    spec.lambda_hat = m.batch ? m.batch->lambda_hat : 0.0;
    if (spec.lambda_hat <= 0.0) {
        spec.lambda_hat = m.lambda(0) / spec.b;
    }
    spec.tau = m.tau(0);
    spec.tau2 = (*m.tau2)(0);
    spec.tau_tilde = m.tau_tilde(0);
    spec.tau_tilde2 = (*m.tau_tilde2)(0);
    (void)prof;
    return spec;
}

int cmd_wait(const CommonOpts& opt) {
    const sdpoll::PollingModel m = sdpoll::load_model(opt.file);
    const sdpoll::AssumptionReport rep = sdpoll::check_assumptions(m);
    Manifest man{"wait", opt.file, opt.seed, {}};
    if (!opt.quiet) {
        man.print(std::cout);
    }
    if (!rep.all()) {
        print_assumptions(rep);
        throw sdpoll::ValidationError(
            "waiting-time formula needs the symmetry assumptions");
    }
    const sdpoll::SymmetricProfile prof = sdpoll::symmetric_profile(m);
    const sdpoll::CompoundPoissonSpec spec = spec_from_model(m, prof);
    const double wait = sdpoll::mean_wait(spec, prof.mu, prof.mu_tilde);
    const double e = sdpoll::empty_probability(prof);
    const double queue_polled = sdpoll::mean_queue_at_polling(prof);
    const double queue_any = sdpoll::mean_queue_arbitrary(prof);

    std::cout << "mean wait E[W] = " << fmt6(wait) << "\n";
    std::cout << "empty probability = " << fmt6(e) << "\n";
    std::cout << "mean queue at polled station = " << fmt6(queue_polled) << "\n";
    std::cout << "mean queue at fixed station  = " << fmt6(queue_any) << "\n";
    if (!opt.csv.empty()) {
        CsvTable table;
        table.header = {"wait", "empty_prob", "queue_polled", "queue_fixed"};
        table.rows.push_back(
            {fmt17(wait), fmt17(e), fmt17(queue_polled), fmt17(queue_any)});
        write_csv(opt.csv, man, table);
    }
    return 0;
}

// -------------------------------------------------------------- simulate ----

struct AnalyticColumns {
    std::optional<sdpoll::ServerDistribution> base;
    std::optional<double> wait;
    std::optional<double> queue_polled;
    std::optional<double> empty_prob;
};

AnalyticColumns analytic_columns(const sdpoll::PollingModel& m) {
    AnalyticColumns out;
    try {
        out.base = sdpoll::solve_server_distribution(m);
    } catch (const sdpoll::SolveError&) {
    }
    try {
        const sdpoll::AssumptionReport rep = sdpoll::check_assumptions(m);
        if (rep.all() && m.tau2 && m.tau_tilde2) {
            const sdpoll::SymmetricProfile prof = sdpoll::symmetric_profile(m);
            out.empty_prob = sdpoll::empty_probability(prof);
            out.queue_polled = sdpoll::mean_queue_at_polling(prof);
            sdpoll::CompoundPoissonSpec spec = spec_from_model(m, prof);
            out.wait = sdpoll::mean_wait(spec, prof.mu, prof.mu_tilde);
        }
    } catch (const std::runtime_error&) {
    }
    return out;
}

int cmd_simulate(const CommonOpts& opt, long long events, int reps, double warmup) {
    const sdpoll::PollingModel m = sdpoll::load_model(opt.file);
    sdpoll::SimConfig cfg;
    cfg.horizon = events;
    cfg.replications = reps;
    cfg.seed = opt.seed;
    cfg.warmup_fraction = warmup;
    const sdpoll::SimulationEstimate est = sdpoll::simulate(m, cfg);
    const AnalyticColumns ana = analytic_columns(m);

    Manifest man{"simulate", opt.file, opt.seed, {}};
    man.options.emplace_back("events", std::to_string(events));
    man.options.emplace_back("reps", std::to_string(reps));
    man.options.emplace_back("warmup", fmt6(warmup));
    if (!opt.quiet) {
        man.print(std::cout);
    }
    auto row = [&](const std::string& label, int j, double v, double se,
                   std::optional<double> target) {
        std::cout << pad(label, 22) << pad(j >= 0 ? std::to_string(j + 1) : "-", 4)
                  << pad(fmt6(v), 13) << pad(fmt6(se), 13)
                  << pad(target ? fmt6(*target) : std::string("-"), 13) << "\n";
    };
    std::cout << pad("quantity", 22) << pad("i", 4) << pad("estimate", 13)
              << pad("std err", 13) << pad("analytic", 13) << "\n";
    for (int j = 0; j < m.n; ++j) {
        row("P(S=i)", j, est.f(j), est.f_se(j),
            ana.base ? std::optional<double>(ana.base->f(j)) : std::nullopt);
    }
    for (int j = 0; j < m.n; ++j) {
        row("P(S=i, empty)", j, est.f_tilde(j), est.f_tilde_se(j),
            ana.base ? std::optional<double>(ana.base->f_tilde(j)) : std::nullopt);
    }
    for (int j = 0; j < m.n; ++j) {
        row("E[X_i | S=i]", j, est.queue_at_own_poll(j), est.queue_at_own_poll_se(j),
            ana.queue_polled);
    }
    for (int j = 0; j < m.n; ++j) {
        row("P(empty | S=i)", j, est.empty_given_polled(j),
            est.empty_given_polled_se(j), ana.empty_prob);
    }
    for (int j = 0; j < m.n; ++j) {
        row("E[T_ii]", j, est.cycle(j), est.cycle_se(j),
            ana.base ? std::optional<double>(ana.base->cycle(j)) : std::nullopt);
    }
    row("E[W]", -1, est.wait, est.wait_se, ana.wait);
    row("tau_bar", -1, est.tau_bar, est.tau_bar_se,
        ana.base ? std::optional<double>(ana.base->tau_bar) : std::nullopt);
    if (est.unstable_detected) {
        std::cout << "warning: queue growth between run halves looks superlinear; "
                     "estimates are not stationary\n";
    }
    if (!opt.csv.empty()) {
        CsvTable table;
        table.header = {"rep"};
        auto add_block = [&](const std::string& name) {
            for (int j = 0; j < m.n; ++j) {
                table.header.push_back(name + "_" + std::to_string(j + 1));
            }
        };
        add_block("f");
        add_block("f_empty");
        add_block("queue_own");
        add_block("queue_fixed");
        add_block("empty_given_polled");
        add_block("cycle");
        table.header.insert(table.header.end(),
                            {"wait", "tau_bar", "polls", "served", "unstable"});
        for (std::size_t r = 0; r < est.reps.size(); ++r) {
            const sdpoll::ReplicationEstimate& rep = est.reps[r];
            std::vector<std::string> row_vals{std::to_string(r)};
            auto push_vec = [&](const Eigen::VectorXd& v) {
                for (int j = 0; j < m.n; ++j) {
                    row_vals.push_back(fmt17(v(j)));
                }
            };
            push_vec(rep.f);
            push_vec(rep.f_tilde);
            push_vec(rep.queue_at_own_poll);
            push_vec(rep.queue_at_poll);
            push_vec(rep.empty_given_polled);
            push_vec(rep.cycle);
            row_vals.push_back(fmt17(rep.wait));
            row_vals.push_back(fmt17(rep.tau_bar));
            row_vals.push_back(std::to_string(rep.polls));
            row_vals.push_back(std::to_string(rep.served));
            row_vals.push_back(rep.unstable ? "1" : "0");
            table.rows.push_back(std::move(row_vals));
        }
        write_csv(opt.csv, man, table);
    }
    return 0;
}

// --------------------------------------------------------------- compare ----

Eigen::VectorXd named_strategy(const std::string& name, int n) {
    Eigen::VectorXd dist = Eigen::VectorXd::Zero(n);
    if (name == "cyclic") {
        dist(0) = 1.0;
    } else if (name == "uniform") {
        dist.setConstant(1.0 / n);
    } else if (name == "reverse") {
        dist(n - 2 >= 0 ? n - 2 : 0) = 1.0;
    } else {
        throw sdpoll::ValidationError("unknown strategy '" + name +
                                      "' (choose from cyclic, uniform, reverse)");
    }
    return dist;
}

int cmd_compare(const CommonOpts& opt, const std::string& strategies) {
    const sdpoll::PollingModel m = sdpoll::load_model(opt.file);
    const sdpoll::AssumptionReport rep = sdpoll::check_assumptions(m);
    Manifest man{"compare", opt.file, opt.seed, {}};
    man.options.emplace_back("strategies", strategies);
    if (!opt.quiet) {
        man.print(std::cout);
    }
    if (!rep.a1.pass) {
        print_assumptions(rep);
        throw sdpoll::ValidationError(
            "strategy comparison needs rotational symmetry");
    }
    const sdpoll::SymmetricProfile prof = sdpoll::symmetric_profile(m);
    const sdpoll::CompoundPoissonSpec spec = spec_from_model(m, prof);

    std::vector<sdpoll::RoutingCandidate> candidates;
    std::stringstream ss(strategies);
    std::string name;
    while (std::getline(ss, name, ',')) {
        if (!name.empty()) {
            candidates.push_back({name, named_strategy(name, m.n)});
        }
    }
    if (candidates.empty()) {
        throw sdpoll::ValidationError("no strategies requested");
    }
    const sdpoll::StrategyComparison cmp = sdpoll::strategy_compare(spec, candidates);

    std::cout << pad("rank", 6) << pad("strategy", 12) << pad("E[W]", 13) << "\n";
    for (std::size_t r = 0; r < cmp.ranked.size(); ++r) {
        std::cout << pad(std::to_string(r + 1), 6) << pad(cmp.ranked[r].name, 12)
                  << pad(fmt6(cmp.ranked[r].wait), 13) << "\n";
    }
    if (!opt.quiet && cmp.cyclic_present) {
        std::cout << "cyclic attains the minimum: " << (cmp.cyclic_minimal ? "yes" : "no")
                  << "\n";
    }
    if (!opt.csv.empty()) {
        CsvTable table;
        table.header = {"rank", "strategy", "wait"};
        for (std::size_t r = 0; r < cmp.ranked.size(); ++r) {
            table.rows.push_back({std::to_string(r + 1), cmp.ranked[r].name,
                                  fmt17(cmp.ranked[r].wait)});
        }
        write_csv(opt.csv, man, table);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"state-dependent 1-limited polling toolkit"};
    app.require_subcommand(1);

    CommonOpts solve_opt, classify_opt, symmetric_opt, wait_opt, simulate_opt,
        compare_opt;
    std::int64_t max_faces = std::int64_t{1} << 20;
    long long events = 100000;
    int reps = 10;
    double warmup = 0.1;
    std::string strategies = "cyclic,uniform";

    CLI::App* solve = app.add_subcommand("solve", "server-position distribution");
    add_common(solve, solve_opt);
    CLI::App* classify = app.add_subcommand("classify", "ergodicity classification");
    add_common(classify, classify_opt);
    classify->add_option("--max-faces", max_faces, "cap on saturated-set enumeration");
    CLI::App* symmetric = app.add_subcommand("symmetric", "symmetry report and queue moments");
    add_common(symmetric, symmetric_opt);
    CLI::App* wait = app.add_subcommand("wait", "mean stationary waiting time");
    add_common(wait, wait_opt);
    CLI::App* simulate = app.add_subcommand("simulate", "Monte-Carlo estimates");
    add_common(simulate, simulate_opt);
    simulate->add_option("--events", events, "polling events per replication");
    simulate->add_option("--reps", reps, "independent replications");
    simulate->add_option("--warmup", warmup, "fraction of events discarded");
    CLI::App* compare = app.add_subcommand("compare", "rank routing strategies by mean wait");
    add_common(compare, compare_opt);
    compare->add_option("--strategies", strategies,
                        "comma list from {cyclic, uniform, reverse}");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (solve->parsed()) {
            return cmd_solve(solve_opt);
        }
        if (classify->parsed()) {
            return cmd_classify(classify_opt, max_faces);
        }
        if (symmetric->parsed()) {
            return cmd_symmetric(symmetric_opt);
        }
        if (wait->parsed()) {
            return cmd_wait(wait_opt);
        }
        if (simulate->parsed()) {
            return cmd_simulate(simulate_opt, events, reps, warmup);
        }
        if (compare->parsed()) {
            return cmd_compare(compare_opt, strategies);
        }
    } catch (const sdpoll::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const sdpoll::SolveError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
