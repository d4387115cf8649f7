#include "sdpoll/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sdpoll {

namespace {

std::string essential_classes_message(const std::vector<std::vector<int>>& classes,
                                      const std::vector<double>& residuals) {
    std::string msg = "empty-station routing matrix has " +
                      std::to_string(classes.size()) +
                      " essential classes; the server position system is rank "
                      "deficient";
    for (double r : residuals) {
        if (std::abs(r) > 1e-12) {
            msg += "; the chain is never ergodic unless the net switch-in rate "
                   "of every closed class vanishes, and here it does not";
            break;
        }
    }
    return msg;
}

}  // namespace

MultipleEssentialClasses::MultipleEssentialClasses(std::vector<std::vector<int>> classes_,
                                                   std::vector<double> residuals_)
    : SolveError(essential_classes_message(classes_, residuals_)),
      classes(std::move(classes_)),
      residuals(std::move(residuals_)) {}

namespace {

void check_stochastic(const Eigen::MatrixXd& mat, const std::string& name, int n,
                      std::vector<Violation>& out) {
    if (mat.rows() != n || mat.cols() != n) {
        out.push_back({name, name + " must be " + std::to_string(n) + "x" + std::to_string(n),
                       static_cast<double>(mat.rows())});
        return;
    }
    for (int i = 0; i < n; ++i) {
        double row = 0.0;
        for (int j = 0; j < n; ++j) {
            double v = mat(i, j);
            if (v < 0.0 || v > 1.0) {
                out.push_back({name + "[" + std::to_string(i + 1) + "][" + std::to_string(j + 1) + "]",
                               "entry outside [0,1]", v});
            }
            row += v;
        }
        double defect = std::abs(row - 1.0);
        if (defect > tol::row_sum) {
            out.push_back({name + " row " + std::to_string(i + 1),
                           "row must sum to 1", defect});
        }
    }
}

void check_positive(const Eigen::VectorXd& v, const std::string& name, int n,
                    std::vector<Violation>& out) {
    if (v.size() != n) {
        out.push_back({name, name + " must have length " + std::to_string(n),
                       static_cast<double>(v.size())});
        return;
    }
    for (int i = 0; i < n; ++i) {
        if (!(v(i) > 0.0)) {
            out.push_back({name + "[" + std::to_string(i + 1) + "]",
                           name + " must be positive", v(i)});
        }
    }
}

void check_second_moment(const Eigen::VectorXd& mean, const std::optional<Eigen::VectorXd>& m2,
                         const std::string& name, int n, std::vector<Violation>& out) {
    if (!m2) return;
    if (m2->size() != n) {
        out.push_back({name, name + " must have length " + std::to_string(n),
                       static_cast<double>(m2->size())});
        return;
    }
    for (int i = 0; i < n && i < mean.size(); ++i) {
        double lo = mean(i) * mean(i);
        if ((*m2)(i) < lo * (1.0 - 1e-12)) {
            out.push_back({name + "[" + std::to_string(i + 1) + "]",
                           "second moment below squared mean (negative variance)",
                           lo - (*m2)(i)});
        }
    }
}

}  // namespace

std::vector<Violation> validate_model(const PollingModel& m) {
    std::vector<Violation> out;
    if (m.n < 2) {
        out.push_back({"n", "station count must be at least 2", static_cast<double>(m.n)});
        return out;
    }
    check_stochastic(m.p, "p", m.n, out);
    check_stochastic(m.p_tilde, "p_tilde", m.n, out);
    check_positive(m.lambda, "lambda", m.n, out);
    check_positive(m.tau, "tau", m.n, out);
    check_positive(m.tau_tilde, "tau_tilde", m.n, out);
    check_second_moment(m.tau, m.tau2, "tau2", m.n, out);
    check_second_moment(m.tau_tilde, m.tau_tilde2, "tau_tilde2", m.n, out);
    if (m.batch) {
        if (m.batch->b < 1.0) {
            out.push_back({"batch.b", "batch mean must be at least 1", m.batch->b});
        }
        if (m.batch->b2 < m.batch->b) {
            out.push_back({"batch.b2", "batch second moment must be at least the mean",
                           m.batch->b - m.batch->b2});
        }
        if (m.batch->lambda_hat > 0.0 && m.lambda.size() == m.n) {
            for (int q = 0; q < m.n; ++q) {
                double expect = m.batch->lambda_hat * m.batch->b;
                double defect = std::abs(m.lambda(q) - expect);
                if (defect > 1e-9 * (1.0 + expect)) {
                    out.push_back({"lambda[" + std::to_string(q + 1) + "]",
                                   "customer rate must equal lambda_hat * b", defect});
                }
            }
        }
    }
    return out;
}

void require_valid(const PollingModel& m) {
    auto report = validate_model(m);
    if (report.empty()) return;
    std::ostringstream oss;
    oss << "invalid model:";
    for (const auto& v : report) {
        oss << " [" << v.field << ": " << v.message << "]";
    }
    throw ValidationError(oss.str());
}

std::vector<std::vector<int>> essential_classes(const Eigen::MatrixXd& p_tilde) {
    const int n = static_cast<int>(p_tilde.rows());
    auto has_edge = [&](int i, int j) { return p_tilde(i, j) > tol::closed_class_leak; };

    // reach[i] = set of states reachable from i, by simple closure
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) {
        std::vector<int> stack{i};
        reach[i][i] = true;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            for (int vtx = 0; vtx < n; ++vtx) {
                if (has_edge(u, vtx) && !reach[i][vtx]) {
                    reach[i][vtx] = true;
                    stack.push_back(vtx);
                }
            }
        }
    }

    // a state is essential when every state it reaches can reach it back
    std::vector<std::vector<int>> classes;
    std::vector<bool> assigned(n, false);
    for (int i = 0; i < n; ++i) {
        if (assigned[i]) continue;
        bool essential = true;
        for (int j = 0; j < n && essential; ++j) {
            if (reach[i][j] && !reach[j][i]) essential = false;
        }
        if (!essential) continue;
        std::vector<int> cls;
        for (int j = 0; j < n; ++j) {
            if (reach[i][j] && reach[j][i]) {
                cls.push_back(j + 1);
                assigned[j] = true;
            }
        }
        std::sort(cls.begin(), cls.end());
        classes.push_back(std::move(cls));
    }
    std::sort(classes.begin(), classes.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return classes;
}

std::vector<double> compatibility_check(const PollingModel& m,
                                        const std::vector<std::vector<int>>& classes) {
    std::vector<double> residuals;
    residuals.reserve(classes.size());
    for (const auto& cls : classes) {
        double r = 0.0;
        for (int j1 : cls) {
            int j = j1 - 1;
            for (int i = 0; i < m.n; ++i) {
                r += m.lambda(i) * (m.p(i, j) - m.p_tilde(i, j));
            }
        }
        residuals.push_back(r);
    }
    return residuals;
}

TrafficSummary traffic_summary(const PollingModel& m) {
    TrafficSummary s;
    for (int i = 0; i < m.n; ++i) {
        s.rho_hat += m.lambda(i) * (m.tau(i) - m.tau_tilde(i));
        s.load_sum += m.lambda(i) * m.tau(i);
    }
    s.degenerate = std::abs(s.rho_hat - 1.0) <= tol::degenerate_traffic;
    return s;
}

ArrivalMatrices arrival_matrices(const PollingModel& m) {
    ArrivalMatrices am;
    am.a_mat = m.tau * m.lambda.transpose();
    am.a_tilde_mat = m.tau_tilde * m.lambda.transpose();
    return am;
}

}  // namespace sdpoll
