#include "sdpoll/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sdpoll/errors.hpp"

namespace sdpoll {

namespace {

using nlohmann::json;

Eigen::VectorXd read_vector(const json& j, const std::string& key, int n) {
    if (!j.contains(key)) {
        throw ValidationError("missing key '" + key + "'");
    }
    const json& v = j.at(key);
    if (!v.is_array() || static_cast<int>(v.size()) != n) {
        throw ValidationError("'" + key + "' must be an array of length " +
                              std::to_string(n));
    }
    Eigen::VectorXd out(n);
    for (int i = 0; i < n; ++i) {
        if (!v[static_cast<std::size_t>(i)].is_number()) {
            throw ValidationError("'" + key + "' entries must be numbers");
        }
        out(i) = v[static_cast<std::size_t>(i)].get<double>();
    }
    return out;
}

Eigen::MatrixXd read_matrix(const json& j, const std::string& key, int n) {
    if (!j.contains(key)) {
        throw ValidationError("missing key '" + key + "'");
    }
    const json& rows = j.at(key);
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
        throw ValidationError("'" + key + "' must be an array of " +
                              std::to_string(n) + " rows");
    }
    Eigen::MatrixXd out(n, n);
    for (int i = 0; i < n; ++i) {
        const json& row = rows[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<int>(row.size()) != n) {
            throw ValidationError("'" + key + "' row " + std::to_string(i + 1) +
                                  " must have " + std::to_string(n) + " entries");
        }
        for (int k = 0; k < n; ++k) {
            if (!row[static_cast<std::size_t>(k)].is_number()) {
                throw ValidationError("'" + key + "' entries must be numbers");
            }
            out(i, k) = row[static_cast<std::size_t>(k)].get<double>();
        }
    }
    return out;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (int i = 0; i < v.size(); ++i) {
        out.push_back(v(i));
    }
    return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json out = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int k = 0; k < m.cols(); ++k) {
            row.push_back(m(i, k));
        }
        out.push_back(row);
    }
    return out;
}

}  // namespace

PollingModel parse_model(const std::string& text) {
    json j;
    try {
        j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("model file is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        throw ValidationError("model file must contain a JSON object");
    }
    static const char* const known[] = {"n",   "p",    "p_tilde",    "lambda",
                                        "tau", "tau2", "tau_tilde",  "tau_tilde2",
                                        "batch"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : known) {
            ok = ok || key == k;
        }
        if (!ok) {
            throw ValidationError("unknown key '" + key + "' in model file");
        }
    }
    if (!j.contains("n") || !j.at("n").is_number_integer()) {
        throw ValidationError("missing integer key 'n'");
    }
    const int n = j.at("n").get<int>();
    if (n < 2) {
        throw ValidationError("'n' must be at least 2");
    }

    PollingModel m;
    m.n = n;
    m.p = read_matrix(j, "p", n);
    m.p_tilde = read_matrix(j, "p_tilde", n);
    m.lambda = read_vector(j, "lambda", n);
    m.tau = read_vector(j, "tau", n);
    m.tau_tilde = read_vector(j, "tau_tilde", n);
    if (j.contains("tau2")) {
        m.tau2 = read_vector(j, "tau2", n);
    }
    if (j.contains("tau_tilde2")) {
        m.tau_tilde2 = read_vector(j, "tau_tilde2", n);
    }
    if (j.contains("batch")) {
        const json& bj = j.at("batch");
        if (!bj.is_object()) {
            throw ValidationError("'batch' must be an object");
        }
        BatchLaw batch;
        for (const auto& [key, value] : bj.items()) {
            if (!value.is_number()) {
                throw ValidationError("'batch." + key + "' must be a number");
            }
            if (key == "b") {
                batch.b = value.get<double>();
            } else if (key == "b2") {
                batch.b2 = value.get<double>();
            } else if (key == "lambda_hat") {
                batch.lambda_hat = value.get<double>();
            } else {
                throw ValidationError("unknown key 'batch." + key + "' in model file");
            }
        }
        m.batch = batch;
    }

    require_valid(m);
    return m;
}

PollingModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open model file '" + path + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

std::string model_to_json(const PollingModel& m) {
    json j;
    j["n"] = m.n;
    j["p"] = matrix_to_json(m.p);
    j["p_tilde"] = matrix_to_json(m.p_tilde);
    j["lambda"] = vector_to_json(m.lambda);
    j["tau"] = vector_to_json(m.tau);
    j["tau_tilde"] = vector_to_json(m.tau_tilde);
    if (m.tau2) {
        j["tau2"] = vector_to_json(*m.tau2);
    }
    if (m.tau_tilde2) {
        j["tau_tilde2"] = vector_to_json(*m.tau_tilde2);
    }
    if (m.batch) {
        j["batch"] = {{"b", m.batch->b},
                      {"b2", m.batch->b2},
                      {"lambda_hat", m.batch->lambda_hat}};
    }
    return j.dump(2) + "\n";
}

}  // namespace sdpoll
