#pragma once

#include <string>

#include "sdpoll/model.hpp"

namespace sdpoll {

// Parses a model from its JSON text. Expected keys: n, p, p_tilde, lambda,
// tau, tau_tilde; optional tau2, tau_tilde2 and batch {b, b2, lambda_hat}.
// Throws ValidationError on malformed input or on a model that fails
// validation.
[[nodiscard]] PollingModel parse_model(const std::string& text);

// Reads and parses a model file.
[[nodiscard]] PollingModel load_model(const std::string& path);

// Serializes a model back to JSON text (two-space indent).
[[nodiscard]] std::string model_to_json(const PollingModel& m);

}  // namespace sdpoll
