#include "rabi/model.hpp"

#include <cmath>

#include "rabi/errors.hpp"

namespace rabi {

std::string_view to_string(Parity p) noexcept {
    return p == Parity::Plus ? "+" : "-";
}

std::string_view to_string(Branch b) noexcept {
    return b == Branch::Plus ? "+" : "-";
}

void validate(const ModelParams& params) {
    if (!std::isfinite(params.omega) || !std::isfinite(params.g) ||
        !std::isfinite(params.delta) || !std::isfinite(params.epsilon)) {
        throw InvalidArgument("model parameters must be finite");
    }
    if (params.omega <= 0.0) {
        throw InvalidArgument("omega must be positive");
    }
    if (params.g < 0.0) {
        throw InvalidArgument("coupling g must be non-negative");
    }
}

NormalizedParams normalize(const ModelParams& params) {
    validate(params);
    NormalizedParams out;
    out.g = params.g / params.omega;
    out.delta = params.delta / params.omega;
    out.epsilon = params.epsilon / params.omega;
    out.omega = params.omega;
    return out;
}

ModelParams denormalize(const NormalizedParams& params) noexcept {
    return ModelParams{params.omega, params.g * params.omega, params.delta * params.omega,
                       params.epsilon * params.omega};
}

ModelParams scaled(const ModelParams& params, double c) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw InvalidArgument("scale factor must be positive and finite");
    }
    return ModelParams{c * params.omega, c * params.g, c * params.delta, c * params.epsilon};
}

double baseline_energy(int n, const ModelParams& params) {
    validate(params);
    if (n < 0) {
        throw InvalidArgument("baseline index must be non-negative");
    }
    return n * params.omega - params.g * params.g / params.omega;
}

}  // namespace rabi
