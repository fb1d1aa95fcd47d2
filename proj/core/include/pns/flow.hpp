#pragma once

#include <optional>
#include <string>

#include "pns/field.hpp"

namespace pns {

/// Density, viscosity, the delta rescaling and the eta scaling of u_z, plus an
/// optional body force (absent means zero).
struct FlowParams {
    double rho = 1.0;
    double mu = 0.1;
    double delta = 1.0;
    double eta = 1.0;
    std::optional<VectorField> force;

    double nu() const noexcept { return mu / rho; }
    void validate() const;
};

/// Short hex digest of the scalar parameters and force presence.
std::string params_hash(const FlowParams& params);

}  // namespace pns
