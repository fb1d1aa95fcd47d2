#include "pns/flow.hpp"

#include <cmath>

#include "pns/digest.hpp"
#include "pns/error.hpp"
#include "pns/format.hpp"

namespace pns {

void FlowParams::validate() const {
    auto positive = [](double v, const char* key) {
        require(std::isfinite(v) && v > 0.0, ErrorKind::InvalidArgument, std::string(key) + " must be positive");
    };
    positive(rho, "flow.rho");
    positive(mu, "flow.mu");
    positive(delta, "flow.delta");
    positive(eta, "flow.eta");
}

std::string params_hash(const FlowParams& p) {
    const std::string text = "rho=" + format_double(p.rho) + ";mu=" + format_double(p.mu) +
                             ";delta=" + format_double(p.delta) + ";eta=" + format_double(p.eta) +
                             ";force=" + (p.force ? "1" : "0");
    return sha256_hex(text).substr(0, 16);
}

}  // namespace pns
