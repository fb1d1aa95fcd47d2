#include "pns/error.hpp"

namespace pns {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "invalid-argument";
    case ErrorKind::InvalidState: return "invalid-state";
    case ErrorKind::IncompatibleRhs: return "incompatible-rhs";
    case ErrorKind::SingularPoint: return "singular-point";
    case ErrorKind::OutOfDomain: return "out-of-domain";
    case ErrorKind::BlowupPoint: return "blowup-point";
    case ErrorKind::NoRealBlowup: return "no-real-blowup";
    case ErrorKind::InvalidExponent: return "invalid-exponent";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::DegenerateField: return "degenerate-field";
    case ErrorKind::InvalidRange: return "invalid-range";
    case ErrorKind::StepRejected: return "step-rejected";
    case ErrorKind::Divergence: return "divergence";
    case ErrorKind::Io: return "io";
    case ErrorKind::Validation: return "validation";
    }
    return "unknown";
}

}  // namespace pns
