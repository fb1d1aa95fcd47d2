#pragma once

#include <string>

#include "pns/closed_form.hpp"
#include "pns/field.hpp"

namespace pns {

struct InequalityReport {
    std::string name;
    double p = 2.0;
    int n = 3;
    double lhs = 0.0;
    double rhs = 0.0;
    double constant = 0.0;
    bool satisfied = false;
    double margin = 0.0;
    std::string rule;
    std::string notes;
};

/// Closed forms are integrated over lines through the box center (Gauss-Legendre in
/// cos(theta), trapezoid in phi and along each line), which removes the 1/|x|
/// singularity; `nodes` sets the angular resolution and 4*nodes points per line.
struct HardyOptions {
    int nodes = 64;
    double box_length = 1.0;
    double t = 0.0;
    double radius_floor = 1e-8;
};

/// ||f/|x|||_p against p/(n-p) ||grad f||_p with |x| measured from the box center.
/// Throws InvalidExponent unless 1 <= p < n, Precondition when f does not vanish on
/// the box boundary.
InequalityReport hardy_check(const ClosedFormField& f, double p, int n, const HardyOptions& options = {});
InequalityReport hardy_check(const ScalarField& f, double p, int n, double radius_floor = 1e-8);

/// The chain 0 <= -int|grad f|^p <= -((p-1)/p)^p int |f|^p/|x|^p < 0, clause by clause.
struct SandwichReport {
    std::string name;
    double p = 2.0;
    double gradient_term = 0.0;  // -int |grad f|^p
    double hardy_term = 0.0;     // -((p-1)/p)^p int |f|^p / |x|^p
    double constant = 0.0;
    bool clause_nonnegative = false;  // 0 <= gradient_term
    bool clause_middle = false;       // gradient_term <= hardy_term
    bool clause_negative = false;     // hardy_term < 0
    bool chain_holds = false;
    std::string rule;
    std::string notes;
};

SandwichReport sandwich_report(const ScalarField& f, double p, double radius_floor = 1e-8);
SandwichReport sandwich_report(const ClosedFormField& f, double p, const HardyOptions& options = {});

}  // namespace pns
