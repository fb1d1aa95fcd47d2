#pragma once

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pns/bundle.hpp"
#include "pns/closed_form.hpp"
#include "pns/flow.hpp"
#include "pns/quadrature.hpp"

namespace pns {

/// Named residual norms for one verification run.
struct ResidualReport {
    std::string name;
    double l2 = 0.0;
    double linf = 0.0;
    int n_modes = 0;  ///< grid modes or quadrature nodes per axis
    double box_length = 0.0;
    std::string rule = "lattice";
    double t = 0.0;
    double rho = 0.0, mu = 0.0, delta = 0.0, eta = 0.0;
    bool forced = false;
    std::string params_hash;
    std::string timestamp;
    std::vector<std::string> notes;
};

/// CSV header and row: name, N, L, t, l2, linf, params-hash.
std::string residual_csv_header();
std::string residual_csv_row(const ResidualReport& r);

struct MomentumResidual {
    std::array<ResidualReport, 3> momentum;
    ResidualReport continuity;
};

/// rho (du_i/dt + u . grad u_i) - mu lap u_i + d_i P - rho F_i per component and div u.
MomentumResidual momentum_residual(const VectorField& u, const ScalarField& P, const FlowParams& params,
                                   const VectorField& dudt, double t = 0.0);

/// Time derivative of a velocity given as snapshot series (fourth-order differences).
VectorField snapshot_rate(const std::array<SnapshotSeries, 3>& u, double t);

/// Right-hand side of the z-pressure relation sampled on a grid at time t.
ScalarField pzz_rhs(const ClosedFormField& uz, const ClosedFormField& ux, const ClosedFormField& uy,
                    const SpectralGrid& grid, double delta, double t);
/// P_zz (spectral) minus pzz_rhs.
ResidualReport pzz_residual(const ClosedFormField& uz, const ClosedFormField& ux, const ClosedFormField& uy,
                            const ScalarField& P, const FlowParams& params, double t);

/// Pointwise tensor-term integrand |dt u_z| * |b|^2 * |grad u_z|, i.e. the norm of
/// dt u_z * b . (b (x) grad u_z) contracted on the first tensor slot.
double tensor_integrand(double dt_uz, const std::array<double, 3>& b, const std::array<double, 3>& grad_uz);

struct Gamma3 {
    std::array<double, 6> faces{};  ///< per-face flux with the full pressure
    double surface = 0.0;           ///< sum over faces
    double surface_xy = 0.0;        ///< gradient part as a volume integral with the x-y Poisson source
    double tensor = 0.0;            ///< volume integral of tensor_integrand
    double value = 0.0;             ///< surface - tensor
    double value_xy = 0.0;          ///< surface_xy - tensor
};

struct GammaTerms {
    std::vector<double> gamma1, gamma2;  ///< node values of the rule
    double gamma1_integral = 0.0, gamma2_integral = 0.0;
    double gamma1_l1 = 0.0, gamma2_l1 = 0.0;
    std::optional<Gamma3> gamma3;  ///< present when the bundle carries a pressure
    bool k_term_used = false;
    std::vector<std::string> notes;
};

GammaTerms gamma_terms(const FieldBundle& u, const FlowParams& params, double t, const BoxQuadrature& rule);

struct Omega5Report {
    double lhs_time = 0.0;         ///< int grad(u_z^2) . db/dt; NaN when a time partial is unbounded
    bool lhs_time_singular = false;
    double lhs_substituted = 0.0;  ///< -delta sum_i int d_i(u_z^2) (u . d_i u)
    double rhs = 0.0;              ///< delta int lap(u_z^2) |u|^2
    double boundary_printed = 0.0; ///< -delta sum over walls of d_n(u_z^2) |u|^2
    double rhs_by_parts = 0.0;     ///< exact integration by parts of lhs_substituted
    double difference = 0.0;       ///< lhs - rhs, lhs_time when finite else lhs_substituted
    double extension_viscous = 0.0;  ///< int mu/(delta rho) u_z^2 (ux_xxx + uy_yyy + uz_zzz)
    double extension_time = 0.0;     ///< int u_z^2 (uz_zt + uz_zzz) / delta; NaN when unbounded
    double boundary_max = 0.0, interior_max = 0.0;
    std::vector<std::string> notes;
};

/// Throws Precondition when max wall |u| > 1e-8 max |u|.
Omega5Report omega5_identities(const FieldBundle& u, const FlowParams& params, double t, const BoxQuadrature& rule);

struct CoupledOptions {
    bool divided = true;
    double uz2_floor = 1e-10;
    double mask_limit = 0.5;
};

struct NamedTerm {
    std::string name;
    std::vector<double> values;
};

struct CoupledReport {
    ResidualReport coupled;
    std::optional<ResidualReport> divided;
    std::vector<NamedTerm> terms;  ///< pointwise contributions to the coupled relation, summed in this order
    std::array<double, 6> faces{};
    double surface = 0.0;
    double tensor_integral = 0.0;
    std::size_t masked = 0;  ///< nodes excluded from the divided form
};

/// Residual of the coupled u_z relation and, optionally, its form divided by u_z^2.
/// DegenerateField when more than mask_limit of the nodes fall under the floor.
CoupledReport coupled_pde_residual(const FieldBundle& u, const FieldSource& P, const FlowParams& params, double t,
                                   const BoxQuadrature& rule, const CoupledOptions& options = {});

enum class VorticityMode { curl, angular };

/// curl: spectral curl. angular: 2 (r x u) / |r|^2 with r measured from `origin`;
/// SingularPoint when a node lies within 1e-8 of the origin.
VectorField vorticity(const VectorField& u, VorticityMode mode, const Point3& origin = {});
std::array<double, 3> vorticity_at(const std::array<ClosedFormField, 3>& u, const Point4& p, VorticityMode mode);

/// kappa = 2 (y u_z - z U_y - x u_z + z U_x) / |r|^2; SingularPoint at the origin.
double kappa(const ClosedFormField& uz, const ClosedFormField& Ux, const ClosedFormField& Uy, const Point4& p);
ClosedFormField kappa_field(const ClosedFormField& uz, const ClosedFormField& Ux, const ClosedFormField& Uy);

struct KappaRateReport {
    std::vector<double> lhs, rhs, gaps;
    double max_gap = 0.0;
    double scale = 0.0;  ///< max |lhs|, |rhs|
    bool satisfied = false;
};

/// uy_zt - ux_zt against kappa_t - uz_yt + uz_xt at every point.
KappaRateReport kappa_rate_check(const ClosedFormField& ux, const ClosedFormField& uy, const ClosedFormField& uz,
                      const ClosedFormField& kappa, const std::vector<Point4>& points, double tol = 1e-6);

/// Which velocity the nested integral reconstructs; the other one is the partner.
enum class Reconstruct { ux, uy };

/// The square bracket of the nested-integral velocity formula.
double nested_bracket(const ClosedFormField& uz, const ClosedFormField& partner, Reconstruct target, const Point4& p);
/// bracket / (dt u_z)^2; SingularPoint when |dt u_z| < 1e-8.
double nested_integrand(const ClosedFormField& uz, const ClosedFormField& partner, Reconstruct target,
                         const Point4& p);

struct ReconstructResult {
    double value = 0.0;
    double error = 0.0;
};

/// F2(x, y, z1) + int_{t0}^{t1} -dt u_z / (2 d_dir u_z u_z) * int_{z0}^{z1} integrand dz dt,
/// both integrals adaptive. The F1 term is zero.
ReconstructResult reconstruct_velocity(const ClosedFormField& uz, const ClosedFormField& partner, Reconstruct target,
                                       double x, double y, double z0, double z1, double t0, double t1, double tol,
                                       const ClosedFormField& F2 = ClosedFormField::constant(0.0));

}  // namespace pns
