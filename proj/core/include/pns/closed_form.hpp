#pragma once

#include <array>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <tuple>
#include <vector>

#include "pns/field.hpp"
#include "pns/jet.hpp"

namespace pns {

struct Point3 {
    double x = 0.0, y = 0.0, z = 0.0;
};

struct Point4 {
    double x = 0.0, y = 0.0, z = 0.0, t = 0.0;
};

/// Bit set of the coordinates a closed form depends on.
enum Dependency : unsigned {
    kDependsNone = 0,
    kDependsX = 1u,
    kDependsY = 2u,
    kDependsZ = 4u,
    kDependsT = 8u,
    kDependsSpace = 7u,
    kDependsAll = 15u,
};

inline constexpr int kMaxDerivativeOrder = 4;

/// All partial derivatives up to some total order at one space-time point.
class DerivativeSet {
public:
    DerivativeSet(int order, std::vector<double> taylor, std::string field_name);

    int order() const noexcept { return order_; }
    /// Throws InvalidArgument above order(), SingularPoint for unbounded partials.
    double operator()(const MultiIndex& a) const;
    double value() const { return (*this)({}); }

private:
    int order_;
    std::vector<double> taylor_;
    std::string name_;
};

/// Analytic space-time field with mixed partials up to total order 4, evaluated by
/// truncated Taylor arithmetic. Immutable; copies share the evaluator.
class ClosedFormField {
public:
    template <int K>
    using Evaluator = std::function<Jet<K>(const Point4&)>;

    /// Builds a field from a generic callable `expr(x, y, z, t)` that works for
    /// every Jet<K> with K <= 4.
    /// The zero field.
    ClosedFormField();

    template <class Expr>
    static ClosedFormField from_expression(std::string name, unsigned deps, Expr expr) {
        return ClosedFormField(std::move(name), deps, make_evaluators(expr, std::make_integer_sequence<int, 5>{}));
    }

    /// A function of time alone given by its derivatives f(t, m), m = 0..4.
    /// Non-finite derivatives are allowed and surface as SingularPoint on access.
    static ClosedFormField time_function(std::string name, std::function<double(double, int)> f);
    static ClosedFormField constant(double c);
    /// The coordinate function x, y, z (var 0..2) or t (var 3).
    static ClosedFormField coordinate(int var);

    const std::string& name() const noexcept { return impl_->name; }
    unsigned dependencies() const noexcept { return impl_->deps; }
    bool depends_on(unsigned mask) const noexcept { return (impl_->deps & mask) != 0; }

    double value(const Point4& p) const;
    /// Throws InvalidArgument for order > 4 and SingularPoint for unbounded partials.
    double derivative(const Point4& p, const MultiIndex& a) const;
    DerivativeSet derivatives(const Point4& p, int order) const;

    template <int K>
    Jet<K> jet(const Point4& p) const {
        return std::get<K>(impl_->evaluators)(p);
    }

    /// Evaluates inside another expression whose arguments are the coordinate jets.
    template <int K>
    Jet<K> operator()(const Jet<K>& x, const Jet<K>& y, const Jet<K>& z, const Jet<K>& t) const {
        return jet<K>(Point4{x.value(), y.value(), z.value(), t.value()});
    }

    ClosedFormField renamed(std::string name) const;

    friend ClosedFormField operator+(const ClosedFormField& a, const ClosedFormField& b);
    friend ClosedFormField operator-(const ClosedFormField& a, const ClosedFormField& b);
    friend ClosedFormField operator*(const ClosedFormField& a, const ClosedFormField& b);
    friend ClosedFormField operator*(double s, const ClosedFormField& a);

private:
    using EvaluatorSet = std::tuple<Evaluator<0>, Evaluator<1>, Evaluator<2>, Evaluator<3>, Evaluator<4>>;

    struct Impl {
        std::string name;
        unsigned deps;
        EvaluatorSet evaluators;
    };

    ClosedFormField(std::string name, unsigned deps, EvaluatorSet evaluators)
        : impl_(std::make_shared<const Impl>(Impl{std::move(name), deps, std::move(evaluators)})) {}

    template <class Expr, int... Ks>
    static EvaluatorSet make_evaluators(const Expr& expr, std::integer_sequence<int, Ks...>) {
        return EvaluatorSet{Evaluator<Ks>([expr](const Point4& p) {
            return expr(Jet<Ks>::variable(0, p.x), Jet<Ks>::variable(1, p.y), Jet<Ks>::variable(2, p.z),
                        Jet<Ks>::variable(3, p.t));
        })...};
    }

    std::shared_ptr<const Impl> impl_;
};

/// Samples a closed form (or one of its partials) on the lattice at time t.
ScalarField sample(const ClosedFormField& f, const SpectralGrid& grid, double t, const MultiIndex& a = {});

// ---------------------------------------------------------------------------
// F4 finite-time blowup family: (F4')^2 * F4^10 = c4, F4(t) = s (6 sqrt(c4) (C1 - t))^(1/6)
// on [0, C1], extended by zero on (C1, inf).

struct F4Params {
    double c4 = 1.0;
    double C1 = 1.0;
    int branch = +1;  ///< sign of the value branch, +1 or -1

    void validate() const;
};

/// m-th time derivative (m in 0..4) of the extended F4. t < 0 is OutOfDomain; m >= 1
/// exactly at t = C1 is SingularPoint.
double f4_value(const F4Params& params, double t, int m);
ClosedFormField f4_field(const F4Params& params);

// ---------------------------------------------------------------------------
// Logistic family A2 f' = f (A1 - 2 A f), f(t) = A1 / (exp(-A1 t / A2) C1 A1 + 2A).

struct LogisticParams {
    double A = 0.0;
    double A1 = 1.0;
    double A2 = 1.0;
    double C1 = 1.0;
    double epsilon = 0.0;

    /// Applies the initial-condition rule A1 = -2A/C1 - epsilon.
    static LogisticParams from_initial_condition(double A, double A2, double C1, double epsilon);
    void validate() const;
};

double logistic_denominator(const LogisticParams& params, double t);
/// Throws BlowupPoint at or within 1e-12 of a denominator root.
double logistic_value(const LogisticParams& params, double t);
/// ODE right-hand side f (A1 - 2 A f) / A2.
double logistic_rhs(const LogisticParams& params, double f);
/// Root of the denominator with A1 = -2A/C1 - epsilon; NoRealBlowup when the
/// logarithm argument -2A / (C1 A1) is not positive.
double logistic_blowup_time(const LogisticParams& params);

// ---------------------------------------------------------------------------
// Lattice velocity family for time-dependent vorticity.

struct LatticeParams {
    double n = 1.0;    ///< cell scale; walls at multiples of n*pi
    double eta = 1.0;  ///< scaling of the linear term
    ClosedFormField F_x = ClosedFormField::constant(1.0);
    ClosedFormField F_y = ClosedFormField::constant(1.0);

    void validate() const;
};

enum class LatticeComponent { x, y };

/// sin(a1 x) sin(a2 y) sinc(a3 z) F with a1 = n^2 - (z/pi)^2, a2 = n^2 - (x/pi)^2,
/// a3 = n^2 - (y/pi)^2; the third factor is the sine over its own argument.
ClosedFormField lattice_product(const LatticeParams& params, LatticeComponent component);
/// lattice_product + eta * {y | x} * (1 - t)^(1/6); defined for t <= 1.
ClosedFormField lattice_field(const LatticeParams& params, LatticeComponent component);
/// Pointwise value; t > 1 is OutOfDomain.
double lattice_velocity(const LatticeParams& params, LatticeComponent component, const Point3& p, double t);

// ---------------------------------------------------------------------------

/// u_z = F4(t) F5(x, y, z). InvalidArgument unless F4 is time-only and F5 space-only.
ClosedFormField separable_uz(const ClosedFormField& F4, const ClosedFormField& F5);

/// sin(x/s) sin(y/s) sin(z/s).
ClosedFormField sin_product(double scale = 1.0);

/// exp(-1 / (1 - |r - c|^2 / R^2)) inside the ball, 0 outside.
ClosedFormField bump_field(const Point3& center, double radius);

/// Exact decaying Taylor-Green solution with zero forcing.
struct TaylorGreen {
    double nu = 0.1;
    double rho = 1.0;
    std::array<ClosedFormField, 3> velocity;
    ClosedFormField pressure = ClosedFormField::constant(0.0);

    VectorField sample_velocity(const SpectralGrid& grid, double t) const;
    VectorField sample_velocity_rate(const SpectralGrid& grid, double t) const;
    ScalarField sample_pressure(const SpectralGrid& grid, double t) const;
    /// Kinetic energy (1/2) int |u|^2 on [0, 2 pi)^3.
    double energy(double t) const;
};

TaylorGreen taylor_green(double nu, double rho = 1.0);

}  // namespace pns
