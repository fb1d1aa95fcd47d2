#include "pns/closed_form.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <type_traits>

#include "pns/error.hpp"

namespace pns {
namespace {

template <class J>
using order_of = std::integral_constant<int, std::decay_t<J>::kOrder>;

std::string describe(const MultiIndex& a) {
    std::ostringstream s;
    s << "(x" << a.x << ",y" << a.y << ",z" << a.z << ",t" << a.t << ")";
    return s.str();
}

template <int K>
std::vector<double> taylor_of(const Jet<K>& j) {
    std::vector<double> v(Jet<K>::kSize);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = j.coefficient(i);
    return v;
}

template <int K>
double extract(const std::vector<double>& taylor, const MultiIndex& a) {
    const auto& tab = jet_detail::tables<K>();
    const int s = tab.slot(a);
    return s < 0 ? 0.0 : taylor[s] * tab.factorial[s];
}

double extract_dispatch(int order, const std::vector<double>& taylor, const MultiIndex& a) {
    switch (order) {
    case 0: return extract<0>(taylor, a);
    case 1: return extract<1>(taylor, a);
    case 2: return extract<2>(taylor, a);
    case 3: return extract<3>(taylor, a);
    default: return extract<4>(taylor, a);
    }
}

void check_index(const MultiIndex& a) {
    require(a.x >= 0 && a.y >= 0 && a.z >= 0 && a.t >= 0, ErrorKind::InvalidArgument,
            "negative derivative index " + describe(a));
    require(a.order() <= kMaxDerivativeOrder, ErrorKind::InvalidArgument,
            "derivative order above 4 requested: " + describe(a));
}

double rising_power_coefficient(double p, int m) {
    double c = 1.0;
    for (int j = 0; j < m; ++j) c *= (p - j);
    return c;
}

}  // namespace

DerivativeSet::DerivativeSet(int order, std::vector<double> taylor, std::string field_name)
    : order_(order), taylor_(std::move(taylor)), name_(std::move(field_name)) {}

double DerivativeSet::operator()(const MultiIndex& a) const {
    check_index(a);
    require(a.order() <= order_, ErrorKind::InvalidArgument,
            "derivative " + describe(a) + " exceeds the evaluated order " + std::to_string(order_));
    const double v = extract_dispatch(order_, taylor_, a);
    if (!std::isfinite(v)) fail(ErrorKind::SingularPoint, "partial " + describe(a) + " of " + name_ + " is unbounded");
    return v;
}

ClosedFormField::ClosedFormField() : ClosedFormField(constant(0.0)) {}

ClosedFormField ClosedFormField::time_function(std::string name, std::function<double(double, int)> f) {
    auto make = [f]<int K>(std::integral_constant<int, K>) {
        return Evaluator<K>([f](const Point4& p) {
            std::array<double, K + 1> d{};
            for (int m = 0; m <= K; ++m) d[m] = f(p.t, m);
            return Jet<K>::univariate(3, d);
        });
    };
    return ClosedFormField(std::move(name), kDependsT,
                           EvaluatorSet{make(std::integral_constant<int, 0>{}), make(std::integral_constant<int, 1>{}),
                                        make(std::integral_constant<int, 2>{}), make(std::integral_constant<int, 3>{}),
                                        make(std::integral_constant<int, 4>{})});
}

ClosedFormField ClosedFormField::constant(double c) {
    std::ostringstream s;
    s << c;
    return from_expression(s.str(), kDependsNone, [c](const auto& x, const auto&, const auto&, const auto&) {
        using J = std::decay_t<decltype(x)>;
        return J(c);
    });
}

ClosedFormField ClosedFormField::coordinate(int var) {
    require(var >= 0 && var <= 3, ErrorKind::InvalidArgument, "coordinate index must be 0..3");
    static constexpr const char* names[] = {"x", "y", "z", "t"};
    return from_expression(names[var], 1u << var, [var](const auto& x, const auto& y, const auto& z, const auto& t) {
        return var == 0 ? x : var == 1 ? y : var == 2 ? z : t;
    });
}

double ClosedFormField::value(const Point4& p) const {
    const double v = jet<0>(p).value();
    if (!std::isfinite(v)) fail(ErrorKind::SingularPoint, name() + " is unbounded at the requested point");
    return v;
}

double ClosedFormField::derivative(const Point4& p, const MultiIndex& a) const {
    check_index(a);
    return derivatives(p, a.order())(a);
}

DerivativeSet ClosedFormField::derivatives(const Point4& p, int order) const {
    require(order >= 0 && order <= kMaxDerivativeOrder, ErrorKind::InvalidArgument,
            "derivative order must be in 0..4");
    switch (order) {
    case 0: return {0, taylor_of(jet<0>(p)), name()};
    case 1: return {1, taylor_of(jet<1>(p)), name()};
    case 2: return {2, taylor_of(jet<2>(p)), name()};
    case 3: return {3, taylor_of(jet<3>(p)), name()};
    default: return {4, taylor_of(jet<4>(p)), name()};
    }
}

ClosedFormField ClosedFormField::renamed(std::string name) const {
    return ClosedFormField(std::move(name), impl_->deps, impl_->evaluators);
}

ClosedFormField operator+(const ClosedFormField& a, const ClosedFormField& b) {
    return ClosedFormField::from_expression(
        "(" + a.name() + " + " + b.name() + ")", a.dependencies() | b.dependencies(),
        [a, b](const auto& x, const auto& y, const auto& z, const auto& t) { return a(x, y, z, t) + b(x, y, z, t); });
}

ClosedFormField operator-(const ClosedFormField& a, const ClosedFormField& b) {
    return ClosedFormField::from_expression(
        "(" + a.name() + " - " + b.name() + ")", a.dependencies() | b.dependencies(),
        [a, b](const auto& x, const auto& y, const auto& z, const auto& t) { return a(x, y, z, t) - b(x, y, z, t); });
}

ClosedFormField operator*(const ClosedFormField& a, const ClosedFormField& b) {
    return ClosedFormField::from_expression(
        a.name() + "*" + b.name(), a.dependencies() | b.dependencies(),
        [a, b](const auto& x, const auto& y, const auto& z, const auto& t) { return a(x, y, z, t) * b(x, y, z, t); });
}

ClosedFormField operator*(double s, const ClosedFormField& a) {
    std::ostringstream name;
    name << s << "*" << a.name();
    return ClosedFormField::from_expression(
        name.str(), s == 0.0 ? kDependsNone : a.dependencies(),
        [s, a](const auto& x, const auto& y, const auto& z, const auto& t) { return s * a(x, y, z, t); });
}

ScalarField sample(const ClosedFormField& f, const SpectralGrid& grid, double t, const MultiIndex& a) {
    check_index(a);
    const int n = grid.n_modes();
    std::vector<double> values(grid.size());
    for (int k = 0; k < n; ++k)
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const Point4 p{grid.coordinate(i), grid.coordinate(j), grid.coordinate(k), t};
                values[grid.index(i, j, k)] = a.order() == 0 ? f.value(p) : f.derivative(p, a);
            }
    return ScalarField::physical(grid, std::move(values));
}

// ---------------------------------------------------------------------------

void F4Params::validate() const {
    require(std::isfinite(c4) && c4 > 0.0, ErrorKind::InvalidArgument, "f4.c4 must be positive");
    require(std::isfinite(C1) && C1 > 0.0, ErrorKind::InvalidArgument, "f4.C1 must be positive");
    require(branch == 1 || branch == -1, ErrorKind::InvalidArgument, "f4.branch must be +1 or -1");
}

namespace {

// Derivative m of the extended F4; non-finite exactly at C1 for m >= 1.
double f4_unchecked(const F4Params& prm, double t, int m) {
    if (t > prm.C1) return 0.0;
    if (t == prm.C1) return m == 0 ? 0.0 : std::numeric_limits<double>::infinity();
    const double rate = 6.0 * std::sqrt(prm.c4);
    const double radicand = rate * (prm.C1 - t);
    const double chain = std::pow(-rate, m);
    return prm.branch * rising_power_coefficient(1.0 / 6.0, m) * chain * std::pow(radicand, 1.0 / 6.0 - m);
}

}  // namespace

double f4_value(const F4Params& params, double t, int m) {
    params.validate();
    require(m >= 0 && m <= 4, ErrorKind::InvalidArgument, "F4 derivative order must be in 0..4");
    require(t >= 0.0, ErrorKind::OutOfDomain, "F4 is defined for t >= 0");
    if (t == params.C1 && m >= 1)
        fail(ErrorKind::SingularPoint, "F4 derivative of order " + std::to_string(m) + " is unbounded at t = C1");
    return f4_unchecked(params, t, m);
}

ClosedFormField f4_field(const F4Params& params) {
    params.validate();
    return ClosedFormField::time_function("F4", [params](double t, int m) {
        require(t >= 0.0, ErrorKind::OutOfDomain, "F4 is defined for t >= 0");
        return f4_unchecked(params, t, m);
    });
}

// ---------------------------------------------------------------------------

LogisticParams LogisticParams::from_initial_condition(double A, double A2, double C1, double epsilon) {
    LogisticParams p;
    p.A = A;
    p.A2 = A2;
    p.C1 = C1;
    p.epsilon = epsilon;
    p.A1 = -2.0 * A / C1 - epsilon;
    p.validate();
    require(epsilon > 0.0, ErrorKind::InvalidArgument, "logistic.epsilon must be positive");
    return p;
}

void LogisticParams::validate() const {
    require(std::isfinite(A) && std::isfinite(A1), ErrorKind::InvalidArgument, "logistic A and A1 must be finite");
    require(std::isfinite(A2) && A2 != 0.0, ErrorKind::InvalidArgument, "logistic.A2 must be nonzero");
    require(std::isfinite(C1) && C1 > 0.0, ErrorKind::InvalidArgument, "logistic.C1 must be positive");
    require(std::isfinite(epsilon) && epsilon >= 0.0, ErrorKind::InvalidArgument,
            "logistic.epsilon must be non-negative");
}

double logistic_denominator(const LogisticParams& p, double t) {
    return std::exp(-p.A1 * t / p.A2) * p.C1 * p.A1 + 2.0 * p.A;
}

double logistic_value(const LogisticParams& p, double t) {
    p.validate();
    const double denom = logistic_denominator(p, t);
    bool at_root = denom == 0.0;
    if (p.A1 != 0.0) {
        const double arg = -2.0 * p.A / (p.C1 * p.A1);
        if (arg > 0.0) {
            const double root = -std::log(arg) * p.A2 / p.A1;
            at_root = at_root || std::abs(t - root) <= 1e-12;
        }
    }
    if (at_root) {
        std::ostringstream msg;
        msg << "logistic denominator vanishes at t = " << t;
        fail(ErrorKind::BlowupPoint, msg.str());
    }
    return p.A1 / denom;
}

double logistic_rhs(const LogisticParams& p, double f) { return f * (p.A1 - 2.0 * p.A * f) / p.A2; }

double logistic_blowup_time(const LogisticParams& p) {
    p.validate();
    const double a1 = -2.0 * p.A / p.C1 - p.epsilon;
    const double arg = a1 == 0.0 ? 0.0 : -2.0 * p.A / (a1 * p.C1);
    if (!(arg > 0.0)) {
        std::ostringstream msg;
        msg << "no real blowup time: logarithm argument " << arg << " is not positive";
        fail(ErrorKind::NoRealBlowup, msg.str());
    }
    return -std::log(arg) * p.A2 / a1;
}

// ---------------------------------------------------------------------------

void LatticeParams::validate() const {
    require(std::isfinite(n) && n > 0.0, ErrorKind::InvalidArgument, "lattice.n must be positive");
    require(std::isfinite(eta) && eta > 0.0, ErrorKind::InvalidArgument, "lattice.eta must be positive");
}

ClosedFormField lattice_product(const LatticeParams& params, LatticeComponent component) {
    params.validate();
    const double n2 = params.n * params.n;
    const ClosedFormField F = component == LatticeComponent::x ? params.F_x : params.F_y;
    const double inv_pi2 = 1.0 / (std::numbers::pi * std::numbers::pi);
    return ClosedFormField::from_expression(
        component == LatticeComponent::x ? "lattice_ux_product" : "lattice_uy_product",
        kDependsSpace | (F.dependencies() & kDependsT),
        [n2, inv_pi2, F](const auto& x, const auto& y, const auto& z, const auto& t) {
            const auto a1 = n2 - z * z * inv_pi2;
            const auto a2 = n2 - x * x * inv_pi2;
            const auto a3 = n2 - y * y * inv_pi2;
            return sin(a1 * x) * sin(a2 * y) * sinc(a3 * z) * F(x, y, z, t);
        });
}

ClosedFormField lattice_field(const LatticeParams& params, LatticeComponent component) {
    const ClosedFormField product = lattice_product(params, component);
    const double eta = params.eta;
    const bool is_x = component == LatticeComponent::x;
    return ClosedFormField::from_expression(
        is_x ? "lattice_ux" : "lattice_uy", kDependsAll,
        [product, eta, is_x](const auto& x, const auto& y, const auto& z, const auto& t) {
            using J = std::decay_t<decltype(t)>;
            constexpr int K = J::kOrder;
            const double tv = t.value();
            require(tv <= 1.0, ErrorKind::OutOfDomain, "lattice family requires t <= 1");
            std::array<double, K + 1> d{};
            for (int m = 0; m <= K; ++m) {
                if (tv == 1.0)
                    d[m] = m == 0 ? 0.0 : std::numeric_limits<double>::infinity();
                else
                    d[m] = rising_power_coefficient(1.0 / 6.0, m) * std::pow(-1.0, m) * std::pow(1.0 - tv, 1.0 / 6.0 - m);
            }
            const J decay = J::univariate(3, d);
            return product(x, y, z, t) + eta * (is_x ? y : x) * decay;
        });
}

double lattice_velocity(const LatticeParams& params, LatticeComponent component, const Point3& p, double t) {
    require(t <= 1.0, ErrorKind::OutOfDomain, "lattice family requires t <= 1");
    return lattice_field(params, component).value({p.x, p.y, p.z, t});
}

// ---------------------------------------------------------------------------

ClosedFormField separable_uz(const ClosedFormField& F4, const ClosedFormField& F5) {
    require((F4.dependencies() & kDependsSpace) == 0, ErrorKind::InvalidArgument,
            "separable_uz: F4 must depend on t only");
    require((F5.dependencies() & kDependsT) == 0, ErrorKind::InvalidArgument,
            "separable_uz: F5 must depend on x, y, z only");
    return (F4 * F5).renamed("uz=" + F4.name() + "*" + F5.name());
}

ClosedFormField sin_product(double scale) {
    require(scale > 0.0, ErrorKind::InvalidArgument, "sin_product scale must be positive");
    const double inv = 1.0 / scale;
    return ClosedFormField::from_expression(
        "sin_product", kDependsSpace,
        [inv](const auto& x, const auto& y, const auto& z, const auto&) { return sin(inv * x) * sin(inv * y) * sin(inv * z); });
}

ClosedFormField bump_field(const Point3& c, double radius) {
    require(radius > 0.0, ErrorKind::InvalidArgument, "bump radius must be positive");
    const double inv_r2 = 1.0 / (radius * radius);
    return ClosedFormField::from_expression(
        "bump", kDependsSpace, [c, inv_r2](const auto& x, const auto& y, const auto& z, const auto&) {
            using J = std::decay_t<decltype(x)>;
            const J dx = x - c.x, dy = y - c.y, dz = z - c.z;
            const J s2 = (dx * dx + dy * dy + dz * dz) * inv_r2;
            if (s2.value() >= 1.0) return J(0.0);
            return exp(-1.0 / (1.0 - s2));
        });
}

// ---------------------------------------------------------------------------

VectorField TaylorGreen::sample_velocity(const SpectralGrid& grid, double t) const {
    return {sample(velocity[0], grid, t), sample(velocity[1], grid, t), sample(velocity[2], grid, t)};
}

VectorField TaylorGreen::sample_velocity_rate(const SpectralGrid& grid, double t) const {
    const MultiIndex dt{0, 0, 0, 1};
    return {sample(velocity[0], grid, t, dt), sample(velocity[1], grid, t, dt), sample(velocity[2], grid, t, dt)};
}

ScalarField TaylorGreen::sample_pressure(const SpectralGrid& grid, double t) const { return sample(pressure, grid, t); }

double TaylorGreen::energy(double t) const {
    const double box = 2.0 * std::numbers::pi;
    return box * box * box * std::exp(-4.0 * nu * t) / 4.0;
}

TaylorGreen taylor_green(double nu, double rho) {
    require(std::isfinite(nu) && nu > 0.0, ErrorKind::InvalidArgument, "taylor_green: nu must be positive");
    require(std::isfinite(rho) && rho > 0.0, ErrorKind::InvalidArgument, "taylor_green: rho must be positive");
    TaylorGreen tg;
    tg.nu = nu;
    tg.rho = rho;
    tg.velocity[0] = ClosedFormField::from_expression(
        "tg_u", kDependsX | kDependsY | kDependsT,
        [nu](const auto& x, const auto& y, const auto&, const auto& t) { return sin(x) * cos(y) * exp(-2.0 * nu * t); });
    tg.velocity[1] = ClosedFormField::from_expression(
        "tg_v", kDependsX | kDependsY | kDependsT,
        [nu](const auto& x, const auto& y, const auto&, const auto& t) { return -(cos(x) * sin(y) * exp(-2.0 * nu * t)); });
    tg.velocity[2] = ClosedFormField::constant(0.0).renamed("tg_w");
    tg.pressure = ClosedFormField::from_expression(
        "tg_p", kDependsX | kDependsY | kDependsT, [nu, rho](const auto& x, const auto& y, const auto&, const auto& t) {
            return (rho / 4.0) * (cos(2.0 * x) + cos(2.0 * y)) * exp(-4.0 * nu * t);
        });
    return tg;
}

}  // namespace pns
