#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pns/closed_form.hpp"
#include "pns/error.hpp"
#include "pns/spectral.hpp"

using namespace pns;

namespace {

constexpr double kPi = std::numbers::pi;

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected pns::Error";
    return ErrorKind::Io;
}

Point4 shifted(Point4 p, int var, double h) {
    (var == 0 ? p.x : var == 1 ? p.y : var == 2 ? p.z : p.t) += h;
    return p;
}

MultiIndex raised(MultiIndex a, int var) {
    (var == 0 ? a.x : var == 1 ? a.y : var == 2 ? a.z : a.t) += 1;
    return a;
}

// Five-point central difference in `var` of the partial `a`.
double fd(const ClosedFormField& f, const Point4& p, const MultiIndex& a, int var, double h = 1e-3) {
    auto g = [&](double s) { return f.derivative(shifted(p, var, s), a); };
    return (-g(2 * h) + 8 * g(h) - 8 * g(-h) + g(-2 * h)) / (12 * h);
}

// Checks every partial of order 1..4 against a difference of one order lower.
void check_all_partials(const ClosedFormField& f, const Point4& p, double tol = 1e-6) {
    for (int order = 0; order < 4; ++order)
        for (int x = 0; x <= order; ++x)
            for (int y = 0; x + y <= order; ++y)
                for (int z = 0; x + y + z <= order; ++z) {
                    const MultiIndex a{x, y, z, order - x - y - z};
                    for (int var = 0; var < 4; ++var) {
                        const double exact = f.derivative(p, raised(a, var));
                        const double approx = fd(f, p, a, var);
                        EXPECT_NEAR(exact, approx, tol * std::max(1.0, std::abs(exact)))
                            << f.name() << " partial (" << x << y << z << order - x - y - z << ")+" << var;
                    }
                }
}

double bisect(auto&& g, double a, double b) {
    double ga = g(a);
    for (int it = 0; it < 200; ++it) {
        const double m = 0.5 * (a + b);
        const double gm = g(m);
        if ((gm < 0) == (ga < 0)) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

TEST(F4, KnownValues) {
    const F4Params p;
    EXPECT_EQ(f4_value(p, 1.0, 0), 0.0);
    EXPECT_NEAR(f4_value(p, 0.0, 0), std::pow(6.0, 1.0 / 6.0), 1e-15);
    EXPECT_NEAR(f4_value(p, 0.0, 0), 1.348006, 1e-6);
    EXPECT_EQ(f4_value(p, 2.0, 0), 0.0);
    EXPECT_EQ(f4_value(p, 2.0, 3), 0.0);
}

TEST(F4, DerivativesMatchPrintedForms) {
    // printed first and second derivatives with X = 6 C1 sqrt(c4) - 6 t sqrt(c4)
    const F4Params p{2.5, 1.5, +1};
    for (double t : {0.0, 0.4, 1.2, 1.49}) {
        const double X = 6 * p.C1 * std::sqrt(p.c4) - 6 * t * std::sqrt(p.c4);
        EXPECT_NEAR(std::abs(f4_value(p, t, 1)), std::sqrt(p.c4) / std::pow(X, 5.0 / 6.0), 1e-12);
        EXPECT_NEAR(std::abs(f4_value(p, t, 2)), 5 * p.c4 / std::pow(X, 11.0 / 6.0), 1e-10);
    }
}

TEST(F4, OdeIdentityAtRandomTimes) {
    std::mt19937_64 rng(1);
    for (int branch : {+1, -1}) {
        const F4Params p{1.7, 2.0, branch};
        std::uniform_real_distribution<double> t_dist(0.0, p.C1);
        for (int i = 0; i < 100; ++i) {
            const double t = t_dist(rng);
            const double d = f4_value(p, t, 1), v = f4_value(p, t, 0);
            EXPECT_NEAR(d * d * std::pow(v, 10) / p.c4, 1.0, 1e-10);
        }
    }
}

TEST(F4, Errors) {
    const F4Params p;
    EXPECT_EQ(kind_of([&] { f4_value(p, 1.0, 1); }), ErrorKind::SingularPoint);
    EXPECT_EQ(kind_of([&] { f4_value(p, -0.1, 0); }), ErrorKind::OutOfDomain);
    EXPECT_EQ(kind_of([&] { f4_value(F4Params{0.0, 1.0, 1}, 0.5, 0); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([&] { f4_value(F4Params{1.0, 1.0, 2}, 0.5, 0); }), ErrorKind::InvalidArgument);
}

TEST(F4, FieldMatchesScalar) {
    const F4Params p{1.0, 1.0, -1};
    const auto f = f4_field(p);
    for (int m = 0; m <= 4; ++m) EXPECT_DOUBLE_EQ(f.derivative({0, 0, 0, 0.3}, {0, 0, 0, m}), f4_value(p, 0.3, m));
    EXPECT_EQ(kind_of([&] { f.derivative({0, 0, 0, 1.0}, {0, 0, 0, 1}); }), ErrorKind::SingularPoint);
    EXPECT_EQ(f.value({0, 0, 0, 1.0}), 0.0);
}

TEST(F4, DerivativesUnboundedBeforeC1) {
    const F4Params p;
    EXPECT_GT(std::abs(f4_value(p, 1.0 - 1e-8, 1)), 1e6);
}

TEST(Logistic, PureExponential) {
    const LogisticParams p{0.0, 1.0, 1.0, 1.0, 0.0};
    for (double t = 0.0; t <= 1.0; t += 0.05) {
        const double f = logistic_value(p, t);
        EXPECT_NEAR(f, std::exp(t), 1e-14 * std::exp(t));
        const double h = 1e-4;
        const double df = (logistic_value(p, t + h) - logistic_value(p, t - h)) / (2 * h);
        EXPECT_LE(std::abs(p.A2 * df - f * (p.A1 - 2 * p.A * f)), 1e-7);
        EXPECT_DOUBLE_EQ(logistic_rhs(p, f), f);
    }
}

TEST(Logistic, DirectSubstitution) {
    const LogisticParams p{-1.0, 1.9, 1.0, 1.0, 0.0};
    EXPECT_NEAR(logistic_value(p, 0.0), -19.0, 1e-12);
}

TEST(Logistic, MatchesRungeKutta) {
    const LogisticParams p{0.3, -0.8, 1.4, 2.0, 0.0};
    double f = logistic_value(p, 0.0), t = 0.0;
    const double h = 1e-3;
    for (int s = 0; s < 2000; ++s) {
        const double k1 = logistic_rhs(p, f);
        const double k2 = logistic_rhs(p, f + 0.5 * h * k1);
        const double k3 = logistic_rhs(p, f + 0.5 * h * k2);
        const double k4 = logistic_rhs(p, f + h * k3);
        f += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        t += h;
        if (s % 100 == 99) EXPECT_NEAR(f, logistic_value(p, t), 1e-8 * std::abs(f));
    }
}

TEST(Logistic, BlowupTime) {
    const auto p = LogisticParams::from_initial_condition(-1.0, 1.0, 1.0, 0.1);
    EXPECT_NEAR(p.A1, 1.9, 1e-15);
    const double t = logistic_blowup_time(p);
    const double oracle = bisect([&](double s) { return logistic_denominator(p, s); }, -1.0, 0.0);
    EXPECT_NEAR(t, oracle, 1e-12);
    EXPECT_NEAR(t, -std::log(2 / 1.9) / 1.9, 1e-15);
    EXPECT_LE(std::abs(logistic_denominator(p, t)), 1e-12);
    EXPECT_EQ(kind_of([&] { logistic_value(p, t); }), ErrorKind::BlowupPoint);
}

TEST(Logistic, NoRealBlowup) {
    LogisticParams p{0.0, 1.0, 1.0, 1.0, 0.1};
    EXPECT_EQ(kind_of([&] { logistic_blowup_time(p); }), ErrorKind::NoRealBlowup);
}

TEST(Logistic, RandomBlowupTimesMatchBisection) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> A(-3.0, -0.2), A2(0.3, 3.0), C1(0.2, 3.0), eps(0.01, 1.0);
    for (int i = 0; i < 20; ++i) {
        const auto p = LogisticParams::from_initial_condition(A(rng), A2(rng), C1(rng), eps(rng));
        const double t = logistic_blowup_time(p);
        const double oracle = bisect([&](double s) { return logistic_denominator(p, s); }, t - 5.0, t + 5.0);
        EXPECT_NEAR(t, oracle, 1e-10);
        EXPECT_LE(std::abs(logistic_denominator(p, t)), 1e-12);
    }
}

TEST(Lattice, WallsAndDecay) {
    const LatticeParams p{2.0, 1.5};
    const double w = p.n * kPi;
    for (double y : {0.3, 1.1})
        for (double t : {0.0, 0.5}) {
            const double eta_term = p.eta * y * std::pow(1 - t, 1.0 / 6.0);
            EXPECT_NEAR(lattice_velocity(p, LatticeComponent::x, {w, y, w}, t), eta_term, 1e-12);
        }
    const auto product = lattice_product(p, LatticeComponent::x);
    for (double v : {0.4, 2.0, 5.1}) {
        EXPECT_NEAR(product.value({0.0, v, v * 0.7, 0}), 0.0, 1e-14);
        EXPECT_NEAR(product.value({w, v, v * 0.7, 0}), 0.0, 1e-12);
        EXPECT_NEAR(product.value({v, 0.0, v * 0.7, 0}), 0.0, 1e-14);
        EXPECT_NEAR(product.value({v, v * 0.7, w, 0}), 0.0, 1e-12);
        EXPECT_NEAR(product.value({v, v * 0.7, -w, 0}), 0.0, 1e-12);
    }
}

TEST(Lattice, TimeOneLeavesProduct) {
    const LatticeParams p{1.0, 3.0};
    const Point3 q{0.4, 1.2, 0.9};
    EXPECT_DOUBLE_EQ(lattice_velocity(p, LatticeComponent::y, q, 1.0),
                     lattice_product(p, LatticeComponent::y).value({q.x, q.y, q.z, 1.0}));
    EXPECT_EQ(kind_of([&] { lattice_velocity(p, LatticeComponent::x, q, 1.01); }), ErrorKind::OutOfDomain);
}

TEST(Lattice, VerbatimFormulaAwayFromZero) {
    const LatticeParams p{1.3, 0.7};
    const double x = 0.8, y = 1.9, z = 2.2, t = 0.25;
    const double n2 = p.n * p.n;
    const double a3 = n2 - y * y / (kPi * kPi);
    const double expect = std::sin((n2 - z * z / (kPi * kPi)) * x) * std::sin((n2 - x * x / (kPi * kPi)) * y) *
                              std::sin(a3 * z) / (a3 * z) +
                          p.eta * y * std::pow(1 - t, 1.0 / 6.0);
    EXPECT_NEAR(lattice_velocity(p, LatticeComponent::x, {x, y, z}, t), expect, 1e-14);
}

TEST(Lattice, ContinuousAcrossZ0) {
    const LatticeParams p{1.0, 1.0};
    const double at = lattice_velocity(p, LatticeComponent::x, {0.7, 0.4, 0.0}, 0.3);
    const double left = lattice_velocity(p, LatticeComponent::x, {0.7, 0.4, -1e-9}, 0.3);
    const double right = lattice_velocity(p, LatticeComponent::x, {0.7, 0.4, 1e-9}, 0.3);
    EXPECT_NEAR(left, at, 1e-8);
    EXPECT_NEAR(right, at, 1e-8);
}

TEST(Lattice, PartialsMatchDifferences) {
    LatticeParams p{1.2, 0.8};
    p.F_x = sin_product(2.0);
    check_all_partials(lattice_field(p, LatticeComponent::x), {0.6, 1.1, 0.4, 0.3});
    check_all_partials(lattice_field(p, LatticeComponent::y), {0.9, -0.5, 0.002, 0.1});
}

TEST(Separable, SimpleProducts) {
    const auto u = separable_uz(ClosedFormField::constant(1.0), ClosedFormField::from_expression(
        "sinx", kDependsX, [](const auto& x, const auto&, const auto&, const auto&) { return sin(x); }));
    EXPECT_NEAR(u.derivative({0.3, 0, 0, 0.2}, {1, 0, 0, 0}), std::cos(0.3), 1e-15);
    EXPECT_EQ(u.derivative({0.3, 0, 0, 0.2}, {0, 0, 0, 1}), 0.0);

    const F4Params fp;
    const auto v = separable_uz(f4_field(fp), sin_product());
    const Point4 q{0.4, 1.3, 0.8, 0.35};
    EXPECT_NEAR(v.derivative(q, {0, 0, 1, 1}),
                f4_value(fp, q.t, 1) * std::sin(q.x) * std::sin(q.y) * std::cos(q.z), 1e-13);
}

TEST(Separable, DependencyViolation) {
    EXPECT_EQ(kind_of([] { separable_uz(sin_product(), sin_product()); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([] { separable_uz(f4_field({}), f4_field({})); }), ErrorKind::InvalidArgument);
}

TEST(Separable, PartialsMatchDifferences) {
    const auto v = separable_uz(f4_field({1.0, 1.0, 1}), sin_product());
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> s(0.0, 2 * kPi), t(0.05, 0.8);
    for (int i = 0; i < 5; ++i) {
        const Point4 q{s(rng), s(rng), s(rng), t(rng)};
        const double exact = v.derivative(q, {0, 0, 2, 1});
        const double approx = fd(v, q, {0, 0, 2, 0}, 3);
        EXPECT_NEAR(exact, approx, 1e-6 * std::max(1.0, std::abs(exact)));
        check_all_partials(v, q);
    }
}

TEST(ClosedForm, OrderAboveFourRejected) {
    EXPECT_EQ(kind_of([] { sin_product().derivative({}, {3, 2, 0, 0}); }), ErrorKind::InvalidArgument);
}

TEST(ClosedForm, BumpPartials) {
    check_all_partials(bump_field({3.0, 3.0, 3.0}, 1.5), {3.4, 2.7, 3.2, 0.0});
    EXPECT_EQ(bump_field({3.0, 3.0, 3.0}, 1.0).value({5.0, 3.0, 3.0, 0.0}), 0.0);
}

TEST(TaylorGreen, DivergenceAndEnergy) {
    const auto tg = taylor_green(0.1);
    const auto g = make_grid(32, 1.0);
    for (double t : {0.0, 0.3}) {
        const auto u = tg.sample_velocity(g, t);
        EXPECT_LE(max_abs(divergence(u)), 1e-12);
        const double e = 0.5 * std::pow(norm(u, 2.0), 2);
        EXPECT_NEAR(e / tg.energy(t), 1.0, 1e-10);
        EXPECT_NEAR(tg.energy(t) / tg.energy(0.0), std::exp(-0.4 * t), 1e-14);
    }
    check_all_partials(tg.velocity[0], {0.3, 0.9, 0.0, 0.4});
    check_all_partials(tg.pressure, {0.3, 0.9, 0.0, 0.4});
}
