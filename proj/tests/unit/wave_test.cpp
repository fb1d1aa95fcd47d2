#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pns/error.hpp"
#include "pns/wave.hpp"

using namespace pns;

namespace {

ErrorKind kind_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected pns::Error";
    return ErrorKind::Io;
}

ClosedFormField random_field(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> U(-1.5, 1.5);
    const double a = U(rng), b = U(rng), c = U(rng), d = U(rng), e = U(rng);
    return ClosedFormField::from_expression("r", kDependsAll, [=](const auto& x, const auto& y, const auto& z, const auto& t) {
        return a * sin(b * x + y) * cos(c * z - t) + d * exp(0.3 * e * t) * cos(x + e * y) + x * y * t * t;
    });
}

std::vector<Point4> random_points(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> U(0.0, 2.0);
    std::vector<Point4> pts;
    for (int i = 0; i < n; ++i) pts.push_back({3 * U(rng), 3 * U(rng), 3 * U(rng), U(rng)});
    return pts;
}

ClosedFormField standing_wave(double c, double amp) {
    const double w = std::sqrt(3 * c);
    return ClosedFormField::from_expression("wave", kDependsAll, [=](const auto& x, const auto& y, const auto& z, const auto& t) {
        return amp * sin(x) * sin(y) * sin(z) * cos(w * t);
    });
}

}  // namespace

TEST(Wave, IdentityOnRandomFields) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 20; ++trial) {
        const auto uz = random_field(rng), u = random_field(rng);
        const WaveParams w{0.3 + trial * 0.2};
        for (const auto& p : random_points(rng, 10)) {
            const Point3 x{p.x, p.y, p.z};
            const double a = l3_residual(uz, u, w, x, p.t), b = l3w_residual(uz, u, w, x, p.t),
                         c = wave_residual(u, w, x, p.t);
            const double scale = std::max({std::abs(a), std::abs(b), std::abs(w.c * c), 1.0});
            EXPECT_LE(std::abs(a + b - w.c * c), 1e-12 * scale);
        }
    }
}

TEST(Wave, ManufacturedSolution) {
    std::mt19937_64 rng(5);
    for (double c : {0.5, 1.0, 2.7}) {
        const auto u = standing_wave(c, 1.0);
        for (const auto& p : random_points(rng, 20)) EXPECT_LE(std::abs(wave_residual(u, {c}, {p.x, p.y, p.z}, p.t)), 1e-10);
    }
}

TEST(Wave, ZeroFields) {
    const auto zero = ClosedFormField::constant(0.0);
    const WaveParams w{1.0};
    EXPECT_EQ(l3_residual(zero, zero, w, {1, 2, 3}, 0.5), 0.0);
    EXPECT_EQ(l3w_residual(zero, zero, w, {1, 2, 3}, 0.5), 0.0);
    EXPECT_EQ(wave_residual(zero, w, {1, 2, 3}, 0.5), 0.0);
    const std::vector<Point4> pts{{1, 2, 3, 0.5}};
    const auto r = reduction_check(zero, zero, Axis::y, w, pts);
    EXPECT_EQ(r.max_l3, 0.0);
    EXPECT_EQ(r.max_wave, 0.0);
    EXPECT_TRUE(r.implication_holds);
}

TEST(Wave, Linearity) {
    std::mt19937_64 rng(8);
    const auto a = random_field(rng), b = random_field(rng), c = random_field(rng), d = random_field(rng);
    const WaveParams w{1.7};
    const Point3 x{0.4, 1.1, 2.0};
    const double lhs = l3_residual(a + 2.0 * b, c - d, w, x, 0.3);
    const double rhs = l3_residual(a, c, w, x, 0.3) + 2.0 * l3_residual(b, ClosedFormField::constant(0.0), w, x, 0.3) -
                       l3_residual(ClosedFormField::constant(0.0), d, w, x, 0.3);
    EXPECT_NEAR(lhs, rhs, 1e-11 * std::max(1.0, std::abs(lhs)));
}

TEST(Wave, ConstructedPairSatisfiesImplication) {
    std::mt19937_64 rng(2);
    for (double c : {0.4, 1.0, 3.0}) {
        const auto u = standing_wave(c, 1.0);
        const auto uz = standing_wave(c, -1.0 / 3.0);
        const auto pts = random_points(rng, 50);
        const auto r = reduction_check(uz, u, Axis::y, {c}, pts, 1e-8);
        EXPECT_LE(r.max_l3, 1e-10);
        EXPECT_LE(r.max_l3w, 1e-10);
        EXPECT_EQ(r.applicable, 50u);
        EXPECT_TRUE(r.implication_holds);
        EXPECT_LE(r.identity_gap, 1e-12);
    }
}

TEST(Wave, UnrelatedFieldsNotApplicable) {
    std::mt19937_64 rng(3);
    const auto r = reduction_check(random_field(rng), random_field(rng), Axis::x, {1.3}, random_points(rng, 30));
    EXPECT_GT(r.max_l3, 1e-2);
    EXPECT_GT(r.max_l3w, 1e-2);
    EXPECT_EQ(r.applicable, 0u);
    EXPECT_FALSE(r.implication_holds);
    EXPECT_NE(r.notes.find("not applicable"), std::string::npos);
}

TEST(Wave, ZDirectionFlagged) {
    const auto u = standing_wave(1.0, 1.0);
    const std::vector<Point4> pts{{1, 1, 1, 0.2}};
    EXPECT_NE(reduction_check(standing_wave(1.0, -1.0 / 3.0), u, Axis::z, {1.0}, pts).notes.find("extrapolated"),
              std::string::npos);
}

TEST(Wave, CTimeForm) {
    std::mt19937_64 rng(4);
    const auto uz = random_field(rng), u = random_field(rng);
    const Point3 x{0.3, 0.2, 0.1};
    // the two forms coincide at c = 1
    EXPECT_EQ(l3_residual(uz, u, {1.0, L3Form::c2_laplacian}, x, 0.4), l3_residual(uz, u, {1.0, L3Form::c_time}, x, 0.4));
    const double c = 2.0, uz4 = uz.derivative({x.x, x.y, x.z, 0.4}, {0, 0, 0, 4});
    const double lap = u.derivative({x.x, x.y, x.z, 0.4}, {2, 0, 0, 0}) + u.derivative({x.x, x.y, x.z, 0.4}, {0, 2, 0, 0}) +
                       u.derivative({x.x, x.y, x.z, 0.4}, {0, 0, 2, 0});
    EXPECT_NEAR(l3_residual(uz, u, {c, L3Form::c_time}, x, 0.4), c * uz4 - lap, 1e-12 * std::abs(c * uz4 - lap));
}

TEST(Wave, Errors) {
    const auto zero = ClosedFormField::constant(0.0);
    EXPECT_EQ(kind_of([&] { reduction_check(zero, zero, Axis::y, {1.0}, {}); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([&] { wave_residual(zero, {0.0}, {}, 0.0); }), ErrorKind::InvalidArgument);
    EXPECT_EQ(kind_of([&] { wave_residual(zero, {-1.0}, {}, 0.0); }), ErrorKind::InvalidArgument);
}
