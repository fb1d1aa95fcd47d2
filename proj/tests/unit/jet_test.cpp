#include <gtest/gtest.h>

#include <cmath>

#include "pns/jet.hpp"

using namespace pns;

namespace {

using J4 = Jet<4>;

// d^m/dw^m of sin(w)/w by the series sum (-1)^k w^(2k) / (2k+1)!, differentiated term-wise.
double sinc_series(double w, int m) {
    double sum = 0.0, fact = 1.0;
    for (int k = 0; k < 30; ++k) {
        if (k > 0) fact *= (2.0 * k) * (2.0 * k + 1.0);
        const int p = 2 * k;
        if (p < m) continue;
        double falling = 1.0;
        for (int i = 0; i < m; ++i) falling *= (p - i);
        sum += (k % 2 ? -1.0 : 1.0) * falling * std::pow(w, p - m) / fact;
    }
    return sum;
}

}  // namespace

TEST(Jet, SlotCount) {
    EXPECT_EQ(Jet<0>::kSize, 1u);
    EXPECT_EQ(Jet<1>::kSize, 5u);
    EXPECT_EQ(Jet<2>::kSize, 15u);
    EXPECT_EQ(Jet<4>::kSize, 70u);
}

TEST(Jet, PolynomialPartials) {
    const auto x = J4::variable(0, 1.5);
    const auto y = J4::variable(1, -2.0);
    const auto t = J4::variable(3, 0.5);
    // p = x^3 y^2 + 4 x t
    const auto p = x * x * x * y * y + 4.0 * x * t;
    EXPECT_DOUBLE_EQ(p.value(), 1.5 * 1.5 * 1.5 * 4.0 + 4.0 * 1.5 * 0.5);
    EXPECT_DOUBLE_EQ(p.derivative({1, 0, 0, 0}), 3 * 1.5 * 1.5 * 4.0 + 4 * 0.5);
    EXPECT_DOUBLE_EQ(p.derivative({2, 1, 0, 0}), 6 * 1.5 * 2 * -2.0);
    EXPECT_DOUBLE_EQ(p.derivative({1, 0, 0, 1}), 4.0);
    EXPECT_DOUBLE_EQ(p.derivative({3, 1, 0, 0}), 6 * 2 * -2.0);
    EXPECT_DOUBLE_EQ(p.derivative({0, 0, 1, 0}), 0.0);
}

TEST(Jet, ElementaryFunctions) {
    const double w = 0.7;
    const auto x = J4::variable(0, w);
    const auto s = sin(x), c = cos(x), e = exp(x), l = log(x), r = reciprocal(x), q = pow(x, 1.0 / 6.0);
    for (int m = 0; m <= 4; ++m) {
        const MultiIndex a{m, 0, 0, 0};
        const double sd[] = {std::sin(w), std::cos(w), -std::sin(w), -std::cos(w), std::sin(w)};
        EXPECT_NEAR(s.derivative(a), sd[m], 1e-14);
        EXPECT_NEAR(c.derivative(a), sd[(m + 1) % 4], 1e-14);
        EXPECT_NEAR(e.derivative(a), std::exp(w), 1e-14);
        double coef = 1.0, rc = 1.0;
        for (int j = 0; j < m; ++j) {
            coef *= (1.0 / 6.0 - j);
            rc *= -(j + 1.0);
        }
        EXPECT_NEAR(q.derivative(a), coef * std::pow(w, 1.0 / 6.0 - m), 1e-12);
        EXPECT_NEAR(r.derivative(a), rc * std::pow(w, -1.0 - m), 1e-12);
        if (m >= 1) {
            double lf = 1.0;
            for (int j = 1; j < m; ++j) lf *= j;
            EXPECT_NEAR(l.derivative(a), (m % 2 ? 1.0 : -1.0) * lf * std::pow(w, -m), 1e-11);
        }
    }
    EXPECT_NEAR(l.value(), std::log(w), 1e-15);
}

TEST(Jet, QuotientRule) {
    const auto x = J4::variable(0, 0.3);
    const auto y = J4::variable(1, 1.7);
    const auto q = x / y;
    EXPECT_NEAR(q.derivative({1, 1, 0, 0}), -1 / (1.7 * 1.7), 1e-14);
    EXPECT_NEAR(q.derivative({0, 3, 0, 0}), -6 * 0.3 / std::pow(1.7, 4), 1e-13);
}

TEST(Jet, SincBothBranchesAgree) {
    for (double w : {0.0, 0.1, 0.49, 0.51, 1.0, 3.0, -2.2}) {
        const auto s = sinc(J4::variable(2, w));
        for (int m = 0; m <= 4; ++m)
            EXPECT_NEAR(s.derivative({0, 0, m, 0}), sinc_series(w, m), 1e-12) << "w=" << w << " m=" << m;
    }
    EXPECT_DOUBLE_EQ(sinc(J4::variable(2, 0.0)).value(), 1.0);
}

TEST(Jet, IntegerPowerAtZero) {
    const auto s = pow(J4::variable(0, 0.0), 2.0);
    EXPECT_EQ(s.derivative({2, 0, 0, 0}), 2.0);
    EXPECT_EQ(s.derivative({3, 0, 0, 0}), 0.0);
}

TEST(Jet, UnivariateConfinesInfinities) {
    const double inf = std::numeric_limits<double>::infinity();
    const auto f = J4::univariate(3, {0.0, inf, inf, inf, inf});
    const auto p = f * sin(J4::variable(0, 0.4));
    EXPECT_EQ(p.derivative({2, 0, 0, 0}), 0.0);
    EXPECT_FALSE(std::isfinite(p.derivative({0, 0, 0, 1})));
}
